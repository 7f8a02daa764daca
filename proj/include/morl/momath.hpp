#pragma once

#include <optional>
#include <vector>

#include "morl/types.hpp"

namespace morl {

/// Linear scalarization w . v.
double scalarize(const Vec& v, const WeightVector& w);

/// Optimal scalarized value minus achieved scalarized return for weight w.
double regret(const Vec& g, const WeightVector& w, const Vec& v_star);

/// NSGA-II crowding distance per point, in input order. Boundary points in
/// any objective with non-zero range get infinity; with <= 2 points every
/// point is a boundary. An objective whose range is zero contributes nothing.
Vec crowding_distance(const std::vector<Vec>& signatures);

/// Policy-set bookkeeping operates on the stored value vectors only; entry
/// order is insertion order, so higher index == more recent.

/// True iff some encountered weight scalarizes the candidate above the best
/// stored value minus kappa. An empty set is always improved upon.
bool is_improvement(const Vec& candidate_value,
                    const std::vector<Vec>& stored_values,
                    const std::vector<WeightVector>& encountered_weights,
                    double kappa);

/// Keep-mask over entries: entry i survives iff it is the selected entry for
/// at least one encountered weight, where selection picks the most recent
/// entry within kappa of the scalarized maximum.
std::vector<bool> prune_redundant(const std::vector<Vec>& stored_values,
                                  const std::vector<WeightVector>& encountered_weights,
                                  double kappa);

/// Index of the entry maximizing V . w; exact ties break toward the most
/// recently added entry. Empty set -> nullopt (caller must start fresh).
std::optional<std::size_t> best_policy_for(const std::vector<Vec>& stored_values,
                                           const WeightVector& w);

}  // namespace morl
