#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "morl/dst.hpp"
#include "morl/minecart.hpp"
#include "morl/types.hpp"

namespace morl {

struct OracleResult {
    Vec value;
    int policy_id = -1;
    std::string policy_name;
};

/// Optimal-value oracle backed by a finite family of candidate value vectors;
/// optimal(w) is the scalarized argmax (ties to the lowest id).
class Oracle {
public:
    virtual ~Oracle() = default;

    OracleResult optimal(const WeightVector& w) const;
    const std::vector<Vec>& candidate_values() const { return values_; }
    const std::vector<std::string>& candidate_names() const { return names_; }

protected:
    std::vector<Vec> values_;
    std::vector<std::string> names_;
};

/// Exact DP over the DST grid: per reachable treasure, the shortest-path
/// discounted value, plus a bounded never-collect candidate.
class DstOracle : public Oracle {
public:
    DstOracle(const DstMap& map, double gamma);
};

/// Scripted-policy-family evaluation for Minecart: per mine a fast and a slow
/// mine-until-full round trip, plus a minimal leave-and-return policy, all
/// simulated with deterministic expected-ore dynamics. Exact for the default
/// configuration's policy structure; a lower bound for arbitrary configs.
class MinecartOracle : public Oracle {
public:
    MinecartOracle(const MinecartConfig& cfg, double gamma, int frame_skip);
};

/// Deterministic simplex grid with at least min_points points (subdivision
/// chosen as the smallest one reaching the requested count).
std::vector<WeightVector> simplex_grid(std::size_t n_objectives, std::size_t min_points);

struct PartitionEntry {
    WeightVector w;
    int policy_id;
};

/// Labels each grid point with the oracle's argmax policy id.
std::vector<PartitionEntry> partition_simplex(const Oracle& oracle, std::size_t min_points);

void write_partition_csv(const std::vector<PartitionEntry>& partition,
                         const Oracle& oracle, std::ostream& out);

/// Builds a staircase DST map whose treasure values make every treasure a CCS
/// vertex with equal-width optimality regions under the given discount.
DstMap make_dst_map(int n_treasures, double gamma);

}  // namespace morl
