#include "morl/momath.hpp"

#include <algorithm>
#include <numeric>

namespace morl {

double scalarize(const Vec& v, const WeightVector& w) { return dot(v, w); }

double regret(const Vec& g, const WeightVector& w, const Vec& v_star) {
    return dot(v_star, w) - dot(g, w);
}

Vec crowding_distance(const std::vector<Vec>& signatures) {
    const std::size_t n = signatures.size();
    if (n == 0) return {};
    if (n <= 2) return Vec(n, kInf);

    const std::size_t dims = signatures.front().size();
    for (const Vec& s : signatures)
        if (s.size() != dims) throw std::invalid_argument("crowding_distance: mixed dimensions");

    Vec dist(n, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < dims; ++m) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return signatures[a][m] < signatures[b][m];
        });
        const double lo = signatures[order.front()][m];
        const double hi = signatures[order.back()][m];
        const double range = hi - lo;
        if (range == 0.0) continue;  // objective carries no spread
        dist[order.front()] = kInf;
        dist[order.back()] = kInf;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            const std::size_t i = order[k];
            if (dist[i] == kInf) continue;
            dist[i] += (signatures[order[k + 1]][m] - signatures[order[k - 1]][m]) / range;
        }
    }
    return dist;
}

bool is_improvement(const Vec& candidate_value,
                    const std::vector<Vec>& stored_values,
                    const std::vector<WeightVector>& encountered_weights,
                    double kappa) {
    if (stored_values.empty()) return true;
    for (const WeightVector& w : encountered_weights) {
        double best = -kInf;
        for (const Vec& v : stored_values) best = std::max(best, dot(v, w));
        if (dot(candidate_value, w) > best - kappa) return true;
    }
    return false;
}

namespace {

// Most recent entry within kappa of the scalarized maximum for w.
std::size_t select_for(const std::vector<Vec>& values, const WeightVector& w, double kappa) {
    double best = -kInf;
    for (const Vec& v : values) best = std::max(best, dot(v, w));
    for (std::size_t i = values.size(); i-- > 0;)
        if (dot(values[i], w) >= best - kappa) return i;
    return 0;  // unreachable: the max itself qualifies
}

}  // namespace

std::vector<bool> prune_redundant(const std::vector<Vec>& stored_values,
                                  const std::vector<WeightVector>& encountered_weights,
                                  double kappa) {
    std::vector<bool> keep(stored_values.size(), false);
    if (stored_values.empty()) return keep;
    for (const WeightVector& w : encountered_weights)
        keep[select_for(stored_values, w, kappa)] = true;
    return keep;
}

std::optional<std::size_t> best_policy_for(const std::vector<Vec>& stored_values,
                                           const WeightVector& w) {
    if (stored_values.empty()) return std::nullopt;
    std::size_t best = 0;
    double best_v = dot(stored_values[0], w);
    for (std::size_t i = 1; i < stored_values.size(); ++i) {
        const double v = dot(stored_values[i], w);
        if (v >= best_v) {  // ties favor the newer entry
            best_v = v;
            best = i;
        }
    }
    return best;
}

}  // namespace morl
