#pragma once

#include <algorithm>
#include <vector>

#include "morl/types.hpp"

namespace testutil {

/// Straight-from-the-definition NSGA-II crowding distance, written
/// independently of the library version: per objective, sort the points,
/// give boundaries infinite distance, and add normalized neighbor gaps.
inline morl::Vec brute_force_crowding(const std::vector<morl::Vec>& pts) {
    using morl::Vec;
    const std::size_t n = pts.size();
    if (n == 0) return {};
    if (n <= 2) return Vec(n, morl::kInf);
    const std::size_t dims = pts.front().size();
    Vec dist(n, 0.0);
    for (std::size_t d = 0; d < dims; ++d) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return pts[a][d] < pts[b][d]; });
        double range = pts[order.back()][d] - pts[order.front()][d];
        // A zero-range objective contributes nothing, boundaries included.
        if (range <= 0.0) continue;
        dist[order.front()] = morl::kInf;
        dist[order.back()] = morl::kInf;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            std::size_t self = order[i];
            if (dist[self] == morl::kInf) continue;
            dist[self] += (pts[order[i + 1]][d] - pts[order[i - 1]][d]) / range;
        }
    }
    return dist;
}

}  // namespace testutil
