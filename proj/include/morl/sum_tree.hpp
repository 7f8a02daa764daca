#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace morl {

/// Flat binary sum tree over non-negative masses, O(log n) update and
/// prefix-sum sampling.
class SumTree {
public:
    explicit SumTree(std::size_t capacity) : cap_(1) {
        while (cap_ < capacity) cap_ <<= 1;
        tree_.assign(2 * cap_, 0.0);
    }

    std::size_t capacity() const { return cap_; }
    double total() const { return tree_[1]; }
    double get(std::size_t i) const { return tree_[cap_ + i]; }

    void set(std::size_t i, double mass) {
        if (i >= cap_) throw std::out_of_range("SumTree::set");
        std::size_t node = cap_ + i;
        tree_[node] = mass;
        for (node >>= 1; node >= 1; node >>= 1)
            tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
    }

    /// Index whose cumulative mass interval contains prefix in [0, total()).
    std::size_t find(double prefix) const {
        std::size_t node = 1;
        while (node < cap_) {
            const std::size_t left = 2 * node;
            if (prefix < tree_[left]) {
                node = left;
            } else {
                prefix -= tree_[left];
                node = left + 1;
            }
        }
        return node - cap_;
    }

private:
    std::size_t cap_;
    std::vector<double> tree_;
};

}  // namespace morl
