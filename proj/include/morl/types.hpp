#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace morl {

using Vec = std::vector<double>;
using Rng = std::mt19937_64;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Point on the N-simplex: non-negative components summing to one.
class WeightVector {
public:
    WeightVector() = default;

    explicit WeightVector(Vec components) : c_(std::move(components)) {
        double sum = 0.0;
        for (double v : c_) {
            if (v < 0.0) throw std::invalid_argument("WeightVector: negative component");
            sum += v;
        }
        if (c_.empty() || std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("WeightVector: components must sum to 1");
    }

    /// Builds a weight vector from arbitrary non-negative values, normalizing the sum.
    static WeightVector normalized(Vec raw) {
        double sum = 0.0;
        for (double v : raw) sum += v;
        if (sum <= 0.0) throw std::invalid_argument("WeightVector: non-positive sum");
        for (double& v : raw) v /= sum;
        // Renormalization can leave the sum a few ulp off one; pin it down.
        double s2 = 0.0;
        for (double v : raw) s2 += v;
        raw.back() += 1.0 - s2;
        return WeightVector(std::move(raw));
    }

    static WeightVector unit(std::size_t n, std::size_t i) {
        Vec c(n, 0.0);
        c.at(i) = 1.0;
        return WeightVector(std::move(c));
    }

    std::size_t size() const { return c_.size(); }
    double operator[](std::size_t i) const { return c_[i]; }
    const Vec& components() const { return c_; }

    bool operator==(const WeightVector& o) const { return c_ == o.c_; }
    bool operator!=(const WeightVector& o) const { return !(*this == o); }

private:
    Vec c_;
};

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double dot(const Vec& v, const WeightVector& w) { return dot(v, w.components()); }

/// Samples from Dirichlet(alpha=1,...,1), i.e. uniform on the simplex.
inline WeightVector sample_dirichlet(std::size_t n, Rng& rng) {
    std::exponential_distribution<double> exp1(1.0);
    Vec raw(n);
    for (double& v : raw) v = exp1(rng);
    return WeightVector::normalized(std::move(raw));
}

}  // namespace morl
