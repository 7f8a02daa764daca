#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "morl/types.hpp"

namespace morl {

enum class LossForm { Absolute, Squared };

struct NetConfig {
    std::vector<int> hidden = {128, 128};  // shared feature stack widths
    int head_hidden = 128;                 // advantage/value stream hidden width
    bool conditioned = false;              // concat the weight vector into the head input
    int cond_dim = 0;                      // weight-input width; 0 -> objective count
    double lr = 0.02;
    double momentum = 0.9;
};

/// Dense multi-objective dueling Q-network with manual reverse-mode gradients
/// and Nesterov-momentum SGD. Output is an actions x objectives matrix
/// combined as Q(s,a) = V(s) + A(s,a) - mean_a' A(s,a').
class QNetwork {
public:
    QNetwork(int obs_dim, int n_actions, int n_objectives, NetConfig cfg, std::uint64_t seed);

    int obs_dim() const { return obs_dim_; }
    int actions() const { return n_actions_; }
    int objectives() const { return n_objectives_; }
    bool conditioned() const { return cfg_.conditioned; }

    int cond_dim() const { return cond_dim_; }

    /// Row-major actions x objectives Q matrix from the online network. For
    /// conditioned networks, w is the weight input concatenated into the head.
    Vec forward(const Vec& obs, const Vec* w = nullptr) const;
    Vec forward_target(const Vec& obs, const Vec* w = nullptr) const;

    /// Online value-stream output V(s), one entry per objective; the dueling
    /// combination guarantees mean_a Q(s,a,n) == V(s,n).
    Vec value_stream(const Vec& obs, const Vec* w = nullptr) const;

    void zero_grad();

    /// Accumulates the gradient of scale * (1/N) sum_n loss(target_n - Q(action, n))
    /// over online parameters; loss restricted to the taken action's row.
    /// Returns the (scaled) loss value.
    double backward(const Vec& obs, const Vec* w, int action,
                    const Vec& target, LossForm loss, double scale = 1.0);

    /// Nesterov step on the accumulated gradients, then clears them.
    void apply_update();

    void sync_target();

    void copy_params_from(const QNetwork& other);  // online and target both

    void save(std::ostream& out) const;
    void load(std::istream& in);

    /// Per-parameter access for finite-difference testing: flat online
    /// parameter vector, in a fixed layout.
    Vec flat_params() const;
    void set_flat_params(const Vec& p);
    Vec flat_grad() const;

private:
    struct Dense {
        int in = 0, out = 0;
        Vec W, b;       // W row-major out x in
        Vec gW, gb;     // accumulated gradients
        Vec vW, vb;     // momentum slots
    };

    struct Trace;  // per-layer activations cached during backward

    Vec run(const std::vector<Dense>& layers, const Vec& obs, const Vec* w,
            Trace* trace) const;
    static void nesterov(Vec& p, Vec& v, const Vec& g, double lr, double mu);

    int obs_dim_, n_actions_, n_objectives_, cond_dim_;
    NetConfig cfg_;
    // layout: feature stack, then adv hidden, adv out, value hidden, value out
    std::vector<Dense> online_;
    std::vector<Dense> target_;
    std::size_t n_feature_;
};

}  // namespace morl
