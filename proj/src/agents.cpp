#include "morl/agents.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "morl/momath.hpp"

namespace morl {
namespace {

/// Double-DQN vector target for a multi-objective network: bootstrap action is
/// the online net's scalarized argmax under w; its value comes from the target
/// net. Terminal transitions bootstrap nothing.
Vec vector_target(const QNetwork& net, const Transition& t, const Vec* w_in,
                  const WeightVector& w, double gamma) {
    if (t.terminal) return t.reward;
    const int A = net.actions();
    const int N = net.objectives();
    Vec q_online = net.forward(t.next_obs, w_in);
    int best = 0;
    double best_v = -kInf;
    for (int a = 0; a < A; ++a) {
        double v = 0.0;
        for (int n = 0; n < N; ++n) v += q_online[a * N + n] * w[n];
        if (v > best_v) {
            best_v = v;
            best = a;
        }
    }
    Vec q_target = net.forward_target(t.next_obs, w_in);
    Vec y = t.reward;
    for (int n = 0; n < N; ++n) y[n] += gamma * q_target[best * N + n];
    return y;
}

/// Scalarized magnitude of the online TD error at (s, a) against target y.
double td_delta(const QNetwork& net, const Transition& t, const Vec* w_in,
                const WeightVector& w, const Vec& y) {
    const int N = net.objectives();
    Vec q = net.forward(t.obs, w_in);
    double d = 0.0;
    for (int n = 0; n < N; ++n) d += (y[n] - q[t.action * N + n]) * w[n];
    return std::abs(d);
}

/// Conditioned-network family: one multi-objective dueling net taking the
/// weight vector as input, trained with absolute error. The full variant
/// trains each minibatch transition under both the active weight and one
/// weight resampled from the encountered history; the ablations keep a single
/// term each.
class CnAgent final : public Agent {
  public:
    enum class Mode { kFull, kActiveOnly, kSampledOnly };

    CnAgent(Mode mode, int obs_dim, int n_actions, int n_objectives, AgentConfig cfg,
            std::uint64_t seed)
        : Agent(std::move(cfg)), mode_(mode), net_(obs_dim, n_actions, n_objectives,
                                                   conditioned_cfg(cfg_.net), seed) {}

    int act(const Vec& obs, const WeightVector& w, double epsilon, Rng& rng) override {
        Vec q = net_.forward(obs, &w.components());
        return select_action(q, net_.actions(), net_.objectives(), w, epsilon, rng);
    }

    double learn(DiverseBuffer& buffer, const WeightVector& w_t, Rng& rng) override {
        if (buffer.size() < static_cast<std::size_t>(cfg_.batch_size)) return 0.0;
        observe_weight(w_t);
        auto batch = buffer.sample(cfg_.batch_size, rng);
        std::uniform_int_distribution<std::size_t> pick(0, history_.size() - 1);

        net_.zero_grad();
        std::vector<int> slots;
        Vec td_active, td_sampled;
        double loss = 0.0;
        const double inv_b = 1.0 / static_cast<double>(batch.size());
        for (const auto& s : batch) {
            const Transition& t = *s.t;
            // Drawn unconditionally so all three variants consume identical
            // randomness; the ablations just ignore one side.
            const WeightVector& w_j = history_[pick(rng)];

            Vec y_t = vector_target(net_, t, &w_t.components(), w_t, cfg_.gamma);
            Vec y_j = vector_target(net_, t, &w_j.components(), w_j, cfg_.gamma);
            double d_t = td_delta(net_, t, &w_t.components(), w_t, y_t);
            double d_j = td_delta(net_, t, &w_j.components(), w_j, y_j);

            switch (mode_) {
                case Mode::kFull:
                    if (w_j.components() == w_t.components()) {
                        // Equal weights: one full-scale backward instead of two
                        // half-scale ones, so the accumulated gradient is
                        // bit-identical to the active-only update.
                        loss += net_.backward(t.obs, &w_t.components(), t.action, y_t,
                                              LossForm::Absolute, inv_b);
                    } else {
                        loss += net_.backward(t.obs, &w_t.components(), t.action, y_t,
                                              LossForm::Absolute, 0.5 * inv_b);
                        loss += net_.backward(t.obs, &w_j.components(), t.action, y_j,
                                              LossForm::Absolute, 0.5 * inv_b);
                    }
                    break;
                case Mode::kActiveOnly:
                    loss += net_.backward(t.obs, &w_t.components(), t.action, y_t,
                                          LossForm::Absolute, inv_b);
                    break;
                case Mode::kSampledOnly:
                    loss += net_.backward(t.obs, &w_j.components(), t.action, y_j,
                                          LossForm::Absolute, inv_b);
                    break;
            }
            slots.push_back(s.slot);
            td_active.push_back(d_t);
            td_sampled.push_back(d_j);
        }
        net_.apply_update();
        if (mode_ == Mode::kFull)
            buffer.update_priorities(slots, td_active, &td_sampled);
        else if (mode_ == Mode::kActiveOnly)
            buffer.update_priorities(slots, td_active);
        else
            buffer.update_priorities(slots, td_sampled);
        tick_train_step();
        return loss;
    }

  private:
    NetConfig conditioned_cfg(NetConfig n) {
        n.conditioned = true;
        n.cond_dim = 0;
        return n;
    }
    void sync_targets() override { net_.sync_target(); }

    Mode mode_;
    QNetwork net_;
};

/// Scalar UVFA: a conditioned single-output net over pre-scalarized rewards,
/// trained only under weights resampled from the history.
class UvfaAgent final : public Agent {
  public:
    UvfaAgent(int obs_dim, int n_actions, int n_objectives, AgentConfig cfg, std::uint64_t seed)
        : Agent(std::move(cfg)), n_objectives_(n_objectives),
          net_(obs_dim, n_actions, 1, scalar_cfg(cfg_.net, n_objectives), seed) {}

    int act(const Vec& obs, const WeightVector& w, double epsilon, Rng& rng) override {
        Vec q = net_.forward(obs, &w.components());
        return select_action(q, net_.actions(), 1, WeightVector::unit(1, 0), epsilon, rng);
    }

    double learn(DiverseBuffer& buffer, const WeightVector& w_t, Rng& rng) override {
        if (buffer.size() < static_cast<std::size_t>(cfg_.batch_size)) return 0.0;
        observe_weight(w_t);
        auto batch = buffer.sample(cfg_.batch_size, rng);
        std::uniform_int_distribution<std::size_t> pick(0, history_.size() - 1);

        net_.zero_grad();
        std::vector<int> slots;
        Vec td;
        double loss = 0.0;
        const double inv_b = 1.0 / static_cast<double>(batch.size());
        for (const auto& s : batch) {
            const Transition& t = *s.t;
            const WeightVector& w_j = history_[pick(rng)];
            Vec y(1, dot(t.reward, w_j));
            if (!t.terminal) {
                Vec qn = net_.forward(t.next_obs, &w_j.components());
                int best = static_cast<int>(
                    std::max_element(qn.begin(), qn.end()) - qn.begin());
                Vec qt = net_.forward_target(t.next_obs, &w_j.components());
                y[0] += cfg_.gamma * qt[best];
            }
            Vec q = net_.forward(t.obs, &w_j.components());
            td.push_back(std::abs(y[0] - q[t.action]));
            loss += net_.backward(t.obs, &w_j.components(), t.action, y,
                                  LossForm::Absolute, inv_b);
            slots.push_back(s.slot);
        }
        net_.apply_update();
        buffer.update_priorities(slots, td);
        tick_train_step();
        return loss;
    }

  private:
    static NetConfig scalar_cfg(NetConfig n, int n_objectives) {
        n.conditioned = true;
        n.cond_dim = n_objectives;
        return n;
    }
    void sync_targets() override { net_.sync_target(); }

    int n_objectives_;
    QNetwork net_;
};

/// Unconditioned multi-objective learner (scalarized deep Q-learning with a
/// squared-error loss), trained only under the active weight. Also the
/// underlying learner of the multi-network agent, which adds the policy set.
class MnAgent final : public Agent {
  public:
    MnAgent(bool keep_policy_set, int obs_dim, int n_actions, int n_objectives, AgentConfig cfg,
            std::uint64_t seed)
        : Agent(std::move(cfg)), keep_policy_set_(keep_policy_set),
          net_(obs_dim, n_actions, n_objectives, plain_cfg(cfg_.net), seed),
          eval_rng_(seed ^ 0x9e3779b97f4a7c15ULL) {}

    int act(const Vec& obs, const WeightVector& w, double epsilon, Rng& rng) override {
        Vec q = net_.forward(obs, nullptr);
        return select_action(q, net_.actions(), net_.objectives(), w, epsilon, rng);
    }

    double learn(DiverseBuffer& buffer, const WeightVector& w_t, Rng& rng) override {
        if (buffer.size() < static_cast<std::size_t>(cfg_.batch_size)) return 0.0;
        observe_weight(w_t);
        auto batch = buffer.sample(cfg_.batch_size, rng);

        net_.zero_grad();
        std::vector<int> slots;
        Vec td;
        double loss = 0.0;
        const double inv_b = 1.0 / static_cast<double>(batch.size());
        for (const auto& s : batch) {
            const Transition& t = *s.t;
            Vec y = vector_target(net_, t, nullptr, w_t, cfg_.gamma);
            td.push_back(td_delta(net_, t, nullptr, w_t, y));
            loss += net_.backward(t.obs, nullptr, t.action, y, LossForm::Squared, inv_b);
            slots.push_back(s.slot);
        }
        net_.apply_update();
        buffer.update_priorities(slots, td);
        tick_train_step();
        return loss;
    }

    void on_weight_change(const WeightVector& w_old, const WeightVector& w_new,
                          Env& eval_env) override {
        Agent::on_weight_change(w_old, w_new, eval_env);
        if (!keep_policy_set_) return;

        Vec v = evaluate_policy(*this, eval_env, w_old, cfg_.gamma, cfg_.eval_episodes,
                                eval_rng_);
        std::vector<Vec> values;
        values.reserve(policies_.size());
        for (const auto& p : policies_) values.push_back(p.value);

        if (is_improvement(v, values, history_, cfg_.kappa)) {
            policies_.push_back({net_, w_old, v});
            values.push_back(v);
            std::vector<bool> keep = prune_redundant(values, history_, cfg_.kappa);
            std::vector<PolicyEntry> kept;
            for (std::size_t i = 0; i < policies_.size(); ++i)
                if (keep[i]) kept.push_back(std::move(policies_[i]));
            policies_ = std::move(kept);
        }

        values.clear();
        for (const auto& p : policies_) values.push_back(p.value);
        if (auto best = best_policy_for(values, w_new))
            net_.copy_params_from(policies_[*best].net);
    }

    std::size_t policy_count() const { return policies_.size(); }

  private:
    struct PolicyEntry {
        QNetwork net;
        WeightVector w;
        Vec value;
    };

    static NetConfig plain_cfg(NetConfig n) {
        n.conditioned = false;
        n.cond_dim = 0;
        return n;
    }
    void sync_targets() override { net_.sync_target(); }

    bool keep_policy_set_;
    QNetwork net_;
    std::vector<PolicyEntry> policies_;
    Rng eval_rng_;
};

/// One independent scalar learner per objective; actions maximize the
/// weight-blended sum of the per-objective heads.
class NaiveAgent final : public Agent {
  public:
    NaiveAgent(int obs_dim, int n_actions, int n_objectives, AgentConfig cfg, std::uint64_t seed)
        : Agent(std::move(cfg)) {
        nets_.reserve(n_objectives);
        for (int n = 0; n < n_objectives; ++n)
            nets_.emplace_back(obs_dim, n_actions, 1, plain_cfg(cfg_.net),
                               seed + static_cast<std::uint64_t>(n) * 0x1000193ULL);
    }

    int act(const Vec& obs, const WeightVector& w, double epsilon, Rng& rng) override {
        const int A = nets_.front().actions();
        Vec blended(A, 0.0);
        for (std::size_t n = 0; n < nets_.size(); ++n) {
            Vec q = nets_[n].forward(obs, nullptr);
            for (int a = 0; a < A; ++a) blended[a] += w[n] * q[a];
        }
        return select_action(blended, A, 1, WeightVector::unit(1, 0), epsilon, rng);
    }

    double learn(DiverseBuffer& buffer, const WeightVector& w_t, Rng& rng) override {
        if (buffer.size() < static_cast<std::size_t>(cfg_.batch_size)) return 0.0;
        observe_weight(w_t);
        auto batch = buffer.sample(cfg_.batch_size, rng);

        for (auto& net : nets_) net.zero_grad();
        std::vector<int> slots;
        Vec td;
        double loss = 0.0;
        const double inv_b = 1.0 / static_cast<double>(batch.size());
        for (const auto& s : batch) {
            const Transition& t = *s.t;
            double delta = 0.0;
            for (std::size_t n = 0; n < nets_.size(); ++n) {
                QNetwork& net = nets_[n];
                Vec y(1, t.reward[n]);
                if (!t.terminal) {
                    Vec qn = net.forward(t.next_obs, nullptr);
                    int best = static_cast<int>(
                        std::max_element(qn.begin(), qn.end()) - qn.begin());
                    y[0] += cfg_.gamma * net.forward_target(t.next_obs, nullptr)[best];
                }
                Vec q = net.forward(t.obs, nullptr);
                delta += w_t[n] * (y[0] - q[t.action]);
                loss += net.backward(t.obs, nullptr, t.action, y, LossForm::Squared, inv_b);
            }
            td.push_back(std::abs(delta));
            slots.push_back(s.slot);
        }
        for (auto& net : nets_) net.apply_update();
        buffer.update_priorities(slots, td);
        tick_train_step();
        return loss;
    }

  private:
    static NetConfig plain_cfg(NetConfig n) {
        n.conditioned = false;
        n.cond_dim = 0;
        return n;
    }
    void sync_targets() override {
        for (auto& net : nets_) net.sync_target();
    }

    std::vector<QNetwork> nets_;
};

}  // namespace

double epsilon_at(const AgentConfig& cfg, long step) {
    if (cfg.eps_decay_steps <= 0 || step >= cfg.eps_decay_steps) return cfg.eps_end;
    double f = static_cast<double>(step) / static_cast<double>(cfg.eps_decay_steps);
    return cfg.eps_start + f * (cfg.eps_end - cfg.eps_start);
}

int select_action(const Vec& q, int n_actions, int n_objectives, const WeightVector& w,
                  double epsilon, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (unif(rng) < epsilon) {
        std::uniform_int_distribution<int> pick(0, n_actions - 1);
        return pick(rng);
    }
    int best = 0;
    double best_v = -kInf;
    for (int a = 0; a < n_actions; ++a) {
        double v = 0.0;
        for (int n = 0; n < n_objectives; ++n) v += q[a * n_objectives + n] * w[n];
        if (v > best_v) {
            best_v = v;
            best = a;
        }
    }
    return best;
}

void Agent::on_weight_change(const WeightVector& w_old, const WeightVector& w_new, Env&) {
    observe_weight(w_old);
    observe_weight(w_new);
}

void Agent::observe_weight(const WeightVector& w) {
    for (const auto& h : history_)
        if (h == w) return;
    history_.push_back(w);
}

bool Agent::tick_train_step() {
    ++train_steps_;
    if (cfg_.target_sync_period > 0 && train_steps_ % cfg_.target_sync_period == 0) {
        sync_targets();
        return true;
    }
    return false;
}

std::unique_ptr<Agent> make_agent(const std::string& type, int obs_dim, int n_actions,
                                  int n_objectives, const AgentConfig& cfg, std::uint64_t seed) {
    if (type == "cn")
        return std::make_unique<CnAgent>(CnAgent::Mode::kFull, obs_dim, n_actions, n_objectives,
                                         cfg, seed);
    if (type == "cn-active")
        return std::make_unique<CnAgent>(CnAgent::Mode::kActiveOnly, obs_dim, n_actions,
                                         n_objectives, cfg, seed);
    if (type == "cn-uvfa")
        return std::make_unique<CnAgent>(CnAgent::Mode::kSampledOnly, obs_dim, n_actions,
                                         n_objectives, cfg, seed);
    if (type == "uvfa")
        return std::make_unique<UvfaAgent>(obs_dim, n_actions, n_objectives, cfg, seed);
    if (type == "mo")
        return std::make_unique<MnAgent>(false, obs_dim, n_actions, n_objectives, cfg, seed);
    if (type == "mn")
        return std::make_unique<MnAgent>(true, obs_dim, n_actions, n_objectives, cfg, seed);
    if (type == "naive")
        return std::make_unique<NaiveAgent>(obs_dim, n_actions, n_objectives, cfg, seed);
    throw std::invalid_argument("unknown agent type: " + type);
}

Vec evaluate_policy(Agent& agent, Env& env, const WeightVector& w, double gamma, int episodes,
                    Rng& rng) {
    Vec mean(env.objective_count(), 0.0);
    for (int e = 0; e < episodes; ++e) {
        Vec obs = env.reset(rng);
        double disc = 1.0;
        for (;;) {
            int a = agent.act(obs, w, 0.0, rng);
            StepResult sr = env.step(a, nullptr);
            for (std::size_t n = 0; n < mean.size(); ++n) mean[n] += disc * sr.reward[n];
            disc *= gamma;
            if (sr.terminal) break;
            obs = std::move(sr.obs);
        }
    }
    for (double& m : mean) m /= static_cast<double>(episodes);
    return mean;
}

}  // namespace morl
