#pragma once

#include <memory>
#include <string>
#include <vector>

#include "morl/env.hpp"
#include "morl/net.hpp"
#include "morl/replay.hpp"
#include "morl/types.hpp"

namespace morl {

/// Shared learner settings. Epsilon anneals linearly from eps_start to eps_end
/// over eps_decay_steps agent steps, then stays at eps_end.
struct AgentConfig {
    int batch_size = 16;
    double gamma = 0.95;
    double eps_start = 0.1;
    double eps_end = 0.01;
    long eps_decay_steps = 10000;
    int target_sync_period = 150;
    double kappa = 0.0;       // policy-set improvement tolerance
    int eval_episodes = 5;    // greedy rollouts used to estimate a policy's value
    NetConfig net;
};

double epsilon_at(const AgentConfig& cfg, long step);

/// Epsilon-greedy action over a row-major actions x objectives Q matrix,
/// scalarized by w. Greedy ties break toward the lowest action id.
int select_action(const Vec& q, int n_actions, int n_objectives, const WeightVector& w,
                  double epsilon, Rng& rng);

class Agent {
  public:
    virtual ~Agent() = default;

    virtual int act(const Vec& obs, const WeightVector& w, double epsilon, Rng& rng) = 0;

    /// One train step on a sampled minibatch; returns the mean batch loss.
    /// Does nothing (returns 0) until the buffer holds a full batch.
    virtual double learn(DiverseBuffer& buffer, const WeightVector& w_active, Rng& rng) = 0;

    /// Called when the active weight changes from w_old to w_new. eval_env is a
    /// dedicated environment instance the agent may roll out for evaluation.
    virtual void on_weight_change(const WeightVector& w_old, const WeightVector& w_new,
                                  Env& eval_env);

    /// Record an encountered weight; duplicates (exact equality) are dropped.
    void observe_weight(const WeightVector& w);
    const std::vector<WeightVector>& weight_history() const { return history_; }

    const AgentConfig& config() const { return cfg_; }

  protected:
    explicit Agent(AgentConfig cfg) : cfg_(std::move(cfg)) {}

    /// Counts a completed train step and syncs the target network when due.
    bool tick_train_step();

    AgentConfig cfg_;
    std::vector<WeightVector> history_;
    long train_steps_ = 0;

  private:
    virtual void sync_targets() = 0;
};

/// agent types: "mo", "cn", "cn-active", "cn-uvfa", "uvfa", "mn", "naive"
std::unique_ptr<Agent> make_agent(const std::string& type, int obs_dim, int n_actions,
                                  int n_objectives, const AgentConfig& cfg, std::uint64_t seed);

/// Greedy (epsilon = 0) discounted multi-objective return of an agent's current
/// policy under weight w, averaged over `episodes` rollouts. The environment's
/// stochastic transitions use expected values (rng = nullptr).
Vec evaluate_policy(Agent& agent, Env& env, const WeightVector& w, double gamma, int episodes,
                    Rng& rng);

}  // namespace morl
