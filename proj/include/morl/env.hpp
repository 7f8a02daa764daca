#pragma once

#include <memory>

#include "morl/types.hpp"

namespace morl {

struct StepResult {
    Vec obs;
    Vec reward;
    bool terminal = false;
};

/// Episodic environment with vector rewards and feature-vector observations.
/// Passing a null rng to step() selects deterministic expected dynamics
/// (only Minecart mining is stochastic).
class Env {
public:
    virtual ~Env() = default;
    virtual int action_count() const = 0;
    virtual int objective_count() const = 0;
    virtual int obs_dim() const = 0;
    virtual Vec reset(Rng& rng) = 0;
    virtual StepResult step(int action, Rng* rng) = 0;
    virtual std::unique_ptr<Env> clone() const = 0;
};

/// Repeats each agent action k times, summing rewards undiscounted within the
/// skip; terminal short-circuits.
class FrameSkip final : public Env {
public:
    FrameSkip(std::unique_ptr<Env> inner, int k);

    int action_count() const override { return inner_->action_count(); }
    int objective_count() const override { return inner_->objective_count(); }
    int obs_dim() const override { return inner_->obs_dim(); }
    Vec reset(Rng& rng) override { return inner_->reset(rng); }
    StepResult step(int action, Rng* rng) override;
    std::unique_ptr<Env> clone() const override {
        return std::make_unique<FrameSkip>(inner_->clone(), k_);
    }

private:
    std::unique_ptr<Env> inner_;
    int k_;
};

}  // namespace morl
