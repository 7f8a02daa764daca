#include "morl/schedule.hpp"

#include <stdexcept>

namespace morl {

WeightSchedule::WeightSchedule(Config cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    if (cfg_.mode == ScheduleMode::Fixed) {
        if (!cfg_.fixed) throw std::invalid_argument("WeightSchedule: fixed mode needs a weight");
        current_ = *cfg_.fixed;
    } else {
        current_ = sample_dirichlet(cfg_.n_objectives, rng_);
    }
    leg_from_ = current_;
    leg_to_ = cfg_.mode == ScheduleMode::Regular ? sample_dirichlet(cfg_.n_objectives, rng_)
                                                 : current_;
}

WeightVector WeightSchedule::weight_for_step(long t) {
    if (t < 0) throw std::invalid_argument("WeightSchedule: negative step");
    if (cfg_.mode != ScheduleMode::Sparse) return current_;
    const long block = t / cfg_.period;
    // One Dirichlet draw per block, even for blocks skipped over, so the
    // weight at a step does not depend on which steps were queried before.
    // The first block (t=0) uses the weight sampled at construction.
    while (sparse_block_ < block) {
        ++sparse_block_;
        current_ = sample_dirichlet(cfg_.n_objectives, rng_);
    }
    return current_;
}

WeightVector WeightSchedule::weight_for_episode(long episode) {
    if (cfg_.mode != ScheduleMode::Regular) return current_;
    while (episode - leg_start_episode_ > cfg_.episodes_per_leg) {
        leg_start_episode_ += cfg_.episodes_per_leg;
        leg_from_ = leg_to_;
        leg_to_ = sample_dirichlet(cfg_.n_objectives, rng_);
    }
    const long k = episode - leg_start_episode_;
    if (k == cfg_.episodes_per_leg) {
        // Leg endpoint: emit the target, then start the next leg from it.
        current_ = leg_to_;
        leg_start_episode_ = episode;
        leg_from_ = leg_to_;
        leg_to_ = sample_dirichlet(cfg_.n_objectives, rng_);
        return current_;
    }
    const double f = static_cast<double>(k) / cfg_.episodes_per_leg;
    Vec w(cfg_.n_objectives);
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = (1.0 - f) * leg_from_[i] + f * leg_to_[i];
    current_ = WeightVector::normalized(std::move(w));  // no-op guard on the simplex
    return current_;
}

}  // namespace morl
