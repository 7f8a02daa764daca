#pragma once

#include <cstdint>
#include <optional>

#include "morl/types.hpp"

namespace morl {

enum class ScheduleMode { Sparse, Regular, Fixed };

/// Weight-change scenario generator. Sparse mode resamples a Dirichlet(1)
/// weight every `period` steps; regular mode linearly interpolates to a
/// Dirichlet(1) target over `episodes_per_leg` episodes; fixed mode is
/// constant. Queries must advance monotonically.
class WeightSchedule {
public:
    struct Config {
        ScheduleMode mode = ScheduleMode::Fixed;
        std::size_t n_objectives = 2;
        long period = 5000;        // steps between sparse resamples
        int episodes_per_leg = 10; // regular-mode interpolation span
        std::optional<WeightVector> fixed;
        std::uint64_t seed = 0;
    };

    explicit WeightSchedule(Config cfg);

    /// Sparse/fixed: piecewise-constant in the step index.
    WeightVector weight_for_step(long t);
    /// Regular/fixed: changes at episode boundaries only.
    WeightVector weight_for_episode(long episode);

    ScheduleMode mode() const { return cfg_.mode; }

private:
    Config cfg_;
    Rng rng_;
    WeightVector current_;
    long sparse_block_ = 0;
    WeightVector leg_from_, leg_to_;
    long leg_start_episode_ = 0;
};

}  // namespace morl
