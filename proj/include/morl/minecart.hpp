#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "morl/env.hpp"

namespace morl {

enum MinecartAction {
    kAccelerate = 0,
    kBrake = 1,
    kTurnLeft = 2,
    kTurnRight = 3,
    kMine = 4,
    kDoNothing = 5,
};

struct MinecartConfig {
    double capacity = 1.5;
    double acceleration = 0.0075;
    int ore_count = 2;
    double rotation_deg = 10.0;
    double idle_cost = -0.005;
    double mining_cost = -0.05;
    double accel_cost = -0.025;
    double ore_std = 0.05;

    // Geometry: unit square, base is a quarter-disc at the (0,0) corner,
    // mines are discs on an arc around the base.
    double base_radius = 0.15;
    double mine_radius = 0.05;
    double speed_cap = 0.05;
    double start_heading_deg = 45.0;
    std::vector<std::array<double, 2>> mine_positions;  // defaults on the arc
    std::vector<Vec> ore_means;                         // per mine, per ore

    int max_episode_steps = 1000;  // unskipped frames

    /// Standard setup: 5 mines on the arc with the stock ore means.
    static MinecartConfig defaults();
};

struct MinecartState {
    double x = 0.0, y = 0.0;
    double speed = 0.0;
    double heading_deg = 0.0;
    Vec content;
    int step_count = 0;
    bool left_base = false;
};

class MinecartEnv final : public Env {
public:
    explicit MinecartEnv(MinecartConfig cfg);

    int action_count() const override { return 6; }
    int objective_count() const override { return cfg_.ore_count + 1; }
    int obs_dim() const override { return 5 + cfg_.ore_count; }
    Vec reset(Rng& rng) override;
    StepResult step(int action, Rng* rng) override;
    std::unique_ptr<Env> clone() const override { return std::make_unique<MinecartEnv>(*this); }

    const MinecartConfig& config() const { return cfg_; }
    const MinecartState& state() const { return s_; }
    bool on_base() const;
    /// Mine index overlapped by the cart, or -1.
    int overlapping_mine() const;

    /// Optional 48x48 grayscale rasterization of the scene (row-major).
    Vec render_frame() const;

private:
    Vec observation() const;

    MinecartConfig cfg_;
    MinecartState s_;
    bool terminal_ = true;
};

/// Loads/saves the plain-text key/value config format (see README).
MinecartConfig load_minecart_config(std::istream& in);
void save_minecart_config(const MinecartConfig& cfg, std::ostream& out);

}  // namespace morl
