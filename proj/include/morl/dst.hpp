#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "morl/env.hpp"

namespace morl {

enum DstAction { kLeft = 0, kRight = 1, kUp = 2, kDown = 3 };

/// Grid of ocean / sea-bottom / treasure cells. Text format: `key value`
/// lines, then a `grid` line followed by rows of whitespace-separated cell
/// tokens: `.` ocean, `#` sea bottom, `T<value>` treasure, `S` start.
struct DstMap {
    enum class Cell : char { Ocean, Bottom, Treasure };

    int rows = 0, cols = 0;
    int start_r = 0, start_c = 0;
    int max_episode_steps = 200;
    std::vector<Cell> cells;
    std::vector<double> values;  // treasure value per cell, 0 elsewhere

    Cell at(int r, int c) const { return cells[static_cast<std::size_t>(r) * cols + c]; }
    double value_at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }

    static DstMap load(std::istream& in);
    static DstMap load_file(const std::string& path);
    void save(std::ostream& out) const;
};

class DstEnv final : public Env {
public:
    explicit DstEnv(DstMap map);

    int action_count() const override { return 4; }
    int objective_count() const override { return 2; }
    /// One-hot cell index observation.
    int obs_dim() const override { return map_.rows * map_.cols; }
    Vec reset(Rng& rng) override;
    StepResult step(int action, Rng* rng) override;
    std::unique_ptr<Env> clone() const override { return std::make_unique<DstEnv>(*this); }

    const DstMap& map() const { return map_; }
    int row() const { return r_; }
    int col() const { return c_; }

private:
    Vec observation() const;

    DstMap map_;
    int r_ = 0, c_ = 0;
    int step_count_ = 0;
    bool terminal_ = true;
};

}  // namespace morl
