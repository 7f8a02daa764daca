#include "morl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <sstream>

#include "morl/env.hpp"

namespace morl {

OracleResult Oracle::optimal(const WeightVector& w) const {
    if (values_.empty()) throw std::logic_error("Oracle: no candidates");
    std::size_t best = 0;
    double best_v = dot(values_[0], w);
    for (std::size_t i = 1; i < values_.size(); ++i) {
        const double v = dot(values_[i], w);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    return {values_[best], static_cast<int>(best), names_[best]};
}

namespace {
double discounted_step_sum(double gamma, int steps) {
    // sum_{t=1..steps} gamma^{t-1}
    if (gamma == 1.0) return steps;
    return (1.0 - std::pow(gamma, steps)) / (1.0 - gamma);
}
}  // namespace

DstOracle::DstOracle(const DstMap& map, double gamma) {
    if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("DstOracle: gamma out of (0,1)");
    // BFS over ocean cells; treasure cells terminate and are not expanded.
    std::vector<int> dist(static_cast<std::size_t>(map.rows) * map.cols, -1);
    std::deque<std::pair<int, int>> queue;
    dist[static_cast<std::size_t>(map.start_r) * map.cols + map.start_c] = 0;
    queue.emplace_back(map.start_r, map.start_c);
    while (!queue.empty()) {
        auto [r, c] = queue.front();
        queue.pop_front();
        if (map.at(r, c) == DstMap::Cell::Treasure) continue;
        const int dr[] = {0, 0, -1, 1}, dc[] = {-1, 1, 0, 0};
        for (int a = 0; a < 4; ++a) {
            const int nr = r + dr[a], nc = c + dc[a];
            if (nr < 0 || nr >= map.rows || nc < 0 || nc >= map.cols) continue;
            if (map.at(nr, nc) == DstMap::Cell::Bottom) continue;
            const std::size_t idx = static_cast<std::size_t>(nr) * map.cols + nc;
            if (dist[idx] >= 0) continue;
            dist[idx] = dist[static_cast<std::size_t>(r) * map.cols + c] + 1;
            queue.emplace_back(nr, nc);
        }
    }
    for (int r = 0; r < map.rows; ++r) {
        for (int c = 0; c < map.cols; ++c) {
            if (map.at(r, c) != DstMap::Cell::Treasure) continue;
            const int d = dist[static_cast<std::size_t>(r) * map.cols + c];
            if (d < 0) continue;  // unreachable treasures excluded
            values_.push_back({std::pow(gamma, d - 1) * map.value_at(r, c),
                               -discounted_step_sum(gamma, d)});
            std::ostringstream name;
            name << "T(" << r << ',' << c << ')';
            names_.push_back(name.str());
        }
    }
    // Bounded never-collect behavior: run until the step cap without a treasure.
    values_.push_back({0.0, -discounted_step_sum(gamma, map.max_episode_steps)});
    names_.push_back("idle");
}

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap180(double deg) {
    deg = std::fmod(deg + 180.0, 360.0);
    if (deg < 0.0) deg += 360.0;
    return deg - 180.0;
}

// Per-frame steering toward a target point: rotate when heading error exceeds
// 5 degrees, otherwise accelerate up to the cruise speed.
int steer(const MinecartState& s, double tx, double ty, double cruise) {
    const double desired = std::atan2(ty - s.y, tx - s.x) * 180.0 / kPi;
    const double err = wrap180(desired - s.heading_deg);
    if (std::abs(err) > 5.0) return err > 0.0 ? kTurnLeft : kTurnRight;
    if (s.speed < cruise) return kAccelerate;
    return kDoNothing;
}

// Simulates one scripted round trip with expected-ore dynamics. mine < 0 runs
// the minimal leave-and-return policy. Frame f is discounted gamma^(f/k) so
// the value lives on the agent-step scale.
Vec simulate_policy(const MinecartConfig& cfg, double gamma, int frame_skip, int mine, bool fast) {
    MinecartEnv env(cfg);
    Rng dummy(0);
    env.reset(dummy);
    const double cruise = fast ? cfg.speed_cap : 0.5 * cfg.speed_cap;
    Vec value(static_cast<std::size_t>(env.objective_count()), 0.0);

    enum class Phase { Approach, Mine, Return } phase = Phase::Approach;
    const double out_ang = kPi / 4.0;
    const double tx = mine >= 0 ? cfg.mine_positions[static_cast<std::size_t>(mine)][0]
                                : (cfg.base_radius + 0.07) * std::cos(out_ang);
    const double ty = mine >= 0 ? cfg.mine_positions[static_cast<std::size_t>(mine)][1]
                                : (cfg.base_radius + 0.07) * std::sin(out_ang);

    for (int frame = 0; frame < cfg.max_episode_steps; ++frame) {
        const MinecartState& s = env.state();
        int action = kDoNothing;
        switch (phase) {
            case Phase::Approach:
                if (mine >= 0 && env.overlapping_mine() == mine) {
                    phase = Phase::Mine;
                } else if (mine < 0 && s.left_base &&
                           std::hypot(s.x - tx, s.y - ty) < 0.05) {
                    phase = Phase::Return;
                }
                if (phase == Phase::Approach) action = steer(s, tx, ty, cruise);
                break;
            case Phase::Mine:
                break;
            case Phase::Return:
                break;
        }
        if (phase == Phase::Mine) {
            double held = 0.0;
            for (double c : s.content) held += c;
            if (held >= cfg.capacity - 1e-9) {
                phase = Phase::Return;
            } else if (env.overlapping_mine() != mine) {
                action = steer(s, tx, ty, cruise);  // drifted out, re-approach
            } else if (s.speed > 1e-6) {
                action = kBrake;
            } else {
                action = kMine;
            }
        }
        if (phase == Phase::Return) action = steer(s, 0.0, 0.0, cruise);

        StepResult r = env.step(action, nullptr);
        const double disc = std::pow(gamma, static_cast<double>(frame) / frame_skip);
        for (std::size_t i = 0; i < value.size(); ++i) value[i] += disc * r.reward[i];
        if (r.terminal) break;
    }
    return value;
}

}  // namespace

MinecartOracle::MinecartOracle(const MinecartConfig& cfg, double gamma, int frame_skip) {
    if (frame_skip < 1) throw std::invalid_argument("MinecartOracle: frame_skip must be >= 1");
    values_.push_back(simulate_policy(cfg, gamma, frame_skip, -1, false));
    names_.push_back("idle");
    for (std::size_t m = 0; m < cfg.mine_positions.size(); ++m) {
        for (bool fast : {true, false}) {
            values_.push_back(simulate_policy(cfg, gamma, frame_skip, static_cast<int>(m), fast));
            std::ostringstream name;
            name << "mine" << m << (fast ? "-fast" : "-slow");
            names_.push_back(name.str());
        }
    }
}

namespace {

void compositions(std::size_t n, std::size_t total, Vec& current,
                  std::vector<WeightVector>& out) {
    if (current.size() + 1 == n) {
        current.push_back(static_cast<double>(total));
        Vec w = current;
        double sum = 0.0;
        for (double v : w) sum += v;
        for (double& v : w) v /= sum;
        out.push_back(WeightVector::normalized(std::move(w)));
        current.pop_back();
        return;
    }
    for (std::size_t i = 0; i <= total; ++i) {
        current.push_back(static_cast<double>(i));
        compositions(n, total - i, current, out);
        current.pop_back();
    }
}

std::size_t composition_count(std::size_t n, std::size_t m) {
    // C(m + n - 1, n - 1)
    std::size_t c = 1;
    for (std::size_t i = 1; i < n; ++i) c = c * (m + i) / i;
    return c;
}

}  // namespace

std::vector<WeightVector> simplex_grid(std::size_t n_objectives, std::size_t min_points) {
    if (n_objectives < 2) throw std::invalid_argument("simplex_grid: need >= 2 objectives");
    std::size_t m = 1;
    while (composition_count(n_objectives, m) < min_points) ++m;
    std::vector<WeightVector> out;
    Vec current;
    compositions(n_objectives, m, current, out);
    return out;
}

std::vector<PartitionEntry> partition_simplex(const Oracle& oracle, std::size_t min_points) {
    if (min_points < 2) throw std::invalid_argument("partition_simplex: resolution >= 2");
    const std::size_t n = oracle.candidate_values().front().size();
    std::vector<PartitionEntry> out;
    for (const WeightVector& w : simplex_grid(n, min_points))
        out.push_back({w, oracle.optimal(w).policy_id});
    return out;
}

void write_partition_csv(const std::vector<PartitionEntry>& partition,
                         const Oracle& oracle, std::ostream& out) {
    if (partition.empty()) return;
    const std::size_t n = partition.front().w.size();
    for (std::size_t i = 0; i < n; ++i) out << "w_" << i << ',';
    out << "policy_id,policy\n";
    for (const PartitionEntry& e : partition) {
        for (std::size_t i = 0; i < n; ++i) out << e.w[i] << ',';
        out << e.policy_id << ',' << oracle.candidate_names()[static_cast<std::size_t>(e.policy_id)]
            << '\n';
    }
}

DstMap make_dst_map(int n_treasures, double gamma) {
    if (n_treasures < 1) throw std::invalid_argument("make_dst_map: need >= 1 treasure");
    if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("make_dst_map: gamma out of (0,1)");
    DstMap map;
    map.rows = n_treasures + 1;
    map.cols = n_treasures;
    map.start_r = 0;
    map.start_c = 0;
    map.cells.assign(static_cast<std::size_t>(map.rows) * map.cols, DstMap::Cell::Ocean);
    map.values.assign(map.cells.size(), 0.0);

    // Staircase: treasure i at (i+1, i), shortest path 2i+1; everything below
    // the stair is sea bottom.
    for (int r = 0; r < map.rows; ++r)
        for (int c = 0; c < map.cols; ++c)
            if (r > c + 1) map.cells[static_cast<std::size_t>(r) * map.cols + c] = DstMap::Cell::Bottom;

    // Treasure values chosen so adjacent optimality regions meet at equally
    // spaced treasure weights i/k: at boundary b between depths d and d', the
    // scalarized values coincide.
    const int k = n_treasures;
    auto T = [gamma](int d) { return discounted_step_sum(gamma, d); };
    double v = 1.0;
    for (int i = 0; i < k; ++i) {
        const int d = 2 * i + 1;
        const std::size_t idx = static_cast<std::size_t>(i + 1) * map.cols + i;
        map.cells[idx] = DstMap::Cell::Treasure;
        map.values[idx] = v;
        if (i + 1 < k) {
            const double b = static_cast<double>(i + 1) / k;
            const int dn = 2 * (i + 1) + 1;
            v = (b * std::pow(gamma, d - 1) * v + (1.0 - b) * (T(dn) - T(d))) /
                (b * std::pow(gamma, dn - 1));
        }
    }
    return map;
}

}  // namespace morl
