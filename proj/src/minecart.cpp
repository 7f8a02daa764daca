#include "morl/minecart.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace morl {

namespace {
constexpr double kPi = 3.14159265358979323846;
double deg2rad(double d) { return d * kPi / 180.0; }
}  // namespace

MinecartConfig MinecartConfig::defaults() {
    MinecartConfig cfg;
    const double dist = 0.9;
    for (int i = 0; i < 5; ++i) {
        const double ang = deg2rad(90.0 * i / 4.0);
        cfg.mine_positions.push_back({dist * std::cos(ang), dist * std::sin(ang)});
    }
    cfg.ore_means = {{0.2, 0.0}, {0.15, 0.1}, {0.2, 0.2}, {0.1, 0.15}, {0.0, 0.2}};
    return cfg;
}

MinecartEnv::MinecartEnv(MinecartConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.mine_positions.size() != cfg_.ore_means.size())
        throw std::invalid_argument("MinecartEnv: mine position/mean count mismatch");
    for (const Vec& m : cfg_.ore_means)
        if (static_cast<int>(m.size()) != cfg_.ore_count)
            throw std::invalid_argument("MinecartEnv: ore mean dimension mismatch");
    s_.content.assign(static_cast<std::size_t>(cfg_.ore_count), 0.0);
}

bool MinecartEnv::on_base() const {
    return std::hypot(s_.x, s_.y) <= cfg_.base_radius;
}

int MinecartEnv::overlapping_mine() const {
    for (std::size_t i = 0; i < cfg_.mine_positions.size(); ++i) {
        const auto& m = cfg_.mine_positions[i];
        if (std::hypot(s_.x - m[0], s_.y - m[1]) <= cfg_.mine_radius) return static_cast<int>(i);
    }
    return -1;
}

Vec MinecartEnv::observation() const {
    Vec o;
    o.reserve(static_cast<std::size_t>(obs_dim()));
    o.push_back(s_.x);
    o.push_back(s_.y);
    o.push_back(s_.speed / cfg_.speed_cap);
    o.push_back(std::sin(deg2rad(s_.heading_deg)));
    o.push_back(std::cos(deg2rad(s_.heading_deg)));
    for (double c : s_.content) o.push_back(c);
    return o;
}

Vec MinecartEnv::reset(Rng&) {
    s_ = MinecartState{};
    s_.heading_deg = cfg_.start_heading_deg;
    s_.content.assign(static_cast<std::size_t>(cfg_.ore_count), 0.0);
    terminal_ = false;
    return observation();
}

StepResult MinecartEnv::step(int action, Rng* rng) {
    if (action < 0 || action >= action_count())
        throw std::invalid_argument("MinecartEnv: action out of range");
    if (terminal_) throw std::logic_error("MinecartEnv: step on terminal state");

    const int n_obj = objective_count();
    Vec reward(static_cast<std::size_t>(n_obj), 0.0);
    double fuel = cfg_.idle_cost;

    switch (action) {
        case kAccelerate:
            s_.speed = std::min(cfg_.speed_cap, s_.speed + cfg_.acceleration);
            fuel += cfg_.accel_cost;
            break;
        case kBrake:
            s_.speed *= 0.5;
            break;
        case kTurnLeft:
            s_.heading_deg = std::fmod(s_.heading_deg + cfg_.rotation_deg + 360.0, 360.0);
            break;
        case kTurnRight:
            s_.heading_deg = std::fmod(s_.heading_deg - cfg_.rotation_deg + 360.0, 360.0);
            break;
        case kMine: {
            fuel += cfg_.mining_cost;
            const int m = overlapping_mine();
            if (m >= 0) {
                double held = 0.0;
                for (double c : s_.content) held += c;
                Vec draw(static_cast<std::size_t>(cfg_.ore_count));
                double drawn = 0.0;
                for (int o = 0; o < cfg_.ore_count; ++o) {
                    double amt = cfg_.ore_means[static_cast<std::size_t>(m)][static_cast<std::size_t>(o)];
                    if (rng) {
                        std::normal_distribution<double> dist(amt, cfg_.ore_std);
                        amt = std::max(0.0, dist(*rng));
                    }
                    draw[static_cast<std::size_t>(o)] = amt;
                    drawn += amt;
                }
                const double room = cfg_.capacity - held;
                // Over capacity: fill proportionally across ores up to capacity.
                const double scale = (drawn > room && drawn > 0.0) ? room / drawn : 1.0;
                for (int o = 0; o < cfg_.ore_count; ++o)
                    s_.content[static_cast<std::size_t>(o)] += scale * draw[static_cast<std::size_t>(o)];
            }
            break;
        }
        case kDoNothing:
            break;
    }

    s_.x = std::clamp(s_.x + s_.speed * std::cos(deg2rad(s_.heading_deg)), 0.0, 1.0);
    s_.y = std::clamp(s_.y + s_.speed * std::sin(deg2rad(s_.heading_deg)), 0.0, 1.0);

    if (on_base()) {
        if (s_.left_base) {
            // Returning to base sells the cart's content and ends the episode.
            for (int o = 0; o < cfg_.ore_count; ++o) {
                reward[static_cast<std::size_t>(o)] = s_.content[static_cast<std::size_t>(o)];
                s_.content[static_cast<std::size_t>(o)] = 0.0;
            }
            terminal_ = true;
        }
    } else {
        s_.left_base = true;
    }

    ++s_.step_count;
    if (s_.step_count >= cfg_.max_episode_steps) terminal_ = true;

    reward[static_cast<std::size_t>(n_obj - 1)] = fuel;
    return {observation(), std::move(reward), terminal_};
}

Vec MinecartEnv::render_frame() const {
    constexpr int kRes = 48;
    Vec frame(static_cast<std::size_t>(kRes) * kRes, 0.0);
    auto plot = [&frame](int px, int py, double v) {
        if (px < 0 || px >= kRes || py < 0 || py >= kRes) return;
        std::size_t idx = static_cast<std::size_t>(py) * kRes + px;
        frame[idx] = std::max(frame[idx], v);
    };
    for (int py = 0; py < kRes; ++py) {
        for (int px = 0; px < kRes; ++px) {
            const double x = (px + 0.5) / kRes, y = (py + 0.5) / kRes;
            if (std::hypot(x, y) <= cfg_.base_radius) plot(px, py, 0.3);
            for (const auto& m : cfg_.mine_positions)
                if (std::hypot(x - m[0], y - m[1]) <= cfg_.mine_radius) plot(px, py, 0.6);
        }
    }
    plot(static_cast<int>(s_.x * kRes), static_cast<int>(s_.y * kRes), 1.0);
    return frame;
}

FrameSkip::FrameSkip(std::unique_ptr<Env> inner, int k) : inner_(std::move(inner)), k_(k) {
    if (k < 1) throw std::invalid_argument("FrameSkip: k must be >= 1");
}

StepResult FrameSkip::step(int action, Rng* rng) {
    StepResult acc;
    acc.reward.assign(static_cast<std::size_t>(inner_->objective_count()), 0.0);
    for (int i = 0; i < k_; ++i) {
        StepResult r = inner_->step(action, rng);
        for (std::size_t j = 0; j < acc.reward.size(); ++j) acc.reward[j] += r.reward[j];
        acc.obs = std::move(r.obs);
        acc.terminal = r.terminal;
        if (acc.terminal) break;
    }
    return acc;
}

namespace {

std::vector<std::pair<std::string, std::string>> parse_kv(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::string rest;
        std::getline(ls, rest);
        const auto b = rest.find_first_not_of(" \t");
        kv.emplace_back(key, b == std::string::npos ? "" : rest.substr(b));
    }
    return kv;
}

}  // namespace

MinecartConfig load_minecart_config(std::istream& in) {
    MinecartConfig cfg = MinecartConfig::defaults();
    bool mines_cleared = false;
    for (const auto& [key, value] : parse_kv(in)) {
        std::istringstream vs(value);
        if (key == "capacity") vs >> cfg.capacity;
        else if (key == "acceleration") vs >> cfg.acceleration;
        else if (key == "ore_count") vs >> cfg.ore_count;
        else if (key == "rotation_deg") vs >> cfg.rotation_deg;
        else if (key == "idle_cost") vs >> cfg.idle_cost;
        else if (key == "mining_cost") vs >> cfg.mining_cost;
        else if (key == "accel_cost") vs >> cfg.accel_cost;
        else if (key == "ore_std") vs >> cfg.ore_std;
        else if (key == "base_radius") vs >> cfg.base_radius;
        else if (key == "mine_radius") vs >> cfg.mine_radius;
        else if (key == "speed_cap") vs >> cfg.speed_cap;
        else if (key == "start_heading_deg") vs >> cfg.start_heading_deg;
        else if (key == "max_episode_steps") vs >> cfg.max_episode_steps;
        else if (key == "mine") {
            if (!mines_cleared) {
                cfg.mine_positions.clear();
                cfg.ore_means.clear();
                mines_cleared = true;
            }
            double x, y;
            if (!(vs >> x >> y))
                throw std::invalid_argument("minecart config: bad value for 'mine'");
            Vec means;
            double m;
            while (vs >> m) means.push_back(m);
            vs.clear();  // hitting end-of-line while reading means is expected
            cfg.mine_positions.push_back({x, y});
            cfg.ore_means.push_back(std::move(means));
        } else {
            throw std::invalid_argument("minecart config: unknown key '" + key + "'");
        }
        if (vs.fail()) throw std::invalid_argument("minecart config: bad value for '" + key + "'");
    }
    return cfg;
}

void save_minecart_config(const MinecartConfig& cfg, std::ostream& out) {
    out << "capacity " << cfg.capacity << "\nacceleration " << cfg.acceleration
        << "\nore_count " << cfg.ore_count << "\nrotation_deg " << cfg.rotation_deg
        << "\nidle_cost " << cfg.idle_cost << "\nmining_cost " << cfg.mining_cost
        << "\naccel_cost " << cfg.accel_cost << "\nore_std " << cfg.ore_std
        << "\nbase_radius " << cfg.base_radius << "\nmine_radius " << cfg.mine_radius
        << "\nspeed_cap " << cfg.speed_cap << "\nstart_heading_deg " << cfg.start_heading_deg
        << "\nmax_episode_steps " << cfg.max_episode_steps << "\n";
    for (std::size_t i = 0; i < cfg.mine_positions.size(); ++i) {
        out << "mine " << cfg.mine_positions[i][0] << ' ' << cfg.mine_positions[i][1];
        for (double m : cfg.ore_means[i]) out << ' ' << m;
        out << '\n';
    }
}

}  // namespace morl
