#include "morl/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace morl {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

Vec parse_vec(const std::string& s) {
    Vec v;
    for (const auto& tok : split(s, ','))
        if (!tok.empty()) v.push_back(std::stod(tok));
    return v;
}

std::string join_path(const std::string& base, const std::string& rel) {
    if (rel.empty() || rel.front() == '/' || base.empty()) return rel;
    return base + "/" + rel;
}

}  // namespace

Ini Ini::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    return parse(in);
}

Ini Ini::parse(std::istream& in) {
    Ini ini;
    std::string line, section;
    while (std::getline(in, line)) {
        std::size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line = line.substr(0, cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw std::runtime_error("malformed section: " + line);
            section = trim(line.substr(1, line.size() - 2));
            ini.sections_[section];
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("malformed line: " + line);
        ini.sections_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return ini;
}

bool Ini::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Ini::get(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double Ini::get_num(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? std::stod(get(section, key, "")) : fallback;
}

long Ini::get_int(const std::string& section, const std::string& key, long fallback) const {
    return has(section, key) ? std::stol(get(section, key, "")) : fallback;
}

bool Ini::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = get(section, key, "");
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::runtime_error("bad boolean for " + section + "." + key + ": " + v);
}

ExperimentConfig parse_experiment(const Ini& ini, const std::string& base_dir) {
    ExperimentConfig cfg;
    cfg.env_type = ini.get("env", "type", cfg.env_type);
    if (cfg.env_type != "dst" && cfg.env_type != "minecart")
        throw std::runtime_error("unknown env type: " + cfg.env_type);
    cfg.env_file = join_path(base_dir, ini.get("env", "file", ""));
    cfg.dst_treasures = static_cast<int>(ini.get_int("env", "treasures", cfg.dst_treasures));

    const bool cart = cfg.env_type == "minecart";
    cfg.frame_skip = static_cast<int>(ini.get_int("env", "frame_skip", cart ? 4 : 1));

    cfg.agent_type = ini.get("agent", "type", cfg.agent_type);
    AgentConfig& a = cfg.agent;
    a.batch_size = static_cast<int>(ini.get_int("agent", "batch_size", cart ? 64 : 16));
    a.gamma = ini.get_num("agent", "gamma", cart ? 0.98 : 0.95);
    a.eps_start = ini.get_num("agent", "eps_start", cart ? 1.0 : 0.1);
    a.eps_end = ini.get_num("agent", "eps_end", cart ? 0.05 : 0.01);
    a.eps_decay_steps = ini.get_int("agent", "eps_decay_steps", cart ? 100000 : 10000);
    a.target_sync_period =
        static_cast<int>(ini.get_int("agent", "target_sync_period", a.target_sync_period));
    a.kappa = ini.get_num("agent", "kappa", a.kappa);
    a.eval_episodes = static_cast<int>(ini.get_int("agent", "eval_episodes", a.eval_episodes));

    NetConfig& n = a.net;
    if (ini.has("net", "hidden")) {
        n.hidden.clear();
        for (double h : parse_vec(ini.get("net", "hidden", "")))
            n.hidden.push_back(static_cast<int>(h));
    }
    n.head_hidden = static_cast<int>(ini.get_int("net", "head_hidden", n.head_hidden));
    n.lr = ini.get_num("net", "lr", n.lr);
    n.momentum = ini.get_num("net", "momentum", n.momentum);

    WeightSchedule::Config& s = cfg.schedule;
    std::string mode = ini.get("schedule", "mode", "fixed");
    if (mode == "sparse")
        s.mode = ScheduleMode::Sparse;
    else if (mode == "regular")
        s.mode = ScheduleMode::Regular;
    else if (mode == "fixed")
        s.mode = ScheduleMode::Fixed;
    else
        throw std::runtime_error("unknown schedule mode: " + mode);
    s.period = ini.get_int("schedule", "period", cart ? 50000 : 5000);
    s.episodes_per_leg =
        static_cast<int>(ini.get_int("schedule", "episodes_per_leg", s.episodes_per_leg));
    s.seed = static_cast<std::uint64_t>(ini.get_int("schedule", "seed", 0));
    if (ini.has("schedule", "fixed"))
        s.fixed = WeightVector::normalized(parse_vec(ini.get("schedule", "fixed", "")));

    DiverseBuffer::Config& r = cfg.replay;
    r.capacity = static_cast<std::size_t>(ini.get_int("replay", "capacity", cart ? 100000 : 10000));
    r.der = ini.get_bool("replay", "der", false);
    r.gamma = a.gamma;
    r.priority_eps = ini.get_num("replay", "priority_eps", r.priority_eps);
    r.priority_alpha = ini.get_num("replay", "priority_alpha", r.priority_alpha);

    cfg.total_steps = ini.get_int("run", "steps", cfg.total_steps);
    if (ini.has("run", "seeds")) {
        cfg.seeds.clear();
        for (double v : parse_vec(ini.get("run", "seeds", "")))
            cfg.seeds.push_back(static_cast<std::uint64_t>(v));
    }
    if (cfg.seeds.empty()) throw std::runtime_error("no seeds configured");
    return cfg;
}

namespace {

DstMap dst_map_for(const ExperimentConfig& cfg) {
    if (!cfg.env_file.empty()) return DstMap::load_file(cfg.env_file);
    return make_dst_map(cfg.dst_treasures, cfg.agent.gamma);
}

MinecartConfig minecart_config_for(const ExperimentConfig& cfg) {
    if (cfg.env_file.empty()) return MinecartConfig::defaults();
    std::ifstream in(cfg.env_file);
    if (!in) throw std::runtime_error("cannot open env config: " + cfg.env_file);
    return load_minecart_config(in);
}

}  // namespace

std::unique_ptr<Env> make_env(const ExperimentConfig& cfg) {
    std::unique_ptr<Env> env;
    if (cfg.env_type == "dst")
        env = std::make_unique<DstEnv>(dst_map_for(cfg));
    else
        env = std::make_unique<MinecartEnv>(minecart_config_for(cfg));
    if (cfg.frame_skip > 1) env = std::make_unique<FrameSkip>(std::move(env), cfg.frame_skip);
    return env;
}

std::unique_ptr<Oracle> make_oracle(const ExperimentConfig& cfg) {
    if (cfg.env_type == "dst")
        return std::make_unique<DstOracle>(dst_map_for(cfg), cfg.agent.gamma);
    return std::make_unique<MinecartOracle>(minecart_config_for(cfg), cfg.agent.gamma,
                                            cfg.frame_skip);
}

RunResult run_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
    auto env = make_env(cfg);
    auto eval_env = env->clone();
    auto oracle = make_oracle(cfg);

    WeightSchedule::Config sched_cfg = cfg.schedule;
    sched_cfg.n_objectives = static_cast<std::size_t>(env->objective_count());
    sched_cfg.seed += seed;  // per-run scenario, paired across agents by seed
    WeightSchedule schedule(sched_cfg);

    auto agent = make_agent(cfg.agent_type, env->obs_dim(), env->action_count(),
                            env->objective_count(), cfg.agent, seed);
    DiverseBuffer buffer(cfg.replay);
    Rng rng(seed);

    const bool by_step = sched_cfg.mode == ScheduleMode::Sparse;
    RunResult result;
    result.seed = seed;

    long t = 0;
    long episode = 0;
    std::optional<WeightVector> active;
    auto switch_to = [&](const WeightVector& w) {
        if (!active) {
            agent->observe_weight(w);
        } else if (!(*active == w)) {
            agent->on_weight_change(*active, w, *eval_env);
        }
        active = w;
    };

    while (t < cfg.total_steps) {
        WeightVector w_ep = by_step ? schedule.weight_for_step(t)
                                    : schedule.weight_for_episode(episode);
        switch_to(w_ep);

        Vec obs = env->reset(rng);
        Vec g(env->objective_count(), 0.0);
        double disc = 1.0;
        bool done = false;
        while (!done && t < cfg.total_steps) {
            if (by_step) switch_to(schedule.weight_for_step(t));
            double eps = epsilon_at(cfg.agent, t);
            int a = agent->act(obs, *active, eps, rng);
            StepResult sr = env->step(a, &rng);
            Transition tr;
            tr.obs = obs;
            tr.action = a;
            tr.reward = sr.reward;
            tr.next_obs = sr.obs;
            tr.terminal = sr.terminal;
            buffer.push(std::move(tr));
            for (std::size_t n = 0; n < g.size(); ++n) g[n] += disc * sr.reward[n];
            disc *= cfg.agent.gamma;
            obs = std::move(sr.obs);
            agent->learn(buffer, *active, rng);
            ++t;
            done = sr.terminal;
        }

        EpisodeRecord rec;
        rec.episode = episode;
        rec.step = t;
        rec.w = w_ep;
        rec.g = g;
        rec.scalarized = dot(g, w_ep);
        rec.optimal = dot(oracle->optimal(w_ep).value, w_ep);
        rec.regret = rec.optimal - rec.scalarized;
        result.episodes.push_back(std::move(rec));
        ++episode;
    }
    return result;
}

void write_run_csv(const RunResult& run, std::ostream& out) {
    if (run.episodes.empty()) throw std::runtime_error("empty run");
    const std::size_t n = run.episodes.front().g.size();
    out << "run,episode,step";
    for (std::size_t i = 0; i < n; ++i) out << ",w_" << i;
    for (std::size_t i = 0; i < n; ++i) out << ",g_" << i;
    out << ",scalarized,optimal,regret\n";
    out << std::setprecision(17);
    for (const auto& e : run.episodes) {
        out << run.seed << ',' << e.episode << ',' << e.step;
        for (std::size_t i = 0; i < n; ++i) out << ',' << e.w[i];
        for (std::size_t i = 0; i < n; ++i) out << ',' << e.g[i];
        out << ',' << e.scalarized << ',' << e.optimal << ',' << e.regret << '\n';
    }
}

RunResult read_run_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty run csv");
    std::size_t n = 0;
    for (const auto& col : split(header, ','))
        if (col.rfind("w_", 0) == 0) ++n;
    if (n == 0) throw std::runtime_error("run csv missing weight columns");

    RunResult run;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cols = split(line, ',');
        if (cols.size() != 6 + 2 * n) throw std::runtime_error("malformed run csv row: " + line);
        run.seed = static_cast<std::uint64_t>(std::stoull(cols[0]));
        EpisodeRecord e;
        e.episode = std::stol(cols[1]);
        e.step = std::stol(cols[2]);
        Vec w(n), g(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = std::stod(cols[3 + i]);
        for (std::size_t i = 0; i < n; ++i) g[i] = std::stod(cols[3 + n + i]);
        e.w = WeightVector::normalized(std::move(w));
        e.g = std::move(g);
        e.scalarized = std::stod(cols[3 + 2 * n]);
        e.optimal = std::stod(cols[4 + 2 * n]);
        e.regret = std::stod(cols[5 + 2 * n]);
        run.episodes.push_back(std::move(e));
    }
    return run;
}

AggregateResult aggregate_runs(const std::vector<RunResult>& runs, int window) {
    if (runs.empty()) throw std::runtime_error("no runs to aggregate");
    std::size_t len = runs.front().episodes.size();
    for (const auto& r : runs) len = std::min(len, r.episodes.size());
    if (len == 0) throw std::runtime_error("a run has no episodes");

    AggregateResult agg;
    agg.runs = runs.size();
    agg.window = window;

    // Trailing moving average per run, then cross-run mean and (population) std.
    std::vector<std::vector<double>> smooth(runs.size(), std::vector<double>(len));
    for (std::size_t r = 0; r < runs.size(); ++r) {
        double acc = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            acc += runs[r].episodes[i].regret;
            if (i >= static_cast<std::size_t>(window)) acc -= runs[r].episodes[i - window].regret;
            smooth[r][i] = acc / static_cast<double>(std::min<std::size_t>(i + 1, window));
        }
    }
    agg.mean_regret.resize(len);
    agg.std_regret.resize(len);
    agg.cumulative_regret.resize(len);
    double cum = 0.0;
    double total = 0.0, tail = 0.0;
    const std::size_t tail_start = len - std::max<std::size_t>(1, len / 10);
    for (std::size_t i = 0; i < len; ++i) {
        double m = 0.0;
        double raw = 0.0;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            m += smooth[r][i];
            raw += runs[r].episodes[i].regret;
        }
        m /= static_cast<double>(runs.size());
        raw /= static_cast<double>(runs.size());
        double var = 0.0;
        for (std::size_t r = 0; r < runs.size(); ++r)
            var += (smooth[r][i] - m) * (smooth[r][i] - m);
        agg.mean_regret[i] = m;
        agg.std_regret[i] = std::sqrt(var / static_cast<double>(runs.size()));
        cum += raw;
        agg.cumulative_regret[i] = cum;
        total += raw;
        if (i >= tail_start) tail += raw;
    }
    agg.overall_mean_regret = total / static_cast<double>(len);
    agg.final_mean_regret = tail / static_cast<double>(len - tail_start);
    return agg;
}

void write_aggregate_csv(const AggregateResult& agg, std::ostream& out) {
    out << "episode,mean_regret,std_regret,cumulative_regret\n" << std::setprecision(17);
    for (std::size_t i = 0; i < agg.mean_regret.size(); ++i)
        out << i << ',' << agg.mean_regret[i] << ',' << agg.std_regret[i] << ','
            << agg.cumulative_regret[i] << '\n';
    out << "# runs=" << agg.runs << " window=" << agg.window
        << " overall_mean_regret=" << agg.overall_mean_regret
        << " final_mean_regret=" << agg.final_mean_regret << '\n';
}

void write_regret_svg(const AggregateResult& agg, std::ostream& out) {
    const double W = 720, H = 400, L = 60, R = 20, T = 20, B = 40;
    const std::size_t n = agg.mean_regret.size();
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
        lo = std::min(lo, agg.mean_regret[i] - agg.std_regret[i]);
        hi = std::max(hi, agg.mean_regret[i] + agg.std_regret[i]);
    }
    if (!(hi > lo)) hi = lo + 1.0;
    auto px = [&](std::size_t i) {
        return L + (W - L - R) * (n > 1 ? static_cast<double>(i) / (n - 1) : 0.5);
    };
    auto py = [&](double v) { return H - B - (H - T - B) * (v - lo) / (hi - lo); };

    out << std::setprecision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<polygon fill=\"#a8c8f0\" fill-opacity=\"0.5\" points=\"";
    for (std::size_t i = 0; i < n; ++i)
        out << px(i) << ',' << py(agg.mean_regret[i] + agg.std_regret[i]) << ' ';
    for (std::size_t i = n; i-- > 0;)
        out << px(i) << ',' << py(agg.mean_regret[i] - agg.std_regret[i]) << ' ';
    out << "\"/>\n<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < n; ++i) out << px(i) << ',' << py(agg.mean_regret[i]) << ' ';
    out << "\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\""
        << H - B << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (W / 2) << "\" y=\"" << H - 10
        << "\" text-anchor=\"middle\" font-size=\"13\">episode</text>\n";
    out << "<text x=\"15\" y=\"" << (H / 2)
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 15 " << (H / 2)
        << ")\">regret (window " << agg.window << ")</text>\n";
    out << "<text x=\"" << L + 4 << "\" y=\"" << T + 12 << "\" font-size=\"12\">max "
        << hi << "</text>\n";
    out << "<text x=\"" << L + 4 << "\" y=\"" << H - B - 4 << "\" font-size=\"12\">min "
        << lo << "</text>\n";
    out << "</svg>\n";
}

}  // namespace morl
