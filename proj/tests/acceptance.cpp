// Acceptance suite: twelve end-to-end checks, one PASS/FAIL line each.
// Exit status 0 iff every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "morl/agents.hpp"
#include "morl/dst.hpp"
#include "morl/minecart.hpp"
#include "morl/momath.hpp"
#include "morl/net.hpp"
#include "morl/oracle.hpp"
#include "morl/replay.hpp"
#include "morl/runner.hpp"
#include "morl/schedule.hpp"

#ifndef ACCEPTANCE_ASSETS_DIR
#define ACCEPTANCE_ASSETS_DIR "assets"
#endif

using namespace morl;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("[%2d] %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Gradients vs central finite differences.

void criterion_1() {
    const double t0 = now_seconds();
    Rng rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double worst = 0.0;
    bool ok = true;

    for (int trial = 0; trial < 100 && ok; ++trial) {
        NetConfig nc;
        nc.hidden = {5, 4};
        nc.head_hidden = 4;
        nc.conditioned = (trial % 2 == 0);
        const int obs_dim = 3, n_actions = 3, n_obj = 2 + trial % 2;
        QNetwork net(obs_dim, n_actions, n_obj, nc, 100 + static_cast<std::uint64_t>(trial));

        Vec obs(obs_dim), w(static_cast<std::size_t>(n_obj));
        for (double& x : obs) x = unif(rng);
        double ws = 0.0;
        for (double& x : w) { x = 0.1 + std::abs(unif(rng)); ws += x; }
        for (double& x : w) x /= ws;
        const Vec* wp = nc.conditioned ? &w : nullptr;
        const int action = trial % n_actions;
        const LossForm loss = (trial % 3 == 0) ? LossForm::Squared : LossForm::Absolute;

        // Keep the absolute-loss targets away from the |.| kink.
        Vec q = net.forward(obs, wp);
        Vec target(static_cast<std::size_t>(n_obj));
        for (int n = 0; n < n_obj; ++n) {
            double d = unif(rng);
            d += (d >= 0.0 ? 0.5 : -0.5);
            target[static_cast<std::size_t>(n)] =
                q[static_cast<std::size_t>(action * n_obj + n)] + d;
        }

        net.zero_grad();
        const double mid = net.backward(obs, wp, action, target, loss);
        const Vec grad = net.flat_grad();
        Vec params = net.flat_params();

        const double h = 1e-5;
        for (std::size_t i = 0; i < params.size(); ++i) {
            const double saved = params[i];
            params[i] = saved + h;
            net.set_flat_params(params);
            net.zero_grad();
            const double up = net.backward(obs, wp, action, target, loss);
            params[i] = saved - h;
            net.set_flat_params(params);
            net.zero_grad();
            const double dn = net.backward(obs, wp, action, target, loss);
            params[i] = saved;
            const double fd = (up - dn) / (2.0 * h);
            // Skip parameters whose interval straddles a ReLU/|.| kink: the
            // one-sided differences disagree there and the central difference
            // is meaningless (the loss is nonsmooth on a measure-zero set).
            const double fwd = (up - mid) / h, bwd = (mid - dn) / h;
            if (std::abs(fwd - bwd) > 1e-3 * std::max(1.0, std::abs(fd))) continue;
            const double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-6});
            const double rel = std::abs(grad[i] - fd) / denom;
            worst = std::max(worst, rel);
            if (rel > 1e-4) { ok = false; break; }
        }
        net.set_flat_params(params);
    }
    const double dt = now_seconds() - t0;
    ok = ok && dt < 60.0;
    report(1, ok, fmt("gradients match central differences on 100 triples "
                      "(worst rel err %.2e, %.1fs)", worst, dt));
}

// ---------------------------------------------------------------------------
// 2. Dueling identity: action-mean of Q equals the value stream.

void criterion_2() {
    Rng rng(22);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    NetConfig nc;
    nc.hidden = {16, 16};
    nc.head_hidden = 8;
    nc.conditioned = true;
    QNetwork net(4, 5, 3, nc, 7);

    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Vec obs(4), w(3);
        for (double& x : obs) x = unif(rng);
        for (double& x : w) x = std::abs(unif(rng)) + 0.01;
        Vec q = net.forward(obs, &w);
        Vec v = net.value_stream(obs, &w);
        for (int n = 0; n < 3; ++n) {
            double mean = 0.0;
            for (int a = 0; a < 5; ++a) mean += q[static_cast<std::size_t>(a * 3 + n)];
            mean /= 5.0;
            worst = std::max(worst, std::abs(mean - v[static_cast<std::size_t>(n)]));
        }
    }
    report(2, worst <= 1e-6,
           fmt("dueling mean_a Q == V on 1000 inputs (worst dev %.2e)", worst));
}

// ---------------------------------------------------------------------------
// 3. Crowding distance vs brute force.

void criterion_3() {
    Rng rng(33);
    std::uniform_int_distribution<int> n_pts(1, 20), n_dim(1, 4);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    std::uniform_int_distribution<int> dup(0, 3);
    bool ok = true;
    for (int trial = 0; trial < 500 && ok; ++trial) {
        const int n = n_pts(rng), d = n_dim(rng);
        std::vector<Vec> pts(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(d)));
        for (auto& p : pts)
            for (double& x : p) x = unif(rng);
        // Occasionally inject duplicates and a constant objective.
        if (dup(rng) == 0 && n > 1) pts[0] = pts[static_cast<std::size_t>(n - 1)];
        if (dup(rng) == 0)
            for (auto& p : pts) p[0] = 1.5;
        Vec got = crowding_distance(pts);
        Vec want = testutil::brute_force_crowding(pts);
        ok = got.size() == want.size();
        for (std::size_t i = 0; ok && i < got.size(); ++i) ok = got[i] == want[i];
    }
    report(3, ok, "crowding distance matches brute force exactly on 500 random sets");
}

// ---------------------------------------------------------------------------
// 4. DER invariants under a biased trajectory stream.

bool buffer_invariants(const DiverseBuffer& buf) {
    std::size_t fifo_n = 0;
    for (const auto& tr : buf.fifo_trajectories()) {
        if (tr->ts.empty() || !tr->ts.back().terminal) return false;
        fifo_n += tr->ts.size();
    }
    if (buf.open_trajectory()) fifo_n += buf.open_trajectory()->ts.size();
    if (fifo_n != buf.fifo_transitions()) return false;

    std::size_t div_n = 0;
    for (const auto& tr : buf.diverse_trajectories()) {
        if (tr->ts.empty() || !tr->ts.back().terminal) return false;
        div_n += tr->ts.size();
    }
    if (div_n != buf.diverse_transitions()) return false;
    if (div_n > buf.diverse_capacity()) return false;
    // FIFO may exceed its nominal cap only by the still-open trajectory.
    const std::size_t open_n = buf.open_trajectory() ? buf.open_trajectory()->ts.size() : 0;
    return buf.fifo_transitions() <= buf.fifo_capacity() + open_n;
}

void criterion_4() {
    DiverseBuffer buf({.capacity = 400, .der = true, .gamma = 1.0});
    Rng rng(44);
    std::normal_distribution<double> recent(5.0, 0.3);
    std::uniform_real_distribution<double> spread(0.5, 10.0);
    std::uniform_int_distribution<int> len_d(1, 3), pick(0, 19);

    bool invariants = true;
    for (int i = 0; i < 10000; ++i) {
        // Nonstationary stream mimicking a drifting weight preference: the
        // first 10% of trajectories explore all four orthants; the remaining
        // 90% concentrate near (5,5), so overall 95% of signatures sit in the
        // (+,+) orthant and the FIFO window holds only the recent cluster.
        const bool rare = i < 1000 && pick(rng) < 10;
        double sx = rare ? -spread(rng) : recent(rng);
        double sy = rare && pick(rng) % 2 == 0 ? -spread(rng) : recent(rng);
        const int len = len_d(rng);
        for (int k = 0; k < len; ++k) {
            Transition t;
            t.obs = {static_cast<double>(k)};
            t.next_obs = {static_cast<double>(k + 1)};
            t.action = 0;
            t.terminal = (k + 1 == len);
            const double f = (k + 1 == len) ? 1.0 : 0.0;  // signature on last step
            t.reward = {f * sx, f * sy};
            buf.push(std::move(t));
        }
        if (invariants && !buffer_invariants(buf)) invariants = false;
    }

    auto bbox_volume = [](const std::vector<Vec>& sigs) {
        if (sigs.empty()) return 0.0;
        Vec lo = sigs.front(), hi = sigs.front();
        for (const auto& s : sigs)
            for (std::size_t m = 0; m < s.size(); ++m) {
                lo[m] = std::min(lo[m], s[m]);
                hi[m] = std::max(hi[m], s[m]);
            }
        double v = 1.0;
        for (std::size_t m = 0; m < lo.size(); ++m) v *= hi[m] - lo[m];
        return v;
    };
    std::vector<Vec> fifo_sigs, div_sigs;
    for (const auto& tr : buf.fifo_trajectories()) fifo_sigs.push_back(tr->signature);
    for (const auto& tr : buf.diverse_trajectories()) div_sigs.push_back(tr->signature);
    const double vf = bbox_volume(fifo_sigs), vd = bbox_volume(div_sigs);
    const bool volume_ok = vf > 0.0 && vd >= 10.0 * vf;

    // Failed consideration must leave the buffer bit-exactly unchanged.
    // Duplicates of stored interior signatures are reliably rejected; probe
    // until one is.
    bool saw_rejection = false, restore_ok = true;
    for (const Vec& sig : div_sigs) {
        std::ostringstream before;
        buf.dump_signatures(before);
        auto before_ptrs = buf.diverse_trajectories();
        auto dup = std::make_shared<Trajectory>();
        Transition t;
        t.obs = {0.0};
        t.next_obs = {1.0};
        t.terminal = true;
        t.reward = sig;
        dup->ts.push_back(std::move(t));
        dup->signature = sig;
        if (buf.der_consider(dup)) continue;  // accepted: not the probe we want
        saw_rejection = true;
        std::ostringstream after;
        buf.dump_signatures(after);
        restore_ok = before.str() == after.str() && before_ptrs == buf.diverse_trajectories();
        break;
    }
    restore_ok = restore_ok && saw_rejection;

    report(4, invariants && volume_ok && restore_ok,
           fmt("DER: diverse bbox volume %.1f vs FIFO %.2f (>=10x %s), invariants %s, "
               "failed consideration bit-exact %s",
               vd, vf, volume_ok ? "yes" : "NO", invariants ? "held" : "VIOLATED",
               restore_ok ? "yes" : "NO"));
}

// ---------------------------------------------------------------------------
// 5. Prioritized sampling chi-square.

// Regularized upper incomplete gamma Q(a, x) (series / continued fraction).
double gammq(double a, double x) {
    auto gser = [](double a_, double x_) {
        double sum = 1.0 / a_, del = sum, ap = a_;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0;
            del *= x_ / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-12) break;
        }
        return sum * std::exp(-x_ + a_ * std::log(x_) - std::lgamma(a_));
    };
    auto gcf = [](double a_, double x_) {
        double b = x_ + 1.0 - a_, c = 1e300, d = 1.0 / b, h = d;
        for (int i = 1; i < 500; ++i) {
            const double an = -i * (i - a_);
            b += 2.0;
            d = an * d + b;
            if (std::abs(d) < 1e-300) d = 1e-300;
            c = b + an / c;
            if (std::abs(c) < 1e-300) c = 1e-300;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < 1e-12) break;
        }
        return std::exp(-x_ + a_ * std::log(x_) - std::lgamma(a_)) * h;
    };
    if (x < a + 1.0) return 1.0 - gser(a, x);
    return gcf(a, x);
}

void criterion_5() {
    DiverseBuffer buf({.capacity = 100, .der = false, .gamma = 1.0});
    Rng rng(55);
    // Deltas bounded away from zero keep every expected cell count >= ~190,
    // where the chi-square approximation is sound.
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    for (int i = 0; i < 100; ++i) {
        Transition t;
        t.obs = {static_cast<double>(i)};
        t.next_obs = {static_cast<double>(i)};
        t.terminal = true;
        t.reward = {0.0};
        buf.push(std::move(t));
    }
    Vec delta(100);
    std::vector<int> slots(100);
    for (int i = 0; i < 100; ++i) {
        slots[static_cast<std::size_t>(i)] = i;
        delta[static_cast<std::size_t>(i)] = unif(rng);
    }
    buf.update_priorities(slots, delta);

    std::vector<long> count(100, 0);
    const long draws = 100000;
    for (long i = 0; i < draws; i += 1000)
        for (const auto& s : buf.sample(1000, rng)) ++count[static_cast<std::size_t>(s.slot)];

    double total_mass = 0.0;
    Vec mass(100);
    for (int i = 0; i < 100; ++i) {
        const double m = std::pow(delta[static_cast<std::size_t>(i)] + 0.01, 2.0);
        mass[static_cast<std::size_t>(i)] = m;
        total_mass += m;
    }
    double chi2 = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double expect = draws * mass[static_cast<std::size_t>(i)] / total_mass;
        const double diff = count[static_cast<std::size_t>(i)] - expect;
        chi2 += diff * diff / expect;
    }
    const double p = gammq(99.0 / 2.0, chi2 / 2.0);
    report(5, p > 0.01,
           fmt("prioritized sampling chi-square: stat %.1f (99 dof), p = %.3f > 0.01",
               chi2, p));
}

// ---------------------------------------------------------------------------
// 6. Environment ground truths.

void criterion_6() {
    // Fuel: idle -0.005 every frame, accelerate adds -0.025, mine adds -0.05.
    MinecartEnv cart(MinecartConfig::defaults());
    Rng rng(66);
    cart.reset(rng);
    const int fuel_idx = cart.objective_count() - 1;
    auto fuel = [&](int action) {
        return cart.step(action, nullptr).reward[static_cast<std::size_t>(fuel_idx)];
    };
    bool fuel_ok = fuel(kDoNothing) == -0.005 && fuel(kBrake) == -0.005 &&
                   fuel(kTurnLeft) == -0.005 && fuel(kTurnRight) == -0.005 &&
                   fuel(kAccelerate) == -0.005 + -0.025 && fuel(kMine) == -0.005 + -0.05;

    // Capacity invariant over 1e6 random frames.
    bool cap_ok = true;
    std::uniform_int_distribution<int> act(0, 5);
    cart.reset(rng);
    for (long i = 0; i < 1000000; ++i) {
        auto sr = cart.step(act(rng), &rng);
        double held = 0.0;
        const auto& content = cart.state().content;
        for (double c : content) held += c;
        if (held > cart.config().capacity + 1e-12) { cap_ok = false; break; }
        if (sr.terminal) cart.reset(rng);
    }

    // DST rewards: (0,-1) on every step except treasure collection.
    DstEnv dst(make_dst_map(11, 0.95));
    std::uniform_int_distribution<int> dst_act(0, 3);
    dst.reset(rng);
    bool dst_ok = true;
    for (int i = 0; i < 20000; ++i) {
        auto sr = dst.step(dst_act(rng), nullptr);
        if (sr.reward[1] != -1.0) { dst_ok = false; break; }
        const bool treasure = sr.reward[0] != 0.0;
        if (treasure && !sr.terminal) { dst_ok = false; break; }
        if (sr.terminal) dst.reset(rng);
    }

    report(6, fuel_ok && cap_ok && dst_ok,
           fmt("minecart fuel sums %s, capacity invariant over 1e6 frames %s, "
               "DST rewards (0,-1) off-treasure %s",
               fuel_ok ? "exact" : "WRONG", cap_ok ? "held" : "VIOLATED",
               dst_ok ? "yes" : "NO"));
}

// ---------------------------------------------------------------------------
// 7. Oracles: DP vs exhaustive search; Minecart partition has 7 regions.

void criterion_7() {
    bool dst_ok = true;
    for (int k : {3, 5}) {
        const DstMap map = make_dst_map(k, 0.95);
        const double gamma = 0.95;
        DstOracle oracle(map, gamma);

        // Exhaustive: enumerate action sequences, dedupe outcomes by the
        // (treasure cell, depth) pair actually reached.
        std::set<std::pair<int, int>> reached;
        const int max_depth = 2 * k + 2;
        struct Node { int r, c, depth; };
        std::vector<Node> stack{{0, 0, 0}};
        std::set<std::tuple<int, int, int>> seen;
        while (!stack.empty()) {
            Node n = stack.back();
            stack.pop_back();
            if (!seen.insert({n.r, n.c, n.depth}).second) continue;
            if (n.depth >= max_depth) continue;
            for (int a = 0; a < 4; ++a) {
                int r = n.r + (a == kDown) - (a == kUp);
                int c = n.c + (a == kRight) - (a == kLeft);
                if (r < 0 || r >= map.rows || c < 0 || c >= map.cols ||
                    map.at(r, c) == DstMap::Cell::Bottom) {
                    r = n.r;
                    c = n.c;
                }
                if (map.at(r, c) == DstMap::Cell::Treasure)
                    reached.insert({r * map.cols + c, n.depth + 1});
                else
                    stack.push_back({r, c, n.depth + 1});
            }
        }
        std::vector<Vec> outcomes;
        for (auto [cell, depth] : reached) {
            const double v = map.value_at(cell / map.cols, cell % map.cols);
            outcomes.push_back({std::pow(gamma, depth - 1) * v,
                                -(1.0 - std::pow(gamma, depth)) / (1.0 - gamma)});
        }
        // Never collecting anything: bounded idle value.
        outcomes.push_back({0.0, -(1.0 - std::pow(gamma, map.max_episode_steps)) / (1.0 - gamma)});

        for (const auto& w : simplex_grid(2, 101)) {
            double best = -1e300;
            for (const auto& o : outcomes) best = std::max(best, scalarize(o, w));
            const double dp = scalarize(oracle.optimal(w).value, w);
            if (std::abs(dp - best) > 1e-9) { dst_ok = false; break; }
        }
        if (!dst_ok) break;
    }

    ExperimentConfig cart;
    cart.env_type = "minecart";
    cart.frame_skip = 4;
    cart.agent.gamma = 0.98;
    auto oracle = make_oracle(cart);
    std::set<int> regions;
    for (const auto& e : partition_simplex(*oracle, 200)) regions.insert(e.policy_id);

    report(7, dst_ok && regions.size() == 7,
           fmt("DST DP == exhaustive search on staircase maps %s; minecart partition "
               "has %zu argmax regions (want 7)",
               dst_ok ? "yes" : "NO", regions.size()));
}

// ---------------------------------------------------------------------------
// 8-10. Training experiments.

ExperimentConfig dst_experiment(const std::string& agent_type) {
    ExperimentConfig cfg;
    cfg.env_type = "dst";
    cfg.env_file = std::string(ACCEPTANCE_ASSETS_DIR) + "/dst_small.map";
    cfg.agent_type = agent_type;
    cfg.agent.gamma = 0.95;
    cfg.agent.eps_start = 1.0;
    cfg.agent.eps_end = 0.01;
    cfg.agent.eps_decay_steps = 15000;
    cfg.agent.net.hidden = {32, 32};
    cfg.agent.net.head_hidden = 32;
    // The squared-loss per-objective nets need a gentler step to stay stable.
    cfg.agent.net.lr = agent_type == "naive" ? 0.001 : 0.002;
    cfg.replay.gamma = cfg.agent.gamma;
    return cfg;
}

double mean_regret_from(const RunResult& run, long min_step) {
    double sum = 0.0;
    long n = 0;
    for (const auto& e : run.episodes)
        if (e.step >= min_step) { sum += e.regret; ++n; }
    return n ? sum / n : 1e300;
}

void criterion_8() {
    ExperimentConfig probe = dst_experiment("cn");
    probe.schedule.mode = ScheduleMode::Fixed;
    probe.schedule.fixed = WeightVector::normalized({0.85, 0.15});
    auto oracle = make_oracle(probe);
    const double vstar = scalarize(oracle->optimal(*probe.schedule.fixed).value,
                                   *probe.schedule.fixed);
    const double budget = 0.05 * std::abs(vstar);

    bool all_ok = true;
    std::string detail = fmt("fixed-w DST, budget %.3f:", budget);
    for (const char* agent : {"mo", "cn", "cn-active", "cn-uvfa", "uvfa", "naive"}) {
        ExperimentConfig cfg = dst_experiment(agent);
        cfg.schedule = probe.schedule;
        cfg.total_steps = 30000;
        const double t0 = now_seconds();
        double worst = 0.0;
        for (std::uint64_t seed : {1, 2, 3}) {
            RunResult run = run_experiment(cfg, seed);
            worst = std::max(worst, mean_regret_from(run, cfg.total_steps - 2000));
        }
        const double dt = now_seconds() - t0;
        const bool ok = worst <= budget && dt < 300.0;
        all_ok = all_ok && ok;
        detail += fmt(" %s %.3f/%.0fs%s", agent, worst, dt, ok ? "" : "(FAIL)");
    }
    report(8, all_ok, detail);
}

struct PairedOutcome {
    double mean_a = 0.0, mean_b = 0.0;
    int wins = 0, seeds = 0;
    double sign_p = 1.0;
};

PairedOutcome paired_experiment(ExperimentConfig a, ExperimentConfig b) {
    PairedOutcome out;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    for (std::uint64_t seed : seeds) {
        const double ra = mean_regret_from(run_experiment(a, seed), 0);
        const double rb = mean_regret_from(run_experiment(b, seed), 0);
        out.mean_a += ra;
        out.mean_b += rb;
        if (ra < rb) ++out.wins;
        ++out.seeds;
    }
    out.mean_a /= out.seeds;
    out.mean_b /= out.seeds;
    // One-sided sign test: P(X >= wins), X ~ Binomial(seeds, 1/2).
    double p = 0.0;
    for (int k = out.wins; k <= out.seeds; ++k) {
        double c = 1.0;
        for (int i = 0; i < k; ++i) c = c * (out.seeds - i) / (i + 1);
        p += c;
    }
    out.sign_p = p / std::pow(2.0, out.seeds);
    return out;
}

void criterion_9() {
    const double t0 = now_seconds();
    ExperimentConfig cn = dst_experiment("cn");
    cn.schedule.mode = ScheduleMode::Sparse;
    cn.schedule.period = 5000;
    cn.schedule.seed = 7;
    cn.replay.der = true;
    cn.total_steps = 50000;
    ExperimentConfig mo = dst_experiment("mo");
    mo.schedule = cn.schedule;
    mo.replay.der = false;
    mo.total_steps = cn.total_steps;

    PairedOutcome r = paired_experiment(cn, mo);
    const double dt = now_seconds() - t0;
    const bool ok = r.mean_a < r.mean_b && dt < 1800.0;
    report(9, ok,
           fmt("sparse weights: CN+DER mean regret %.3f < MO %.3f (%d/%d seeds, "
               "sign-test p %.3f, %.0fs)",
               r.mean_a, r.mean_b, r.wins, r.seeds, r.sign_p, dt));
}

void criterion_10() {
    ExperimentConfig cn = dst_experiment("cn");
    cn.schedule.mode = ScheduleMode::Regular;
    cn.schedule.episodes_per_leg = 10;
    cn.schedule.seed = 7;
    cn.total_steps = 50000;
    ExperimentConfig mn = dst_experiment("mn");
    mn.schedule = cn.schedule;
    mn.total_steps = cn.total_steps;

    PairedOutcome r = paired_experiment(cn, mn);
    report(10, r.mean_a < r.mean_b,
           fmt("regular weights: CN mean regret %.3f < MN %.3f (%d/%d seeds, "
               "sign-test p %.3f)",
               r.mean_a, r.mean_b, r.wins, r.seeds, r.sign_p));
}

// ---------------------------------------------------------------------------
// 11. Policy-set bookkeeping vs brute force.

void criterion_11() {
    Rng rng(111);
    std::uniform_int_distribution<int> n_stored(0, 6), n_w(1, 5), n_dim(2, 3), kap(0, 2);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double kappas[] = {0.0, 0.01, 0.1};

    auto random_weight = [&](int d) {
        Vec w(static_cast<std::size_t>(d));
        double s = 0.0;
        for (double& x : w) { x = 0.05 + std::abs(unif(rng)); s += x; }
        for (double& x : w) x /= s;
        return WeightVector::normalized(std::move(w));
    };

    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        const int d = n_dim(rng);
        const double kappa = kappas[kap(rng)];
        std::vector<Vec> stored(static_cast<std::size_t>(n_stored(rng)),
                                Vec(static_cast<std::size_t>(d)));
        for (auto& v : stored)
            for (double& x : v) x = unif(rng);
        std::vector<WeightVector> weights;
        for (int i = n_w(rng); i > 0; --i) weights.push_back(random_weight(d));
        Vec cand(static_cast<std::size_t>(d));
        for (double& x : cand) x = unif(rng);
        if (trial % 5 == 0 && !stored.empty()) cand = stored.front();  // near-tie path

        // Brute-force is_improvement.
        bool want_improve = stored.empty();
        for (const auto& w : weights) {
            double best = -1e300;
            for (const auto& v : stored) best = std::max(best, scalarize(v, w));
            if (!stored.empty() && scalarize(cand, w) > best - kappa) want_improve = true;
        }
        if (is_improvement(cand, stored, weights, kappa) != want_improve) { ok = false; break; }

        // Brute-force prune mask: an entry survives iff it is the selected
        // (most recent within kappa of the max) entry for some weight.
        std::vector<bool> want_keep(stored.size(), false);
        for (const auto& w : weights) {
            if (stored.empty()) break;
            double best = -1e300;
            for (const auto& v : stored) best = std::max(best, scalarize(v, w));
            for (std::size_t i = stored.size(); i-- > 0;)
                if (scalarize(stored[i], w) >= best - kappa) { want_keep[i] = true; break; }
        }
        if (prune_redundant(stored, weights, kappa) != want_keep) { ok = false; break; }
    }

    // Simulated maintenance: after every change, no surviving entry is
    // kappa-dominated at every encountered weight.
    for (int sim = 0; sim < 100 && ok; ++sim) {
        const int d = n_dim(rng);
        const double kappa = kappas[kap(rng)];
        std::vector<Vec> pi;
        std::vector<WeightVector> seen;
        for (int change = 0; change < 20; ++change) {
            seen.push_back(random_weight(d));
            Vec cand(static_cast<std::size_t>(d));
            for (double& x : cand) x = unif(rng);
            if (is_improvement(cand, pi, seen, kappa)) {
                pi.push_back(cand);
                std::vector<bool> keep = prune_redundant(pi, seen, kappa);
                std::vector<Vec> next;
                for (std::size_t i = 0; i < pi.size(); ++i)
                    if (keep[i]) next.push_back(pi[i]);
                pi = std::move(next);
            }
            for (const auto& v : pi) {
                bool useful = false;
                for (const auto& w : seen) {
                    double best = -1e300;
                    for (const auto& u : pi) best = std::max(best, scalarize(u, w));
                    if (scalarize(v, w) >= best - kappa) { useful = true; break; }
                }
                if (!useful) { ok = false; break; }
            }
            if (!ok) break;
        }
    }
    report(11, ok, "policy-set bookkeeping matches brute force on 1000 instances "
                   "and 100 simulated weight-change sequences");
}

// ---------------------------------------------------------------------------
// 12. Determinism.

void criterion_12() {
    ExperimentConfig cfg = dst_experiment("cn");
    cfg.schedule.mode = ScheduleMode::Sparse;
    cfg.schedule.period = 1000;
    cfg.schedule.seed = 3;
    cfg.replay.der = true;
    cfg.total_steps = 4000;

    bool ok = true;
    for (std::uint64_t seed : {1, 9}) {
        std::ostringstream a, b;
        write_run_csv(run_experiment(cfg, seed), a);
        write_run_csv(run_experiment(cfg, seed), b);
        if (a.str() != b.str() || a.str().empty()) { ok = false; break; }
    }
    report(12, ok, "identical config+seed produces bit-identical run logs, twice");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    if (g_failures) std::printf("ACCEPTANCE: %d criterion(s) failed\n", g_failures);
    else std::printf("ACCEPTANCE: all 12 criteria passed\n");
    return g_failures ? 1 : 0;
}
