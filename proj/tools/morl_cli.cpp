// morl command-line front end: train, aggregate, and oracle/partition queries.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "morl/runner.hpp"

namespace fs = std::filesystem;
using namespace morl;

namespace {

std::string dir_of(const std::string& path) {
    fs::path p(path);
    return p.has_parent_path() ? p.parent_path().string() : std::string();
}

ExperimentConfig load_config(const std::string& path) {
    return parse_experiment(Ini::load_file(path), dir_of(path));
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoull(tok));
    if (out.empty()) throw std::runtime_error("empty seed list");
    return out;
}

void write_outputs(const std::vector<RunResult>& runs, const std::string& out_dir) {
    fs::create_directories(out_dir);
    for (const auto& run : runs) {
        std::ofstream f(out_dir + "/run_" + std::to_string(run.seed) + ".csv");
        write_run_csv(run, f);
    }
    AggregateResult agg = aggregate_runs(runs);
    std::ofstream a(out_dir + "/aggregate.csv");
    write_aggregate_csv(agg, a);
    std::ofstream s(out_dir + "/regret.svg");
    write_regret_svg(agg, s);
    std::cout << "runs=" << agg.runs << " episodes=" << agg.mean_regret.size()
              << " overall_mean_regret=" << agg.overall_mean_regret
              << " final_mean_regret=" << agg.final_mean_regret << '\n';
}

int cmd_run(const std::string& config, const std::string& seeds, const std::string& out_dir) {
    ExperimentConfig cfg = load_config(config);
    if (!seeds.empty()) cfg.seeds = parse_seeds(seeds);

    std::vector<RunResult> runs(cfg.seeds.size());
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
        workers.emplace_back(
            [&, i] { runs[i] = run_experiment(cfg, cfg.seeds[i]); });
    for (auto& w : workers) w.join();

    write_outputs(runs, out_dir);
    return 0;
}

int cmd_aggregate(const std::string& dir) {
    std::vector<RunResult> runs;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::string name = e.path().filename().string();
        if (name.rfind("run_", 0) == 0 && e.path().extension() == ".csv")
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        std::ifstream f(p);
        runs.push_back(read_run_csv(f));
    }
    if (runs.empty()) throw std::runtime_error("no run_*.csv files in " + dir);

    AggregateResult agg = aggregate_runs(runs);
    std::ofstream a(dir + "/aggregate.csv");
    write_aggregate_csv(agg, a);
    std::ofstream s(dir + "/regret.svg");
    write_regret_svg(agg, s);
    std::cout << "runs=" << agg.runs << " episodes=" << agg.mean_regret.size()
              << " overall_mean_regret=" << agg.overall_mean_regret
              << " final_mean_regret=" << agg.final_mean_regret << '\n';
    return 0;
}

int cmd_partition(const std::string& config, long resolution) {
    ExperimentConfig cfg = load_config(config);
    auto oracle = make_oracle(cfg);
    auto partition = partition_simplex(*oracle, static_cast<std::size_t>(resolution));
    write_partition_csv(partition, *oracle, std::cout);
    return 0;
}

int cmd_oracle(const std::string& config, const std::string& weight) {
    ExperimentConfig cfg = load_config(config);
    auto oracle = make_oracle(cfg);
    Vec raw;
    std::stringstream ss(weight);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) raw.push_back(std::stod(tok));
    WeightVector w = WeightVector::normalized(std::move(raw));
    OracleResult res = oracle->optimal(w);
    std::cout << "policy=" << res.policy_name << " id=" << res.policy_id << " value=";
    for (std::size_t i = 0; i < res.value.size(); ++i)
        std::cout << (i ? "," : "") << res.value[i];
    std::cout << " scalarized=" << dot(res.value, w) << '\n';
    return 0;
}

int cmd_dst_gen(int treasures, double gamma, const std::string& out_path) {
    DstMap map = make_dst_map(treasures, gamma);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    map.save(out);
    std::cout << "wrote " << out_path << " (" << map.rows << "x" << map.cols << ", " << treasures
              << " treasures)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-objective RL lab: training runs, regret aggregation, and oracles"};
    app.require_subcommand(1);

    std::string config, seeds, out_dir = "out", dir, weight, gen_out = "dst.map";
    long resolution = 200;
    int gen_treasures = 11;
    double gen_gamma = 0.95;

    auto* run = app.add_subcommand("run", "train one experiment over one or more seeds");
    run->add_option("config", config, "experiment ini file")->required();
    run->add_option("--seeds", seeds, "comma-separated seed list (overrides the config)");
    run->add_option("--out", out_dir, "output directory");

    auto* agg = app.add_subcommand("aggregate", "aggregate run_*.csv logs in a directory");
    agg->add_option("dir", dir, "directory of run logs")->required();

    auto* part = app.add_subcommand("partition", "optimal-policy regions over the weight simplex");
    part->add_option("env-config", config, "experiment ini file (env section is used)")
        ->required();
    part->add_option("--resolution", resolution, "minimum number of simplex grid points");

    auto* orc = app.add_subcommand("oracle", "optimal value for one weight vector");
    orc->add_option("env-config", config, "experiment ini file (env section is used)")->required();
    orc->add_option("--w", weight, "comma-separated weight vector")->required();

    auto* gen = app.add_subcommand("dst-gen", "generate a staircase treasure map");
    gen->add_option("--treasures", gen_treasures, "number of treasures");
    gen->add_option("--gamma", gen_gamma, "discount the values are tuned for");
    gen->add_option("--out", gen_out, "output map path");

    try {
        app.parse(argc, argv);
        if (*run) return cmd_run(config, seeds, out_dir);
        if (*agg) return cmd_aggregate(dir);
        if (*part) return cmd_partition(config, resolution);
        if (*orc) return cmd_oracle(config, weight);
        if (*gen) return cmd_dst_gen(gen_treasures, gen_gamma, gen_out);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
