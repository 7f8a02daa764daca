#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "morl/agents.hpp"
#include "morl/env.hpp"
#include "morl/oracle.hpp"
#include "morl/replay.hpp"
#include "morl/schedule.hpp"
#include "morl/types.hpp"

namespace morl {

/// Minimal ini reader: [section] headers, key = value lines, '#'/';' comments.
class Ini {
  public:
    static Ini load_file(const std::string& path);
    static Ini parse(std::istream& in);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_num(const std::string& section, const std::string& key, double fallback) const;
    long get_int(const std::string& section, const std::string& key, long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Everything needed to reproduce one experiment, straight from the ini
/// sections [env], [agent], [schedule], [replay], [net], [run].
struct ExperimentConfig {
    std::string env_type = "dst";  // "dst" | "minecart"
    std::string env_file;          // map / cart config path; empty -> defaults
    int dst_treasures = 11;        // used when env_file is empty
    int frame_skip = 1;

    std::string agent_type = "cn";
    AgentConfig agent;

    WeightSchedule::Config schedule;
    DiverseBuffer::Config replay;

    long total_steps = 50000;
    std::vector<std::uint64_t> seeds = {1};
};

/// Paths in [env] resolve relative to base_dir (the config file's directory).
ExperimentConfig parse_experiment(const Ini& ini, const std::string& base_dir);

/// Environment with frame-skip already applied, and its matching oracle on the
/// agent-step (skipped) time scale.
std::unique_ptr<Env> make_env(const ExperimentConfig& cfg);
std::unique_ptr<Oracle> make_oracle(const ExperimentConfig& cfg);

struct EpisodeRecord {
    long episode = 0;
    long step = 0;  // agent steps taken before the episode started
    WeightVector w{Vec{1.0}};
    Vec g;  // discounted vector return actually achieved
    double scalarized = 0.0;
    double optimal = 0.0;
    double regret = 0.0;
};

struct RunResult {
    std::uint64_t seed = 0;
    std::vector<EpisodeRecord> episodes;
};

/// One full training run. Regret for an episode is measured against the weight
/// active when the episode started. Deterministic given (cfg, seed).
RunResult run_experiment(const ExperimentConfig& cfg, std::uint64_t seed);

void write_run_csv(const RunResult& run, std::ostream& out);
RunResult read_run_csv(std::istream& in);

struct AggregateResult {
    std::size_t runs = 0;
    int window = 200;
    std::vector<double> mean_regret;  // moving-average smoothed, per episode
    std::vector<double> std_regret;
    std::vector<double> cumulative_regret;  // running sum of the cross-run mean
    double overall_mean_regret = 0.0;
    double final_mean_regret = 0.0;  // mean over the last tenth of episodes
};

/// Truncates all runs to the shortest episode count, smooths each with a
/// trailing moving average, then averages across runs.
AggregateResult aggregate_runs(const std::vector<RunResult>& runs, int window = 200);

void write_aggregate_csv(const AggregateResult& agg, std::ostream& out);
void write_regret_svg(const AggregateResult& agg, std::ostream& out);

}  // namespace morl
