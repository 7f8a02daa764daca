#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "morl/sum_tree.hpp"
#include "morl/types.hpp"

namespace morl {

struct Transition {
    Vec obs;
    int action = 0;
    Vec reward;
    Vec next_obs;
    bool terminal = false;
    std::uint64_t traj_id = 0;
    double priority = 0.0;  // TD-error delta, not the sampling mass
    int slot = -1;
};

/// Complete episode, start to terminal; the atomic unit of diverse storage.
struct Trajectory {
    std::uint64_t id = 0;
    std::deque<Transition> ts;  // deque: stable addresses while growing
    Vec signature;
};

/// Discounted component-wise reward sum from the trajectory's own start.
Vec trajectory_signature(const Trajectory& traj, double gamma);

/// FIFO replay with optional secondary diverse buffer (crowding-distance
/// retention over whole trajectories) and proportional prioritized sampling
/// with mass (delta + eps)^alpha over the union of both buffers.
class DiverseBuffer {
public:
    struct Config {
        std::size_t capacity = 10000;  // total transitions, FIFO + diverse
        bool der = false;              // if set, half the capacity is diverse
        double gamma = 0.95;           // signature discount
        double priority_eps = 0.01;
        double priority_alpha = 2.0;
    };

    explicit DiverseBuffer(Config cfg);

    /// Appends a transition to the open trajectory (closing it on terminal).
    /// If the FIFO overflows, the oldest complete trajectory is evicted whole
    /// and, with DER enabled, considered for the diverse buffer. Returns the
    /// evicted trajectory, if any.
    std::shared_ptr<Trajectory> push(Transition t);

    /// Algorithm: while the diverse buffer lacks room for the candidate, evict
    /// the minimum-crowding-distance trajectory; if the candidate itself is
    /// minimal, reject it and leave the buffer untouched.
    bool der_consider(const std::shared_ptr<Trajectory>& traj);

    struct Sample {
        Transition* t;
        int slot;
    };
    std::vector<Sample> sample(std::size_t batch, Rng& rng);

    /// CN-style callers pass both errors (priority = mean of magnitudes);
    /// single-weight callers pass only the active one.
    void update_priorities(const std::vector<int>& slots,
                           const Vec& td_active,
                           const Vec* td_sampled = nullptr);

    std::size_t size() const { return fifo_count_ + diverse_count_; }
    std::size_t fifo_transitions() const { return fifo_count_; }
    std::size_t diverse_transitions() const { return diverse_count_; }
    std::size_t fifo_capacity() const { return cap_fifo_; }
    std::size_t diverse_capacity() const { return cap_diverse_; }

    const std::deque<std::shared_ptr<Trajectory>>& fifo_trajectories() const { return fifo_; }
    const std::vector<std::shared_ptr<Trajectory>>& diverse_trajectories() const { return diverse_; }
    const Trajectory* open_trajectory() const { return open_.get(); }

    /// Signature scatter dump: one `buffer,sig_0,...,sig_{N-1}` row per
    /// complete trajectory.
    void dump_signatures(std::ostream& out) const;

private:
    int alloc_slot(Transition* t);
    void free_trajectory_slots(Trajectory& traj);
    double mass(double delta) const;

    Config cfg_;
    std::size_t cap_fifo_ = 0;
    std::size_t cap_diverse_ = 0;

    std::shared_ptr<Trajectory> open_;
    std::deque<std::shared_ptr<Trajectory>> fifo_;
    std::vector<std::shared_ptr<Trajectory>> diverse_;
    std::size_t fifo_count_ = 0;
    std::size_t diverse_count_ = 0;

    SumTree tree_;
    std::vector<Transition*> slots_;
    std::vector<int> free_slots_;
    double max_priority_ = 1.0;
    std::uint64_t next_traj_id_ = 1;
};

}  // namespace morl
