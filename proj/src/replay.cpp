#include "morl/replay.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "morl/momath.hpp"

namespace morl {

Vec trajectory_signature(const Trajectory& traj, double gamma) {
    if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("signature: gamma out of (0,1]");
    if (traj.ts.empty()) return {};
    Vec sig(traj.ts.front().reward.size(), 0.0);
    double g = 1.0;
    for (const Transition& t : traj.ts) {
        for (std::size_t i = 0; i < sig.size(); ++i) sig[i] += g * t.reward[i];
        g *= gamma;
    }
    return sig;
}

DiverseBuffer::DiverseBuffer(Config cfg)
    : cfg_(cfg),
      cap_fifo_(cfg.der ? cfg.capacity / 2 : cfg.capacity),
      cap_diverse_(cfg.der ? cfg.capacity - cfg.capacity / 2 : 0),
      tree_(cfg.capacity + 1) {}

double DiverseBuffer::mass(double delta) const {
    return std::pow(delta + cfg_.priority_eps, cfg_.priority_alpha);
}

int DiverseBuffer::alloc_slot(Transition* t) {
    int slot;
    if (!free_slots_.empty()) {
        slot = free_slots_.back();
        free_slots_.pop_back();
    } else {
        slot = static_cast<int>(slots_.size());
        slots_.push_back(nullptr);
    }
    slots_[slot] = t;
    return slot;
}

void DiverseBuffer::free_trajectory_slots(Trajectory& traj) {
    for (Transition& t : traj.ts) {
        if (t.slot < 0) continue;
        tree_.set(static_cast<std::size_t>(t.slot), 0.0);
        slots_[t.slot] = nullptr;
        free_slots_.push_back(t.slot);
        t.slot = -1;
    }
}

std::shared_ptr<Trajectory> DiverseBuffer::push(Transition t) {
    if (!open_) {
        open_ = std::make_shared<Trajectory>();
        open_->id = next_traj_id_++;
    }
    t.traj_id = open_->id;
    t.priority = max_priority_;
    open_->ts.push_back(std::move(t));
    Transition& stored = open_->ts.back();
    stored.slot = alloc_slot(&stored);
    tree_.set(static_cast<std::size_t>(stored.slot), mass(stored.priority));
    ++fifo_count_;

    if (stored.terminal) {
        open_->signature = trajectory_signature(*open_, cfg_.gamma);
        fifo_.push_back(std::move(open_));
        open_ = nullptr;
    }

    std::shared_ptr<Trajectory> evicted;
    if (fifo_count_ > cap_fifo_ && !fifo_.empty()) {
        evicted = fifo_.front();
        fifo_.pop_front();
        fifo_count_ -= evicted->ts.size();
        bool kept = false;
        if (cfg_.der) kept = der_consider(evicted);
        if (!kept) free_trajectory_slots(*evicted);
    }
    return evicted;
}

bool DiverseBuffer::der_consider(const std::shared_ptr<Trajectory>& traj) {
    const std::size_t len = traj->ts.size();
    if (len > cap_diverse_) {
        std::cerr << "morl: trajectory of " << len
                  << " transitions exceeds diverse capacity " << cap_diverse_
                  << ", discarded\n";
        return false;
    }

    // Work on a copy; mutate the real buffer only on acceptance, which makes
    // the algorithm's "undo deletions" branch a no-op.
    std::vector<std::shared_ptr<Trajectory>> working = diverse_;
    std::size_t working_count = diverse_count_;
    while (working_count + len > cap_diverse_) {
        std::vector<Vec> sigs;
        sigs.reserve(working.size() + 1);
        for (const auto& tr : working) sigs.push_back(tr->signature);
        sigs.push_back(traj->signature);
        const Vec div = crowding_distance(sigs);

        std::size_t min_stored = 0;
        for (std::size_t i = 1; i < working.size(); ++i)
            if (div[i] < div[min_stored]) min_stored = i;
        if (working.empty() || div.back() <= div[min_stored]) return false;

        working_count -= working[min_stored]->ts.size();
        working.erase(working.begin() + static_cast<std::ptrdiff_t>(min_stored));
    }

    for (const auto& tr : diverse_)
        if (std::find(working.begin(), working.end(), tr) == working.end())
            free_trajectory_slots(*tr);
    working.push_back(traj);
    diverse_ = std::move(working);
    diverse_count_ = working_count + len;
    return true;
}

std::vector<DiverseBuffer::Sample> DiverseBuffer::sample(std::size_t batch, Rng& rng) {
    if (size() == 0) throw std::runtime_error("DiverseBuffer::sample: empty buffer");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Sample> out;
    out.reserve(batch);
    const std::size_t n_slots = slots_.size();
    for (std::size_t i = 0; i < batch; ++i) {
        const double u = unif(rng) * tree_.total();
        std::size_t slot = tree_.find(u);
        // Zero-mass leaves have empty intervals; only exact boundary hits can
        // land on one. Walk forward to the next live slot.
        std::size_t guard = 0;
        while ((slot >= n_slots || slots_[slot] == nullptr) && guard++ <= n_slots)
            slot = (slot + 1) % n_slots;
        out.push_back({slots_[slot], static_cast<int>(slot)});
    }
    return out;
}

void DiverseBuffer::update_priorities(const std::vector<int>& slots,
                                      const Vec& td_active,
                                      const Vec* td_sampled) {
    if (slots.size() != td_active.size() || (td_sampled && td_sampled->size() != slots.size()))
        throw std::invalid_argument("update_priorities: size mismatch");
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const int slot = slots[i];
        if (slot < 0 || static_cast<std::size_t>(slot) >= slots_.size() || !slots_[slot])
            throw std::out_of_range("update_priorities: bad slot");
        double delta = std::abs(td_active[i]);
        if (td_sampled) delta = 0.5 * (delta + std::abs((*td_sampled)[i]));
        slots_[slot]->priority = delta;
        tree_.set(static_cast<std::size_t>(slot), mass(delta));
        max_priority_ = std::max(max_priority_, delta);
    }
}

void DiverseBuffer::dump_signatures(std::ostream& out) const {
    auto row = [&out](const char* kind, const Vec& sig) {
        out << kind;
        for (double v : sig) out << ',' << v;
        out << '\n';
    };
    for (const auto& tr : fifo_) row("fifo", tr->signature);
    for (const auto& tr : diverse_) row("diverse", tr->signature);
}

}  // namespace morl
