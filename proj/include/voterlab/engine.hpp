#ifndef VOTERLAB_ENGINE_HPP
#define VOTERLAB_ENGINE_HPP

//! \file engine.hpp
//! Exact sampler for the stationary (p, q) model family on a rhombic box.
//!
//! A walker starts at every interior site, wearing a hat. Each event picks
//! one active walker uniformly at random (the jump chain of independent rate-1
//! clocks). The picked walker drops its hat with probability q, then steps to
//! a uniform neighbour. Landing on the boundary absorbs it: its whole
//! coalescence set takes the boundary vote, or with probability p an
//! independent fair-coin vote. A hatted walker landing on a site held by a
//! hatted walker joins that walker's coalescence set and disappears.
//!
//! Random draws per event, in order: walker index, hat coin (only when
//! 0 < q < 1), direction, then on absorption the noise coin (only when
//! 0 < p < 1) and the fair vote coin (only when the noise applies).

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "oracle.hpp"
#include "rng.hpp"

namespace voterlab {

struct ModelParams {
    double p = 0.0;  // boundary noise
    double q = 0.0;  // hat removal

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

    static constexpr ModelParams voter() { return {0.0, 0.0}; }
    static constexpr ModelParams harmonic() { return {0.0, 1.0}; }
    static constexpr ModelParams percolation() { return {1.0, 1.0}; }
    static constexpr ModelParams cow() { return {1.0, 0.0}; }
};

inline void validate(const ModelParams& m) {
    if (!(m.p >= 0.0 && m.p <= 1.0) || !(m.q >= 0.0 && m.q <= 1.0)) {
        throw DomainError("model parameters must lie in [0,1], got p=" + std::to_string(m.p) +
                          " q=" + std::to_string(m.q));
    }
}

inline constexpr std::uint64_t kDefaultEventCap = 1'000'000'000'000ULL;

enum class SamplerStrategy {
    walkers,   // always run the walker system
    automatic  // q = 1: no walker ever coalesces, so draw each vote directly from its exit law
};

struct SamplerOptions {
    std::uint64_t event_cap = kDefaultEventCap;
    SamplerStrategy strategy = SamplerStrategy::automatic;
};

struct Walker {
    int id = 0;        // origin site index, stable for the walker's lifetime
    int position = 0;  // site index
    int root = 0;      // union-find root of the coalescence set carried by this walker
    bool hatted = true;
};

enum class EventKind { moved, coalesced, absorbed };

struct StepEvent {
    EventKind kind;
    int walker_id;
    int from;  // site index
    int to;    // site index
};

// A stationary configuration and its coalescence partition. Per-site arrays
// cover the whole box; boundary entries hold the fixed vote and class -1.
struct SampleOutcome {
    BoxGeometry geometry;
    std::vector<Vote> votes;
    std::vector<int> class_of;    // class id = smallest member site index
    std::vector<int> class_exit;  // indexed by class id; exit site index, -1 if not sampled
    std::uint64_t seed = 0;
    std::uint64_t events = 0;

    Vote vote(const Site& s) const { return votes[geometry.index(s)]; }
    int class_id(const Site& s) const { return class_of[geometry.index(s)]; }
};

class WalkerSystem {
  public:
    WalkerSystem(const BoxGeometry& g, const ModelParams& params, std::uint64_t seed,
                 std::uint64_t event_cap = kDefaultEventCap)
        : geometry_(g), params_(params), rng_(seed), seed_(seed), event_cap_(event_cap) {
        validate(params);
        const auto n = static_cast<std::size_t>(g.num_sites());
        slot_at_.assign(n, -1);
        hatless_at_.assign(n, 0);
        parent_.resize(n);
        std::iota(parent_.begin(), parent_.end(), 0);
        set_size_.assign(n, 1);
        set_vote_.assign(n, 0);
        set_exit_.assign(n, -1);
        walkers_.reserve(static_cast<std::size_t>(g.num_interior()));
        for (const Site& s : g.interior_sites()) {
            const int idx = g.index(s);
            slot_at_[idx] = static_cast<int>(walkers_.size());
            walkers_.push_back({idx, idx, idx, true});
        }
    }

    const BoxGeometry& geometry() const noexcept { return geometry_; }
    const ModelParams& params() const noexcept { return params_; }
    const std::vector<Walker>& active() const noexcept { return walkers_; }
    std::size_t num_active() const noexcept { return walkers_.size(); }
    std::uint64_t events() const noexcept { return events_; }
    bool done() const noexcept { return walkers_.empty(); }

    // Hatted walker at a site, or nullptr.
    const Walker* hatted_at(const Site& s) const {
        const int slot = slot_at_[geometry_.index(s)];
        return slot < 0 ? nullptr : &walkers_[slot];
    }
    int hatless_count(const Site& s) const { return hatless_at_[geometry_.index(s)]; }

    // Origin sites whose vote the walker carries.
    std::vector<Site> members(const Walker& w) const {
        std::vector<Site> out;
        for (const Site& s : geometry_.interior_sites())
            if (find_root(geometry_.index(s)) == find_root(w.root)) out.push_back(s);
        return out;
    }

    StepEvent step() {
        if (walkers_.empty()) throw StateError("step called on a system with no active walkers");
        if (events_ >= event_cap_) {
            throw RunawayError("event cap of " + std::to_string(event_cap_) + " reached with " +
                               std::to_string(walkers_.size()) + " walkers still active");
        }
        ++events_;
        const int slot = static_cast<int>(rng_.below(walkers_.size()));
        Walker& w = walkers_[slot];

        if (w.hatted && params_.q > 0.0) {
            const bool drop = params_.q >= 1.0 || rng_.bernoulli(params_.q);
            if (drop) {
                w.hatted = false;
                slot_at_[w.position] = -1;
                ++hatless_at_[w.position];
            }
        }

        const int from = w.position;
        const int to = from + geometry_.index_offsets()[rng_.below(6)];
        if (w.hatted) {
            slot_at_[from] = -1;
        } else {
            --hatless_at_[from];
        }

        if (geometry_.is_boundary(to)) {
            Vote v = geometry_.fixed_vote(to);
            if (params_.p > 0.0 && (params_.p >= 1.0 || rng_.bernoulli(params_.p))) v = rng_.coin();
            const int r = find_root(w.root);
            set_vote_[r] = v;
            set_exit_[r] = to;
            const StepEvent ev{EventKind::absorbed, w.id, from, to};
            remove(slot);
            return ev;
        }

        if (w.hatted && slot_at_[to] >= 0) {
            Walker& occupant = walkers_[slot_at_[to]];
            occupant.root = unite(occupant.root, w.root);
            const StepEvent ev{EventKind::coalesced, w.id, from, to};
            remove(slot);
            return ev;
        }

        w.position = to;
        if (w.hatted) {
            slot_at_[to] = slot;
        } else {
            ++hatless_at_[to];
        }
        return {EventKind::moved, w.id, from, to};
    }

    SampleOutcome run_to_absorption() {
        while (!walkers_.empty()) step();
        return outcome();
    }

    // Throws ConsistencyError if the occupancy bookkeeping is broken.
    void check_invariants() const {
        std::vector<int> hatted(slot_at_.size(), 0);
        std::vector<int> hatless(slot_at_.size(), 0);
        for (std::size_t k = 0; k < walkers_.size(); ++k) {
            const Walker& w = walkers_[k];
            if (geometry_.is_boundary(w.position)) throw ConsistencyError("active walker on the boundary");
            if (w.hatted) {
                if (++hatted[w.position] > 1) throw ConsistencyError("two hatted walkers share a site");
                if (slot_at_[w.position] != static_cast<int>(k)) throw ConsistencyError("stale occupancy slot");
            } else {
                ++hatless[w.position];
            }
        }
        for (std::size_t s = 0; s < slot_at_.size(); ++s) {
            if (slot_at_[s] >= 0 && hatted[s] == 0) throw ConsistencyError("occupancy points at an empty site");
            if (hatless[s] != hatless_at_[s]) throw ConsistencyError("hatless count mismatch");
        }
        if (params_.q == 0.0) {
            for (std::size_t s = 0; s < slot_at_.size(); ++s)
                if (hatless[s] != 0) throw ConsistencyError("hatless walker in a q=0 model");
        }
    }

    friend bool operator==(const WalkerSystem& a, const WalkerSystem& b) {
        auto same = [](const Walker& x, const Walker& y) {
            return x.id == y.id && x.position == y.position && x.root == y.root && x.hatted == y.hatted;
        };
        return a.params_ == b.params_ && a.rng_ == b.rng_ && a.events_ == b.events_ &&
               std::equal(a.walkers_.begin(), a.walkers_.end(), b.walkers_.begin(), b.walkers_.end(), same) &&
               a.slot_at_ == b.slot_at_ && a.hatless_at_ == b.hatless_at_ && a.parent_ == b.parent_;
    }

  private:
    int find_root(int s) const {
        while (parent_[s] != s) s = parent_[s];
        return s;
    }

    int find_root(int s) {
        int r = s;
        while (parent_[r] != r) r = parent_[r];
        while (parent_[s] != r) {
            const int next = parent_[s];
            parent_[s] = r;
            s = next;
        }
        return r;
    }

    int unite(int a, int b) {
        a = find_root(a);
        b = find_root(b);
        if (a == b) return a;
        if (set_size_[a] < set_size_[b]) std::swap(a, b);
        parent_[b] = a;
        set_size_[a] += set_size_[b];
        return a;
    }

    // Swap-remove; the walker at `slot` must already be off the occupancy maps.
    void remove(int slot) {
        const int last = static_cast<int>(walkers_.size()) - 1;
        if (slot != last) {
            walkers_[slot] = walkers_[last];
            if (walkers_[slot].hatted) slot_at_[walkers_[slot].position] = slot;
        }
        walkers_.pop_back();
    }

    SampleOutcome outcome() {
        SampleOutcome out{geometry_, {}, {}, {}, seed_, events_};
        const int n = geometry_.num_sites();
        out.votes.resize(n);
        out.class_of.assign(n, -1);
        out.class_exit.assign(n, -1);
        std::vector<int> class_of_root(n, -1);
        for (int s = 0; s < n; ++s) {
            if (geometry_.is_boundary(s)) {
                out.votes[s] = geometry_.fixed_vote(s);
                continue;
            }
            const int r = find_root(s);
            if (class_of_root[r] < 0) {
                class_of_root[r] = s;
                out.class_exit[s] = set_exit_[r];
            }
            out.class_of[s] = class_of_root[r];
            out.votes[s] = set_vote_[r];
        }
        return out;
    }

    BoxGeometry geometry_;
    ModelParams params_;
    Rng rng_;
    std::uint64_t seed_;
    std::uint64_t event_cap_;
    std::uint64_t events_ = 0;
    std::vector<Walker> walkers_;
    std::vector<int> slot_at_;     // slot of the hatted walker at each site, -1 if none
    std::vector<int> hatless_at_;  // hatless walkers per site
    std::vector<int> parent_;
    std::vector<int> set_size_;
    std::vector<Vote> set_vote_;
    std::vector<int> set_exit_;
};

inline WalkerSystem init_system(const BoxGeometry& g, const ModelParams& params, std::uint64_t seed,
                                std::uint64_t event_cap = kDefaultEventCap) {
    return WalkerSystem(g, params, seed, event_cap);
}

inline SampleOutcome run_to_absorption(WalkerSystem& sys) { return sys.run_to_absorption(); }

namespace detail {

// Harmonic fields are reused across replicates of the same box size.
inline std::shared_ptr<const HarmonicField> cached_harmonic(const BoxGeometry& g) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const HarmonicField>> cache;
    std::lock_guard lock(mutex);
    auto& entry = cache[g.side_length()];
    if (!entry) entry = std::make_shared<const HarmonicField>(harmonic_measure(g));
    return entry;
}

// q = 1: every walker drops its hat at its first clock ring, before moving,
// so no two walkers ever coalesce and the votes are independent with
// P(1) = (1 - p) h(x) + p / 2. Classes are singletons; exits are not sampled.
inline SampleOutcome sample_independent(const BoxGeometry& g, const ModelParams& params, std::uint64_t seed) {
    Rng rng(seed);
    std::shared_ptr<const HarmonicField> h;
    if (params.p < 1.0) h = cached_harmonic(g);
    const int n = g.num_sites();
    SampleOutcome out{g, std::vector<Vote>(n), std::vector<int>(n, -1), std::vector<int>(n, -1), seed, 0};
    for (int s = 0; s < n; ++s) {
        if (g.is_boundary(s)) {
            out.votes[s] = g.fixed_vote(s);
            continue;
        }
        const double p1 = h ? (1.0 - params.p) * (*h)[s] + 0.5 * params.p : 0.5;
        out.votes[s] = rng.bernoulli(p1) ? 1 : 0;
        out.class_of[s] = s;
    }
    return out;
}

}  // namespace detail

inline SampleOutcome sample(const BoxGeometry& g, const ModelParams& params, std::uint64_t seed,
                            const SamplerOptions& options = {}) {
    validate(params);
    if (options.strategy == SamplerStrategy::automatic && params.q >= 1.0) {
        return detail::sample_independent(g, params, seed);
    }
    WalkerSystem sys(g, params, seed, options.event_cap);
    return sys.run_to_absorption();
}

}  // namespace voterlab

#endif  // VOTERLAB_ENGINE_HPP
