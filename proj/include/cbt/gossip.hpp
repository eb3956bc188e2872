#pragma once

// Slotted gossip dissemination over a complete graph of n users.
//
// Time advances in slots. Within a slot every user that has something to do
// is activated once. Two activation disciplines are supported:
//
//  - Asynchronous (default): each user draws an activation instant uniformly
//    inside the slot and acts at that instant. A user that receives a
//    transaction before its own instant acts on it in the same slot. A newly
//    generated transaction enters at a given fraction of its generation slot.
//    Receipts are stamped with the slot in which they happen.
//  - Synchronous: everyone acts on the state at the start of the slot and
//    deliveries land at the next slot boundary (stamped slot + 1).
//
// Push: a holder sends to `phi` distinct random users other than itself,
// whether or not they already hold the transaction. Pull: a non-holder asks
// one random user and receives the transaction if that user holds it.
// Hybrid: push until the holder fraction reaches a switch point, then pull.

#include <cbt/errors.hpp>
#include <cbt/runner.hpp>
#include <cbt/transaction.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

namespace cbt::gossip {

enum class Mode { Push, Pull, Hybrid };
enum class Activation { Asynchronous, Synchronous };

struct GossipConfig {
  std::int64_t n{1000};
  std::int64_t phi{1};
  Mode mode{Mode::Push};
  double hybrid_switch{0.5};
  Activation activation{Activation::Asynchronous};

  void validate() const {
    detail::require(n >= 2, "gossip needs n >= 2");
    detail::require(phi >= 1 && phi <= n - 1, "phi must lie in [1, n-1]");
    detail::require(hybrid_switch > 0.0 && hybrid_switch <= 1.0, "hybrid switch must lie in (0, 1]");
  }
};

// Upper bound on slots a single dissemination may take.
inline std::int64_t slot_cap(std::int64_t n) {
  return static_cast<std::int64_t>(100.0 * std::log(static_cast<double>(n))) + 1000;
}

// Number of holders that constitutes fraction `gamma` of n users.
inline std::int64_t holders_for_level(double gamma, std::int64_t n) {
  detail::require(gamma > 0.0 && gamma <= 1.0, "gamma level must lie in (0, 1]");
  const auto k = static_cast<std::int64_t>(std::ceil(gamma * static_cast<double>(n) - 1e-9));
  return std::clamp<std::int64_t>(k, 1, n);
}

// Spread of one transaction.
struct Dissemination {
  SpectrumAccessTransaction sat;
  SlotTime start{0};               // slot the transaction entered the engine
  double start_time{0.0};          // start + fraction of the slot
  std::vector<double> acquired;    // per user; +inf until received
  std::vector<std::uint32_t> holders;      // receipt order, origin first
  std::vector<SlotTime> receipt_slots;     // stamp of each receipt
  std::vector<double> receipt_times;       // continuous receipt instant
  std::vector<std::int64_t> holder_counts; // [0] = 1, then after each slot
  bool record_verifications{true};
  std::size_t rejected{0};
  bool pulling{false};

  std::int64_t holder_count() const { return static_cast<std::int64_t>(holders.size()); }
  bool holds(UserId u) const { return acquired[u.value] != std::numeric_limits<double>::infinity(); }

  // First slot (relative to start) at which `count` users hold it.
  std::optional<SlotTime> delay_to(std::int64_t count) const {
    if (count <= 0 || count > holder_count()) return std::nullopt;
    return receipt_slots[static_cast<std::size_t>(count - 1)] - start;
  }
};

struct DisseminationRecord {
  SatId sat_id;
  SlotTime start{0};
  std::vector<std::int64_t> holder_counts;
  std::map<double, SlotTime> completion;  // gamma level -> delay in slots
};

class GossipEngine {
 public:
  GossipEngine(GossipConfig cfg, const SignatureScheme& scheme, SlotTime clock = 0)
      : cfg_(cfg), scheme_(&scheme), clock_(clock) {
    cfg_.validate();
    const auto n = static_cast<std::size_t>(cfg_.n);
    activation_time_.assign(n, 0.0);
    drawn_in_.assign(n, std::numeric_limits<SlotTime>::min());
    scheduled_in_.assign(n, std::numeric_limits<SlotTime>::min());
  }

  const GossipConfig& config() const { return cfg_; }
  SlotTime clock() const { return clock_; }
  std::size_t size() const { return flights_.size(); }
  const Dissemination& flight(std::size_t i) const { return flights_.at(i); }
  Dissemination& flight(std::size_t i) { return flights_.at(i); }

  // Places `sat` at its origin during the current slot, `start_fraction` of
  // the way through it. Returns the flight index.
  std::size_t inject(SpectrumAccessTransaction sat, double start_fraction = 0.0, bool record_verifications = true) {
    detail::require(sat.origin().value < static_cast<std::uint32_t>(cfg_.n), "origin outside [0, n)");
    detail::require(sat.generated_at() <= clock_, "transaction generated in the future");
    detail::require(start_fraction >= 0.0 && start_fraction < 1.0, "start fraction must lie in [0, 1)");
    Dissemination d;
    d.sat = std::move(sat);
    d.start = clock_;
    d.start_time = static_cast<double>(clock_) + start_fraction;
    d.record_verifications = record_verifications;
    d.acquired.assign(static_cast<std::size_t>(cfg_.n), std::numeric_limits<double>::infinity());
    const std::uint32_t origin = d.sat.origin().value;
    d.acquired[origin] = d.start_time;
    d.holders.push_back(origin);
    d.receipt_slots.push_back(clock_);
    d.receipt_times.push_back(d.start_time);
    d.holder_counts.push_back(1);
    flights_.push_back(std::move(d));
    return flights_.size() - 1;
  }

  // One slot following the configured mode.
  void step(Rng& rng) { advance(rng, Forced::None); }
  // One slot in which every transaction is pushed.
  void push_step(Rng& rng) { advance(rng, Forced::Push); }
  // One slot in which every transaction is pulled.
  void pull_step(Rng& rng) { advance(rng, Forced::Pull); }

  // Steps until flight `i` has `count` holders; returns the continuous
  // receipt instant of the count-th holder.
  double run_until(std::size_t i, std::int64_t count, Rng& rng) {
    detail::require(count >= 1 && count <= cfg_.n, "holder target outside [1, n]");
    while (flights_.at(i).holder_count() < count) step(rng);
    return flights_[i].receipt_times[static_cast<std::size_t>(count - 1)];
  }

  DisseminationRecord record(std::size_t i, const std::vector<double>& gamma_levels) const {
    const Dissemination& d = flights_.at(i);
    DisseminationRecord r{d.sat.id, d.start, d.holder_counts, {}};
    for (double g : gamma_levels) {
      if (auto delay = d.delay_to(holders_for_level(g, cfg_.n))) r.completion[g] = *delay;
    }
    return r;
  }

 private:
  enum class Forced { None, Push, Pull };
  using Event = std::pair<double, std::uint32_t>;

  bool async() const { return cfg_.activation == Activation::Asynchronous; }

  double activation_time(std::uint32_t u, Rng& rng) {
    if (drawn_in_[u] != clock_) {
      drawn_in_[u] = clock_;
      activation_time_[u] = async() ? std::uniform_real_distribution<double>(0.0, 1.0)(rng) : 0.0;
    }
    return activation_time_[u];
  }

  void schedule(std::uint32_t u, double after, Rng& rng) {
    if (scheduled_in_[u] == clock_) return;
    const double t = activation_time(u, rng);
    if (t < after) return;
    scheduled_in_[u] = clock_;
    queue_.push({t, u});
  }

  // `count` distinct users other than `self`.
  void pick_targets(std::uint32_t self, std::int64_t count, Rng& rng) {
    targets_.clear();
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(cfg_.n - 2));
    while (static_cast<std::int64_t>(targets_.size()) < count) {
      std::uint32_t v = pick(rng);
      if (v >= self) ++v;
      if (std::find(targets_.begin(), targets_.end(), v) == targets_.end()) targets_.push_back(v);
    }
  }

  void deliver(Dissemination& d, std::uint32_t to, double instant, Rng& rng) {
    const SlotTime stamp = async() ? clock_ : clock_ + 1;
    const double at = async() ? instant : static_cast<double>(clock_ + 1);
    try {
      if (d.record_verifications) {
        record_verification(d.sat, UserId{to}, stamp, *scheme_);
      } else if (!signature_valid(d.sat, *scheme_)) {
        throw ValidityError("invalid signature");
      }
    } catch (const ValidityError&) {
      ++d.rejected;
      return;
    }
    d.acquired[to] = at;
    d.holders.push_back(to);
    d.receipt_slots.push_back(stamp);
    d.receipt_times.push_back(at);
    if (async()) schedule(to, instant - static_cast<double>(clock_), rng);
  }

  void activate(std::uint32_t x, double fraction, Rng& rng) {
    const double now = static_cast<double>(clock_) + fraction;
    bool targets_ready = false;
    std::optional<std::uint32_t> peer;
    for (Dissemination& d : flights_) {
      if (d.holder_count() == cfg_.n) continue;
      if (!d.pulling) {
        if (d.acquired[x] > now) continue;
        if (!targets_ready) {
          pick_targets(x, cfg_.phi, rng);
          targets_ready = true;
        }
        for (std::uint32_t y : targets_) {
          if (d.acquired[y] == std::numeric_limits<double>::infinity()) deliver(d, y, now, rng);
        }
      } else {
        if (d.acquired[x] != std::numeric_limits<double>::infinity()) continue;
        if (!peer) {
          pick_targets(x, 1, rng);
          peer = targets_.front();
        }
        if (d.acquired[*peer] <= now) deliver(d, x, now, rng);
      }
    }
  }

  void advance(Rng& rng, Forced forced) {
    if (flights_.empty()) throw ParameterError("no transaction in flight");
    const std::int64_t n = cfg_.n;
    for (Dissemination& d : flights_) {
      switch (forced) {
        case Forced::Push: d.pulling = false; break;
        case Forced::Pull: d.pulling = true; break;
        case Forced::None:
          d.pulling = cfg_.mode == Mode::Pull ||
                      (cfg_.mode == Mode::Hybrid &&
                       static_cast<double>(d.holder_count()) >= cfg_.hybrid_switch * static_cast<double>(n));
          break;
      }
    }

    for (const Dissemination& d : flights_) {
      if (d.holder_count() == n) continue;
      if (!d.pulling) {
        for (std::uint32_t u : d.holders) schedule(u, 0.0, rng);
      } else {
        for (std::uint32_t u = 0; u < static_cast<std::uint32_t>(n); ++u) {
          if (d.acquired[u] == std::numeric_limits<double>::infinity()) schedule(u, 0.0, rng);
        }
      }
    }

    while (!queue_.empty()) {
      const auto [t, u] = queue_.top();
      queue_.pop();
      activate(u, t, rng);
    }

    const SlotTime cap = slot_cap(n);
    for (Dissemination& d : flights_) {
      d.holder_counts.push_back(d.holder_count());
      if (d.holder_count() < n && clock_ + 1 - d.start > cap) {
        throw RunError("gossip slot cap of " + std::to_string(cap) + " slots exceeded for transaction " +
                       to_string(d.sat.id));
      }
    }
    ++clock_;
  }

  GossipConfig cfg_;
  const SignatureScheme* scheme_;
  SlotTime clock_;
  std::vector<Dissemination> flights_;
  std::vector<double> activation_time_;
  std::vector<SlotTime> drawn_in_;
  std::vector<SlotTime> scheduled_in_;
  std::vector<std::uint32_t> targets_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
};

struct LevelStats {
  double gamma{0.0};
  std::int64_t holders{0};  // holder count that defines the level
  double mean{0.0};
  double stddev{0.0};
  SlotTime min{0};
  SlotTime max{0};
};

struct TraceRow {
  std::size_t run{0};
  SlotTime slot{0};
  std::int64_t holders{0};
};

struct DisseminationSummary {
  std::vector<LevelStats> levels;
  std::vector<std::vector<std::int64_t>> holder_counts;  // per run, when traced
};

// Monte Carlo first-passage delays for each gamma level: a single
// transaction from user 0, `runs` independent seeded runs.
inline DisseminationSummary run_dissemination(const GossipConfig& cfg, const std::vector<double>& gamma_levels,
                                              std::size_t runs, std::uint64_t seed, bool keep_traces = false,
                                              unsigned threads = 0) {
  cfg.validate();
  detail::require(runs >= 1, "runs must be >= 1");
  detail::require(!gamma_levels.empty(), "at least one gamma level is required");
  std::vector<std::int64_t> targets;
  for (double g : gamma_levels) targets.push_back(holders_for_level(g, cfg.n));
  const std::int64_t deepest = *std::max_element(targets.begin(), targets.end());

  std::vector<std::vector<SlotTime>> delays(runs);
  std::vector<std::vector<std::int64_t>> traces(keep_traces ? runs : 0);
  const KeyedHashScheme scheme(derive_seed(seed, 0xD155));

  for_each_run(runs, threads, [&](std::size_t run) {
    Rng rng(derive_seed(seed, run));
    GossipEngine engine(cfg, scheme);
    const double frac = cfg.activation == Activation::Asynchronous
                            ? std::uniform_real_distribution<double>(0.0, 1.0)(rng)
                            : 0.0;
    const std::size_t idx = engine.inject(generate_sat(UserId{0}, 0, 0, scheme), frac);
    engine.run_until(idx, deepest, rng);
    const Dissemination& d = engine.flight(idx);
    for (std::int64_t t : targets) delays[run].push_back(*d.delay_to(t));
    if (keep_traces) traces[run] = d.holder_counts;
  });

  DisseminationSummary out;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    LevelStats s{gamma_levels[k], targets[k], 0.0, 0.0, std::numeric_limits<SlotTime>::max(), 0};
    double sum = 0.0;
    for (const auto& run : delays) {
      sum += static_cast<double>(run[k]);
      s.min = std::min(s.min, run[k]);
      s.max = std::max(s.max, run[k]);
    }
    s.mean = sum / static_cast<double>(runs);
    if (runs > 1) {
      double sq = 0.0;
      for (const auto& run : delays) sq += (static_cast<double>(run[k]) - s.mean) * (static_cast<double>(run[k]) - s.mean);
      s.stddev = std::sqrt(sq / static_cast<double>(runs - 1));
    }
    out.levels.push_back(s);
  }
  out.holder_counts = std::move(traces);
  return out;
}

// Rows of `run,slot,holders`, one per executed slot.
inline void write_trace_csv(std::ostream& os, const DisseminationSummary& summary) {
  os << "run,slot,holders\n";
  for (std::size_t run = 0; run < summary.holder_counts.size(); ++run) {
    const auto& counts = summary.holder_counts[run];
    for (std::size_t slot = 0; slot < counts.size(); ++slot) os << run << ',' << slot << ',' << counts[slot] << '\n';
  }
}

}  // namespace cbt::gossip
