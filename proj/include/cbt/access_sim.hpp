#pragma once

// End-to-end simulation of both spectrum etiquettes.
//
// LBT: each span, n_r new requesters (generated uniformly within the span)
// and every backlogged requester pick one of n_v blocks at the next span
// boundary. A block chosen by exactly one requester is a success; everyone
// else backs off one span and tries again.
//
// CBT: requests generated during span i are released at the span's closing
// boundary as one batch. The batch is gossiped one transaction at a time,
// each through a dissemination round and a confirmation round to gamma*n
// holders; rounds never overlap. Once the whole batch is agreed, every
// materialised ledger admits the transactions under its consensus policy and
// serves up to n_v of them, the k-th on block k.

#include <cbt/analytic.hpp>
#include <cbt/consensus.hpp>
#include <cbt/errors.hpp>
#include <cbt/gossip.hpp>
#include <cbt/ledger.hpp>
#include <cbt/runner.hpp>
#include <cbt/transaction.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cbt::sim {

enum class Etiquette { Lbt, Cbt };

inline std::string_view to_string(Etiquette e) { return e == Etiquette::Lbt ? "lbt" : "cbt"; }

struct ScenarioConfig {
  std::int64_t n{1000};
  std::int64_t n_r{10};
  std::int64_t n_v{100};
  std::int64_t mu{1000};
  std::int64_t phi{1};
  double gamma{0.999};
  ConsensusPolicy policy{};
  Etiquette etiquette{Etiquette::Cbt};
  std::int64_t runs{10000};
  std::int64_t warmup_spans{20};
  std::int64_t measure_spans{200};
  std::uint64_t seed{1};

  gossip::Mode gossip_mode{gossip::Mode::Push};
  double hybrid_switch{0.5};
  gossip::Activation activation{gossip::Activation::Asynchronous};
  // Ledgers kept per CBT run (users 0..k-1); 0 keeps one for every user.
  std::int64_t observers{3};
  unsigned threads{0};

  void validate() const {
    detail::require(n >= 2, "n must be >= 2");
    detail::require(n_r >= 0 && n_r <= n, "n_r must lie in [0, n]");
    detail::require(n_v >= 1, "n_v must be >= 1");
    detail::require(mu >= 1, "mu must be >= 1");
    detail::require(phi >= 1 && phi <= n - 1, "phi must lie in [1, n-1]");
    detail::require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
    detail::require(runs >= 1, "runs must be >= 1");
    detail::require(warmup_spans >= 0, "warmup must be >= 0");
    detail::require(measure_spans >= 1, "spans must be >= 1");
    detail::require(observers >= 0, "observers must be >= 0");
  }
};

struct LatencyReport {
  std::vector<double> samples;  // slots, one per measured request
  double mean{0.0};
  double normalized_mean{0.0};
  bool divergent{false};
  std::int64_t divergent_runs{0};
  std::int64_t runs_completed{0};
  std::uint64_t seed{0};
  std::int64_t mu{1};
  std::int64_t max_backlog{0};
  // CBT: services where some materialised ledger disagreed with user 0.
  std::int64_t ordering_mismatches{0};
};

// Which user occupies each of the n_v blocks during one service epoch.
struct BlockAssignment {
  std::int64_t epoch{0};
  SlotTime at{0};
  std::vector<std::optional<UserId>> blocks;
};

// Observation hooks for CBT runs (tests and diagnostics).
struct CbtProbe {
  std::function<void(const BlockAssignment&)> on_assignment;
  std::function<void(SlotTime, std::span<const DistributedSpectrumLedger>)> before_service;
  // (transaction, slot at which its confirmation round finished, served slot)
  std::function<void(const SpectrumAccessTransaction&, double, SlotTime)> on_served;
};

namespace internal {

inline void finalize(LatencyReport& r) {
  if (r.samples.empty()) {
    r.mean = 0.0;
  } else {
    double sum = 0.0;
    for (double s : r.samples) sum += s;
    r.mean = sum / static_cast<double>(r.samples.size());
  }
  r.normalized_mean = r.mean / static_cast<double>(r.mu);
}

// Backlog (requests waiting after each span boundary) diverges when it
// exceeds 10 * n_v * spans, or rises monotonically over the last 50 spans.
inline bool backlog_diverges(const std::vector<std::int64_t>& series, std::int64_t n_v, std::int64_t spans) {
  if (series.empty()) return false;
  const std::int64_t bound = 10 * n_v * spans;
  if (*std::max_element(series.begin(), series.end()) > bound) return true;
  constexpr std::size_t window = 50;
  if (series.size() < window) return false;
  const auto first = series.end() - static_cast<std::ptrdiff_t>(window);
  return std::is_sorted(first, series.end()) && series.back() > *first;
}

}  // namespace internal

// One contention round: `contenders` users each pick a block out of n_v;
// entry i is true when user i picked a block nobody else picked.
inline std::vector<bool> contention_round(std::size_t contenders, std::int64_t n_v, Rng& rng,
                                          std::vector<std::uint32_t>* scratch = nullptr) {
  std::vector<std::uint32_t> local;
  std::vector<std::uint32_t>& load = scratch ? *scratch : local;
  load.assign(static_cast<std::size_t>(n_v), 0);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n_v - 1));
  std::vector<std::uint32_t> choice(contenders);
  for (auto& c : choice) {
    c = pick(rng);
    ++load[c];
  }
  std::vector<bool> success(contenders);
  for (std::size_t i = 0; i < contenders; ++i) success[i] = load[choice[i]] == 1;
  return success;
}

inline LatencyReport simulate_lbt(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  detail::require(cfg.etiquette == Etiquette::Lbt, "simulate_lbt needs an LBT scenario");
  LatencyReport report;
  report.mu = cfg.mu;
  report.runs_completed = 1;

  struct Request {
    SlotTime generated;
    bool tagged;
  };
  const std::int64_t horizon = cfg.warmup_spans + cfg.measure_spans;
  const std::int64_t drain_cap = std::max<std::int64_t>(50, cfg.measure_spans);
  std::uniform_int_distribution<SlotTime> offset(0, cfg.mu - 1);
  std::vector<Request> contenders;
  std::vector<Request> next;
  std::vector<std::uint32_t> scratch;
  std::vector<std::int64_t> backlog;
  std::int64_t tagged_pending = 0;

  for (std::int64_t span = 0;; ++span) {
    const SlotTime span_start = span * cfg.mu;
    const bool tagged = span >= cfg.warmup_spans && span < horizon;
    for (std::int64_t k = 0; k < cfg.n_r; ++k) {
      contenders.push_back({span_start + offset(rng), tagged});
      if (tagged) ++tagged_pending;
    }
    const SlotTime boundary = span_start + cfg.mu;
    const auto won = contention_round(contenders.size(), cfg.n_v, rng, &scratch);
    next.clear();
    for (std::size_t i = 0; i < contenders.size(); ++i) {
      if (!won[i]) {
        next.push_back(contenders[i]);
      } else if (contenders[i].tagged) {
        report.samples.push_back(static_cast<double>(boundary - contenders[i].generated));
        --tagged_pending;
      }
    }
    contenders.swap(next);
    if (span < horizon) backlog.push_back(static_cast<std::int64_t>(contenders.size()));
    report.max_backlog = std::max<std::int64_t>(report.max_backlog, static_cast<std::int64_t>(contenders.size()));

    if (span + 1 == horizon && internal::backlog_diverges(backlog, cfg.n_v, cfg.measure_spans)) {
      report.divergent = true;
      break;
    }
    if (span + 1 >= horizon && tagged_pending == 0) break;
    if (span + 1 >= horizon + drain_cap) {
      report.divergent = true;
      break;
    }
  }
  report.divergent_runs = report.divergent ? 1 : 0;
  internal::finalize(report);
  return report;
}

inline LatencyReport simulate_cbt(const ScenarioConfig& cfg, Rng& rng, const CbtProbe* probe = nullptr) {
  cfg.validate();
  detail::require(cfg.etiquette == Etiquette::Cbt, "simulate_cbt needs a CBT scenario");
  LatencyReport report;
  report.mu = cfg.mu;
  report.runs_completed = 1;
  if (cfg.n_r == 0) {
    internal::finalize(report);
    return report;
  }

  const KeyedHashScheme scheme(rng());
  TransactionIssuer issuer(scheme);
  const gossip::GossipConfig gcfg{cfg.n, cfg.phi, cfg.gossip_mode, cfg.hybrid_switch, cfg.activation};
  gcfg.validate();
  const std::int64_t target = gossip::holders_for_level(cfg.gamma, cfg.n);

  const std::int64_t observers = cfg.observers == 0 ? cfg.n : std::min(cfg.observers, cfg.n);
  std::vector<DistributedSpectrumLedger> ledgers;
  ledgers.reserve(static_cast<std::size_t>(observers));
  for (std::int64_t u = 0; u < observers; ++u) {
    ledgers.emplace_back(UserId{static_cast<std::uint32_t>(u)}, LedgerHeader{cfg.n_v, cfg.mu, 0}, cfg.policy);
  }

  struct Tracked {
    SlotTime generated;
    double agreed;
    bool tagged;
    std::shared_ptr<const SpectrumAccessTransaction> sat;
  };
  std::unordered_map<SatId, Tracked> waiting;
  std::vector<std::pair<SlotTime, SlotTime>> lifetimes;  // (generated, served)

  // One gossip round from continuous instant `from`; returns when gamma*n
  // users hold the transaction.
  auto gossip_round = [&](SpectrumAccessTransaction& sat, double from, bool record) {
    const auto slot = static_cast<SlotTime>(std::floor(from));
    gossip::GossipEngine engine(gcfg, scheme, slot);
    const std::size_t idx = engine.inject(std::move(sat), from - static_cast<double>(slot), record);
    const double done = engine.run_until(idx, target, rng);
    sat = std::move(engine.flight(idx).sat);
    return done;
  };

  const std::int64_t horizon = cfg.warmup_spans + cfg.measure_spans;
  std::vector<std::uint32_t> population(static_cast<std::size_t>(cfg.n));
  for (std::size_t u = 0; u < population.size(); ++u) population[u] = static_cast<std::uint32_t>(u);
  std::uniform_int_distribution<SlotTime> offset(0, cfg.mu - 1);
  double channel_free = 0.0;

  for (std::int64_t span = 0; span < horizon; ++span) {
    const SlotTime span_start = span * cfg.mu;
    const bool tagged = span >= cfg.warmup_spans;

    // n_r distinct requesters (partial Fisher-Yates).
    std::vector<std::pair<SlotTime, std::uint32_t>> requests;
    for (std::int64_t k = 0; k < cfg.n_r; ++k) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), population.size() - 1);
      std::swap(population[static_cast<std::size_t>(k)], population[pick(rng)]);
      requests.emplace_back(span_start + offset(rng), population[static_cast<std::size_t>(k)]);
    }
    std::sort(requests.begin(), requests.end());

    double t = std::max(static_cast<double>(span_start + cfg.mu), channel_free);
    std::vector<std::shared_ptr<const SpectrumAccessTransaction>> batch;
    for (const auto& [generated, user] : requests) {
      SpectrumAccessTransaction sat = issuer.generate(UserId{user}, generated);
      t = gossip_round(sat, t, true);
      t = gossip_round(sat, t, false);
      auto shared = std::make_shared<const SpectrumAccessTransaction>(std::move(sat));
      waiting.emplace(shared->id, Tracked{generated, t, tagged, shared});
      batch.push_back(std::move(shared));
    }
    channel_free = t;
    const auto service_slot = static_cast<SlotTime>(std::floor(t));

    for (auto& ledger : ledgers) {
      for (const auto& sat : batch) ledger.admit(sat, scheme, cfg.n);
    }
    if (probe && probe->before_service) probe->before_service(service_slot, ledgers);

    std::vector<SatId> served = ledgers.front().serve(service_slot);
    for (std::size_t l = 1; l < ledgers.size(); ++l) {
      if (ledgers[l].serve(service_slot) != served) ++report.ordering_mismatches;
    }

    BlockAssignment assignment{ledgers.front().header().epoch - 1, service_slot,
                               std::vector<std::optional<UserId>>(static_cast<std::size_t>(cfg.n_v))};
    for (std::size_t k = 0; k < served.size(); ++k) {
      assignment.blocks[k] = served[k].origin;
      auto it = waiting.find(served[k]);
      const Tracked& tr = it->second;
      if (tr.tagged) report.samples.push_back(static_cast<double>(service_slot - tr.generated));
      lifetimes.emplace_back(tr.generated, service_slot);
      if (probe && probe->on_served) probe->on_served(*tr.sat, tr.agreed, service_slot);
      waiting.erase(it);
    }
    if (probe && probe->on_assignment) probe->on_assignment(assignment);
  }

  for (const auto& [id, tr] : waiting) lifetimes.emplace_back(tr.generated, std::numeric_limits<SlotTime>::max());
  std::vector<std::int64_t> backlog(static_cast<std::size_t>(horizon), 0);
  for (const auto& [generated, served] : lifetimes) {
    // Waiting at boundary b means generated before b and served after it.
    for (std::int64_t span = generated / cfg.mu; span < horizon; ++span) {
      const SlotTime boundary = (span + 1) * cfg.mu;
      if (served <= boundary) break;
      ++backlog[static_cast<std::size_t>(span)];
    }
  }
  report.max_backlog = backlog.empty() ? 0 : *std::max_element(backlog.begin(), backlog.end());
  report.divergent = internal::backlog_diverges(backlog, cfg.n_v, cfg.measure_spans) || !waiting.empty();
  report.divergent_runs = report.divergent ? 1 : 0;
  internal::finalize(report);
  return report;
}

// All runs of a scenario, merged in run order. Run r uses seed
// derive_seed(cfg.seed, r). A probe forces single-threaded execution.
inline LatencyReport run_scenario(const ScenarioConfig& cfg, const CbtProbe* probe = nullptr) {
  cfg.validate();
  const auto runs = static_cast<std::size_t>(cfg.runs);
  std::vector<LatencyReport> per_run(runs);
  const unsigned threads = probe ? 1U : cfg.threads;
  for_each_run(runs, threads, [&](std::size_t r) {
    Rng rng(derive_seed(cfg.seed, r));
    try {
      per_run[r] = cfg.etiquette == Etiquette::Lbt ? simulate_lbt(cfg, rng) : simulate_cbt(cfg, rng, probe);
    } catch (const RunError& e) {
      throw RunError(std::string(e.what()) + " (run " + std::to_string(r) + ", seed " +
                     std::to_string(derive_seed(cfg.seed, r)) + ")");
    }
  });

  LatencyReport merged;
  merged.mu = cfg.mu;
  merged.seed = cfg.seed;
  for (auto& r : per_run) {
    merged.samples.insert(merged.samples.end(), r.samples.begin(), r.samples.end());
    merged.divergent_runs += r.divergent_runs;
    merged.runs_completed += r.runs_completed;
    merged.max_backlog = std::max(merged.max_backlog, r.max_backlog);
    merged.ordering_mismatches += r.ordering_mismatches;
  }
  merged.divergent = 2 * merged.divergent_runs > merged.runs_completed;
  internal::finalize(merged);
  return merged;
}

inline analytic::LatencyOutcome analytic_lbt(const ScenarioConfig& cfg) {
  if (cfg.n_r < 1 || cfg.n_v < 2 || cfg.n_r > cfg.n_v) return analytic::LatencyOutcome::divergent(cfg.mu);
  return analytic::lbt_latency({cfg.n_r, cfg.n_v, cfg.mu});
}

inline analytic::LatencyOutcome analytic_cbt(const ScenarioConfig& cfg,
                                             analytic::DelayForm form = analytic::DelayForm::AsPrinted) {
  if (cfg.gamma >= 1.0) return analytic::LatencyOutcome::divergent(cfg.mu);
  return analytic::cbt_latency({cfg.n, cfg.n_r, cfg.phi, cfg.gamma, cfg.mu}, form);
}

enum class SweepAxis { NR, N, Mu, Gamma };

inline SweepAxis parse_axis(std::string_view name) {
  if (name == "n_r") return SweepAxis::NR;
  if (name == "n") return SweepAxis::N;
  if (name == "mu") return SweepAxis::Mu;
  if (name == "gamma") return SweepAxis::Gamma;
  throw ParameterError("unknown sweep axis '" + std::string(name) + "' (expected n_r, n, mu or gamma)");
}

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::NR: return "n_r";
    case SweepAxis::N: return "n";
    case SweepAxis::Mu: return "mu";
    case SweepAxis::Gamma: return "gamma";
  }
  return "?";
}

struct SweepRow {
  double value{0.0};
  LatencyReport lbt;
  LatencyReport cbt;
  analytic::LatencyOutcome lbt_analytic = analytic::LatencyOutcome::divergent(1);
  analytic::LatencyOutcome cbt_analytic = analytic::LatencyOutcome::divergent(1);
};

inline ScenarioConfig with_axis(ScenarioConfig cfg, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::NR: cfg.n_r = static_cast<std::int64_t>(std::llround(value)); break;
    case SweepAxis::N: cfg.n = static_cast<std::int64_t>(std::llround(value)); break;
    case SweepAxis::Mu: cfg.mu = static_cast<std::int64_t>(std::llround(value)); break;
    case SweepAxis::Gamma: cfg.gamma = value; break;
  }
  return cfg;
}

// Both etiquettes, simulated and analytic, at each value of one parameter.
inline std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepAxis axis, const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    ScenarioConfig cfg = with_axis(base, axis, v);
    cfg.validate();
    SweepRow row;
    row.value = v;
    cfg.etiquette = Etiquette::Lbt;
    row.lbt = run_scenario(cfg);
    row.lbt_analytic = analytic_lbt(cfg);
    cfg.etiquette = Etiquette::Cbt;
    row.cbt = run_scenario(cfg);
    row.cbt_analytic = analytic_cbt(cfg);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<SweepRow> sweep(const ScenarioConfig& base, std::string_view axis, const std::vector<double>& values) {
  return sweep(base, parse_axis(axis), values);
}

}  // namespace cbt::sim
