#pragma once

#include <cbt/consensus.hpp>
#include <cbt/errors.hpp>
#include <cbt/transaction.hpp>

#include <algorithm>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cbt {

// Primary-user information: how many blocks are free per span and how long
// a span is. Changes only at span boundaries.
struct LedgerHeader {
  std::int64_t n_v{100};
  std::int64_t mu{1000};
  std::int64_t epoch{0};
};

struct QueueEntry {
  SatId id;
  double t_hat{0.0};
  // Retained for dumps; may be null when only the ordering is tracked.
  std::shared_ptr<const SpectrumAccessTransaction> sat;
};

struct HistoryEntry {
  SatId id;
  SlotTime served_at{0};
  std::int64_t epoch{0};

  UserId origin() const { return id.origin; }
};

// Per-user replica of the access schedule: a queue of agreed requests
// ordered by the scheduling rule, plus the history of served ones.
//
// Invariants:
//  - saq() is sorted by the active priority key after every mutation;
//  - a SatId appears at most once across saq() and sah();
//  - sah() served_at values are non-decreasing.
class DistributedSpectrumLedger {
 public:
  DistributedSpectrumLedger(UserId owner, LedgerHeader header, ConsensusPolicy policy = {})
      : owner_(owner), header_(header), policy_(policy) {
    detail::require(header.n_v >= 1, "n_v must be >= 1");
    detail::require(header.mu >= 1, "mu must be >= 1");
  }

  UserId owner() const { return owner_; }
  const LedgerHeader& header() const { return header_; }
  const ConsensusPolicy& policy() const { return policy_; }
  const std::vector<QueueEntry>& saq() const { return saq_; }
  const std::vector<HistoryEntry>& sah() const { return sah_; }

  bool contains(const SatId& id) const { return known_.contains(id); }

  void enqueue(const SatId& id, double t_hat, std::shared_ptr<const SpectrumAccessTransaction> sat = nullptr) {
    if (!known_.insert(id).second) throw DuplicateError("transaction " + to_string(id) + " already in ledger");
    QueueEntry entry{id, t_hat, std::move(sat)};
    auto pos = std::upper_bound(saq_.begin(), saq_.end(), entry,
                                [this](const QueueEntry& a, const QueueEntry& b) { return key(a) < key(b); });
    saq_.insert(pos, std::move(entry));
  }

  // Signature check, local consensus timestamp, then enqueue. Invalid
  // transactions never reach the queue.
  double admit(std::shared_ptr<const SpectrumAccessTransaction> sat, const SignatureScheme& scheme,
               std::int64_t n) {
    detail::require(sat != nullptr, "null transaction");
    if (!signature_valid(*sat, scheme)) throw ValidityError("invalid signature on transaction " + to_string(sat->id));
    const double t_hat = consensus_timestamp(*sat, owner_, policy_, n);
    const SatId id = sat->id;
    enqueue(id, t_hat, std::move(sat));
    return t_hat;
  }

  // Serves up to n_v head entries, all at `now` on distinct blocks.
  std::vector<SatId> serve(SlotTime now) {
    require_monotone(now);
    const std::size_t count = std::min<std::size_t>(saq_.size(), static_cast<std::size_t>(header_.n_v));
    std::vector<SatId> served;
    served.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      served.push_back(saq_[i].id);
      record_service(saq_[i].id, now);
    }
    finish_epoch(count);
    return served;
  }

  // Span-boundary service: up to n_v head entries, with access slots drawn
  // uniformly over the span and handed out in queue order.
  template <typename Rng>
  std::vector<SatId> serve_epoch(SlotTime now, Rng& rng) {
    if (now % header_.mu != 0) {
      throw SequencingError("serve_epoch called at slot " + std::to_string(now) + ", not a span boundary");
    }
    if (last_boundary_ && now < *last_boundary_ + header_.mu) {
      throw SequencingError("span starting at slot " + std::to_string(now) + " was already served");
    }
    require_monotone(now);
    const std::size_t count = std::min<std::size_t>(saq_.size(), static_cast<std::size_t>(header_.n_v));
    std::uniform_int_distribution<SlotTime> offset(0, header_.mu - 1);
    std::vector<SlotTime> slots(count);
    for (auto& s : slots) s = now + offset(rng);
    std::sort(slots.begin(), slots.end());

    std::vector<SatId> served;
    served.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      served.push_back(saq_[i].id);
      record_service(saq_[i].id, slots[i]);
    }
    last_boundary_ = now;
    finish_epoch(count);
    return served;
  }

  void update_header(std::int64_t n_v, std::int64_t mu, SlotTime now) {
    if (now % header_.mu != 0) throw SequencingError("header updates are only allowed at span boundaries");
    detail::require(n_v >= 1 && mu >= 1, "n_v and mu must be >= 1");
    header_.n_v = n_v;
    header_.mu = mu;
  }

  // Served requests of `origin`, restricted to the fairness window.
  std::size_t served_count(UserId origin) const {
    auto it = served_epochs_.find(origin);
    if (it == served_epochs_.end()) return 0;
    const auto& epochs = it->second;
    if (!policy_.fairness_window) return epochs.size();
    const std::int64_t from = header_.epoch - *policy_.fairness_window;
    return static_cast<std::size_t>(epochs.end() - std::lower_bound(epochs.begin(), epochs.end(), from));
  }

  // One line per request:
  //   saq <sat_id> <origin> <generated_at> <verifier:slot,...|-> <t_hat>
  //   sah <sat_id> <origin> <generated_at> <served_at>
  void dump(std::ostream& os) const {
    os << "# ledger owner=" << owner_ << " epoch=" << header_.epoch << " n_v=" << header_.n_v
       << " mu=" << header_.mu << '\n';
    for (const auto& e : saq_) {
      os << "saq " << e.id << ' ' << e.id.origin << ' ' << e.id.generated_at << ' ';
      if (!e.sat || e.sat->verifications.empty()) {
        os << '-';
      } else {
        bool first = true;
        for (const auto& [verifier, stamp] : e.sat->verifications) {
          os << (first ? "" : ",") << verifier << ':' << stamp;
          first = false;
        }
      }
      os << ' ' << e.t_hat << '\n';
    }
    for (const auto& h : sah_) {
      os << "sah " << h.id << ' ' << h.id.origin << ' ' << h.id.generated_at << ' ' << h.served_at << '\n';
    }
  }

 private:
  using Key = std::tuple<std::size_t, double, UserId, SatId>;

  Key key(const QueueEntry& e) const {
    const std::size_t served =
        policy_.scheduling == Scheduling::FairnessGuarantee ? served_count(e.id.origin) : 0;
    return {served, e.t_hat, e.id.origin, e.id};
  }

  void require_monotone(SlotTime now) const {
    if (!sah_.empty() && now < sah_.back().served_at) {
      throw SequencingError("service at slot " + std::to_string(now) + " precedes earlier service");
    }
  }

  void record_service(const SatId& id, SlotTime at) {
    sah_.push_back({id, at, header_.epoch});
    served_epochs_[id.origin].push_back(header_.epoch);
  }

  void finish_epoch(std::size_t served) {
    saq_.erase(saq_.begin(), saq_.begin() + static_cast<std::ptrdiff_t>(served));
    ++header_.epoch;
    if (policy_.scheduling == Scheduling::FairnessGuarantee) {
      std::stable_sort(saq_.begin(), saq_.end(),
                       [this](const QueueEntry& a, const QueueEntry& b) { return key(a) < key(b); });
    }
  }

  UserId owner_;
  LedgerHeader header_;
  ConsensusPolicy policy_;
  std::vector<QueueEntry> saq_;
  std::vector<HistoryEntry> sah_;
  std::unordered_set<SatId> known_;
  std::unordered_map<UserId, std::vector<std::int64_t>> served_epochs_;
  std::optional<SlotTime> last_boundary_;
};

}  // namespace cbt
