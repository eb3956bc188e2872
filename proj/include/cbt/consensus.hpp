#pragma once

#include <cbt/errors.hpp>
#include <cbt/transaction.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace cbt {

enum class Aggregation { Mean, Median };
enum class Scheduling { FirstVerifiedFirstServed, FairnessGuarantee };
// Mean only: divide by the number of timestamps used, or by n.
enum class MeanNormalization { ByCount, ByN };

struct ConsensusPolicy {
  Aggregation aggregation{Aggregation::Mean};
  bool exclude_observer{true};
  Scheduling scheduling{Scheduling::FirstVerifiedFirstServed};
  MeanNormalization normalization{MeanNormalization::ByCount};
  // Whether the issuer's generation timestamp joins the aggregated multiset.
  bool include_generated{true};
  // FairnessGuarantee: count only the last `fairness_window` spans of
  // history. Unset means the full history.
  std::optional<std::int64_t> fairness_window;
};

// Timestamps an observer aggregates for a transaction: the generation
// timestamp plus every verification. With exclude_observer the observer's own
// stamp is dropped; if the observer is the issuer that is the generation
// timestamp itself.
inline std::vector<double> consensus_inputs(const SpectrumAccessTransaction& sat, UserId observer,
                                            const ConsensusPolicy& policy) {
  std::vector<double> values;
  values.reserve(sat.verifications.size() + 1);
  const bool drop_generated = policy.exclude_observer && observer == sat.origin();
  if (policy.include_generated && !drop_generated) values.push_back(static_cast<double>(sat.generated_at()));
  for (const auto& [verifier, stamp] : sat.verifications) {
    if (policy.exclude_observer && verifier == observer) continue;
    values.push_back(static_cast<double>(stamp));
  }
  return values;
}

// Lower median for even-sized inputs.
inline double lower_median(std::vector<double> values) {
  detail::require(!values.empty(), "median of an empty set");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

inline double consensus_timestamp(const SpectrumAccessTransaction& sat, UserId observer,
                                  const ConsensusPolicy& policy, std::int64_t n) {
  std::vector<double> values = consensus_inputs(sat, observer, policy);
  detail::require(!values.empty(), "no timestamps visible to observer " + std::to_string(observer.value));
  if (policy.aggregation == Aggregation::Median) return lower_median(std::move(values));

  double sum = 0.0;
  for (double v : values) sum += v;
  if (policy.normalization == MeanNormalization::ByN) {
    detail::require(n >= 1, "n must be positive");
    return sum / static_cast<double>(n);
  }
  return sum / static_cast<double>(values.size());
}

inline std::string_view to_string(Aggregation a) { return a == Aggregation::Mean ? "mean" : "median"; }
inline std::string_view to_string(Scheduling s) {
  return s == Scheduling::FirstVerifiedFirstServed ? "ffs" : "fair";
}
inline std::string_view to_string(MeanNormalization m) { return m == MeanNormalization::ByCount ? "count" : "n"; }

}  // namespace cbt
