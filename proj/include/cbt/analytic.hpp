#pragma once

// Closed-form latency model for the two spectrum etiquettes.
//
// LBT (listen-before-talk): requesters pick one of n_v blocks per span at
// random; a collision costs a whole span of back-off. The mean number of
// contenders per span follows
//
//     x_{i+1} = n_r + x_i * (1 - (1 - 1/n_v)^(x_i - 1)),   x_1 = n_r
//
// which settles on the smallest root of x (1 - 1/n_v)^(x - 1) = n_r when one
// exists, and grows without bound otherwise.
//
// CBT (consensus-before-talk): every request is pushed through a logistic
// gossip phase twice (dissemination, then confirmation) before it is queued.
//
// Everything here is a pure function of its arguments.

#include <cbt/errors.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace cbt::analytic {

struct LbtParams {
  std::int64_t n_r{1};   // requesters per span
  std::int64_t n_v{100}; // vacant blocks per span
  std::int64_t mu{1000}; // slots per span

  void validate() const {
    detail::require(n_r >= 1, "n_r must be >= 1");
    detail::require(n_v >= 2, "n_v must be >= 2");
    detail::require(mu >= 1, "mu must be >= 1");
    detail::require(n_r <= n_v, "n_r must not exceed n_v");
  }
};

struct CbtParams {
  std::int64_t n{1000};  // secondary users
  std::int64_t n_r{10};  // requesters per span
  std::int64_t phi{1};   // concurrent receivers per transmitter
  double gamma{0.999};   // target gossip success proportion
  std::int64_t mu{1000};

  void validate() const {
    detail::require(n >= 2, "n must be >= 2");
    detail::require(n_r >= 0, "n_r must be >= 0");
    detail::require(phi >= 1, "phi must be >= 1");
    detail::require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
    detail::require(mu >= 1, "mu must be >= 1");
  }
};

// Either a finite latency in slots or the divergent outcome (infinite
// latency). Divergence is an ordinary value here, not an error.
class LatencyOutcome {
 public:
  static LatencyOutcome finite(double slots, std::int64_t mu) { return LatencyOutcome(slots, mu); }
  static LatencyOutcome divergent(std::int64_t mu) {
    return LatencyOutcome(std::numeric_limits<double>::infinity(), mu);
  }

  bool is_divergent() const { return std::isinf(slots_); }
  double slots() const { return slots_; }
  double normalized() const { return slots_ / static_cast<double>(mu_); }
  std::int64_t mu() const { return mu_; }

 private:
  LatencyOutcome(double slots, std::int64_t mu) : slots_(slots), mu_(mu) {}

  double slots_;
  std::int64_t mu_;
};

// The closed-form delay uses 1 + (n-1)γ in the numerator (AsPrinted);
// solving the logistic curve exactly for the fraction γ gives γ(n-1)
// (ExactInversion). The two differ by O(1/n).
enum class DelayForm { AsPrinted, ExactInversion };

inline double no_collision_base(std::int64_t n_v) { return 1.0 - 1.0 / static_cast<double>(n_v); }

inline std::vector<double> lbt_backlog_sequence(const LbtParams& p, std::size_t steps) {
  p.validate();
  detail::require(steps >= 1, "steps must be >= 1");
  const double q = no_collision_base(p.n_v);
  const double arrivals = static_cast<double>(p.n_r);
  std::vector<double> seq;
  seq.reserve(steps);
  double x = arrivals;
  seq.push_back(x);
  for (std::size_t i = 1; i < steps; ++i) {
    x = arrivals + x * (1.0 - std::pow(q, x - 1.0));
    seq.push_back(x);
  }
  return seq;
}

// Largest n_r for which the backlog recursion still has a fixed point.
inline double lbt_convergence_threshold(std::int64_t n_v) {
  detail::require(n_v >= 2, "n_v must be >= 2");
  const double q = no_collision_base(n_v);
  return -1.0 / (std::numbers::e * q * std::log(q));
}

// Maximiser of g(x) = x q^(x-1); g is increasing below it.
inline double lbt_throughput_argmax(std::int64_t n_v) {
  detail::require(n_v >= 2, "n_v must be >= 2");
  return -1.0 / std::log(no_collision_base(n_v));
}

// Smallest root of x q^(x-1) = n_r by bisection on [n_r, argmax].
// Returns nullopt when n_r is above the convergence threshold.
inline std::optional<double> lbt_fixed_point(const LbtParams& p, double tol = 1e-9) {
  p.validate();
  detail::require(tol > 0.0, "tol must be positive");
  if (static_cast<double>(p.n_r) > lbt_convergence_threshold(p.n_v)) return std::nullopt;

  const double q = no_collision_base(p.n_v);
  const double target = static_cast<double>(p.n_r);
  auto residual = [&](double x) { return x * std::pow(q, x - 1.0) - target; };

  double lo = target;
  double hi = lbt_throughput_argmax(p.n_v);
  if (std::abs(residual(lo)) < tol) return lo;
  // At exactly the threshold the root sits on the maximiser.
  if (hi <= lo || residual(hi) <= 0.0) return hi;

  // Bisect until the bracket cannot shrink further; tol only has to be met.
  double mid = lo;
  for (int iter = 0; iter < 400; ++iter) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (residual(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (std::abs(residual(mid)) >= tol) {
    throw RunError("fixed point bisection did not reach tolerance " + std::to_string(tol));
  }
  return mid;
}

inline LatencyOutcome lbt_latency(const LbtParams& p, double tol = 1e-9) {
  p.validate();
  const auto root = lbt_fixed_point(p, tol);
  if (!root) return LatencyOutcome::divergent(p.mu);
  const double mu = static_cast<double>(p.mu);
  const double success = std::pow(no_collision_base(p.n_v), *root - 1.0);
  return LatencyOutcome::finite(mu / success - 0.5 * mu, p.mu);
}

// Fraction of users holding a SAT at time t under the logistic model,
// starting from a single holder at t0.
inline double gossip_fraction(double t, double t0, const CbtParams& c) {
  detail::require(c.n >= 2 && c.phi >= 1, "n must be >= 2 and phi >= 1");
  detail::require(t >= t0, "t must not precede t0");
  const double n = static_cast<double>(c.n);
  const double decay = std::exp(-static_cast<double>(c.phi) * (t - t0));
  return 1.0 / (1.0 + (n - 1.0) * decay);
}

inline double gossip_dissemination_delay(const CbtParams& c, DelayForm form = DelayForm::AsPrinted) {
  c.validate();
  const double n = static_cast<double>(c.n);
  const double numerator = form == DelayForm::AsPrinted ? 1.0 + (n - 1.0) * c.gamma : c.gamma * (n - 1.0);
  return std::log(numerator / (1.0 - c.gamma)) / static_cast<double>(c.phi);
}

// Two dissemination rounds per request, n_r requests per span, plus the
// mean half-span wait.
inline LatencyOutcome cbt_latency(const CbtParams& c, DelayForm form = DelayForm::AsPrinted) {
  c.validate();
  const double rounds = 2.0 * static_cast<double>(c.n_r);
  const double slots = rounds * gossip_dissemination_delay(c, form) + 0.5 * static_cast<double>(c.mu);
  return LatencyOutcome::finite(slots, c.mu);
}

struct CrossingQuery {
  std::int64_t n{1000};
  std::int64_t n_v{100};
  std::int64_t phi{1};
  double gamma{0.999};
  std::int64_t mu{1000};
  std::int64_t n_r_lo{1};
  std::int64_t n_r_hi{40};
};

// Smallest n_r in [n_r_lo, n_r_hi] where CBT is no slower than LBT. A
// divergent LBT outcome always counts as slower.
inline std::optional<std::int64_t> crossing_point(const CrossingQuery& q) {
  detail::require(q.n_r_lo <= q.n_r_hi, "empty n_r range");
  detail::require(q.n_r_lo >= 1 && q.n_r_hi <= q.n_v, "n_r range must lie within [1, n_v]");
  for (std::int64_t n_r = q.n_r_lo; n_r <= q.n_r_hi; ++n_r) {
    const auto lbt = lbt_latency({n_r, q.n_v, q.mu});
    const auto cbt = cbt_latency({q.n, n_r, q.phi, q.gamma, q.mu});
    if (lbt.is_divergent() || cbt.slots() <= lbt.slots()) return n_r;
  }
  return std::nullopt;
}

}  // namespace cbt::analytic
