#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rrobust/digraph.hpp"
#include "rrobust/tester.hpp"

namespace rrobust {

struct IntervalStep {
  std::size_t r = 0;
  Verdict verdict = Verdict::kAccept;
  WitnessKind witness_kind = WitnessKind::kNone;
  std::size_t lo = 0;  // bounds after the step
  std::size_t hi = 0;

  friend bool operator==(const IntervalStep&, const IntervalStep&) = default;
};

/// Bounds on the maximal robustness. lo comes from accepted tests; hi is
/// either the initial ceil(n/2), which the maximal robustness can attain, or
/// r + delta_cap after a rejection at r, which it cannot. contains() treats
/// both ends as inclusive.
struct IntervalEstimate {
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t iterations = 0;
  bool clamped = false;  // some midpoint was raised to r = 1
  bool stalled = false;  // loop left early because the gap stopped shrinking
  std::vector<IntervalStep> steps;

  std::size_t length() const noexcept { return hi - lo; }
  bool contains(std::size_t r) const noexcept { return lo <= r && r <= hi; }

  friend bool operator==(const IntervalEstimate&, const IntervalEstimate&) = default;
};

struct IntervalOptions {
  std::size_t delta_cap = 1;
  std::uint64_t beta_num = 1;
  std::uint64_t beta_den = 1;
  Rational sigma{1, 10};
  // Sample size, mode, trials, seed and workers are taken from here; r,
  // delta_cap and fail_prob are set per call.
  TestConfig base;
};

/// ceil(log2(n)), at least 1.
inline std::size_t ceil_log2(std::size_t n) {
  return n <= 2 ? 1 : static_cast<std::size_t>(std::bit_width(n - 1));
}

/// Binary search for an interval of length at most (1+beta) delta_cap
/// containing the maximal robustness. Each step tests
/// r = floor((lo - delta_cap + hi) / 2) (at least 1) with the arbitrary-digraph
/// tester, amplified to failure probability sigma / ceil(log2 n); accept sets
/// lo = r, reject sets hi = r + delta_cap.
inline IntervalEstimate interval_estimate(const Digraph& g, const IntervalOptions& opt) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw std::invalid_argument("interval_estimate: need at least two vertices");
  if (opt.delta_cap == 0 || opt.delta_cap > n) throw std::invalid_argument("interval_estimate: need 0 < delta <= n");
  if (opt.beta_num == 0 || opt.beta_den == 0) throw std::invalid_argument("interval_estimate: beta must be positive");
  if (!opt.sigma.in_open_unit()) throw std::invalid_argument("interval_estimate: sigma must lie in (0, 1)");

  const std::size_t budget_splits = ceil_log2(n);
  const Rational per_call{opt.sigma.num, opt.sigma.den * static_cast<std::int64_t>(budget_splits)};
  const std::size_t max_iterations = budget_splits + 2;

  IntervalEstimate est;
  est.lo = 0;
  est.hi = (n + 1) / 2;
  // gap >= (1 + beta) delta  <=>  gap * den >= (den + num) * delta
  auto wide = [&](std::size_t gap) {
    return static_cast<unsigned __int128>(gap) * opt.beta_den >=
           static_cast<unsigned __int128>(opt.beta_den + opt.beta_num) * opt.delta_cap;
  };
  while (wide(est.hi - est.lo) && est.iterations < max_iterations) {
    const std::size_t gap = est.hi - est.lo;
    std::size_t r = 1;
    if (est.lo + est.hi > opt.delta_cap + 1) r = (est.lo + est.hi - opt.delta_cap) / 2;
    else est.clamped = true;

    TestConfig cfg = opt.base;
    cfg.r = r;
    cfg.delta_cap = opt.delta_cap;
    cfg.seed = substream_seed(opt.base.seed, 0x1E57ULL + est.iterations);
    const TestOutcome out = amplified_arbitrary(g, cfg, per_call);
    if (out.verdict == Verdict::kAccept) {
      est.lo = std::max(est.lo, r);
    } else {
      est.hi = std::min(est.hi, r + opt.delta_cap);
    }
    ++est.iterations;
    est.steps.push_back({r, out.verdict, out.witness_kind, est.lo, est.hi});
    if (est.hi - est.lo >= gap) {
      est.stalled = true;
      break;
    }
  }
  return est;
}

}  // namespace rrobust
