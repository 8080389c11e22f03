#pragma once

// Closed-form conversion bounds between W-class states.
//
// With r_k = x_k / y_k sorted ascending and r0 = x0 / y0:
//   upper bound   min(1, r_1)
//   lower bound   r_1 if r_1 >= r0, else r_h (r_{h-1}/r0) ... (r_1/r0)
//                 where h is the largest index with r0 > r_h
//   the two agree exactly when r_2 >= r0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wlocc/error.hpp"
#include "wlocc/measurement.hpp"
#include "wlocc/state.hpp"

namespace wlocc {

/// Absolute tolerance on ratio comparisons; ties count as r2 >= r0.
inline constexpr double kRatioTol = 1e-12;

struct BoundReport {
  double upper = 1.0;
  double lower = 1.0;
  bool r1_optimal = true;
  std::optional<std::size_t> h;  ///< 1-based count of sorted ratios below r0
  RatioProfile sorted_ratios;
};

namespace detail {

/// Number of sorted ratios strictly below r0 (beyond tolerance); 0 when
/// r_1 >= r0.
inline std::size_t ratios_below_r0(const std::vector<double>& sorted, double r0) {
  std::size_t h = 0;
  while (h < sorted.size() && r0 - sorted[h] > kRatioTol) ++h;
  return h;
}

inline double lower_from_sorted(const std::vector<double>& sorted, double r0, std::size_t h) {
  if (h == 0) return std::min(1.0, sorted.front());
  double v = sorted[h - 1];
  for (std::size_t j = 0; j + 1 < h; ++j) v *= sorted[j] / r0;
  return v;
}

inline void require_full_target(const WClassComponents& y) {
  for (std::size_t k = 0; k < y.size(); ++k)
    if (!(y[k] > 0.0))
      throw Error(ErrorCode::PreconditionViolated,
                  "target component " + std::to_string(k + 1) + " is zero");
  if (target_x0_is_zero(y)) throw Error(ErrorCode::PreconditionViolated, "target has y0 = 0");
}

}  // namespace detail

/// min over parties with y_k > 0 of x_k / y_k, capped at 1.
inline double upper_bound(const WClassComponents& x, const WClassComponents& y) {
  const RatioProfile prof = ratio_profile(x, y);
  if (prof.zero_targets.size() == y.size())
    throw Error(ErrorCode::PreconditionViolated, "target has no entangled party");
  return std::min(1.0, prof.sorted(0));
}

/// Whether the upper bound is attainable: second-smallest ratio >= r0.
inline bool r1_feasible(const WClassComponents& x, const WClassComponents& y) {
  detail::require_full_target(y);
  const RatioProfile prof = ratio_profile(x, y);
  if (prof.r.size() < 2) return true;
  return prof.sorted(1) >= prof.r0 - kRatioTol;
}

inline BoundReport lower_bound(const WClassComponents& x, const WClassComponents& y) {
  detail::require_full_target(y);
  BoundReport rep;
  rep.sorted_ratios = ratio_profile(x, y);
  const RatioProfile& prof = rep.sorted_ratios;
  std::vector<double> sorted(prof.r.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i] = prof.sorted(i);

  const std::size_t h = detail::ratios_below_r0(sorted, prof.r0);
  if (h > 0) rep.h = h;
  rep.lower = detail::lower_from_sorted(sorted, prof.r0, h);
  rep.upper = std::min(1.0, sorted.front());
  rep.r1_optimal = sorted.size() < 2 || sorted[1] >= prof.r0 - kRatioTol;
  return rep;
}

/// Lower bound for any target, zero components included: parties with
/// y_k = 0 are released first (x0 absorbs them); if y0 = 0 the x0-cancelling
/// filter runs next and the remaining conversion succeeds with min ratio.
inline double reduced_lower_bound(const WClassComponents& x, const WClassComponents& y) {
  const RatioProfile prof = ratio_profile(x, y);
  if (prof.zero_targets.size() == y.size()) return 1.0;

  WClassComponents cur = x;
  for (std::size_t k : prof.zero_targets) cur = release_party(cur, k);

  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < y.size(); ++k)
    if (y[k] > 0.0) active.push_back(k);
  for (std::size_t k : active)
    if (!(cur[k] > 0.0)) return 0.0;

  double factor = 1.0;
  if (target_x0_is_zero(y) && cur.x0() > kEps) {
    const ZeroX0Filter f = zero_x0_filter(cur);
    factor = f.success_p;
    cur = f.result;
  }

  std::vector<double> sorted;
  for (std::size_t k : active) sorted.push_back(cur[k] / y[k]);
  std::sort(sorted.begin(), sorted.end());
  const double r0 = target_x0_is_zero(y) ? 0.0 : cur.x0() / y.x0();
  return factor * detail::lower_from_sorted(sorted, r0, detail::ratios_below_r0(sorted, r0));
}

/// Distillation to W_N: 2 N x_min x_max / (x0 + 2 x_max + sqrt(x0^2 + 4 x_max x0)).
inline double distill_bound(const WClassComponents& x) {
  for (std::size_t k = 0; k < x.size(); ++k)
    if (!(x[k] > 0.0))
      throw Error(ErrorCode::ZeroComponent,
                  "party " + std::to_string(k + 1) + " has no entanglement to contribute");
  const auto v = x.values();
  const double x_min = *std::min_element(v.begin(), v.end());
  const double x_max = *std::max_element(v.begin(), v.end());
  // Same snap as the filter: rounding residue in x0 must not reach the sqrt.
  const double x0 = x.x0() <= kEps ? 0.0 : x.x0();
  const double n = static_cast<double>(x.size());
  return 2.0 * x_max * x_min * n / (x0 + 2.0 * x_max + std::sqrt(x0 * x0 + 4.0 * x_max * x0));
}

}  // namespace wlocc
