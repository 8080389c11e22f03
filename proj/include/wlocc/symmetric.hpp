#pragma once

// Tripartite symmetric W-class states
//
//   |s> = sqrt(1 - s)|000> + sqrt(s/3)(|100> + |010> + |001>)
//
// converted to W_3 by a one-shot filter A = [[a, b], [0, c]], either by one
// party alone (success p) or by all three parties applying the same A
// (success q). Closed-form optima and an independent numeric optimizer over
// the same constraint set.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "wlocc/error.hpp"
#include "wlocc/linalg.hpp"
#include "wlocc/state.hpp"

namespace wlocc::symmetric {

inline constexpr std::size_t kParties = 3;

struct FilterParams {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;

  Matrix2 matrix() const { return Matrix2::upper(a, b, c); }
};

struct OptimizerResult {
  double value = 0.0;  ///< p (single party) or q (symmetric)
  FilterParams params;
  std::size_t local_maxima = 0;  ///< over the coarse scan; 1 for a unimodal objective
};

struct ProfileRow {
  double s = 0.0;
  double p = 0.0;
  double q = 0.0;
  double diff = 0.0;
};

namespace detail {

inline void require_unit_interval(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::DomainError, "s = " + std::to_string(s));
}

inline void require_positive_unit(double s) {
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorCode::DomainError, "s = " + std::to_string(s));
}

inline constexpr std::size_t kScanPoints = 10000;

inline std::size_t count_local_maxima(const std::vector<double>& f) {
  std::size_t count = 0;
  const double lo = -kInf;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == -kInf) continue;
    const double left = i > 0 ? f[i - 1] : lo;
    const double right = i + 1 < f.size() ? f[i + 1] : lo;
    if (f[i] > left && f[i] >= right) ++count;
  }
  return count;
}

}  // namespace detail

/// Symmetric state components for n parties: x_i = s / n, x0 = 1 - s.
inline WClassComponents symmetric_state(double s, std::size_t n = kParties) {
  detail::require_unit_interval(s);
  return make_state(std::vector<double>(n, s / static_cast<double>(n)));
}

inline double beta(double s) {
  detail::require_unit_interval(s);
  return std::sqrt(3.0 * (1.0 - s) * (3.0 + 5.0 * s));
}

inline double p_max_closed(double s) {
  detail::require_unit_interval(s);
  return 0.5 * (3.0 - s - std::sqrt(3.0 * (1.0 - s) * (3.0 + s)));
}

inline double q_max_closed(double s) {
  detail::require_unit_interval(s);
  if (s == 1.0) return 1.0;  // removable 0/0
  const double b = beta(s);
  const double num = (3.0 + 9.0 * s - b) * (3.0 + 9.0 * s - b) * (-3.0 + 3.0 * s + b);
  return num / (48.0 * (1.0 + 2.0 * s) * (1.0 - s + b));
}

/// Single-party filter with a = c: the |000> amplitude cancels when
/// b = -a sqrt(3(1-s)/s), and p = a^2 s grows with a, so the optimum sits on
/// the boundary of A^dagger A <= I. Coarse scan, then bisection on that boundary.
inline OptimizerResult optimize_single_party(double s) {
  detail::require_positive_unit(s);
  const double k = std::sqrt(3.0 * (1.0 - s) / s);
  auto filter = [&](double a) { return FilterParams{a, -a * k, a}; };
  auto feasible = [&](double a) { return largest_eigenvalue(gram(filter(a).matrix())) <= 1.0 + 1e-15; };

  std::vector<double> f(detail::kScanPoints);
  std::size_t best = 0;
  bool found = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = static_cast<double>(i + 1) / static_cast<double>(f.size());
    f[i] = feasible(a) ? a * a * s : -kInf;
    if (f[i] != -kInf && (!found || f[i] > f[best])) {
      best = i;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::InfeasiblePoint, "no feasible filter on the scan grid");

  double lo = static_cast<double>(best + 1) / static_cast<double>(f.size());
  if (best + 1 < f.size()) {
    double hi = static_cast<double>(best + 2) / static_cast<double>(f.size());
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
  }
  return OptimizerResult{lo * lo * s, filter(lo), detail::count_local_maxima(f)};
}

/// Symmetric filter A (x) A (x) A: the |000> amplitude cancels when
/// b = -a sqrt((1-s)/(3s)); for fixed a the largest admissible c satisfies
/// (1 - a^2)(1 - c^2) = b^2, giving q(a) = a^4 c^2 s. Coarse scan, then
/// golden-section refinement around the best grid point.
inline OptimizerResult optimize_symmetric_filter(double s) {
  detail::require_positive_unit(s);
  const double k = std::sqrt((1.0 - s) / (3.0 * s));
  auto c_squared = [&](double a) {
    const double b = -a * k;
    if (a >= 1.0) return b == 0.0 ? 1.0 : -1.0;
    return 1.0 - b * b / (1.0 - a * a);
  };
  auto objective = [&](double a) {
    const double c2 = c_squared(a);
    return c2 < 0.0 ? -kInf : a * a * a * a * c2 * s;
  };

  const std::size_t m = detail::kScanPoints;
  std::vector<double> f(m);
  std::size_t best = 0;
  for (std::size_t i = 0; i < m; ++i) {
    f[i] = objective(static_cast<double>(i + 1) / static_cast<double>(m));
    if (f[i] > f[best]) best = i;
  }
  if (f[best] == -kInf) throw Error(ErrorCode::InfeasiblePoint, "no feasible filter on the scan grid");

  double lo = static_cast<double>(best) / static_cast<double>(m);
  double hi = std::min(1.0, static_cast<double>(best + 2) / static_cast<double>(m));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    }
  }
  double a = 0.5 * (lo + hi);
  if (objective(hi) > objective(a)) a = hi;
  const double q = objective(a);
  return OptimizerResult{q, FilterParams{a, -a * k, std::sqrt(std::max(0.0, c_squared(a)))},
                         detail::count_local_maxima(f)};
}

/// The s in (0,1) where the single-party and symmetric optima coincide.
inline double crossing_point() {
  auto diff = [](double s) { return p_max_closed(s) - q_max_closed(s); };
  const std::size_t grid = 1000;
  for (std::size_t i = 1; i + 1 < grid; ++i) {
    double lo = static_cast<double>(i) / grid;
    double hi = static_cast<double>(i + 1) / grid;
    double flo = diff(lo);
    if (flo > 0.0 && diff(hi) < 0.0) {
      while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        const double fm = diff(mid);
        if (fm == 0.0) return mid;
        (fm > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  throw Error(ErrorCode::DomainError, "no sign change of p_max - q_max on (0,1)");
}

inline std::vector<ProfileRow> difference_profile(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1.0))
    throw Error(ErrorCode::DomainError, "grid step " + std::to_string(grid_step));
  const auto last = static_cast<std::size_t>(std::ceil(1.0 / grid_step - 1e-9));
  std::vector<ProfileRow> rows;
  rows.reserve(last + 1);
  for (std::size_t i = 0; i <= last; ++i) {
    const double s = std::min(1.0, static_cast<double>(i) * grid_step);
    const double p = p_max_closed(s);
    const double q = q_max_closed(s);
    rows.push_back({s, p, q, p - q});
  }
  return rows;
}

inline void write_csv(std::ostream& os, const std::vector<ProfileRow>& rows) {
  os << "s,p_max,q_max,diff\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", r.s, r.p, r.q, r.diff);
    os << buf;
  }
}

/// Sign changes of diff over the open interval (exact zeros skipped).
inline std::size_t sign_changes(const std::vector<ProfileRow>& rows) {
  std::size_t changes = 0;
  int prev = 0;
  for (const auto& r : rows) {
    if (r.s <= 0.0 || r.s >= 1.0 || r.diff == 0.0) continue;
    const int sign = r.diff > 0.0 ? 1 : -1;
    if (prev != 0 && sign != prev) ++changes;
    prev = sign;
  }
  return changes;
}

}  // namespace wlocc::symmetric
