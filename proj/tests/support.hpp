#pragma once

// Shared generators and reference computations for the test suite.
// Reference code here deliberately avoids the library's own helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "wlocc/wlocc.hpp"

namespace wt {

using wlocc::WClassComponents;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
  }
  bool coin(double p = 0.5) { return uniform() < p; }

  /// n positive components and x0 drawn from a flat Dirichlet over n+1 cells;
  /// x0 is forced to 0 with probability zero_x0.
  WClassComponents state(std::size_t n, double zero_x0 = 0.0, double floor = 1e-3) {
    std::vector<double> w(n + 1);
    double total = 0.0;
    for (auto& v : w) {
      v = floor - std::log(uniform(1e-12, 1.0));
      total += v;
    }
    if (coin(zero_x0)) {
      total -= w.back();
      w.back() = 0.0;
    }
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = w[k] / total;
    return wlocc::make_state_clamped(x);
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// --- reference computations ----------------------------------------------------

inline double ref_x0(const WClassComponents& x) {
  double s = 0.0;
  for (double v : x.values()) s += v;
  return std::max(0.0, 1.0 - s);
}

/// Lower bound by direct counting, no sorting: every ratio below r0
/// contributes r_j / r0, and the largest of them carries one extra r0.
inline double ref_lower_bound(const WClassComponents& x, const WClassComponents& y) {
  const double r0 = ref_x0(x) / ref_x0(y);
  double rmin = 1e300, below_prod = 1.0;
  std::size_t below = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = x[k] / y[k];
    rmin = std::min(rmin, r);
    if (r0 - r > 1e-12) {
      ++below;
      below_prod *= r / r0;
    }
  }
  if (below == 0) return std::min(1.0, rmin);
  return below_prod * r0;  // (prod_{j<h} r_j / r0) * r_h = prod_{j<=h} (r_j / r0) * r0
}

inline double ref_upper_bound(const WClassComponents& x, const WClassComponents& y) {
  double rmin = 1e300;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (y[k] > 0.0) rmin = std::min(rmin, x[k] / y[k]);
  return std::min(1.0, rmin);
}

/// Second-smallest ratio by partial selection.
inline double ref_second_ratio(const WClassComponents& x, const WClassComponents& y) {
  std::vector<double> r;
  for (std::size_t k = 0; k < x.size(); ++k) r.push_back(x[k] / y[k]);
  std::nth_element(r.begin(), r.begin() + 1, r.end());
  return r[1];
}

/// Pair with y generated independently; roughly half land in the r2 >= r0 regime.
struct Pair {
  WClassComponents x, y;
};

inline Pair random_pair(Gen& g, std::size_t n) {
  return {g.state(n, 0.0, 0.02), g.state(n, 0.0, 0.02)};
}

/// Pair with r2 >= r0 forced by rescaling y0 downward if needed.
inline Pair saturating_pair(Gen& g, std::size_t n) {
  for (;;) {
    Pair p = random_pair(g, n);
    if (ref_second_ratio(p.x, p.y) >= ref_x0(p.x) / ref_x0(p.y)) return p;
    // shrink x0 of the source: scale the x's up, keep the profile shape
    std::vector<double> xs(p.x.values().begin(), p.x.values().end());
    const double s = std::accumulate(xs.begin(), xs.end(), 0.0);
    const double target_sum = s + g.uniform(0.3, 0.999) * (1.0 - s);
    for (auto& v : xs) v *= target_sum / s;
    p.x = wlocc::make_state_clamped(xs);
    if (ref_second_ratio(p.x, p.y) >= ref_x0(p.x) / ref_x0(p.y)) return p;
  }
}

}  // namespace wt
