#pragma once

// W-class state model.
//
// A W-class state on n qubits is, up to local unitaries,
//
//   sqrt(x0)|0...0> + sum_k sqrt(x_k)|0..1_k..0>,   x0 = 1 - sum_k x_k,
//
// and for n >= 3 the components (x_1..x_n) identify the state uniquely. For
// n = 2 every state with equal components is still accepted, but uniqueness
// only holds up to the bipartite exception (sqrt(1/2)(|01> + |10>)).
//
// Parties are indexed from 0 in the C++ API. JSON records and CLI output use
// 1-based party labels.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "wlocc/error.hpp"
#include "wlocc/linalg.hpp"

namespace wlocc {

/// Normalization tolerance used throughout.
inline constexpr double kEps = 1e-12;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

class WClassComponents {
 public:
  WClassComponents() = default;

  std::size_t size() const noexcept { return x_.size(); }
  double operator[](std::size_t k) const { return x_[k]; }
  std::span<const double> values() const noexcept { return x_; }

  /// Weight of |0...0>, always derived from the stored components.
  double x0() const noexcept { return std::max(0.0, 1.0 - sum_); }
  double sum() const noexcept { return sum_; }

  bool is_product() const noexcept {
    return std::count_if(x_.begin(), x_.end(), [](double v) { return v > 0.0; }) < 2;
  }

  friend bool operator==(const WClassComponents&, const WClassComponents&) = default;

 private:
  friend WClassComponents make_state(std::span<const double> values);
  friend WClassComponents make_state_clamped(std::span<const double> values);

  explicit WClassComponents(std::vector<double> x)
      : x_(std::move(x)), sum_(std::accumulate(x_.begin(), x_.end(), 0.0)) {}

  std::vector<double> x_;
  double sum_ = 0.0;
};

/// Validated construction: every value in [0,1], sum <= 1 + kEps.
inline WClassComponents make_state(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyVector, "component vector is empty");
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonFiniteComponent, "component " + std::to_string(k + 1));
    if (v < 0.0)
      throw Error(ErrorCode::NegativeComponent, "component " + std::to_string(k + 1) + " = " +
                                                    std::to_string(v));
    total += v;
  }
  if (total > 1.0 + kEps)
    throw Error(ErrorCode::SumExceedsOne, "components sum to " + std::to_string(total));
  return WClassComponents(std::vector<double>(values.begin(), values.end()));
}

inline WClassComponents make_state(std::initializer_list<double> values) {
  return make_state(std::span<const double>(values.begin(), values.size()));
}

/// Like make_state, but first snaps round-off negatives (> -kEps) to zero.
/// Used for values produced by arithmetic rather than by a caller.
inline WClassComponents make_state_clamped(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  for (double& c : v)
    if (c < 0.0 && c > -kEps) c = 0.0;
  return make_state(v);
}

/// Componentwise comparison; x0 is implied.
inline double max_component_diff(const WClassComponents& a, const WClassComponents& b) {
  if (a.size() != b.size()) return kInf;
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

inline bool components_match(const WClassComponents& a, const WClassComponents& b,
                             double tol = 1e-9) {
  return max_component_diff(a, b) <= tol;
}

/// The W_N state: every component 1/N, x0 = 0.
inline WClassComponents w_state(std::size_t n) {
  return make_state(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

// ---------------------------------------------------------------------------
// Ratio profile

struct RatioProfile {
  std::vector<double> r;                  ///< x_k / y_k, +inf where y_k = 0
  double r0 = 0.0;                        ///< x0 / y0, +inf where y0 = 0
  std::vector<std::size_t> perm;          ///< parties sorted by ascending r, ties by index
  std::vector<std::size_t> zero_targets;  ///< parties with y_k = 0

  /// i-th smallest ratio.
  double sorted(std::size_t i) const { return r[perm[i]]; }
};

inline bool target_x0_is_zero(const WClassComponents& y) { return y.x0() <= kEps; }

inline RatioProfile ratio_profile(const WClassComponents& x, const WClassComponents& y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + " parties");
  RatioProfile prof;
  const std::size_t n = x.size();
  prof.r.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (y[k] > 0.0) {
      prof.r[k] = x[k] / y[k];
    } else {
      prof.r[k] = kInf;
      prof.zero_targets.push_back(k);
    }
  }
  prof.r0 = target_x0_is_zero(y) ? kInf : x.x0() / y.x0();
  prof.perm.resize(n);
  std::iota(prof.perm.begin(), prof.perm.end(), std::size_t{0});
  std::stable_sort(prof.perm.begin(), prof.perm.end(),
                   [&](std::size_t a, std::size_t b) { return prof.r[a] < prof.r[b]; });
  return prof;
}

// ---------------------------------------------------------------------------
// Statevector

/// Dense n-qubit amplitudes. Party k (0-based) is qubit k of the basis string
/// read left to right, i.e. bit (n - 1 - k) of the basis index.
class Statevector {
 public:
  Statevector(std::size_t n, std::vector<complex> amp) : n_(n), amp_(std::move(amp)) {
    if (amp_.size() != (std::size_t{1} << n_))
      throw Error(ErrorCode::DimensionMismatch, "amplitude count must be 2^n");
    double norm = 0.0;
    for (const auto& a : amp_) norm += std::norm(a);
    if (std::abs(norm - 1.0) > 1e-10)
      throw Error(ErrorCode::PreconditionViolated, "statevector norm " + std::to_string(norm));
  }

  std::size_t parties() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amp_.size(); }
  const std::vector<complex>& amplitudes() const noexcept { return amp_; }
  const complex& operator[](std::size_t i) const { return amp_[i]; }

  std::size_t party_bit(std::size_t k) const { return std::size_t{1} << (n_ - 1 - k); }

 private:
  std::size_t n_;
  std::vector<complex> amp_;
};

inline Statevector to_statevector(const WClassComponents& x) {
  const std::size_t n = x.size();
  std::vector<complex> amp(std::size_t{1} << n);
  amp[0] = std::sqrt(x.x0());
  for (std::size_t k = 0; k < n; ++k) amp[std::size_t{1} << (n - 1 - k)] = std::sqrt(x[k]);
  // Renormalize away the rounding in x0 = 1 - sum.
  double norm = 0.0;
  for (const auto& a : amp) norm += std::norm(a);
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : amp) a *= scale;
  return Statevector(n, std::move(amp));
}

/// Reads components back off a statevector in W-class form. Phases are
/// dropped: equal components mean equal states up to local unitaries.
inline WClassComponents components_from_statevector(const Statevector& v,
                                                    double heavy_tol = 1e-9) {
  const std::size_t n = v.parties();
  double total = std::norm(v[0]);
  std::vector<double> x(n);
  for (std::size_t i = 1; i < v.dim(); ++i) {
    if (std::popcount(i) >= 2) {
      if (std::abs(v[i]) >= heavy_tol)
        throw Error(ErrorCode::NotWClassForm,
                    "amplitude " + std::to_string(std::abs(v[i])) + " on basis index " +
                        std::to_string(i));
      continue;
    }
    total += std::norm(v[i]);
  }
  for (std::size_t k = 0; k < n; ++k) x[k] = std::norm(v[v.party_bit(k)]) / total;
  return make_state_clamped(x);
}

}  // namespace wlocc
