#pragma once

// Single-party measurement calculus on W-class components.
//
// When party k measures and outcome l occurs with probability p_l, every
// other party's component scales by s_l and party k's component is divided
// by t_l (or killed). A full measurement satisfies
//
//   sum_l p_l = 1,   sum_l p_l s_l = 1,   sum_l p_l / t_l <= 1,
//
// which forces each component to be non-increasing on average.
//
// All Kraus operators built here are upper triangular, [[a, b], [0, d]], so
// the post-measurement state stays in W-class form.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wlocc/error.hpp"
#include "wlocc/linalg.hpp"
#include "wlocc/state.hpp"

namespace wlocc {

/// How x0 relates to s * x0 after an outcome.
enum class X0Mode {
  EqualS,  ///< x0' = s x0 exactly
  GeqS,    ///< x0' >= s x0
  Free,    ///< unconstrained (the x0 cancelling filter)
};

constexpr std::string_view to_string(X0Mode m) {
  switch (m) {
    case X0Mode::EqualS: return "EQUAL_S";
    case X0Mode::GeqS: return "GEQ_S";
    case X0Mode::Free: return "FREE";
  }
  return "?";
}

struct OutcomeTriple {
  double p = 1.0;
  double s = 1.0;
  std::optional<double> t = 1.0;  ///< nullopt: the measuring party's component is killed
  X0Mode x0_mode = X0Mode::EqualS;

  bool kills() const noexcept { return !t.has_value(); }
  /// p / t, with killing outcomes contributing nothing.
  double p_over_t() const noexcept { return kills() ? 0.0 : p / *t; }
  /// s * t, infinite for killing outcomes.
  double s_times_t() const noexcept { return kills() ? kInf : s * *t; }
};

inline void validate_outcome(const OutcomeTriple& o) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidOutcome, why); };
  if (!(o.p >= 0.0 && o.p <= 1.0 + kEps)) fail("p = " + std::to_string(o.p) + " outside [0,1]");
  if (!(o.s >= 0.0) || !std::isfinite(o.s)) fail("s = " + std::to_string(o.s));
  if (o.t && !(*o.t > 0.0)) fail("t = " + std::to_string(*o.t) + " must be positive");
  if (o.p * o.s > 1.0 + kEps) fail("p*s exceeds 1");
  if (o.p_over_t() > 1.0 + kEps) fail("p/t exceeds 1");
}

struct KrausSet {
  std::size_t party = 0;
  std::vector<Matrix2> ops;

  /// max entry of |sum M^dagger M - I|.
  double completeness_error() const {
    Matrix2 acc = Matrix2::zero();
    for (const auto& m : ops) acc = acc + gram(m);
    return max_abs_diff(acc, Matrix2::identity());
  }
};

enum class MeasurementKind { T1, T2, DetLower, Disentangle, X0Filter };

constexpr std::string_view to_string(MeasurementKind k) {
  switch (k) {
    case MeasurementKind::T1: return "T1";
    case MeasurementKind::T2: return "T2";
    case MeasurementKind::DetLower: return "DET_LOWER";
    case MeasurementKind::Disentangle: return "DISENTANGLE";
    case MeasurementKind::X0Filter: return "X0_FILTER";
  }
  return "?";
}

/// A measurement by one party: Kraus operators and the matching outcome
/// triples, index-aligned. outcomes[0] is the outcome a protocol continues on.
struct Measurement {
  MeasurementKind kind = MeasurementKind::T1;
  std::size_t party = 0;
  double parameter = 1.0;  ///< sigma (T1), p (T2), target (DET_LOWER), lambda (X0_FILTER)
  KrausSet kraus;
  std::vector<OutcomeTriple> outcomes;

  const OutcomeTriple& success() const { return outcomes.front(); }
};

namespace detail {

inline void check_party(const WClassComponents& x, std::size_t k) {
  if (k >= x.size())
    throw Error(ErrorCode::PartyOutOfRange,
                "party " + std::to_string(k + 1) + " of " + std::to_string(x.size()));
}

}  // namespace detail

/// Component update for one outcome of a measurement by party k.
inline WClassComponents apply_update(const WClassComponents& x, std::size_t k,
                                     const OutcomeTriple& o) {
  detail::check_party(x, k);
  validate_outcome(o);
  std::vector<double> next(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) next[j] = o.s * x[j];
  next[k] = o.kills() ? 0.0 : x[k] / *o.t;

  double total = 0.0;
  for (std::size_t j = 0; j < next.size(); ++j) {
    if (next[j] > 1.0 + kEps)
      throw Error(ErrorCode::ComponentOverflow, "component " + std::to_string(j + 1) + " -> " +
                                                    std::to_string(next[j]));
    total += next[j];
  }
  if (total > 1.0 + 1e-10)
    throw Error(ErrorCode::ComponentOverflow, "components sum to " + std::to_string(total));

  const double x0_new = 1.0 - total;
  const double x0_scaled = o.s * x.x0();
  if (o.x0_mode == X0Mode::EqualS && std::abs(x0_new - x0_scaled) > 1e-10)
    throw Error(ErrorCode::InvalidOutcome, "x0 does not scale by s");
  if (o.x0_mode == X0Mode::GeqS && x0_new < x0_scaled - 1e-10)
    throw Error(ErrorCode::InvalidOutcome, "x0 drops below s*x0");
  return make_state_clamped(next);
}

struct FilterOutcome {
  double probability = 0.0;
  WClassComponents state;
};

/// Acts with an upper-triangular operator [[a, b], [0, d]] on party k and
/// returns the outcome probability and post-state components.
inline FilterOutcome apply_local_filter(const WClassComponents& x, std::size_t k,
                                        const Matrix2& op) {
  detail::check_party(x, k);
  if (!op.is_upper_triangular(1e-14))
    throw Error(ErrorCode::NotWClassForm, "operator has a nonzero lower-left entry");
  const complex a = op(0, 0), b = op(0, 1), d = op(1, 1);
  const double w0 = std::norm(a * std::sqrt(x.x0()) + b * std::sqrt(x[k]));
  std::vector<double> w(x.size());
  double prob = w0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    w[j] = (j == k ? std::norm(d) : std::norm(a)) * x[j];
    prob += w[j];
  }
  FilterOutcome out;
  out.probability = prob;
  if (prob > 0.0) {
    for (double& v : w) v /= prob;
    out.state = make_state_clamped(w);
  } else {
    out.state = make_state_clamped(std::vector<double>(x.size(), 0.0));
  }
  return out;
}

/// T1: ops {diag(sqrt(sigma), 1), diag(sqrt(1 - sigma), 0)}. The continuing
/// outcome has t = p, x0 scaling exactly by s, and s * p = sigma.
inline Measurement make_t1(const WClassComponents& x, std::size_t k, double sigma) {
  detail::check_party(x, k);
  if (!(sigma > 0.0 && sigma <= 1.0))
    throw Error(ErrorCode::SigmaOutOfRange, "sigma = " + std::to_string(sigma));
  const double xk = x[k];
  if (!(xk > 0.0 && xk < 1.0))
    throw Error(ErrorCode::DegenerateComponent, "x_k = " + std::to_string(xk));

  Measurement m;
  m.kind = MeasurementKind::T1;
  m.party = k;
  m.parameter = sigma;
  m.kraus.party = k;
  m.kraus.ops = {Matrix2::diag(std::sqrt(sigma), 1.0), Matrix2::diag(std::sqrt(1.0 - sigma), 0.0)};

  const double p = sigma * (1.0 - xk) + xk;
  const double q = (1.0 - sigma) * (1.0 - xk);
  m.outcomes = {
      OutcomeTriple{p, sigma / p, p, X0Mode::EqualS},
      OutcomeTriple{q, 1.0 / (1.0 - xk), std::nullopt, X0Mode::EqualS},
  };
  return m;
}

/// T2: ops {diag(1, c), diag(0, sqrt(1 - c^2))} with c^2 = 1 - (1 - p)/x_k.
/// The continuing outcome has s = 1/p and x_k -> 1 - (1 - x_k)/p; the other
/// outcome leaves party k alone in |1>.
///
/// Any two-outcome measurement whose continuing operator has a = 1 must be of
/// this form: completeness gives |a|^2 + |a'|^2 = 1 for the (0,0) entries, so
/// a' = 0, and then the off-diagonal sum a* b + a'* b' = b must vanish.
inline Measurement make_t2(const WClassComponents& x, std::size_t k, double p) {
  detail::check_party(x, k);
  const double xk = x[k];
  if (!(xk > 0.0)) throw Error(ErrorCode::DegenerateComponent, "x_k = 0");
  if (!(p <= 1.0)) throw Error(ErrorCode::ProbabilityOutOfRange, "p = " + std::to_string(p));
  if (!(p > 1.0 - xk))
    throw Error(ErrorCode::ProbabilityTooSmall,
                "p = " + std::to_string(p) + " <= 1 - x_k = " + std::to_string(1.0 - xk));

  const double c2 = 1.0 - (1.0 - p) / xk;
  Measurement m;
  m.kind = MeasurementKind::T2;
  m.party = k;
  m.parameter = p;
  m.kraus.party = k;
  m.kraus.ops = {Matrix2::diag(1.0, std::sqrt(c2)), Matrix2::diag(0.0, std::sqrt(1.0 - c2))};

  const double xk_new = 1.0 - (1.0 - xk) / p;
  m.outcomes = {
      OutcomeTriple{p, 1.0 / p, xk / xk_new, X0Mode::EqualS},
      OutcomeTriple{1.0 - p, 0.0, xk, X0Mode::EqualS},
  };
  return m;
}

/// Lowers x_k to `target` with probability one; x0 absorbs the difference.
inline WClassComponents deterministic_lower(const WClassComponents& x, std::size_t k,
                                            double target) {
  detail::check_party(x, k);
  if (!(target >= 0.0 && target <= x[k]))
    throw Error(ErrorCode::TargetNotBelow,
                "target " + std::to_string(target) + " vs x_k " + std::to_string(x[k]));
  std::vector<double> next(x.values().begin(), x.values().end());
  next[k] = target;
  return make_state_clamped(next);
}

/// Two equiprobable outcomes (1/sqrt2)[[1, +-i g], [0, c]] with
/// c^2 = target / x_k and g^2 = 1 - c^2. Both outcomes carry the same
/// components: |sqrt(x0) +- i g sqrt(x_k)|^2 = x0 + g^2 x_k.
inline Measurement lowering_measurement(const WClassComponents& x, std::size_t k, double target) {
  detail::check_party(x, k);
  if (!(target >= 0.0 && target <= x[k]))
    throw Error(ErrorCode::TargetNotBelow,
                "target " + std::to_string(target) + " vs x_k " + std::to_string(x[k]));
  const double c2 = x[k] > 0.0 ? target / x[k] : 1.0;
  const double c = std::sqrt(c2);
  const double g = std::sqrt(1.0 - c2);
  const double h = 1.0 / std::sqrt(2.0);
  const complex ig{0.0, g};

  Measurement m;
  m.kind = target > 0.0 ? MeasurementKind::DetLower : MeasurementKind::Disentangle;
  m.party = k;
  m.parameter = target;
  m.kraus.party = k;
  m.kraus.ops = {complex{h} * Matrix2::upper(1.0, ig, c), complex{h} * Matrix2::upper(1.0, -ig, c)};
  std::optional<double> t;
  if (target > 0.0) t = x[k] / target;
  m.outcomes = {OutcomeTriple{0.5, 1.0, t, X0Mode::GeqS}, OutcomeTriple{0.5, 1.0, t, X0Mode::GeqS}};
  return m;
}

/// Same-size version of disentangle: x_k -> 0, x0 -> x0 + x_k.
inline WClassComponents release_party(const WClassComponents& x, std::size_t k) {
  return deterministic_lower(x, k, 0.0);
}

inline Measurement disentangle_measurement(const WClassComponents& x, std::size_t k) {
  return lowering_measurement(x, k, 0.0);
}

/// Party k leaves the state; the result has n - 1 parties and x0' = x0 + x_k.
inline WClassComponents disentangle(const WClassComponents& x, std::size_t k) {
  detail::check_party(x, k);
  if (x.size() < 3) throw Error(ErrorCode::TooFewParties, "disentangle needs n >= 3");
  std::vector<double> rest;
  rest.reserve(x.size() - 1);
  for (std::size_t j = 0; j < x.size(); ++j)
    if (j != k) rest.push_back(x[j]);
  return make_state_clamped(rest);
}

struct ZeroX0Filter {
  std::size_t party = 0;  ///< acting party: argmax component, lowest index on ties
  double lambda = 1.0;
  double success_p = 1.0;  ///< lambda (1 - x0)
  WClassComponents result;
  Measurement measurement;  ///< outcomes[0] is the filter M, outcomes[1] its complement
};

/// Filter M = sqrt(lambda) [[1, -sqrt(x0/x_i)], [0, 1]] by the largest
/// component's party. It cancels the |0...0> amplitude, leaving
/// x_j / (1 - x0) everywhere, and lambda is the largest value with
/// M^dagger M <= I. With x0 = 0 this is the identity.
inline ZeroX0Filter zero_x0_filter(const WClassComponents& x) {
  if (x.sum() <= 0.0)
    throw Error(ErrorCode::PreconditionViolated, "filter needs a nonzero component");
  ZeroX0Filter f;
  for (std::size_t k = 1; k < x.size(); ++k)
    if (x[k] > x[f.party]) f.party = k;
  const std::size_t i = f.party;
  f.measurement.kind = MeasurementKind::X0Filter;
  f.measurement.party = i;
  f.measurement.kraus.party = i;

  const double x0 = x.x0();
  if (x0 <= kEps) {
    f.result = x;
    f.measurement.parameter = 1.0;
    f.measurement.kraus.ops = {Matrix2::identity()};
    f.measurement.outcomes = {OutcomeTriple{1.0, 1.0, 1.0, X0Mode::Free}};
    return f;
  }

  const double xi = x[i];
  f.lambda = 2.0 * xi / (x0 + 2.0 * xi + std::sqrt(x0 * x0 + 4.0 * xi * x0));
  f.success_p = f.lambda * (1.0 - x0);
  std::vector<double> next(x.values().begin(), x.values().end());
  for (double& v : next) v /= (1.0 - x0);
  f.result = make_state_clamped(next);

  const double g = std::sqrt(x0 / xi);
  const double sl = std::sqrt(f.lambda);
  const Matrix2 filter = Matrix2::upper(sl, -sl * g, sl);
  // Complement: I - M^dagger M is rank one, w w^T with w >= 0 entrywise.
  const double w0 = std::sqrt(std::max(0.0, 1.0 - f.lambda));
  const double w1 = std::sqrt(std::max(0.0, 1.0 - f.lambda * (1.0 + g * g)));
  const Matrix2 complement = Matrix2::upper(w0, w1, 0.0);
  f.measurement.parameter = f.lambda;
  f.measurement.kraus.ops = {filter, complement};

  const double q = 1.0 - f.success_p;
  f.measurement.outcomes = {
      OutcomeTriple{f.success_p, 1.0 / (1.0 - x0), 1.0 - x0, X0Mode::Free},
      OutcomeTriple{q, q > 0.0 ? w0 * w0 / q : 0.0, std::nullopt, X0Mode::Free},
  };
  return f;
}

struct MonotonicityReport {
  std::vector<double> slack;  ///< x_j - sum_l p_l x_{j,l}, per party
  bool holds = true;
};

/// Checks that no component increases on average over a full measurement.
inline MonotonicityReport check_monotonicity(const WClassComponents& x, std::size_t k,
                                             const std::vector<OutcomeTriple>& outcomes) {
  detail::check_party(x, k);
  double sp = 0.0, sps = 0.0, spt = 0.0;
  for (const auto& o : outcomes) {
    sp += o.p;
    sps += o.p * o.s;
    spt += o.p_over_t();
  }
  if (outcomes.empty() || std::abs(sp - 1.0) > kEps || std::abs(sps - 1.0) > kEps ||
      spt > 1.0 + kEps)
    throw Error(ErrorCode::InvalidMeasurement, "sum p = " + std::to_string(sp) +
                                                   ", sum ps = " + std::to_string(sps) +
                                                   ", sum p/t = " + std::to_string(spt));

  MonotonicityReport rep;
  rep.slack.assign(x.values().begin(), x.values().end());
  for (const auto& o : outcomes) {
    if (o.p <= 0.0) continue;
    const WClassComponents post = apply_update(x, k, o);
    for (std::size_t j = 0; j < x.size(); ++j) rep.slack[j] -= o.p * post[j];
  }
  for (double sl : rep.slack)
    if (sl < -kEps) rep.holds = false;
  return rep;
}

}  // namespace wlocc
