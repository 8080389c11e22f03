#pragma once

// Exact statevector engine. Independent of the component calculus: outcome
// probabilities and post-states come from applying Kraus operators to the
// full 2^n amplitude vector.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "wlocc/error.hpp"
#include "wlocc/linalg.hpp"
#include "wlocc/plan.hpp"
#include "wlocc/state.hpp"

namespace wlocc {

struct OracleOptions {
  std::size_t max_parties = 20;
  double match_tol = 1e-9;
  double min_branch_probability = 1e-15;
};

struct LocalAction {
  std::size_t party = 0;
  Matrix2 op;
};

struct LocalOutcome {
  std::size_t parties = 0;
  std::vector<complex> amplitudes;  ///< unnormalized
  double probability = 0.0;

  Statevector normalized(double min_probability = 1e-15) const {
    if (!(probability > min_probability))
      throw Error(ErrorCode::PreconditionViolated, "outcome has zero probability");
    std::vector<complex> amp = amplitudes;
    const double scale = 1.0 / std::sqrt(probability);
    for (auto& a : amp) a *= scale;
    return Statevector(parties, std::move(amp));
  }
};

/// Applies a (possibly subnormalized) operator to one party's qubit.
inline LocalOutcome apply_local(const Statevector& v, const LocalAction& a) {
  const std::size_t n = v.parties();
  if (a.party >= n)
    throw Error(ErrorCode::PartyOutOfRange,
                "party " + std::to_string(a.party + 1) + " of " + std::to_string(n));
  for (const auto& e : a.op.m)
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
      throw Error(ErrorCode::PreconditionViolated, "non-finite operator entry");

  LocalOutcome out;
  out.parties = n;
  out.amplitudes = v.amplitudes();
  const std::size_t bit = v.party_bit(a.party);
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i & bit) continue;
    const complex lo = v[i];
    const complex hi = v[i | bit];
    out.amplitudes[i] = a.op(0, 0) * lo + a.op(0, 1) * hi;
    out.amplitudes[i | bit] = a.op(1, 0) * lo + a.op(1, 1) * hi;
  }
  for (const auto& amp : out.amplitudes) out.probability += std::norm(amp);
  return out;
}

/// Rotates a W-form statevector to nonnegative real amplitudes using a global
/// phase and one diag(1, e^{i phi}) unitary per party.
inline Statevector canonical_frame(const Statevector& v) {
  const std::size_t n = v.parties();
  const double phase0 = std::abs(v[0]) > 0.0 ? std::arg(v[0]) : 0.0;
  std::vector<complex> amp = v.amplitudes();
  const complex undo0 = std::polar(1.0, -phase0);
  for (auto& a : amp) a *= undo0;
  Statevector cur(n, std::move(amp));
  for (std::size_t k = 0; k < n; ++k) {
    const complex ak = cur[cur.party_bit(k)];
    if (std::abs(ak) == 0.0 || std::abs(std::arg(ak)) == 0.0) continue;
    const Matrix2 rot = Matrix2::diag(1.0, std::polar(1.0, -std::arg(ak)));
    cur = apply_local(cur, {k, rot}).normalized();
  }
  return cur;
}

/// Expands every outcome of every step and returns the total probability of
/// leaves whose components match plan.target. Failure outcomes end their
/// branch; both outcomes of DET_LOWER / DISENTANGLE continue.
inline double enumerate_protocol(const Statevector& v, const ProtocolPlan& plan,
                                 const OracleOptions& opt = {}) {
  if (v.parties() > opt.max_parties)
    throw Error(ErrorCode::TooManyParties, std::to_string(v.parties()) + " parties");

  struct Branch {
    Statevector state;
    double weight;
  };
  double success = 0.0;
  auto classify = [&](const Statevector& s, double w) {
    if (components_match(components_from_statevector(s), plan.target, opt.match_tol))
      success += w;
  };

  std::vector<Branch> live{{canonical_frame(v), 1.0}};
  for (std::size_t round = 0; round < plan.steps.size(); ++round) {
    const ProtocolStep& step = plan.steps[round];
    std::vector<Branch> next;
    for (const Branch& br : live) {
      Measurement m;
      try {
        m = step_measurement(components_from_statevector(br.state), step);
      } catch (const Error& e) {
        throw Error(ErrorCode::UnrealizableStep,
                    "round " + std::to_string(round + 1) + ": " + e.what());
      }
      for (std::size_t idx = 0; idx < m.kraus.ops.size(); ++idx) {
        const LocalOutcome out = apply_local(br.state, {step.party, m.kraus.ops[idx]});
        if (out.probability <= opt.min_branch_probability) continue;
        Branch child{canonical_frame(out.normalized(opt.min_branch_probability)),
                     br.weight * out.probability};
        if (idx == 0 || is_deterministic(step.kind))
          next.push_back(std::move(child));
        else
          classify(child.state, child.weight);
      }
    }
    live = std::move(next);
  }
  for (const Branch& br : live) classify(br.state, br.weight);
  return success;
}

}  // namespace wlocc
