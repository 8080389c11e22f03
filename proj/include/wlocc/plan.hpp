#pragma once

// Protocol plans: an ordered list of single-party measurements, each
// continuing on its first outcome.

#include <cstddef>
#include <string>
#include <vector>

#include "wlocc/measurement.hpp"
#include "wlocc/state.hpp"

namespace wlocc {

struct ProtocolStep {
  std::size_t party = 0;
  MeasurementKind kind = MeasurementKind::T1;
  double param = 1.0;  ///< sigma (T1), p (T2), target (DET_LOWER); unused otherwise
  OutcomeTriple predicted;
};

struct ProtocolPlan {
  std::vector<ProtocolStep> steps;
  double predicted_success = 1.0;
  WClassComponents target;
};

namespace detail {

/// x0 cancelling filter by a given party (the planner always passes the
/// argmax party, but a replayed plan names the party explicitly).
inline Measurement x0_filter_for(const WClassComponents& x, std::size_t party) {
  check_party(x, party);
  if (!(x[party] > 0.0))
    throw Error(ErrorCode::DegenerateComponent, "filter party has a zero component");
  ZeroX0Filter best = zero_x0_filter(x);
  if (best.party == party || x.x0() <= kEps) {
    best.measurement.party = party;
    best.measurement.kraus.party = party;
    return best.measurement;
  }
  throw Error(ErrorCode::StepPreconditionViolated,
              "X0_FILTER party " + std::to_string(party + 1) + " is not the largest component");
}

}  // namespace detail

/// Rebuilds the measurement a plan step performs on state x.
inline Measurement step_measurement(const WClassComponents& x, const ProtocolStep& step) {
  switch (step.kind) {
    case MeasurementKind::T1: return make_t1(x, step.party, step.param);
    case MeasurementKind::T2: return make_t2(x, step.party, step.param);
    case MeasurementKind::DetLower: return lowering_measurement(x, step.party, step.param);
    case MeasurementKind::Disentangle: return disentangle_measurement(x, step.party);
    case MeasurementKind::X0Filter: return detail::x0_filter_for(x, step.party);
  }
  throw Error(ErrorCode::PreconditionViolated, "unknown step kind");
}

/// True for steps whose every outcome carries the protocol forward.
constexpr bool is_deterministic(MeasurementKind k) {
  return k == MeasurementKind::DetLower || k == MeasurementKind::Disentangle;
}

}  // namespace wlocc
