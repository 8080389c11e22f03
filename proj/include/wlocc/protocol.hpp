#pragma once

// Conversion protocols between W-class states.
//
// plan_transform builds a single-success-branch protocol:
//   1. parties with y_k = 0 release their qubit (x0 absorbs x_k);
//   2. if y0 = 0, the largest-component party cancels x0 with a filter;
//   3. T1 rounds by the h parties whose ratio is below r0, highest first,
//      each equalizing its ratio with r0 (sigma = r_k / r0);
//   4. T2 rounds by the next parties in ratio order, each lifting the low
//      group to meet the acting party's ratio, until lifting would overshoot
//      1; the last T2 then uses p = (group ratio), bringing the group to 1;
//   5. parties left above their target lower deterministically.
// The product of success probabilities is the closed-form lower bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wlocc/bounds.hpp"
#include "wlocc/error.hpp"
#include "wlocc/measurement.hpp"
#include "wlocc/plan.hpp"
#include "wlocc/state.hpp"

namespace wlocc {

namespace detail {

inline ProtocolStep make_step(const Measurement& m, double param) {
  return ProtocolStep{m.party, m.kind, param, m.success()};
}

inline ProtocolStep deterministic_step(const WClassComponents& x, std::size_t k, double target) {
  OutcomeTriple o{1.0, 1.0, std::nullopt, X0Mode::GeqS};
  if (target > 0.0) o.t = x[k] / target;
  return ProtocolStep{k, target > 0.0 ? MeasurementKind::DetLower : MeasurementKind::Disentangle,
                      target, o};
}

}  // namespace detail

inline ProtocolPlan plan_transform(const WClassComponents& x, const WClassComponents& y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + " parties");
  ProtocolPlan plan;
  plan.target = y;
  if (max_component_diff(x, y) <= kEps) return plan;
  if (x.sum() <= 0.0) throw Error(ErrorCode::ProductState, "source has no entangled party");

  const std::size_t n = x.size();
  WClassComponents cur = x;
  double prob = 1.0;

  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < n; ++k) {
    if (y[k] > 0.0) {
      if (!(x[k] > 0.0))
        throw Error(ErrorCode::TargetUnreachable,
                    "party " + std::to_string(k + 1) + " is unentangled in the source");
      active.push_back(k);
    } else if (x[k] > 0.0) {
      plan.steps.push_back(detail::deterministic_step(cur, k, 0.0));
      cur = release_party(cur, k);
    }
  }
  if (active.empty()) return plan;

  const bool y0_zero = target_x0_is_zero(y);
  if (y0_zero && cur.x0() > kEps) {
    const ZeroX0Filter f = zero_x0_filter(cur);
    plan.steps.push_back(detail::make_step(f.measurement, f.lambda));
    prob *= f.success_p;
    cur = f.result;
  }

  auto ratio = [&](std::size_t k) { return cur[k] / y[k]; };
  auto ratio0 = [&]() { return y0_zero ? 0.0 : cur.x0() / y.x0(); };

  std::vector<std::size_t> order = active;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ratio(a) < ratio(b); });
  std::vector<double> sorted;
  for (std::size_t k : order) sorted.push_back(ratio(k));
  const std::size_t h = detail::ratios_below_r0(sorted, ratio0());

  // Part one: T1 rounds equalize parties h, h-1, ..., 1 with r0.
  for (std::size_t i = h; i >= 1; --i) {
    const std::size_t k = order[i - 1];
    const double sigma = ratio(k) / ratio0();
    const Measurement m = make_t1(cur, k, sigma);
    plan.steps.push_back(detail::make_step(m, sigma));
    prob *= m.success().p;
    cur = apply_update(cur, k, m.success());
  }

  // Part two: T2 rounds lift the low group until it reaches 1.
  std::size_t next = std::max<std::size_t>(h, 1);
  double rho = ratio(order.front());
  while (rho < 1.0 - kRatioTol && next < order.size()) {
    const std::size_t k = order[next++];
    const double p_equalize = 1.0 - y[k] * (ratio(k) - rho);
    const bool last = rho >= p_equalize * (1.0 - kRatioTol);
    const double p = last ? rho : p_equalize;
    if (p < 1.0) {
      const Measurement m = make_t2(cur, k, p);
      plan.steps.push_back(detail::make_step(m, p));
      prob *= p;
      cur = apply_update(cur, k, m.success());
    }
    rho = ratio(order.front());
    if (last) break;
  }

  for (std::size_t k : active) {
    if (ratio(k) > 1.0 + kRatioTol) {
      plan.steps.push_back(detail::deterministic_step(cur, k, y[k]));
      cur = deterministic_lower(cur, k, y[k]);
    }
  }
  if (!components_match(cur, y, 1e-9))
    throw Error(ErrorCode::TargetUnreachable, "planned protocol ends off target");
  plan.predicted_success = prob;
  return plan;
}

// ---------------------------------------------------------------------------
// Protocol trees

enum class EdgeClass { Unclassified, Intermediate, Failure };

constexpr std::string_view to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::Unclassified: return "UNCLASSIFIED";
    case EdgeClass::Intermediate: return "INTERMEDIATE";
    case EdgeClass::Failure: return "FAILURE";
  }
  return "?";
}

struct TreeEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t party = 0;
  MeasurementKind kind = MeasurementKind::T1;
  std::size_t round = 0;  ///< 1-based
  OutcomeTriple outcome;
  EdgeClass cls = EdgeClass::Unclassified;
};

struct TreeNode {
  WClassComponents state;
  std::vector<std::size_t> out;  ///< outgoing edge indices
};

/// Node 0 is the root.
struct ProtocolTree {
  std::vector<TreeNode> nodes;
  std::vector<TreeEdge> edges;
  WClassComponents target;
  bool classified = false;

  std::size_t add_node(WClassComponents s) {
    nodes.push_back(TreeNode{std::move(s), {}});
    return nodes.size() - 1;
  }
  std::size_t add_edge(TreeEdge e) {
    edges.push_back(e);
    nodes[e.from].out.push_back(edges.size() - 1);
    return edges.size() - 1;
  }
  bool is_leaf(std::size_t node) const { return nodes[node].out.empty(); }
};

/// Marks every edge INTERMEDIATE iff some leaf below it matches the target.
inline void classify_tree(ProtocolTree& t, double tol = 1e-9) {
  std::vector<char> reaches(t.nodes.size(), 0);
  // Children always have larger indices than their parent.
  for (std::size_t i = t.nodes.size(); i-- > 0;) {
    if (t.is_leaf(i)) {
      reaches[i] = components_match(t.nodes[i].state, t.target, tol);
      continue;
    }
    for (std::size_t e : t.nodes[i].out) {
      t.edges[e].cls = reaches[t.edges[e].to] ? EdgeClass::Intermediate : EdgeClass::Failure;
      if (reaches[t.edges[e].to]) reaches[i] = 1;
    }
  }
  t.classified = true;
}

/// Component-level outcomes of a step; the bool marks outcomes the protocol
/// continues on. Deterministic steps collapse to one p = 1 outcome.
inline std::vector<std::pair<OutcomeTriple, bool>> step_outcomes(const WClassComponents& x,
                                                                 const ProtocolStep& step) {
  if (is_deterministic(step.kind)) {
    if (step.kind == MeasurementKind::DetLower)
      (void)lowering_measurement(x, step.party, step.param);  // validates
    return {{detail::deterministic_step(x, step.party, step.param).predicted, true}};
  }
  const Measurement m = step_measurement(x, step);
  std::vector<std::pair<OutcomeTriple, bool>> out;
  for (std::size_t i = 0; i < m.outcomes.size(); ++i)
    if (m.outcomes[i].p > 0.0) out.emplace_back(m.outcomes[i], i == 0);
  return out;
}

inline ProtocolTree build_tree(const WClassComponents& x, const ProtocolPlan& plan) {
  ProtocolTree t;
  t.target = plan.target;
  std::size_t cursor = t.add_node(x);
  for (std::size_t r = 0; r < plan.steps.size(); ++r) {
    const ProtocolStep& step = plan.steps[r];
    const WClassComponents here = t.nodes[cursor].state;
    std::optional<std::size_t> cont;
    try {
      for (const auto& [o, continues] : step_outcomes(here, step)) {
        const std::size_t child = t.add_node(apply_update(here, step.party, o));
        t.add_edge(TreeEdge{cursor, child, step.party, step.kind, r + 1, o});
        if (continues) cont = child;
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::StepPreconditionViolated,
                  "round " + std::to_string(r + 1) + ": " + e.what());
    }
    if (!cont)
      throw Error(ErrorCode::StepPreconditionViolated,
                  "round " + std::to_string(r + 1) + ": continuing outcome has zero probability");
    cursor = *cont;
  }
  classify_tree(t);
  return t;
}

/// Sum over root-to-leaf paths of intermediate edges of the product of edge
/// probabilities.
inline double tree_probability(const ProtocolTree& t) {
  if (!t.classified) throw Error(ErrorCode::UnclassifiedTree, "call classify_tree first");
  if (t.nodes.empty()) return 0.0;
  std::vector<double> reach(t.nodes.size(), 0.0);
  reach[0] = 1.0;
  double total = t.is_leaf(0) && components_match(t.nodes[0].state, t.target) ? 1.0 : 0.0;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    for (std::size_t e : t.nodes[i].out) {
      const TreeEdge& edge = t.edges[e];
      if (edge.cls != EdgeClass::Intermediate) continue;
      reach[edge.to] += reach[i] * edge.outcome.p;
      if (t.is_leaf(edge.to)) total += reach[i] * edge.outcome.p;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct MonteCarloResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
};

namespace detail {

/// Uniform [0,1) stream keyed by (seed, trial); independent of call order.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    engine_.seed(seq);
  }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

inline MonteCarloResult monte_carlo(const WClassComponents& x, const ProtocolPlan& plan,
                                    std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::PreconditionViolated, "trials must be >= 1");
  const ProtocolTree t = build_tree(x, plan);
  std::vector<char> leaf_ok(t.nodes.size(), 0);
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    if (t.is_leaf(i)) leaf_ok[i] = components_match(t.nodes[i].state, t.target);

  MonteCarloResult res;
  res.trials = trials;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    detail::TrialRng rng(seed, trial);
    std::size_t node = 0;
    while (!t.is_leaf(node)) {
      const double u = rng.uniform();
      double acc = 0.0;
      std::size_t pick = t.nodes[node].out.back();
      for (std::size_t e : t.nodes[node].out) {
        acc += t.edges[e].outcome.p;
        if (u < acc) {
          pick = e;
          break;
        }
      }
      node = t.edges[pick].to;
    }
    if (leaf_ok[node]) ++res.successes;
  }
  const double n = static_cast<double>(trials);
  res.estimate = static_cast<double>(res.successes) / n;
  res.std_error = std::sqrt(res.estimate * (1.0 - res.estimate) / n);
  return res;
}

// ---------------------------------------------------------------------------
// Optimality audits

struct AuditReport {
  std::size_t component = 0;  ///< party with the smallest ratio at the root
  /// Failure edges leaving a success branch while the audited component is
  /// still nonzero.
  std::vector<std::size_t> live_failure_edges;
  /// Per success-branch node: x_c - sum over intermediate children p x_c.
  std::vector<std::pair<std::size_t, double>> residuals;
  double tol = 1e-12;

  bool empty() const {
    if (!live_failure_edges.empty()) return false;
    for (const auto& [node, r] : residuals)
      if (std::abs(r) > tol) return false;
    return true;
  }
};

/// Necessary conditions for reaching y with probability r_1 < 1: every failure
/// edge off a success branch kills the min-ratio component, and that
/// component is conserved on average over intermediate edges.
inline AuditReport audit_optimality(const ProtocolTree& t, const WClassComponents& y) {
  if (!t.classified) throw Error(ErrorCode::UnclassifiedTree, "call classify_tree first");
  AuditReport rep;
  if (t.nodes.empty()) return rep;
  const RatioProfile prof = ratio_profile(t.nodes[0].state, y);
  rep.component = prof.perm.front();
  const std::size_t c = rep.component;
  // With r_1 >= 1 the conversion is deterministic and nothing is conserved.
  if (prof.sorted(0) >= 1.0) return rep;

  std::vector<char> on_success(t.nodes.size(), 0);
  on_success[0] = 1;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    if (!on_success[i] || t.is_leaf(i)) continue;
    double mean = 0.0;
    bool any = false;
    for (std::size_t e : t.nodes[i].out) {
      const TreeEdge& edge = t.edges[e];
      const double xc = t.nodes[edge.to].state[c];
      if (edge.cls == EdgeClass::Intermediate) {
        on_success[edge.to] = 1;
        mean += edge.outcome.p * xc;
        any = true;
      } else if (xc > 1e-12) {
        rep.live_failure_edges.push_back(e);
      }
    }
    if (any) rep.residuals.emplace_back(i, t.nodes[i].state[c] - mean);
  }
  return rep;
}

/// True iff some success branch has s * t >= 1 on every edge.
inline bool star_branch_check(const ProtocolTree& t) {
  if (t.nodes.size() <= 1) return true;
  std::vector<char> good(t.nodes.size(), 0);
  for (std::size_t i = t.nodes.size(); i-- > 0;) {
    if (t.is_leaf(i)) {
      good[i] = components_match(t.nodes[i].state, t.target);
      continue;
    }
    for (std::size_t e : t.nodes[i].out) {
      const TreeEdge& edge = t.edges[e];
      if (edge.cls == EdgeClass::Intermediate && good[edge.to] &&
          edge.outcome.s_times_t() >= 1.0 - 1e-12)
        good[i] = 1;
    }
  }
  return good[0];
}

}  // namespace wlocc
