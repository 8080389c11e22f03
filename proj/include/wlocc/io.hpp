#pragma once

// JSON records for states, bound reports, measurements, plans and trees.
//
// State record:  {"x": [x1, ..., xN]}        (x0 implicit)
// Pair record:   {"x": [...], "y": [...]}
// Parties are 1-based on the wire.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wlocc/bounds.hpp"
#include "wlocc/error.hpp"
#include "wlocc/measurement.hpp"
#include "wlocc/plan.hpp"
#include "wlocc/protocol.hpp"
#include "wlocc/state.hpp"

namespace wlocc::io {

using json = nlohmann::json;

struct PairRecord {
  WClassComponents x;
  WClassComponents y;
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& why) { throw Error(ErrorCode::ParseError, why); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object()) parse_fail("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(std::string("missing field \"") + key + "\"");
  return *it;
}

inline double number(const json& j, const std::string& what) {
  if (!j.is_number()) parse_fail(what + " is not a number");
  return j.get<double>();
}

inline std::vector<double> number_array(const json& j, const char* key) {
  const json& a = field(j, key);
  if (!a.is_array()) parse_fail(std::string("\"") + key + "\" is not an array");
  std::vector<double> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out.push_back(number(a[i], std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::size_t party_index(const json& j) {
  if (!j.is_number_integer()) parse_fail("party is not an integer");
  const auto v = j.get<long long>();
  if (v < 1) parse_fail("party must be >= 1");
  return static_cast<std::size_t>(v - 1);
}

inline std::optional<MeasurementKind> kind_from_string(std::string_view s) {
  for (auto k : {MeasurementKind::T1, MeasurementKind::T2, MeasurementKind::DetLower,
                 MeasurementKind::Disentangle, MeasurementKind::X0Filter})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

inline const char* param_name(MeasurementKind k) {
  switch (k) {
    case MeasurementKind::T1: return "sigma";
    case MeasurementKind::T2: return "p";
    case MeasurementKind::DetLower: return "target";
    case MeasurementKind::X0Filter: return "lambda";
    case MeasurementKind::Disentangle: return nullptr;
  }
  return nullptr;
}

}  // namespace detail

// --- parsing -----------------------------------------------------------------

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

/// Malformed JSON or schema violations raise ParseError; well-formed records
/// that violate the state preconditions raise the state's own error code.
inline WClassComponents state_from_json(const json& j, const char* key = "x") {
  return make_state(detail::number_array(j, key));
}

inline PairRecord pair_from_json(const json& j) {
  WClassComponents x = state_from_json(j, "x");
  WClassComponents y = state_from_json(j, "y");
  if (x.size() != y.size())
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + " parties");
  return {std::move(x), std::move(y)};
}

// --- serialization -------------------------------------------------------------

inline json to_json(const WClassComponents& x) {
  return json{{"x", std::vector<double>(x.values().begin(), x.values().end())}};
}

inline json to_json(const BoundReport& r) {
  std::vector<std::size_t> perm;
  for (std::size_t k : r.sorted_ratios.perm) perm.push_back(k + 1);
  json j{{"upper", r.upper}, {"lower", r.lower}, {"r1_optimal", r.r1_optimal}, {"perm", perm}};
  j["h"] = r.h ? json(*r.h) : json(nullptr);
  return j;
}

inline json to_json(const OutcomeTriple& o) {
  json j{{"p", o.p}, {"s", o.s}};
  j["t"] = o.t ? json(*o.t) : json("KILL");
  return j;
}

inline OutcomeTriple outcome_from_json(const json& j) {
  OutcomeTriple o;
  o.p = detail::number(detail::field(j, "p"), "p");
  o.s = detail::number(detail::field(j, "s"), "s");
  const json& t = detail::field(j, "t");
  if (t.is_string() && t.get<std::string>() == "KILL")
    o.t = std::nullopt;
  else
    o.t = detail::number(t, "t");
  return o;
}

inline json params_json(MeasurementKind k, double value) {
  json p = json::object();
  if (const char* name = detail::param_name(k)) p[name] = value;
  return p;
}

inline json to_json(const Measurement& m) {
  json outs = json::array();
  for (const auto& o : m.outcomes) outs.push_back(to_json(o));
  return json{{"party", m.party + 1},
              {"kind", std::string(to_string(m.kind))},
              {"parameters", params_json(m.kind, m.parameter)},
              {"outcomes", outs}};
}

inline json to_json(const ProtocolPlan& plan) {
  json steps = json::array();
  for (const auto& s : plan.steps)
    steps.push_back(json{{"party", s.party + 1},
                         {"kind", std::string(to_string(s.kind))},
                         {"params", params_json(s.kind, s.param)},
                         {"predicted", to_json(s.predicted)}});
  return json{{"steps", steps},
              {"predicted_success", plan.predicted_success},
              {"target", to_json(plan.target)["x"]}};
}

inline ProtocolPlan plan_from_json(const json& j) {
  ProtocolPlan plan;
  plan.predicted_success = detail::number(detail::field(j, "predicted_success"), "predicted_success");
  const json& target = detail::field(j, "target");
  plan.target = make_state(target.is_object() ? detail::number_array(target, "x")
                                              : detail::number_array(json{{"x", target}}, "x"));
  const json& steps = detail::field(j, "steps");
  if (!steps.is_array()) detail::parse_fail("\"steps\" is not an array");
  for (const json& s : steps) {
    ProtocolStep step;
    step.party = detail::party_index(detail::field(s, "party"));
    const json& kind = detail::field(s, "kind");
    if (!kind.is_string()) detail::parse_fail("kind is not a string");
    const auto k = detail::kind_from_string(kind.get<std::string>());
    if (!k) detail::parse_fail("unknown step kind \"" + kind.get<std::string>() + "\"");
    step.kind = *k;
    if (const char* name = detail::param_name(step.kind))
      step.param = detail::number(detail::field(detail::field(s, "params"), name), name);
    else
      step.param = 0.0;
    step.predicted = outcome_from_json(detail::field(s, "predicted"));
    plan.steps.push_back(step);
  }
  return plan;
}

inline json to_json(const ProtocolTree& t) {
  json nodes = json::array();
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    nodes.push_back(json{{"id", i},
                         {"x", to_json(t.nodes[i].state)["x"]},
                         {"leaf", t.is_leaf(i)}});
  json edges = json::array();
  for (const auto& e : t.edges) {
    json j = to_json(e.outcome);
    j["from"] = e.from;
    j["to"] = e.to;
    j["party"] = e.party + 1;
    j["kind"] = std::string(to_string(e.kind));
    j["round"] = e.round;
    j["class"] = std::string(to_string(e.cls));
    edges.push_back(std::move(j));
  }
  return json{{"nodes", nodes}, {"edges", edges}, {"target", to_json(t.target)["x"]}};
}

inline json error_json(const Error& e) {
  const std::string what = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  const std::string msg = what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
  return json{{"error", std::string(to_string(e.code()))}, {"message", msg}};
}

}  // namespace wlocc::io
