#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasibell/bell.hpp"
#include "quasibell/joint.hpp"
#include "quasibell/optimize.hpp"
#include "quasibell/pauli.hpp"
#include "quasibell/werner.hpp"

namespace quasibell {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

inline Json to_json(const Direction& d) { return Json::array({d.x, d.y, d.z}); }

inline Direction direction_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw OutOfRange("direction JSON must be a 3-array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Json to_json(const std::vector<Direction>& dirs) {
  Json arr = Json::array();
  for (const auto& d : dirs) arr.push_back(to_json(d));
  return arr;
}

inline std::vector<Direction> directions_from_json(const Json& j) {
  std::vector<Direction> dirs;
  for (const auto& e : j) dirs.push_back(direction_from_json(e));
  return dirs;
}

inline Json to_json(const SymmetrizedOperator& s) {
  return Json{{"scalar", s.scalar}, {"vector", to_json(s.vector)}};
}

inline Json to_json(const OutcomeTable& t) {
  Json entries = Json::object();
  for (int idx = 0; idx < t.size(); ++idx) entries[t.tuple_key(idx)] = t[idx];
  Json correlators = Json::object();
  correlators["a0a1"] = t.correlator(0, 1);
  if (t.arity() == 3) {
    correlators["a0a2"] = t.correlator(0, 2);
    correlators["a1a2"] = t.correlator(1, 2);
    correlators["a0a1a2"] = t.triple_correlator();
  }
  return Json{{"arity", t.arity()},
              {"directions", to_json(t.directions())},
              {"bloch_u", to_json(t.bloch_u())},
              {"correlators", correlators},
              {"entries", entries},
              {"min_entry", t.min_entry()}};
}

inline Json to_json(const QuasiBellInstance& inst) {
  return Json{{"N", inst.order}, {"a_dirs", to_json(inst.a_dirs)}, {"b_dirs", to_json(inst.b_dirs)}};
}

inline QuasiBellInstance instance_from_json(const Json& j) {
  return QuasiBellInstance(j.at("N").get<int>(), directions_from_json(j.at("a_dirs")),
                           directions_from_json(j.at("b_dirs")));
}

/// Evaluation record for an instance: classical bound, quantum value, the
/// noise-scaled value when requested, and the symmetrized vectors per index.
inline Json evaluation_to_json(const QuasiBellInstance& inst,
                               std::optional<double> werner_z = std::nullopt) {
  QuasiBellEvaluator ev(inst.order);
  const double v = ev.value(inst.a_dirs, inst.b_dirs);
  Json per_index = Json::array();
  for (std::size_t i = 0; i < ev.alpha().size(); ++i) {
    Json fs = Json::array();
    for (int d : factor_set(inst.order, static_cast<std::uint32_t>(i))) fs.push_back(d);
    per_index.push_back(Json{{"index", i},
                             {"factors", fs},
                             {"alpha", to_json(ev.alpha()[i])},
                             {"beta", to_json(ev.beta()[i])}});
  }
  Json out{{"N", inst.order},
           {"classical_bound", 1.0},
           {"quantum_value", v},
           {"per_index_vectors", per_index}};
  if (werner_z) {
    out["werner_z"] = *werner_z;
    out["werner_value"] = *werner_z * v;
  }
  return out;
}

inline Json to_json(const OptimizationResult& r) {
  std::vector<Direction> best_dirs = r.best_a_dirs;
  best_dirs.insert(best_dirs.end(), r.best_b_dirs.begin(), r.best_b_dirs.end());
  Json trace = Json::array();
  for (const auto& t : r.restart_trace)
    trace.push_back(Json{{"restart", t.restart},
                         {"value", t.value},
                         {"evaluations", t.evaluations},
                         {"converged", t.converged}});
  return Json{{"N", r.order},
              {"restart_trace", trace},
              {"best_value", r.best_value},
              {"best_abs_value", std::abs(r.best_value)},
              {"best_a_dirs", to_json(r.best_a_dirs)},
              {"best_b_dirs", to_json(r.best_b_dirs)},
              {"best_dirs", to_json(best_dirs)},
              {"restarts_used", r.restarts_used},
              {"evaluations", r.evaluations},
              {"seed", r.seed},
              {"converged", r.converged},
              {"gradient_norm", r.gradient_norm}};
}

inline Json to_json(const WernerSweep& s) {
  Json out{{"N", s.order},
           {"instance", to_json(s.instance)},
           {"z", s.z_grid},
           {"value", s.values}};
  if (s.threshold)
    out["threshold"] = *s.threshold;
  else
    out["threshold"] = nullptr;
  return out;
}

inline std::string sweep_to_csv(const WernerSweep& s) {
  std::ostringstream os;
  os << "z,value,violated\n";
  for (std::size_t i = 0; i < s.z_grid.size(); ++i)
    os << s.z_grid[i] << ',' << s.values[i] << ',' << (s.values[i] > 1.0 ? "true" : "false")
       << '\n';
  return os.str();
}

inline Json to_json(const ClassicalBoundReport& r) {
  return Json{{"N", r.order},
              {"assignments", r.assignments},
              {"min", r.min_value},
              {"max", r.max_value},
              {"all_unit_magnitude", r.all_unit_magnitude},
              {"exhaustive", r.exhaustive}};
}

}  // namespace quasibell
