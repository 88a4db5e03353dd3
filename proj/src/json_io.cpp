#include "bk/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace bk {

namespace {

double round_sig12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

Json interval_to_json(const Interval& iv) {
  Json j;
  j["lo"] = json_number(iv.lo);
  j["hi"] = json_number(iv.hi);
  j["lo_closed"] = iv.lo_closed;
  j["hi_closed"] = iv.hi_closed;
  return j;
}

Interval interval_from_json(const Json& j) {
  Interval iv;
  iv.lo = number_from_json(j, "lo");
  iv.hi = number_from_json(j, "hi");
  iv.lo_closed = j.value("lo_closed", false);
  iv.hi_closed = j.value("hi_closed", false);
  return iv;
}

const Json& require(const Json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end()) throw DomainError("missing field '" + field + "'");
  return *it;
}

std::vector<std::string> string_list(const Json& j, const std::string& field) {
  const Json& v = require(j, field);
  if (!v.is_array()) throw DomainError("field '" + field + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(e.get<std::string>());
  return out;
}

std::vector<std::vector<std::vector<double>>> cube_from_json(const Json& j,
                                                             const std::string& field) {
  const Json& v = require(j, field);
  std::vector<std::vector<std::vector<double>>> out;
  for (const auto& plane : v) {
    out.emplace_back();
    for (const auto& row : plane) {
      out.back().emplace_back();
      for (const auto& e : row) out.back().back().push_back(e.get<double>());
    }
  }
  return out;
}

Json cube_to_json(const std::vector<std::vector<std::vector<double>>>& c) {
  Json out = Json::array();
  for (const auto& plane : c) {
    Json jp = Json::array();
    for (const auto& row : plane) {
      Json jr = Json::array();
      for (double v : row) jr.push_back(json_number(v));
      jp.push_back(std::move(jr));
    }
    out.push_back(std::move(jp));
  }
  return out;
}

Json matrix_to_json(const std::vector<std::vector<double>>& m, bool extended = false) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json jr = Json::array();
    for (double v : row) jr.push_back(extended ? json_number(v) : Json(round_sig12(v)));
    out.push_back(std::move(jr));
  }
  return out;
}

std::vector<std::vector<double>> matrix_from_json(const Json& j, const std::string& field,
                                                  bool extended = false) {
  const Json& v = require(j, field);
  std::vector<std::vector<double>> out;
  for (const auto& row : v) {
    out.emplace_back();
    for (const auto& e : row)
      out.back().push_back(extended ? number_from_json(Json{{"v", e}}, "v") : e.get<double>());
  }
  return out;
}

}  // namespace

Json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
  if (std::isnan(v)) throw DomainError("cannot serialize NaN");
  return Json(round_sig12(v));
}

double number_from_json(const Json& j, const std::string& field) {
  const Json& v = require(j, field);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return ext_inf();
    if (s == "-inf") return -ext_inf();
    throw DomainError("field '" + field + "' has a non-numeric value '" + s + "'");
  }
  if (!v.is_number()) throw DomainError("field '" + field + "' must be a number");
  return v.get<double>();
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json space_to_json(const SpaceRef& space) {
  Json j;
  if (!space) throw DomainError("null space");
  if (space->is_real_line()) {
    j["type"] = "real_line";
  } else {
    j["type"] = "finite";
    j["labels"] = space->labels();
    Json metric = Json::array();
    for (const auto& row : space->metric()) {
      Json jr = Json::array();
      for (double v : row) jr.push_back(round_sig12(v));
      metric.push_back(std::move(jr));
    }
    j["metric"] = std::move(metric);
  }
  return j;
}

SpaceRef space_from_json(const Json& j) {
  const std::string type = require(j, "type").get<std::string>();
  if (type == "real_line") return MetricSpace::real_line();
  if (type != "finite") throw DomainError("unknown space type '" + type + "'");
  std::vector<std::string> labels = string_list(j, "labels");
  if (!j.contains("metric")) return MetricSpace::discrete(std::move(labels));
  std::vector<std::vector<double>> metric;
  for (const auto& row : j.at("metric")) {
    metric.emplace_back();
    for (const auto& e : row) metric.back().push_back(e.get<double>());
  }
  return MetricSpace::finite(std::move(labels), std::move(metric));
}

Json set_to_json(const BorelSetExpr& b) {
  Json j;
  if (!b.space()) throw DomainError("set has no space");
  if (b.space()->is_real_line()) {
    j["type"] = "intervals";
    Json ivs = Json::array();
    for (const Interval& iv : b.interval_list()) ivs.push_back(interval_to_json(iv));
    j["intervals"] = std::move(ivs);
  } else {
    j["type"] = "points";
    Json labels = Json::array();
    for (int i : b.indices()) labels.push_back(b.space()->labels()[static_cast<std::size_t>(i)]);
    j["labels"] = std::move(labels);
  }
  return j;
}

BorelSetExpr set_from_json(const Json& j, const SpaceRef& space) {
  const std::string type = require(j, "type").get<std::string>();
  if (type == "intervals") {
    std::vector<Interval> ivs;
    for (const auto& e : require(j, "intervals")) ivs.push_back(interval_from_json(e));
    return BorelSetExpr::intervals(std::move(ivs));
  }
  if (type == "points") {
    if (!space || space->is_real_line())
      throw DomainError("point sets require a finite space for context");
    return BorelSetExpr::points_by_label(space, string_list(j, "labels"));
  }
  throw DomainError("unknown set type '" + type + "'");
}

Json measure_to_json(const ProbMeasure& p) {
  Json j;
  j["space"] = space_to_json(p.space());
  Json atoms = Json::array();
  for (const WeightedAtom& a : p.atoms()) {
    Json atom = Json::array();
    if (p.space()->is_real_line())
      atom.push_back(round_sig12(a.point.coord));
    else
      atom.push_back(p.space()->labels()[static_cast<std::size_t>(a.point.index)]);
    atom.push_back(round_sig12(a.weight));
    atoms.push_back(std::move(atom));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

ProbMeasure measure_from_json(const Json& j) {
  SpaceRef space = space_from_json(require(j, "space"));
  std::vector<WeightedAtom> atoms;
  for (const auto& e : require(j, "atoms")) {
    if (!e.is_array() || e.size() != 2) throw DomainError("atom must be a [point, weight] pair");
    WeightedAtom a;
    if (space->is_real_line()) {
      a.point = Point::real(e[0].get<double>());
    } else {
      int idx = space->label_index(e[0].get<std::string>());
      if (idx < 0) throw DomainError("unknown atom label '" + e[0].get<std::string>() + "'");
      a.point = Point::finite(idx);
    }
    a.weight = e[1].get<double>();
    atoms.push_back(a);
  }
  return ProbMeasure(std::move(space), std::move(atoms));
}

Json distribution_to_json(const DistributionFunction& f) {
  Json j;
  Json xs = Json::array(), values = Json::array(), kinds = Json::array();
  for (std::size_t i = 0; i < f.breakpoints().size(); ++i) {
    xs.push_back(round_sig12(f.breakpoints()[i]));
    values.push_back(Json::array({round_sig12(f.left_values()[i]),
                                  round_sig12(f.right_values()[i])}));
    kinds.push_back(f.left_values()[i] == f.right_values()[i] ? "continuous" : "jump");
  }
  j["breakpoints"] = std::move(xs);
  j["values"] = std::move(values);
  j["kinds"] = std::move(kinds);
  return j;
}

DistributionFunction distribution_from_json(const Json& j) {
  std::vector<double> xs, left, right;
  for (const auto& e : require(j, "breakpoints")) xs.push_back(e.get<double>());
  for (const auto& e : require(j, "values")) {
    if (!e.is_array() || e.size() != 2)
      throw DomainError("distribution values must be [left, right] pairs");
    left.push_back(e[0].get<double>());
    right.push_back(e[1].get<double>());
  }
  return DistributionFunction(std::move(xs), std::move(left), std::move(right));
}

Json kernel_to_json(const StochasticKernel& k) {
  Json j;
  j["target_space"] = space_to_json(k.target());
  j["param_space"] = space_to_json(k.param_space());
  Json params = Json::array(), table = Json::array();
  for (std::size_t i = 0; i < k.params().size(); ++i) {
    const Point& p = k.params()[i];
    if (k.param_space()->is_real_line())
      params.push_back(round_sig12(p.coord));
    else
      params.push_back(k.param_space()->labels()[static_cast<std::size_t>(p.index)]);
    table.push_back(measure_to_json(k.images()[i]));
  }
  j["params"] = std::move(params);
  j["table"] = std::move(table);
  return j;
}

StochasticKernel kernel_from_json(const Json& j) {
  SpaceRef target = space_from_json(require(j, "target_space"));
  SpaceRef param_space = space_from_json(require(j, "param_space"));
  std::vector<Point> params;
  for (const auto& e : require(j, "params")) {
    if (param_space->is_real_line()) {
      params.push_back(Point::real(e.get<double>()));
    } else {
      int idx = param_space->label_index(e.get<std::string>());
      if (idx < 0) throw DomainError("unknown parameter label");
      params.push_back(Point::finite(idx));
    }
  }
  std::vector<ProbMeasure> images;
  for (const auto& e : require(j, "table")) images.push_back(measure_from_json(e));
  return StochasticKernel(std::move(target), std::move(param_space), std::move(params),
                          std::move(images));
}

Json pomdp_to_json(const PomdpModel& m) {
  Json j;
  j["states"] = m.states;
  j["observations"] = m.observations;
  j["actions"] = m.actions;
  j["P"] = cube_to_json(m.transition);
  j["Q"] = cube_to_json(m.observation);
  j["Q0"] = matrix_to_json(m.initial_observation);
  j["cost"] = matrix_to_json(m.cost, /*extended=*/true);
  j["alpha"] = round_sig12(m.alpha);
  j["assumption"] = m.assumption == AssumptionTag::D ? "D" : "P";
  return j;
}

PomdpModel pomdp_from_json(const Json& j) {
  PomdpModel m;
  m.states = string_list(j, "states");
  m.observations = string_list(j, "observations");
  m.actions = string_list(j, "actions");
  m.transition = cube_from_json(j, "P");
  m.observation = cube_from_json(j, "Q");
  m.initial_observation = matrix_from_json(j, "Q0");
  m.cost = matrix_from_json(j, "cost", /*extended=*/true);
  m.alpha = number_from_json(j, "alpha");
  const std::string tag = require(j, "assumption").get<std::string>();
  if (tag == "D")
    m.assumption = AssumptionTag::D;
  else if (tag == "P")
    m.assumption = AssumptionTag::P;
  else
    throw DomainError("assumption must be 'D' or 'P'");
  m.validate();
  return m;
}

Json mdmii_to_json(const MdmiiModel& m) {
  Json j;
  j["observed_states"] = m.observed_states;
  j["hidden_states"] = m.hidden_states;
  j["actions"] = m.actions;
  Json avail;
  for (std::size_t y = 0; y < m.ny(); ++y) {
    Json list = Json::array();
    for (std::size_t a = 0; a < m.na(); ++a)
      if (m.available[y][a]) list.push_back(m.actions[a]);
    avail[m.observed_states[y]] = std::move(list);
  }
  j["available"] = std::move(avail);
  j["P"] = cube_to_json(m.transition);
  j["cost"] = matrix_to_json(m.cost, /*extended=*/true);
  j["alpha"] = round_sig12(m.alpha);
  j["assumption"] = m.assumption == AssumptionTag::D ? "D" : "P";
  return j;
}

MdmiiModel mdmii_from_json(const Json& j) {
  MdmiiModel m;
  m.observed_states = string_list(j, "observed_states");
  m.hidden_states = string_list(j, "hidden_states");
  m.actions = string_list(j, "actions");
  const Json& avail = require(j, "available");
  m.available.assign(m.ny(), std::vector<bool>(m.na(), false));
  for (std::size_t y = 0; y < m.ny(); ++y) {
    auto it = avail.find(m.observed_states[y]);
    if (it == avail.end())
      throw DomainError("missing availability for observed state '" + m.observed_states[y] + "'");
    for (const auto& e : *it) {
      const std::string a = e.get<std::string>();
      auto ait = std::find(m.actions.begin(), m.actions.end(), a);
      if (ait == m.actions.end()) throw DomainError("unknown action '" + a + "' in availability");
      m.available[y][static_cast<std::size_t>(ait - m.actions.begin())] = true;
    }
  }
  m.transition = cube_from_json(j, "P");
  m.cost = matrix_from_json(j, "cost", /*extended=*/true);
  m.alpha = number_from_json(j, "alpha");
  const std::string tag = require(j, "assumption").get<std::string>();
  if (tag == "D")
    m.assumption = AssumptionTag::D;
  else if (tag == "P")
    m.assumption = AssumptionTag::P;
  else
    throw DomainError("assumption must be 'D' or 'P'");
  m.validate();
  return m;
}

Json belief_to_json(const Belief& z) {
  Json j = Json::array();
  for (double v : z.probs()) j.push_back(round_sig12(v));
  return j;
}

Belief belief_from_json(const Json& j) {
  const Json& arr = j.is_array() ? j : require(j, "belief");
  std::vector<double> p;
  for (const auto& e : arr) p.push_back(e.get<double>());
  return Belief(std::move(p));
}

Json convergence_report_to_json(const ConvergenceReport& r) {
  Json j;
  j["mode"] = r.mode;
  j["consistent"] = r.consistent;
  j["disclaimer"] = r.disclaimer;
  Json checks = Json::array();
  for (const SetCheck& c : r.checks) {
    Json jc;
    jc["set"] = c.set_label;
    jc["limit_value"] = round_sig12(c.limit_value);
    jc["liminf_estimate"] = round_sig12(c.liminf_estimate);
    jc["limsup_estimate"] = round_sig12(c.limsup_estimate);
    jc["violated"] = c.violated;
    jc["witness"] = c.witness;
    checks.push_back(std::move(jc));
  }
  j["checks"] = std::move(checks);
  return j;
}

Json equicontinuity_report_to_json(const EquicontinuityReport& r) {
  Json j;
  j["family"] = r.family_label;
  Json devs = Json::array();
  for (double d : r.sup_deviations) devs.push_back(round_sig12(d));
  j["sup_deviations"] = std::move(devs);
  j["worst_deviation"] = round_sig12(r.worst_deviation);
  j["worst_witness"] = r.worst_witness;
  j["equicontinuous"] = r.equicontinuous;
  return j;
}

Json kinf_report_to_json(const KinfCompactReport& r) {
  Json j;
  j["finite_spaces"] = r.finite_spaces;
  j["note"] = r.note;
  Json verdicts = Json::array();
  for (const LevelSetVerdict& v : r.verdicts) {
    Json jv;
    jv["lambda"] = round_sig12(v.lambda);
    jv["pass"] = v.pass;
    jv["witness"] = v.witness;
    verdicts.push_back(std::move(jv));
  }
  j["verdicts"] = std::move(verdicts);
  return j;
}

Json mdmii_filter_report_to_json(const MdmiiFilterReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["witness"] = r.witness;
  Json steps = Json::array();
  for (const MdmiiFilterStep& s : r.steps) {
    Json js;
    js["posterior"] = belief_to_json(s.posterior);
    Json hm = Json::array();
    for (double v : s.hidden_marginal) hm.push_back(round_sig12(v));
    js["hidden_marginal"] = std::move(hm);
    js["slice_ok"] = s.slice_ok;
    js["null_observation"] = s.null_observation;
    steps.push_back(std::move(js));
  }
  j["steps"] = std::move(steps);
  return j;
}

Json posterior_to_json(const Posterior& p) {
  Json j;
  j["belief"] = belief_to_json(p.belief);
  j["null_observation"] = p.null_observation;
  return j;
}

Json finite_horizon_to_json(const FiniteHorizonSolution& s, const PomdpModel& m) {
  Json j;
  Json values = Json::array();
  for (double v : s.values) values.push_back(json_number(v));
  j["values"] = std::move(values);
  Json policy = Json::array();
  for (const auto& [key, action] : s.policy) {
    Json jp;
    jp["epoch"] = key.first;
    Json belief = Json::array();
    for (std::int64_t q : key.second)
      belief.push_back(round_sig12(static_cast<double>(q) * 1e-12));
    jp["belief"] = std::move(belief);
    jp["action"] = m.actions[action];
    policy.push_back(std::move(jp));
  }
  j["policy"] = std::move(policy);
  return j;
}

Json discounted_to_json(const DiscountedSolution& s, const PomdpModel& m) {
  Json j;
  j["value"] = json_number(s.value);
  j["action"] = m.actions[s.action];
  j["error_bound"] = json_number(s.error_bound);
  j["lower_bound_only"] = s.lower_bound_only;
  j["horizon_used"] = s.horizon_used;
  return j;
}

}  // namespace bk
