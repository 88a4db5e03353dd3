#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bk/json_io.hpp"

namespace {

using bk::Json;

struct Caps {
  std::size_t composite_sets = 4096;
  std::size_t belief_tree_nodes = 200000;
};

Caps caps_from_env() {
  Caps caps;
  const char* raw = std::getenv("BELIEFKERNEL_CAPS");
  if (!raw) return caps;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw bk::DomainError("BELIEFKERNEL_CAPS entries must look like name=value");
    const std::string key = item.substr(0, eq);
    const unsigned long long value = std::stoull(item.substr(eq + 1));
    if (key == "composite_sets")
      caps.composite_sets = value;
    else if (key == "belief_tree_nodes")
      caps.belief_tree_nodes = value;
    else
      throw bk::DomainError("unknown cap '" + key + "' in BELIEFKERNEL_CAPS");
  }
  return caps;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bk::DomainError("cannot open file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw bk::DomainError("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

void print_human(const Json& j, const std::string& prefix) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      print_human(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const auto& e : j) print_human(e, prefix + "[" + std::to_string(i++) + "]");
  } else {
    std::cout << prefix << ": " << j.dump() << "\n";
  }
}

void emit(const Json& j, bool human) {
  if (human)
    print_human(j, "");
  else
    std::cout << bk::dump_json(j);
}

bk::MeasureSequence sequence_from_spec(const Json& spec) {
  const Json& seq = spec.at("sequence");
  int n_max = spec.value("N_max", 100);
  if (seq.is_string()) {
    const std::string name = seq.get<std::string>();
    if (name == "point-mass") return bk::point_mass_measure_sequence(n_max);
    if (name == "cantor") return bk::cantor_measure_sequence(std::min(n_max, 10));
    throw bk::DomainError("unknown builtin sequence '" + name + "'");
  }
  // file form: {"terms": [measure...], "limit": measure}
  Json file = load_json(seq.at("file").get<std::string>());
  auto terms = std::make_shared<std::vector<bk::ProbMeasure>>();
  for (const auto& e : file.at("terms")) terms->push_back(bk::measure_from_json(e));
  if (terms->empty()) throw bk::DomainError("sequence file has no terms");
  bk::ProbMeasure limit = bk::measure_from_json(file.at("limit"));
  int n = static_cast<int>(terms->size());
  return bk::MeasureSequence{
      [terms](int i) {
        return bk::MeasureLike((*terms)[static_cast<std::size_t>(i - 1)]);
      },
      bk::MeasureLike(std::move(limit)), n};
}

std::vector<bk::BorelSetExpr> sets_from_spec(const Json& spec, const bk::SpaceRef& space) {
  std::vector<bk::BorelSetExpr> out;
  if (spec.contains("sets"))
    for (const auto& e : spec.at("sets")) out.push_back(bk::set_from_json(e, space));
  return out;
}

int run_converge_diagnose(const std::string& spec_path, bool human, const Caps& caps) {
  Json spec = load_json(spec_path);
  bk::MeasureSequence seq = sequence_from_spec(spec);
  bk::ConvergenceOptions opt;
  opt.composite_set_cap = caps.composite_sets;
  if (spec.contains("tolerance")) opt.tol = spec.at("tolerance").get<double>();
  const std::string mode = spec.value("mode", "weak");
  bk::SpaceRef space = bk::space_of(seq.limit);
  std::vector<bk::BorelSetExpr> sets = sets_from_spec(spec, space);
  bk::ConvergenceReport rep;
  if (mode == "weak") {
    std::vector<bk::BorelSetExpr> opens, closeds;
    for (const auto& b : sets) (b.is_open() ? opens : closeds).push_back(b);
    rep = bk::portmanteau_weak_check(seq, opens, closeds, opt);
  } else if (mode == "setwise") {
    rep = bk::setwise_check(seq, sets, opt);
  } else if (mode == "cdf") {
    std::vector<double> probes;
    if (spec.contains("probes"))
      for (const auto& e : spec.at("probes")) probes.push_back(e.get<double>());
    rep = bk::cdf_weak_check(seq, probes, opt);
  } else if (mode == "weak-base") {
    bk::BaseFamily base{sets, false};
    rep = bk::base_criterion_weak(seq, base, spec.value("union_arity", std::size_t{3}), opt);
  } else {
    throw bk::DomainError("unknown mode '" + mode + "'");
  }
  emit(bk::convergence_report_to_json(rep), human);
  return 0;
}

int run_demo_cantor(int n, bool human) {
  if (n < 1 || n > 10) throw bk::DomainError("demo cantor expects --n in 1..10");
  bk::DistributionFunction fn = bk::cantor_sequence(n);
  double sup_gap = 0.0;
  const int grid = 59049;  // 3^10 sample points on [0,1]
  for (int i = 0; i <= grid; ++i) {
    double x = static_cast<double>(i) / grid;
    sup_gap = std::max(sup_gap, std::abs(bk::cantor_function(x) - fn.value(x)));
  }
  double bound = std::ldexp(1.0, 1 - n) / 6.0;
  bk::MeasureSequence seq = bk::cantor_measure_sequence(std::max(n, 2));
  bk::ConvergenceReport setwise = bk::setwise_check(seq, {bk::cantor_cover(12)});
  Json j;
  j["iterate"] = n;
  j["sup_gap"] = bk::json_number(sup_gap);
  j["sup_gap_bound"] = bk::json_number(bound);
  j["sup_gap_within_bound"] = sup_gap <= bound + 1e-12;
  j["setwise_check_on_cover_12"] = bk::convergence_report_to_json(setwise);
  emit(j, human);
  return 0;
}

int run_demo_point_mass(bool human) {
  bk::MeasureSequence seq = bk::point_mass_measure_sequence();
  // rational-endpoint intervals around sqrt(2); a finite slice of the
  // countable base of open intervals with rational endpoints
  std::vector<bk::BorelSetExpr> base_members;
  const double rats[] = {1.0, 1.2, 1.4, 1.41, 1.43, 1.5, 2.0};
  for (double lo : rats)
    for (double hi : rats)
      if (lo < hi) base_members.push_back(bk::BorelSetExpr::interval(lo, hi, false, false));
  bk::BaseFamily base{base_members, false};
  bk::ConvergenceReport weak = bk::base_criterion_weak(seq, base, 3);
  bk::ConvergenceReport setwise =
      bk::setwise_check(seq, {bk::BorelSetExpr::singleton_real(std::sqrt(2.0))});
  Json j;
  j["weak_base_criterion"] = bk::convergence_report_to_json(weak);
  j["setwise_check_on_singleton"] = bk::convergence_report_to_json(setwise);
  emit(j, human);
  return 0;
}

int run_demo_nonsetwise_kernel(bool human) {
  bk::JointKernel joint = bk::shifted_point_joint_kernel(20);
  bk::ParamPath path;
  for (int n = 1; n <= 20; ++n) path.sequence.push_back(bk::Point::real(1.0 / n));
  path.limit = bk::Point::real(0.0);
  bk::BorelSetExpr open_set = bk::BorelSetExpr::interval(1.0, 3.0, false, false);
  bk::BorelSetExpr punctured =
      bk::BorelSetExpr::singleton_real(std::sqrt(2.0)).complement();
  bk::EquicontinuityReport on_open = bk::equicontinuity_diagnostic(joint, open_set, path);
  bk::EquicontinuityReport on_punctured = bk::equicontinuity_diagnostic(joint, punctured, path);
  Json j;
  j["open_interval_(1,3)"] = bk::equicontinuity_report_to_json(on_open);
  j["complement_of_singleton_sqrt2"] = bk::equicontinuity_report_to_json(on_punctured);
  emit(j, human);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beliefkernel: measures, convergence diagnostics, kernels, and belief-space planning"};
  app.require_subcommand(1);
  bool human = false;
  app.add_flag("--human", human, "human-readable output (JSON is the contract)");

  std::string p_path, q_path, model_path, belief_path, spec_path, kernel_path, trace_path;
  std::string mode = "tv", check = "kinf", demo_name;
  int action = -1, obs = -1, horizon = -1, demo_n = 8;
  double epsilon = -1.0;
  std::vector<double> lambdas;

  auto* distance = app.add_subcommand("distance", "total variation distance of two measures");
  distance->add_option("--p", p_path)->required();
  distance->add_option("--q", q_path)->required();

  auto* converge = app.add_subcommand("converge-diagnose", "convergence-mode diagnostic");
  converge->add_option("--spec", spec_path)->required();

  auto* kdiag = app.add_subcommand("kernel-diagnose", "kernel continuity diagnostic");
  kdiag->add_option("--kernel", kernel_path)->required();
  kdiag->add_option("--mode", mode)->check(CLI::IsMember({"weak", "setwise", "tv"}));

  auto* filter = app.add_subcommand("filter", "one Bayes filtering step");
  filter->add_option("--model", model_path)->required();
  filter->add_option("--belief", belief_path)->required();
  filter->add_option("--action", action)->required();
  filter->add_option("--obs", obs)->required();

  auto* solve = app.add_subcommand("solve", "belief-space dynamic programming");
  solve->add_option("--model", model_path)->required();
  solve->add_option("--belief", belief_path)->required();
  solve->add_option("--horizon", horizon);
  solve->add_option("--epsilon", epsilon);

  auto* diagnose = app.add_subcommand("diagnose", "model-level diagnostics");
  diagnose->add_option("--model", model_path)->required();
  diagnose->add_option("--check", check)->check(CLI::IsMember({"kinf", "requi"}));
  diagnose->add_option("--lambda", lambdas);

  auto* mconvert = app.add_subcommand("mdmii-convert", "reduce an incomplete-information model");
  mconvert->add_option("--model", model_path)->required();

  auto* mcheck = app.add_subcommand("mdmii-check", "filter invariant check along a trace");
  mcheck->add_option("--model", model_path)->required();
  mcheck->add_option("--belief", belief_path)->required();
  mcheck->add_option("--trace", trace_path)->required();

  auto* demo = app.add_subcommand("demo", "built-in examples");
  demo->add_option("name", demo_name)
      ->required()
      ->check(CLI::IsMember({"cantor", "point-mass", "nonsetwise-kernel"}));
  demo->add_option("--n", demo_n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const Caps caps = caps_from_env();
    if (*distance) {
      bk::ProbMeasure p = bk::measure_from_json(load_json(p_path));
      bk::ProbMeasure q = bk::measure_from_json(load_json(q_path));
      Json j;
      j["tv_distance"] = bk::json_number(bk::tv_distance(p, q));
      emit(j, human);
    } else if (*converge) {
      return run_converge_diagnose(spec_path, human, caps);
    } else if (*kdiag) {
      bk::StochasticKernel k = bk::kernel_from_json(load_json(kernel_path));
      if (k.params().size() < 2)
        throw bk::DomainError("kernel diagnostic needs at least two parameters");
      bk::ParamPath path;
      path.sequence.assign(k.params().begin(), k.params().end() - 1);
      path.limit = k.params().back();
      bk::ConvergenceOptions opt;
      opt.composite_set_cap = caps.composite_sets;
      emit(bk::convergence_report_to_json(bk::kernel_continuity_diagnostic(k, mode, path, {}, opt)),
           human);
    } else if (*filter) {
      bk::PomdpModel m = bk::pomdp_from_json(load_json(model_path));
      bk::Belief z = bk::belief_from_json(load_json(belief_path));
      if (action < 0 || static_cast<std::size_t>(action) >= m.na())
        throw bk::DomainError("action index out of range");
      if (obs < 0 || static_cast<std::size_t>(obs) >= m.ny())
        throw bk::DomainError("observation index out of range");
      emit(bk::posterior_to_json(bk::bayes_posterior(m, z, static_cast<std::size_t>(action),
                                                     static_cast<std::size_t>(obs))),
           human);
    } else if (*solve) {
      bk::PomdpModel m = bk::pomdp_from_json(load_json(model_path));
      bk::Belief z = bk::belief_from_json(load_json(belief_path));
      bk::SolveCaps scaps{caps.belief_tree_nodes};
      if ((horizon >= 0) == (epsilon > 0.0))
        throw bk::DomainError("pass exactly one of --horizon or --epsilon");
      if (horizon >= 0)
        emit(bk::finite_horizon_to_json(bk::solve_finite_horizon(m, z, horizon, scaps), m), human);
      else
        emit(bk::discounted_to_json(bk::solve_discounted(m, z, epsilon, scaps), m), human);
    } else if (*diagnose) {
      bk::PomdpModel m = bk::pomdp_from_json(load_json(model_path));
      if (check == "kinf") {
        if (lambdas.empty()) lambdas = {0.0, 1.0, 10.0};
        emit(bk::kinf_report_to_json(bk::kinf_compact_diagnostic(m, lambdas)), human);
      } else {
        // base on X: singletons plus the whole space, belief path into uniform
        bk::SpaceRef xs = bk::MetricSpace::discrete(m.states);
        std::vector<bk::BorelSetExpr> base;
        for (std::size_t i = 0; i < m.nx(); ++i)
          base.push_back(bk::BorelSetExpr::points(xs, {static_cast<int>(i)}));
        base.push_back(bk::BorelSetExpr::whole(xs));
        bk::BeliefActionPath path{{}, bk::Belief::uniform(m.nx()), 0};
        for (int n = 1; n <= 20; ++n) {
          std::vector<double> p(m.nx(), 0.0);
          double t = 1.0 / n;
          for (std::size_t i = 0; i < m.nx(); ++i) p[i] = (1.0 - t) / m.nx();
          p[0] += t;
          path.sequence.push_back({bk::Belief(std::move(p)), 0});
        }
        emit(bk::equicontinuity_report_to_json(bk::r_family_equicontinuity_diagnostic(
                 m, base, path, 2, 1e-9, caps.composite_sets)),
             human);
      }
    } else if (*mconvert) {
      bk::MdmiiModel m = bk::mdmii_from_json(load_json(model_path));
      emit(bk::pomdp_to_json(bk::to_pomdp(m)), human);
    } else if (*mcheck) {
      bk::MdmiiModel m = bk::mdmii_from_json(load_json(model_path));
      bk::Belief z = bk::belief_from_json(load_json(belief_path));
      Json jt = load_json(trace_path);
      bk::MdmiiTrace trace;
      const std::string y0 = jt.at("y0").get<std::string>();
      auto yfind = [&](const std::string& label) {
        for (std::size_t y = 0; y < m.ny(); ++y)
          if (m.observed_states[y] == label) return y;
        throw bk::DomainError("unknown observed state '" + label + "'");
      };
      auto afind = [&](const std::string& label) {
        for (std::size_t a = 0; a < m.na(); ++a)
          if (m.actions[a] == label) return a;
        throw bk::DomainError("unknown action '" + label + "'");
      };
      trace.y0 = yfind(y0);
      for (const auto& e : jt.at("steps"))
        trace.steps.push_back({afind(e.at("action").get<std::string>()),
                               yfind(e.at("obs").get<std::string>())});
      emit(bk::mdmii_filter_report_to_json(bk::mdmii_filter_invariant_check(m, z, trace)), human);
    } else if (*demo) {
      if (demo_name == "cantor") return run_demo_cantor(demo_n, human);
      if (demo_name == "point-mass") return run_demo_point_mass(human);
      return run_demo_nonsetwise_kernel(human);
    }
  } catch (const bk::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
