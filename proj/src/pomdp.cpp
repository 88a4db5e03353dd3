#include "bk/pomdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bk {

namespace {

constexpr double kArgminTieTol = 1e-9;

void check_distribution_rows(const std::vector<std::vector<double>>& rows, const char* what) {
  for (const auto& row : rows) {
    double sum = 0.0;
    for (double v : row) {
      if (v < 0.0) throw DomainError(std::string(what) + " has a negative probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw DomainError(std::string(what) + " row does not sum to 1");
  }
}

}  // namespace

void PomdpModel::validate() const {
  if (states.empty() || observations.empty() || actions.empty())
    throw DomainError("model spaces must be nonempty");
  if (transition.size() != nx()) throw DomainError("transition kernel has wrong state count");
  for (const auto& per_action : transition) {
    if (per_action.size() != na()) throw DomainError("transition kernel has wrong action count");
    for (const auto& row : per_action)
      if (row.size() != nx()) throw DomainError("transition row has wrong length");
    check_distribution_rows(per_action, "transition kernel");
  }
  if (observation.size() != na()) throw DomainError("observation kernel has wrong action count");
  for (const auto& per_state : observation) {
    if (per_state.size() != nx()) throw DomainError("observation kernel has wrong state count");
    for (const auto& row : per_state)
      if (row.size() != ny()) throw DomainError("observation row has wrong length");
    check_distribution_rows(per_state, "observation kernel");
  }
  if (initial_observation.size() != nx())
    throw DomainError("initial observation kernel has wrong state count");
  for (const auto& row : initial_observation)
    if (row.size() != ny()) throw DomainError("initial observation row has wrong length");
  check_distribution_rows(initial_observation, "initial observation kernel");
  if (cost.size() != nx()) throw DomainError("cost table has wrong state count");
  for (const auto& row : cost) {
    if (row.size() != na()) throw DomainError("cost row has wrong length");
    for (double c : row)
      if (std::isnan(c)) throw DomainError("cost entries must not be NaN");
  }
  for (std::size_t x = 0; x < nx(); ++x) {
    bool any_finite = false;
    for (std::size_t a = 0; a < na(); ++a) any_finite |= std::isfinite(cost[x][a]);
    if (!any_finite) throw DomainError("every state needs a finite-cost action");
  }
  if (assumption == AssumptionTag::D) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw DomainError("assumption D requires alpha in (0,1)");
    for (const auto& row : cost)
      for (double c : row)
        if (c == -ext_inf()) throw DomainError("assumption D requires costs bounded below");
  } else {
    if (alpha != 1.0) throw DomainError("assumption P requires alpha = 1");
    for (const auto& row : cost)
      for (double c : row)
        if (c < 0.0) throw DomainError("assumption P requires nonnegative costs");
  }
}

Belief::Belief(std::vector<double> probs) : p_(std::move(probs)) {
  if (p_.empty()) throw DomainError("belief must be nonempty");
  double sum = 0.0;
  for (double v : p_) {
    if (v < -1e-12) throw DomainError("belief entries must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("belief must sum to 1");
  for (double& v : p_) v = std::max(0.0, v / sum);
}

Belief::Key Belief::key() const {
  Key k;
  k.reserve(p_.size());
  for (double v : p_) k.push_back(std::llround(v * 1e12));
  return k;
}

Belief Belief::dirac(std::size_t n, std::size_t at) {
  std::vector<double> p(n, 0.0);
  p[at] = 1.0;
  return Belief(std::move(p));
}

Belief Belief::uniform(std::size_t n) {
  return Belief(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double expected_cost(const PomdpModel& m, const Belief& z, std::size_t a) {
  if (z.size() != m.nx()) throw DomainError("belief dimension mismatch");
  double s = 0.0;
  for (std::size_t x = 0; x < m.nx(); ++x) {
    if (z[x] == 0.0) continue;
    if (!std::isfinite(m.cost[x][a])) return ext_inf();
    s += z[x] * m.cost[x][a];
  }
  return s;
}

std::vector<std::vector<double>> joint_next(const PomdpModel& m, const Belief& z, std::size_t a) {
  if (z.size() != m.nx()) throw DomainError("belief dimension mismatch");
  std::vector<double> predicted(m.nx(), 0.0);
  for (std::size_t x = 0; x < m.nx(); ++x)
    if (z[x] > 0.0)
      for (std::size_t xp = 0; xp < m.nx(); ++xp)
        predicted[xp] += z[x] * m.transition[x][a][xp];
  std::vector<std::vector<double>> r(m.nx(), std::vector<double>(m.ny(), 0.0));
  for (std::size_t xp = 0; xp < m.nx(); ++xp)
    for (std::size_t y = 0; y < m.ny(); ++y)
      r[xp][y] = predicted[xp] * m.observation[a][xp][y];
  return r;
}

std::vector<double> obs_marginal(const PomdpModel& m, const Belief& z, std::size_t a) {
  auto r = joint_next(m, z, a);
  std::vector<double> out(m.ny(), 0.0);
  for (std::size_t xp = 0; xp < m.nx(); ++xp)
    for (std::size_t y = 0; y < m.ny(); ++y) out[y] += r[xp][y];
  return out;
}

Posterior bayes_posterior(const PomdpModel& m, const Belief& z, std::size_t a, std::size_t y) {
  auto r = joint_next(m, z, a);
  double denom = 0.0;
  for (std::size_t xp = 0; xp < m.nx(); ++xp) denom += r[xp][y];
  if (denom > 0.0) {
    std::vector<double> post(m.nx(), 0.0);
    for (std::size_t xp = 0; xp < m.nx(); ++xp) post[xp] = r[xp][y] / denom;
    return Posterior{Belief(std::move(post)), false};
  }
  // null observation: fall back to the predicted state law
  std::vector<double> predicted(m.nx(), 0.0);
  for (std::size_t x = 0; x < m.nx(); ++x)
    if (z[x] > 0.0)
      for (std::size_t xp = 0; xp < m.nx(); ++xp)
        predicted[xp] += z[x] * m.transition[x][a][xp];
  return Posterior{Belief(std::move(predicted)), true};
}

Posterior initial_belief(const PomdpModel& m, const Belief& prior, std::size_t y0) {
  if (prior.size() != m.nx()) throw DomainError("prior dimension mismatch");
  std::vector<double> post(m.nx(), 0.0);
  double denom = 0.0;
  for (std::size_t x = 0; x < m.nx(); ++x) {
    post[x] = prior[x] * m.initial_observation[x][y0];
    denom += post[x];
  }
  if (denom > 0.0) {
    for (double& v : post) v /= denom;
    return Posterior{Belief(std::move(post)), false};
  }
  return Posterior{prior, true};
}

std::vector<BeliefBranch> belief_kernel(const PomdpModel& m, const Belief& z, std::size_t a) {
  std::vector<double> rp = obs_marginal(m, z, a);
  std::map<Belief::Key, std::size_t> by_key;
  std::vector<BeliefBranch> branches;
  for (std::size_t y = 0; y < m.ny(); ++y) {
    if (rp[y] <= 0.0) continue;
    Posterior post = bayes_posterior(m, z, a, y);
    Belief::Key k = post.belief.key();
    auto it = by_key.find(k);
    if (it == by_key.end()) {
      by_key.emplace(std::move(k), branches.size());
      branches.push_back(BeliefBranch{{y}, rp[y], post.belief});
    } else {
      branches[it->second].observations.push_back(y);
      branches[it->second].probability += rp[y];
    }
  }
  return branches;
}

BellmanResult value_iterate(const PomdpModel& m,
                            const std::function<double(const Belief&)>& v_prev, const Belief& z) {
  BellmanResult best;
  std::vector<double> action_values(m.na(), ext_inf());
  for (std::size_t a = 0; a < m.na(); ++a) {
    double c = expected_cost(m, z, a);
    if (!std::isfinite(c)) continue;
    double future = 0.0;
    for (const BeliefBranch& br : belief_kernel(m, z, a)) {
      double v = v_prev(br.next);
      if (!std::isfinite(v)) {
        future = ext_inf();
        break;
      }
      future += br.probability * v;
    }
    action_values[a] = std::isfinite(future) ? c + m.alpha * future : ext_inf();
  }
  double min_v = *std::min_element(action_values.begin(), action_values.end());
  best.value = min_v;
  if (!std::isfinite(min_v)) {
    // all actions infinite: the argmin set is the whole action space
    for (std::size_t a = 0; a < m.na(); ++a) best.argmin_actions.push_back(a);
  } else {
    for (std::size_t a = 0; a < m.na(); ++a)
      if (action_values[a] <= min_v + kArgminTieTol) best.argmin_actions.push_back(a);
  }
  return best;
}

FiniteHorizonSolver::FiniteHorizonSolver(const PomdpModel& m, SolveCaps caps)
    : m_(m), caps_(caps) {
  m.validate();
}

BellmanResult FiniteHorizonSolver::value(const Belief& z, int t) {
  if (t <= 0) return BellmanResult{0.0, {}};
  auto key = std::make_pair(t, z.key());
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  if (memo_.size() >= caps_.belief_tree_nodes) {
    std::ostringstream os;
    os << "belief tree exceeds cap of " << caps_.belief_tree_nodes << " nodes";
    throw DomainError(os.str());
  }
  BellmanResult r = value_iterate(
      m_, [&](const Belief& znext) { return value(znext, t - 1).value; }, z);
  memo_.emplace(std::move(key), r);
  return r;
}

FiniteHorizonSolution FiniteHorizonSolver::solve(const Belief& z0, int horizon) {
  if (horizon < 0) throw DomainError("horizon must be nonnegative");
  FiniteHorizonSolution sol;
  for (int t = 0; t <= horizon; ++t) sol.values.push_back(value(z0, t).value);
  // Markov policy on the reachable tree: at epoch t choose from A_{T-1-t}(z)
  std::vector<std::pair<Belief, int>> frontier{{z0, 0}};
  std::map<std::pair<int, Belief::Key>, bool> seen;
  while (!frontier.empty()) {
    auto [z, t] = frontier.back();
    frontier.pop_back();
    if (t >= horizon) continue;
    auto key = std::make_pair(t, z.key());
    if (seen.count(key)) continue;
    seen[key] = true;
    BellmanResult r = value(z, horizon - t);
    std::size_t chosen = r.argmin_actions.empty() ? 0 : r.argmin_actions.front();
    sol.policy[key] = chosen;
    if (std::isfinite(r.value))
      for (const BeliefBranch& br : belief_kernel(m_, z, chosen))
        frontier.push_back({br.next, t + 1});
  }
  return sol;
}

FiniteHorizonSolution solve_finite_horizon(const PomdpModel& m, const Belief& z0, int horizon,
                                           SolveCaps caps) {
  FiniteHorizonSolver solver(m, caps);
  return solver.solve(z0, horizon);
}

DiscountedSolution solve_discounted(const PomdpModel& m, const Belief& z0, double epsilon,
                                    SolveCaps caps) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  m.validate();
  DiscountedSolution out;
  if (m.assumption == AssumptionTag::P) {
    // monotone lower approximations only; no two-sided bound is claimed
    out.lower_bound_only = true;
    FiniteHorizonSolver solver(m, caps);
    int t = 1;
    double prev = 0.0;
    for (; t <= 1000; ++t) {
      double v = solver.value(z0, t).value;
      if (!std::isfinite(v)) break;
      if (t > 1 && v - prev <= epsilon) {
        prev = v;
        break;
      }
      prev = v;
    }
    BellmanResult r = solver.value(z0, t > 1000 ? 1000 : t);
    out.value = r.value;
    out.error_bound = ext_inf();
    out.horizon_used = t > 1000 ? 1000 : t;
    out.action = r.argmin_actions.empty() ? 0 : r.argmin_actions.front();
    return out;
  }
  double cmin = ext_inf(), cmax = -ext_inf();
  for (const auto& row : m.cost)
    for (double c : row)
      if (std::isfinite(c)) {
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
      }
  double cabs = std::max(std::abs(cmin), std::abs(cmax));
  int horizon = 0;
  double bound = cabs / (1.0 - m.alpha);
  while (bound > epsilon && horizon < 100000) {
    bound *= m.alpha;
    ++horizon;
  }
  horizon = std::max(horizon, 1);
  FiniteHorizonSolver solver(m, caps);
  BellmanResult r = solver.value(z0, horizon);
  out.value = r.value;
  out.error_bound = bound;
  out.horizon_used = horizon;
  out.action = r.argmin_actions.empty() ? 0 : r.argmin_actions.front();
  return out;
}

KinfCompactReport kinf_compact_diagnostic(const PomdpModel& m,
                                          const std::vector<double>& lambdas) {
  m.validate();
  KinfCompactReport rep;
  rep.finite_spaces = true;
  rep.note = "finite state and action spaces: every level set is compact";
  for (double l : lambdas) rep.verdicts.push_back(LevelSetVerdict{l, true, ""});
  return rep;
}

KinfCompactReport kinf_compact_diagnostic(const std::vector<CostGridNode>& grid,
                                          const std::vector<double>& lambdas) {
  KinfCompactReport rep;
  rep.finite_spaces = false;
  rep.note =
      "grid-level diagnostic: boundedness checked by boundary membership; "
      "non-conclusive for continuum claims";
  for (const CostGridNode& n : grid)
    for (std::size_t j : n.neighbors)
      if (j >= grid.size()) throw DomainError("grid neighbor index out of range");
  bool any_neighbors = false;
  for (const CostGridNode& n : grid) any_neighbors |= !n.neighbors.empty();
  if (!grid.empty() && !any_neighbors)
    throw DomainError("grid diagnostic requires a neighbor structure");
  for (double l : lambdas) {
    LevelSetVerdict v{l, true, ""};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i].cost <= l && grid[i].boundary) {
        v.pass = false;
        std::ostringstream os;
        os.precision(12);
        os << "level set {c <= " << l << "} reaches the grid boundary at node " << i
           << " (cost " << grid[i].cost << ")";
        v.witness = os.str();
        break;
      }
    }
    rep.verdicts.push_back(std::move(v));
  }
  return rep;
}

EquicontinuityReport r_family_equicontinuity_diagnostic(const PomdpModel& m,
                                                        const std::vector<BorelSetExpr>& base_on_x,
                                                        const BeliefActionPath& path,
                                                        std::size_t arity, double tol,
                                                        std::size_t set_cap) {
  m.validate();
  if (base_on_x.empty()) throw DomainError("base on X is empty");
  // finite intersections of base members up to the arity cap
  std::vector<BorelSetExpr> inters;
  auto recurse = [&](auto&& self, std::size_t start, const BorelSetExpr& acc,
                     std::size_t depth) -> void {
    if (inters.size() >= set_cap) throw DomainError("intersection count exceeds cap");
    inters.push_back(acc);
    if (depth == arity) return;
    for (std::size_t i = start; i < base_on_x.size(); ++i)
      self(self, i + 1, acc.set_intersection(base_on_x[i]), depth + 1);
  };
  for (std::size_t i = 0; i < base_on_x.size(); ++i) recurse(recurse, i + 1, base_on_x[i], 1);

  auto joint = [&](const Belief& z, std::size_t a) { return joint_next(m, z, a); };
  auto limit_joint = joint(path.limit, path.limit_action);

  EquicontinuityReport rep;
  rep.family_label = "R_O over finite intersections O of the X base";
  for (std::size_t step = 0; step < path.sequence.size(); ++step) {
    const auto& [z, a] = path.sequence[step];
    auto jn = joint(z, a);
    double step_worst = 0.0;
    std::string step_witness;
    for (const BorelSetExpr& O : inters) {
      // signed measure on Y: C -> R(O x C|z_n,a_n) - R(O x C|z,a)
      std::vector<double> d(m.ny(), 0.0);
      for (std::size_t xp = 0; xp < m.nx(); ++xp) {
        if (!O.contains(Point::finite(static_cast<int>(xp)))) continue;
        for (std::size_t y = 0; y < m.ny(); ++y) d[y] += jn[xp][y] - limit_joint[xp][y];
      }
      double pos = 0.0, neg = 0.0;
      for (double v : d) (v > 0.0 ? pos : neg) += std::abs(v);
      double sup = std::max(pos, neg);
      if (sup > step_worst) {
        step_worst = sup;
        std::ostringstream os;
        os.precision(12);
        os << "O = " << O.describe() << ", sup over C = " << sup << " at path step "
           << (step + 1);
        step_witness = os.str();
      }
    }
    rep.sup_deviations.push_back(step_worst);
    if (step_worst > rep.worst_deviation) {
      rep.worst_deviation = step_worst;
      rep.worst_witness = step_witness;
    }
  }
  // decay along the path, tail window vs head window
  std::size_t nsteps = rep.sup_deviations.size();
  if (nsteps > 0) {
    std::size_t tail = std::max<std::size_t>(1, (nsteps + 3) / 4);
    double head_max = 0.0, tail_max = 0.0;
    for (std::size_t i = 0; i < tail; ++i) head_max = std::max(head_max, rep.sup_deviations[i]);
    for (std::size_t i = nsteps - tail; i < nsteps; ++i)
      tail_max = std::max(tail_max, rep.sup_deviations[i]);
    rep.equicontinuous = tail_max <= std::max(tol, 0.5 * head_max);
  }
  return rep;
}

}  // namespace bk
