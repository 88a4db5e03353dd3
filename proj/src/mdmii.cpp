#include "bk/mdmii.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bk {

void MdmiiModel::validate() const {
  if (observed_states.empty() || hidden_states.empty() || actions.empty())
    throw DomainError("model spaces must be nonempty");
  if (available.size() != ny()) throw DomainError("availability mask has wrong observed count");
  for (const auto& row : available) {
    if (row.size() != na()) throw DomainError("availability row has wrong length");
    if (std::none_of(row.begin(), row.end(), [](bool b) { return b; }))
      throw DomainError("every observed state needs an available action");
  }
  if (transition.size() != nx()) throw DomainError("transition kernel has wrong state count");
  for (const auto& per_action : transition) {
    if (per_action.size() != na()) throw DomainError("transition kernel has wrong action count");
    for (const auto& row : per_action) {
      if (row.size() != nx()) throw DomainError("transition row has wrong length");
      double sum = 0.0;
      for (double v : row) {
        if (v < 0.0) throw DomainError("transition kernel has a negative probability");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-9) throw DomainError("transition row does not sum to 1");
    }
  }
  if (cost.size() != nx()) throw DomainError("cost table has wrong state count");
  for (std::size_t x = 0; x < nx(); ++x) {
    if (cost[x].size() != na()) throw DomainError("cost row has wrong length");
    for (std::size_t a = 0; a < na(); ++a)
      if (available[y_of(x)][a] && !std::isfinite(cost[x][a]))
        throw DomainError("cost must be finite on available state-action pairs");
  }
}

PomdpModel to_pomdp(const MdmiiModel& m) {
  m.validate();
  PomdpModel p;
  p.states.reserve(m.nx());
  for (std::size_t y = 0; y < m.ny(); ++y)
    for (std::size_t w = 0; w < m.nw(); ++w)
      p.states.push_back(m.observed_states[y] + "|" + m.hidden_states[w]);
  p.observations = m.observed_states;
  p.actions = m.actions;
  p.transition = m.transition;
  // deterministic projection observation kernel, independent of the action
  std::vector<std::vector<double>> projection(m.nx(), std::vector<double>(m.ny(), 0.0));
  for (std::size_t x = 0; x < m.nx(); ++x) projection[x][m.y_of(x)] = 1.0;
  p.observation.assign(m.na(), projection);
  p.initial_observation = projection;
  p.cost.assign(m.nx(), std::vector<double>(m.na(), ext_inf()));
  for (std::size_t x = 0; x < m.nx(); ++x)
    for (std::size_t a = 0; a < m.na(); ++a)
      if (m.available[m.y_of(x)][a]) p.cost[x][a] = m.cost[x][a];
  p.alpha = m.alpha;
  p.assumption = m.assumption;
  p.validate();
  return p;
}

MdmiiFilterReport mdmii_filter_invariant_check(const MdmiiModel& m, const Belief& z0,
                                               const MdmiiTrace& trace, double tol) {
  PomdpModel p = to_pomdp(m);
  if (z0.size() != m.nx()) throw DomainError("belief dimension mismatch");
  if (trace.y0 >= m.ny()) throw DomainError("observed state index out of range");

  MdmiiFilterReport rep;
  auto record = [&](const Belief& z, std::size_t y, bool null_obs, std::size_t step_no) {
    MdmiiFilterStep step{z, std::vector<double>(m.nw(), 0.0), true, null_obs};
    for (std::size_t x = 0; x < m.nx(); ++x) {
      step.hidden_marginal[m.w_of(x)] += z[x];
      if (m.y_of(x) != y && z[x] > tol) {
        step.slice_ok = false;
        if (rep.pass) {
          std::ostringstream os;
          os.precision(12);
          os << "step " << step_no << ": posterior puts mass " << z[x] << " on state "
             << p.states[x] << " outside the slice of " << m.observed_states[y];
          rep.witness = os.str();
          rep.pass = false;
        }
      }
    }
    rep.steps.push_back(std::move(step));
  };

  Posterior cur = initial_belief(p, z0, trace.y0);
  record(cur.belief, trace.y0, cur.null_observation, 0);
  std::size_t y_cur = trace.y0;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    auto [a, y_next] = trace.steps[i];
    if (a >= m.na() || y_next >= m.ny()) throw DomainError("trace index out of range");
    if (!m.available[y_cur][a]) {
      std::ostringstream os;
      os << "action " << m.actions[a] << " is not available in observed state "
         << m.observed_states[y_cur];
      throw DomainError(os.str());
    }
    cur = bayes_posterior(p, cur.belief, a, y_next);
    record(cur.belief, y_next, cur.null_observation, i + 1);
    y_cur = y_next;
  }
  return rep;
}

EquicontinuityReport pstar_equicontinuity_diagnostic(const MdmiiModel& m,
                                                     const std::vector<BorelSetExpr>& base_on_w,
                                                     const StateActionPath& path,
                                                     std::size_t arity, double tol,
                                                     std::size_t set_cap) {
  m.validate();
  if (base_on_w.empty()) throw DomainError("base on W is empty");
  bool has_whole = false;
  for (const BorelSetExpr& O : base_on_w) {
    bool all = true;
    for (std::size_t w = 0; w < m.nw(); ++w)
      all &= O.contains(Point::finite(static_cast<int>(w)));
    has_whole |= all;
  }
  if (!has_whole) throw DomainError("base on W must contain W itself");

  std::vector<BorelSetExpr> inters;
  auto recurse = [&](auto&& self, std::size_t start, const BorelSetExpr& acc,
                     std::size_t depth) -> void {
    if (inters.size() >= set_cap) throw DomainError("intersection count exceeds cap");
    inters.push_back(acc);
    if (depth == arity) return;
    for (std::size_t i = start; i < base_on_w.size(); ++i)
      self(self, i + 1, acc.set_intersection(base_on_w[i]), depth + 1);
  };
  for (std::size_t i = 0; i < base_on_w.size(); ++i) recurse(recurse, i + 1, base_on_w[i], 1);

  auto row = [&](std::size_t x, std::size_t a) -> const std::vector<double>& {
    if (x >= m.nx() || a >= m.na()) throw DomainError("path index out of range");
    return m.transition[x][a];
  };
  const std::vector<double>& limit_row = row(path.limit_state, path.limit_action);

  EquicontinuityReport rep;
  rep.family_label = "P*_O over finite intersections O of the W base";
  for (std::size_t step = 0; step < path.sequence.size(); ++step) {
    const auto& [x, a] = path.sequence[step];
    const std::vector<double>& r = row(x, a);
    double step_worst = 0.0;
    std::string step_witness;
    for (const BorelSetExpr& O : inters) {
      // signed measure on Y: C -> P(C x O|x_n,a_n) - P(C x O|x,a)
      std::vector<double> d(m.ny(), 0.0);
      for (std::size_t xp = 0; xp < m.nx(); ++xp) {
        if (!O.contains(Point::finite(static_cast<int>(m.w_of(xp))))) continue;
        d[m.y_of(xp)] += r[xp] - limit_row[xp];
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
