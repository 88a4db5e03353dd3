#pragma once

// Independent reference implementations used to cross-check the library:
// written against the model tables directly, with no use of the Belief
// machinery, canonical keys, or memoization.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bk/mdmii.hpp"
#include "bk/pomdp.hpp"

namespace oracles {

inline bk::PomdpModel random_pomdp(std::mt19937_64& rng, std::size_t nx, std::size_t ny,
                                   std::size_t na, bk::AssumptionTag tag,
                                   double alpha = 1.0, double inf_prob = 0.0,
                                   bool perfect_obs = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto simplex = [&](std::size_t n) {
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& v : w) {
      v = u(rng) + 1e-3;
      sum += v;
    }
    for (double& v : w) v /= sum;
    return w;
  };
  bk::PomdpModel m;
  for (std::size_t i = 0; i < nx; ++i) m.states.push_back("x" + std::to_string(i));
  for (std::size_t i = 0; i < ny; ++i) m.observations.push_back("y" + std::to_string(i));
  for (std::size_t i = 0; i < na; ++i) m.actions.push_back("a" + std::to_string(i));
  m.transition.resize(nx);
  for (auto& per_a : m.transition) {
    per_a.resize(na);
    for (auto& row : per_a) row = simplex(nx);
  }
  m.observation.resize(na);
  for (auto& per_x : m.observation) {
    per_x.resize(nx);
    if (perfect_obs) {
      // deterministic observation: beliefs collapse to point masses, which
      // keeps deep-horizon trees small
      for (std::size_t x = 0; x < nx; ++x) {
        per_x[x].assign(ny, 0.0);
        per_x[x][x % ny] = 1.0;
      }
    } else {
      for (auto& row : per_x) row = simplex(ny);
    }
  }
  m.initial_observation.resize(nx);
  for (auto& row : m.initial_observation) row = simplex(ny);
  m.cost.assign(nx, std::vector<double>(na, 0.0));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t a = 0; a < na; ++a)
      m.cost[x][a] = (u(rng) < inf_prob) ? bk::ext_inf() : 10.0 * u(rng);
    bool any = false;
    for (std::size_t a = 0; a < na; ++a) any |= std::isfinite(m.cost[x][a]);
    if (!any) m.cost[x][0] = 10.0 * u(rng);
  }
  m.assumption = tag;
  m.alpha = tag == bk::AssumptionTag::D ? alpha : 1.0;
  return m;
}

inline std::vector<double> random_belief(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& v : w) {
    v = u(rng) + 1e-3;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

/// Direct Bayes update by explicit enumeration over (x, x') pairs.
/// Returns the posterior over x' given action a and observation y, or the
/// predicted law when the observation has probability zero.
inline std::vector<double> direct_bayes(const bk::PomdpModel& m, const std::vector<double>& z,
                                        std::size_t a, std::size_t y) {
  std::vector<double> numer(m.nx(), 0.0);
  double denom = 0.0;
  for (std::size_t x = 0; x < m.nx(); ++x)
    for (std::size_t xp = 0; xp < m.nx(); ++xp) {
      double w = z[x] * m.transition[x][a][xp] * m.observation[a][xp][y];
      numer[xp] += w;
      denom += w;
    }
  if (denom == 0.0) {
    std::vector<double> pred(m.nx(), 0.0);
    for (std::size_t x = 0; x < m.nx(); ++x)
      for (std::size_t xp = 0; xp < m.nx(); ++xp)
        pred[xp] += z[x] * m.transition[x][a][xp];
    return pred;
  }
  for (double& v : numer) v /= denom;
  return numer;
}

/// Optimal T-step expected cost by recursion on unnormalized state-weight
/// vectors indexed by observation histories. Minimizing per history is
/// optimal among all history-dependent policies, so this equals the optimal
/// value without constructing beliefs.
inline double history_dp_value(const bk::PomdpModel& m, const std::vector<double>& w, int t) {
  if (t <= 0) return 0.0;
  double total = 0.0;
  for (double v : w) total += v;
  if (total <= 0.0) return 0.0;
  double best = bk::ext_inf();
  for (std::size_t a = 0; a < m.na(); ++a) {
    double cost = 0.0;
    bool infinite = false;
    for (std::size_t x = 0; x < m.nx(); ++x) {
      if (w[x] == 0.0) continue;
      if (!std::isfinite(m.cost[x][a])) {
        infinite = true;
        break;
      }
      cost += w[x] * m.cost[x][a];
    }
    if (infinite) continue;
    double future = 0.0;
    for (std::size_t y = 0; y < m.ny(); ++y) {
      std::vector<double> wn(m.nx(), 0.0);
      for (std::size_t x = 0; x < m.nx(); ++x)
        if (w[x] > 0.0)
          for (std::size_t xp = 0; xp < m.nx(); ++xp)
            wn[xp] += w[x] * m.transition[x][a][xp] * m.observation[a][xp][y];
      double sub = history_dp_value(m, wn, t - 1);
      if (!std::isfinite(sub)) {
        future = bk::ext_inf();
        break;
      }
      future += sub;  // wn already carries the branch probability
    }
    if (!std::isfinite(future)) continue;
    best = std::min(best, cost + m.alpha * future);
  }
  return best;
}

/// Literal policy-tree enumeration: a depth-t tree assigns an action to every
/// observation history; the best tree value must match history_dp_value.
/// Exponential; only for very small models.
inline double policy_tree_value(const bk::PomdpModel& m, const std::vector<double>& w, int t,
                                bool* feasible = nullptr);

inline double fixed_root_tree_value(const bk::PomdpModel& m, const std::vector<double>& w,
                                    std::size_t a, int t, bool* feasible) {
  double cost = 0.0;
  for (std::size_t x = 0; x < m.nx(); ++x) {
    if (w[x] == 0.0) continue;
    if (!std::isfinite(m.cost[x][a])) {
      if (feasible) *feasible = false;
      return bk::ext_inf();
    }
    cost += w[x] * m.cost[x][a];
  }
  double future = 0.0;
  for (std::size_t y = 0; y < m.ny(); ++y) {
    std::vector<double> wn(m.nx(), 0.0);
    for (std::size_t x = 0; x < m.nx(); ++x)
      if (w[x] > 0.0)
        for (std::size_t xp = 0; xp < m.nx(); ++xp)
          wn[xp] += w[x] * m.transition[x][a][xp] * m.observation[a][xp][y];
    double sub = policy_tree_value(m, wn, t - 1, feasible);
    if (!std::isfinite(sub)) return bk::ext_inf();
    future += sub;
  }
  return cost + m.alpha * future;
}

inline double policy_tree_value(const bk::PomdpModel& m, const std::vector<double>& w, int t,
                                bool* feasible) {
  if (t <= 0) return 0.0;
  double total = 0.0;
  for (double v : w) total += v;
  if (total <= 0.0) return 0.0;
  double best = bk::ext_inf();
  for (std::size_t a = 0; a < m.na(); ++a) {
    bool ok = true;
    double v = fixed_root_tree_value(m, w, a, t, &ok);
    best = std::min(best, v);
  }
  return best;
}

inline bk::MdmiiModel random_mdmii(std::mt19937_64& rng, std::size_t ny, std::size_t nw,
                                   std::size_t na) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bk::MdmiiModel m;
  for (std::size_t i = 0; i < ny; ++i) m.observed_states.push_back("y" + std::to_string(i));
  for (std::size_t i = 0; i < nw; ++i) m.hidden_states.push_back("w" + std::to_string(i));
  for (std::size_t i = 0; i < na; ++i) m.actions.push_back("a" + std::to_string(i));
  m.available.assign(ny, std::vector<bool>(na, false));
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t a = 0; a < na; ++a) m.available[y][a] = u(rng) < 0.7;
    if (std::none_of(m.available[y].begin(), m.available[y].end(), [](bool b) { return b; }))
      m.available[y][rng() % na] = true;
  }
  std::size_t nx = ny * nw;
  m.transition.resize(nx);
  for (auto& per_a : m.transition) {
    per_a.resize(na);
    for (auto& row : per_a) {
      row.resize(nx);
      double sum = 0.0;
      for (double& v : row) {
        v = u(rng) + 1e-3;
        sum += v;
      }
      for (double& v : row) v /= sum;
    }
  }
  m.cost.assign(nx, std::vector<double>(na, 0.0));
  for (auto& row : m.cost)
    for (double& v : row) v = 5.0 * u(rng);
  m.alpha = 1.0;
  m.assumption = bk::AssumptionTag::P;
  return m;
}

/// Posterior over (y, w) pairs after a trace, by brute-force enumeration of
/// all hidden-state paths consistent with the observed trace.
inline std::vector<double> mdmii_path_posterior(const bk::MdmiiModel& m,
                                                const std::vector<double>& prior,
                                                const bk::MdmiiTrace& trace) {
  std::size_t nx = m.nx();
  // initial conditioning on y0: projection observation
  std::vector<double> w(nx, 0.0);
  double z0mass = 0.0;
  for (std::size_t x = 0; x < nx; ++x)
    if (m.y_of(x) == trace.y0) {
      w[x] = prior[x];
      z0mass += prior[x];
    }
  if (z0mass == 0.0) return w;
  for (const auto& [a, ynext] : trace.steps) {
    std::vector<double> wn(nx, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      if (w[x] > 0.0)
        for (std::size_t xp = 0; xp < nx; ++xp)
          if (m.y_of(xp) == ynext) wn[xp] += w[x] * m.transition[x][a][xp];
    w = std::move(wn);
  }
  double total = 0.0;
  for (double v : w) total += v;
  if (total > 0.0)
    for (double& v : w) v /= total;
  return w;
}

}  // namespace oracles
