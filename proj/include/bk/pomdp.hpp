#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bk/kernel.hpp"

namespace bk {

/// Extended-real one-step costs use +infinity for unavailable actions;
/// addition absorbs, minimization skips infinite entries unless all are.
inline double ext_inf() { return std::numeric_limits<double>::infinity(); }

enum class AssumptionTag { D, P };

/// POMDP (X, Y, A, P, Q, c) on finite spaces, with initial observation
/// kernel Q0 and discount alpha.
struct PomdpModel {
  std::vector<std::string> states;        // X
  std::vector<std::string> observations;  // Y
  std::vector<std::string> actions;       // A
  // transition[x][a][x'], observation[a][x'][y], initial_observation[x][y]
  std::vector<std::vector<std::vector<double>>> transition;
  std::vector<std::vector<std::vector<double>>> observation;
  std::vector<std::vector<double>> initial_observation;
  std::vector<std::vector<double>> cost;  // cost[x][a], +inf allowed
  double alpha = 1.0;
  AssumptionTag assumption = AssumptionTag::P;

  std::size_t nx() const { return states.size(); }
  std::size_t ny() const { return observations.size(); }
  std::size_t na() const { return actions.size(); }

  void validate() const;
};

/// Point of the belief simplex over X, with a canonical rounded key for
/// memoization (12 decimals).
class Belief {
 public:
  explicit Belief(std::vector<double> probs);

  const std::vector<double>& probs() const { return p_; }
  double operator[](std::size_t i) const { return p_[i]; }
  std::size_t size() const { return p_.size(); }

  using Key = std::vector<std::int64_t>;
  Key key() const;

  static Belief dirac(std::size_t n, std::size_t at);
  static Belief uniform(std::size_t n);

 private:
  std::vector<double> p_;
};

/// c_bar(z, a) = sum_x c(x,a) z(x); +inf as soon as z charges an infinite cell.
double expected_cost(const PomdpModel& m, const Belief& z, std::size_t a);

/// R({x'} x {y}|z,a) as a matrix indexed [x'][y].
std::vector<std::vector<double>> joint_next(const PomdpModel& m, const Belief& z, std::size_t a);

/// R'(.|z,a): marginal of joint_next over X.
std::vector<double> obs_marginal(const PomdpModel& m, const Belief& z, std::size_t a);

struct Posterior {
  Belief belief;
  bool null_observation = false;  // R'({y}|z,a) = 0, predicted law returned
};

/// Filtering update H(z, a, y); on null observations returns the predicted
/// state law with a flag.
Posterior bayes_posterior(const PomdpModel& m, const Belief& z, std::size_t a, std::size_t y);

/// Initial belief from a prior after the first observation, using the
/// initial observation kernel.
Posterior initial_belief(const PomdpModel& m, const Belief& prior, std::size_t y0);

struct BeliefBranch {
  std::vector<std::size_t> observations;  // merged observations with this posterior
  double probability = 0.0;
  Belief next;
};

/// The belief transition q(.|z,a): posteriors weighted by observation
/// probabilities, branches with equal canonical keys merged.
std::vector<BeliefBranch> belief_kernel(const PomdpModel& m, const Belief& z, std::size_t a);

struct BellmanResult {
  double value = 0.0;
  std::vector<std::size_t> argmin_actions;  // input order, tie tolerance 1e-9
};

/// One Bellman step: min over actions of c_bar + alpha * E[v_prev(z')].
BellmanResult value_iterate(const PomdpModel& m,
                            const std::function<double(const Belief&)>& v_prev, const Belief& z);

struct SolveCaps {
  std::size_t belief_tree_nodes = 200000;
};

struct FiniteHorizonSolution {
  std::vector<double> values;  // v_0(z0) .. v_T(z0)
  // policy[(t, belief key)] = chosen action, for reachable beliefs at epoch t
  std::map<std::pair<int, Belief::Key>, std::size_t> policy;
};

class FiniteHorizonSolver {
 public:
  FiniteHorizonSolver(const PomdpModel& m, SolveCaps caps = {});

  /// v_t(z) with the minimizing action set, memoized on (t, canonical key).
  BellmanResult value(const Belief& z, int t);
  FiniteHorizonSolution solve(const Belief& z0, int horizon);
  std::size_t nodes_used() const { return memo_.size(); }

 private:
  const PomdpModel& m_;
  SolveCaps caps_;
  std::map<std::pair<int, Belief::Key>, BellmanResult> memo_;
};

FiniteHorizonSolution solve_finite_horizon(const PomdpModel& m, const Belief& z0, int horizon,
                                           SolveCaps caps = {});

struct DiscountedSolution {
  double value = 0.0;
  std::size_t action = 0;
  double error_bound = 0.0;  // two-sided under tag D; lower bound only under P
  bool lower_bound_only = false;
  int horizon_used = 0;
};

/// Value iteration until alpha^T * span(c) / (1 - alpha) <= epsilon (tag D);
/// under tag P returns the monotone lower approximation, flagged.
DiscountedSolution solve_discounted(const PomdpModel& m, const Belief& z0, double epsilon,
                                    SolveCaps caps = {});

struct LevelSetVerdict {
  double lambda = 0.0;
  bool pass = true;
  std::string witness;
};

struct KinfCompactReport {
  bool finite_spaces = true;
  std::vector<LevelSetVerdict> verdicts;
  std::string note;  // diagnostic only, non-conclusive for continuum claims
};

/// Grid node of a cost function over a gridded real product space.
struct CostGridNode {
  std::vector<double> coords;
  double cost = 0.0;
  std::vector<std::size_t> neighbors;
  bool boundary = false;  // on the edge of the sampled grid
};

/// Level-set compactness diagnostic: finite models pass trivially; on grids
/// a level set touching the grid boundary is flagged as a possible escape.
KinfCompactReport kinf_compact_diagnostic(const PomdpModel& m, const std::vector<double>& lambdas);
KinfCompactReport kinf_compact_diagnostic(const std::vector<CostGridNode>& grid,
                                          const std::vector<double>& lambdas);

struct BeliefActionPath {
  std::vector<std::pair<Belief, std::size_t>> sequence;
  Belief limit;
  std::size_t limit_action = 0;
};

/// Equicontinuity of (z,a) -> R(O x C|z,a) over C, for finite intersections O
/// of the supplied base on X; the sup over C is exact via Hahn on finite Y.
EquicontinuityReport r_family_equicontinuity_diagnostic(const PomdpModel& m,
                                                        const std::vector<BorelSetExpr>& base_on_x,
                                                        const BeliefActionPath& path,
                                                        std::size_t arity = 2, double tol = 1e-9,
                                                        std::size_t set_cap = 4096);

}  // namespace bk
