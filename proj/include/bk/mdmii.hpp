#pragma once

#include <string>
#include <vector>

#include "bk/pomdp.hpp"

namespace bk {

/// Decision model with an observed and a hidden state coordinate. The state
/// space is X = Y x W, flattened as x = y * |W| + w; actions are restricted
/// per observed state by an availability mask. Costs are meaningful only on
/// available pairs; the +infinity extension happens at conversion time.
struct MdmiiModel {
  std::vector<std::string> observed_states;  // Y
  std::vector<std::string> hidden_states;    // W
  std::vector<std::string> actions;          // A
  std::vector<std::vector<bool>> available;  // available[y][a]
  // transition[x][a][x'] on the flattened product state
  std::vector<std::vector<std::vector<double>>> transition;
  std::vector<std::vector<double>> cost;  // cost[x][a], read only where available
  double alpha = 1.0;
  AssumptionTag assumption = AssumptionTag::P;

  std::size_t ny() const { return observed_states.size(); }
  std::size_t nw() const { return hidden_states.size(); }
  std::size_t na() const { return actions.size(); }
  std::size_t nx() const { return ny() * nw(); }
  std::size_t x_index(std::size_t y, std::size_t w) const { return y * nw() + w; }
  std::size_t y_of(std::size_t x) const { return x / nw(); }
  std::size_t w_of(std::size_t x) const { return x % nw(); }

  void validate() const;
};

/// Reduction to a partially observed model: the observation kernel is the
/// deterministic projection onto Y (independent of the action), and the cost
/// of an unavailable action is +infinity.
PomdpModel to_pomdp(const MdmiiModel& m);

/// Action / next-observation trace starting from a first observed state.
struct MdmiiTrace {
  std::size_t y0 = 0;
  std::vector<std::pair<std::size_t, std::size_t>> steps;  // (action, next y)
};

struct MdmiiFilterStep {
  Belief posterior;            // over X = Y x W
  std::vector<double> hidden_marginal;  // W-marginal of the posterior
  bool slice_ok = true;        // support inside {y_t} x W
  bool null_observation = false;
};

struct MdmiiFilterReport {
  bool pass = true;
  std::vector<MdmiiFilterStep> steps;
  std::string witness;  // nonempty when pass is false
};

/// Runs the reduced-model filter along the trace and verifies that every
/// posterior is supported on the slice of the current observed state.
/// Throws if the trace uses an unavailable action.
MdmiiFilterReport mdmii_filter_invariant_check(const MdmiiModel& m, const Belief& z0,
                                               const MdmiiTrace& trace, double tol = 1e-12);

/// Convergent sequence of state-action pairs with its limit.
struct StateActionPath {
  std::vector<std::pair<std::size_t, std::size_t>> sequence;  // (x, a)
  std::size_t limit_state = 0;
  std::size_t limit_action = 0;
};

/// Equicontinuity of (x,a) -> P(C x O|x,a) over C in B(Y), for each finite
/// intersection O of the supplied base on W. The base must contain W itself;
/// the sup over C is exact via the Hahn set of the difference on Y.
EquicontinuityReport pstar_equicontinuity_diagnostic(const MdmiiModel& m,
                                                     const std::vector<BorelSetExpr>& base_on_w,
                                                     const StateActionPath& path,
                                                     std::size_t arity = 2, double tol = 1e-9,
                                                     std::size_t set_cap = 4096);

}  // namespace bk
