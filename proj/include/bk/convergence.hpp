#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bk/distribution.hpp"
#include "bk/measure.hpp"

namespace bk {

/// A term of a measure sequence: either an atomic measure or a distribution
/// function on the real line.
using MeasureLike = std::variant<ProbMeasure, DistributionFunction>;

double measure_of(const MeasureLike& m, const BorelSetExpr& B);
SpaceRef space_of(const MeasureLike& m);

/// Deterministic index -> term generator with a limit candidate and a
/// sampling horizon.
struct MeasureSequence {
  std::function<MeasureLike(int)> generator;  // defined for n = 1..n_max
  MeasureLike limit;
  int n_max = 100;
};

/// Finite truncation of a countable base of open sets.
struct BaseFamily {
  std::vector<BorelSetExpr> members;
  bool closed_under_intersection = false;
};

struct SetCheck {
  std::string set_label;
  double limit_value = 0.0;
  double liminf_estimate = 0.0;
  double limsup_estimate = 0.0;
  bool violated = false;
  std::string witness;  // nonempty when violated
};

struct ConvergenceReport {
  std::string mode;  // "weak" | "setwise" | "tv" | "cdf"
  bool consistent = true;
  std::vector<SetCheck> checks;
  std::string disclaimer =
      "finite-sample diagnostic: consistency at sampled indices, not a proof of convergence";

  const SetCheck* first_violation() const {
    for (const auto& c : checks)
      if (c.violated) return &c;
    return nullptr;
  }
};

struct ConvergenceOptions {
  double tol = 1e-9;
  // tail window for liminf/limsup estimates: last quarter of sampled indices
  double tail_fraction = 0.25;
  std::size_t composite_set_cap = 4096;
};

/// Liminf test on open sets, limsup test on closed sets.
ConvergenceReport portmanteau_weak_check(const MeasureSequence& seq,
                                         const std::vector<BorelSetExpr>& opens,
                                         const std::vector<BorelSetExpr>& closeds,
                                         const ConvergenceOptions& opt = {});

/// Pointwise CDF convergence at continuity probes; jump probes of the limit
/// are excluded and flagged.
ConvergenceReport cdf_weak_check(const MeasureSequence& seq,
                                 const std::vector<double>& probe_points,
                                 const ConvergenceOptions& opt = {});

/// Two-sided limit test on every supplied set.
ConvergenceReport setwise_check(const MeasureSequence& seq,
                                const std::vector<BorelSetExpr>& sets,
                                const ConvergenceOptions& opt = {});

/// Liminf test over all unions of at most `union_arity` base members.
ConvergenceReport base_criterion_weak(const MeasureSequence& seq, const BaseFamily& base,
                                      std::size_t union_arity,
                                      const ConvergenceOptions& opt = {});

struct ClosedCover {
  BorelSetExpr closed_set;
  std::vector<BorelSetExpr> cover_prefix;  // B_1..B_m, each inside closed_set
};

/// Countable-base setwise criterion: coverage deficit of each cover prefix
/// plus limit tests on its partial unions.
ConvergenceReport base_criterion_setwise(const MeasureSequence& seq, const BaseFamily& base,
                                         const std::vector<ClosedCover>& closed_covers,
                                         const ConvergenceOptions& opt = {});

/// Verifies the inclusion-exclusion identity linking union values to
/// intersection values on every subfamily, for every listed measure.
bool inclusion_exclusion_transfer(const std::vector<ProbMeasure>& measures,
                                  const std::vector<BorelSetExpr>& sets,
                                  double tol = 1e-9);

/// Iterates F_{n+1}(x) = (1/2)F_n(3x) below 1/3, 1/2 on the middle third,
/// 1/2 + (1/2)F_n(3x-2) above 2/3, from F_0(x) = x on [0,1].
DistributionFunction cantor_sequence(int n);

/// The Cantor function on [0,1], exact at triadic rationals.
double cantor_function(double x);

/// Union of the 2^k closed level-k triadic intervals covering the Cantor set.
BorelSetExpr cantor_cover(int k);

/// Point mass at sqrt(2) + 1/n.
ProbMeasure point_mass_sequence(int n);

/// Sequence wrapper for the point masses with limit delta at sqrt(2).
MeasureSequence point_mass_measure_sequence(int n_max = 100);

/// Sequence wrapper for the Cantor iterates; the limit is a deep iterate,
/// exact on triadic grids up to the given depth.
MeasureSequence cantor_measure_sequence(int n_max = 10, int limit_depth = 12);

}  // namespace bk
