#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bk/convergence.hpp"
#include "bk/measure.hpp"

namespace bk {

/// Finite map from parameter points to probability measures on a target space.
class StochasticKernel {
 public:
  StochasticKernel(SpaceRef target, SpaceRef param_space, std::vector<Point> params,
                   std::vector<ProbMeasure> images);

  const SpaceRef& target() const { return target_; }
  const SpaceRef& param_space() const { return param_space_; }
  const std::vector<Point>& params() const { return params_; }
  const std::vector<ProbMeasure>& images() const { return images_; }

  int param_index(const Point& p) const;  // -1 if absent
  const ProbMeasure& at(const Point& p) const;

 private:
  SpaceRef target_, param_space_;
  std::vector<Point> params_;
  std::vector<ProbMeasure> images_;
};

/// Kernel on a product space S1 x S2 given a parameter set S3, stored as
/// weighted pair atoms per parameter.
class JointKernel {
 public:
  struct JointAtom {
    Point a;  // S1 component
    Point b;  // S2 component
    double weight = 0.0;
  };

  JointKernel(SpaceRef s1, SpaceRef s2, SpaceRef param_space, std::vector<Point> params,
              std::vector<std::vector<JointAtom>> table);

  const SpaceRef& s1() const { return s1_; }
  const SpaceRef& s2() const { return s2_; }
  const SpaceRef& param_space() const { return param_space_; }
  const std::vector<Point>& params() const { return params_; }
  const std::vector<std::vector<JointAtom>>& table() const { return table_; }

  int param_index(const Point& p) const;

  /// P(B x C | param)
  double mass(int param_idx, const BorelSetExpr& B, const BorelSetExpr& C) const;

 private:
  SpaceRef s1_, s2_, param_space_;
  std::vector<Point> params_;
  std::vector<std::vector<JointAtom>> table_;
};

/// P'(C|s3) = P(S1 x C | s3).
StochasticKernel marginal(const JointKernel& joint);

struct DisintegrationEntry {
  Point s2;
  ProbMeasure conditional;   // H(.|s2, s3)
  bool null_convention = false;  // P'({s2}|s3) = 0, convention measure used
};

struct Disintegration {
  std::vector<Point> params;
  std::vector<std::vector<DisintegrationEntry>> entries;  // per parameter
};

/// Conditional kernel H with P(B x C|s3) = sum_{s2 in C} H(B|s2,s3) P'({s2}|s3).
/// On null s2 atoms H defaults to the S1 marginal given s3, flagged.
Disintegration disintegrate(const JointKernel& joint);

struct EquicontinuityReport {
  std::string family_label;
  std::vector<double> sup_deviations;  // per path step, exact sup over C
  double worst_deviation = 0.0;
  std::string worst_witness;  // witness set C and parameter pair
  bool equicontinuous = true; // deviations decay along the path
};

/// Explicit convergence path in a parameter set: a finite sequence with its
/// limit point.
struct ParamPath {
  std::vector<Point> sequence;
  Point limit;
};

/// Exact sup over C in B(S2) of |P(B x C|s^(n)) - P(B x C|s)| along a path,
/// computed through the Hahn set of the difference measure on S2.
EquicontinuityReport equicontinuity_diagnostic(const JointKernel& joint, const BorelSetExpr& B,
                                               const ParamPath& path, double tol = 1e-9);

/// Per-path convergence of the image measures in the requested mode.
/// Optional probe sets override the defaults (supports for setwise mode,
/// CDF probes derived from supports for weak mode on the real line).
ConvergenceReport kernel_continuity_diagnostic(const StochasticKernel& kernel,
                                               const std::string& mode, const ParamPath& path,
                                               const std::vector<BorelSetExpr>& sets = {},
                                               const ConvergenceOptions& opt = {});

/// Continuity of s3 -> P(O1 x O2|s3) for all finite intersections of the two
/// bases, up to the composite-set cap.
ConvergenceReport product_base_weak_diagnostic(const JointKernel& joint, const BaseFamily& base1,
                                               const BaseFamily& base2, const ParamPath& path,
                                               std::size_t arity = 2,
                                               const ConvergenceOptions& opt = {});

/// The kernel of the projection-observation example: P(B x C|s3) =
/// I{sqrt(2)+s3 in B} I{1 in C} with parameters s3 in {1, 1/2, ..., 0}.
JointKernel shifted_point_joint_kernel(int n_params);

}  // namespace bk
