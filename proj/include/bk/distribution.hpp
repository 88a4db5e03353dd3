#pragma once

#include <vector>

#include "bk/borel.hpp"
#include "bk/measure.hpp"

namespace bk {

/// Piecewise-linear-or-step function on the real line with finitely many
/// breakpoints. At a breakpoint x_i the function is right-continuous with
/// value right[i] and left limit left[i]; on (x_i, x_{i+1}) it interpolates
/// linearly from right[i] to left[i+1]; it is constant left of the first and
/// right of the last breakpoint.
class DistributionFunction {
 public:
  DistributionFunction(std::vector<double> breakpoints, std::vector<double> left,
                       std::vector<double> right);

  /// Continuous piecewise-linear function through the given nodes.
  static DistributionFunction piecewise_linear(const std::vector<std::pair<double, double>>& nodes);

  const std::vector<double>& breakpoints() const { return xs_; }
  const std::vector<double>& left_values() const { return left_; }
  const std::vector<double>& right_values() const { return right_; }

  double value(double x) const;
  double left_limit(double x) const;

  /// True when nondecreasing with limits 0 at -inf and 1 at +inf.
  bool is_cdf(double tol = 1e-9) const;

  DistributionFunction operator-(const DistributionFunction& other) const;

  /// Mass the induced Stieltjes measure assigns to an interval set.
  double measure_of(const BorelSetExpr& B) const;

 private:
  std::vector<double> xs_, left_, right_;
};

/// Step CDF of a finite-support measure on the real line: F(x) = P((-inf, x]).
DistributionFunction cdf_of_measure(const ProbMeasure& p);

/// Total variation of a piecewise-linear/step function: sum of jump magnitudes
/// plus absolute increments over the linear segments.
double total_variation_of_function(const DistributionFunction& f);

}  // namespace bk
