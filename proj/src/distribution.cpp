#include "bk/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace bk {

DistributionFunction::DistributionFunction(std::vector<double> breakpoints,
                                           std::vector<double> left,
                                           std::vector<double> right)
    : xs_(std::move(breakpoints)), left_(std::move(left)), right_(std::move(right)) {
  if (xs_.empty()) throw DomainError("distribution function needs at least one breakpoint");
  if (xs_.size() != left_.size() || xs_.size() != right_.size())
    throw DomainError("breakpoint/value length mismatch");
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || !std::isfinite(left_[i]) || !std::isfinite(right_[i]))
      throw DomainError("distribution function requires finite breakpoints and values");
    if (i && !(xs_[i - 1] < xs_[i]))
      throw DomainError("breakpoints must be strictly increasing");
  }
}

DistributionFunction DistributionFunction::piecewise_linear(
    const std::vector<std::pair<double, double>>& nodes) {
  std::vector<double> xs, vs;
  for (const auto& [x, v] : nodes) {
    xs.push_back(x);
    vs.push_back(v);
  }
  return DistributionFunction(xs, vs, vs);
}

double DistributionFunction::value(double x) const {
  if (x < xs_.front()) return left_.front();
  if (x >= xs_.back()) return right_.back();
  // largest i with xs_[i] <= x
  std::size_t i = static_cast<std::size_t>(
      std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin() - 1);
  if (xs_[i] == x) return right_[i];
  double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
  return right_[i] + t * (left_[i + 1] - right_[i]);
}

double DistributionFunction::left_limit(double x) const {
  if (x <= xs_.front()) return left_.front();
  if (x > xs_.back()) return right_.back();
  std::size_t i = static_cast<std::size_t>(
      std::lower_bound(xs_.begin(), xs_.end(), x) - xs_.begin());
  if (i < xs_.size() && xs_[i] == x) return left_[i];
  return value(x);  // interior of a segment, continuous there
}

bool DistributionFunction::is_cdf(double tol) const {
  if (std::abs(left_.front()) > tol || std::abs(right_.back() - 1.0) > tol) return false;
  double prev = left_.front();
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (left_[i] < prev - tol) return false;
    if (right_[i] < left_[i] - tol) return false;
    prev = right_[i];
  }
  return true;
}

DistributionFunction DistributionFunction::operator-(const DistributionFunction& other) const {
  std::vector<double> xs;
  std::merge(xs_.begin(), xs_.end(), other.xs_.begin(), other.xs_.end(),
             std::back_inserter(xs));
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> left, right;
  for (double x : xs) {
    left.push_back(left_limit(x) - other.left_limit(x));
    right.push_back(value(x) - other.value(x));
  }
  return DistributionFunction(std::move(xs), std::move(left), std::move(right));
}

double DistributionFunction::measure_of(const BorelSetExpr& B) const {
  if (!B.space()->is_real_line())
    throw DomainError("distribution measure requires an interval set");
  double total = 0.0;
  for (const Interval& iv : B.interval_list()) {
    double hi = std::isfinite(iv.hi)
                    ? (iv.hi_closed ? value(iv.hi) : left_limit(iv.hi))
                    : right_.back();
    double lo = std::isfinite(iv.lo)
                    ? (iv.lo_closed ? left_limit(iv.lo) : value(iv.lo))
                    : left_.front();
    total += hi - lo;
  }
  return total;
}

DistributionFunction cdf_of_measure(const ProbMeasure& p) {
  if (!p.space()->is_real_line())
    throw DomainError("cdf_of_measure requires a measure on the real line");
  if (p.atoms().empty()) throw DomainError("empty measure");
  std::vector<double> xs, left, right;
  double cum = 0.0;
  for (const auto& a : p.atoms()) {  // atoms sorted by coordinate
    xs.push_back(a.point.coord);
    left.push_back(cum);
    cum += a.weight;
    right.push_back(cum);
  }
  return DistributionFunction(std::move(xs), std::move(left), std::move(right));
}

double total_variation_of_function(const DistributionFunction& f) {
  const auto& xs = f.breakpoints();
  const auto& left = f.left_values();
  const auto& right = f.right_values();
  double v = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    v += std::abs(right[i] - left[i]);  // jump at the breakpoint
    if (i + 1 < xs.size()) v += std::abs(left[i + 1] - right[i]);  // monotone segment
  }
  return v;
}

}  // namespace bk
