#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bk {

/// Thrown on contract violations (space mismatch, invalid weights, bad input).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A point of a metric space: a label index for finite spaces, a coordinate
/// on the real line.
struct Point {
  int index = -1;
  double coord = 0.0;

  static Point finite(int i) { return Point{i, 0.0}; }
  static Point real(double x) { return Point{-1, x}; }
};

/// Either a finite metric space (labels + distance matrix) or the real line
/// with the Euclidean metric.
class MetricSpace {
 public:
  static std::shared_ptr<const MetricSpace> real_line();
  static std::shared_ptr<const MetricSpace> finite(
      std::vector<std::string> labels, std::vector<std::vector<double>> metric);
  /// Finite space with the discrete metric (d = 1 off-diagonal).
  static std::shared_ptr<const MetricSpace> discrete(std::vector<std::string> labels);

  bool is_real_line() const { return real_line_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<double>>& metric() const { return metric_; }

  int label_index(const std::string& label) const;  // -1 if absent
  std::string point_label(const Point& p) const;
  double distance(const Point& a, const Point& b) const;

 private:
  MetricSpace() = default;
  bool real_line_ = false;
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> metric_;
};

using SpaceRef = std::shared_ptr<const MetricSpace>;

/// Structural equality of spaces; measures and sets may only be combined
/// when their spaces agree.
bool same_space(const MetricSpace& a, const MetricSpace& b);
bool same_space(const SpaceRef& a, const SpaceRef& b);

/// Total order on points of one space (index order or coordinate order).
bool point_less(const MetricSpace& space, const Point& a, const Point& b);
bool point_eq(const MetricSpace& space, const Point& a, const Point& b);

}  // namespace bk
