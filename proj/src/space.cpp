#include "bk/space.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace bk {

SpaceRef MetricSpace::real_line() {
  static SpaceRef instance = [] {
    auto s = std::shared_ptr<MetricSpace>(new MetricSpace());
    s->real_line_ = true;
    return SpaceRef(s);
  }();
  return instance;
}

SpaceRef MetricSpace::finite(std::vector<std::string> labels,
                             std::vector<std::vector<double>> metric) {
  const std::size_t n = labels.size();
  if (n == 0) throw DomainError("finite metric space needs at least one point");
  std::set<std::string> uniq(labels.begin(), labels.end());
  if (uniq.size() != n) throw DomainError("metric space labels must be unique");
  if (metric.size() != n) throw DomainError("metric matrix size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (metric[i].size() != n) throw DomainError("metric matrix is not square");
    if (metric[i][i] != 0.0) throw DomainError("metric diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      if (!(metric[i][j] >= 0.0)) throw DomainError("metric entries must be nonnegative");
      if (metric[i][j] != metric[j][i]) throw DomainError("metric must be symmetric");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (metric[i][j] > metric[i][k] + metric[k][j] + 1e-12)
          throw DomainError("metric violates the triangle inequality");
  auto s = std::shared_ptr<MetricSpace>(new MetricSpace());
  s->labels_ = std::move(labels);
  s->metric_ = std::move(metric);
  return s;
}

SpaceRef MetricSpace::discrete(std::vector<std::string> labels) {
  const std::size_t n = labels.size();
  std::vector<std::vector<double>> metric(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) metric[i][i] = 0.0;
  return finite(std::move(labels), std::move(metric));
}

int MetricSpace::label_index(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  return -1;
}

std::string MetricSpace::point_label(const Point& p) const {
  if (real_line_) {
    std::ostringstream os;
    os.precision(17);
    os << p.coord;
    return os.str();
  }
  if (p.index < 0 || static_cast<std::size_t>(p.index) >= labels_.size())
    throw DomainError("point index out of range");
  return labels_[static_cast<std::size_t>(p.index)];
}

double MetricSpace::distance(const Point& a, const Point& b) const {
  if (real_line_) return std::abs(a.coord - b.coord);
  return metric_[static_cast<std::size_t>(a.index)][static_cast<std::size_t>(b.index)];
}

bool same_space(const MetricSpace& a, const MetricSpace& b) {
  if (a.is_real_line() != b.is_real_line()) return false;
  if (a.is_real_line()) return true;
  return a.labels() == b.labels() && a.metric() == b.metric();
}

bool same_space(const SpaceRef& a, const SpaceRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return same_space(*a, *b);
}

bool point_less(const MetricSpace& space, const Point& a, const Point& b) {
  if (space.is_real_line()) return a.coord < b.coord;
  return a.index < b.index;
}

bool point_eq(const MetricSpace& space, const Point& a, const Point& b) {
  if (space.is_real_line()) return a.coord == b.coord;
  return a.index == b.index;
}

}  // namespace bk
