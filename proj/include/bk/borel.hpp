#pragma once

#include <limits>
#include <string>
#include <vector>

#include "bk/space.hpp"

namespace bk {

/// One interval of the real line. Infinite endpoints use +-infinity with the
/// closed flag false.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
  bool contains(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
  }
};

/// Finite representation of a Borel set: a normalized finite union of
/// intervals on the real line, or an explicit point subset of a finite space.
class BorelSetExpr {
 public:
  BorelSetExpr() = default;

  static BorelSetExpr points(SpaceRef space, std::vector<int> indices);
  static BorelSetExpr points_by_label(SpaceRef space, const std::vector<std::string>& labels);
  static BorelSetExpr intervals(std::vector<Interval> ivs);
  static BorelSetExpr interval(double lo, double hi, bool lo_closed, bool hi_closed);
  static BorelSetExpr singleton_real(double x);
  static BorelSetExpr whole(SpaceRef space);
  static BorelSetExpr empty(SpaceRef space);

  const SpaceRef& space() const { return space_; }
  bool is_empty() const;
  bool contains(const Point& p) const;

  BorelSetExpr set_union(const BorelSetExpr& other) const;
  BorelSetExpr set_intersection(const BorelSetExpr& other) const;
  BorelSetExpr complement() const;
  bool same_set(const BorelSetExpr& other) const;
  bool subset_of(const BorelSetExpr& other) const;

  /// Open in the space's topology. Every subset of a finite (discrete-topology)
  /// space is open; an interval set is open iff all finite endpoints are open.
  bool is_open() const;

  const std::vector<int>& indices() const { return indices_; }
  const std::vector<Interval>& interval_list() const { return intervals_; }

  std::string describe() const;

 private:
  SpaceRef space_;
  std::vector<int> indices_;        // finite space, sorted
  std::vector<Interval> intervals_; // real line, normalized
  void normalize();
};

}  // namespace bk
