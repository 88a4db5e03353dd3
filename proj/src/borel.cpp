#include "bk/borel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace bk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool endpoint_lo_less(const Interval& a, const Interval& b) {
  if (a.lo != b.lo) return a.lo < b.lo;
  // closed lower endpoint starts first
  return a.lo_closed && !b.lo_closed;
}

// a ends strictly before b starts, with a gap no point can fill
bool disjoint_with_gap(const Interval& a, const Interval& b) {
  if (a.hi < b.lo) return true;
  if (a.hi == b.lo) return !a.hi_closed && !b.lo_closed;
  return false;
}

}  // namespace

void BorelSetExpr::normalize() {
  if (space_ && !space_->is_real_line()) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    for (int i : indices_)
      if (i < 0 || static_cast<std::size_t>(i) >= space_->size())
        throw DomainError("set member index out of range");
    return;
  }
  std::vector<Interval> ivs;
  for (const Interval& iv : intervals_) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi)) throw DomainError("interval endpoint is NaN");
    if (!iv.empty()) ivs.push_back(iv);
  }
  std::sort(ivs.begin(), ivs.end(), endpoint_lo_less);
  intervals_.clear();
  for (const Interval& iv : ivs) {
    if (intervals_.empty() || disjoint_with_gap(intervals_.back(), iv)) {
      intervals_.push_back(iv);
      continue;
    }
    Interval& last = intervals_.back();
    if (iv.hi > last.hi || (iv.hi == last.hi && iv.hi_closed && !last.hi_closed)) {
      last.hi = iv.hi;
      last.hi_closed = iv.hi_closed;
    }
  }
}

BorelSetExpr BorelSetExpr::points(SpaceRef space, std::vector<int> indices) {
  if (!space || space->is_real_line())
    throw DomainError("point subsets require a finite space");
  BorelSetExpr e;
  e.space_ = std::move(space);
  e.indices_ = std::move(indices);
  e.normalize();
  return e;
}

BorelSetExpr BorelSetExpr::points_by_label(SpaceRef space, const std::vector<std::string>& labels) {
  std::vector<int> idx;
  for (const auto& l : labels) {
    int i = space->label_index(l);
    if (i < 0) throw DomainError("unknown label in set: " + l);
    idx.push_back(i);
  }
  return points(std::move(space), std::move(idx));
}

BorelSetExpr BorelSetExpr::intervals(std::vector<Interval> ivs) {
  BorelSetExpr e;
  e.space_ = MetricSpace::real_line();
  e.intervals_ = std::move(ivs);
  e.normalize();
  return e;
}

BorelSetExpr BorelSetExpr::interval(double lo, double hi, bool lo_closed, bool hi_closed) {
  return intervals({Interval{lo, hi, lo_closed, hi_closed}});
}

BorelSetExpr BorelSetExpr::singleton_real(double x) { return interval(x, x, true, true); }

BorelSetExpr BorelSetExpr::whole(SpaceRef space) {
  if (space->is_real_line()) return intervals({Interval{}});
  std::vector<int> idx(space->size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  return points(std::move(space), std::move(idx));
}

BorelSetExpr BorelSetExpr::empty(SpaceRef space) {
  if (space->is_real_line()) return intervals({});
  return points(std::move(space), {});
}

bool BorelSetExpr::is_empty() const {
  if (!space_) return true;
  return space_->is_real_line() ? intervals_.empty() : indices_.empty();
}

bool BorelSetExpr::contains(const Point& p) const {
  if (!space_) return false;
  if (space_->is_real_line()) {
    for (const Interval& iv : intervals_)
      if (iv.contains(p.coord)) return true;
    return false;
  }
  return std::binary_search(indices_.begin(), indices_.end(), p.index);
}

BorelSetExpr BorelSetExpr::set_union(const BorelSetExpr& other) const {
  if (!same_space(space_, other.space_)) throw DomainError("set union across different spaces");
  BorelSetExpr e;
  e.space_ = space_;
  if (space_->is_real_line()) {
    e.intervals_ = intervals_;
    e.intervals_.insert(e.intervals_.end(), other.intervals_.begin(), other.intervals_.end());
  } else {
    e.indices_ = indices_;
    e.indices_.insert(e.indices_.end(), other.indices_.begin(), other.indices_.end());
  }
  e.normalize();
  return e;
}

BorelSetExpr BorelSetExpr::set_intersection(const BorelSetExpr& other) const {
  if (!same_space(space_, other.space_))
    throw DomainError("set intersection across different spaces");
  BorelSetExpr e;
  e.space_ = space_;
  if (space_->is_real_line()) {
    for (const Interval& a : intervals_) {
      for (const Interval& b : other.intervals_) {
        Interval c;
        if (a.lo > b.lo || (a.lo == b.lo && !a.lo_closed)) {
          c.lo = a.lo;
          c.lo_closed = a.lo_closed;
        } else {
          c.lo = b.lo;
          c.lo_closed = b.lo_closed;
        }
        if (a.hi < b.hi || (a.hi == b.hi && !a.hi_closed)) {
          c.hi = a.hi;
          c.hi_closed = a.hi_closed;
        } else {
          c.hi = b.hi;
          c.hi_closed = b.hi_closed;
        }
        if (!c.empty()) e.intervals_.push_back(c);
      }
    }
  } else {
    std::set_intersection(indices_.begin(), indices_.end(), other.indices_.begin(),
                          other.indices_.end(), std::back_inserter(e.indices_));
  }
  e.normalize();
  return e;
}

BorelSetExpr BorelSetExpr::complement() const {
  BorelSetExpr e;
  e.space_ = space_;
  if (!space_->is_real_line()) {
    std::set<int> in(indices_.begin(), indices_.end());
    for (std::size_t i = 0; i < space_->size(); ++i)
      if (!in.count(static_cast<int>(i))) e.indices_.push_back(static_cast<int>(i));
    return e;
  }
  double cursor = -kInf;
  bool cursor_closed = false;  // whether the gap starting at cursor includes cursor
  for (const Interval& iv : intervals_) {
    Interval gap{cursor, iv.lo, cursor_closed, !iv.lo_closed};
    if (!gap.empty()) e.intervals_.push_back(gap);
    cursor = iv.hi;
    cursor_closed = !iv.hi_closed;
  }
  Interval tail{cursor, kInf, cursor_closed, false};
  if (!tail.empty()) e.intervals_.push_back(tail);
  e.normalize();
  return e;
}

bool BorelSetExpr::same_set(const BorelSetExpr& other) const {
  if (!same_space(space_, other.space_)) return false;
  if (space_->is_real_line()) {
    if (intervals_.size() != other.intervals_.size()) return false;
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      const Interval &a = intervals_[i], &b = other.intervals_[i];
      if (a.lo != b.lo || a.hi != b.hi || a.lo_closed != b.lo_closed ||
          a.hi_closed != b.hi_closed)
        return false;
    }
    return true;
  }
  return indices_ == other.indices_;
}

bool BorelSetExpr::subset_of(const BorelSetExpr& other) const {
  return set_intersection(other).same_set(*this);
}

bool BorelSetExpr::is_open() const {
  if (!space_->is_real_line()) return true;
  for (const Interval& iv : intervals_) {
    if (std::isfinite(iv.lo) && iv.lo_closed) return false;
    if (std::isfinite(iv.hi) && iv.hi_closed) return false;
  }
  return true;
}

std::string BorelSetExpr::describe() const {
  std::ostringstream os;
  os.precision(12);
  if (!space_) return "{}";
  if (space_->is_real_line()) {
    if (intervals_.empty()) return "{}";
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      const Interval& iv = intervals_[i];
      if (i) os << " u ";
      os << (iv.lo_closed ? '[' : '(') << iv.lo << ", " << iv.hi
         << (iv.hi_closed ? ']' : ')');
    }
    return os.str();
  }
  os << '{';
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) os << ", ";
    os << space_->labels()[static_cast<std::size_t>(indices_[i])];
  }
  os << '}';
  return os.str();
}

}  // namespace bk
