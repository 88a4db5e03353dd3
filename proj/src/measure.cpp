#include "bk/measure.hpp"

#include <algorithm>
#include <cmath>

namespace bk {

namespace {

void sort_and_check_distinct(const MetricSpace& space, std::vector<WeightedAtom>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [&](const WeightedAtom& a, const WeightedAtom& b) {
    return point_less(space, a.point, b.point);
  });
  for (std::size_t i = 1; i < atoms.size(); ++i)
    if (point_eq(space, atoms[i - 1].point, atoms[i].point))
      throw DomainError("measure atoms must be distinct");
}

// aligned weights of two measures over the union of their supports
struct AlignedAtoms {
  std::vector<Point> points;
  std::vector<double> p, q;
};

AlignedAtoms align(const SignedMeasure& a, const SignedMeasure& b) {
  if (!same_space(a.space(), b.space()))
    throw DomainError("measures live on different spaces");
  const MetricSpace& sp = *a.space();
  AlignedAtoms out;
  std::size_t i = 0, j = 0;
  const auto& pa = a.atoms();
  const auto& pb = b.atoms();
  while (i < pa.size() || j < pb.size()) {
    if (j == pb.size() || (i < pa.size() && point_less(sp, pa[i].point, pb[j].point))) {
      out.points.push_back(pa[i].point);
      out.p.push_back(pa[i].weight);
      out.q.push_back(0.0);
      ++i;
    } else if (i == pa.size() || point_less(sp, pb[j].point, pa[i].point)) {
      out.points.push_back(pb[j].point);
      out.p.push_back(0.0);
      out.q.push_back(pb[j].weight);
      ++j;
    } else {
      out.points.push_back(pa[i].point);
      out.p.push_back(pa[i].weight);
      out.q.push_back(pb[j].weight);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

SignedMeasure::SignedMeasure(SpaceRef space, std::vector<WeightedAtom> atoms)
    : space_(std::move(space)), atoms_(std::move(atoms)) {
  if (!space_) throw DomainError("measure needs a space");
  if (!space_->is_real_line())
    for (const auto& a : atoms_)
      if (a.point.index < 0 || static_cast<std::size_t>(a.point.index) >= space_->size())
        throw DomainError("atom index out of range");
  sort_and_check_distinct(*space_, atoms_);
}

double SignedMeasure::total() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

SignedMeasure SignedMeasure::operator-() const {
  std::vector<WeightedAtom> flipped = atoms_;
  for (auto& a : flipped) a.weight = -a.weight;
  return SignedMeasure(space_, std::move(flipped));
}

ProbMeasure::ProbMeasure(SpaceRef space, std::vector<WeightedAtom> atoms)
    : SignedMeasure(std::move(space), std::move(atoms)) {
  double sum = 0.0;
  for (const auto& a : atoms_) {
    if (a.weight < 0.0) throw DomainError("probability weights must be nonnegative");
    sum += a.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw DomainError("probability weights must sum to 1 (within 1e-9)");
  if (sum != 1.0)
    for (auto& a : atoms_) a.weight /= sum;
}

ProbMeasure ProbMeasure::dirac(SpaceRef space, Point p) {
  return ProbMeasure(std::move(space), {WeightedAtom{p, 1.0}});
}

ProbMeasure ProbMeasure::dirac_real(double x) {
  return dirac(MetricSpace::real_line(), Point::real(x));
}

ProbMeasure ProbMeasure::uniform(SpaceRef space) {
  if (space->is_real_line()) throw DomainError("uniform needs a finite space");
  const std::size_t n = space->size();
  std::vector<WeightedAtom> atoms;
  for (std::size_t i = 0; i < n; ++i)
    atoms.push_back({Point::finite(static_cast<int>(i)), 1.0 / static_cast<double>(n)});
  return ProbMeasure(std::move(space), std::move(atoms));
}

double ProbMeasure::weight_of_index(int i) const {
  for (const auto& a : atoms_)
    if (a.point.index == i) return a.weight;
  return 0.0;
}

SignedMeasure operator-(const ProbMeasure& p, const ProbMeasure& q) {
  AlignedAtoms al = align(p, q);
  std::vector<WeightedAtom> atoms;
  for (std::size_t i = 0; i < al.points.size(); ++i)
    atoms.push_back({al.points[i], al.p[i] - al.q[i]});
  return SignedMeasure(p.space(), std::move(atoms));
}

double measure_of_set(const SignedMeasure& m, const BorelSetExpr& B) {
  if (!same_space(m.space(), B.space()))
    throw DomainError("measure and set live on different spaces");
  double s = 0.0;
  for (const auto& a : m.atoms())
    if (B.contains(a.point)) s += a.weight;
  return s;
}

HahnDecomposition hahn_decompose(const SignedMeasure& d) {
  const SpaceRef& sp = d.space();
  std::vector<WeightedAtom> pos, neg;
  std::vector<int> e_idx;
  std::vector<Interval> e_ivs;
  for (const auto& a : d.atoms()) {
    if (a.weight >= 0.0) {
      pos.push_back(a);
      if (sp->is_real_line())
        e_ivs.push_back(Interval{a.point.coord, a.point.coord, true, true});
      else
        e_idx.push_back(a.point.index);
    } else {
      neg.push_back({a.point, -a.weight});
    }
  }
  BorelSetExpr E = sp->is_real_line() ? BorelSetExpr::intervals(std::move(e_ivs))
                                      : BorelSetExpr::points(sp, std::move(e_idx));
  return HahnDecomposition{std::move(E), SignedMeasure(sp, std::move(pos)),
                           SignedMeasure(sp, std::move(neg))};
}

double tv_distance(const ProbMeasure& p, const ProbMeasure& q) {
  AlignedAtoms al = align(p, q);
  double s = 0.0;
  for (std::size_t i = 0; i < al.p.size(); ++i) s += std::abs(al.p[i] - al.q[i]);
  return s;
}

double tv_distance_bounded_functions(const ProbMeasure& p, const ProbMeasure& q,
                                     const std::vector<AtomFunction>& f_grid) {
  const MetricSpace& sp = *p.space();
  if (!same_space(p.space(), q.space()))
    throw DomainError("measures live on different spaces");
  double best = 0.0;
  for (const AtomFunction& f : f_grid) {
    if (f.points.size() != f.values.size())
      throw DomainError("test function points/values length mismatch");
    for (double v : f.values)
      if (!(v >= -1.0 && v <= 1.0))
        throw DomainError("test function values must lie in [-1, 1]");
    auto integrate = [&](const SignedMeasure& m) {
      double s = 0.0;
      for (const auto& a : m.atoms())
        for (std::size_t i = 0; i < f.points.size(); ++i)
          if (point_eq(sp, a.point, f.points[i])) {
            s += a.weight * f.values[i];
            break;
          }
      return s;
    };
    best = std::max(best, std::abs(integrate(p) - integrate(q)));
  }
  return best;
}

AtomFunction hahn_indicator(const ProbMeasure& p, const ProbMeasure& q) {
  HahnDecomposition h = hahn_decompose(p - q);
  AlignedAtoms al = align(p, q);
  AtomFunction f;
  for (const Point& pt : al.points) {
    f.points.push_back(pt);
    f.values.push_back(h.E.contains(pt) ? 1.0 : -1.0);
  }
  return f;
}

}  // namespace bk
