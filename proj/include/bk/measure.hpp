#pragma once

#include <vector>

#include "bk/borel.hpp"
#include "bk/space.hpp"

namespace bk {

struct WeightedAtom {
  Point point;
  double weight = 0.0;
};

/// Finite-support signed measure: distinct atoms with arbitrary real weights.
class SignedMeasure {
 public:
  SignedMeasure(SpaceRef space, std::vector<WeightedAtom> atoms);

  const SpaceRef& space() const { return space_; }
  const std::vector<WeightedAtom>& atoms() const { return atoms_; }
  double total() const;

  SignedMeasure operator-() const;

 protected:
  SpaceRef space_;
  std::vector<WeightedAtom> atoms_;  // sorted by point, points distinct
};

/// Finite-support probability measure: nonnegative weights summing to 1.
/// Construction renormalizes when |sum - 1| <= 1e-9 and rejects otherwise.
class ProbMeasure : public SignedMeasure {
 public:
  ProbMeasure(SpaceRef space, std::vector<WeightedAtom> atoms);

  static ProbMeasure dirac(SpaceRef space, Point p);
  static ProbMeasure dirac_real(double x);
  static ProbMeasure uniform(SpaceRef space);

  /// Belief-style access for finite spaces: weight of label index i.
  double weight_of_index(int i) const;
};

SignedMeasure operator-(const ProbMeasure& p, const ProbMeasure& q);

/// Mass of B under m (sum of atom weights inside B).
double measure_of_set(const SignedMeasure& m, const BorelSetExpr& B);

struct HahnDecomposition {
  BorelSetExpr E;       // atoms with nonnegative difference (ties go to E)
  SignedMeasure pos;    // d restricted to E
  SignedMeasure neg;    // -d restricted to E^c
};

HahnDecomposition hahn_decompose(const SignedMeasure& d);

/// Total variation distance: sum of |p_i - q_i| over the union of supports;
/// equals twice the supremum of |P(B) - Q(B)| over Borel sets.
double tv_distance(const ProbMeasure& p, const ProbMeasure& q);

/// A test function given by its values on a finite set of atoms.
struct AtomFunction {
  std::vector<Point> points;
  std::vector<double> values;  // in [-1, 1]
};

/// Lower bound on tv_distance from a finite family of [-1,1]-valued test
/// functions: max over the family of |int f dP - int f dQ|. Atoms of P, Q not
/// listed in a function are treated as f = 0 there.
double tv_distance_bounded_functions(const ProbMeasure& p, const ProbMeasure& q,
                                     const std::vector<AtomFunction>& f_grid);

/// The Hahn indicator f = I{E} - I{E^c} on the union support of p and q;
/// attains tv_distance in tv_distance_bounded_functions.
AtomFunction hahn_indicator(const ProbMeasure& p, const ProbMeasure& q);

}  // namespace bk
