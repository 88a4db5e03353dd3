#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bk/convergence.hpp"

using namespace bk;

namespace {

const double kSqrt2 = std::sqrt(2.0);

MeasureSequence constant_sequence(const ProbMeasure& p, int n_max = 40) {
  return MeasureSequence{[p](int) { return MeasureLike(p); }, MeasureLike(p), n_max};
}

ProbMeasure grid_measure(const std::vector<std::pair<double, double>>& atoms) {
  std::vector<WeightedAtom> ws;
  for (const auto& [x, w] : atoms) ws.push_back({Point::real(x), w});
  return ProbMeasure(MetricSpace::real_line(), std::move(ws));
}

}  // namespace

TEST_CASE("point masses drift toward sqrt(2)") {
  ProbMeasure p1 = point_mass_sequence(1);
  CHECK(p1.atoms().size() == 1);
  CHECK(p1.atoms()[0].point.coord == doctest::Approx(kSqrt2 + 1.0).epsilon(1e-12));
  for (int n = 1; n <= 30; ++n) {
    CHECK(measure_of_set(point_mass_sequence(n), BorelSetExpr::singleton_real(kSqrt2)) == 0.0);
  }
}

TEST_CASE("portmanteau diagnostic on the drifting point masses") {
  MeasureSequence seq = point_mass_measure_sequence();
  BorelSetExpr open_12 = BorelSetExpr::interval(1.0, 2.0, false, false);
  BorelSetExpr closed_pt = BorelSetExpr::singleton_real(kSqrt2);
  ConvergenceReport r = portmanteau_weak_check(seq, {open_12}, {closed_pt});
  CHECK(r.mode == "weak");
  CHECK(r.consistent);  // limsup P_n({sqrt2}) = 0 <= 1, liminf on (1,2) fine
  CHECK(!r.disclaimer.empty());
}

TEST_CASE("portmanteau rejects empty set lists") {
  MeasureSequence seq = point_mass_measure_sequence();
  CHECK_THROWS_AS(portmanteau_weak_check(seq, {}, {}), DomainError);
}

TEST_CASE("portmanteau on a constant sequence is consistent") {
  ProbMeasure p = grid_measure({{0.0, 0.5}, {1.0, 0.5}});
  MeasureSequence seq = constant_sequence(p);
  ConvergenceReport r = portmanteau_weak_check(
      seq, {BorelSetExpr::interval(-1.0, 0.5, false, false)},
      {BorelSetExpr::interval(0.0, 1.0, true, true)});
  CHECK(r.consistent);
}

TEST_CASE("setwise check flags the singleton at sqrt(2)") {
  MeasureSequence seq = point_mass_measure_sequence();
  ConvergenceReport r = setwise_check(seq, {BorelSetExpr::singleton_real(kSqrt2)});
  CHECK(!r.consistent);
  const SetCheck* v = r.first_violation();
  REQUIRE(v != nullptr);
  CHECK(v->limit_value == doctest::Approx(1.0));
  CHECK(v->limsup_estimate == doctest::Approx(0.0));
  CHECK(!v->witness.empty());
}

TEST_CASE("setwise check passes on a constant sequence") {
  ProbMeasure p = grid_measure({{0.0, 0.25}, {2.0, 0.75}});
  ConvergenceReport r = setwise_check(constant_sequence(p),
                                      {BorelSetExpr::interval(-1.0, 1.0, false, false),
                                       BorelSetExpr::singleton_real(2.0)});
  CHECK(r.consistent);
}

TEST_CASE("cantor iterates have the expected plateau and boundary values") {
  DistributionFunction f1 = cantor_sequence(1);
  CHECK(f1.value(0.5) == doctest::Approx(0.5));
  CHECK(f1.value(1.0 / 3.0) == doctest::Approx(0.5).epsilon(1e-9));
  for (int n = 0; n <= 10; ++n) {
    DistributionFunction fn = cantor_sequence(n);
    CHECK(fn.value(0.0) == doctest::Approx(0.0));
    CHECK(fn.value(1.0) == doctest::Approx(1.0));
    CHECK(fn.is_cdf());
  }
  CHECK_THROWS_AS(cantor_sequence(-1), DomainError);
}

TEST_CASE("cantor iteration contracts by one half on a probe grid") {
  std::vector<double> probes;
  for (int i = 0; i <= 729; ++i) probes.push_back(static_cast<double>(i) / 729.0);
  double prev_gap = -1.0;
  for (int n = 1; n <= 8; ++n) {
    DistributionFunction a = cantor_sequence(n - 1);
    DistributionFunction b = cantor_sequence(n);
    double gap = 0.0;
    for (double x : probes) gap = std::max(gap, std::abs(b.value(x) - a.value(x)));
    if (prev_gap >= 0.0) CHECK(gap <= 0.5 * prev_gap + 1e-12);
    prev_gap = gap;
  }
}

TEST_CASE("cdf diagnostic on the cantor iterates respects the geometric bound") {
  for (int n = 1; n <= 10; ++n) {
    DistributionFunction fn = cantor_sequence(n);
    double sup = 0.0;
    for (int i = 0; i <= 2187; ++i) {
      double x = static_cast<double>(i) / 2187.0;
      sup = std::max(sup, std::abs(cantor_function(x) - fn.value(x)));
    }
    CHECK(sup <= std::ldexp(1.0, 1 - n) / 6.0 + 1e-12);
  }
  MeasureSequence seq = cantor_measure_sequence();
  std::vector<double> probes;
  for (int i = 0; i <= 81; ++i) probes.push_back(static_cast<double>(i) / 81.0);
  ConvergenceReport r = cdf_weak_check(seq, probes);
  CHECK(r.consistent);
}

TEST_CASE("cdf diagnostic at a continuity probe of the drifting point masses") {
  MeasureSequence seq = point_mass_measure_sequence();
  ConvergenceReport r = cdf_weak_check(seq, {2.0});
  CHECK(r.consistent);
  REQUIRE(!r.checks.empty());
  CHECK(r.checks[0].limit_value == doctest::Approx(1.0));
}

TEST_CASE("cdf diagnostic excludes and flags jump probes of the limit") {
  MeasureSequence seq = point_mass_measure_sequence();
  ConvergenceReport r = cdf_weak_check(seq, {kSqrt2});
  CHECK(r.consistent);  // exclusion, not violation
  bool flagged = false;
  for (const SetCheck& c : r.checks) flagged |= c.set_label.find("jump") != std::string::npos;
  CHECK(flagged);
}

TEST_CASE("setwise values on the level-k covers follow the (2/3)^(k-n) law") {
  for (int n = 1; n <= 10; ++n) {
    DistributionFunction fn = cantor_sequence(n);
    for (int k = n; k <= 12; ++k) {
      double expected = std::pow(2.0 / 3.0, k - n);
      CHECK(fn.measure_of(cantor_cover(k)) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("setwise check produces a witness on the deep cantor cover") {
  MeasureSequence seq = cantor_measure_sequence();
  ConvergenceReport r = setwise_check(seq, {cantor_cover(12)});
  CHECK(!r.consistent);
  REQUIRE(r.first_violation() != nullptr);
  CHECK(!r.first_violation()->witness.empty());
}

TEST_CASE("weak base criterion accepts the drifting point masses") {
  MeasureSequence seq = point_mass_measure_sequence();
  std::vector<BorelSetExpr> members;
  const double rats[] = {1.0, 1.2, 1.4, 1.41, 1.43, 1.5, 2.0};
  for (double lo : rats)
    for (double hi : rats)
      if (lo < hi) members.push_back(BorelSetExpr::interval(lo, hi, false, false));
  ConvergenceReport r = base_criterion_weak(seq, BaseFamily{members, false}, 3);
  CHECK(r.consistent);
}

TEST_CASE("weak base criterion rejects a wrong limit") {
  MeasureSequence seq{
      [](int n) { return MeasureLike(ProbMeasure::dirac_real(1.0 / n)); },
      MeasureLike(ProbMeasure::dirac_real(1.0)), 60};
  ConvergenceReport r = base_criterion_weak(
      seq, BaseFamily{{BorelSetExpr::interval(0.5, 1.5, false, false)}, false}, 1);
  CHECK(!r.consistent);
}

TEST_CASE("weak base criterion accepts a constant sequence") {
  ProbMeasure p = grid_measure({{0.0, 1.0}});
  ConvergenceReport r = base_criterion_weak(
      constant_sequence(p),
      BaseFamily{{BorelSetExpr::interval(-1.0, 1.0, false, false),
                  BorelSetExpr::interval(-0.5, 0.5, false, false)},
                 false},
      2);
  CHECK(r.consistent);
}

TEST_CASE("weak base criterion enforces the composite-set cap") {
  MeasureSequence seq = point_mass_measure_sequence();
  std::vector<BorelSetExpr> members;
  for (int i = 0; i < 40; ++i)
    members.push_back(BorelSetExpr::interval(i * 0.1, i * 0.1 + 1.0, false, false));
  ConvergenceOptions opt;
  opt.composite_set_cap = 100;
  CHECK_THROWS_AS(base_criterion_weak(seq, BaseFamily{members, false}, 3, opt), DomainError);
}

TEST_CASE("setwise base criterion flags the singleton cover") {
  MeasureSequence seq = point_mass_measure_sequence();
  BorelSetExpr pt = BorelSetExpr::singleton_real(kSqrt2);
  ClosedCover cover{pt, {pt}};
  ConvergenceReport r = base_criterion_setwise(
      seq, BaseFamily{{BorelSetExpr::interval(1.0, 2.0, false, false)}, false}, {cover});
  CHECK(!r.consistent);
}

TEST_CASE("setwise base criterion accepts a constant sequence") {
  ProbMeasure p = grid_measure({{0.0, 0.5}, {3.0, 0.5}});
  BorelSetExpr closed = BorelSetExpr::interval(-1.0, 1.0, true, true);
  ClosedCover cover{closed, {closed}};
  ConvergenceReport r = base_criterion_setwise(
      constant_sequence(p), BaseFamily{{BorelSetExpr::interval(-2.0, 2.0, false, false)}, false},
      {cover});
  CHECK(r.consistent);
}

TEST_CASE("setwise base criterion flags the growing cantor covers") {
  MeasureSequence seq = cantor_measure_sequence();
  BorelSetExpr cover12 = cantor_cover(12);
  ClosedCover cover{cover12, {cover12}};
  ConvergenceReport r = base_criterion_setwise(
      seq, BaseFamily{{BorelSetExpr::interval(-1.0, 2.0, false, false)}, false}, {cover});
  CHECK(!r.consistent);
}

TEST_CASE("setwise base criterion rejects covers escaping their closed set") {
  MeasureSequence seq = point_mass_measure_sequence();
  ClosedCover bad{BorelSetExpr::interval(0.0, 1.0, true, true),
                  {BorelSetExpr::interval(0.5, 2.0, true, true)}};
  CHECK_THROWS_AS(
      base_criterion_setwise(
          seq, BaseFamily{{BorelSetExpr::interval(0.0, 3.0, false, false)}, false}, {bad}),
      DomainError);
}

TEST_CASE("inclusion-exclusion identity on pairs, triples, and disjoint families") {
  SpaceRef s = MetricSpace::discrete({"a", "b", "c", "d", "e", "f"});
  ProbMeasure p(s, {{Point::finite(0), 0.1},
                    {Point::finite(1), 0.2},
                    {Point::finite(2), 0.3},
                    {Point::finite(3), 0.15},
                    {Point::finite(4), 0.15},
                    {Point::finite(5), 0.1}});
  BorelSetExpr a = BorelSetExpr::points(s, {0, 1, 2});
  BorelSetExpr b = BorelSetExpr::points(s, {2, 3});
  BorelSetExpr c = BorelSetExpr::points(s, {4});
  CHECK(inclusion_exclusion_transfer({p}, {a, b}));
  CHECK(inclusion_exclusion_transfer({p}, {a, b, c}));
  CHECK(inclusion_exclusion_transfer({p}, {b, c}));  // disjoint pair
}

TEST_CASE("inclusion-exclusion on random families up to 5 sets and 8 atoms") {
  std::mt19937_64 rng(555);
  std::vector<std::string> labels;
  for (int i = 0; i < 8; ++i) labels.push_back("s" + std::to_string(i));
  SpaceRef s = MetricSpace::discrete(labels);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> nsets(2, 5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<WeightedAtom> atoms;
    double sum = 0.0;
    for (int i = 0; i < 8; ++i) {
      atoms.push_back({Point::finite(i), u(rng) + 1e-6});
      sum += atoms.back().weight;
    }
    for (auto& a : atoms) a.weight /= sum;
    ProbMeasure p(s, atoms);
    std::vector<BorelSetExpr> sets;
    for (int k = nsets(rng); k > 0; --k) {
      std::vector<int> idx;
      for (int i = 0; i < 8; ++i)
        if (u(rng) < 0.5) idx.push_back(i);
      sets.push_back(BorelSetExpr::points(s, idx));
    }
    CHECK(inclusion_exclusion_transfer({p}, sets));
  }
}

TEST_CASE("inclusion-exclusion rejects more than 10 sets") {
  SpaceRef s = MetricSpace::discrete({"a"});
  ProbMeasure p = ProbMeasure::dirac(s, Point::finite(0));
  std::vector<BorelSetExpr> sets(11, BorelSetExpr::whole(s));
  CHECK_THROWS_AS(inclusion_exclusion_transfer({p}, sets), DomainError);
}
