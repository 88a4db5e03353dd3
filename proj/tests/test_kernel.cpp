#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bk/kernel.hpp"

using namespace bk;

namespace {

const double kSqrt2 = std::sqrt(2.0);

SpaceRef labeled(int n, const char* prefix) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::string(prefix) + std::to_string(i));
  return MetricSpace::discrete(labels);
}

/// Random joint kernel on finite n1 x n2 with np parameters.
JointKernel random_joint(std::mt19937_64& rng, int n1, int n2, int np, bool allow_nulls) {
  SpaceRef s1 = labeled(n1, "u");
  SpaceRef s2 = labeled(n2, "v");
  SpaceRef s3 = labeled(np, "p");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> params;
  std::vector<std::vector<JointKernel::JointAtom>> table;
  for (int p = 0; p < np; ++p) {
    params.push_back(Point::finite(p));
    std::vector<JointKernel::JointAtom> atoms;
    double sum = 0.0;
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        double w = u(rng);
        if (allow_nulls && u(rng) < 0.3) w = 0.0;
        atoms.push_back({Point::finite(i), Point::finite(j), w});
        sum += w;
      }
    if (sum == 0.0) {
      atoms[0].weight = 1.0;
      sum = 1.0;
    }
    for (auto& a : atoms) a.weight /= sum;
    table.push_back(std::move(atoms));
  }
  return JointKernel(s1, s2, s3, std::move(params), std::move(table));
}

ParamPath harmonic_path(int n) {
  ParamPath path;
  for (int i = 1; i <= n; ++i) path.sequence.push_back(Point::real(1.0 / i));
  path.limit = Point::real(0.0);
  return path;
}

}  // namespace

TEST_CASE("marginal of a product joint recovers the second factor") {
  SpaceRef s1 = labeled(2, "u");
  SpaceRef s2 = labeled(2, "v");
  SpaceRef s3 = labeled(1, "p");
  // mu = (0.3, 0.7), nu = (0.4, 0.6)
  std::vector<JointKernel::JointAtom> atoms;
  double mu[] = {0.3, 0.7}, nu[] = {0.4, 0.6};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      atoms.push_back({Point::finite(i), Point::finite(j), mu[i] * nu[j]});
  JointKernel joint(s1, s2, s3, {Point::finite(0)}, {atoms});
  StochasticKernel m = marginal(joint);
  CHECK(m.at(Point::finite(0)).weight_of_index(0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(m.at(Point::finite(0)).weight_of_index(1) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("marginal of the shifted-point kernel is the unit mass at 1") {
  JointKernel joint = shifted_point_joint_kernel(5);
  StochasticKernel m = marginal(joint);
  for (const Point& p : joint.params())
    CHECK(m.at(p).weight_of_index(0) == doctest::Approx(1.0));
}

TEST_CASE("marginal equals column sums on random joints") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    JointKernel joint = random_joint(rng, 2, 2, 2, false);
    StochasticKernel m = marginal(joint);
    for (std::size_t pi = 0; pi < joint.params().size(); ++pi) {
      std::vector<double> cols(2, 0.0);
      for (const auto& a : joint.table()[pi]) cols[static_cast<std::size_t>(a.b.index)] += a.weight;
      for (int j = 0; j < 2; ++j)
        CHECK(m.at(joint.params()[pi]).weight_of_index(j) ==
              doctest::Approx(cols[static_cast<std::size_t>(j)]).epsilon(1e-12));
    }
  }
}

TEST_CASE("disintegration of the shifted-point kernel is the shifted point mass") {
  JointKernel joint = shifted_point_joint_kernel(8);
  Disintegration d = disintegrate(joint);
  for (std::size_t pi = 0; pi < d.params.size(); ++pi) {
    double s = d.params[pi].coord;
    REQUIRE(d.entries[pi].size() == 1);
    const DisintegrationEntry& e = d.entries[pi][0];
    CHECK(!e.null_convention);
    BorelSetExpr hit = BorelSetExpr::interval(kSqrt2 + s - 0.25, kSqrt2 + s + 0.25, false, false);
    BorelSetExpr miss = BorelSetExpr::interval(-1.0, 0.0, false, false);
    CHECK(measure_of_set(e.conditional, hit) == doctest::Approx(1.0));
    CHECK(measure_of_set(e.conditional, miss) == doctest::Approx(0.0));
  }
}

TEST_CASE("disintegration of an independent joint returns the first marginal") {
  SpaceRef s1 = labeled(3, "u");
  SpaceRef s2 = labeled(2, "v");
  SpaceRef s3 = labeled(1, "p");
  double mu[] = {0.2, 0.3, 0.5}, nu[] = {0.6, 0.4};
  std::vector<JointKernel::JointAtom> atoms;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j)
      atoms.push_back({Point::finite(i), Point::finite(j), mu[i] * nu[j]});
  JointKernel joint(s1, s2, s3, {Point::finite(0)}, {atoms});
  Disintegration d = disintegrate(joint);
  for (const DisintegrationEntry& e : d.entries[0])
    for (int i = 0; i < 3; ++i)
      CHECK(e.conditional.weight_of_index(i) ==
            doctest::Approx(mu[static_cast<std::size_t>(i)]).epsilon(1e-12));
}

TEST_CASE("disintegration reconstructs random joints on non-null atoms") {
  std::mt19937_64 rng(4711);
  for (int trial = 0; trial < 60; ++trial) {
    int n1 = 2 + static_cast<int>(rng() % 7);
    int n2 = 2 + static_cast<int>(rng() % 7);
    int np = 1 + static_cast<int>(rng() % 8);
    JointKernel joint = random_joint(rng, n1, n2, np, true);
    StochasticKernel m = marginal(joint);
    Disintegration d = disintegrate(joint);
    for (std::size_t pi = 0; pi < joint.params().size(); ++pi) {
      // P(B x C) = sum_{s2 in C} H(B|s2) P'({s2}) for all singleton B, C
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
          double direct = joint.mass(static_cast<int>(pi),
                                     BorelSetExpr::points(joint.s1(), {i}),
                                     BorelSetExpr::points(joint.s2(), {j}));
          double rebuilt = 0.0;
          for (const DisintegrationEntry& e : d.entries[pi])
            if (e.s2.index == j && !e.null_convention)
              rebuilt += measure_of_set(e.conditional, BorelSetExpr::points(joint.s1(), {i})) *
                         m.at(joint.params()[pi]).weight_of_index(j);
          double pprime = m.at(joint.params()[pi]).weight_of_index(j);
          if (pprime > 0.0) CHECK(direct == doctest::Approx(rebuilt).epsilon(1e-12));
        }
    }
  }
}

TEST_CASE("equicontinuity of the shifted-point kernel on the whole line") {
  JointKernel joint = shifted_point_joint_kernel(15);
  EquicontinuityReport r = equicontinuity_diagnostic(
      joint, BorelSetExpr::intervals({Interval{}}), harmonic_path(15));
  CHECK(r.worst_deviation == doctest::Approx(0.0));
  CHECK(r.equicontinuous);
}

TEST_CASE("equicontinuity fails on the punctured line") {
  JointKernel joint = shifted_point_joint_kernel(15);
  BorelSetExpr punctured = BorelSetExpr::singleton_real(kSqrt2).complement();
  EquicontinuityReport r = equicontinuity_diagnostic(joint, punctured, harmonic_path(15));
  CHECK(!r.equicontinuous);
  for (double dev : r.sup_deviations) CHECK(dev == doctest::Approx(1.0));
  CHECK(!r.worst_witness.empty());
}

TEST_CASE("constant joints have zero deviation for every set") {
  SpaceRef s1 = labeled(2, "u");
  SpaceRef s2 = labeled(2, "v");
  SpaceRef s3 = MetricSpace::real_line();
  std::vector<JointKernel::JointAtom> atoms = {
      {Point::finite(0), Point::finite(0), 0.25},
      {Point::finite(0), Point::finite(1), 0.25},
      {Point::finite(1), Point::finite(0), 0.5}};
  std::vector<Point> params;
  std::vector<std::vector<JointKernel::JointAtom>> table;
  for (int n = 1; n <= 10; ++n) {
    params.push_back(Point::real(1.0 / n));
    table.push_back(atoms);
  }
  params.push_back(Point::real(0.0));
  table.push_back(atoms);
  JointKernel joint(s1, s2, s3, std::move(params), std::move(table));
  EquicontinuityReport r =
      equicontinuity_diagnostic(joint, BorelSetExpr::points(s1, {0}), harmonic_path(10));
  CHECK(r.worst_deviation == doctest::Approx(0.0));
  CHECK(r.equicontinuous);
}

TEST_CASE("whole-space deviation equals half the marginal tv distance") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 30; ++trial) {
    JointKernel joint = random_joint(rng, 3, 3, 4, false);
    StochasticKernel m = marginal(joint);
    ParamPath path;
    path.sequence = {Point::finite(0), Point::finite(1), Point::finite(2)};
    path.limit = Point::finite(3);
    EquicontinuityReport r =
        equicontinuity_diagnostic(joint, BorelSetExpr::whole(joint.s1()), path);
    for (std::size_t i = 0; i < path.sequence.size(); ++i) {
      double tv = tv_distance(m.at(path.sequence[i]), m.at(path.limit));
      CHECK(r.sup_deviations[i] == doctest::Approx(tv / 2.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernel continuity: shifted point masses by mode") {
  SpaceRef target = MetricSpace::real_line();
  SpaceRef pspace = MetricSpace::real_line();
  std::vector<Point> params;
  std::vector<ProbMeasure> images;
  for (int n = 1; n <= 60; ++n) {
    params.push_back(Point::real(1.0 / n));
    images.push_back(ProbMeasure::dirac_real(kSqrt2 + 1.0 / n));
  }
  params.push_back(Point::real(0.0));
  images.push_back(ProbMeasure::dirac_real(kSqrt2));
  StochasticKernel k(target, pspace, params, images);
  ParamPath path = harmonic_path(60);

  ConvergenceReport weak = kernel_continuity_diagnostic(k, "weak", path);
  CHECK(weak.consistent);
  ConvergenceReport setwise = kernel_continuity_diagnostic(
      k, "setwise", path, {BorelSetExpr::singleton_real(kSqrt2)});
  CHECK(!setwise.consistent);
  ConvergenceReport tv = kernel_continuity_diagnostic(k, "tv", path);
  CHECK(!tv.consistent);  // tv distance stays 2 along the path
}

TEST_CASE("kernel continuity: constant kernel passes every mode") {
  SpaceRef target = labeled(2, "u");
  SpaceRef pspace = MetricSpace::real_line();
  ProbMeasure img(target, {{Point::finite(0), 0.5}, {Point::finite(1), 0.5}});
  std::vector<Point> params;
  std::vector<ProbMeasure> images;
  for (int n = 1; n <= 20; ++n) {
    params.push_back(Point::real(1.0 / n));
    images.push_back(img);
  }
  params.push_back(Point::real(0.0));
  images.push_back(img);
  StochasticKernel k(target, pspace, params, images);
  ParamPath path = harmonic_path(20);
  for (const char* mode : {"weak", "setwise", "tv"})
    CHECK(kernel_continuity_diagnostic(k, mode, path).consistent);
}

TEST_CASE("kernel continuity: linear mixing has closed-form tv deviations") {
  SpaceRef target = labeled(3, "u");
  SpaceRef pspace = MetricSpace::real_line();
  // K(|s) = (1-s) * p0 + s * p1
  double p0[] = {0.2, 0.3, 0.5}, p1[] = {0.5, 0.1, 0.4};
  double l1 = 0.0;
  for (int i = 0; i < 3; ++i) l1 += std::abs(p1[i] - p0[i]);
  std::vector<Point> params;
  std::vector<ProbMeasure> images;
  auto mix = [&](double s) {
    std::vector<WeightedAtom> atoms;
    for (int i = 0; i < 3; ++i)
      atoms.push_back({Point::finite(i), (1.0 - s) * p0[i] + s * p1[i]});
    return ProbMeasure(target, atoms);
  };
  for (int n = 1; n <= 30; ++n) {
    double s = 1.0 / n;
    params.push_back(Point::real(s));
    images.push_back(mix(s));
  }
  params.push_back(Point::real(0.0));
  images.push_back(mix(0.0));
  StochasticKernel k(target, pspace, params, images);
  for (int n = 1; n <= 30; ++n) {
    double s = 1.0 / n;
    CHECK(tv_distance(k.at(Point::real(s)), k.at(Point::real(0.0))) ==
          doctest::Approx(s * l1).epsilon(1e-12));
  }
  CHECK(kernel_continuity_diagnostic(k, "tv", harmonic_path(30)).consistent);
}

TEST_CASE("kernel continuity rejects a path limit outside the parameter set") {
  SpaceRef target = labeled(2, "u");
  StochasticKernel k(target, MetricSpace::real_line(), {Point::real(1.0)},
                     {ProbMeasure::dirac(target, Point::finite(0))});
  ParamPath path{{Point::real(1.0)}, Point::real(0.5)};
  CHECK_THROWS_AS(kernel_continuity_diagnostic(k, "weak", path), DomainError);
}

TEST_CASE("product base diagnostic accepts the shifted-point kernel") {
  JointKernel joint = shifted_point_joint_kernel(60);
  ParamPath path = harmonic_path(60);
  BaseFamily base1{{BorelSetExpr::interval(1.0, 2.0, false, false),
                    BorelSetExpr::interval(1.2, 3.0, false, false),
                    BorelSetExpr::interval(0.0, 1.2, false, false)},
                   false};
  BaseFamily base2{{BorelSetExpr::whole(joint.s2())}, false};
  ConvergenceReport r = product_base_weak_diagnostic(joint, base1, base2, path);
  CHECK(r.consistent);
}

TEST_CASE("product base diagnostic flags a jumping kernel") {
  SpaceRef s1 = labeled(2, "u");
  SpaceRef s2 = labeled(1, "v");
  SpaceRef s3 = MetricSpace::real_line();
  std::vector<Point> params;
  std::vector<std::vector<JointKernel::JointAtom>> table;
  for (int n = 1; n <= 20; ++n) {
    params.push_back(Point::real(1.0 / n));
    // alternates between the two product corners, never settling
    int corner = n % 2;
    table.push_back({{Point::finite(corner), Point::finite(0), 1.0}});
  }
  params.push_back(Point::real(0.0));
  table.push_back({{Point::finite(0), Point::finite(0), 1.0}});
  JointKernel joint(s1, s2, s3, std::move(params), std::move(table));
  BaseFamily base1{{BorelSetExpr::points(s1, {0}), BorelSetExpr::points(s1, {1})}, false};
  BaseFamily base2{{BorelSetExpr::whole(s2)}, false};
  ConvergenceReport r = product_base_weak_diagnostic(joint, base1, base2, harmonic_path(20));
  CHECK(!r.consistent);
  CHECK(r.first_violation() != nullptr);
}
