#include "bk/convergence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace bk {

namespace {

constexpr int kCantorGridLevel = 12;  // triadic depth of the Cantor iterate grid

std::int64_t pow3(int p) {
  std::int64_t r = 1;
  while (p-- > 0) r *= 3;
  return r;
}

struct SampledValues {
  std::vector<double> values;  // index n = 1..n_max
  std::size_t tail_begin = 0;  // first index (0-based) of the tail window
};

SampledValues sample(const MeasureSequence& seq, const BorelSetExpr& B,
                     const ConvergenceOptions& opt) {
  if (seq.n_max < 1) throw DomainError("sequence horizon must be at least 1");
  SampledValues s;
  for (int n = 1; n <= seq.n_max; ++n) s.values.push_back(measure_of(seq.generator(n), B));
  std::size_t tail =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::ceil(opt.tail_fraction * s.values.size())));
  s.tail_begin = s.values.size() - tail;
  return s;
}

double tail_min(const SampledValues& s) {
  return *std::min_element(s.values.begin() + static_cast<long>(s.tail_begin), s.values.end());
}

double tail_max(const SampledValues& s) {
  return *std::max_element(s.values.begin() + static_cast<long>(s.tail_begin), s.values.end());
}

// Decay rule for "values converge to target": the tail-window deviation must
// drop below tolerance or to at most half of the head-window deviation.
bool deviations_decay(const std::vector<double>& dev, std::size_t tail_begin, double tol) {
  std::size_t head = std::max<std::size_t>(1, dev.size() - tail_begin);
  double head_max = 0.0, tail_max_dev = 0.0;
  for (std::size_t i = 0; i < head && i < dev.size(); ++i) head_max = std::max(head_max, dev[i]);
  for (std::size_t i = tail_begin; i < dev.size(); ++i) tail_max_dev = std::max(tail_max_dev, dev[i]);
  return tail_max_dev <= std::max(tol, 0.5 * head_max);
}

std::string window_string(const SampledValues& s) {
  std::ostringstream os;
  os << "indices " << (s.tail_begin + 1) << ".." << s.values.size();
  return os.str();
}

void finalize(ConvergenceReport& r) {
  for (const auto& c : r.checks)
    if (c.violated) r.consistent = false;
}

}  // namespace

double measure_of(const MeasureLike& m, const BorelSetExpr& B) {
  if (const auto* p = std::get_if<ProbMeasure>(&m)) return measure_of_set(*p, B);
  return std::get<DistributionFunction>(m).measure_of(B);
}

SpaceRef space_of(const MeasureLike& m) {
  if (const auto* p = std::get_if<ProbMeasure>(&m)) return p->space();
  return MetricSpace::real_line();
}

ConvergenceReport portmanteau_weak_check(const MeasureSequence& seq,
                                         const std::vector<BorelSetExpr>& opens,
                                         const std::vector<BorelSetExpr>& closeds,
                                         const ConvergenceOptions& opt) {
  if (opens.empty() && closeds.empty())
    throw DomainError("portmanteau_weak_check needs at least one set");
  ConvergenceReport r;
  r.mode = "weak";
  for (const BorelSetExpr& O : opens) {
    SampledValues s = sample(seq, O, opt);
    SetCheck c;
    c.set_label = "open " + O.describe();
    c.limit_value = measure_of(seq.limit, O);
    c.liminf_estimate = tail_min(s);
    c.limsup_estimate = tail_max(s);
    if (c.liminf_estimate < c.limit_value - opt.tol) {
      c.violated = true;
      std::ostringstream os;
      os << "liminf estimate " << c.liminf_estimate << " < P(O) = " << c.limit_value
         << " over " << window_string(s);
      c.witness = os.str();
    }
    r.checks.push_back(std::move(c));
  }
  for (const BorelSetExpr& C : closeds) {
    SampledValues s = sample(seq, C, opt);
    SetCheck c;
    c.set_label = "closed " + C.describe();
    c.limit_value = measure_of(seq.limit, C);
    c.liminf_estimate = tail_min(s);
    c.limsup_estimate = tail_max(s);
    if (c.limsup_estimate > c.limit_value + opt.tol) {
      c.violated = true;
      std::ostringstream os;
      os << "limsup estimate " << c.limsup_estimate << " > P(C) = " << c.limit_value
         << " over " << window_string(s);
      c.witness = os.str();
    }
    r.checks.push_back(std::move(c));
  }
  finalize(r);
  return r;
}

ConvergenceReport cdf_weak_check(const MeasureSequence& seq,
                                 const std::vector<double>& probe_points,
                                 const ConvergenceOptions& opt) {
  const auto* limit_df = std::get_if<DistributionFunction>(&seq.limit);
  DistributionFunction limit =
      limit_df ? *limit_df : cdf_of_measure(std::get<ProbMeasure>(seq.limit));
  ConvergenceReport r;
  r.mode = "cdf";
  for (double x : probe_points) {
    SetCheck c;
    std::ostringstream lbl;
    lbl.precision(12);
    lbl << "probe x=" << x;
    double jump = limit.value(x) - limit.left_limit(x);
    if (std::abs(jump) > opt.tol) {
      c.set_label = lbl.str() + " (jump point of limit, excluded)";
      c.limit_value = limit.value(x);
      r.checks.push_back(std::move(c));
      continue;
    }
    c.set_label = lbl.str();
    c.limit_value = limit.value(x);
    std::vector<double> dev, vals;
    for (int n = 1; n <= seq.n_max; ++n) {
      MeasureLike term = seq.generator(n);
      const auto* df = std::get_if<DistributionFunction>(&term);
      double v = df ? df->value(x) : cdf_of_measure(std::get<ProbMeasure>(term)).value(x);
      vals.push_back(v);
      dev.push_back(std::abs(v - c.limit_value));
    }
    std::size_t tail =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(opt.tail_fraction * vals.size())));
    std::size_t tail_begin = vals.size() - tail;
    c.liminf_estimate = *std::min_element(vals.begin() + static_cast<long>(tail_begin), vals.end());
    c.limsup_estimate = *std::max_element(vals.begin() + static_cast<long>(tail_begin), vals.end());
    if (!deviations_decay(dev, tail_begin, opt.tol)) {
      c.violated = true;
      std::ostringstream os;
      os << "F_n(x) deviation from F(x)=" << c.limit_value << " does not decay; tail window "
         << "deviation " << *std::max_element(dev.begin() + static_cast<long>(tail_begin), dev.end());
      c.witness = os.str();
    }
    r.checks.push_back(std::move(c));
  }
  finalize(r);
  return r;
}

ConvergenceReport setwise_check(const MeasureSequence& seq,
                                const std::vector<BorelSetExpr>& sets,
                                const ConvergenceOptions& opt) {
  if (sets.empty()) throw DomainError("setwise_check needs at least one set");
  ConvergenceReport r;
  r.mode = "setwise";
  for (const BorelSetExpr& B : sets) {
    SampledValues s = sample(seq, B, opt);
    SetCheck c;
    c.set_label = B.describe();
    c.limit_value = measure_of(seq.limit, B);
    c.liminf_estimate = tail_min(s);
    c.limsup_estimate = tail_max(s);
    std::vector<double> dev;
    for (double v : s.values) dev.push_back(std::abs(v - c.limit_value));
    if (!deviations_decay(dev, s.tail_begin, opt.tol)) {
      c.violated = true;
      std::ostringstream os;
      os.precision(12);
      os << "P_n(B) stays away from P(B) = " << c.limit_value << "; tail window values in ["
         << c.liminf_estimate << ", " << c.limsup_estimate << "] over " << window_string(s);
      c.witness = os.str();
    }
    r.checks.push_back(std::move(c));
  }
  finalize(r);
  return r;
}

ConvergenceReport base_criterion_weak(const MeasureSequence& seq, const BaseFamily& base,
                                      std::size_t union_arity, const ConvergenceOptions& opt) {
  if (base.members.empty()) throw DomainError("base family is empty");
  for (const auto& m : base.members)
    if (!m.is_open()) throw DomainError("base member is not open: " + m.describe());
  // enumerate all unions of at most union_arity members
  std::vector<BorelSetExpr> unions;
  const std::size_t n = base.members.size();
  auto recurse = [&](auto&& self, std::size_t start, const BorelSetExpr& acc,
                     std::size_t depth) -> void {
    if (unions.size() >= opt.composite_set_cap) {
      std::ostringstream os;
      os << "union enumeration exceeds cap of " << opt.composite_set_cap << " composite sets";
      throw DomainError(os.str());
    }
    unions.push_back(acc);
    if (depth == union_arity) return;
    for (std::size_t i = start; i < n; ++i)
      self(self, i + 1, acc.set_union(base.members[i]), depth + 1);
  };
  for (std::size_t i = 0; i < n; ++i) recurse(recurse, i + 1, base.members[i], 1);

  ConvergenceReport r = portmanteau_weak_check(seq, unions, {}, opt);
  r.mode = "weak(base)";
  return r;
}

ConvergenceReport base_criterion_setwise(const MeasureSequence& seq, const BaseFamily& base,
                                         const std::vector<ClosedCover>& closed_covers,
                                         const ConvergenceOptions& opt) {
  ConvergenceReport r;
  r.mode = "setwise(base)";
  if (!base.members.empty()) {
    ConvergenceReport weak = base_criterion_weak(seq, base, 2, opt);
    for (auto& c : weak.checks) r.checks.push_back(std::move(c));
  }
  for (const ClosedCover& cc : closed_covers) {
    if (cc.cover_prefix.size() > opt.composite_set_cap)
      throw DomainError("cover prefix exceeds composite set cap");
    BorelSetExpr partial = BorelSetExpr::empty(cc.closed_set.space());
    double limit_closed = measure_of(seq.limit, cc.closed_set);
    std::size_t j = 0;
    for (const BorelSetExpr& Bi : cc.cover_prefix) {
      if (!Bi.subset_of(cc.closed_set))
        throw DomainError("cover prefix member is not inside its closed set: " + Bi.describe());
      partial = partial.set_union(Bi);
      ++j;
      SampledValues s = sample(seq, partial, opt);
      SetCheck c;
      std::ostringstream lbl;
      lbl << "partial union B_1..B_" << j << " of " << cc.closed_set.describe();
      c.set_label = lbl.str();
      c.limit_value = measure_of(seq.limit, partial);
      c.liminf_estimate = tail_min(s);
      c.limsup_estimate = tail_max(s);
      std::vector<double> dev;
      for (double v : s.values) dev.push_back(std::abs(v - c.limit_value));
      if (!deviations_decay(dev, s.tail_begin, opt.tol)) {
        c.violated = true;
        std::ostringstream os;
        os.precision(12);
        os << "P_n of partial union does not approach " << c.limit_value
           << "; tail window values in [" << c.liminf_estimate << ", " << c.limsup_estimate << "]";
        c.witness = os.str();
      }
      r.checks.push_back(std::move(c));
    }
    // coverage deficit at prefix level, reported but not a violation by itself
    SetCheck cov;
    cov.set_label = "coverage of " + cc.closed_set.describe();
    cov.limit_value = limit_closed - measure_of(seq.limit, partial);
    std::ostringstream os;
    os.precision(12);
    os << "mass deficit P(C) - P(union of prefix) = " << cov.limit_value;
    cov.witness = os.str();
    r.checks.push_back(std::move(cov));
  }
  finalize(r);
  return r;
}

bool inclusion_exclusion_transfer(const std::vector<ProbMeasure>& measures,
                                  const std::vector<BorelSetExpr>& sets, double tol) {
  const std::size_t k = sets.size();
  if (k > 10) throw DomainError("inclusion_exclusion_transfer supports at most 10 sets");
  if (k == 0) return true;
  const std::size_t full = (std::size_t{1} << k);
  // composite sets per nonempty mask
  std::vector<BorelSetExpr> inter(full), uni(full);
  for (std::size_t mask = 1; mask < full; ++mask) {
    std::size_t low = mask & (mask - 1);
    std::size_t bit = 0;
    while (!((mask >> bit) & 1u)) ++bit;
    if (low == 0) {
      inter[mask] = sets[bit];
      uni[mask] = sets[bit];
    } else {
      inter[mask] = inter[low].set_intersection(sets[bit]);
      uni[mask] = uni[low].set_union(sets[bit]);
    }
  }
  for (const ProbMeasure& m : measures) {
    std::vector<double> iv(full, 0.0), uv(full, 0.0);
    for (std::size_t mask = 1; mask < full; ++mask) {
      iv[mask] = measure_of_set(m, inter[mask]);
      uv[mask] = measure_of_set(m, uni[mask]);
    }
    for (std::size_t mask = 1; mask < full; ++mask) {
      // |union over mask| reconstructed from intersection values
      double recon = 0.0;
      for (std::size_t sub = mask; sub; sub = (sub - 1) & mask)
        recon += (std::popcount(sub) % 2 == 1 ? 1.0 : -1.0) * iv[sub];
      if (std::abs(recon - uv[mask]) > tol) return false;
    }
  }
  return true;
}

namespace {

// F_n at the triadic rational m / 3^p, as an exact int64 fraction
struct Frac {
  std::int64_t num, den;
};

Frac cantor_iterate_value(int n, std::int64_t m, int p) {
  if (m <= 0) return {0, 1};
  if (m >= pow3(p)) return {1, 1};
  if (n == 0) return {m, pow3(p)};
  std::int64_t third = pow3(p - 1);
  if (m < third) {
    Frac r = cantor_iterate_value(n - 1, m, p - 1);
    return {r.num, 2 * r.den};
  }
  if (m <= 2 * third) return {1, 2};
  Frac r = cantor_iterate_value(n - 1, m - 2 * third, p - 1);
  return {r.den + r.num, 2 * r.den};
}

// numerators (at denominator 3^level) of the level-k Cantor interval endpoints,
// scaled to the common grid denominator 3^kCantorGridLevel
std::vector<std::int64_t> cantor_endpoint_numerators(int k) {
  std::vector<std::pair<std::int64_t, std::int64_t>> ivs = {{0, 1}};  // at scale 3^0
  for (int level = 0; level < k; ++level) {
    std::vector<std::pair<std::int64_t, std::int64_t>> next;
    for (auto [a, b] : ivs) {
      next.push_back({3 * a, 3 * a + 1});
      next.push_back({3 * b - 1, 3 * b});
    }
    ivs = std::move(next);
  }
  std::int64_t scale = pow3(kCantorGridLevel - k);
  std::vector<std::int64_t> nums;
  for (auto [a, b] : ivs) {
    nums.push_back(a * scale);
    nums.push_back(b * scale);
  }
  return nums;
}

}  // namespace

DistributionFunction cantor_sequence(int n) {
  if (n < 0) throw DomainError("cantor_sequence index must be nonnegative");
  if (n > kCantorGridLevel) throw DomainError("cantor_sequence supports n <= 12");
  const double grid_den = static_cast<double>(pow3(kCantorGridLevel));
  std::vector<std::int64_t> nums = cantor_endpoint_numerators(kCantorGridLevel);
  std::sort(nums.begin(), nums.end());
  nums.erase(std::unique(nums.begin(), nums.end()), nums.end());
  std::vector<std::pair<double, double>> nodes;
  for (std::int64_t m : nums) {
    Frac f = cantor_iterate_value(n, m, kCantorGridLevel);
    nodes.push_back({static_cast<double>(m) / grid_den,
                     static_cast<double>(f.num) / static_cast<double>(f.den)});
  }
  return DistributionFunction::piecewise_linear(nodes);
}

double cantor_function(double x) {
  const double eps = 1e-9;
  double result = 0.0, scale = 1.0;
  for (int i = 0; i < 200; ++i) {
    if (x <= eps) return result;
    if (x >= 1.0 - eps) return result + scale;
    if (x < 1.0 / 3.0 - eps) {
      scale *= 0.5;
      x *= 3.0;
    } else if (x <= 2.0 / 3.0 + eps) {
      return result + 0.5 * scale;
    } else {
      result += 0.5 * scale;
      scale *= 0.5;
      x = 3.0 * x - 2.0;
    }
  }
  return result + scale * x;
}

BorelSetExpr cantor_cover(int k) {
  if (k < 0 || k > kCantorGridLevel) throw DomainError("cantor_cover level must be in 0..12");
  const double grid_den = static_cast<double>(pow3(kCantorGridLevel));
  std::vector<std::int64_t> nums = cantor_endpoint_numerators(k);
  std::vector<Interval> ivs;
  for (std::size_t i = 0; i + 1 < nums.size(); i += 2)
    ivs.push_back(Interval{static_cast<double>(nums[i]) / grid_den,
                           static_cast<double>(nums[i + 1]) / grid_den, true, true});
  return BorelSetExpr::intervals(std::move(ivs));
}

ProbMeasure point_mass_sequence(int n) {
  if (n < 1) throw DomainError("point_mass_sequence index must be at least 1");
  return ProbMeasure::dirac_real(std::sqrt(2.0) + 1.0 / static_cast<double>(n));
}

MeasureSequence point_mass_measure_sequence(int n_max) {
  return MeasureSequence{[](int n) { return MeasureLike(point_mass_sequence(n)); },
                         MeasureLike(ProbMeasure::dirac_real(std::sqrt(2.0))), n_max};
}

MeasureSequence cantor_measure_sequence(int n_max, int limit_depth) {
  return MeasureSequence{[](int n) { return MeasureLike(cantor_sequence(n)); },
                         MeasureLike(cantor_sequence(limit_depth)), n_max};
}

}  // namespace bk
