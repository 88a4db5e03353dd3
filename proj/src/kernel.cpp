#include "bk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace bk {

namespace {

// ordering key usable in std::map for points of one space
struct PointKey {
  int index;
  double coord;
  bool operator<(const PointKey& o) const {
    if (index != o.index) return index < o.index;
    return coord < o.coord;
  }
};

PointKey key_of(const Point& p) { return PointKey{p.index, p.coord}; }

bool decays(const std::vector<double>& dev, double tol) {
  if (dev.empty()) return true;
  std::size_t tail = std::max<std::size_t>(1, (dev.size() + 3) / 4);
  double head_max = 0.0, tail_max = 0.0;
  for (std::size_t i = 0; i < tail && i < dev.size(); ++i) head_max = std::max(head_max, dev[i]);
  for (std::size_t i = dev.size() - tail; i < dev.size(); ++i) tail_max = std::max(tail_max, dev[i]);
  return tail_max <= std::max(tol, 0.5 * head_max);
}

}  // namespace

StochasticKernel::StochasticKernel(SpaceRef target, SpaceRef param_space,
                                   std::vector<Point> params, std::vector<ProbMeasure> images)
    : target_(std::move(target)),
      param_space_(std::move(param_space)),
      params_(std::move(params)),
      images_(std::move(images)) {
  if (params_.size() != images_.size())
    throw DomainError("kernel parameter/image count mismatch");
  for (const ProbMeasure& m : images_)
    if (!same_space(m.space(), target_))
      throw DomainError("kernel image lives on the wrong space");
}

int StochasticKernel::param_index(const Point& p) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (point_eq(*param_space_, params_[i], p)) return static_cast<int>(i);
  return -1;
}

const ProbMeasure& StochasticKernel::at(const Point& p) const {
  int i = param_index(p);
  if (i < 0) throw DomainError("parameter point not in kernel");
  return images_[static_cast<std::size_t>(i)];
}

JointKernel::JointKernel(SpaceRef s1, SpaceRef s2, SpaceRef param_space,
                         std::vector<Point> params, std::vector<std::vector<JointAtom>> table)
    : s1_(std::move(s1)),
      s2_(std::move(s2)),
      param_space_(std::move(param_space)),
      params_(std::move(params)),
      table_(std::move(table)) {
  if (params_.size() != table_.size())
    throw DomainError("joint kernel parameter/table count mismatch");
  for (const auto& atoms : table_) {
    double sum = 0.0;
    for (const auto& a : atoms) {
      if (a.weight < 0.0) throw DomainError("joint kernel weights must be nonnegative");
      sum += a.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw DomainError("joint kernel row must sum to 1");
  }
}

int JointKernel::param_index(const Point& p) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (point_eq(*param_space_, params_[i], p)) return static_cast<int>(i);
  return -1;
}

double JointKernel::mass(int param_idx, const BorelSetExpr& B, const BorelSetExpr& C) const {
  double s = 0.0;
  for (const auto& a : table_[static_cast<std::size_t>(param_idx)])
    if (B.contains(a.a) && C.contains(a.b)) s += a.weight;
  return s;
}

StochasticKernel marginal(const JointKernel& joint) {
  std::vector<ProbMeasure> images;
  for (const auto& atoms : joint.table()) {
    std::map<PointKey, double> agg;
    std::map<PointKey, Point> pts;
    for (const auto& a : atoms) {
      agg[key_of(a.b)] += a.weight;
      pts.emplace(key_of(a.b), a.b);
    }
    std::vector<WeightedAtom> w;
    for (const auto& [k, v] : agg) w.push_back({pts.at(k), v});
    images.emplace_back(joint.s2(), std::move(w));
  }
  return StochasticKernel(joint.s2(), joint.param_space(), joint.params(), std::move(images));
}

Disintegration disintegrate(const JointKernel& joint) {
  Disintegration out;
  out.params = joint.params();
  for (std::size_t pi = 0; pi < joint.params().size(); ++pi) {
    const auto& atoms = joint.table()[pi];
    // S1-marginal: the null-atom convention measure
    std::map<PointKey, double> s1_agg;
    std::map<PointKey, Point> s1_pts;
    for (const auto& a : atoms) {
      s1_agg[key_of(a.a)] += a.weight;
      s1_pts.emplace(key_of(a.a), a.a);
    }
    std::vector<WeightedAtom> s1_atoms;
    for (const auto& [k, v] : s1_agg) s1_atoms.push_back({s1_pts.at(k), v});
    ProbMeasure s1_marginal(joint.s1(), s1_atoms);

    // group joint atoms by S2 point
    std::map<PointKey, std::vector<WeightedAtom>> groups;
    std::map<PointKey, double> group_mass;
    std::map<PointKey, Point> s2_pts;
    for (const auto& a : atoms) {
      groups[key_of(a.b)].push_back({a.a, a.weight});
      group_mass[key_of(a.b)] += a.weight;
      s2_pts.emplace(key_of(a.b), a.b);
    }
    std::vector<DisintegrationEntry> entries;
    // for finite S2 spaces, include the null atoms too
    if (!joint.s2()->is_real_line()) {
      for (std::size_t i = 0; i < joint.s2()->size(); ++i) {
        Point p = Point::finite(static_cast<int>(i));
        PointKey k = key_of(p);
        if (!groups.count(k)) {
          s2_pts.emplace(k, p);
          groups[k] = {};
          group_mass[k] = 0.0;
        }
      }
    }
    for (auto& [k, g] : groups) {
      DisintegrationEntry e{s2_pts.at(k), s1_marginal, false};
      double mass = group_mass.at(k);
      if (mass > 0.0) {
        std::map<PointKey, double> cond;
        std::map<PointKey, Point> cond_pts;
        for (const auto& a : g) {
          cond[key_of(a.point)] += a.weight / mass;
          cond_pts.emplace(key_of(a.point), a.point);
        }
        std::vector<WeightedAtom> w;
        for (const auto& [ck, cv] : cond) w.push_back({cond_pts.at(ck), cv});
        e.conditional = ProbMeasure(joint.s1(), std::move(w));
      } else {
        e.null_convention = true;
      }
      entries.push_back(std::move(e));
    }
    out.entries.push_back(std::move(entries));
  }
  return out;
}

EquicontinuityReport equicontinuity_diagnostic(const JointKernel& joint, const BorelSetExpr& B,
                                               const ParamPath& path, double tol) {
  int limit_idx = joint.param_index(path.limit);
  if (limit_idx < 0) throw DomainError("path limit is not a kernel parameter");
  EquicontinuityReport rep;
  rep.family_label = "P_B with B = " + B.describe();
  for (const Point& s : path.sequence) {
    int idx = joint.param_index(s);
    if (idx < 0) throw DomainError("path point is not a kernel parameter");
    // signed measure on S2: C -> P(B x C|s) - P(B x C|limit)
    std::map<PointKey, double> diff;
    std::map<PointKey, Point> pts;
    auto add = [&](std::size_t pi, double sign) {
      for (const auto& a : joint.table()[pi])
        if (B.contains(a.a)) {
          diff[key_of(a.b)] += sign * a.weight;
          pts.emplace(key_of(a.b), a.b);
        }
    };
    add(static_cast<std::size_t>(idx), 1.0);
    add(static_cast<std::size_t>(limit_idx), -1.0);
    double pos = 0.0, neg = 0.0;
    std::vector<Point> pos_set, neg_set;
    for (const auto& [k, v] : diff) {
      if (v > 0.0) {
        pos += v;
        pos_set.push_back(pts.at(k));
      } else if (v < 0.0) {
        neg -= v;
        neg_set.push_back(pts.at(k));
      }
    }
    double sup = std::max(pos, neg);
    rep.sup_deviations.push_back(sup);
    if (sup > rep.worst_deviation) {
      rep.worst_deviation = sup;
      std::ostringstream os;
      os.precision(12);
      os << "sup " << sup << " attained on C = {";
      const auto& side = pos >= neg ? pos_set : neg_set;
      for (std::size_t i = 0; i < side.size(); ++i) {
        if (i) os << ", ";
        os << joint.s2()->point_label(side[i]);
      }
      os << "} at parameter " << joint.param_space()->point_label(s) << " vs "
         << joint.param_space()->point_label(path.limit);
      rep.worst_witness = os.str();
    }
  }
  rep.equicontinuous = decays(rep.sup_deviations, tol);
  return rep;
}

ConvergenceReport kernel_continuity_diagnostic(const StochasticKernel& kernel,
                                               const std::string& mode, const ParamPath& path,
                                               const std::vector<BorelSetExpr>& sets,
                                               const ConvergenceOptions& opt) {
  int limit_idx = kernel.param_index(path.limit);
  if (limit_idx < 0) throw DomainError("path limit outside the parameter set");
  for (const Point& s : path.sequence)
    if (kernel.param_index(s) < 0) throw DomainError("path point outside the parameter set");

  const ProbMeasure& limit = kernel.images()[static_cast<std::size_t>(limit_idx)];
  MeasureSequence seq{
      [&kernel, &path](int n) {
        return MeasureLike(kernel.at(path.sequence[static_cast<std::size_t>(n - 1)]));
      },
      MeasureLike(limit), static_cast<int>(path.sequence.size())};

  if (mode == "tv") {
    ConvergenceReport r;
    r.mode = "tv";
    SetCheck c;
    c.set_label = "tv distance to limit image";
    std::vector<double> dev;
    for (const Point& s : path.sequence) dev.push_back(tv_distance(kernel.at(s), limit));
    std::size_t tail = std::max<std::size_t>(1, (dev.size() + 3) / 4);
    c.liminf_estimate = *std::min_element(dev.end() - static_cast<long>(tail), dev.end());
    c.limsup_estimate = *std::max_element(dev.end() - static_cast<long>(tail), dev.end());
    if (!decays(dev, opt.tol)) {
      c.violated = true;
      std::ostringstream os;
      os.precision(12);
      os << "tv distance does not decay along the path; tail max " << c.limsup_estimate;
      c.witness = os.str();
    }
    bool violated = c.violated;
    r.checks.push_back(std::move(c));
    if (violated) r.consistent = false;
    return r;
  }

  std::vector<BorelSetExpr> probe_sets = sets;
  if (probe_sets.empty()) {
    if (kernel.target()->is_real_line()) {
      if (mode == "setwise") {
        // singletons of every support point seen along the path and limit
        std::map<double, bool> xs;
        for (const auto& a : limit.atoms()) xs[a.point.coord] = true;
        for (const Point& s : path.sequence)
          for (const auto& a : kernel.at(s).atoms()) xs[a.point.coord] = true;
        for (const auto& [x, _] : xs) probe_sets.push_back(BorelSetExpr::singleton_real(x));
      } else {
        // weak mode on the real line: CDF probes around the limit support
        std::vector<double> probes;
        for (const auto& a : limit.atoms()) {
          probes.push_back(a.point.coord - 0.125);
          probes.push_back(a.point.coord + 0.125);
        }
        ConvergenceReport r = cdf_weak_check(seq, probes, opt);
        r.mode = "weak";
        return r;
      }
    } else {
      for (std::size_t i = 0; i < kernel.target()->size(); ++i)
        probe_sets.push_back(BorelSetExpr::points(kernel.target(), {static_cast<int>(i)}));
    }
  }
  if (mode == "weak") return portmanteau_weak_check(seq, probe_sets, probe_sets, opt);
  if (mode == "setwise") return setwise_check(seq, probe_sets, opt);
  throw DomainError("unknown continuity mode: " + mode);
}

ConvergenceReport product_base_weak_diagnostic(const JointKernel& joint, const BaseFamily& base1,
                                               const BaseFamily& base2, const ParamPath& path,
                                               std::size_t arity, const ConvergenceOptions& opt) {
  int limit_idx = joint.param_index(path.limit);
  if (limit_idx < 0) throw DomainError("path limit is not a kernel parameter");

  auto intersections = [&](const BaseFamily& base) {
    std::vector<BorelSetExpr> out;
    const std::size_t n = base.members.size();
    auto recurse = [&](auto&& self, std::size_t start, const BorelSetExpr& acc,
                       std::size_t depth) -> void {
      if (out.size() >= opt.composite_set_cap)
        throw DomainError("intersection enumeration exceeds composite set cap");
      out.push_back(acc);
      if (depth == arity) return;
      for (std::size_t i = start; i < n; ++i)
        self(self, i + 1, acc.set_intersection(base.members[i]), depth + 1);
    };
    for (std::size_t i = 0; i < n; ++i) recurse(recurse, i + 1, base.members[i], 1);
    return out;
  };
  std::vector<BorelSetExpr> o1 = intersections(base1);
  std::vector<BorelSetExpr> o2 = intersections(base2);
  if (o1.size() * o2.size() > opt.composite_set_cap)
    throw DomainError("product rectangle count exceeds composite set cap");

  ConvergenceReport r;
  r.mode = "weak(product-base)";
  for (const BorelSetExpr& A : o1) {
    for (const BorelSetExpr& B : o2) {
      SetCheck c;
      c.set_label = A.describe() + " x " + B.describe();
      c.limit_value = joint.mass(limit_idx, A, B);
      std::vector<double> dev, vals;
      for (const Point& s : path.sequence) {
        double v = joint.mass(joint.param_index(s), A, B);
        vals.push_back(v);
        dev.push_back(std::abs(v - c.limit_value));
      }
      std::size_t tail = std::max<std::size_t>(1, (vals.size() + 3) / 4);
      c.liminf_estimate = *std::min_element(vals.end() - static_cast<long>(tail), vals.end());
      c.limsup_estimate = *std::max_element(vals.end() - static_cast<long>(tail), vals.end());
      if (!decays(dev, opt.tol)) {
        c.violated = true;
        std::ostringstream os;
        os.precision(12);
        os << "P(O1 x O2|s) not continuous along the path at rectangle " << c.set_label
           << "; limit value " << c.limit_value;
        c.witness = os.str();
      }
      r.checks.push_back(std::move(c));
    }
  }
  for (const auto& c : r.checks)
    if (c.violated) r.consistent = false;
  return r;
}

JointKernel shifted_point_joint_kernel(int n_params) {
  if (n_params < 1) throw DomainError("need at least one parameter");
  SpaceRef s1 = MetricSpace::real_line();
  SpaceRef s2 = MetricSpace::discrete({"1"});
  SpaceRef s3 = MetricSpace::real_line();
  std::vector<Point> params;
  std::vector<std::vector<JointKernel::JointAtom>> table;
  const double root2 = std::sqrt(2.0);
  for (int n = 1; n <= n_params; ++n) {
    double s = 1.0 / static_cast<double>(n);
    params.push_back(Point::real(s));
    table.push_back({JointKernel::JointAtom{Point::real(root2 + s), Point::finite(0), 1.0}});
  }
  params.push_back(Point::real(0.0));
  table.push_back({JointKernel::JointAtom{Point::real(root2), Point::finite(0), 1.0}});
  return JointKernel(std::move(s1), std::move(s2), std::move(s3), std::move(params),
                     std::move(table));
}

}  // namespace bk
