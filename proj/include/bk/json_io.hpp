#pragma once

#include <string>

#include <json.hpp>

#include "bk/convergence.hpp"
#include "bk/kernel.hpp"
#include "bk/mdmii.hpp"
#include "bk/pomdp.hpp"

namespace bk {

using Json = nlohmann::json;

/// Rounds to 12 significant digits so serialized output is stable; infinities
/// become the string sentinels "inf" / "-inf".
Json json_number(double v);
double number_from_json(const Json& j, const std::string& field);

/// Serialized with sorted keys and two-space indent, trailing newline.
std::string dump_json(const Json& j);

Json space_to_json(const SpaceRef& space);
SpaceRef space_from_json(const Json& j);

Json set_to_json(const BorelSetExpr& b);
BorelSetExpr set_from_json(const Json& j, const SpaceRef& space);

Json measure_to_json(const ProbMeasure& p);
ProbMeasure measure_from_json(const Json& j);

Json distribution_to_json(const DistributionFunction& f);
DistributionFunction distribution_from_json(const Json& j);

Json kernel_to_json(const StochasticKernel& k);
StochasticKernel kernel_from_json(const Json& j);

Json pomdp_to_json(const PomdpModel& m);
PomdpModel pomdp_from_json(const Json& j);

Json mdmii_to_json(const MdmiiModel& m);
MdmiiModel mdmii_from_json(const Json& j);

Json belief_to_json(const Belief& z);
Belief belief_from_json(const Json& j);

Json convergence_report_to_json(const ConvergenceReport& r);
Json equicontinuity_report_to_json(const EquicontinuityReport& r);
Json kinf_report_to_json(const KinfCompactReport& r);
Json mdmii_filter_report_to_json(const MdmiiFilterReport& r);
Json posterior_to_json(const Posterior& p);
Json finite_horizon_to_json(const FiniteHorizonSolution& s, const PomdpModel& m);
Json discounted_to_json(const DiscountedSolution& s, const PomdpModel& m);

}  // namespace bk
