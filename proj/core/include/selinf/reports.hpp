#pragma once

#include <nlohmann/json.hpp>

#include "selinf/cosphericity.hpp"
#include "selinf/distance.hpp"
#include "selinf/experiment.hpp"
#include "selinf/lft.hpp"

namespace selinf {

/// Version of every JSON report layout produced below.
inline constexpr int kReportSchemaVersion = 1;

/// Probability term in subscript notation: "p12|21" is Pr[A¹=1, A²=2]
/// under treatment (2,1). Outcome 0 marks an output summed out (".").
/// Indices are comma-separated when any exceeds 9.
std::string p_term(const OutcomeTuple& outcome, const Treatment& treatment);

/// Sum of p_term()s over the outcome pairs counted by the order-distance
/// from `from` to `to` under `treatment`, e.g. "p12|11".
std::string order_distance_terms(const ExperimentDesign& design, const Treatment& treatment, std::size_t from,
                                 std::size_t to, const OrderRelation& order);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const MarginalReport& report);
/// {"verdict", "witness" | "farkas", "legend", "pivots", ...}.
nlohmann::json to_json(const LftVerdict& verdict);
nlohmann::json to_json(const ChainReport& report, const ExperimentDesign& design, const OrderRelation& order);
nlohmann::json to_json(const FineReport& report);
nlohmann::json to_json(const CosphericityResult& result);
nlohmann::json to_json(const CosphericityBattery& battery);

std::string verdict_name(CosphericityVerdict verdict);

}  // namespace selinf
