#include "selinf/reports.hpp"

#include <algorithm>

namespace selinf {

using nlohmann::json;

namespace {

std::string join_indices(const std::vector<int>& v) {
  const bool wide = std::any_of(v.begin(), v.end(), [](int x) { return x > 9; });
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (wide && i) s += ',';
    s += v[i] == 0 ? std::string(".") : std::to_string(v[i]);
  }
  return s;
}

json rationals(const std::vector<Rational>& v) {
  json arr = json::array();
  for (const auto& r : v) arr.push_back(r.str());
  return arr;
}

std::string assignment_str(const Assignment& a) {
  std::string s;
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (l) s += ' ';
    s += "h" + std::to_string(l + 1) + "=(" + join_indices(a[l]) + ")";
  }
  return s;
}

}  // namespace

std::string p_term(const OutcomeTuple& outcome, const Treatment& treatment) {
  return "p" + join_indices(outcome) + "|" + join_indices(treatment);
}

std::string order_distance_terms(const ExperimentDesign& design, const Treatment& treatment, std::size_t from,
                                 std::size_t to, const OrderRelation& order) {
  std::string s;
  for (int a = 1; a <= design.outcome_count(from); ++a) {
    for (int b = 1; b <= design.outcome_count(to); ++b) {
      if (!order.precedes({from, a}, {to, b})) continue;
      OutcomeTuple o(design.input_count(), 0);
      o[from] = a;
      o[to] = b;
      s += (s.empty() ? "" : " + ") + p_term(o, treatment);
    }
  }
  return s.empty() ? "0" : s;
}

json to_json(const ValidationReport& report) {
  static const char* const kinds[] = {"design",           "treatment-out-of-range", "duplicate-treatment",
                                      "missing-table",    "outcome-out-of-range",   "negative-probability",
                                      "mass-not-one"};
  json breaches = json::array();
  for (const auto& b : report.breaches) {
    breaches.push_back({{"kind", kinds[static_cast<int>(b.kind)]}, {"message", b.message}});
  }
  return {{"schema_version", kReportSchemaVersion}, {"valid", report.valid()}, {"breaches", breaches}};
}

json to_json(const MarginalReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    std::vector<std::size_t> subset;
    for (std::size_t l : v.subset) subset.push_back(l + 1);
    violations.push_back({{"subset", subset},
                          {"treatments", {v.first, v.second}},
                          {"max_discrepancy", v.max_discrepancy.str()}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"pass", report.pass()},
          {"comparisons", report.comparisons},
          {"violations", violations}};
}

json to_json(const LftVerdict& verdict) {
  json j{{"schema_version", kReportSchemaVersion},
         {"verdict", verdict.feasible() ? "feasible" : "infeasible"},
         {"rows", verdict.rows.size()},
         {"columns", verdict.columns.checked_size() ? json(*verdict.columns.checked_size()) : json(nullptr)},
         {"pivots", verdict.pivots}};
  if (verdict.feasible() && verdict.witness) {
    const auto& q = *verdict.witness;
    j["witness"] = rationals(q.values);
    json support = json::array();
    for (std::size_t c = 0; c < q.values.size(); ++c) {
      if (q.values[c].is_zero()) continue;
      support.push_back({{"index", c}, {"assignment", assignment_str(q.index.decode(c))}, {"weight", q.values[c].str()}});
    }
    j["legend"] = {{"ordering", "mixed radix over h1_1..h1_k1, ..., hn_1..hn_kn; h1_1 most significant"},
                   {"support", support}};
  } else {
    j["farkas"] = rationals(verdict.farkas);
    json rows = json::array();
    for (std::size_t r = 0; r < verdict.rows.size(); ++r) {
      const auto [t, o] = verdict.rows.decode(r);
      rows.push_back(p_term(o, t));
    }
    j["legend"] = {{"ordering", "treatment-major in sorted treatment order, outcome tuples lexicographic"},
                   {"rows", rows}};
  }
  return j;
}

json to_json(const ChainReport& report, const ExperimentDesign& design, const OrderRelation& order) {
  json records = json::array();
  for (const auto& rec : report.records) {
    json links = json::array();
    for (const auto& r : rec.realizations) {
      const auto& seq = rec.sequence;
      const InputPoint& a = r.link == 0 ? seq.front() : seq[r.link - 1];
      const InputPoint& b = r.link == 0 ? seq.back() : seq[r.link];
      links.push_back({{"link", r.link == 0 ? "lhs" : "rhs" + std::to_string(r.link)},
                       {"from", to_string(a)},
                       {"to", to_string(b)},
                       {"treatment", r.treatment},
                       {"expression", order_distance_terms(design, r.treatment, a.input, b.input, order)},
                       {"value", r.distance.str()}});
    }
    records.push_back({{"sequence", to_string(rec.sequence)},
                       {"lhs", rec.lhs.str()},
                       {"rhs", rec.rhs.str()},
                       {"slack", rec.slack.str()},
                       {"pass", rec.pass()},
                       {"realizations", links}});
  }
  return {{"schema_version", kReportSchemaVersion}, {"order", order.str()}, {"pass", report.pass()}, {"records", records}};
}

json to_json(const FineReport& report) {
  json inequalities = json::array();
  for (const auto& in : report.inequalities) {
    const auto& e = report.expressions[in.expression];
    inequalities.push_back({{"expression", e.text},
                            {"inequality", in.text},
                            {"bound", in.bound.str()},
                            {"value", e.value.str()},
                            {"pass", in.holds}});
  }
  return {{"schema_version", kReportSchemaVersion}, {"pass", report.pass()}, {"inequalities", inequalities}};
}

std::string verdict_name(CosphericityVerdict verdict) {
  switch (verdict) {
    case CosphericityVerdict::kPass: return "pass";
    case CosphericityVerdict::kMarginal: return "marginal";
    case CosphericityVerdict::kFail: return "fail";
  }
  return "fail";
}

json to_json(const CosphericityResult& result) {
  const auto& s = result.quad.selection;
  return {{"inputs", {s.first + 1, s.second + 1}},
          {"values", {{s.w1, s.w1p}, {s.w2, s.w2p}}},
          {"treatments", result.quad.treatments},
          {"rho", result.quad.rho},
          {"lhs", result.lhs},
          {"rhs", result.rhs},
          {"slack", result.slack},
          {"verdict", verdict_name(result.verdict)}};
}

json to_json(const CosphericityBattery& battery) {
  json results = json::array();
  for (const auto& r : battery.results) results.push_back(to_json(r));
  json skipped = json::array();
  for (const auto& [s, why] : battery.skipped) {
    skipped.push_back({{"inputs", {s.first + 1, s.second + 1}}, {"values", {{s.w1, s.w1p}, {s.w2, s.w2p}}}, {"reason", why}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"pass", battery.pass()},
          {"note", kCosphericityNote},
          {"results", results},
          {"skipped", skipped}};
}

}  // namespace selinf
