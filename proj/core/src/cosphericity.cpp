#include "selinf/cosphericity.hpp"

#include <algorithm>
#include <cmath>

#include "selinf/distance.hpp"

namespace selinf {

const char* const kCosphericityNote =
    "necessary for selective influences; also sufficient when the outputs are bivariate normal";

ValueMap index_value_map(const ExperimentDesign& design) {
  ValueMap map(design.input_count());
  for (std::size_t l = 0; l < map.size(); ++l) {
    for (int a = 1; a <= design.outcome_count(l); ++a) map[l].push_back(a);
  }
  return map;
}

namespace {

std::string treatment_str(const Treatment& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

double pearson(const Table& table, std::size_t x, std::size_t y, const ValueMap& map, const Treatment& t) {
  double ex = 0, ey = 0, exx = 0, eyy = 0, exy = 0;
  for (const auto& [outcome, p] : table) {
    const double w = p.to_double();
    const double vx = map[x].at(static_cast<std::size_t>(outcome[x] - 1));
    const double vy = map[y].at(static_cast<std::size_t>(outcome[y] - 1));
    ex += w * vx;
    ey += w * vy;
    exx += w * vx * vx;
    eyy += w * vy * vy;
    exy += w * vx * vy;
  }
  const double var_x = exx - ex * ex;
  const double var_y = eyy - ey * ey;
  // Relative threshold so that rounding on a point mass is not mistaken for spread.
  auto degenerate = [](double var, double second_moment) { return var <= 1e-14 * std::max(1.0, second_moment); };
  for (auto [l, var, m2] : {std::tuple{x, var_x, exx}, std::tuple{y, var_y, eyy}}) {
    if (degenerate(var, m2)) {
      throw InvalidInput("output " + std::to_string(l + 1) + " has zero variance under treatment " +
                         treatment_str(t));
    }
  }
  return std::clamp((exy - ex * ey) / std::sqrt(var_x * var_y), -1.0, 1.0);
}

}  // namespace

CorrelationQuad correlations_from_dataset(const Dataset& dataset, const ValueMap& value_map,
                                          const QuadSelection& s) {
  const auto& design = dataset.design;
  if (s.first >= design.input_count() || s.second >= design.input_count() || s.first == s.second) {
    throw InvalidInput("correlation quad needs two distinct inputs of the design");
  }
  if (value_map.size() != design.input_count()) throw InvalidInput("value map has the wrong number of outputs");
  for (std::size_t l = 0; l < value_map.size(); ++l) {
    if (static_cast<int>(value_map[l].size()) != design.outcome_count(l)) {
      throw InvalidInput("value map for output " + std::to_string(l + 1) + " does not cover its outcomes");
    }
  }
  auto check_value = [&](std::size_t input, int w) {
    if (w < 1 || w > design.value_count(input)) throw InvalidInput("value index out of range in quad selection");
  };
  check_value(s.first, s.w1);
  check_value(s.first, s.w1p);
  check_value(s.second, s.w2);
  check_value(s.second, s.w2p);

  CorrelationQuad quad;
  quad.selection = s;
  const std::array<std::pair<int, int>, 4> pairs = {{{s.w1, s.w2}, {s.w1, s.w2p}, {s.w1p, s.w2}, {s.w1p, s.w2p}}};
  for (std::size_t i = 0; i < 4; ++i) {
    const InputPoint a{s.first, pairs[i].first};
    const InputPoint b{s.second, pairs[i].second};
    const auto realizing = realizing_treatments(design, {a, b});
    if (realizing.empty()) {
      throw InvalidInput("points " + to_string(a) + " and " + to_string(b) + " never occur in the same treatment");
    }
    quad.treatments[i] = realizing.front();
    quad.rho[i] = pearson(dataset.table(realizing.front()), s.first, s.second, value_map, realizing.front());
  }
  return quad;
}

CosphericityResult cosphericity_test(const CorrelationQuad& quad, double tol) {
  for (double r : quad.rho) {
    if (!(std::abs(r) <= 1 + tol)) throw InvalidInput("correlation " + std::to_string(r) + " outside [-1, 1]");
  }
  auto co = [](double r) { return std::sqrt(std::max(0.0, 1 - r * r)); };
  const auto& p = quad.rho;
  CosphericityResult result;
  result.quad = quad;
  result.lhs = std::abs(p[0] * p[1] - p[2] * p[3]);
  result.rhs = co(p[0]) * co(p[1]) + co(p[2]) * co(p[3]);
  result.slack = result.rhs - result.lhs;
  if (std::abs(result.slack) <= tol) {
    result.verdict = CosphericityVerdict::kMarginal;
  } else {
    result.verdict = result.slack > 0 ? CosphericityVerdict::kPass : CosphericityVerdict::kFail;
  }
  return result;
}

bool CosphericityBattery::pass() const noexcept {
  return std::all_of(results.begin(), results.end(), [](const CosphericityResult& r) { return r.passes(); });
}

CosphericityBattery cosphericity_battery(const Dataset& dataset, const ValueMap& value_map, double tol) {
  const auto& design = dataset.design;
  CosphericityBattery battery;
  for (std::size_t l1 = 0; l1 < design.input_count(); ++l1) {
    for (std::size_t l2 = l1 + 1; l2 < design.input_count(); ++l2) {
      for (int w1 = 1; w1 <= design.value_count(l1); ++w1) {
        for (int w1p = w1 + 1; w1p <= design.value_count(l1); ++w1p) {
          for (int w2 = 1; w2 <= design.value_count(l2); ++w2) {
            for (int w2p = w2 + 1; w2p <= design.value_count(l2); ++w2p) {
              const QuadSelection sel{l1, l2, w1, w1p, w2, w2p};
              const std::array<std::pair<int, int>, 4> combos = {{{w1, w2}, {w1, w2p}, {w1p, w2}, {w1p, w2p}}};
              const bool realizable = std::all_of(combos.begin(), combos.end(), [&](const auto& v) {
                return !realizing_treatments(design, {{l1, v.first}, {l2, v.second}}).empty();
              });
              if (!realizable) continue;
              try {
                battery.results.push_back(cosphericity_test(correlations_from_dataset(dataset, value_map, sel), tol));
              } catch (const InvalidInput& e) {
                battery.skipped.emplace_back(sel, e.what());
              }
            }
          }
        }
      }
    }
  }
  return battery;
}

}  // namespace selinf
