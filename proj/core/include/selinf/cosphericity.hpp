#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "selinf/experiment.hpp"

namespace selinf {

/// Numeric coding of outcomes: value_map[λ][a-1] is the real number assigned
/// to outcome a of output λ.
using ValueMap = std::vector<std::vector<double>>;

/// Outcome a coded as the real number a.
ValueMap index_value_map(const ExperimentDesign& design);

/// Two inputs and two values of each: the four input points w1, w1′ (on
/// `first`) and w2, w2′ (on `second`). Inputs are 0-based, values 1-based.
struct QuadSelection {
  std::size_t first = 0;
  std::size_t second = 1;
  int w1 = 1;
  int w1p = 2;
  int w2 = 1;
  int w2p = 2;

  friend bool operator==(const QuadSelection&, const QuadSelection&) = default;
};

/// Correlations ρ_{w1w2}, ρ_{w1w2′}, ρ_{w1′w2}, ρ_{w1′w2′}, in that order,
/// with the treatments they were computed under.
struct CorrelationQuad {
  std::array<double, 4> rho{};
  std::array<Treatment, 4> treatments;
  QuadSelection selection;
};

/// Pearson correlations of the coded outputs of `selection.first` and
/// `selection.second` under the four treatments combining the selected
/// values. When several treatments contain a pair of points, the first in
/// canonical order is used. Throws InvalidInput if a pair never co-occurs
/// or an output has zero variance.
CorrelationQuad correlations_from_dataset(const Dataset& dataset, const ValueMap& value_map,
                                          const QuadSelection& selection = {});

enum class CosphericityVerdict { kPass, kMarginal, kFail };

struct CosphericityResult {
  CorrelationQuad quad;
  double lhs = 0;
  double rhs = 0;
  /// rhs − lhs.
  double slack = 0;
  CosphericityVerdict verdict = CosphericityVerdict::kPass;

  /// Marginal results count as passing.
  bool passes() const noexcept { return verdict != CosphericityVerdict::kFail; }
};

inline constexpr double kDefaultCosphericityTol = 1e-9;

/// |ρ11ρ12 − ρ21ρ22| ≤ √(1−ρ11²)√(1−ρ12²) + √(1−ρ21²)√(1−ρ22²), which holds
/// iff four unit vectors u, u′, v, v′ with cos(u,v) = ρ11, cos(u,v′) = ρ12,
/// cos(u′,v) = ρ21, cos(u′,v′) = ρ22 can be placed on a sphere in 3D.
/// |slack| ≤ tol gives kMarginal. Throws InvalidInput if some |ρ| > 1 + tol.
CosphericityResult cosphericity_test(const CorrelationQuad& quad, double tol = kDefaultCosphericityTol);

/// Note recorded with every report: for bivariate normal outputs the test
/// is also sufficient.
extern const char* const kCosphericityNote;

struct CosphericityBattery {
  std::vector<CosphericityResult> results;
  /// Quads that could not be formed, e.g. for zero variance, with the reason.
  std::vector<std::pair<QuadSelection, std::string>> skipped;

  bool pass() const noexcept;
};

/// Runs the test on every input pair and every pair of values on each input
/// whose four combinations all occur in some treatment.
CosphericityBattery cosphericity_battery(const Dataset& dataset, const ValueMap& value_map,
                                         double tol = kDefaultCosphericityTol);

}  // namespace selinf
