#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "selinf/error.hpp"
#include "selinf/rational.hpp"

namespace selinf {

/// One value index per input, 1-based: treatment[λ] ∈ {1..k_λ}.
using Treatment = std::vector<int>;
/// One outcome index per output, 1-based: outcome[λ] ∈ {1..m_λ}.
using OutcomeTuple = std::vector<int>;
/// Sorted, duplicate-free list of 0-based input positions.
using InputSubset = std::vector<std::size_t>;
/// Probability table of a joint distribution. Absent keys have mass 0.
using Table = std::map<OutcomeTuple, Rational>;

struct Input {
  std::string label;
  std::vector<std::string> values;
};

struct Output {
  std::string label;
  std::vector<std::string> values;
};

/// Inputs α^λ, the outcome alphabet of each output A^λ, and the set Φ of
/// allowable treatments. inputs[λ] and outputs[λ] refer to the same λ.
struct ExperimentDesign {
  std::vector<Input> inputs;
  std::vector<Output> outputs;
  std::vector<Treatment> treatments;

  std::size_t input_count() const noexcept { return inputs.size(); }
  int value_count(std::size_t input) const { return static_cast<int>(inputs.at(input).values.size()); }
  int outcome_count(std::size_t input) const { return static_cast<int>(outputs.at(input).values.size()); }

  /// ∏ m_λ, the number of joint outcome tuples per treatment.
  std::size_t outcome_tuple_count() const;

  /// Position of `t` in `treatments`, if present.
  std::optional<std::size_t> find_treatment(const Treatment& t) const;

  /// True iff Φ is the full product of all input value sets.
  bool is_full_factorial() const;

  /// Treatment positions in canonical (lexicographic) order.
  std::vector<std::size_t> canonical_treatment_order() const;

  friend bool operator==(const ExperimentDesign&, const ExperimentDesign&) = default;
};

inline bool operator==(const Input& a, const Input& b) { return a.label == b.label && a.values == b.values; }
inline bool operator==(const Output& a, const Output& b) { return a.label == b.label && a.values == b.values; }

/// Builds a design whose inputs are labelled "alpha1", "alpha2", ..., whose
/// outputs are labelled "A1", "A2", ..., and whose value and outcome labels
/// are "1".."k" and "1".."m".
ExperimentDesign make_design(const std::vector<int>& value_counts, const std::vector<int>& outcome_counts,
                             std::vector<Treatment> treatments);

/// Same as make_design with Φ the full product of the value sets.
ExperimentDesign make_factorial_design(const std::vector<int>& value_counts,
                                       const std::vector<int>& outcome_counts);

/// A design plus, for each treatment in design.treatments (same position),
/// the exact joint distribution of the outputs.
struct Dataset {
  ExperimentDesign design;
  std::vector<Table> tables;

  const Table& table(const Treatment& t) const;

  /// Probability of `outcome` under treatment `t`; zero if absent.
  Rational probability(const Treatment& t, const OutcomeTuple& outcome) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Table with zero-mass entries removed.
Table drop_zeros(const Table& table);

/// Dataset with tables stripped of zero entries and treatments sorted into
/// canonical order. Two datasets describe the same experiment iff their
/// canonical forms compare equal.
Dataset canonical(const Dataset& dataset);

/// Calls `fn(tuple)` for every tuple in {1..radix[0]} × ... in lexicographic order.
template <typename Fn>
void for_each_tuple(const std::vector<int>& radix, Fn&& fn) {
  std::vector<int> tuple(radix.size(), 1);
  for (int r : radix) {
    if (r < 1) return;
  }
  while (true) {
    fn(static_cast<const std::vector<int>&>(tuple));
    std::size_t i = radix.size();
    while (i > 0) {
      --i;
      if (++tuple[i] <= radix[i]) break;
      tuple[i] = 1;
      if (i == 0) return;
    }
    if (radix.empty()) return;
  }
}

// ---------------------------------------------------------------------------
// Validation

enum class BreachKind {
  kDesign,
  kTreatmentOutOfRange,
  kDuplicateTreatment,
  kMissingTable,
  kOutcomeOutOfRange,
  kNegativeProbability,
  kMassNotOne,
};

struct Breach {
  BreachKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Breach> breaches;

  bool valid() const noexcept { return breaches.empty(); }
};

/// Reports every invariant breach of the design and the tables. Never throws.
ValidationReport validate_dataset(const Dataset& dataset);

/// Throws InvalidInput listing the breaches unless the dataset is valid.
void require_valid(const Dataset& dataset);

// ---------------------------------------------------------------------------
// Marginals

/// Checks that `subset` is a nonempty, sorted, duplicate-free list of inputs.
void check_subset(const ExperimentDesign& design, const InputSubset& subset);

/// Exact joint distribution of the outputs in `subset` under `treatment`.
/// Keys are tuples over the subset (in subset order); zero masses omitted.
Table marginal(const Dataset& dataset, const Treatment& treatment, const InputSubset& subset);

/// Same as marginal(), applied to a bare table.
Table marginalize(const Table& table, const InputSubset& subset);

struct MarginalViolation {
  InputSubset subset;
  Treatment first;
  Treatment second;
  Rational max_discrepancy;
};

struct MarginalReport {
  std::vector<MarginalViolation> violations;
  std::size_t comparisons = 0;

  bool pass() const noexcept { return violations.empty(); }
};

class MarginalSelectivityError : public InvalidInput {
 public:
  MarginalSelectivityError(const std::string& what, MarginalReport report)
      : InvalidInput(what), report_(std::move(report)) {}

  const MarginalReport& report() const noexcept { return report_; }

 private:
  MarginalReport report_;
};

/// Compares Λ′-marginals of every pair of treatments that agree on Λ′.
std::vector<MarginalViolation> compare_subset_marginals(const Dataset& dataset, const InputSubset& subset,
                                                        std::size_t* comparisons = nullptr);

struct MarginalOptions {
  /// 0 means n − 1, i.e. every nonempty proper subset.
  std::size_t max_subset_size = 0;
  /// Upper bound on (subset, treatment pair) comparisons.
  std::size_t comparison_guard = 1'000'000;
  bool allow_large = false;
};

/// Complete marginal selectivity over all nonempty proper subsets Λ′ of
/// size ≤ max_subset_size. Throws GuardExceeded if the comparison count is
/// above the guard and `allow_large` is unset.
MarginalReport check_marginal_selectivity(const Dataset& dataset, const MarginalOptions& options = {});

// ---------------------------------------------------------------------------
// Input-value-specific transformations

/// For each input λ and value w, a total map from old outcome indices to new
/// ones: maps[λ][w-1][a-1] is the image of outcome a. `outputs` gives the
/// new outcome alphabets.
struct OutputTransform {
  std::vector<Output> outputs;
  std::vector<std::vector<std::vector<int>>> maps;
};

/// Transform that leaves every outcome unchanged.
OutputTransform identity_transform(const ExperimentDesign& design);

/// Pushes every table forward through the maps selected by its treatment.
Dataset transform_outputs(const Dataset& dataset, const OutputTransform& transform);

}  // namespace selinf
