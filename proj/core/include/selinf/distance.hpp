#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "selinf/experiment.hpp"

namespace selinf {

/// Outcome `outcome` (1-based) of output `output` (0-based position).
struct OutcomeLabel {
  std::size_t output;
  int outcome;

  friend auto operator<=>(const OutcomeLabel&, const OutcomeLabel&) = default;
};

/// Total preorder on the pooled outcome labels of all outputs, given as a
/// ranked partition: labels in the same class are equivalent (≃), and
/// every label of class i precedes (≺) every label of class j > i.
class OrderRelation {
 public:
  using Class = std::vector<OutcomeLabel>;

  OrderRelation() = default;
  /// Throws InvalidInput if a label appears twice or a class is empty.
  explicit OrderRelation(std::vector<Class> classes);

  const std::vector<Class>& classes() const noexcept { return classes_; }

  /// Class position of a label, if the relation covers it.
  std::optional<std::size_t> rank(std::size_t output, int outcome) const;

  /// Throws InvalidInput unless every outcome of every output is covered.
  void check_covers(const std::vector<int>& outcome_counts) const;
  void check_covers(const ExperimentDesign& design) const;

  /// Strict part: a ≺ b. Both labels must be covered.
  bool precedes(const OutcomeLabel& a, const OutcomeLabel& b) const;

  /// Relabels outputs/outcomes; `map[output][outcome-1]` is the new outcome.
  OrderRelation relabeled(const std::vector<std::vector<int>>& map) const;

  /// Text form, e.g. "{1:1,2:1} < {1:2,2:2}" (output:outcome, both 1-based).
  std::string str() const;

  /// 1 ≃ 1′ ≺ 2 ≃ 2′ on a two-output binary design.
  static OrderRelation chsh_d1();
  /// 1 ≃ 2′ ≺ 2 ≃ 1′ on a two-output binary design.
  static OrderRelation chsh_d2();
  /// Class a holds outcome a of every output, or outcome m_λ + 1 − a for
  /// outputs flagged in `reversed`.
  static OrderRelation by_outcome_index(const std::vector<int>& outcome_counts,
                                        const std::vector<bool>& reversed = {});
  /// by_outcome_index with every second output (the 2nd, 4th, ...)
  /// reversed. Equals chsh_d2 on a two-output binary design.
  static OrderRelation alternating(const std::vector<int>& outcome_counts);

  friend bool operator==(const OrderRelation&, const OrderRelation&) = default;

 private:
  std::vector<Class> classes_;
  std::vector<std::vector<std::optional<std::size_t>>> rank_;
};

/// Pr[A_φ^{from} ≺ A_φ^{to}] under treatment φ, summed exactly.
Rational order_distance(const Dataset& dataset, const Treatment& treatment, std::size_t from_input,
                        std::size_t to_input, const OrderRelation& order);

/// Input point (λ, w): input position λ (0-based) and value w (1-based).
struct InputPoint {
  std::size_t input;
  int value;

  friend auto operator<=>(const InputPoint&, const InputPoint&) = default;
};

using PointSequence = std::vector<InputPoint>;

std::string to_string(const InputPoint& point);
std::string to_string(const PointSequence& sequence);

/// Treatments of the design containing every point in `points`.
std::vector<Treatment> realizing_treatments(const ExperimentDesign& design, const std::vector<InputPoint>& points);

struct SequenceOptions {
  std::size_t max_len = 6;
  std::size_t guard = 100'000;
};

struct SequenceEnumeration {
  std::vector<PointSequence> sequences;
  /// True when some chain could have been extended past max_len.
  bool truncated = false;
};

/// Every irreducible treatment-realizable sequence of length 3..max_len,
/// in canonical order (by length, then lexicographically). A sequence and
/// its reversal are distinct; points within a sequence are distinct.
SequenceEnumeration enumerate_irreducible_sequences(const ExperimentDesign& design, const SequenceOptions& options = {});

/// Tetrads x, y, s, t with x, s on one input, y, t on another, x ≠ s and
/// y ≠ t, for every ordered pair of distinct inputs. Requires a
/// full-factorial design.
std::vector<PointSequence> enumerate_tetradic_sequences(const ExperimentDesign& design);

/// One representative per {sequence, reversed sequence} class.
std::vector<PointSequence> reversal_classes(const std::vector<PointSequence>& sequences);

struct LinkRealization {
  /// 0 is the left-hand link (x₁, x_l); i ≥ 1 is the link (x_i, x_{i+1}), 1-based i.
  std::size_t link;
  Treatment treatment;
  Rational distance;
};

struct ChainRecord {
  PointSequence sequence;
  Rational lhs;
  Rational rhs;
  Rational slack;
  std::vector<LinkRealization> realizations;

  bool pass() const noexcept { return slack.sign() >= 0; }
};

struct ChainReport {
  std::vector<ChainRecord> records;

  bool pass() const noexcept;
  /// First record with negative slack, if any.
  const ChainRecord* first_failure() const noexcept;
};

/// Evaluates d(x₁, x_l) ≤ Σ d(x_{i−1}, x_i) for each sequence with the
/// order-distance of `order`. When several treatments realize a link, all
/// are evaluated; the left side uses the largest and each right-hand link
/// the smallest value. Throws InvalidInput for an unrealizable link.
ChainReport chain_test(const Dataset& dataset, const OrderRelation& order, const std::vector<PointSequence>& sequences);

struct FineExpression {
  std::string text;
  Rational value;
};

struct FineInequality {
  std::size_t expression;  ///< 0..3
  bool upper;              ///< bound is 0 (upper) or −1 (lower)
  Rational bound;
  bool holds;
  std::string text;
};

struct FineReport {
  std::array<FineExpression, 4> expressions;
  std::vector<FineInequality> inequalities;

  bool pass() const noexcept;
};

/// The four Bell-CHSH-Fine double inequalities on a 2×2 binary
/// full-factorial dataset. Requires marginal selectivity (throws
/// MarginalSelectivityError otherwise) and the 2×2×2×2 shape (throws
/// InvalidInput otherwise).
FineReport fine_inequalities(const Dataset& dataset);

/// True if the dataset has the 2-input, 2-value, binary-outcome full-factorial shape.
bool has_chsh_shape(const ExperimentDesign& design);

/// Explicit joint distribution of a finite family of random variables;
/// variable i takes values 1..alphabet[i].
struct JointDistribution {
  std::vector<int> alphabet;
  Table probabilities;
};

struct AxiomReport {
  /// distances[i][j] = D(H_i, H_j).
  std::vector<std::vector<Rational>> distances;
  bool depends_on_pair_only = true;
  bool nonnegative = true;
  bool zero_diagonal = true;
  bool triangle = true;
  std::vector<std::string> failures;

  bool pass() const noexcept { return depends_on_pair_only && nonnegative && zero_diagonal && triangle; }
};

/// Checks the pseudo-quasi-metric axioms for the order-distance on an
/// explicit joint. The order's "outputs" are the variables of the family.
AxiomReport check_pq_metric_axioms(const JointDistribution& joint, const OrderRelation& order);

}  // namespace selinf
