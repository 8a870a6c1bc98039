#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "selinf/experiment.hpp"
#include "selinf/feasibility.hpp"

namespace selinf {

/// Flat indexing of the P-vector: treatment-major with treatments in
/// canonical (sorted) order, outcome tuples lexicographic within a block.
class PIndex {
 public:
  PIndex() = default;
  explicit PIndex(const ExperimentDesign& design);

  std::size_t size() const noexcept { return treatments_.size() * block_size_; }
  std::size_t block_size() const noexcept { return block_size_; }
  const std::vector<Treatment>& treatments() const noexcept { return treatments_; }

  std::size_t encode(const Treatment& treatment, const OutcomeTuple& outcome) const;
  std::pair<Treatment, OutcomeTuple> decode(std::size_t index) const;

  /// Offset of `outcome` within a treatment block.
  std::size_t outcome_offset(const OutcomeTuple& outcome) const;

  friend bool operator==(const PIndex&, const PIndex&) = default;

 private:
  std::vector<Treatment> treatments_;
  std::vector<int> radix_;
  std::size_t block_size_ = 0;
};

/// Joint assignment of the JDC set: assignment[λ][w-1] is the value h^λ_w
/// taken by the hidden variable for input λ at value w.
using Assignment = std::vector<std::vector<int>>;

/// Mixed-radix indexing of the Q-vector over all assignments, with
/// h^1_1 the most significant digit and h^n_{k_n} the least.
class QIndex {
 public:
  QIndex() = default;
  explicit QIndex(const ExperimentDesign& design);

  /// Number of assignments, or nullopt if it does not fit in size_t.
  std::optional<std::size_t> checked_size() const noexcept { return size_; }
  std::size_t size() const;

  std::size_t encode(const Assignment& assignment) const;
  Assignment decode(std::size_t index) const;

  friend bool operator==(const QIndex&, const QIndex&) = default;

 private:
  std::vector<int> value_counts_;
  std::vector<int> outcome_counts_;
  std::optional<std::size_t> size_;
};

struct PVector {
  PIndex index;
  std::vector<Rational> values;
};

struct QVector {
  QIndex index;
  std::vector<Rational> values;
};

/// Boolean incidence matrix of the JDC: M(r, c) = 1 iff the assignment of
/// column c reproduces the outcome tuple of row r under the row's treatment.
struct JdcMatrix {
  PIndex rows;
  QIndex columns;
  SparseMatrix matrix;
};

struct LftOptions {
  /// Maximum number of Q components before build_jdc_matrix refuses.
  std::size_t column_guard = 1'000'000;
};

PVector build_p_vector(const Dataset& dataset);

JdcMatrix build_jdc_matrix(const ExperimentDesign& design, const LftOptions& options = {});

struct LftVerdict {
  Feasibility status = Feasibility::kInfeasible;
  PIndex rows;
  QIndex columns;
  /// Set when feasible.
  std::optional<QVector> witness;
  /// Farkas vector over P components, set when infeasible.
  std::vector<Rational> farkas;
  std::size_t pivots = 0;

  bool feasible() const noexcept { return status == Feasibility::kFeasible; }
};

/// Linear Feasibility Test: decides whether MQ = P, Q ≥ 0 has a solution.
/// The returned certificate has already been checked with verify_certificate.
LftVerdict run_lft(const Dataset& dataset, const LftOptions& options = {});

struct Si2Atom {
  Rational weight;
  Assignment assignment;
};

/// Deterministic hidden-variable model: C takes atom i with probability
/// atoms[i].weight, and the response for input λ at value w is
/// atoms[i].assignment[λ][w-1].
struct Si2Model {
  std::vector<Si2Atom> atoms;

  /// Output tuple produced by `atom` under `treatment`.
  OutcomeTuple respond(const Si2Atom& atom, const Treatment& treatment) const;

  /// Distribution of responses under every treatment in `design`.
  Dataset simulate(const ExperimentDesign& design) const;
};

Si2Model construct_si2(const QVector& q, const ExperimentDesign& design);

/// Sub-experiment over the inputs in `subset`; treatments are projected and
/// merged, tables replaced by their subset marginals. Throws
/// MarginalSelectivityError if the subset marginals depend on other inputs.
Dataset restrict_design(const Dataset& dataset, const InputSubset& subset);

}  // namespace selinf
