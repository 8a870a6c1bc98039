#include "selinf/lft.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace selinf {

namespace {

std::optional<std::size_t> checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::nullopt;
  return a * b;
}

}  // namespace

PIndex::PIndex(const ExperimentDesign& design) : block_size_(design.outcome_tuple_count()) {
  for (std::size_t pos : design.canonical_treatment_order()) treatments_.push_back(design.treatments[pos]);
  for (std::size_t l = 0; l < design.input_count(); ++l) radix_.push_back(design.outcome_count(l));
}

std::size_t PIndex::outcome_offset(const OutcomeTuple& outcome) const {
  if (outcome.size() != radix_.size()) throw InvalidInput("outcome tuple has the wrong length");
  std::size_t offset = 0;
  for (std::size_t l = 0; l < radix_.size(); ++l) {
    if (outcome[l] < 1 || outcome[l] > radix_[l]) throw InvalidInput("outcome index out of range");
    offset = offset * static_cast<std::size_t>(radix_[l]) + static_cast<std::size_t>(outcome[l] - 1);
  }
  return offset;
}

std::size_t PIndex::encode(const Treatment& treatment, const OutcomeTuple& outcome) const {
  const auto it = std::lower_bound(treatments_.begin(), treatments_.end(), treatment);
  if (it == treatments_.end() || *it != treatment) throw InvalidInput("treatment not in the design");
  return static_cast<std::size_t>(it - treatments_.begin()) * block_size_ + outcome_offset(outcome);
}

std::pair<Treatment, OutcomeTuple> PIndex::decode(std::size_t index) const {
  if (index >= size()) throw InvalidInput("P index out of range");
  std::size_t offset = index % block_size_;
  OutcomeTuple outcome(radix_.size());
  for (std::size_t l = radix_.size(); l-- > 0;) {
    const auto r = static_cast<std::size_t>(radix_[l]);
    outcome[l] = static_cast<int>(offset % r) + 1;
    offset /= r;
  }
  return {treatments_[index / block_size_], std::move(outcome)};
}

QIndex::QIndex(const ExperimentDesign& design) {
  std::optional<std::size_t> size = 1;
  for (std::size_t l = 0; l < design.input_count(); ++l) {
    value_counts_.push_back(design.value_count(l));
    outcome_counts_.push_back(design.outcome_count(l));
    for (int w = 0; w < design.value_count(l) && size; ++w) {
      size = checked_mul(*size, static_cast<std::size_t>(design.outcome_count(l)));
    }
  }
  size_ = size;
}

std::size_t QIndex::size() const {
  if (!size_) throw GuardExceeded("Q-vector length overflows the address space", "--column-guard");
  return *size_;
}

std::size_t QIndex::encode(const Assignment& assignment) const {
  if (assignment.size() != value_counts_.size()) throw InvalidInput("assignment has the wrong number of inputs");
  std::size_t index = 0;
  for (std::size_t l = 0; l < value_counts_.size(); ++l) {
    if (static_cast<int>(assignment[l].size()) != value_counts_[l]) {
      throw InvalidInput("assignment has the wrong number of values for an input");
    }
    for (int h : assignment[l]) {
      if (h < 1 || h > outcome_counts_[l]) throw InvalidInput("assignment outcome out of range");
      index = index * static_cast<std::size_t>(outcome_counts_[l]) + static_cast<std::size_t>(h - 1);
    }
  }
  return index;
}

Assignment QIndex::decode(std::size_t index) const {
  if (index >= size()) throw InvalidInput("Q index out of range");
  Assignment a(value_counts_.size());
  for (std::size_t l = value_counts_.size(); l-- > 0;) {
    a[l].resize(static_cast<std::size_t>(value_counts_[l]));
    const auto m = static_cast<std::size_t>(outcome_counts_[l]);
    for (std::size_t w = a[l].size(); w-- > 0;) {
      a[l][w] = static_cast<int>(index % m) + 1;
      index /= m;
    }
  }
  return a;
}

PVector build_p_vector(const Dataset& dataset) {
  require_valid(dataset);
  PVector p{PIndex(dataset.design), {}};
  p.values.assign(p.index.size(), Rational{});
  for (std::size_t pos = 0; pos < dataset.tables.size(); ++pos) {
    const auto& t = dataset.design.treatments[pos];
    for (const auto& [outcome, prob] : dataset.tables[pos]) p.values[p.index.encode(t, outcome)] = prob;
  }
  return p;
}

JdcMatrix build_jdc_matrix(const ExperimentDesign& design, const LftOptions& options) {
  JdcMatrix jdc{PIndex(design), QIndex(design), {}};
  const auto columns = jdc.columns.checked_size();
  if (!columns || *columns > options.column_guard) {
    throw GuardExceeded("JDC matrix needs " + (columns ? std::to_string(*columns) : std::string("more than 2^64")) +
                            " columns, above the guard of " + std::to_string(options.column_guard),
                        "--column-guard");
  }
  const auto& treatments = jdc.rows.treatments();
  jdc.matrix = SparseMatrix(jdc.rows.size(), *columns);

  // Walk the assignments in index order with an odometer over the (λ, w)
  // slots; the last slot is the least significant digit.
  struct Slot {
    std::size_t input;
    std::size_t value;
    int radix;
  };
  std::vector<Slot> slots;
  Assignment h(design.input_count());
  for (std::size_t l = 0; l < design.input_count(); ++l) {
    h[l].assign(static_cast<std::size_t>(design.value_count(l)), 1);
    for (std::size_t w = 0; w < h[l].size(); ++w) slots.push_back({l, w, design.outcome_count(l)});
  }

  OutcomeTuple outcome(design.input_count());
  for (std::size_t c = 0; c < *columns; ++c) {
    for (std::size_t t = 0; t < treatments.size(); ++t) {
      for (std::size_t l = 0; l < outcome.size(); ++l) {
        outcome[l] = h[l][static_cast<std::size_t>(treatments[t][l] - 1)];
      }
      jdc.matrix.push_back(t * jdc.rows.block_size() + jdc.rows.outcome_offset(outcome), c, Rational(1));
    }
    for (std::size_t d = slots.size(); d-- > 0;) {
      int& digit = h[slots[d].input][slots[d].value];
      if (++digit <= slots[d].radix) break;
      digit = 1;
    }
  }
  return jdc;
}

LftVerdict run_lft(const Dataset& dataset, const LftOptions& options) {
  const PVector p = build_p_vector(dataset);
  const JdcMatrix jdc = build_jdc_matrix(dataset.design, options);
  FeasibilityResult result = solve_equality_feasibility(jdc.matrix, p.values);
  if (!verify_certificate(jdc.matrix, p.values, result)) {
    throw std::logic_error("feasibility certificate failed verification");
  }

  LftVerdict verdict;
  verdict.status = result.status;
  verdict.rows = jdc.rows;
  verdict.columns = jdc.columns;
  verdict.pivots = result.pivots;
  if (result.feasible()) {
    verdict.witness = QVector{jdc.columns, std::move(result.witness)};
  } else {
    verdict.farkas = std::move(result.farkas);
  }
  return verdict;
}

OutcomeTuple Si2Model::respond(const Si2Atom& atom, const Treatment& treatment) const {
  OutcomeTuple out(treatment.size());
  for (std::size_t l = 0; l < treatment.size(); ++l) {
    out[l] = atom.assignment.at(l).at(static_cast<std::size_t>(treatment[l] - 1));
  }
  return out;
}

Dataset Si2Model::simulate(const ExperimentDesign& design) const {
  Dataset out;
  out.design = design;
  for (const auto& t : design.treatments) {
    Table table;
    for (const auto& atom : atoms) table[respond(atom, t)] += atom.weight;
    out.tables.push_back(drop_zeros(table));
  }
  return out;
}

Si2Model construct_si2(const QVector& q, const ExperimentDesign& design) {
  if (!(q.index == QIndex(design))) throw InvalidInput("Q-vector does not match the design");
  if (q.values.size() != q.index.size()) throw InvalidInput("Q-vector has the wrong length");
  Rational total;
  Si2Model model;
  for (std::size_t c = 0; c < q.values.size(); ++c) {
    const Rational& w = q.values[c];
    if (w.sign() < 0) throw InvalidInput("Q-vector has a negative component at index " + std::to_string(c));
    if (w.is_zero()) continue;
    total += w;
    model.atoms.push_back({w, q.index.decode(c)});
  }
  if (total != Rational(1)) throw InvalidInput("Q-vector sums to " + total.str() + ", not 1");
  return model;
}

Dataset restrict_design(const Dataset& dataset, const InputSubset& subset) {
  require_valid(dataset);
  check_subset(dataset.design, subset);
  if (subset.size() == dataset.design.input_count()) return dataset;

  MarginalReport report;
  report.violations = compare_subset_marginals(dataset, subset, &report.comparisons);
  if (!report.pass()) {
    throw MarginalSelectivityError("marginal selectivity fails on the requested input subset", std::move(report));
  }

  Dataset out;
  for (std::size_t l : subset) {
    out.design.inputs.push_back(dataset.design.inputs[l]);
    out.design.outputs.push_back(dataset.design.outputs[l]);
  }
  std::map<Treatment, Table> merged;
  for (std::size_t pos : dataset.design.canonical_treatment_order()) {
    Treatment proj;
    for (std::size_t l : subset) proj.push_back(dataset.design.treatments[pos][l]);
    if (!merged.contains(proj)) merged.emplace(proj, marginalize(dataset.tables[pos], subset));
  }
  for (auto& [t, table] : merged) {
    out.design.treatments.push_back(t);
    out.tables.push_back(std::move(table));
  }
  return out;
}

}  // namespace selinf
