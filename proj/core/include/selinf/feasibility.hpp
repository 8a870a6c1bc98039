#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "selinf/rational.hpp"

namespace selinf {

/// Row-major sparse matrix of exact rationals. Each row holds its nonzero
/// entries sorted by column; zero entries are never stored.
class SparseMatrix {
 public:
  struct Entry {
    std::size_t column;
    Rational value;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t columns) : columns_(columns), rows_(rows) {}

  static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& dense);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t columns() const noexcept { return columns_; }
  std::span<const Entry> row(std::size_t r) const { return rows_.at(r); }

  /// Sets entry (r, c); assigning zero removes it.
  void set(std::size_t r, std::size_t c, const Rational& value);
  /// Appends an entry whose column is beyond every column already in row r.
  void push_back(std::size_t r, std::size_t c, const Rational& value);

  Rational at(std::size_t r, std::size_t c) const;
  std::size_t nonzeros() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t columns_ = 0;
  std::vector<std::vector<Entry>> rows_;
};

enum class Feasibility { kFeasible, kInfeasible };

/// Outcome of deciding whether {Q ≥ 0 : MQ = P} is nonempty.
///
/// Feasible: `witness` holds Q with MQ = P, Q ≥ 0.
/// Infeasible: `farkas` holds y with yᵀM ≤ 0 and yᵀP > 0.
struct FeasibilityResult {
  Feasibility status = Feasibility::kInfeasible;
  std::vector<Rational> witness;
  std::vector<Rational> farkas;
  std::size_t pivots = 0;

  bool feasible() const noexcept { return status == Feasibility::kFeasible; }
};

enum class PivotRule {
  /// Bland's least-index rule throughout.
  kBland,
  /// Most negative reduced cost; falls back to Bland's rule after a run of
  /// degenerate pivots and returns to it after the next improving pivot.
  kDantzigBlandFallback,
};

/// Phase-I simplex in exact arithmetic: minimizes the sum of artificial
/// variables over MQ + a = P. Both pivot rules are anti-cycling, so the
/// solver terminates on every input. Deterministic: equal inputs give equal
/// witnesses and pivot counts.
FeasibilityResult solve_equality_feasibility(const SparseMatrix& m, std::span<const Rational> p,
                                             PivotRule rule = PivotRule::kDantzigBlandFallback);

/// Re-checks the certificate in `result` against M and P directly.
bool verify_certificate(const SparseMatrix& m, std::span<const Rational> p, const FeasibilityResult& result);

}  // namespace selinf
