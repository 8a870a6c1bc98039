#include "selinf/feasibility.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "selinf/error.hpp"

namespace selinf {

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& dense) {
  const std::size_t cols = dense.empty() ? 0 : dense.front().size();
  SparseMatrix m(dense.size(), cols);
  for (std::size_t r = 0; r < dense.size(); ++r) {
    if (dense[r].size() != cols) throw InvalidInput("ragged dense matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!dense[r][c].is_zero()) m.rows_[r].push_back({c, dense[r][c]});
    }
  }
  return m;
}

void SparseMatrix::set(std::size_t r, std::size_t c, const Rational& value) {
  if (r >= rows() || c >= columns_) throw InvalidInput("matrix index out of range");
  auto& row = rows_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::size_t col) { return e.column < col; });
  const bool present = it != row.end() && it->column == c;
  if (value.is_zero()) {
    if (present) row.erase(it);
  } else if (present) {
    it->value = value;
  } else {
    row.insert(it, {c, value});
  }
}

void SparseMatrix::push_back(std::size_t r, std::size_t c, const Rational& value) {
  if (r >= rows() || c >= columns_) throw InvalidInput("matrix index out of range");
  auto& row = rows_[r];
  if (!row.empty() && row.back().column >= c) throw InvalidInput("push_back column must increase within a row");
  if (!value.is_zero()) row.push_back({c, value});
}

Rational SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto& row = rows_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::size_t col) { return e.column < col; });
  return (it != row.end() && it->column == c) ? it->value : Rational{};
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

namespace {

// Revised phase-I simplex. The system is MQ + a = P with each row whose
// right-hand side is negative multiplied by −1, and the artificials a
// forming the starting basis. The objective is to minimize the sum of the
// artificials. The explicit dense basis inverse, the basic solution and the
// simplex multipliers y = c_Bᵀ B⁻¹ are updated in exact arithmetic at every
// pivot; reduced costs of structural columns are priced from y on demand.
class RevisedPhase1 {
 public:
  RevisedPhase1(const SparseMatrix& a, std::span<const Rational> b, const std::vector<std::size_t>& kept,
                const std::vector<int>& signs)
      : m_(kept.size()), n_(a.columns()), columns_(n_), inverse_(m_ * m_), x_(m_), y_(m_, mpq_class(1)),
        reduced_(n_), basis_(m_) {
    for (std::size_t r = 0; r < m_; ++r) {
      for (const auto& e : a.row(kept[r])) {
        columns_[e.column].push_back({r, signs[r] < 0 ? mpq_class(-e.value.value()) : e.value.value()});
      }
      x_[r] = signs[r] < 0 ? mpq_class(-b[kept[r]].value()) : b[kept[r]].value();
      inv(r, r) = 1;
      basis_[r] = n_ + r;
    }
    price();
  }

  // Least-index structural column with negative reduced cost.
  std::optional<std::size_t> entering_bland() const {
    for (std::size_t c = 0; c < n_; ++c) {
      if (sgn(reduced_[c]) < 0) return c;
    }
    return std::nullopt;
  }

  // Most negative reduced cost, least index among ties.
  std::optional<std::size_t> entering_dantzig() const {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < n_; ++c) {
      if (sgn(reduced_[c]) < 0 && (!best || reduced_[c] < reduced_[*best])) best = c;
    }
    return best;
  }

  // Computes the entering column B⁻¹A_s and returns the minimum-ratio row,
  // ties broken by the least basic-variable index.
  std::size_t leaving(std::size_t s) {
    alpha_.assign(m_, mpq_class(0));
    for (const auto& [row, value] : columns_[s]) {
      for (std::size_t i = 0; i < m_; ++i) {
        const mpq_class& b = inv(i, row);
        if (sgn(b) != 0) alpha_[i] += b * value;
      }
    }
    std::optional<std::size_t> best;
    mpq_class lhs, rhs;
    for (std::size_t i = 0; i < m_; ++i) {
      if (sgn(alpha_[i]) <= 0) continue;
      if (!best) {
        best = i;
        continue;
      }
      lhs = x_[i] * alpha_[*best];
      rhs = x_[*best] * alpha_[i];
      const int c = cmp(lhs, rhs);
      if (c < 0 || (c == 0 && basis_[i] < basis_[*best])) best = i;
    }
    if (!best) throw std::logic_error("phase-I objective unbounded; basis corrupted");
    return *best;
  }

  bool degenerate(std::size_t r) const { return sgn(x_[r]) == 0; }

  // Pivots column s into the basis at row r; requires leaving(s) first.
  void pivot(std::size_t r, std::size_t s) {
    const mpq_class inv_pivot = 1 / alpha_[r];
    support_.clear();
    for (std::size_t c = 0; c < m_; ++c) {
      mpq_class& v = inv(r, c);
      if (sgn(v) != 0) {
        v *= inv_pivot;
        support_.push_back(c);
      }
    }
    x_[r] *= inv_pivot;

    mpq_class product;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || sgn(alpha_[i]) == 0) continue;
      const mpq_class& factor = alpha_[i];
      for (std::size_t c : support_) {
        mpq_mul(product.get_mpq_t(), factor.get_mpq_t(), inv(r, c).get_mpq_t());
        mpq_sub(inv(i, c).get_mpq_t(), inv(i, c).get_mpq_t(), product.get_mpq_t());
      }
      mpq_mul(product.get_mpq_t(), factor.get_mpq_t(), x_[r].get_mpq_t());
      mpq_sub(x_[i].get_mpq_t(), x_[i].get_mpq_t(), product.get_mpq_t());
    }

    // y ← y + d_s · (new row r of B⁻¹), which zeroes the entering reduced cost.
    const mpq_class step = reduced_[s];
    for (std::size_t c : support_) {
      mpq_mul(product.get_mpq_t(), step.get_mpq_t(), inv(r, c).get_mpq_t());
      mpq_add(y_[c].get_mpq_t(), y_[c].get_mpq_t(), product.get_mpq_t());
    }
    basis_[r] = s;
    price();
  }

  bool objective_is_zero() const {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= n_ && sgn(x_[r]) != 0) return false;
    }
    return true;
  }

  std::vector<Rational> primal() const {
    std::vector<Rational> q(n_);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) q[basis_[r]] = Rational(x_[r]);
    }
    return q;
  }

  // Multiplier of (sign-adjusted) row r.
  const mpq_class& dual(std::size_t r) const { return y_[r]; }

 private:
  struct ColumnEntry {
    std::size_t row;
    mpq_class value;
  };

  mpq_class& inv(std::size_t r, std::size_t c) { return inverse_[r * m_ + c]; }
  const mpq_class& inv(std::size_t r, std::size_t c) const { return inverse_[r * m_ + c]; }

  // d_j = c_j − yᵀA_j with zero cost on structural columns.
  void price() {
    for (std::size_t j = 0; j < n_; ++j) {
      mpq_class& d = reduced_[j];
      d = 0;
      for (const auto& [row, value] : columns_[j]) {
        if (sgn(y_[row]) != 0) d -= y_[row] * value;
      }
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<ColumnEntry>> columns_;
  std::vector<mpq_class> inverse_;
  std::vector<mpq_class> x_;
  std::vector<mpq_class> y_;
  std::vector<mpq_class> reduced_;
  std::vector<std::size_t> basis_;
  std::vector<mpq_class> alpha_;
  std::vector<std::size_t> support_;
};

// Consecutive degenerate pivots tolerated before switching to Bland's rule.
constexpr std::size_t kDegenerateRunLimit = 16;

}  // namespace

FeasibilityResult solve_equality_feasibility(const SparseMatrix& m, std::span<const Rational> p, PivotRule rule) {
  if (m.rows() != p.size()) {
    throw InvalidInput("matrix has " + std::to_string(m.rows()) + " rows but the right-hand side has " +
                       std::to_string(p.size()) + " entries");
  }

  FeasibilityResult result;
  std::vector<std::size_t> kept;
  std::vector<int> signs;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (m.row(r).empty()) {
      if (p[r].is_zero()) continue;
      result.status = Feasibility::kInfeasible;
      result.farkas.assign(m.rows(), Rational{});
      result.farkas[r] = Rational(p[r].sign());
      return result;
    }
    kept.push_back(r);
    signs.push_back(p[r].sign() < 0 ? -1 : 1);
  }

  RevisedPhase1 tableau(m, p, kept, signs);
  std::size_t degenerate_run = 0;
  while (true) {
    const bool bland = rule == PivotRule::kBland || degenerate_run >= kDegenerateRunLimit;
    const auto s = bland ? tableau.entering_bland() : tableau.entering_dantzig();
    if (!s) break;
    const std::size_t r = tableau.leaving(*s);
    degenerate_run = tableau.degenerate(r) ? degenerate_run + 1 : 0;
    tableau.pivot(r, *s);
    ++result.pivots;
  }

  if (tableau.objective_is_zero()) {
    result.status = Feasibility::kFeasible;
    result.witness = tableau.primal();
  } else {
    result.status = Feasibility::kInfeasible;
    result.farkas.assign(m.rows(), Rational{});
    for (std::size_t r = 0; r < kept.size(); ++r) {
      const mpq_class& y = tableau.dual(r);
      result.farkas[kept[r]] = Rational(signs[r] < 0 ? mpq_class(-y) : y);
    }
  }
  return result;
}

bool verify_certificate(const SparseMatrix& m, std::span<const Rational> p, const FeasibilityResult& result) {
  if (m.rows() != p.size()) return false;
  if (result.feasible()) {
    const auto& q = result.witness;
    if (q.size() != m.columns()) return false;
    for (const auto& v : q) {
      if (v.sign() < 0) return false;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      mpq_class sum;
      for (const auto& e : m.row(r)) sum += e.value.value() * q[e.column].value();
      if (sum != p[r].value()) return false;
    }
    return true;
  }

  const auto& y = result.farkas;
  if (y.size() != m.rows()) return false;
  std::vector<mpq_class> yt_m(m.columns());
  mpq_class yt_p;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (y[r].is_zero()) continue;
    for (const auto& e : m.row(r)) yt_m[e.column] += y[r].value() * e.value.value();
    yt_p += y[r].value() * p[r].value();
  }
  if (sgn(yt_p) <= 0) return false;
  return std::all_of(yt_m.begin(), yt_m.end(), [](const mpq_class& v) { return sgn(v) <= 0; });
}

}  // namespace selinf
