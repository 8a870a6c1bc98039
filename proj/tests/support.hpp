#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "selinf/distance.hpp"
#include "selinf/experiment.hpp"
#include "selinf/feasibility.hpp"
#include "selinf/generators.hpp"
#include "selinf/lft.hpp"

namespace selinf::testing {

/// Hand-rolled generators for property tests. Reduction by modulo keeps the
/// streams identical across standard libraries.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t next() { return rng_(); }
  /// Uniform in [lo, hi].
  int between(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin() { return rng_() & 1U; }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  /// k/den with k uniform in [0, den].
  Rational fraction(int den) { return Rational(between(0, den), den); }
  /// Uniform rational in [lo, hi] on the grid of step (hi − lo)/steps.
  Rational in_range(const Rational& lo, const Rational& hi, int steps) {
    return lo + (hi - lo) * Rational(between(0, steps), steps);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<int> outcome_counts(const ExperimentDesign& d) {
  std::vector<int> counts;
  for (std::size_t l = 0; l < d.input_count(); ++l) counts.push_back(d.outcome_count(l));
  return counts;
}

/// Random full-factorial design.
inline ExperimentDesign random_factorial_design(Gen& g, int max_inputs, int max_values, int max_outcomes,
                                                int min_inputs = 1) {
  const int n = g.between(min_inputs, max_inputs);
  std::vector<int> k, m;
  for (int i = 0; i < n; ++i) {
    k.push_back(g.between(1, max_values));
    m.push_back(g.between(1, max_outcomes));
  }
  return make_factorial_design(k, m);
}

/// Random ranked partition of the pooled outcome labels.
inline OrderRelation random_order(Gen& g, const std::vector<int>& counts) {
  int labels = 0;
  for (int c : counts) labels += c;
  const int ranks = g.between(1, std::max(1, labels));
  std::vector<OrderRelation::Class> classes(static_cast<std::size_t>(ranks));
  for (std::size_t l = 0; l < counts.size(); ++l) {
    for (int a = 1; a <= counts[l]; ++a) classes[static_cast<std::size_t>(g.between(0, ranks - 1))].push_back({l, a});
  }
  std::erase_if(classes, [](const auto& c) { return c.empty(); });
  return OrderRelation(std::move(classes));
}

/// Random CHSH box satisfying marginal selectivity: rational marginals per
/// input value, and p11|ij anywhere in its Fréchet bounds. Classical or not.
inline Dataset random_no_signaling_box(Gen& g, int den = 12) {
  Dataset d;
  d.design = make_factorial_design({2, 2}, {2, 2});
  const Rational p[2] = {g.fraction(den), g.fraction(den)};
  const Rational q[2] = {g.fraction(den), g.fraction(den)};
  for (const auto& t : d.design.treatments) {
    const Rational& a = p[t[0] - 1];
    const Rational& b = q[t[1] - 1];
    const Rational lo = std::max(Rational(0), a + b - Rational(1));
    const Rational hi = std::min(a, b);
    const Rational p11 = g.in_range(lo, hi, den);
    d.tables.push_back(drop_zeros(
        {{{1, 1}, p11}, {{1, 2}, a - p11}, {{2, 1}, b - p11}, {{2, 2}, Rational(1) - a - b + p11}}));
  }
  return d;
}

/// Renames the values of each flagged input w -> k + 1 - w.
inline Dataset reverse_values(const Dataset& d, const std::vector<bool>& flip) {
  Dataset out = d;
  for (auto& t : out.design.treatments) {
    for (std::size_t l = 0; l < t.size(); ++l) {
      if (flip[l]) t[l] = d.design.value_count(l) + 1 - t[l];
    }
  }
  return canonical(out);
}

/// Marginal-selective CHSH dataset from a mixture of generators: classical,
/// classical perturbed toward the PR box (sometimes exactly onto the
/// classical boundary), and unconstrained no-signaling boxes. Input values
/// are renamed at random so that violations spread over all four Fine
/// expressions.
inline Dataset random_marginal_selective_chsh(Gen& g) {
  const auto design = make_factorial_design({2, 2}, {2, 2});
  const std::vector<bool> flip = {g.coin(), g.coin()};
  switch (g.between(0, 3)) {
    case 0:
      return gen_classical(design, g.next()).dataset;
    case 1: {
      // Uniform mixed with the PR box is classical iff the weight is ≤ 1/2.
      const Dataset uniform = gen_classical(design, QVector{QIndex(design), std::vector<Rational>(16, Rational(1, 16))});
      const Rational w = g.coin() ? Rational(1, 2) : Rational(1, 2) + Rational(g.between(-3, 3), 1000);
      return reverse_values(mix(gen_prbox(), uniform, w), flip);
    }
    case 2: {
      const Rational w(g.between(0, 20), 20);
      return reverse_values(mix(gen_prbox(), gen_classical(design, g.next()).dataset, w), flip);
    }
    default:
      return random_no_signaling_box(g);
  }
}

/// Marginal-selective dataset on a full-factorial design with binary
/// outputs: a PR box on inputs (i, j) between values 1 and k, independent
/// uniform elsewhere, mixed with a classical dataset.
inline Dataset random_nonclassical_factorial(Gen& g, const ExperimentDesign& design) {
  const std::size_t n = design.input_count();
  const std::size_t i = static_cast<std::size_t>(g.between(0, static_cast<int>(n) - 2));
  const std::size_t j = static_cast<std::size_t>(g.between(static_cast<int>(i) + 1, static_cast<int>(n) - 1));
  Dataset box{design, {}};
  for (const auto& t : design.treatments) {
    // Anti-correlated only when both inputs sit at their last value.
    const bool flip = t[i] == design.value_count(i) && t[j] == design.value_count(j);
    Table table;
    std::vector<int> radix(n, 2);
    for_each_tuple(radix, [&](const OutcomeTuple& o) {
      if ((o[i] == o[j]) == flip) return;
      table[o] = Rational(1, 1 << (n - 1));
    });
    box.tables.push_back(std::move(table));
  }
  const Rational w(g.between(0, 10), 10);
  return mix(box, gen_classical(design, g.next()).dataset, w);
}

// ---------------------------------------------------------------------------
// LP oracle: {Q ≥ 0 : MQ = P} is nonempty iff it has a basic feasible
// solution, i.e. some set of linearly independent columns solves the system
// with nonnegative coefficients. Exhaustive over column subsets.

namespace detail {

/// Solves A x = b for the columns in `cols` by Gauss-Jordan elimination.
/// Returns nullopt if the columns are dependent or the system inconsistent.
inline std::optional<std::vector<Rational>> solve_columns(const std::vector<std::vector<Rational>>& a,
                                                          const std::vector<Rational>& b,
                                                          const std::vector<std::size_t>& cols) {
  const std::size_t rows = a.size();
  const std::size_t k = cols.size();
  std::vector<std::vector<Rational>> aug(rows, std::vector<Rational>(k + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < k; ++c) aug[r][c] = a[r][cols[c]];
    aug[r][k] = b[r];
  }
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t sel = pivot_row;
    while (sel < rows && aug[sel][c].is_zero()) ++sel;
    if (sel == rows) return std::nullopt;  // dependent column
    std::swap(aug[sel], aug[pivot_row]);
    const Rational inv = Rational(1) / aug[pivot_row][c];
    for (auto& v : aug[pivot_row]) v *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pivot_row || aug[r][c].is_zero()) continue;
      const Rational f = aug[r][c];
      for (std::size_t cc = 0; cc <= k; ++cc) aug[r][cc] -= f * aug[pivot_row][cc];
    }
    ++pivot_row;
  }
  for (std::size_t r = pivot_row; r < rows; ++r) {
    if (!aug[r][k].is_zero()) return std::nullopt;
  }
  std::vector<Rational> x(k);
  for (std::size_t c = 0; c < k; ++c) x[c] = aug[c][k];
  return x;
}

}  // namespace detail

inline bool oracle_feasible(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b) {
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  if (std::all_of(b.begin(), b.end(), [](const Rational& v) { return v.is_zero(); })) return true;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << cols); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t c = 0; c < cols; ++c) {
      if (mask >> c & 1U) subset.push_back(c);
    }
    if (subset.size() > a.size()) continue;
    const auto x = detail::solve_columns(a, b, subset);
    if (x && std::all_of(x->begin(), x->end(), [](const Rational& v) { return v.sign() >= 0; })) return true;
  }
  return false;
}

inline std::vector<std::vector<Rational>> to_dense(const SparseMatrix& m) {
  std::vector<std::vector<Rational>> d(m.rows(), std::vector<Rational>(m.columns()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (const auto& e : m.row(r)) d[r][e.column] = e.value;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Sequence oracles over input points.

inline std::vector<InputPoint> all_points(const ExperimentDesign& d) {
  std::vector<InputPoint> pts;
  for (std::size_t l = 0; l < d.input_count(); ++l) {
    for (int w = 1; w <= d.value_count(l); ++w) pts.push_back({l, w});
  }
  return pts;
}

inline bool in_some_treatment(const ExperimentDesign& d, const std::vector<InputPoint>& pts) {
  for (const auto& t : d.treatments) {
    if (std::all_of(pts.begin(), pts.end(), [&](const InputPoint& x) { return t[x.input] == x.value; })) return true;
  }
  return false;
}

/// Every sequence of distinct points of length 3..max_len whose consecutive
/// pairs and endpoints co-occur in some treatment.
inline std::vector<PointSequence> realizable_sequences(const ExperimentDesign& d, std::size_t max_len) {
  const auto pts = all_points(d);
  std::vector<PointSequence> out;
  PointSequence cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.size() >= 3 && in_some_treatment(d, {cur.front(), cur.back()})) out.push_back(cur);
    if (cur.size() == max_len) return;
    for (const auto& p : pts) {
      if (std::find(cur.begin(), cur.end(), p) != cur.end()) continue;
      if (!cur.empty() && !in_some_treatment(d, {cur.back(), p})) continue;
      cur.push_back(p);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

/// Irreducibility straight from the definition: the only subsets of two or
/// more sequence points contained in a treatment are {x1, xl} and the
/// consecutive pairs.
inline bool irreducible_by_definition(const ExperimentDesign& d, const PointSequence& s) {
  const std::size_t l = s.size();
  if (s.front() == s.back()) return false;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << l); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < l; ++i) {
      if (mask >> i & 1U) idx.push_back(i);
    }
    if (idx.size() < 2) continue;
    std::vector<InputPoint> pts;
    for (std::size_t i : idx) pts.push_back(s[i]);
    const bool allowed =
        idx.size() == 2 && (idx[1] == idx[0] + 1 || (idx[0] == 0 && idx[1] == l - 1));
    if (in_some_treatment(d, pts) != allowed) return false;
  }
  return true;
}

}  // namespace selinf::testing
