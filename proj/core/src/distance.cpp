#include "selinf/distance.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace selinf {

OrderRelation::OrderRelation(std::vector<Class> classes) : classes_(std::move(classes)) {
  for (std::size_t rank = 0; rank < classes_.size(); ++rank) {
    if (classes_[rank].empty()) throw InvalidInput("order relation has an empty class");
    std::sort(classes_[rank].begin(), classes_[rank].end());
    for (const auto& label : classes_[rank]) {
      if (label.outcome < 1) throw InvalidInput("outcome labels are 1-based");
      if (rank_.size() <= label.output) rank_.resize(label.output + 1);
      auto& ranks = rank_[label.output];
      const auto idx = static_cast<std::size_t>(label.outcome - 1);
      if (ranks.size() <= idx) ranks.resize(idx + 1);
      if (ranks[idx]) {
        throw InvalidInput("outcome " + std::to_string(label.outcome) + " of output " +
                           std::to_string(label.output + 1) + " appears twice in the order relation");
      }
      ranks[idx] = rank;
    }
  }
}

std::optional<std::size_t> OrderRelation::rank(std::size_t output, int outcome) const {
  if (output >= rank_.size() || outcome < 1) return std::nullopt;
  const auto idx = static_cast<std::size_t>(outcome - 1);
  if (idx >= rank_[output].size()) return std::nullopt;
  return rank_[output][idx];
}

void OrderRelation::check_covers(const std::vector<int>& outcome_counts) const {
  for (std::size_t l = 0; l < outcome_counts.size(); ++l) {
    for (int a = 1; a <= outcome_counts[l]; ++a) {
      if (!rank(l, a)) {
        throw InvalidInput("order relation does not cover outcome " + std::to_string(a) + " of output " +
                           std::to_string(l + 1));
      }
    }
  }
}

void OrderRelation::check_covers(const ExperimentDesign& design) const {
  std::vector<int> counts;
  for (std::size_t l = 0; l < design.input_count(); ++l) counts.push_back(design.outcome_count(l));
  check_covers(counts);
}

bool OrderRelation::precedes(const OutcomeLabel& a, const OutcomeLabel& b) const {
  const auto ra = rank(a.output, a.outcome);
  const auto rb = rank(b.output, b.outcome);
  if (!ra || !rb) throw InvalidInput("outcome label not covered by the order relation");
  return *ra < *rb;
}

OrderRelation OrderRelation::relabeled(const std::vector<std::vector<int>>& map) const {
  std::vector<Class> out;
  for (const auto& cls : classes_) {
    Class c;
    for (const auto& label : cls) {
      c.push_back({label.output, map.at(label.output).at(static_cast<std::size_t>(label.outcome - 1))});
    }
    out.push_back(std::move(c));
  }
  return OrderRelation(std::move(out));
}

std::string OrderRelation::str() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < classes_.size(); ++r) {
    if (r) os << " < ";
    os << '{';
    for (std::size_t i = 0; i < classes_[r].size(); ++i) {
      os << (i ? "," : "") << classes_[r][i].output + 1 << ':' << classes_[r][i].outcome;
    }
    os << '}';
  }
  return os.str();
}

OrderRelation OrderRelation::chsh_d1() { return by_outcome_index({2, 2}); }

OrderRelation OrderRelation::chsh_d2() { return alternating({2, 2}); }

OrderRelation OrderRelation::by_outcome_index(const std::vector<int>& outcome_counts,
                                              const std::vector<bool>& reversed) {
  const int top = outcome_counts.empty() ? 0 : *std::max_element(outcome_counts.begin(), outcome_counts.end());
  std::vector<Class> classes;
  for (int a = 1; a <= top; ++a) {
    Class c;
    for (std::size_t l = 0; l < outcome_counts.size(); ++l) {
      if (a > outcome_counts[l]) continue;
      const bool rev = l < reversed.size() && reversed[l];
      c.push_back({l, rev ? outcome_counts[l] + 1 - a : a});
    }
    classes.push_back(std::move(c));
  }
  return OrderRelation(std::move(classes));
}

OrderRelation OrderRelation::alternating(const std::vector<int>& outcome_counts) {
  std::vector<bool> reversed(outcome_counts.size());
  for (std::size_t l = 1; l < reversed.size(); l += 2) reversed[l] = true;
  return by_outcome_index(outcome_counts, reversed);
}

Rational order_distance(const Dataset& dataset, const Treatment& treatment, std::size_t from_input,
                        std::size_t to_input, const OrderRelation& order) {
  const auto& design = dataset.design;
  if (from_input >= design.input_count() || to_input >= design.input_count()) {
    throw InvalidInput("input position out of range");
  }
  if (from_input == to_input) throw InvalidInput("order distance needs two distinct inputs");
  order.check_covers(design);
  Rational d;
  for (const auto& [outcome, p] : dataset.table(treatment)) {
    if (order.precedes({from_input, outcome.at(from_input)}, {to_input, outcome.at(to_input)})) d += p;
  }
  return d;
}

// ---------------------------------------------------------------------------

std::string to_string(const InputPoint& point) {
  return "(" + std::to_string(point.input + 1) + "," + std::to_string(point.value) + ")";
}

std::string to_string(const PointSequence& sequence) {
  std::string s;
  for (std::size_t i = 0; i < sequence.size(); ++i) s += (i ? " " : "") + to_string(sequence[i]);
  return s;
}

std::vector<Treatment> realizing_treatments(const ExperimentDesign& design, const std::vector<InputPoint>& points) {
  std::vector<Treatment> out;
  for (std::size_t pos : design.canonical_treatment_order()) {
    const auto& t = design.treatments[pos];
    const bool all = std::all_of(points.begin(), points.end(), [&](const InputPoint& x) {
      return x.input < t.size() && t[x.input] == x.value;
    });
    if (all) out.push_back(t);
  }
  return out;
}

namespace {

struct PointGraph {
  std::vector<InputPoint> points;
  std::vector<std::vector<bool>> co;  // co-occur in some treatment
  const ExperimentDesign* design;

  explicit PointGraph(const ExperimentDesign& d) : design(&d) {
    for (std::size_t l = 0; l < d.input_count(); ++l) {
      for (int w = 1; w <= d.value_count(l); ++w) points.push_back({l, w});
    }
    co.assign(points.size(), std::vector<bool>(points.size(), false));
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t j = 0; j < points.size(); ++j) {
        if (i == j || points[i].input == points[j].input) continue;
        co[i][j] = !realizing_treatments(d, {points[i], points[j]}).empty();
      }
    }
  }

  bool triple(std::size_t a, std::size_t b, std::size_t c) const {
    return !realizing_treatments(*design, {points[a], points[b], points[c]}).empty();
  }
};

}  // namespace

SequenceEnumeration enumerate_irreducible_sequences(const ExperimentDesign& design, const SequenceOptions& options) {
  if (options.max_len < 3) throw InvalidInput("max_len must be at least 3");
  const PointGraph g(design);
  const std::size_t np = g.points.size();
  SequenceEnumeration result;
  std::vector<std::size_t> path;
  std::vector<bool> used(np, false);

  auto record = [&](const std::vector<std::size_t>& seq) {
    if (result.sequences.size() >= options.guard) {
      throw GuardExceeded("more than " + std::to_string(options.guard) + " irreducible sequences", "--max-sequences");
    }
    PointSequence s;
    for (std::size_t i : seq) s.push_back(g.points[i]);
    result.sequences.push_back(std::move(s));
  };

  // Candidates y extending the open chain `path`: y co-occurs with the last
  // point and with no interior point x_2..x_{k−1}.
  auto admissible = [&](std::size_t y) {
    if (used[y] || !g.co[path.back()][y]) return false;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      if (g.co[path[i]][y]) return false;
    }
    return true;
  };

  auto extend = [&](auto&& self) -> void {
    for (std::size_t y = 0; y < np; ++y) {
      if (!admissible(y)) continue;
      if (path.size() == 1) {
        path.push_back(y);
        used[y] = true;
        self(self);
        used[y] = false;
        path.pop_back();
        continue;
      }
      if (g.co[path.front()][y]) {
        // y closes the chain.
        if (path.size() == 2 && g.triple(path[0], path[1], y)) continue;
        auto seq = path;
        seq.push_back(y);
        record(seq);
        continue;
      }
      if (path.size() + 1 == options.max_len) {
        result.truncated = true;
        continue;
      }
      path.push_back(y);
      used[y] = true;
      self(self);
      used[y] = false;
      path.pop_back();
    }
  };

  for (std::size_t x = 0; x < np; ++x) {
    path = {x};
    used[x] = true;
    extend(extend);
    used[x] = false;
  }
  std::stable_sort(result.sequences.begin(), result.sequences.end(),
                   [](const PointSequence& a, const PointSequence& b) {
                     return a.size() != b.size() ? a.size() < b.size() : a < b;
                   });
  return result;
}

std::vector<PointSequence> enumerate_tetradic_sequences(const ExperimentDesign& design) {
  if (!design.is_full_factorial()) {
    throw InvalidInput("tetradic sequences require a full-factorial design; use irreducible sequences instead");
  }
  std::vector<PointSequence> out;
  const std::size_t n = design.input_count();
  for (std::size_t l1 = 0; l1 < n; ++l1) {
    for (std::size_t l2 = 0; l2 < n; ++l2) {
      if (l1 == l2) continue;
      for (int x = 1; x <= design.value_count(l1); ++x) {
        for (int y = 1; y <= design.value_count(l2); ++y) {
          for (int s = 1; s <= design.value_count(l1); ++s) {
            if (s == x) continue;
            for (int t = 1; t <= design.value_count(l2); ++t) {
              if (t == y) continue;
              out.push_back({{l1, x}, {l2, y}, {l1, s}, {l2, t}});
            }
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointSequence> reversal_classes(const std::vector<PointSequence>& sequences) {
  std::set<PointSequence> seen;
  std::vector<PointSequence> out;
  for (const auto& s : sequences) {
    PointSequence rev(s.rbegin(), s.rend());
    const PointSequence& key = std::min(s, rev);
    if (seen.insert(key).second) out.push_back(key);
  }
  return out;
}

bool ChainReport::pass() const noexcept {
  return std::all_of(records.begin(), records.end(), [](const ChainRecord& r) { return r.pass(); });
}

const ChainRecord* ChainReport::first_failure() const noexcept {
  for (const auto& r : records) {
    if (!r.pass()) return &r;
  }
  return nullptr;
}

ChainReport chain_test(const Dataset& dataset, const OrderRelation& order, const std::vector<PointSequence>& sequences) {
  require_valid(dataset);
  order.check_covers(dataset.design);

  // (from, to) → [(treatment, distance)] over every realizing treatment.
  std::map<std::pair<InputPoint, InputPoint>, std::vector<std::pair<Treatment, Rational>>> cache;
  auto link_values = [&](const InputPoint& a, const InputPoint& b) -> const std::vector<std::pair<Treatment, Rational>>& {
    auto [it, inserted] = cache.try_emplace({a, b});
    if (inserted) {
      for (const auto& t : realizing_treatments(dataset.design, {a, b})) {
        if (a.input == b.input) break;
        it->second.emplace_back(t, order_distance(dataset, t, a.input, b.input, order));
      }
      if (it->second.empty()) {
        throw InvalidInput("sequence is not treatment-realizable: " + to_string(a) + " and " + to_string(b) +
                           " never occur in the same treatment");
      }
    }
    return it->second;
  };

  ChainReport report;
  for (const auto& seq : sequences) {
    if (seq.size() < 3) throw InvalidInput("chain sequences need at least 3 points");
    ChainRecord rec;
    rec.sequence = seq;
    const auto& lhs = link_values(seq.front(), seq.back());
    rec.lhs = lhs.front().second;
    for (const auto& [t, d] : lhs) {
      rec.realizations.push_back({0, t, d});
      if (d > rec.lhs) rec.lhs = d;
    }
    for (std::size_t i = 1; i < seq.size(); ++i) {
      const auto& link = link_values(seq[i - 1], seq[i]);
      Rational best = link.front().second;
      for (const auto& [t, d] : link) {
        rec.realizations.push_back({i, t, d});
        if (d < best) best = d;
      }
      rec.rhs += best;
    }
    rec.slack = rec.rhs - rec.lhs;
    report.records.push_back(std::move(rec));
  }
  return report;
}

// ---------------------------------------------------------------------------

bool has_chsh_shape(const ExperimentDesign& design) {
  return design.input_count() == 2 && design.value_count(0) == 2 && design.value_count(1) == 2 &&
         design.outcome_count(0) == 2 && design.outcome_count(1) == 2 && design.is_full_factorial();
}

bool FineReport::pass() const noexcept {
  return std::all_of(inequalities.begin(), inequalities.end(), [](const FineInequality& i) { return i.holds; });
}

FineReport fine_inequalities(const Dataset& dataset) {
  require_valid(dataset);
  if (!has_chsh_shape(dataset.design)) {
    throw InvalidInput("Fine inequalities need two binary inputs with binary outputs and all four treatments");
  }
  auto ms = check_marginal_selectivity(dataset);
  if (!ms.pass()) throw MarginalSelectivityError("Fine inequalities require marginal selectivity", std::move(ms));

  auto p11 = [&](int i, int j) { return dataset.probability({i, j}, {1, 1}); };
  // Marginals are well defined by marginal selectivity.
  auto first = [&](int i) { return p11(i, 1) + dataset.probability({i, 1}, {1, 2}); };
  auto second = [&](int j) { return p11(1, j) + dataset.probability({1, j}, {2, 1}); };

  // Each expression subtracts p11 at one treatment (i*, j*) and the
  // marginals at the opposite values, in the order the family is usually
  // listed.
  struct Spec {
    int i, j;
    const char* text;
  };
  static constexpr std::array<Spec, 4> specs = {{
      {1, 2, "p11|11 + p11|21 + p11|22 - p11|12 - p1.|2. - p.1|.1"},
      {1, 1, "p11|12 + p11|22 + p11|21 - p11|11 - p1.|2. - p.1|.2"},
      {2, 2, "p11|21 + p11|11 + p11|12 - p11|22 - p1.|1. - p.1|.1"},
      {2, 1, "p11|22 + p11|12 + p11|11 - p11|21 - p1.|1. - p.1|.2"},
  }};

  FineReport report;
  for (std::size_t e = 0; e < specs.size(); ++e) {
    const auto& sp = specs[e];
    Rational v;
    for (int i = 1; i <= 2; ++i) {
      for (int j = 1; j <= 2; ++j) v += (i == sp.i && j == sp.j) ? -p11(i, j) : p11(i, j);
    }
    v -= first(3 - sp.i);
    v -= second(3 - sp.j);
    report.expressions[e] = {sp.text, v};
    report.inequalities.push_back({e, false, Rational(-1), v >= Rational(-1), std::string("-1 <= ") + sp.text});
    report.inequalities.push_back({e, true, Rational(0), v <= Rational(0), std::string(sp.text) + " <= 0"});
  }
  return report;
}

// ---------------------------------------------------------------------------

AxiomReport check_pq_metric_axioms(const JointDistribution& joint, const OrderRelation& order) {
  const std::size_t k = joint.alphabet.size();
  order.check_covers(joint.alphabet);
  AxiomReport report;
  report.distances.assign(k, std::vector<Rational>(k));

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      // From the bivariate marginal of (H_i, H_j).
      std::map<std::pair<int, int>, Rational> pair;
      for (const auto& [v, p] : joint.probabilities) pair[{v.at(i), v.at(j)}] += p;
      Rational from_pair;
      for (const auto& [ab, p] : pair) {
        if (order.precedes({i, ab.first}, {j, ab.second})) from_pair += p;
      }
      // Directly over the full joint.
      Rational direct;
      for (const auto& [v, p] : joint.probabilities) {
        if (order.precedes({i, v.at(i)}, {j, v.at(j)})) direct += p;
      }
      report.distances[i][j] = from_pair;
      const std::string pair_name = "D(H" + std::to_string(i + 1) + ",H" + std::to_string(j + 1) + ")";
      if (from_pair != direct) {
        report.depends_on_pair_only = false;
        report.failures.push_back(pair_name + " differs between the pair marginal and the full joint");
      }
      if (from_pair.sign() < 0) {
        report.nonnegative = false;
        report.failures.push_back(pair_name + " is negative");
      }
      if (i == j && !from_pair.is_zero()) {
        report.zero_diagonal = false;
        report.failures.push_back(pair_name + " is not zero");
      }
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t c = 0; c < k; ++c) {
        if (report.distances[a][c] > report.distances[a][b] + report.distances[b][c]) {
          report.triangle = false;
          report.failures.push_back("triangle inequality fails for (" + std::to_string(a + 1) + "," +
                                    std::to_string(b + 1) + "," + std::to_string(c + 1) + ")");
        }
      }
    }
  }
  return report;
}

}  // namespace selinf
