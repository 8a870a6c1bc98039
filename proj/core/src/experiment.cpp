#include "selinf/experiment.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace selinf {

namespace {

std::string tuple_str(const std::vector<int>& t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
  os << ')';
  return os.str();
}

std::vector<std::string> numbered_labels(int count) {
  std::vector<std::string> labels;
  for (int i = 1; i <= count; ++i) labels.push_back(std::to_string(i));
  return labels;
}

}  // namespace

std::size_t ExperimentDesign::outcome_tuple_count() const {
  std::size_t n = 1;
  for (const auto& o : outputs) n *= o.values.size();
  return n;
}

std::optional<std::size_t> ExperimentDesign::find_treatment(const Treatment& t) const {
  const auto it = std::find(treatments.begin(), treatments.end(), t);
  if (it == treatments.end()) return std::nullopt;
  return static_cast<std::size_t>(it - treatments.begin());
}

bool ExperimentDesign::is_full_factorial() const {
  std::set<Treatment> present(treatments.begin(), treatments.end());
  std::vector<int> radix;
  for (std::size_t l = 0; l < input_count(); ++l) radix.push_back(value_count(l));
  bool all = true;
  for_each_tuple(radix, [&](const std::vector<int>& t) {
    if (!present.contains(t)) all = false;
  });
  return all && present.size() == treatments.size();
}

std::vector<std::size_t> ExperimentDesign::canonical_treatment_order() const {
  std::vector<std::size_t> order(treatments.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return treatments[a] < treatments[b]; });
  return order;
}

ExperimentDesign make_design(const std::vector<int>& value_counts, const std::vector<int>& outcome_counts,
                             std::vector<Treatment> treatments) {
  if (value_counts.size() != outcome_counts.size()) {
    throw InvalidInput("value and outcome counts differ in length");
  }
  ExperimentDesign d;
  for (std::size_t l = 0; l < value_counts.size(); ++l) {
    d.inputs.push_back({"alpha" + std::to_string(l + 1), numbered_labels(value_counts[l])});
    d.outputs.push_back({"A" + std::to_string(l + 1), numbered_labels(outcome_counts[l])});
  }
  std::sort(treatments.begin(), treatments.end());
  d.treatments = std::move(treatments);
  return d;
}

ExperimentDesign make_factorial_design(const std::vector<int>& value_counts,
                                       const std::vector<int>& outcome_counts) {
  std::vector<Treatment> all;
  for_each_tuple(value_counts, [&](const std::vector<int>& t) { all.push_back(t); });
  return make_design(value_counts, outcome_counts, std::move(all));
}

const Table& Dataset::table(const Treatment& t) const {
  const auto pos = design.find_treatment(t);
  if (!pos || *pos >= tables.size()) throw InvalidInput("unknown treatment " + tuple_str(t));
  return tables[*pos];
}

Rational Dataset::probability(const Treatment& t, const OutcomeTuple& outcome) const {
  const Table& tab = table(t);
  const auto it = tab.find(outcome);
  return it == tab.end() ? Rational{} : it->second;
}

Table drop_zeros(const Table& table) {
  Table out;
  for (const auto& [k, p] : table) {
    if (!p.is_zero()) out.emplace(k, p);
  }
  return out;
}

Dataset canonical(const Dataset& dataset) {
  Dataset out;
  out.design = dataset.design;
  out.design.treatments.clear();
  for (std::size_t pos : dataset.design.canonical_treatment_order()) {
    out.design.treatments.push_back(dataset.design.treatments[pos]);
    out.tables.push_back(pos < dataset.tables.size() ? drop_zeros(dataset.tables[pos]) : Table{});
  }
  return out;
}

// ---------------------------------------------------------------------------

ValidationReport validate_dataset(const Dataset& dataset) {
  ValidationReport report;
  const auto& d = dataset.design;
  auto breach = [&](BreachKind kind, std::string msg) { report.breaches.push_back({kind, std::move(msg)}); };

  if (d.inputs.empty()) breach(BreachKind::kDesign, "design has no inputs");
  if (d.inputs.size() != d.outputs.size()) {
    breach(BreachKind::kDesign, "input count " + std::to_string(d.inputs.size()) + " differs from output count " +
                                    std::to_string(d.outputs.size()));
    return report;
  }
  std::set<std::string> input_labels;
  for (const auto& in : d.inputs) {
    if (!input_labels.insert(in.label).second) breach(BreachKind::kDesign, "duplicate input label '" + in.label + "'");
    if (in.values.empty()) breach(BreachKind::kDesign, "input '" + in.label + "' has no values");
    std::set<std::string> vals;
    for (const auto& v : in.values) {
      if (!vals.insert(v).second) {
        breach(BreachKind::kDesign, "duplicate value label '" + v + "' in input '" + in.label + "'");
      }
    }
  }
  std::set<std::string> output_labels;
  for (const auto& out : d.outputs) {
    if (!output_labels.insert(out.label).second) {
      breach(BreachKind::kDesign, "duplicate output label '" + out.label + "'");
    }
    if (out.values.empty()) breach(BreachKind::kDesign, "output '" + out.label + "' has no outcomes");
    std::set<std::string> vals;
    for (const auto& v : out.values) {
      if (!vals.insert(v).second) {
        breach(BreachKind::kDesign, "duplicate outcome label '" + v + "' in output '" + out.label + "'");
      }
    }
  }
  if (d.treatments.empty()) breach(BreachKind::kDesign, "treatment set is empty");

  std::set<Treatment> seen;
  for (const auto& t : d.treatments) {
    bool in_range = t.size() == d.input_count();
    for (std::size_t l = 0; in_range && l < t.size(); ++l) {
      in_range = t[l] >= 1 && t[l] <= d.value_count(l);
    }
    if (!in_range) breach(BreachKind::kTreatmentOutOfRange, "treatment " + tuple_str(t) + " lies outside the design");
    if (!seen.insert(t).second) breach(BreachKind::kDuplicateTreatment, "duplicate treatment " + tuple_str(t));
  }

  if (dataset.tables.size() != d.treatments.size()) {
    breach(BreachKind::kMissingTable, std::to_string(d.treatments.size()) + " treatments but " +
                                          std::to_string(dataset.tables.size()) + " tables");
  }
  const std::size_t count = std::min(dataset.tables.size(), d.treatments.size());
  for (std::size_t pos = 0; pos < count; ++pos) {
    const std::string where = "treatment " + tuple_str(d.treatments[pos]) + ": ";
    Rational mass;
    for (const auto& [outcome, p] : dataset.tables[pos]) {
      bool in_range = outcome.size() == d.input_count();
      for (std::size_t l = 0; in_range && l < outcome.size(); ++l) {
        in_range = outcome[l] >= 1 && outcome[l] <= d.outcome_count(l);
      }
      if (!in_range) breach(BreachKind::kOutcomeOutOfRange, where + "outcome " + tuple_str(outcome) + " out of range");
      if (p.sign() < 0) {
        breach(BreachKind::kNegativeProbability, where + "negative probability " + p.str() + " at " + tuple_str(outcome));
      }
      mass += p;
    }
    if (mass != Rational(1)) {
      const Rational gap = mass - Rational(1);
      breach(BreachKind::kMassNotOne,
             where + "mass != 1, " + (gap.sign() < 0 ? "deficit " + (-gap).str() : "excess " + gap.str()));
    }
  }
  return report;
}

void require_valid(const Dataset& dataset) {
  const auto report = validate_dataset(dataset);
  if (report.valid()) return;
  std::string msg = "invalid dataset:";
  for (const auto& b : report.breaches) msg += "\n  " + b.message;
  throw InvalidInput(msg);
}

// ---------------------------------------------------------------------------

void check_subset(const ExperimentDesign& design, const InputSubset& subset) {
  if (subset.empty()) throw InvalidInput("input subset is empty");
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= design.input_count()) {
      throw InvalidInput("input position " + std::to_string(subset[i]) + " out of range");
    }
    if (i > 0 && subset[i] <= subset[i - 1]) throw InvalidInput("input subset must be sorted and duplicate-free");
  }
}

Table marginalize(const Table& table, const InputSubset& subset) {
  Table out;
  for (const auto& [outcome, p] : table) {
    if (p.is_zero()) continue;
    OutcomeTuple key;
    key.reserve(subset.size());
    for (std::size_t l : subset) key.push_back(outcome.at(l));
    out[key] += p;
  }
  return drop_zeros(out);
}

Table marginal(const Dataset& dataset, const Treatment& treatment, const InputSubset& subset) {
  check_subset(dataset.design, subset);
  return marginalize(dataset.table(treatment), subset);
}

namespace {

Rational max_abs_difference(const Table& a, const Table& b) {
  Rational worst;
  auto update = [&](const Rational& diff) {
    if (abs(diff) > worst) worst = abs(diff);
  };
  for (const auto& [k, p] : a) {
    const auto it = b.find(k);
    update(it == b.end() ? p : p - it->second);
  }
  for (const auto& [k, p] : b) {
    if (!a.contains(k)) update(p);
  }
  return worst;
}

std::size_t pair_count(std::size_t group) { return group * (group - 1) / 2; }

std::map<Treatment, std::vector<std::size_t>> group_by_projection(const ExperimentDesign& design,
                                                                  const InputSubset& subset) {
  std::map<Treatment, std::vector<std::size_t>> groups;
  for (std::size_t pos : design.canonical_treatment_order()) {
    Treatment proj;
    for (std::size_t l : subset) proj.push_back(design.treatments[pos][l]);
    groups[proj].push_back(pos);
  }
  return groups;
}

std::vector<InputSubset> subsets_up_to(std::size_t n, std::size_t max_size) {
  std::vector<InputSubset> out;
  for (std::size_t size = 1; size <= max_size && size < n; ++size) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      InputSubset s;
      for (std::size_t i = 0; i < n; ++i) {
        if (pick[i]) s.push_back(i);
      }
      out.push_back(std::move(s));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return out;
}

}  // namespace

std::vector<MarginalViolation> compare_subset_marginals(const Dataset& dataset, const InputSubset& subset,
                                                        std::size_t* comparisons) {
  check_subset(dataset.design, subset);
  std::vector<MarginalViolation> out;
  for (const auto& [proj, members] : group_by_projection(dataset.design, subset)) {
    std::vector<Table> margins;
    for (std::size_t pos : members) margins.push_back(marginalize(dataset.tables.at(pos), subset));
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (comparisons) ++*comparisons;
        if (margins[i] == margins[j]) continue;
        out.push_back({subset, dataset.design.treatments[members[i]], dataset.design.treatments[members[j]],
                       max_abs_difference(margins[i], margins[j])});
      }
    }
  }
  return out;
}

MarginalReport check_marginal_selectivity(const Dataset& dataset, const MarginalOptions& options) {
  const std::size_t n = dataset.design.input_count();
  const std::size_t max_size = options.max_subset_size == 0 ? (n > 0 ? n - 1 : 0) : options.max_subset_size;
  const auto subsets = subsets_up_to(n, max_size);

  std::size_t planned = 0;
  for (const auto& s : subsets) {
    for (const auto& [proj, members] : group_by_projection(dataset.design, s)) planned += pair_count(members.size());
  }
  if (planned > options.comparison_guard && !options.allow_large) {
    throw GuardExceeded("marginal selectivity needs " + std::to_string(planned) + " comparisons, above the guard of " +
                            std::to_string(options.comparison_guard),
                        "--allow-large-marginal-check");
  }

  MarginalReport report;
  for (const auto& s : subsets) {
    auto v = compare_subset_marginals(dataset, s, &report.comparisons);
    report.violations.insert(report.violations.end(), std::make_move_iterator(v.begin()),
                             std::make_move_iterator(v.end()));
  }
  return report;
}

// ---------------------------------------------------------------------------

OutputTransform identity_transform(const ExperimentDesign& design) {
  OutputTransform t;
  t.outputs = design.outputs;
  for (std::size_t l = 0; l < design.input_count(); ++l) {
    std::vector<int> id(static_cast<std::size_t>(design.outcome_count(l)));
    std::iota(id.begin(), id.end(), 1);
    t.maps.emplace_back(static_cast<std::size_t>(design.value_count(l)), id);
  }
  return t;
}

Dataset transform_outputs(const Dataset& dataset, const OutputTransform& transform) {
  require_valid(dataset);
  const auto& d = dataset.design;
  if (transform.outputs.size() != d.input_count() || transform.maps.size() != d.input_count()) {
    throw InvalidInput("transform must cover every input");
  }
  for (std::size_t l = 0; l < d.input_count(); ++l) {
    const int new_m = static_cast<int>(transform.outputs[l].values.size());
    if (new_m < 1) throw InvalidInput("transformed output '" + transform.outputs[l].label + "' has no outcomes");
    if (static_cast<int>(transform.maps[l].size()) != d.value_count(l)) {
      throw InvalidInput("transform for input " + std::to_string(l + 1) + " must give a map per value");
    }
    for (std::size_t w = 0; w < transform.maps[l].size(); ++w) {
      const auto& map = transform.maps[l][w];
      if (static_cast<int>(map.size()) != d.outcome_count(l)) {
        throw InvalidInput("partial map for input " + std::to_string(l + 1) + ", value " + std::to_string(w + 1));
      }
      for (int image : map) {
        if (image < 1 || image > new_m) {
          throw InvalidInput("map for input " + std::to_string(l + 1) + ", value " + std::to_string(w + 1) +
                             " leaves the new outcome set");
        }
      }
    }
  }

  Dataset out;
  out.design = d;
  out.design.outputs = transform.outputs;
  for (std::size_t pos = 0; pos < d.treatments.size(); ++pos) {
    const auto& t = d.treatments[pos];
    Table pushed;
    for (const auto& [outcome, p] : dataset.tables.at(pos)) {
      OutcomeTuple image(outcome.size());
      for (std::size_t l = 0; l < outcome.size(); ++l) {
        image[l] = transform.maps[l][static_cast<std::size_t>(t[l] - 1)][static_cast<std::size_t>(outcome[l] - 1)];
      }
      pushed[image] += p;
    }
    out.tables.push_back(drop_zeros(pushed));
  }
  return out;
}

}  // namespace selinf
