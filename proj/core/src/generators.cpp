#include "selinf/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace selinf {

Dataset gen_classical(const ExperimentDesign& design, const QVector& q) {
  return construct_si2(q, design).simulate(design);
}

ClassicalSample gen_classical(const ExperimentDesign& design, std::uint64_t seed, const ClassicalOptions& options) {
  if (options.max_atoms == 0 || options.max_weight < 1) throw InvalidInput("classical generator needs atoms and weights");
  QIndex index(design);
  const auto columns = index.checked_size();
  if (!columns || *columns > options.column_guard) {
    throw GuardExceeded("Q-vector for this design is above the guard of " + std::to_string(options.column_guard),
                        "--column-guard");
  }
  // Plain modular reduction keeps the stream identical across standard libraries.
  std::mt19937_64 rng(seed);
  const std::size_t atoms = 1 + static_cast<std::size_t>(rng() % options.max_atoms);
  std::map<std::size_t, std::int64_t> weights;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < atoms; ++i) {
    const std::size_t column = static_cast<std::size_t>(rng() % *columns);
    const auto w = static_cast<std::int64_t>(1 + rng() % static_cast<std::uint64_t>(options.max_weight));
    weights[column] += w;
    total += w;
  }
  ClassicalSample sample{{}, {index, std::vector<Rational>(*columns)}};
  for (const auto& [column, w] : weights) sample.q.values[column] = Rational(w, total);
  sample.dataset = gen_classical(design, sample.q);
  return sample;
}

Dataset gen_prbox() {
  Dataset d;
  d.design = make_factorial_design({2, 2}, {2, 2});
  const Rational half(1, 2);
  for (const auto& t : d.design.treatments) {
    if (t == Treatment{2, 2}) {
      d.tables.push_back({{{1, 2}, half}, {{2, 1}, half}});
    } else {
      d.tables.push_back({{{1, 1}, half}, {{2, 2}, half}});
    }
  }
  return d;
}

double Angle::radians() const { return multiple.to_double() * std::numbers::pi; }

Angle parse_angle(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '*') s += c;
  }
  const auto pos = s.find("pi");
  if (pos == std::string::npos) {
    const Rational r = Rational::parse(s);
    if (!r.is_zero()) throw ParseError("angle '" + std::string(text) + "' must be a multiple of pi");
    return {r};
  }
  std::string coef = s.substr(0, pos);
  std::string rest = s.substr(pos + 2);
  if (coef.empty() || coef == "+") coef = "1";
  if (coef == "-") coef = "-1";
  Rational value;
  try {
    value = Rational::parse(coef);
    if (!rest.empty()) {
      if (rest.front() != '/') throw ParseError("");
      value /= Rational::parse(rest.substr(1));
    }
  } catch (const Error&) {
    throw ParseError("malformed angle '" + std::string(text) + "'");
  }
  return {value};
}

AngleSpec parse_angle_spec(std::string_view text) {
  std::vector<Angle> all;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    all.push_back(parse_angle(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (all.size() < 2 || all.size() % 2 != 0) {
    throw ParseError("angle list needs an even number of angles, half for each input");
  }
  const auto half = static_cast<std::ptrdiff_t>(all.size() / 2);
  return {{all.begin(), all.begin() + half}, {all.begin() + half, all.end()}};
}

Dataset gen_singlet(const AngleSpec& angles, int precision) {
  if (precision < 6) throw InvalidInput("singlet precision must be at least 6 digits");
  if (precision > 15) throw InvalidInput("singlet precision above 15 digits exceeds double accuracy");
  if (angles.first.empty() || angles.second.empty()) throw InvalidInput("every input needs at least one angle");
  const int k1 = static_cast<int>(angles.first.size());
  const int k2 = static_cast<int>(angles.second.size());
  Dataset d;
  d.design = make_factorial_design({k1, k2}, {2, 2});
  const double scale = std::pow(10.0, precision);
  for (const auto& t : d.design.treatments) {
    const double a = angles.first[static_cast<std::size_t>(t[0] - 1)].radians();
    const double b = angles.second[static_cast<std::size_t>(t[1] - 1)].radians();
    const double e = -std::cos(a - b);
    const auto same = static_cast<std::int64_t>(std::llround((1 + e) / 4 * scale));
    const auto diff = static_cast<std::int64_t>(std::llround((1 - e) / 4 * scale));
    const Rational total(2 * (same + diff));
    Table table{{{1, 1}, Rational(same) / total},
                {{2, 2}, Rational(same) / total},
                {{1, 2}, Rational(diff) / total},
                {{2, 1}, Rational(diff) / total}};
    d.tables.push_back(drop_zeros(table));
  }
  return d;
}

Dataset gen_ghz() {
  Dataset d;
  d.design = make_factorial_design({2, 2, 2}, {2, 2, 2});
  for (auto& in : d.design.inputs) in.values = {"X", "Y"};
  for (auto& out : d.design.outputs) out.values = {"+1", "-1"};
  for (const auto& t : d.design.treatments) {
    const int ys = static_cast<int>(std::count(t.begin(), t.end(), 2));
    Table table;
    for_each_tuple({2, 2, 2}, [&](const OutcomeTuple& o) {
      const int minus = static_cast<int>(std::count(o.begin(), o.end(), 2));
      const int parity = minus % 2 == 0 ? 1 : -1;
      // cos of the summed phases: 1, 0, −1, 0 for 0..3 Y settings.
      const int c = ys == 0 ? 1 : (ys == 2 ? -1 : 0);
      const Rational p = Rational(1 + parity * c, 8);
      if (!p.is_zero()) table[o] = p;
    });
    d.tables.push_back(std::move(table));
  }
  return d;
}

Dataset gen_double_detection(const std::vector<std::vector<Rational>>& hit_rates, const Rational& coupling) {
  if (hit_rates.size() != 2 || hit_rates[0].empty() || hit_rates[1].empty()) {
    throw InvalidInput("double detection needs hit rates for two areas");
  }
  if (coupling.sign() < 0 || coupling > Rational(1)) throw InvalidInput("coupling must lie in [0, 1]");
  for (const auto& area : hit_rates) {
    for (const auto& r : area) {
      if (r.sign() < 0 || r > Rational(1)) throw InvalidInput("hit rate " + r.str() + " outside [0, 1]");
    }
  }
  const int k1 = static_cast<int>(hit_rates[0].size());
  const int k2 = static_cast<int>(hit_rates[1].size());
  Dataset d;
  d.design = make_factorial_design({k1, k2}, {2, 2});
  d.design.inputs[0].label = "intensity1";
  d.design.inputs[1].label = "intensity2";
  d.design.outputs[0] = {"detect1", {"Yes", "No"}};
  d.design.outputs[1] = {"detect2", {"Yes", "No"}};
  for (const auto& t : d.design.treatments) {
    const Rational& r1 = hit_rates[0][static_cast<std::size_t>(t[0] - 1)];
    const Rational& r2 = hit_rates[1][static_cast<std::size_t>(t[1] - 1)];
    const Rational yy = coupling * std::min(r1, r2) + (Rational(1) - coupling) * r1 * r2;
    Table table{{{1, 1}, yy}, {{1, 2}, r1 - yy}, {{2, 1}, r2 - yy}, {{2, 2}, Rational(1) - r1 - r2 + yy}};
    for (const auto& [o, p] : table) {
      if (p.sign() < 0) throw InvalidInput("double-detection parameters give a negative probability");
    }
    d.tables.push_back(drop_zeros(table));
  }
  return d;
}

Dataset mix(const Dataset& a, const Dataset& b, const Rational& weight) {
  if (!(a.design == b.design)) throw InvalidInput("cannot mix datasets with different designs");
  if (weight.sign() < 0 || weight > Rational(1)) throw InvalidInput("mixing weight must lie in [0, 1]");
  Dataset out{a.design, {}};
  const Rational rest = Rational(1) - weight;
  for (std::size_t i = 0; i < a.tables.size(); ++i) {
    Table t;
    for (const auto& [o, p] : a.tables[i]) t[o] += weight * p;
    for (const auto& [o, p] : b.tables.at(i)) t[o] += rest * p;
    out.tables.push_back(drop_zeros(t));
  }
  return out;
}

}  // namespace selinf
