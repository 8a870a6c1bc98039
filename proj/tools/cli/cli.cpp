#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "selinf/cosphericity.hpp"
#include "selinf/dataset_io.hpp"
#include "selinf/distance.hpp"
#include "selinf/generators.hpp"
#include "selinf/lft.hpp"
#include "selinf/reports.hpp"

namespace selinf::cli {

namespace {

using nlohmann::json;

std::string signed_str(const Rational& r) { return (r.sign() > 0 ? "+" : "") + r.str(); }

std::string treatment_str(const Treatment& t) { return "(" + tuple_key(t) + ")"; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  return parts;
}

std::vector<int> parse_counts(const std::string& s, const char* what) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) {
    const Rational r = Rational::parse(part);
    if (r.denominator() != 1 || r.sign() <= 0 || r > Rational(64)) {
      throw InvalidInput(std::string(what) + " must be positive integers up to 64");
    }
    out.push_back(static_cast<int>(r.numerator().get_si()));
  }
  if (out.empty()) throw InvalidInput(std::string(what) + " list is empty");
  return out;
}

// ---------------------------------------------------------------------------
// Orders

struct NamedOrder {
  std::string name;
  OrderRelation order;
};

std::vector<int> outcome_counts(const ExperimentDesign& d) {
  std::vector<int> counts;
  for (std::size_t l = 0; l < d.input_count(); ++l) counts.push_back(d.outcome_count(l));
  return counts;
}

OrderRelation order_from_json(const json& classes) {
  if (!classes.is_array()) throw InvalidInput("an order must be an array of classes");
  std::vector<OrderRelation::Class> out;
  for (const auto& cls : classes) {
    if (!cls.is_array()) throw InvalidInput("an order class must be an array of [output, outcome] pairs");
    OrderRelation::Class c;
    for (const auto& label : cls) {
      if (!label.is_array() || label.size() != 2 || !label[0].is_number_integer() || !label[1].is_number_integer() ||
          label[0].get<int>() < 1) {
        throw InvalidInput("an order label must be an [output, outcome] pair of 1-based integers");
      }
      c.push_back({static_cast<std::size_t>(label[0].get<int>() - 1), label[1].get<int>()});
    }
    out.push_back(std::move(c));
  }
  return OrderRelation(std::move(out));
}

std::vector<NamedOrder> load_orders(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open order file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("orders")) doc = doc["orders"];
  if (!doc.is_array()) throw InvalidInput("order file must hold an array of orders");
  std::vector<NamedOrder> orders;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& entry = doc[i];
    if (entry.is_object()) {
      orders.push_back({entry.value("name", "order" + std::to_string(i + 1)), order_from_json(entry.at("classes"))});
    } else {
      orders.push_back({"order" + std::to_string(i + 1), order_from_json(entry)});
    }
  }
  return orders;
}

std::vector<NamedOrder> resolve_orders(const std::string& spec, const ExperimentDesign& design) {
  std::vector<NamedOrder> orders;
  const std::string names = spec.empty() ? "d1,d2" : spec;
  if (std::filesystem::is_regular_file(names)) {
    orders = load_orders(names);
  } else {
    for (const auto& name : split(names, ',')) {
      if (name == "d1") {
        orders.push_back({name, OrderRelation::by_outcome_index(outcome_counts(design))});
      } else if (name == "d2") {
        orders.push_back({name, OrderRelation::alternating(outcome_counts(design))});
      } else {
        throw InvalidInput("unknown order '" + name + "' (use d1, d2, or a JSON file)");
      }
    }
  }
  for (const auto& o : orders) o.order.check_covers(design);
  return orders;
}

// ---------------------------------------------------------------------------
// test

struct TestConfig {
  std::string path;
  bool no_lft = false;
  std::string orders;
  std::string tol = "1e-9";
  std::size_t max_len = 6;
  std::size_t max_sequences = 100'000;
  std::size_t column_guard = 1'000'000;
  std::size_t max_subset_size = 0;
  bool allow_large = false;
  bool json = false;
};

struct Stage {
  std::string name;
  std::string status;  // "pass", "fail", "skipped"
  std::vector<std::string> lines;
  json report;
};

Stage stage_marginals(const Dataset& d, const TestConfig& cfg) {
  Stage s{"marginal-selectivity", "pass", {}, {}};
  MarginalOptions opt;
  opt.max_subset_size = cfg.max_subset_size;
  opt.allow_large = cfg.allow_large;
  const MarginalReport report = check_marginal_selectivity(d, opt);
  s.report = to_json(report);
  if (!report.pass()) {
    s.status = "fail";
    const auto& v = report.violations.front();
    std::string subset;
    for (std::size_t l : v.subset) subset += (subset.empty() ? "" : ",") + std::to_string(l + 1);
    s.lines.push_back("marginals of outputs {" + subset + "} differ between treatments " + treatment_str(v.first) +
                      " and " + treatment_str(v.second) + " by " + v.max_discrepancy.str());
    if (report.violations.size() > 1) {
      s.lines.push_back(std::to_string(report.violations.size() - 1) + " further violation(s)");
    }
  } else {
    s.lines.push_back(std::to_string(report.comparisons) + " marginal comparisons agree");
  }
  return s;
}

Stage stage_fine(const Dataset& d) {
  Stage s{"fine-inequalities", "pass", {}, {}};
  const FineReport report = fine_inequalities(d);
  s.report = to_json(report);
  for (const auto& in : report.inequalities) {
    if (in.holds) continue;
    if (s.status == "pass") s.status = "fail";
    s.lines.push_back("Fine inequality " + in.text + " fails: value " +
                      signed_str(report.expressions[in.expression].value));
  }
  if (s.status == "pass") {
    std::string values;
    for (const auto& e : report.expressions) values += (values.empty() ? "" : ", ") + signed_str(e.value);
    s.lines.push_back("expression values " + values + " all within [-1, 0]");
  }
  return s;
}

Stage stage_chain(const Dataset& d, const TestConfig& cfg) {
  Stage s{"chain", "pass", {}, json::object()};
  const auto orders = resolve_orders(cfg.orders, d.design);
  SequenceOptions opt;
  opt.max_len = cfg.max_len;
  opt.guard = cfg.max_sequences;
  const SequenceEnumeration seqs = enumerate_irreducible_sequences(d.design, opt);
  s.report["schema_version"] = kReportSchemaVersion;
  s.report["sequences"] = seqs.sequences.size();
  s.report["truncated"] = seqs.truncated;
  s.report["orders"] = json::array();
  if (seqs.truncated) {
    s.lines.push_back("sequence enumeration truncated at length " + std::to_string(cfg.max_len) +
                      " (raise with --max-len)");
  }
  for (const auto& [name, order] : orders) {
    const ChainReport report = chain_test(d, order, seqs.sequences);
    json r = to_json(report, d.design, order);
    r["name"] = name;
    s.report["orders"].push_back(std::move(r));
    if (const ChainRecord* f = report.first_failure(); f && s.status == "pass") {
      s.status = "fail";
      s.lines.push_back("chain inequality fails for " + to_string(f->sequence) + " under order " + name + " " +
                        order.str() + ": lhs " + f->lhs.str() + " > rhs " + f->rhs.str() + ", slack " +
                        f->slack.str());
    }
  }
  if (s.status == "pass") {
    s.lines.push_back(std::to_string(seqs.sequences.size()) + " irreducible sequences hold under " +
                      std::to_string(orders.size()) + " order(s)");
  }
  return s;
}

Stage stage_cosphericity(const Dataset& d, double tol) {
  Stage s{"cosphericity", "pass", {}, {}};
  const auto battery = cosphericity_battery(d, index_value_map(d.design), tol);
  s.report = to_json(battery);
  if (battery.results.empty()) {
    s.status = "skipped";
    s.lines.push_back(battery.skipped.empty() ? "no input pair has two values each"
                                              : "no usable quad: " + battery.skipped.front().second);
    return s;
  }
  for (const auto& r : battery.results) {
    if (r.passes() || s.status == "fail") continue;
    s.status = "fail";
    const auto& q = r.quad.selection;
    std::ostringstream os;
    os << "cosphericity fails for inputs " << q.first + 1 << "," << q.second + 1 << " values (" << q.w1 << ","
       << q.w1p << ")x(" << q.w2 << "," << q.w2p << "): lhs " << r.lhs << " > rhs " << r.rhs << ", slack "
       << r.slack;
    s.lines.push_back(os.str());
  }
  if (s.status == "pass") {
    const auto marginal = std::count_if(battery.results.begin(), battery.results.end(), [](const auto& r) {
      return r.verdict == CosphericityVerdict::kMarginal;
    });
    s.lines.push_back(std::to_string(battery.results.size()) + " correlation quad(s) hold" +
                      (marginal ? " (" + std::to_string(marginal) + " marginal)" : ""));
  }
  return s;
}

Stage stage_lft(const Dataset& d, const TestConfig& cfg) {
  Stage s{"lft", "pass", {}, {}};
  LftOptions opt;
  opt.column_guard = cfg.column_guard;
  const LftVerdict v = run_lft(d, opt);
  s.report = to_json(v);
  const std::string dims = std::to_string(v.rows.size()) + "x" + std::to_string(v.columns.size());
  if (v.feasible()) {
    const Si2Model model = construct_si2(*v.witness, d.design);
    s.lines.push_back("feasible on the " + dims + " system after " + std::to_string(v.pivots) +
                      " pivots; hidden-variable model with " + std::to_string(model.atoms.size()) + " atom(s):");
    constexpr std::size_t kShown = 8;
    for (std::size_t i = 0; i < model.atoms.size() && i < kShown; ++i) {
      std::string a;
      for (std::size_t l = 0; l < model.atoms[i].assignment.size(); ++l) {
        a += (l ? " " : "") + std::string("h") + std::to_string(l + 1) + "=(" +
             tuple_key(model.atoms[i].assignment[l]) + ")";
      }
      s.lines.push_back("  " + model.atoms[i].weight.str() + "  " + a);
    }
    if (model.atoms.size() > kShown) s.lines.push_back("  ...");
  } else {
    s.status = "fail";
    const PVector p = build_p_vector(d);
    Rational yp;
    for (std::size_t r = 0; r < p.values.size(); ++r) yp += v.farkas[r] * p.values[r];
    s.lines.push_back("infeasible on the " + dims + " system after " + std::to_string(v.pivots) +
                      " pivots; Farkas vector y has y'M <= 0 and y'P = " + yp.str() + ":");
    for (std::size_t r = 0; r < v.farkas.size(); ++r) {
      if (v.farkas[r].is_zero()) continue;
      const auto [t, o] = v.rows.decode(r);
      s.lines.push_back("  y[" + p_term(o, t) + "] = " + v.farkas[r].str());
    }
  }
  return s;
}

int cmd_test(const TestConfig& cfg, std::ostream& out, std::ostream& err) {
  Dataset d;
  try {
    d = load_dataset(cfg.path);
  } catch (const ParseError& e) {
    err << cfg.path << ": " << e.what() << "\n";
    return kError;
  }
  if (const auto report = validate_dataset(d); !report.valid()) {
    err << cfg.path << ": invalid dataset\n";
    for (const auto& b : report.breaches) err << "  " << b.message << "\n";
    return kError;
  }
  const Rational tol_r = Rational::parse(cfg.tol);
  if (tol_r.sign() < 0) throw InvalidInput("--tol must be nonnegative");

  std::vector<Stage> stages;
  stages.push_back(stage_marginals(d, cfg));
  const bool selective = stages.back().status == "pass";
  auto skipped = [](std::string name, std::string why) { return Stage{std::move(name), "skipped", {why}, {}}; };
  const std::string no_ms = "marginal selectivity fails";

  if (!selective) {
    stages.push_back(skipped("fine-inequalities", no_ms));
  } else if (has_chsh_shape(d.design)) {
    stages.push_back(stage_fine(d));
  } else {
    stages.push_back(skipped("fine-inequalities", "design is not 2x2 with binary outputs"));
  }
  stages.push_back(selective ? stage_chain(d, cfg) : skipped("chain", no_ms));
  stages.push_back(selective ? stage_cosphericity(d, tol_r.to_double()) : skipped("cosphericity", no_ms));
  if (cfg.no_lft) {
    stages.push_back(skipped("lft", "disabled by --no-lft"));
  } else {
    stages.push_back(selective ? stage_lft(d, cfg) : skipped("lft", no_ms));
  }

  const Stage* first_fail = nullptr;
  for (const auto& s : stages) {
    if (s.status == "fail") {
      first_fail = &s;
      break;
    }
  }
  const int status = first_fail ? kRuledOut : kPass;

  if (cfg.json) {
    json doc{{"schema_version", kReportSchemaVersion},
             {"file", cfg.path},
             {"status", status},
             {"verdict", first_fail ? "ruled-out" : "consistent"},
             {"first_failure", first_fail ? json(first_fail->name) : json(nullptr)},
             {"stages", json::array()}};
    for (const auto& s : stages) {
      doc["stages"].push_back({{"name", s.name}, {"status", s.status}, {"summary", s.lines}, {"report", s.report}});
    }
    out << doc.dump(2) << "\n";
  } else {
    for (const auto& s : stages) {
      std::string tag = s.status == "pass" ? "PASS" : (s.status == "fail" ? "FAIL" : "SKIP");
      out << "[" << tag << "] " << s.name << "\n";
      for (const auto& line : s.lines) out << "       " << line << "\n";
    }
    if (first_fail) {
      out << "verdict: selective influences ruled out by " << first_fail->name << "\n";
    } else {
      out << "verdict: consistent with selective influences\n";
    }
  }
  return status;
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const std::string& path, bool as_json, std::ostream& out, std::ostream& err) {
  Dataset d;
  try {
    d = load_dataset(path);
  } catch (const ParseError& e) {
    err << path << ": " << e.what() << "\n";
    return kError;
  }
  const ValidationReport report = validate_dataset(d);
  if (as_json) {
    out << to_json(report).dump(2) << "\n";
  } else if (report.valid()) {
    out << path << ": valid (" << d.design.input_count() << " inputs, " << d.design.treatments.size()
        << " treatments)\n";
  } else {
    out << path << ": invalid\n";
    for (const auto& b : report.breaches) out << "  " << b.message << "\n";
  }
  return report.valid() ? kPass : kRuledOut;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateConfig {
  std::string kind;
  std::string output = "-";
  std::uint64_t seed = 1;
  std::string values = "2,2";
  std::string outcomes = "2,2";
  std::size_t max_atoms = 8;
  std::string angles = "0,pi/2,pi/4,3pi/4";
  int precision = 12;
  std::string rates = "1/2,3/4,1/3,2/3";
  std::string coupling = "1/2";
};

int cmd_generate(const GenerateConfig& cfg, std::ostream& out, std::ostream& err) {
  Dataset d;
  if (cfg.kind == "classical") {
    const auto values = parse_counts(cfg.values, "--values");
    const auto outcomes = parse_counts(cfg.outcomes, "--outcomes");
    if (values.size() != outcomes.size()) throw InvalidInput("--values and --outcomes need one entry per input");
    ClassicalOptions opt;
    opt.max_atoms = cfg.max_atoms;
    d = gen_classical(make_factorial_design(values, outcomes), cfg.seed, opt).dataset;
  } else if (cfg.kind == "prbox") {
    d = gen_prbox();
  } else if (cfg.kind == "singlet") {
    d = gen_singlet(parse_angle_spec(cfg.angles), cfg.precision);
  } else if (cfg.kind == "ghz") {
    d = gen_ghz();
  } else if (cfg.kind == "double-detection") {
    const auto parts = split(cfg.rates, ',');
    if (parts.size() < 2 || parts.size() % 2 != 0) {
      throw InvalidInput("--rates needs an even number of hit rates, half for each area");
    }
    std::vector<std::vector<Rational>> rates(2);
    for (std::size_t i = 0; i < parts.size(); ++i) rates[i < parts.size() / 2 ? 0 : 1].push_back(Rational::parse(parts[i]));
    d = gen_double_detection(rates, Rational::parse(cfg.coupling));
  } else {
    err << "unknown kind '" << cfg.kind << "' (classical, prbox, singlet, ghz, double-detection)\n";
    return kError;
  }
  if (cfg.output == "-") {
    out << dump_dataset(d);
  } else {
    save_dataset(d, cfg.output);
  }
  return kPass;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tests whether random outputs are selectively influenced by their inputs.", "selinf"};
  app.require_subcommand(1);

  bool validate_json = false;
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a dataset file against the format and invariants");
  validate->add_option("file", validate_path, "Dataset JSON file")->required();
  validate->add_flag("--json", validate_json, "Print the report as JSON");

  TestConfig tcfg;
  auto* test = app.add_subcommand("test", "Run marginal selectivity, Fine, chain, cosphericity and LFT tests");
  test->add_option("file", tcfg.path, "Dataset JSON file")->required();
  test->add_flag("--no-lft", tcfg.no_lft, "Skip the linear feasibility test");
  test->add_option("--orders", tcfg.orders, "Order relations: presets d1,d2 or a JSON file");
  test->add_option("--tol", tcfg.tol, "Cosphericity tolerance")->capture_default_str();
  test->add_option("--max-len", tcfg.max_len, "Longest chain sequence enumerated")->capture_default_str();
  test->add_option("--max-sequences", tcfg.max_sequences, "Cap on enumerated sequences")->capture_default_str();
  test->add_option("--column-guard", tcfg.column_guard, "Largest JDC matrix width")->capture_default_str();
  test->add_option("--max-subset-size", tcfg.max_subset_size, "Largest output subset in the marginal check (0: all)");
  test->add_flag("--allow-large-marginal-check", tcfg.allow_large, "Lift the marginal comparison guard");
  test->add_flag("--json", tcfg.json, "Print the composite report as JSON");

  GenerateConfig gcfg;
  auto* generate = app.add_subcommand("generate", "Write a benchmark dataset");
  generate->add_option("kind", gcfg.kind, "classical, prbox, singlet, ghz, or double-detection")->required();
  generate->add_option("-o,--output", gcfg.output, "Output file, - for stdout")->capture_default_str();
  generate->add_option("--seed", gcfg.seed, "Random seed (classical)")->capture_default_str();
  generate->add_option("--values", gcfg.values, "Values per input (classical)")->capture_default_str();
  generate->add_option("--outcomes", gcfg.outcomes, "Outcomes per output (classical)")->capture_default_str();
  generate->add_option("--max-atoms", gcfg.max_atoms, "Largest hidden-variable support (classical)")
      ->capture_default_str();
  generate->add_option("--angles", gcfg.angles, "Angles a1,..,ak,b1,..,bk in multiples of pi (singlet)")
      ->capture_default_str();
  generate->add_option("--precision", gcfg.precision, "Decimal digits kept (singlet)")->capture_default_str();
  generate->add_option("--rates", gcfg.rates, "Hit rates of area 1 then area 2 (double-detection)")
      ->capture_default_str();
  generate->add_option("--coupling", gcfg.coupling, "Shared-latent weight in [0,1] (double-detection)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kError;
  }

  try {
    if (*validate) return cmd_validate(validate_path, validate_json, out, err);
    if (*test) return cmd_test(tcfg, out, err);
    return cmd_generate(gcfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace selinf::cli
