#include "selinf/dataset_io.hpp"

#include <fstream>
#include <sstream>

namespace selinf {

using nlohmann::json;

std::string tuple_key(const std::vector<int>& tuple) {
  std::string s;
  for (std::size_t i = 0; i < tuple.size(); ++i) s += (i ? "," : "") + std::to_string(tuple[i]);
  return s;
}

namespace {

// Maps semantic errors back to a position in the source text. nlohmann::json
// does not keep positions, so locations are found by searching for the
// offending key or literal after the enclosing treatment record.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Dataset read() {
    json doc;
    try {
      doc = json::parse(text_);
    } catch (const json::parse_error& e) {
      const std::string msg = e.what();
      const auto colon = msg.find("; ");
      fail_at(colon == std::string::npos ? msg : msg.substr(colon + 2), e.byte == 0 ? 0 : e.byte - 1);
    }
    if (!doc.is_object()) fail_at("top-level value must be an object", 0);

    Dataset d;
    d.design.inputs = read_labelled<Input>(doc, "inputs");
    d.design.outputs = read_labelled<Output>(doc, "outputs");
    const json& treatments = member(doc, "treatments", 0);
    if (!treatments.is_array()) fail_at("\"treatments\" must be an array", key_offset("treatments", 0));
    for (std::size_t i = 0; i < treatments.size(); ++i) read_treatment(treatments[i], i, d);
    return d;
  }

 private:
  [[noreturn]] void fail_at(const std::string& msg, std::size_t offset) const {
    offset = std::min(offset, text_.size());
    std::size_t line = 1;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text_[i] == '\n') {
        ++line;
        line_start = i + 1;
      }
    }
    throw ParseError(msg, line, offset - line_start + 1);
  }

  std::size_t find(std::string_view needle, std::size_t from) const {
    const auto pos = text_.find(needle, from);
    return pos == std::string_view::npos ? from : pos;
  }

  std::size_t key_offset(const std::string& key, std::size_t from) const { return find(json(key).dump(), from); }

  // Offset of the i-th treatment record's "treatment" key.
  std::size_t treatment_offset(std::size_t i) const {
    std::size_t pos = key_offset("treatments", 0);
    for (std::size_t k = 0; k <= i; ++k) {
      const auto next = text_.find("\"treatment\"", pos + (k == 0 ? 0 : 1));
      if (next == std::string_view::npos) return pos;
      pos = next;
    }
    return pos;
  }

  const json& member(const json& obj, const std::string& key, std::size_t anchor) const {
    const auto it = obj.find(key);
    if (it == obj.end()) fail_at("missing \"" + key + "\"", anchor);
    return *it;
  }

  template <typename T>
  std::vector<T> read_labelled(const json& doc, const std::string& key) const {
    const json& arr = member(doc, key, 0);
    const std::size_t at = key_offset(key, 0);
    if (!arr.is_array()) fail_at("\"" + key + "\" must be an array", at);
    std::vector<T> out;
    for (const auto& entry : arr) {
      if (!entry.is_object()) fail_at("each entry of \"" + key + "\" must be an object", at);
      T item;
      const json& label = member(entry, "label", at);
      if (!label.is_string()) fail_at("label must be a string", key_offset("label", at));
      item.label = label.get<std::string>();
      const json& values = member(entry, "values", at);
      if (!values.is_array()) fail_at("values must be an array", key_offset("values", at));
      for (const auto& v : values) {
        if (v.is_string()) {
          item.values.push_back(v.get<std::string>());
        } else if (v.is_number_integer()) {
          item.values.push_back(v.dump());
        } else {
          fail_at("value labels must be strings or integers", key_offset("values", at));
        }
      }
      out.push_back(std::move(item));
    }
    return out;
  }

  std::vector<int> parse_key(const std::string& key, std::size_t at) const {
    std::vector<int> tuple;
    std::size_t start = 0;
    while (true) {
      const auto comma = key.find(',', start);
      const std::string part = key.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(part, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (part.empty() || used != part.size()) {
        fail_at("malformed outcome key \"" + key + "\"", find(json(key).dump(), at));
      }
      tuple.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return tuple;
  }

  void read_treatment(const json& rec, std::size_t i, Dataset& d) const {
    const std::size_t at = treatment_offset(i);
    const std::string where = "treatment record " + std::to_string(i + 1);
    if (!rec.is_object()) fail_at(where + " must be an object", at);
    const json& t = member(rec, "treatment", at);
    if (!t.is_array() || t.empty()) fail_at(where + ": \"treatment\" must be a nonempty array of indices", at);
    Treatment treatment;
    for (const auto& j : t) {
      if (!j.is_number_integer()) fail_at(where + ": treatment indices must be integers", at);
      treatment.push_back(j.get<int>());
    }

    const bool has_p = rec.contains("probabilities");
    const bool has_c = rec.contains("counts");
    if (has_p == has_c) fail_at(where + " needs exactly one of \"probabilities\" and \"counts\"", at);

    Table table;
    if (has_p) {
      const json& probs = rec["probabilities"];
      if (!probs.is_object()) fail_at(where + ": \"probabilities\" must be an object", key_offset("probabilities", at));
      for (const auto& [key, value] : probs.items()) {
        const std::size_t key_at = find(json(key).dump(), at);
        if (!value.is_string()) {
          fail_at("probability for \"" + key + "\" must be a string such as \"1/4\"", key_at);
        }
        Rational p;
        try {
          p = Rational::parse(value.get<std::string>());
        } catch (const Error& e) {
          fail_at(e.what(), find(value.dump(), key_at));
        }
        table[parse_key(key, at)] += p;
      }
    } else {
      const json& counts = rec["counts"];
      if (!counts.is_object()) fail_at(where + ": \"counts\" must be an object", key_offset("counts", at));
      Rational total;
      Table raw;
      for (const auto& [key, value] : counts.items()) {
        const std::size_t key_at = find(json(key).dump(), at);
        Rational c;
        if (value.is_number_unsigned() || value.is_number_integer()) {
          c = Rational(value.get<std::int64_t>());
        } else if (value.is_string()) {
          try {
            c = Rational::parse(value.get<std::string>());
          } catch (const Error& e) {
            fail_at(e.what(), key_at);
          }
        } else {
          fail_at("count for \"" + key + "\" must be an integer", key_at);
        }
        if (c.sign() < 0 || c.denominator() != 1) {
          fail_at("count for \"" + key + "\" must be a nonnegative integer", key_at);
        }
        raw[parse_key(key, at)] += c;
        total += c;
      }
      if (total.is_zero()) fail_at(where + ": counts sum to zero", at);
      for (auto& [o, c] : raw) table[o] = c / total;
    }
    d.design.treatments.push_back(std::move(treatment));
    d.tables.push_back(std::move(table));
  }

  std::string_view text_;
};

}  // namespace

Dataset parse_dataset(std::string_view text) { return Reader(text).read(); }

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

json dataset_to_json(const Dataset& dataset) {
  json doc;
  auto labelled = [](const auto& items) {
    json arr = json::array();
    for (const auto& item : items) arr.push_back({{"label", item.label}, {"values", item.values}});
    return arr;
  };
  doc["inputs"] = labelled(dataset.design.inputs);
  doc["outputs"] = labelled(dataset.design.outputs);
  json treatments = json::array();
  for (std::size_t i = 0; i < dataset.design.treatments.size(); ++i) {
    json probs = json::object();
    if (i < dataset.tables.size()) {
      for (const auto& [o, p] : dataset.tables[i]) probs[tuple_key(o)] = p.str();
    }
    treatments.push_back({{"treatment", dataset.design.treatments[i]}, {"probabilities", probs}});
  }
  doc["treatments"] = std::move(treatments);
  return doc;
}

std::string dump_dataset(const Dataset& dataset) { return dataset_to_json(dataset).dump(2) + "\n"; }

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << dump_dataset(dataset);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace selinf
