#include <gtest/gtest.h>

#include <filesystem>

#include "selinf/dataset_io.hpp"
#include "selinf/generators.hpp"
#include "support.hpp"

namespace selinf {
namespace {

constexpr const char* kChsh = R"({
  "inputs": [{"label": "a", "values": ["1", "2"]}, {"label": "b", "values": ["1", "2"]}],
  "outputs": [{"label": "A", "values": ["1", "2"]}, {"label": "B", "values": ["1", "2"]}],
  "treatments": [
    {"treatment": [1, 1], "probabilities": {"1,1": "1/2", "2,2": "0.5"}},
    {"treatment": [1, 2], "probabilities": {"1,1": "1/2", "2,2": "1/2"}},
    {"treatment": [2, 1], "counts": {"1,1": 13, "2,2": 13}},
    {"treatment": [2, 2], "counts": {"1,2": "7", "2,1": 7, "1,1": 0}}
  ]
})";

ParseError parse_error_of(const std::string& text) {
  try {
    parse_dataset(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for " << text;
  return ParseError("none");
}

TEST(DatasetIo, ParsesProbabilitiesCountsAndDecimals) {
  const auto d = parse_dataset(kChsh);
  EXPECT_EQ(d.design.inputs[1].label, "b");
  EXPECT_EQ(d.design.outputs[0].values, (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(d.design.treatments.size(), 4u);
  EXPECT_EQ(d.probability({1, 1}, {2, 2}), Rational(1, 2));
  EXPECT_EQ(d.probability({2, 1}, {1, 1}), Rational(1, 2));
  EXPECT_EQ(d.probability({2, 2}, {1, 2}), Rational(1, 2));
  EXPECT_EQ(canonical(d).tables, canonical(gen_prbox()).tables);
  EXPECT_TRUE(validate_dataset(d).valid());
}

TEST(DatasetIo, RoundTripIsExact) {
  testing::Gen g(41);
  for (int iter = 0; iter < 40; ++iter) {
    const auto design = testing::random_factorial_design(g, 3, 3, 3);
    Dataset d = gen_classical(design, g.next()).dataset;
    if (iter % 3 == 0) d = gen_singlet(parse_angle_spec("0,pi/3,pi/5,pi/7"), 6 + iter % 10);
    const auto text = dump_dataset(d);
    EXPECT_EQ(parse_dataset(text), d);
    EXPECT_EQ(dump_dataset(parse_dataset(text)), text);
  }
  const auto dir = std::filesystem::temp_directory_path() / "selinf_io_test";
  std::filesystem::create_directories(dir);
  save_dataset(gen_ghz(), dir / "ghz.json");
  EXPECT_EQ(load_dataset(dir / "ghz.json"), gen_ghz());
  std::filesystem::remove_all(dir);
  EXPECT_THROW(load_dataset(dir / "missing.json"), Error);
}

TEST(DatasetIo, DumpFormat) {
  const auto text = dump_dataset(gen_prbox());
  EXPECT_NE(text.find("\"1,1\": \"1/2\""), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(tuple_key({1, 12, 3}), "1,12,3");
}

TEST(DatasetIo, SyntaxErrorsCarryLineAndColumn) {
  const auto e = parse_error_of("{\n  \"inputs\": [\n  ,]\n}");
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 3u);
  EXPECT_NE(std::string(e.what()).find("line 3, column 3"), std::string::npos);
  EXPECT_EQ(parse_error_of("").line(), 1u);
  EXPECT_EQ(parse_error_of("[1, 2]").line(), 1u);
}

TEST(DatasetIo, MalformedProbabilityIsLocated) {
  std::string text = kChsh;
  text.replace(text.find("\"0.5\""), 5, "\"0.5x\"");
  const auto e = parse_error_of(text);
  EXPECT_EQ(e.line(), 5u);
  const std::size_t line_start = text.find("{\"treatment\": [1, 1]");
  const std::size_t col = text.find("\"0.5x\"") - text.rfind('\n', line_start);
  EXPECT_EQ(e.column(), col);
}

TEST(DatasetIo, SemanticErrorsAreLocated) {
  std::string numeric = kChsh;
  numeric.replace(numeric.find("\"1/2\", \"2,2\": \"1/2\""), 5, "0.5");
  const auto e1 = parse_error_of(numeric);
  EXPECT_EQ(e1.line(), 6u);
  EXPECT_NE(std::string(e1.what()).find("must be a string"), std::string::npos);

  std::string bad_key = kChsh;
  bad_key.replace(bad_key.find("\"1,2\": \"7\""), 5, "\"1;2\"");
  const auto e2 = parse_error_of(bad_key);
  EXPECT_EQ(e2.line(), 8u);
  EXPECT_NE(std::string(e2.what()).find("malformed outcome key \"1;2\""), std::string::npos);

  std::string negative = kChsh;
  negative.replace(negative.find("\"2,1\": 7"), 8, "\"2,1\": -7");
  EXPECT_EQ(parse_error_of(negative).line(), 8u);

  std::string both = kChsh;
  both.replace(both.find("\"counts\": {\"1,1\": 13"), 8, "\"probabilities\": {}, \"counts\"");
  EXPECT_NE(std::string(parse_error_of(both).what()).find("exactly one of"), std::string::npos);

  std::string zero = kChsh;
  zero.replace(zero.find("\"1,1\": 13, \"2,2\": 13"), 20, "\"1,1\": 0");
  EXPECT_NE(std::string(parse_error_of(zero).what()).find("counts sum to zero"), std::string::npos);

  EXPECT_NE(std::string(parse_error_of(R"({"inputs": [], "outputs": []})").what()).find("missing \"treatments\""),
            std::string::npos);
}

TEST(DatasetIo, OutOfRangeIndicesAreLeftForValidation) {
  std::string text = kChsh;
  text.replace(text.find("\"2,2\": \"0.5\""), 5, "\"3,2\"");
  const auto d = parse_dataset(text);
  const auto report = validate_dataset(d);
  EXPECT_FALSE(report.valid());
}

}  // namespace
}  // namespace selinf
