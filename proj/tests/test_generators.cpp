#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "selinf/dataset_io.hpp"
#include "selinf/distance.hpp"
#include "selinf/generators.hpp"
#include "selinf/lft.hpp"
#include "support.hpp"

namespace selinf {
namespace {

using testing::Gen;

void expect_well_formed(const Dataset& d) {
  EXPECT_TRUE(validate_dataset(d).valid());
  EXPECT_TRUE(check_marginal_selectivity(d).pass());
}

double correlation(const Table& t) {
  double e = 0;
  for (const auto& [o, p] : t) e += (o[0] == o[1] ? 1.0 : -1.0) * p.to_double();
  return e;
}

TEST(Classical, PointMassIsDeterministic) {
  const auto design = make_factorial_design({2, 3}, {2, 3});
  QIndex index(design);
  QVector q{index, std::vector<Rational>(*index.checked_size())};
  q.values[17] = Rational(1);
  const auto d = gen_classical(design, q);
  expect_well_formed(d);
  for (const auto& t : d.tables) {
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t.begin()->second, Rational(1));
  }
}

TEST(Classical, UniformQOnChshGivesUniformTables) {
  const auto design = make_factorial_design({2, 2}, {2, 2});
  const auto d = gen_classical(design, QVector{QIndex(design), std::vector<Rational>(16, Rational(1, 16))});
  for (const auto& t : d.tables) {
    ASSERT_EQ(t.size(), 4u);
    for (const auto& [o, p] : t) EXPECT_EQ(p, Rational(1, 4));
  }
}

TEST(Classical, SeededSamplesAreReproducibleAndFeasible) {
  Gen g(31);
  for (int iter = 0; iter < 60; ++iter) {
    const auto design = testing::random_factorial_design(g, 3, 2, 3);
    const auto seed = g.next();
    const auto a = gen_classical(design, seed);
    const auto b = gen_classical(design, seed);
    EXPECT_EQ(a.dataset, b.dataset);
    EXPECT_EQ(a.q.values, b.q.values);
    expect_well_formed(a.dataset);
    Rational total;
    for (const auto& v : a.q.values) total += v;
    EXPECT_EQ(total, Rational(1));
    EXPECT_TRUE(run_lft(a.dataset).feasible());
  }
}

TEST(Classical, GuardAndOptions) {
  EXPECT_THROW(gen_classical(make_factorial_design({6, 6}, {4, 4}), 1), GuardExceeded);
  EXPECT_THROW(gen_classical(make_factorial_design({2, 2}, {2, 2}), 1, {0, 12, 1000}), InvalidInput);
  const auto one = gen_classical(make_factorial_design({2, 2}, {2, 2}), 5, {1, 12, 1000});
  EXPECT_EQ(std::count_if(one.q.values.begin(), one.q.values.end(), [](const Rational& v) { return !v.is_zero(); }), 1);
}

TEST(PrBox, MarginalsHalfAndNonclassical) {
  const auto d = gen_prbox();
  expect_well_formed(d);
  for (const auto& t : d.design.treatments) {
    const auto m1 = marginal(d, t, {0});
    const auto m2 = marginal(d, t, {1});
    EXPECT_EQ(m1.at({1}), Rational(1, 2));
    EXPECT_EQ(m2.at({2}), Rational(1, 2));
  }
  EXPECT_FALSE(run_lft(d).feasible());
  EXPECT_EQ(d.probability({2, 2}, {1, 2}), Rational(1, 2));
  EXPECT_EQ(d.probability({1, 2}, {2, 2}), Rational(1, 2));
}

TEST(Angles, Parsing) {
  EXPECT_EQ(parse_angle("0").multiple, Rational(0));
  EXPECT_EQ(parse_angle("pi").multiple, Rational(1));
  EXPECT_EQ(parse_angle("-pi/2").multiple, Rational(-1, 2));
  EXPECT_EQ(parse_angle("3pi/4").multiple, Rational(3, 4));
  EXPECT_EQ(parse_angle("3*pi/4").multiple, Rational(3, 4));
  EXPECT_EQ(parse_angle("0.25pi").multiple, Rational(1, 4));
  EXPECT_NEAR(parse_angle("pi/3").radians(), std::numbers::pi / 3, 1e-15);
  EXPECT_THROW(parse_angle("1"), ParseError);
  EXPECT_THROW(parse_angle("pi*2"), ParseError);
  EXPECT_THROW(parse_angle("xpi"), ParseError);
  const auto spec = parse_angle_spec("0,pi/2,pi/4,3pi/4");
  EXPECT_EQ(spec.first, (std::vector<Angle>{{Rational(0)}, {Rational(1, 2)}}));
  EXPECT_EQ(spec.second, (std::vector<Angle>{{Rational(1, 4)}, {Rational(3, 4)}}));
  EXPECT_THROW(parse_angle_spec("0,pi,pi/2"), ParseError);
  EXPECT_THROW(parse_angle_spec(""), ParseError);
}

TEST(Singlet, EqualAndOppositeAngles) {
  const auto equal = gen_singlet(parse_angle_spec("0,pi/3,0,pi/3"));
  expect_well_formed(equal);
  EXPECT_EQ(equal.probability({1, 1}, {1, 1}), Rational(0));
  EXPECT_EQ(equal.probability({2, 2}, {1, 2}), Rational(1, 2));
  const auto opposite = gen_singlet(parse_angle_spec("0,pi"));
  EXPECT_EQ(opposite.probability({1, 1}, {1, 1}), Rational(1, 2));
  EXPECT_TRUE(run_lft(equal).feasible());
}

TEST(Singlet, OptimalAnglesReachTsirelson) {
  const auto d = gen_singlet(parse_angle_spec("0,pi/2,pi/4,3pi/4"), 12);
  expect_well_formed(d);
  const double e11 = correlation(d.table({1, 1})), e12 = correlation(d.table({1, 2}));
  const double e21 = correlation(d.table({2, 1})), e22 = correlation(d.table({2, 2}));
  const double h = std::numbers::sqrt2 / 2;
  EXPECT_NEAR(e11, -h, 1e-11);
  EXPECT_NEAR(e12, h, 1e-11);
  EXPECT_NEAR(e21, -h, 1e-11);
  EXPECT_NEAR(e22, -h, 1e-11);
  EXPECT_NEAR(std::abs(e11 - e12 + e21 + e22), 2 * std::numbers::sqrt2, 1e-9);
  EXPECT_FALSE(run_lft(d).feasible());
  EXPECT_FALSE(fine_inequalities(d).pass());
}

TEST(Singlet, PrecisionBoundsAndMarginals) {
  const auto spec = parse_angle_spec("0,pi/2,pi/4,3pi/4");
  EXPECT_THROW(gen_singlet(spec, 5), InvalidInput);
  EXPECT_THROW(gen_singlet(spec, 16), InvalidInput);
  Gen g(32);
  for (int iter = 0; iter < 50; ++iter) {
    AngleSpec a;
    const int k1 = g.between(1, 3), k2 = g.between(1, 3);
    for (int i = 0; i < k1; ++i) a.first.push_back({Rational(g.between(-12, 12), 6)});
    for (int i = 0; i < k2; ++i) a.second.push_back({Rational(g.between(-12, 12), 6)});
    const auto d = gen_singlet(a, g.between(6, 15));
    expect_well_formed(d);
    for (const auto& t : d.design.treatments) EXPECT_EQ(marginal(d, t, {0}).at({1}), Rational(1, 2));
  }
}

TEST(Ghz, MatchesFixtureAndIsNonclassical) {
  const auto d = gen_ghz();
  EXPECT_EQ(canonical(d), canonical(load_dataset(std::filesystem::path(SELINF_TEST_DATA) / "ghz.json")));
  expect_well_formed(d);
  EXPECT_EQ(d.design.treatments.size(), 8u);
  const auto m = build_jdc_matrix(d.design);
  EXPECT_EQ(m.matrix.rows(), 64u);
  EXPECT_EQ(m.matrix.columns(), 64u);
  const auto verdict = run_lft(d);
  EXPECT_FALSE(verdict.feasible());
  for (const auto& t : d.design.treatments) {
    for (std::size_t l = 0; l < 3; ++l) EXPECT_EQ(marginal(d, t, {l}).at({1}), Rational(1, 2));
  }
}

TEST(DoubleDetection, Examples) {
  const std::vector<std::vector<Rational>> rates = {{Rational(1, 5), Rational(3, 5)}, {Rational(1, 2), Rational(9, 10)}};
  const auto product = gen_double_detection(rates, Rational(0));
  expect_well_formed(product);
  for (const auto& t : product.design.treatments) {
    const Rational r1 = rates[0][static_cast<std::size_t>(t[0] - 1)];
    const Rational r2 = rates[1][static_cast<std::size_t>(t[1] - 1)];
    EXPECT_EQ(product.probability(t, {1, 1}), r1 * r2);
    EXPECT_EQ(product.probability(t, {2, 2}), (Rational(1) - r1) * (Rational(1) - r2));
  }
  EXPECT_EQ(product.design.outputs[0].values, (std::vector<std::string>{"Yes", "No"}));

  const auto all_yes = gen_double_detection({{Rational(1), Rational(1)}, {Rational(1), Rational(1)}}, Rational(1, 3));
  for (const auto& t : all_yes.tables) EXPECT_EQ(t, (Table{{{1, 1}, Rational(1)}}));

  EXPECT_THROW(gen_double_detection(rates, Rational(2)), InvalidInput);
  EXPECT_THROW(gen_double_detection({{Rational(3, 2)}, {Rational(1, 2)}}, Rational(0)), InvalidInput);
  EXPECT_THROW(gen_double_detection({{Rational(1, 2)}}, Rational(0)), InvalidInput);
}

TEST(DoubleDetection, AlwaysClassical) {
  Gen g(33);
  for (int iter = 0; iter < 40; ++iter) {
    std::vector<std::vector<Rational>> rates(2);
    for (auto& area : rates) {
      for (int w = 0; w < g.between(1, 3); ++w) area.push_back(g.fraction(10));
    }
    const auto d = gen_double_detection(rates, g.fraction(4));
    expect_well_formed(d);
    EXPECT_TRUE(run_lft(d).feasible());
  }
}

TEST(Mix, ConvexCombination) {
  const auto design = make_factorial_design({2, 2}, {2, 2});
  const auto uniform = gen_classical(design, QVector{QIndex(design), std::vector<Rational>(16, Rational(1, 16))});
  const auto half = mix(gen_prbox(), uniform, Rational(1, 2));
  EXPECT_EQ(half.probability({1, 1}, {1, 1}), Rational(3, 8));
  EXPECT_EQ(half.probability({2, 2}, {1, 1}), Rational(1, 8));
  expect_well_formed(half);
  // Exactly on the classical boundary.
  EXPECT_TRUE(run_lft(half).feasible());
  EXPECT_FALSE(run_lft(mix(gen_prbox(), uniform, Rational(501, 1000))).feasible());
  EXPECT_THROW(mix(gen_prbox(), gen_ghz(), Rational(1, 2)), InvalidInput);
  EXPECT_THROW(mix(gen_prbox(), uniform, Rational(-1)), InvalidInput);
}

}  // namespace
}  // namespace selinf
