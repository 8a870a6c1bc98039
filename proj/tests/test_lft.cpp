#include <gtest/gtest.h>

#include "selinf/generators.hpp"
#include "selinf/lft.hpp"
#include "support.hpp"

namespace selinf {
namespace {

using testing::Gen;

Dataset deterministic_all_ones(const ExperimentDesign& design) {
  Dataset d{design, {}};
  for (std::size_t i = 0; i < design.treatments.size(); ++i) {
    d.tables.push_back({{OutcomeTuple(design.input_count(), 1), Rational(1)}});
  }
  return d;
}

TEST(PVector, ChshHasSixteenComponents) {
  const auto p = build_p_vector(gen_prbox());
  EXPECT_EQ(p.values.size(), 16u);
  EXPECT_EQ(p.index.encode({1, 1}, {1, 1}), 0u);
  EXPECT_EQ(p.index.encode({1, 2}, {2, 1}), 6u);
  EXPECT_EQ(p.values[6], Rational(0));
  EXPECT_EQ(p.values[15], Rational(0));  // (2,2) has no mass on (2,2)
  EXPECT_EQ(p.values[14], Rational(1, 2));
}

TEST(PVector, SingleInputTable) {
  Dataset d{make_design({1}, {2}, {{1}}), {{{{1}, Rational(1, 3)}, {{2}, Rational(2, 3)}}}};
  EXPECT_EQ(build_p_vector(d).values, (std::vector<Rational>{Rational(1, 3), Rational(2, 3)}));
}

TEST(PVector, GhzLength) { EXPECT_EQ(build_p_vector(gen_ghz()).values.size(), 64u); }

TEST(PVector, RejectsInvalidDataset) {
  auto d = gen_prbox();
  d.tables[0].begin()->second = Rational(1);
  EXPECT_THROW(build_p_vector(d), InvalidInput);
}

TEST(PVector, OrderIsCanonicalWhateverTheFileOrder) {
  auto d = gen_prbox();
  std::reverse(d.design.treatments.begin(), d.design.treatments.end());
  std::reverse(d.tables.begin(), d.tables.end());
  EXPECT_EQ(build_p_vector(d).values, build_p_vector(gen_prbox()).values);
}

TEST(Index, RoundTrips) {
  Gen g(3);
  for (int iter = 0; iter < 40; ++iter) {
    const auto design = testing::random_factorial_design(g, 3, 3, 3);
    const PIndex p(design);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto [t, o] = p.decode(i);
      EXPECT_EQ(p.encode(t, o), i);
    }
    const QIndex q(design);
    if (q.size() > 5000) continue;
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_EQ(q.encode(q.decode(i)), i);
  }
}

TEST(Index, QIsMixedRadixWithFirstSlotMostSignificant) {
  const auto design = make_factorial_design({2, 1}, {3, 2});
  const QIndex q(design);
  EXPECT_EQ(q.size(), 18u);
  EXPECT_EQ(q.encode({{1, 1}, {2}}), 1u);
  EXPECT_EQ(q.encode({{1, 2}, {1}}), 2u);
  EXPECT_EQ(q.encode({{2, 1}, {1}}), 6u);
  EXPECT_THROW(q.encode({{4, 1}, {1}}), InvalidInput);
  EXPECT_THROW(q.decode(18), InvalidInput);
}

TEST(JdcMatrix, ChshShape) {
  const auto jdc = build_jdc_matrix(make_factorial_design({2, 2}, {2, 2}));
  EXPECT_EQ(jdc.matrix.rows(), 16u);
  EXPECT_EQ(jdc.matrix.columns(), 16u);
  std::vector<int> ones(16, 0);
  for (std::size_t r = 0; r < 16; ++r) {
    for (const auto& e : jdc.matrix.row(r)) {
      EXPECT_EQ(e.value, Rational(1));
      ++ones[e.column];
    }
  }
  for (int c : ones) EXPECT_EQ(c, 4);
}

TEST(JdcMatrix, TrivialDesignIsIdentity) {
  const auto jdc = build_jdc_matrix(make_design({1}, {2}, {{1}}));
  EXPECT_EQ(testing::to_dense(jdc.matrix),
            (std::vector<std::vector<Rational>>{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}));
}

TEST(JdcMatrix, GhzShape) {
  const auto jdc = build_jdc_matrix(gen_ghz().design);
  EXPECT_EQ(jdc.matrix.rows(), 64u);
  EXPECT_EQ(jdc.matrix.columns(), 64u);
  EXPECT_EQ(jdc.matrix.nonzeros(), 64u * 8u);
}

TEST(JdcMatrix, EntriesFollowTheDefinition) {
  Gen g(8);
  for (int iter = 0; iter < 20; ++iter) {
    const auto design = testing::random_factorial_design(g, 3, 2, 3);
    const auto jdc = build_jdc_matrix(design);
    if (jdc.matrix.columns() > 800) continue;
    const auto dense = testing::to_dense(jdc.matrix);
    for (std::size_t r = 0; r < dense.size(); ++r) {
      const auto [t, o] = jdc.rows.decode(r);
      for (std::size_t c = 0; c < dense[r].size(); ++c) {
        const auto h = jdc.columns.decode(c);
        bool match = true;
        for (std::size_t l = 0; l < t.size(); ++l) match = match && h[l][static_cast<std::size_t>(t[l] - 1)] == o[l];
        EXPECT_EQ(dense[r][c], Rational(match ? 1 : 0));
      }
    }
  }
}

TEST(JdcMatrix, GuardNamesTheFlag) {
  LftOptions opt;
  opt.column_guard = 15;
  try {
    build_jdc_matrix(make_factorial_design({2, 2}, {2, 2}), opt);
    FAIL();
  } catch (const GuardExceeded& e) {
    EXPECT_EQ(e.flag(), "--column-guard");
    EXPECT_NE(std::string(e.what()).find("16 columns"), std::string::npos);
  }
  EXPECT_THROW(build_jdc_matrix(make_factorial_design({40, 40}, {2, 2})), GuardExceeded);
}

TEST(RunLft, PrBoxIsInfeasible) {
  const auto v = run_lft(gen_prbox());
  EXPECT_FALSE(v.feasible());
  EXPECT_EQ(v.farkas.size(), 16u);
  EXPECT_FALSE(v.witness.has_value());
}

TEST(RunLft, DeterministicDatasetGivesPointMass) {
  const auto design = make_factorial_design({2, 3}, {2, 2});
  const auto v = run_lft(deterministic_all_ones(design));
  ASSERT_TRUE(v.feasible());
  const auto& q = *v.witness;
  const Assignment ones{{1, 1}, {1, 1, 1}};
  for (std::size_t c = 0; c < q.values.size(); ++c) {
    EXPECT_EQ(q.values[c], Rational(c == q.index.encode(ones) ? 1 : 0));
  }
}

TEST(RunLft, OptimalSingletIsInfeasible) {
  EXPECT_FALSE(run_lft(gen_singlet(parse_angle_spec("0,pi/2,pi/4,3pi/4"), 12)).feasible());
}

TEST(Si2, PointMassGivesOneAtom) {
  const auto design = make_factorial_design({2, 2}, {2, 2});
  QVector q{QIndex(design), std::vector<Rational>(16)};
  q.values[5] = Rational(1);
  const auto model = construct_si2(q, design);
  ASSERT_EQ(model.atoms.size(), 1u);
  EXPECT_EQ(model.atoms[0].assignment, q.index.decode(5));
}

TEST(Si2, EqualMixtureAveragesDeterministicDatasets) {
  const auto design = make_factorial_design({2, 2}, {2, 2});
  QVector q{QIndex(design), std::vector<Rational>(16)};
  const Assignment a{{1, 2}, {1, 1}};
  const Assignment b{{2, 2}, {2, 1}};
  q.values[q.index.encode(a)] = Rational(1, 2);
  q.values[q.index.encode(b)] = Rational(1, 2);
  const auto model = construct_si2(q, design);
  ASSERT_EQ(model.atoms.size(), 2u);
  const auto sim = model.simulate(design);
  // Direct forward computation: under (i,j) atom a gives (a1[i], a2[j]).
  for (const auto& t : design.treatments) {
    Table expected;
    expected[{a[0][t[0] - 1], a[1][t[1] - 1]}] += Rational(1, 2);
    expected[{b[0][t[0] - 1], b[1][t[1] - 1]}] += Rational(1, 2);
    EXPECT_EQ(sim.table(t), expected);
  }
}

TEST(Si2, RejectsBadQ) {
  const auto design = make_factorial_design({2, 2}, {2, 2});
  QVector q{QIndex(design), std::vector<Rational>(16)};
  q.values[0] = Rational(1, 2);
  EXPECT_THROW(construct_si2(q, design), InvalidInput);
  q.values[1] = Rational(1);
  q.values[2] = Rational(-1, 2);
  EXPECT_THROW(construct_si2(q, design), InvalidInput);
  EXPECT_THROW(construct_si2(q, make_factorial_design({2, 2}, {2, 3})), InvalidInput);
}

TEST(LftProperty, NecessityAndWitnessSoundness) {
  Gen g(77);
  for (int iter = 0; iter < 120; ++iter) {
    const auto design = testing::random_factorial_design(g, 3, 2, 3);
    if (!QIndex(design).checked_size() || QIndex(design).size() > 729) continue;
    const auto sample = gen_classical(design, g.next());
    ASSERT_EQ(canonical(construct_si2(sample.q, design).simulate(design)), canonical(sample.dataset));
    const auto v = run_lft(sample.dataset);
    ASSERT_TRUE(v.feasible()) << "iteration " << iter;
    EXPECT_EQ(canonical(construct_si2(*v.witness, design).simulate(design)), canonical(sample.dataset));
  }
}

TEST(LftProperty, NestednessUnderRestriction) {
  Gen g(78);
  for (int iter = 0; iter < 40; ++iter) {
    const auto design = testing::random_factorial_design(g, 3, 2, 2, 2);
    const auto d = gen_classical(design, g.next()).dataset;
    ASSERT_TRUE(run_lft(d).feasible());
    for (std::size_t l = 0; l < design.input_count(); ++l) {
      EXPECT_TRUE(run_lft(restrict_design(d, {l})).feasible());
    }
    EXPECT_TRUE(run_lft(restrict_design(d, {0, 1})).feasible());
  }
}

TEST(LftProperty, InvarianceUnderTransformations) {
  Gen g(79);
  for (int iter = 0; iter < 60; ++iter) {
    const Dataset d = testing::random_marginal_selective_chsh(g);
    const bool before = run_lft(d).feasible();
    auto bij = identity_transform(d.design);
    auto any = identity_transform(d.design);
    for (std::size_t l = 0; l < 2; ++l) {
      for (std::size_t w = 0; w < 2; ++w) {
        if (g.coin()) bij.maps[l][w] = {2, 1};
        any.maps[l][w] = {g.between(1, 2), g.between(1, 2)};
      }
    }
    EXPECT_EQ(run_lft(transform_outputs(d, bij)).feasible(), before);
    if (before) {
      EXPECT_TRUE(run_lft(transform_outputs(d, any)).feasible());
    }
  }
}

TEST(Restrict, ChshToFirstInput) {
  const auto pr = gen_prbox();
  const auto r = restrict_design(pr, {0});
  EXPECT_EQ(r.design.input_count(), 1u);
  EXPECT_EQ(r.design.treatments, (std::vector<Treatment>{{1}, {2}}));
  for (const auto& t : r.tables) EXPECT_EQ(t, (Table{{{1}, Rational(1, 2)}, {{2}, Rational(1, 2)}}));
  EXPECT_EQ(restrict_design(pr, {0, 1}), pr);
}

TEST(Restrict, ViolationCarriesReport) {
  auto d = gen_prbox();
  d.tables[1] = {{{1, 1}, Rational(1)}};
  try {
    restrict_design(d, {0});
    FAIL();
  } catch (const MarginalSelectivityError& e) {
    EXPECT_FALSE(e.report().pass());
    EXPECT_EQ(e.report().violations.front().first, (Treatment{1, 1}));
  }
}

}  // namespace
}  // namespace selinf
