#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fpclab/error.h"
#include "fpclab/prppc.h"
#include "fpclab/tardos.h"

using namespace fpclab;

TEST(TardosParams, DerivedLengthAndThreshold) {
  TardosParams p{50, 5, 0.05};
  EXPECT_EQ(tardos_length(p), 17270u);  // ceil(100 * 25 * ln 1000)
  EXPECT_NEAR(tardos_threshold(p), 690.7755278982137, 1e-9);
  EXPECT_DOUBLE_EQ(tardos_cutoff(5), 1.0 / 1500.0);
  p.length = 20;
  EXPECT_EQ(tardos_length(p), 20u);
  EXPECT_DOUBLE_EQ(tardos_threshold(p), 20.0 / 25.0);
}

TEST(TardosParams, Validation) {
  RandomStream rng(1);
  try {
    tardos_gen(TardosParams{50, 3, 0.05}, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidCoalition);
  }
  try {
    tardos_gen(TardosParams{50, 5, 1.0}, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidSecurity);
  }
}

TEST(TardosScore, SymmetricTerms) {
  EXPECT_DOUBLE_EQ(tardos_score_term(true, true, 0.2), 2.0);
  EXPECT_DOUBLE_EQ(tardos_score_term(true, false, 0.2), -0.5);
  EXPECT_DOUBLE_EQ(tardos_score_term(false, false, 0.2), 0.5);
  EXPECT_DOUBLE_EQ(tardos_score_term(false, true, 0.2), -2.0);
}

TEST(TardosGen, BiasesInsideCutoff) {
  RandomStream rng(2);
  TardosParams p{20, 4, 0.05};
  p.length = 500;
  const auto code = tardos_gen(p, rng);
  EXPECT_EQ(code.codebook.rows(), 20u);
  EXPECT_EQ(code.codebook.cols(), 500u);
  for (double b : code.state.biases) {
    ASSERT_GE(b, code.state.cutoff);
    ASSERT_LE(b, 1.0 - code.state.cutoff);
  }
}

TEST(TardosTrace, AccumulatorMatchesBatch) {
  RandomStream rng(3);
  TardosParams p{30, 4, 0.05};
  p.length = 300;
  const auto code = tardos_gen(p, rng);
  BitVector w(300);
  for (std::size_t j = 0; j < 300; ++j) w.set(j, rng.coin());
  const auto batch = tardos_scores(w, code.state);
  ScoreAccumulator acc(code.state);
  for (std::size_t j = 0; j < 300; ++j) acc.add_column(j, w.get(j));
  ASSERT_EQ(batch.size(), acc.scores().size());
  for (std::size_t i = 0; i < batch.size(); ++i) EXPECT_NEAR(batch[i], acc.scores()[i], 1e-9);
  EXPECT_THROW(tardos_trace(BitVector(299), code.state), Error);
}

TEST(TardosTrace, OwnCodewordIsAccused) {
  RandomStream rng(4);
  TardosParams p{50, 5, 0.05};
  const auto code = tardos_gen(p, rng);
  for (std::size_t u : {0u, 17u, 49u}) {
    const auto out = tardos_trace(code.codebook.row(u), code.state);
    ASSERT_TRUE(out.accused.has_value());
    EXPECT_EQ(*out.accused, u);
  }
}

// Property: every strategy respects the marking condition.
TEST(Pirates, AllStrategiesFeasible) {
  RandomStream rng(5);
  TardosParams p{40, 5, 0.05};
  p.length = 400;
  const auto code = tardos_gen(p, rng);
  for (auto s : {PirateStrategy::kMajority, PirateStrategy::kMinority, PirateStrategy::kRandomFeasible,
                 PirateStrategy::kInterleave}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto members = rng.sample_indices(40, 1 + rep % 5);
      const auto coalition = code.codebook.select_rows(members);
      ASSERT_TRUE(is_feasible(pirate_word(coalition, s, rng), coalition)) << pirate_strategy_name(s);
    }
    EXPECT_EQ(parse_pirate_strategy(pirate_strategy_name(s)), s);
  }
  EXPECT_FALSE(parse_pirate_strategy("bogus").has_value());
}

TEST(Pirates, SmallScaleTracing) {
  RandomStream rng(6);
  TardosParams p{50, 5, 0.05};
  int colluder = 0, innocent = 0;
  for (int t = 0; t < 20; ++t) {
    const auto code = tardos_gen(p, rng);
    const auto members = rng.sample_indices(50, 5);
    const auto word = pirate_word(code.codebook.select_rows(members), PirateStrategy::kMajority, rng);
    const auto out = tardos_trace(word, code.state);
    if (!out.accused) continue;
    (std::find(members.begin(), members.end(), *out.accused) != members.end() ? colluder : innocent)++;
  }
  EXPECT_EQ(innocent, 0);
  EXPECT_GE(colluder, 18);
}
