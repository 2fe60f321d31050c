#include <gtest/gtest.h>

#include <cmath>

#include "fpclab/error.h"
#include "fpclab/problems.h"

using namespace fpclab;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::kConfigInvalid;
}

}  // namespace

TEST(Marginals, ExactValues) {
  BitMatrix db(std::vector<BitVector>{BitVector::from_string("101"), BitVector::from_string("111"),
                                      BitVector::from_string("001"), BitVector::from_string("000")});
  EXPECT_EQ(exact_marginals(db), (MarginalsVector{0.5, 0.25, 0.75}));
  EXPECT_EQ(kind_of([] { exact_marginals(BitMatrix(0, 3)); }), ErrorKind::kEmptyDatabase);
}

TEST(RandomOracleEncoding, MaskingRoundTrip) {
  RandomStream rng(1);
  const auto db = random_database(20, 33, rng);
  RandomOracle h(33, 5);
  const auto masked = encode_ro(db, h);
  EXPECT_TRUE(masked.verify(db));
  for (std::size_t i = 0; i < 20; ++i) ASSERT_EQ(masked.rows.row(i) ^ h(i), db.row(i));
  const BitVector first = h(0);
  EXPECT_EQ(h(0), first);  // pinned
  RandomOracle narrow(10, 5);
  EXPECT_EQ(kind_of([&] { encode_ro(db, narrow); }), ErrorKind::kDimensionMismatch);
}

class ShamirRoundTrip : public ::testing::TestWithParam<std::size_t> {};

TEST_P(ShamirRoundTrip, DecodeInvertsEncode) {
  const std::size_t d = GetParam();
  const auto f = FieldContext::mersenne61();
  RandomStream rng(d);
  for (int rep = 0; rep < 20; ++rep) {
    const auto db = random_database(5, d, rng);
    std::vector<Polynomial> escrow;
    const auto rows = encode_ss(db, f, rng, &escrow);
    ASSERT_EQ(rows.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
      ASSERT_EQ(decode_ss(rows[i]), db.row(i));
      ASSERT_EQ(rows[i].share_points.size(), 2 * d);
      ASSERT_EQ(escrow[i].degree_bound(), 2 * d - 1);
      // Escrowed polynomial reproduces every share and the row at the prefix.
      for (std::size_t j = 0; j < 2 * d; ++j) {
        ASSERT_EQ(evaluate(escrow[i], f.element(rows[i].share_points[j])).value(), rows[i].share_values[j]);
      }
      for (std::size_t j = 0; j < d; ++j) {
        ASSERT_EQ(evaluate(escrow[i], f.element(rows[i].prefix[j])).value(), db.get(i, j) ? 1u : 0u);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, ShamirRoundTrip, ::testing::Values(1, 4, 8, 16, 32));

TEST(Shamir, SmallFieldAndBadShares) {
  RandomStream rng(2);
  const auto db = random_database(1, 4, rng);
  EXPECT_EQ(kind_of([&] { encode_ss(db, FieldContext::create(13), rng); }), ErrorKind::kFieldTooSmall);
  const auto f = FieldContext::create(17);
  auto row = encode_ss_row(db.row(0), f, rng);
  EXPECT_EQ(decode_ss(row), db.row(0));
  auto short_row = row;
  short_row.share_points.pop_back();
  short_row.share_values.pop_back();
  EXPECT_EQ(kind_of([&] { decode_ss(short_row); }), ErrorKind::kIncompleteShares);
  auto tampered = row;
  tampered.share_values[0] = (tampered.share_values[0] + 1) % 17;
  // A tampered share almost always decodes to non-binary values; it must never
  // silently decode to the original row unless the field forces it.
  try {
    EXPECT_NE(decode_ss(tampered), db.row(0));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotBinary);
  }
}

TEST(ShareView, BudgetAndCaching) {
  RandomStream rng(3);
  const auto f = FieldContext::mersenne61();
  const auto row = encode_ss_row(BitVector::from_string("1011"), f, rng);
  ShareView v(row, 2);
  v.query(1);
  v.query(1);
  v.query(8);
  EXPECT_EQ(v.queries(), 2u);
  EXPECT_EQ(kind_of([&] { v.query(3); }), ErrorKind::kQueryBudgetExceeded);
}

TEST(SecurityGame, FullBudgetDecodes) {
  const auto f = FieldContext::mersenne61();
  const auto x = BitVector::from_string("0100110001110000");
  const auto r = security_game_experiment(decode_and_compare_attacker(), 32, x, f, 200, 11);
  EXPECT_EQ(r.successes, 200u);
  EXPECT_EQ(r.budget_violations, 0u);
}

TEST(SecurityGame, HalfBudgetIsCoinFlip) {
  const auto f = FieldContext::mersenne61();
  const auto x = BitVector::from_string("1111111111111111");
  for (const auto& attacker : {consistency_attacker(), decode_and_compare_attacker(), random_guess_attacker()}) {
    const auto r = security_game_experiment(attacker, 16, x, f, 2000, 12);
    EXPECT_NEAR(r.success_rate(), 0.5, 3.0 * std::sqrt(0.25 / 2000.0));
  }
}

// One share past the threshold is already enough for the consistency test.
TEST(SecurityGame, ConsistencyAttackerWinsPastThreshold) {
  const auto f = FieldContext::mersenne61();
  const auto x = BitVector::from_string("10110");
  const auto r = security_game_experiment(consistency_attacker(), 6, x, f, 300, 13);
  EXPECT_EQ(r.successes, 300u);
}

TEST(SecurityGame, ViewsHaveMatchingShape) {
  const auto f = FieldContext::mersenne61();
  RandomStream rng(4);
  const std::vector<std::size_t> pos{2, 5, 6};
  EXPECT_EQ(real_world_view(BitVector::from_string("101"), f, pos, rng).size(), 9u);
  EXPECT_EQ(ideal_world_view(3, f, rng).size(), 9u);
}

// The d share values seen in the real world are uniform: a chi-square test on
// their low bits over F_257.
TEST(SecurityGame, RealWorldValuesLookUniform) {
  const auto f = FieldContext::create(257);
  RandomStream rng(5);
  const std::vector<std::size_t> pos{1, 3, 6, 8};
  std::vector<int> hist(8, 0);
  const int reps = 4000;
  for (int r = 0; r < reps; ++r) {
    const auto view = real_world_view(BitVector::from_string("1101"), f, pos, rng);
    for (std::size_t k = 0; k < 4; ++k) hist[view[4 + 2 * k + 1] % 8]++;
  }
  // 257 = 32*8 + 1, so residue 0 is slightly favoured; expected counts follow.
  double chi = 0;
  const double total = reps * 4.0;
  for (int b = 0; b < 8; ++b) {
    const double e = total * (b == 0 ? 33.0 : 32.0) / 257.0;
    chi += (hist[b] - e) * (hist[b] - e) / e;
  }
  EXPECT_LT(chi, 24.3);  // 7 dof, p = 0.001
}
