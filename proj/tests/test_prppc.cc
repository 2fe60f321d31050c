#include <gtest/gtest.h>

#include "fpclab/error.h"
#include "fpclab/prppc.h"

using namespace fpclab;

namespace {

TardosParams small(std::size_t d) {
  TardosParams p{12, 4, 0.05};
  p.length = d;
  return p;
}

}  // namespace

TEST(Prppc, ShapeAndPadding) {
  RandomStream rng(1);
  const auto inst = gen_prime(small(10), 7, rng);
  EXPECT_EQ(inst.codebook.width(), 24u);
  EXPECT_EQ(inst.codebook.bits.cols(), 24u);
  EXPECT_EQ(inst.codebook.bits.rows(), 12u);
  EXPECT_TRUE(is_permutation(inst.state.column_perm));
  EXPECT_TRUE(is_permutation(inst.state.row_perm));
  const auto& perm = inst.state.column_perm;
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t k = 0; k < 7; ++k) {
      ASSERT_TRUE(inst.codebook.bits.get(i, perm[10 + k]));
      ASSERT_FALSE(inst.codebook.bits.get(i, perm[17 + k]));
    }
  }
  // Original columns land where column_perm says, in the row row_perm says.
  for (std::size_t u = 0; u < 12; ++u) {
    const BitVector back = extract_original(inst.codebook.bits.row(inst.state.row_perm[u]), inst.state);
    ASSERT_EQ(back, inst.state.inner.codebook.row(u));
  }
}

TEST(Prppc, TracePrimeAccusesRow) {
  RandomStream rng(2);
  TardosParams p{20, 4, 0.05};
  const auto inst = gen_prime(p, 5, rng);
  const auto out = trace_prime(inst.codebook.bits.row(3), inst.state);
  ASSERT_TRUE(out.accused.has_value());
  EXPECT_EQ(accused_row(out, inst.state), std::optional<std::size_t>(3));
  EXPECT_THROW(trace_prime(BitVector(3), inst.state), Error);
}

TEST(Prppc, ZeroPadRejected) {
  RandomStream rng(3);
  try {
    gen_prime(small(10), 0, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidParameter);
  }
}

TEST(Feasibility, MarkingCondition) {
  BitMatrix rows(std::vector<BitVector>{BitVector::from_string("110"), BitVector::from_string("100")});
  EXPECT_TRUE(is_feasible(BitVector::from_string("110"), rows));
  EXPECT_TRUE(is_feasible(BitVector::from_string("100"), rows));
  EXPECT_FALSE(is_feasible(BitVector::from_string("010"), rows));  // column 0 is constant 1
  EXPECT_FALSE(is_feasible(BitVector::from_string("101"), rows));  // column 2 is constant 0
  EXPECT_THROW(is_feasible(BitVector(2), rows), Error);
  EXPECT_FALSE(is_permutation({0, 0, 1}));
  EXPECT_FALSE(is_permutation({0, 3}));
}

// Flipping a padded column is never feasible for the whole codebook, so it
// can never be a bad event.
TEST(FeasibleSample, PaddedFlipNeverBad) {
  RandomStream rng(4);
  for (int t = 0; t < 100; ++t) {
    const auto r = feasible_sample_trial(small(20), 200, 5, FlipStrategy::kPaddedColumn, rng);
    ASSERT_TRUE(r.flipped_padded);
    ASSERT_FALSE(r.feasible_full);
    ASSERT_FALSE(r.bad);
  }
}

TEST(FeasibleSample, BadImpliesFeasibleFullOnly) {
  RandomStream rng(5);
  std::size_t bad = 0;
  for (int t = 0; t < 300; ++t) {
    const auto r = feasible_sample_trial(small(20), 40, 5, FlipStrategy::kSampleConstantColumn, rng);
    ASSERT_FALSE(r.feasible_sample);
    ASSERT_EQ(r.bad, r.feasible_full && !r.feasible_sample);
    bad += r.bad;
  }
  // Bound d / l = 0.5; loose sanity band.
  EXPECT_LT(bad, 200u);
}
