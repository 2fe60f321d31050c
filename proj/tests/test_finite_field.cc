#include <gtest/gtest.h>

#include <set>

#include "fpclab/error.h"
#include "fpclab/finite_field.h"

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

TEST(Primality, AgreesWithSympy) {
  EXPECT_TRUE(is_prime(kMersenne61));
  EXPECT_FALSE(is_prime(kMersenne61 + 2));
  EXPECT_TRUE(is_prime(1000000007));
  EXPECT_FALSE(is_prime(561));         // Carmichael
  EXPECT_FALSE(is_prime(3215031751));  // strong pseudoprime to 2,3,5,7
  EXPECT_TRUE(is_prime((1ULL << 62) - 57));
  EXPECT_FALSE(is_prime(1));
  EXPECT_TRUE(is_prime(2));
}

TEST(FieldContext, RejectsBadModuli) {
  EXPECT_EQ(kind_of([] { FieldContext::create(15); }), ErrorKind::kNonPrimeModulus);
  EXPECT_EQ(kind_of([] { FieldContext::create(3); }), ErrorKind::kModulusTooSmall);
}

// Reference values from Python's pow().
TEST(FieldContext, Mersenne61Arithmetic) {
  const auto f = FieldContext::mersenne61();
  EXPECT_EQ(f.inv(3), 1537228672809129301ULL);
  EXPECT_EQ(f.pow(123456789, 987654321), 50357601586279104ULL);
  EXPECT_EQ(f.mul((1ULL << 60) + 12345, (1ULL << 59) + 999), 2017612633074318448ULL);
  EXPECT_EQ(kind_of([&] { f.inv(0); }), ErrorKind::kDivisionByZero);
}

TEST(FieldElement, MixingModuliThrows) {
  const auto a = FieldContext::create(101).element(3);
  const auto b = FieldContext::create(103).element(3);
  EXPECT_EQ(kind_of([&] { (void)(a + b); }), ErrorKind::kFieldMismatch);
}

TEST(FieldElement, InverseProperty) {
  const auto f = FieldContext::mersenne61();
  RandomStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    auto a = f.random(rng);
    if (a.value() == 0) continue;
    ASSERT_EQ((a * a.inverse()).value(), 1u);
    ASSERT_EQ((a / a).value(), 1u);
    ASSERT_EQ((a + (-a)).value(), 0u);
  }
}

// Coefficients from a sympy Lagrange fit mapped into F_101.
TEST(Interpolation, SmallFieldReference) {
  const auto f = FieldContext::create(101);
  std::vector<FieldPoint> pts{{f.element(1), f.element(5)},
                              {f.element(2), f.element(7)},
                              {f.element(3), f.element(20)},
                              {f.element(4), f.element(0)}};
  const Polynomial p = interpolate(pts, 3);
  const std::vector<std::uint64_t> expect{58, 90, 100, 60};
  EXPECT_EQ(std::vector<std::uint64_t>(p.coefficients().begin(), p.coefficients().end()), expect);
}

TEST(Interpolation, Errors) {
  const auto f = FieldContext::create(101);
  std::vector<FieldPoint> dup{{f.element(1), f.element(5)}, {f.element(1), f.element(6)}};
  EXPECT_EQ(kind_of([&] { interpolate(dup, 1); }), ErrorKind::kDuplicatePoint);
  std::vector<FieldPoint> three{{f.element(1), f.element(5)}, {f.element(2), f.element(6)},
                                {f.element(3), f.element(6)}};
  EXPECT_EQ(kind_of([&] { interpolate(three, 1); }), ErrorKind::kArityMismatch);
  const auto g = FieldContext::create(103);
  std::vector<FieldPoint> mixed{{f.element(1), f.element(5)}, {g.element(2), g.element(6)}};
  EXPECT_EQ(kind_of([&] { interpolate(mixed, 1); }), ErrorKind::kFieldMismatch);
}

// Property: interpolating the evaluations of a random polynomial recovers it.
TEST(Interpolation, RecoversRandomPolynomials) {
  for (std::uint64_t q : {kMersenne61, std::uint64_t{1000000007}, std::uint64_t{257}}) {
    const auto f = FieldContext::create(q);
    RandomStream rng(q);
    for (std::size_t deg : {0u, 1u, 7u, 31u, 64u}) {
      if (deg + 1 > q) continue;
      std::vector<std::uint64_t> coeffs(deg + 1);
      for (auto& c : coeffs) c = f.random(rng).value();
      const Polynomial p(f, coeffs);
      const auto xs = sample_distinct(f, deg + 1, rng);
      std::vector<FieldPoint> pts;
      for (const auto& x : xs) pts.emplace_back(x, evaluate(p, x));
      ASSERT_EQ(interpolate(pts, deg), p) << "q=" << q << " deg=" << deg;
    }
  }
}

TEST(SampleDistinct, ExhaustionAndUniqueness) {
  const auto f = FieldContext::create(7);
  RandomStream rng(2);
  auto all = sample_distinct(f, 7, rng);
  std::set<std::uint64_t> s;
  for (const auto& e : all) s.insert(e.value());
  EXPECT_EQ(s.size(), 7u);
  EXPECT_EQ(kind_of([&] { sample_distinct(f, 8, rng); }), ErrorKind::kFieldExhausted);
}

TEST(DistinctSampler, AvoidsReserved) {
  const auto f = FieldContext::create(11);
  DistinctSampler s(f);
  s.reserve(0);
  s.reserve(5);
  RandomStream rng(9);
  std::set<std::uint64_t> got;
  for (int i = 0; i < 9; ++i) got.insert(s.next(rng));
  EXPECT_EQ(got.size(), 9u);
  EXPECT_FALSE(got.contains(0));
  EXPECT_FALSE(got.contains(5));
}
