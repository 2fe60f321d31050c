#include <gtest/gtest.h>

#include "fpclab/adversary.h"
#include "fpclab/error.h"
#include "fpclab/solvers.h"

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

BitMatrix random_rows(std::size_t t, std::size_t d, std::uint64_t seed) {
  RandomStream rng(seed);
  return random_database(t, d, rng);
}

TardosParams small_code(std::size_t n, std::size_t c, std::size_t d) {
  TardosParams p{n, c, 0.05};
  p.length = d;
  return p;
}

}  // namespace

TEST(RoundAnswer, HalfRoundsUp) {
  EXPECT_EQ(round_answer({0.0, 0.49, 0.5, 1.0}).to_string(), "0011");
}

TEST(SimulatedRowOracle, BindsCoalitionInQueryOrder) {
  const auto coalition = random_rows(3, 16, 1);
  SimulatedRowOracle o(coalition, 10, 2);
  EXPECT_EQ(read_row(o, 7), coalition.row(0));
  EXPECT_EQ(read_row(o, 2), coalition.row(1));
  EXPECT_EQ(read_row(o, 7), coalition.row(0));  // cached, no new binding
  EXPECT_EQ(o.commit_count(), 2u);
  EXPECT_EQ(o.bound_row(1), 2u);
  read_row(o, 1);
  EXPECT_EQ(kind_of([&] { read_row(o, 4); }), ErrorKind::kQueryBudgetExceeded);
  EXPECT_EQ(o.ledger_report().total, 3u * 16);
}

TEST(SimulatedShareOracle, CommitsOnQueryDPlusOne) {
  const std::size_t d = 6;
  const auto coalition = random_rows(2, d, 3);
  const auto f = FieldContext::mersenne61();
  SimulatedShareOracle o(coalition, 5, f, 4);
  for (std::size_t j = 1; j <= d; ++j) o.attribute_query(3, j);
  EXPECT_EQ(o.q(3), d);
  EXPECT_FALSE(o.committed(3));
  EXPECT_EQ(o.commit_count(), 0u);
  o.attribute_query(3, d + 1);
  EXPECT_TRUE(o.committed(3));
  EXPECT_TRUE(o.consistent(3));
  EXPECT_EQ(o.bound_row(0), 3u);
  // Reading the row in full decodes the bound member.
  EXPECT_EQ(read_row(o, 3), coalition.row(0));
  EXPECT_EQ(read_row(o, 1), coalition.row(1));
  EXPECT_TRUE(o.consistent(1));
  for (std::size_t j = 1; j <= d; ++j) o.attribute_query(5, j);
  EXPECT_EQ(kind_of([&] { o.attribute_query(5, d + 1); }), ErrorKind::kCommitBudgetExceeded);
}

// Property: whatever order the queries arrive in, the committed polynomial is
// consistent and the decoded row is the bound member.
TEST(SimulatedShareOracle, ConsistentUnderRandomQueryOrders) {
  const std::size_t d = 5;
  const auto f = FieldContext::create(1000003);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto coalition = random_rows(3, d, seed);
    SimulatedShareOracle o(coalition, 4, f, seed + 100);
    RandomStream rng(seed);
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t i = 1; i <= 3; ++i)
      for (std::size_t j = 1; j <= 2 * d; ++j) order.emplace_back(i, j);
    rng.shuffle(std::span(order));
    for (auto [i, j] : order) o.attribute_query(i, j);
    ASSERT_EQ(o.commit_count(), 3u);
    for (std::size_t t = 0; t < 3; ++t) {
      const std::size_t row = o.bound_row(t);
      ASSERT_TRUE(o.consistent(row));
      ASSERT_EQ(read_row(o, row), coalition.row(t));
    }
  }
}

TEST(SampleCoalition, ShapeAndPopulation) {
  RandomStream rng(5);
  const auto s = sample_coalition(small_code(20, 4, 30), 15, 6, rng);
  EXPECT_EQ(s.size(), 6u);
  EXPECT_EQ(s.width(), 60u);
  EXPECT_EQ(s.population(), 20u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(s.rows.row(i), s.instance->codebook.bits.row(i));
}

TEST(Attack, FullReadAccusesCommittedMember) {
  for (auto mode : {AttackMode::kRandomOracle, AttackMode::kSecretSharing}) {
    RandomStream rng(6);
    const auto coalition = sample_coalition(small_code(20, 4, 200), 100, 4, rng);
    SolverConfig c;
    c.sample_rows = 4;
    const auto r = run_attack(mode, coalition, subsample_candidate(c), FieldContext::mersenne61(), rng);
    EXPECT_EQ(r.status, AttackStatus::kCompleted) << attack_mode_name(mode);
    EXPECT_EQ(r.commit_count, 4u);
    EXPECT_EQ(r.decoded_rows, 4u);
    ASSERT_TRUE(r.max_error_committed.has_value());
    EXPECT_EQ(*r.max_error_committed, 0.0);
    EXPECT_TRUE(r.feasible_for_committed);
    EXPECT_TRUE(r.feasible_for_sample);
    EXPECT_TRUE(r.accused_committed()) << attack_mode_name(mode);
  }
}

TEST(Attack, OverBudgetIsReportedNotThrown) {
  RandomStream rng(7);
  const auto coalition = sample_coalition(small_code(20, 4, 40), 20, 3, rng);
  SolverConfig c;
  c.sample_rows = 5;
  for (auto mode : {AttackMode::kRandomOracle, AttackMode::kSecretSharing}) {
    const auto r = run_attack(mode, coalition, subsample_candidate(c), FieldContext::mersenne61(), rng);
    EXPECT_EQ(r.status, AttackStatus::kBudgetViolation);
    EXPECT_FALSE(r.violation.empty());
    EXPECT_LE(r.commit_count, 3u);
  }
}

TEST(Attack, SpreadNeverCommits) {
  RandomStream rng(8);
  const auto coalition = sample_coalition(small_code(10, 4, 4), 20, 4, rng);
  const auto r = adversary_ss(coalition, spread_candidate(10, 44), FieldContext::mersenne61(), rng);
  EXPECT_EQ(r.status, AttackStatus::kCompleted);
  EXPECT_EQ(r.commit_count, 0u);
  EXPECT_EQ(r.decoded_rows, 0u);
  EXPECT_EQ(r.ledger.total, 440u);
  EXPECT_FALSE(r.max_error_committed.has_value());
}

TEST(Attack, TranscriptOnRequest) {
  RandomStream rng(9);
  const auto coalition = sample_coalition(small_code(10, 4, 8), 4, 2, rng);
  SolverConfig c;
  c.sample_rows = 2;
  std::vector<TranscriptEntry> transcript;
  adversary_ro(coalition, subsample_candidate(c), rng, &transcript);
  EXPECT_EQ(transcript.size(), 2u);
}

TEST(Neighbor, RemovedRowIsZeroed) {
  RandomStream rng(10);
  const auto coalition = sample_coalition(small_code(20, 4, 200), 100, 4, rng);
  SolverConfig c;
  c.sample_rows = 4;
  int accused_removed = 0;
  for (int t = 0; t < 20; ++t) {
    RandomStream r(t);
    const auto out = neighbor_experiment(AttackMode::kRandomOracle, coalition, subsample_candidate(c), 2,
                                         FieldContext::mersenne61(), r);
    accused_removed += out.accused_row == std::optional<std::size_t>(1);
  }
  EXPECT_EQ(accused_removed, 0);
}
