#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fpclab/bits.h"
#include "fpclab/finite_field.h"
#include "fpclab/oracle.h"
#include "fpclab/prppc.h"
#include "fpclab/solvers.h"

namespace fpclab {

/// C'_S: the first `coalition_size` rows of a fresh PR-PPC codebook.
struct CoalitionSample {
  BitMatrix rows;
  std::shared_ptr<const PrppcInstance> instance;

  std::size_t size() const noexcept { return rows.rows(); }
  std::size_t width() const noexcept { return rows.cols(); }
  std::size_t population() const noexcept { return instance->codebook.bits.rows(); }
};

/// `params.c` is the code's design coalition size; `coalition_size` is how
/// many rows the adversary receives (1 <= coalition_size <= n).
CoalitionSample sample_coalition(const TardosParams& params, std::size_t ell, std::size_t coalition_size,
                                 RandomStream& rng);

enum class AttackStatus { kCompleted, kBudgetViolation };

struct AttackReport {
  AttackStatus status = AttackStatus::kCompleted;
  /// Set when status is kBudgetViolation.
  std::string violation;
  TraceOutcome outcome;
  /// C' row (0-based) of the accused user.
  std::optional<std::size_t> accused_row;
  /// Coalition rows x_1..x_t (C' rows 0..t-1) that were bound to queried rows.
  std::size_t commit_count = 0;
  BitVector rounded_answer;
  bool feasible_for_sample = false;
  bool feasible_for_committed = false;
  bool feasible_for_full = false;
  /// Max |a_j - marginal_j| against the committed rows (unset when t = 0)
  /// and against the whole of C'.
  std::optional<double> max_error_committed;
  double max_error_full = 0.0;
  QueryLedger ledger;
  std::size_t decoded_rows = 0;

  bool accused_committed() const noexcept { return accused_row && *accused_row < commit_count; }
  bool accused_innocent() const noexcept { return accused_row && *accused_row >= commit_count; }
};

/// Entries >= 1/2 become 1.
BitVector round_answer(const MarginalsVector& a);

/// Random-oracle simulation: z_i = r_i uniform; the j-th distinct row query
/// i_j is answered H(i_j) = r_{i_j} xor x_j. A (c+1)-th distinct row query
/// throws QueryBudgetExceeded.
class SimulatedRowOracle final : public RowOracle {
 public:
  SimulatedRowOracle(const BitMatrix& coalition, std::size_t n, std::uint64_t seed);
  const BitVector& masked_row(std::size_t i) const override;
  std::size_t commit_count() const noexcept { return bound_.size(); }
  /// Row (1-based) bound to coalition member t (0-based).
  std::size_t bound_row(std::size_t t) const { return bound_.at(t); }

 protected:
  BitVector answer_row(std::size_t i) override;

 private:
  const BitMatrix& coalition_;
  std::vector<BitVector> masked_;
  std::vector<std::size_t> bound_;
};

/// Lazy secret-sharing simulation. Row i answers fresh uniform pairs for its
/// first d distinct queries; the (d+1)-th binds it to the next coalition
/// member x_t and fixes p_i through x_t at the prefix and the recorded pairs.
/// Binding a (c+1)-th row throws CommitBudgetExceeded.
class SimulatedShareOracle final : public AttributeOracle {
 public:
  SimulatedShareOracle(const BitMatrix& coalition, std::size_t n, const FieldContext& ctx, std::uint64_t seed,
                       PrefixPolicy policy = PrefixPolicy::kOnFirstQuery);
  std::uint64_t modulus() const noexcept override { return ctx_.modulus(); }
  std::size_t commit_count() const noexcept { return commits_.size(); }
  std::size_t bound_row(std::size_t t) const { return commits_.at(t); }
  /// Distinct queries answered for row i so far.
  std::size_t q(std::size_t i) const;
  bool committed(std::size_t i) const;
  /// Committed p_i reproduces every pair recorded before the commit and
  /// takes x_t at the prefix.
  bool consistent(std::size_t i) const;

 protected:
  AttributeAnswer answer(std::size_t i, std::size_t j) override;
  std::vector<std::uint64_t> fetch_prefix(std::size_t i) override;

 private:
  struct RowState {
    std::size_t answered = 0;
    explicit RowState(const FieldContext& ctx) : alphas(ctx) {}
    DistinctSampler alphas;
    std::vector<std::uint64_t> prefix;
    std::vector<std::uint64_t> points;
    std::vector<std::uint64_t> values;
    std::optional<std::size_t> member;
    std::vector<std::uint64_t> poly;
    // Points for the row's remaining queries, drawn and evaluated at commit.
    std::vector<std::uint64_t> pending_points;
    std::vector<std::uint64_t> pending_values;
    std::size_t served = 0;
  };
  const RowState* find(std::size_t i) const;
  RowState& state(std::size_t i);

  const BitMatrix& coalition_;
  FieldContext ctx_;
  RandomStream rng_;
  std::map<std::size_t, RowState> rows_state_;
  std::vector<std::size_t> commits_;
};

/// Runs `algorithm` against a SimulatedRowOracle and traces its rounded
/// output. The oracle transcript is copied out only when asked for.
AttackReport adversary_ro(const CoalitionSample& coalition, const CandidateAlgorithm& algorithm, RandomStream& rng,
                          std::vector<TranscriptEntry>* transcript = nullptr);
/// Same against a SimulatedShareOracle over F_q.
AttackReport adversary_ss(const CoalitionSample& coalition, const CandidateAlgorithm& algorithm,
                          const FieldContext& ctx, RandomStream& rng,
                          std::vector<TranscriptEntry>* transcript = nullptr);

enum class AttackMode { kRandomOracle, kSecretSharing };
const char* attack_mode_name(AttackMode mode);

AttackReport run_attack(AttackMode mode, const CoalitionSample& coalition, const CandidateAlgorithm& algorithm,
                        const FieldContext& ctx, RandomStream& rng);

/// Replaces coalition row `removed` (1-based) with zeros and attacks again.
/// The removed user is C' row removed - 1.
AttackReport neighbor_experiment(AttackMode mode, const CoalitionSample& coalition,
                                 const CandidateAlgorithm& algorithm, std::size_t removed,
                                 const FieldContext& ctx, RandomStream& rng);

}  // namespace fpclab
