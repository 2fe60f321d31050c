#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fpclab/bits.h"
#include "fpclab/finite_field.h"
#include "fpclab/random.h"

namespace fpclab {

using BinaryDatabase = BitMatrix;
/// Per-column means, each in [0, 1].
using MarginalsVector = std::vector<double>;

/// Throws EmptyDatabase when db has no rows.
MarginalsVector exact_marginals(const BinaryDatabase& db);

/// Uniform n x d database.
BinaryDatabase random_database(std::size_t n, std::size_t d, RandomStream& rng);

/// Lazily sampled H : row -> {0,1}^width. Each value is pinned once drawn.
/// Single writer: callers must serialize access.
class RandomOracle {
 public:
  RandomOracle(std::size_t width, std::uint64_t seed) : width_(width), rng_(seed) {}

  std::size_t width() const noexcept { return width_; }
  const BitVector& operator()(std::size_t row);
  std::size_t populated() const noexcept { return table_.size(); }

 private:
  std::size_t width_;
  RandomStream rng_;
  std::map<std::size_t, BitVector> table_;
};

/// z_i = H(i) xor x_i.
struct MaskedDatabase {
  BitMatrix rows;
  RandomOracle* oracle = nullptr;

  /// z_i = H(i) xor x_i for every row of db.
  bool verify(const BinaryDatabase& db) const;
};

/// Throws DimensionMismatch if H's width differs from db.cols().
MaskedDatabase encode_ro(const BinaryDatabase& db, RandomOracle& oracle);

/// One row's Shamir encoding: the d prefix points alpha_1..alpha_d and the
/// 2d shares (alpha_{d+j}, p(alpha_{d+j})), j = 1..2d.
struct ShareRow {
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> prefix;
  std::vector<std::uint64_t> share_points;
  std::vector<std::uint64_t> share_values;

  std::size_t dim() const noexcept { return prefix.size(); }
};

/// Encodes every row with a fresh polynomial of degree bound 2d - 1.
/// Throws FieldTooSmall unless q > 4d. When `escrow` is given it receives the
/// hidden polynomials, for test cross-checks only.
std::vector<ShareRow> encode_ss(const BinaryDatabase& db, const FieldContext& ctx, RandomStream& rng,
                                std::vector<Polynomial>* escrow = nullptr);
ShareRow encode_ss_row(const BitVector& x, const FieldContext& ctx, RandomStream& rng,
                       Polynomial* escrow = nullptr);

/// Interpolates the 2d shares and reads the row back at the prefix.
/// Throws IncompleteShares, NotBinary.
BitVector decode_ss(const ShareRow& row);

/// Attacker's metered view of one encoding in the security game.
class ShareView {
 public:
  ShareView(const ShareRow& row, std::size_t budget) : row_(row), budget_(budget) {}

  std::size_t dim() const noexcept { return row_.dim(); }
  std::size_t budget() const noexcept { return budget_; }
  std::uint64_t modulus() const noexcept { return row_.modulus; }
  std::span<const std::uint64_t> prefix() const noexcept { return row_.prefix; }

  /// Share j (1-based, 1..2d). Distinct queries beyond the budget throw
  /// QueryBudgetExceeded.
  std::pair<std::uint64_t, std::uint64_t> query(std::size_t j);
  std::size_t queries() const noexcept { return asked_.size(); }

 private:
  const ShareRow& row_;
  std::size_t budget_;
  std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> asked_;
};

/// Returns the guess b' (0: encoding of x, 1: encoding of 0^d).
using SecurityAttacker = std::function<int(ShareView&, const BitVector& x, RandomStream&)>;

/// Queries everything it may; if that is all 2d shares it decodes and
/// compares with x, otherwise it guesses at random.
SecurityAttacker decode_and_compare_attacker();
/// Fits the polynomial implied by "b = 0" through the prefix and all but one
/// queried share, and checks whether it predicts the last one.
SecurityAttacker consistency_attacker();
SecurityAttacker random_guess_attacker();

struct SecurityGameResult {
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t budget_violations = 0;

  double success_rate() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }
};

struct SecurityGameTrial {
  int b = 0;
  /// Unset when the attacker broke the budget.
  std::optional<int> guess;
  std::size_t queries = 0;

  bool won() const noexcept { return guess && *guess == b; }
};

/// One run of Exp(SS_d, A, q, d, x) on a stream seeded with `seed`.
SecurityGameTrial security_game_trial(const SecurityAttacker& attacker, std::size_t q, const BitVector& x,
                                      const FieldContext& ctx, std::uint64_t seed);

/// Runs Exp(SS_d, A, q, d, x) `trials` times. Requires q <= 2d. A trial in
/// which the attacker exceeds q queries counts as a loss.
SecurityGameResult security_game_experiment(const SecurityAttacker& attacker, std::size_t q,
                                            const BitVector& x, const FieldContext& ctx,
                                            std::size_t trials, std::uint64_t seed);

/// The 3d field elements an attacker sees after the prefix and the shares
/// at `positions` (1-based, exactly d of them): prefix, then (point, value)
/// pairs in the given order.
std::vector<std::uint64_t> real_world_view(const BitVector& x, const FieldContext& ctx,
                                           std::span<const std::size_t> positions, RandomStream& rng);
/// 3d independent uniform field elements.
std::vector<std::uint64_t> ideal_world_view(std::size_t d, const FieldContext& ctx, RandomStream& rng);

}  // namespace fpclab
