#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fpclab/bits.h"
#include "fpclab/random.h"

namespace fpclab {

/// Parameters of an (n, d, c)-fingerprinting code with security xi.
struct TardosParams {
  std::size_t n = 0;
  std::size_t c = 0;
  double xi = 0.05;
  /// Code length d. Unset: d = ceil(length_constant * c^2 * ln(n / xi)).
  std::optional<std::size_t> length;
  /// Accusation threshold Z. Unset: 20 c ln(n / xi) for a derived length,
  /// d / (5c) for an explicit one (same ratio Z/d as the derived case).
  std::optional<double> threshold;
  double length_constant = 100.0;
};

/// Code length implied by the parameters. Validates them.
std::size_t tardos_length(const TardosParams& params);
double tardos_threshold(const TardosParams& params);
/// Bias cutoff t = 1 / (300 c).
double tardos_cutoff(std::size_t c);

using Codebook = BitMatrix;

struct TardosSecretState {
  TardosParams params;
  std::size_t length = 0;
  double cutoff = 0.0;
  double threshold = 0.0;
  std::vector<double> biases;
  /// Tracing scores users against their codewords, so the state keeps them.
  Codebook codebook;
};

/// Accused user (0-based codebook row) or Bottom.
struct TraceOutcome {
  std::optional<std::size_t> accused;

  bool is_bottom() const noexcept { return !accused.has_value(); }
  bool operator==(const TraceOutcome&) const = default;
};

struct TardosCode {
  Codebook codebook;
  TardosSecretState state;
};

/// Throws InvalidCoalition unless 4 <= c <= n, InvalidSecurity unless 0 < xi < 1.
TardosCode tardos_gen(const TardosParams& params, RandomStream& rng);

/// Per-user accusation scores for `word` (batch).
std::vector<double> tardos_scores(const BitVector& word, const TardosSecretState& state);

/// Highest scorer strictly above the threshold, else Bottom. Ties go to the
/// lower index. Throws LengthMismatch.
TraceOutcome tardos_trace(const BitVector& word, const TardosSecretState& state);

/// Symmetric score of one column: g(word bit, user bit, bias).
double tardos_score_term(bool word_bit, bool user_bit, double bias);

/// Column-at-a-time score computation; matches tardos_scores exactly.
class ScoreAccumulator {
 public:
  explicit ScoreAccumulator(const TardosSecretState& state);
  void add_column(std::size_t column, bool word_bit);
  std::span<const double> scores() const noexcept { return scores_; }

 private:
  const TardosSecretState& state_;
  std::vector<double> scores_;
};

enum class PirateStrategy { kMajority, kMinority, kRandomFeasible, kInterleave };

const char* pirate_strategy_name(PirateStrategy strategy);
std::optional<PirateStrategy> parse_pirate_strategy(std::string_view name);

/// Combined word produced by a coalition (rows of `coalition`). Every
/// strategy respects the marking condition.
BitVector pirate_word(const BitMatrix& coalition, PirateStrategy strategy, RandomStream& rng);

}  // namespace fpclab
