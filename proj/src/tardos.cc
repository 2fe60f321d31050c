#include "fpclab/tardos.h"

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "fpclab/error.h"
#include "fpclab/kernels.h"

namespace fpclab {
namespace {

void validate(const TardosParams& params) {
  if (params.c < 4 || params.c > params.n) {
    throw Error(ErrorKind::kInvalidCoalition,
                "need 4 <= c <= n, got c = " + std::to_string(params.c) + ", n = " + std::to_string(params.n));
  }
  if (!(params.xi > 0.0 && params.xi < 1.0)) {
    throw Error(ErrorKind::kInvalidSecurity, "xi must lie in (0, 1)");
  }
  if (params.length && *params.length == 0) throw Error(ErrorKind::kInvalidParameter, "length must be positive");
  if (!(params.length_constant > 0.0)) throw Error(ErrorKind::kInvalidParameter, "length constant must be positive");
}

double log_ratio(const TardosParams& params) {
  return std::log(static_cast<double>(params.n) / params.xi);
}

}  // namespace

double tardos_cutoff(std::size_t c) { return 1.0 / (300.0 * static_cast<double>(c)); }

std::size_t tardos_length(const TardosParams& params) {
  validate(params);
  if (params.length) return *params.length;
  const double c = static_cast<double>(params.c);
  return static_cast<std::size_t>(std::ceil(params.length_constant * c * c * log_ratio(params)));
}

double tardos_threshold(const TardosParams& params) {
  validate(params);
  if (params.threshold) return *params.threshold;
  const double c = static_cast<double>(params.c);
  if (params.length) return static_cast<double>(*params.length) / (5.0 * c);
  return 20.0 * c * log_ratio(params);
}

TardosCode tardos_gen(const TardosParams& params, RandomStream& rng) {
  const std::size_t d = tardos_length(params);
  TardosSecretState state;
  state.params = params;
  state.length = d;
  state.cutoff = tardos_cutoff(params.c);
  state.threshold = tardos_threshold(params);

  // Inverse CDF of the arcsine law: p = sin^2(r) with r uniform on
  // [r_t, pi/2 - r_t], where sin^2(r_t) = t.
  const double r_lo = std::asin(std::sqrt(state.cutoff));
  const double r_hi = std::numbers::pi / 2.0 - r_lo;
  state.biases.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    double s = std::sin(r_lo + (r_hi - r_lo) * rng.uniform01());
    state.biases[j] = s * s;
  }

  Codebook codebook(params.n, d);
  for (std::size_t i = 0; i < params.n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (rng.bernoulli(state.biases[j])) codebook.set(i, j, true);
    }
  }
  state.codebook = codebook;
  return {std::move(codebook), std::move(state)};
}

double tardos_score_term(bool word_bit, bool user_bit, double bias) {
  const double rare_one = std::sqrt((1.0 - bias) / bias);
  const double rare_zero = std::sqrt(bias / (1.0 - bias));
  if (word_bit) return user_bit ? rare_one : -rare_zero;
  return user_bit ? -rare_one : rare_zero;
}

std::vector<double> tardos_scores(const BitVector& word, const TardosSecretState& state) {
  if (word.size() != state.length) {
    throw Error(ErrorKind::kLengthMismatch,
                "word has " + std::to_string(word.size()) + " bits, code length is " + std::to_string(state.length));
  }
  std::vector<double> if_one(state.length);
  std::vector<double> if_zero(state.length);
  for (std::size_t j = 0; j < state.length; ++j) {
    if_one[j] = tardos_score_term(word.get(j), true, state.biases[j]);
    if_zero[j] = tardos_score_term(word.get(j), false, state.biases[j]);
  }
  std::vector<double> scores(state.codebook.rows());
  kernels::weighted_row_sums(state.codebook, if_one, if_zero, scores);
  return scores;
}

TraceOutcome tardos_trace(const BitVector& word, const TardosSecretState& state) {
  const auto scores = tardos_scores(word, state);
  TraceOutcome out;
  double best = state.threshold;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > best) {
      best = scores[i];
      out.accused = i;
    }
  }
  return out;
}

ScoreAccumulator::ScoreAccumulator(const TardosSecretState& state)
    : state_(state), scores_(state.codebook.rows(), 0.0) {}

void ScoreAccumulator::add_column(std::size_t column, bool word_bit) {
  if (column >= state_.length) throw Error(ErrorKind::kIndexOutOfRange, "column " + std::to_string(column));
  const double if_one = tardos_score_term(word_bit, true, state_.biases[column]);
  const double if_zero = tardos_score_term(word_bit, false, state_.biases[column]);
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    scores_[i] += state_.codebook.get(i, column) ? if_one : if_zero;
  }
}

const char* pirate_strategy_name(PirateStrategy strategy) {
  switch (strategy) {
    case PirateStrategy::kMajority: return "majority";
    case PirateStrategy::kMinority: return "minority";
    case PirateStrategy::kRandomFeasible: return "random-feasible";
    case PirateStrategy::kInterleave: return "interleave";
  }
  return "unknown";
}

std::optional<PirateStrategy> parse_pirate_strategy(std::string_view name) {
  for (auto s : {PirateStrategy::kMajority, PirateStrategy::kMinority, PirateStrategy::kRandomFeasible,
                 PirateStrategy::kInterleave}) {
    if (name == pirate_strategy_name(s)) return s;
  }
  return std::nullopt;
}

BitVector pirate_word(const BitMatrix& coalition, PirateStrategy strategy, RandomStream& rng) {
  const std::size_t c = coalition.rows();
  if (c == 0) throw Error(ErrorKind::kInvalidCoalition, "empty coalition");
  const std::size_t d = coalition.cols();
  BitVector out(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < c; ++i) ones += coalition.get(i, j) ? 1 : 0;
    bool bit = false;
    if (ones == 0 || ones == c) {
      bit = ones == c;
    } else {
      const std::size_t zeros = c - ones;
      switch (strategy) {
        case PirateStrategy::kMajority:
          bit = ones == zeros ? rng.coin() : ones > zeros;
          break;
        case PirateStrategy::kMinority:
          bit = ones == zeros ? rng.coin() : ones < zeros;
          break;
        case PirateStrategy::kRandomFeasible:
          bit = rng.coin();
          break;
        case PirateStrategy::kInterleave:
          bit = coalition.get(static_cast<std::size_t>(rng.uniform_below(c)), j);
          break;
      }
    }
    out.set(j, bit);
  }
  return out;
}

}  // namespace fpclab
