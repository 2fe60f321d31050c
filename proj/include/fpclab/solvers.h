#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include "fpclab/oracle.h"
#include "fpclab/problems.h"
#include "fpclab/random.h"

namespace fpclab {

struct SolverConfig {
  double epsilon = 1.0;
  double delta = 1e-3;
  double alpha = 1.0 / 3.0;
  double p_fail = 1.0 / 3.0;
  /// Sampler only. Unset: the Hoeffding size for (alpha, p_fail).
  std::optional<std::size_t> sample_rows;
  std::uint64_t seed = 0;
  /// Run the Gaussian solver below its accuracy threshold instead of throwing.
  bool allow_below_threshold = false;
};

/// Throws InvalidParameter for out-of-range fields.
void validate(const SolverConfig& cfg);

struct SolverReport {
  MarginalsVector output;
  QueryLedger queries_used;
  std::optional<double> noise_sigma;
  /// Exact marginals of the rows the solver decoded.
  MarginalsVector decoded_marginals;
  /// Gaussian solver: noisy values before clamping.
  MarginalsVector pre_clamp;
  bool below_threshold = false;
};

/// sqrt(200 d ln(20d) ln(1.25/delta)) / epsilon.
double gaussian_threshold_n(std::size_t d, double epsilon, double delta);
/// sqrt(2 ln(1.25/delta)) * sqrt(d) / (n epsilon).
double gaussian_sigma(std::size_t n, std::size_t d, double epsilon, double delta);
/// ceil(ln(2d/p) / (2 alpha^2)).
std::size_t hoeffding_sample_size(std::size_t d, double alpha, double p_fail);

/// Reads row i (1-based) in full: all 2d shares then decode_ss.
BitVector read_row(AttributeOracle& oracle, std::size_t i);
/// H(i) xor z_i.
BitVector read_row(RowOracle& oracle, std::size_t i);
/// Dispatches on the oracle's mode.
BitVector read_row(MeteredOracle& oracle, std::size_t i);

/// Decodes every row, adds N(0, sigma^2) per coordinate, clamps to [0, 1].
/// Throws PreconditionUnmet below the threshold unless allowed.
SolverReport gaussian_dp_solver(MeteredOracle& oracle, const SolverConfig& cfg, RandomStream& rng);
SolverReport gaussian_dp_solver(MeteredOracle& oracle, const SolverConfig& cfg);

/// Marginals of sample_rows distinct uniformly chosen rows.
/// Throws SampleExceedsPopulation.
SolverReport subsample_solver(MeteredOracle& oracle, const SolverConfig& cfg, RandomStream& rng);
SolverReport subsample_solver(MeteredOracle& oracle, const SolverConfig& cfg);

/// Any algorithm with oracle access emitting a vector in [0,1]^dim.
using CandidateAlgorithm = std::function<MarginalsVector(MeteredOracle&, RandomStream&)>;

/// Runs the algorithm and captures its output and ledger. Throws
/// OutputDimensionMismatch on a wrong length and InvalidParameter on values
/// outside [0, 1].
SolverReport run_candidate(const CandidateAlgorithm& algorithm, MeteredOracle& oracle, RandomStream& rng);

CandidateAlgorithm gaussian_candidate(SolverConfig cfg);
CandidateAlgorithm subsample_candidate(SolverConfig cfg);
/// Makes no queries.
CandidateAlgorithm constant_candidate(double value);
/// Queries `per_row` distinct attributes (or one row query when per_row >= d on
/// a row oracle) on each of the first `rows` rows, then emits the
/// constant 0.5. It never decodes anything.
CandidateAlgorithm spread_candidate(std::size_t rows, std::size_t per_row);

}  // namespace fpclab
