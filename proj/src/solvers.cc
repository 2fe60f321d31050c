#include "fpclab/solvers.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpclab/error.h"

namespace fpclab {

void validate(const SolverConfig& cfg) {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::kInvalidParameter, what); };
  if (!(cfg.epsilon > 0.0)) bad("epsilon must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) bad("delta must lie in (0, 1)");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) bad("alpha must lie in (0, 1)");
  if (!(cfg.p_fail > 0.0 && cfg.p_fail < 1.0)) bad("p_fail must lie in (0, 1)");
  if (cfg.sample_rows && *cfg.sample_rows == 0) bad("sample_rows must be positive");
}

double gaussian_threshold_n(std::size_t d, double epsilon, double delta) {
  const double dd = static_cast<double>(d);
  return std::sqrt(200.0 * dd * std::log(20.0 * dd) * std::log(1.25 / delta)) / epsilon;
}

double gaussian_sigma(std::size_t n, std::size_t d, double epsilon, double delta) {
  return std::sqrt(2.0 * std::log(1.25 / delta)) * std::sqrt(static_cast<double>(d)) /
         (static_cast<double>(n) * epsilon);
}

std::size_t hoeffding_sample_size(std::size_t d, double alpha, double p_fail) {
  if (d == 0) throw Error(ErrorKind::kInvalidParameter, "d must be positive");
  const double raw = std::log(2.0 * static_cast<double>(d) / p_fail) / (2.0 * alpha * alpha);
  return static_cast<std::size_t>(std::ceil(raw));
}

BitVector read_row(AttributeOracle& oracle, std::size_t i) {
  const std::size_t d = oracle.dim();
  ShareRow row;
  row.modulus = oracle.modulus();
  row.share_points.reserve(2 * d);
  row.share_values.reserve(2 * d);
  for (std::size_t j = 1; j <= 2 * d; ++j) {
    const AttributeAnswer a = oracle.attribute_query(i, j);
    row.share_points.push_back(a.point);
    row.share_values.push_back(a.value);
  }
  auto prefix = oracle.prefix(i);
  row.prefix.assign(prefix.begin(), prefix.end());
  return decode_ss(row);
}

BitVector read_row(RowOracle& oracle, std::size_t i) {
  BitVector h = oracle.row_query(i);
  h ^= oracle.masked_row(i);
  return h;
}

BitVector read_row(MeteredOracle& oracle, std::size_t i) {
  if (oracle.mode() == OracleMode::kRow) return read_row(static_cast<RowOracle&>(oracle), i);
  return read_row(static_cast<AttributeOracle&>(oracle), i);
}

SolverReport gaussian_dp_solver(MeteredOracle& oracle, const SolverConfig& cfg, RandomStream& rng) {
  validate(cfg);
  const std::size_t n = oracle.rows();
  const std::size_t d = oracle.dim();
  if (n == 0) throw Error(ErrorKind::kEmptyDatabase, "no rows to release");
  SolverReport report;
  const double threshold = gaussian_threshold_n(d, cfg.epsilon, cfg.delta);
  if (static_cast<double>(n) < threshold) {
    if (!cfg.allow_below_threshold) {
      throw Error(ErrorKind::kPreconditionUnmet,
                  "n = " + std::to_string(n) + " below threshold " + std::to_string(threshold));
    }
    report.below_threshold = true;
  }
  std::vector<BitVector> rows;
  rows.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) rows.push_back(read_row(oracle, i));
  report.decoded_marginals = exact_marginals(BitMatrix(std::move(rows)));
  const double sigma = gaussian_sigma(n, d, cfg.epsilon, cfg.delta);
  report.noise_sigma = sigma;
  report.pre_clamp.resize(d);
  report.output.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    report.pre_clamp[j] = report.decoded_marginals[j] + sigma * rng.normal();
    report.output[j] = std::clamp(report.pre_clamp[j], 0.0, 1.0);
  }
  report.queries_used = oracle.ledger_report();
  return report;
}

SolverReport gaussian_dp_solver(MeteredOracle& oracle, const SolverConfig& cfg) {
  RandomStream rng(cfg.seed);
  return gaussian_dp_solver(oracle, cfg, rng);
}

SolverReport subsample_solver(MeteredOracle& oracle, const SolverConfig& cfg, RandomStream& rng) {
  validate(cfg);
  const std::size_t n = oracle.rows();
  const std::size_t d = oracle.dim();
  const std::size_t k = cfg.sample_rows.value_or(hoeffding_sample_size(d, cfg.alpha, cfg.p_fail));
  if (k > n) {
    throw Error(ErrorKind::kSampleExceedsPopulation,
                "sample of " + std::to_string(k) + " rows from " + std::to_string(n));
  }
  std::vector<BitVector> rows;
  rows.reserve(k);
  for (std::size_t i : rng.sample_indices(n, k)) rows.push_back(read_row(oracle, i + 1));
  SolverReport report;
  report.decoded_marginals = exact_marginals(BitMatrix(std::move(rows)));
  report.output = report.decoded_marginals;
  report.queries_used = oracle.ledger_report();
  return report;
}

SolverReport subsample_solver(MeteredOracle& oracle, const SolverConfig& cfg) {
  RandomStream rng(cfg.seed);
  return subsample_solver(oracle, cfg, rng);
}

SolverReport run_candidate(const CandidateAlgorithm& algorithm, MeteredOracle& oracle, RandomStream& rng) {
  SolverReport report;
  report.output = algorithm(oracle, rng);
  if (report.output.size() != oracle.dim()) {
    throw Error(ErrorKind::kOutputDimensionMismatch, "output has " + std::to_string(report.output.size()) +
                                                         " entries, expected " + std::to_string(oracle.dim()));
  }
  for (double v : report.output) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::kInvalidParameter, "output entry outside [0, 1]");
  }
  report.queries_used = oracle.ledger_report();
  return report;
}

CandidateAlgorithm gaussian_candidate(SolverConfig cfg) {
  return [cfg](MeteredOracle& oracle, RandomStream& rng) { return gaussian_dp_solver(oracle, cfg, rng).output; };
}

CandidateAlgorithm subsample_candidate(SolverConfig cfg) {
  return [cfg](MeteredOracle& oracle, RandomStream& rng) { return subsample_solver(oracle, cfg, rng).output; };
}

CandidateAlgorithm constant_candidate(double value) {
  return [value](MeteredOracle& oracle, RandomStream&) { return MarginalsVector(oracle.dim(), value); };
}

CandidateAlgorithm spread_candidate(std::size_t rows, std::size_t per_row) {
  return [rows, per_row](MeteredOracle& oracle, RandomStream& rng) {
    const std::size_t n = std::min(rows, oracle.rows());
    for (std::size_t i = 1; i <= n; ++i) {
      if (oracle.mode() == OracleMode::kRow) {
        if (per_row >= oracle.dim()) oracle.row_query(i);
        continue;
      }
      const std::size_t k = std::min(per_row, 2 * oracle.dim());
      for (std::size_t j : rng.sample_indices(2 * oracle.dim(), k)) oracle.attribute_query(i, j + 1);
    }
    return MarginalsVector(oracle.dim(), 0.5);
  };
}

}  // namespace fpclab
