#include "fpclab/prppc.h"

#include <algorithm>
#include <string>

#include "fpclab/error.h"

namespace fpclab {

PrppcInstance gen_prime(const TardosParams& params, std::size_t pad, RandomStream& rng) {
  if (pad == 0) throw Error(ErrorKind::kInvalidParameter, "pad (ell) must be at least 1");
  TardosCode code = tardos_gen(params, rng);
  const std::size_t n = params.n;
  const std::size_t d = code.state.length;
  const std::size_t width = d + 2 * pad;

  PrppcInstance out;
  out.state.column_perm = rng.permutation(width);
  out.state.row_perm = rng.permutation(n);
  out.codebook.original_length = d;
  out.codebook.pad = pad;
  out.codebook.bits = BitMatrix(n, width);

  const auto& pi = out.state.column_perm;
  for (std::size_t u = 0; u < n; ++u) {
    BitVector& row = out.codebook.bits.row(out.state.row_perm[u]);
    for (std::size_t j = 0; j < d; ++j) {
      if (code.codebook.get(u, j)) row.set(pi[j], true);
    }
    for (std::size_t j = d; j < d + pad; ++j) row.set(pi[j], true);
  }
  out.state.inner = std::move(code.state);
  return out;
}

BitVector extract_original(const BitVector& answer, const PrppcSecretState& state) {
  if (answer.size() != state.column_perm.size()) {
    throw Error(ErrorKind::kLengthMismatch, "answer has " + std::to_string(answer.size()) + " bits, expected " +
                                                std::to_string(state.column_perm.size()));
  }
  BitVector out(state.inner.length);
  for (std::size_t j = 0; j < state.inner.length; ++j) out.set(j, answer.get(state.column_perm[j]));
  return out;
}

TraceOutcome trace_prime(const BitVector& answer, const PrppcSecretState& state) {
  return tardos_trace(extract_original(answer, state), state.inner);
}

std::optional<std::size_t> accused_row(const TraceOutcome& outcome, const PrppcSecretState& state) {
  if (!outcome.accused) return std::nullopt;
  return state.row_perm.at(*outcome.accused);
}

bool is_feasible(const BitVector& word, const BitMatrix& rows) {
  if (word.size() != rows.cols()) {
    throw Error(ErrorKind::kLengthMismatch, "word has " + std::to_string(word.size()) + " bits, matrix has " +
                                                std::to_string(rows.cols()) + " columns");
  }
  if (rows.rows() == 0) return word.empty();
  const auto w = word.words();
  const std::size_t nwords = w.size();
  std::vector<std::uint64_t> any(nwords, 0);
  std::vector<std::uint64_t> all(nwords, ~std::uint64_t{0});
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const auto r = rows.row(i).words();
    for (std::size_t k = 0; k < nwords; ++k) {
      any[k] |= r[k];
      all[k] &= r[k];
    }
  }
  const std::size_t tail = word.size() & 63;
  for (std::size_t k = 0; k < nwords; ++k) {
    std::uint64_t violation = (w[k] & ~any[k]) | (~w[k] & all[k]);
    if (k + 1 == nwords && tail != 0) violation &= (std::uint64_t{1} << tail) - 1;
    if (violation != 0) return false;
  }
  return true;
}

bool is_permutation(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i) return false;
  }
  return true;
}

FeasibleSampleTrial feasible_sample_trial(const TardosParams& params, std::size_t pad,
                                          std::size_t coalition_size, FlipStrategy strategy,
                                          RandomStream& rng) {
  if (coalition_size == 0 || coalition_size > params.n) {
    throw Error(ErrorKind::kInvalidCoalition, "coalition size out of range");
  }
  const PrppcInstance inst = gen_prime(params, pad, rng);
  const BitMatrix& full = inst.codebook.bits;
  const BitMatrix sample = full.first_rows(coalition_size);
  const std::size_t width = full.cols();

  // The adversary sees only the sample; start from one of its rows, which is
  // feasible for both matrices.
  BitVector word = sample.row(0);

  FeasibleSampleTrial out;
  if (strategy == FlipStrategy::kPaddedColumn) {
    const std::size_t d = inst.codebook.original_length;
    const std::size_t k = d + static_cast<std::size_t>(rng.uniform_below(2 * pad));
    out.flipped_column = inst.state.column_perm[k];
    out.flipped_padded = true;
  } else {
    std::vector<std::size_t> constant[2];
    for (std::size_t j = 0; j < width; ++j) {
      bool first = sample.get(0, j);
      bool same = true;
      for (std::size_t i = 1; i < coalition_size && same; ++i) same = sample.get(i, j) == first;
      if (same) constant[first ? 1 : 0].push_back(j);
    }
    std::size_t b = rng.coin() ? 1 : 0;
    if (constant[b].empty()) b ^= 1;  // at least `pad` columns of each kind exist
    const auto& pool = constant[b];
    out.flipped_column = pool[static_cast<std::size_t>(rng.uniform_below(pool.size()))];
    const auto& pi = inst.state.column_perm;
    const auto it = std::find(pi.begin(), pi.end(), out.flipped_column);
    out.flipped_padded = static_cast<std::size_t>(it - pi.begin()) >= inst.codebook.original_length;
  }
  word.flip(out.flipped_column);
  out.feasible_full = is_feasible(word, full);
  out.feasible_sample = is_feasible(word, sample);
  out.bad = out.feasible_full && !out.feasible_sample;
  return out;
}

}  // namespace fpclab
