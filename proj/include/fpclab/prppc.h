#pragma once

#include <cstddef>
#include <vector>

#include "fpclab/bits.h"
#include "fpclab/random.h"
#include "fpclab/tardos.h"

namespace fpclab {

/// C' in {0,1}^{n x d'} with d' = d + 2 * pad.
struct PaddedCodebook {
  BitMatrix bits;
  std::size_t original_length = 0;
  std::size_t pad = 0;

  std::size_t width() const noexcept { return original_length + 2 * pad; }
};

struct PrppcSecretState {
  TardosSecretState inner;
  /// Column j of the padded matrix (original columns first, then `pad`
  /// all-ones, then `pad` all-zeros) is column column_perm[j] of C'.
  std::vector<std::size_t> column_perm;
  /// Tardos user u is row row_perm[u] of C'. Public.
  std::vector<std::size_t> row_perm;
};

struct PrppcInstance {
  PaddedCodebook codebook;
  PrppcSecretState state;
};

/// Permutes rows, pads, permutes columns. Throws InvalidParameter if pad == 0,
/// and whatever tardos_gen throws.
PrppcInstance gen_prime(const TardosParams& params, std::size_t pad, RandomStream& rng);

/// a_og[j] = answer[column_perm[j]] for the original d columns.
BitVector extract_original(const BitVector& answer, const PrppcSecretState& state);

/// tardos_trace(extract_original(answer)). Throws LengthMismatch.
TraceOutcome trace_prime(const BitVector& answer, const PrppcSecretState& state);

/// C' row holding the accused user, if any.
std::optional<std::size_t> accused_row(const TraceOutcome& outcome, const PrppcSecretState& state);

/// Marking condition: every column j has some row agreeing with word[j].
/// Throws LengthMismatch.
bool is_feasible(const BitVector& word, const BitMatrix& rows);

/// True iff the bijection's image is {0, ..., size-1}.
bool is_permutation(const std::vector<std::size_t>& perm);

enum class FlipStrategy {
  /// Pick b, then a uniformly random column constant-b within the sample.
  kSampleConstantColumn,
  /// Flip a padded column (constant in the whole codebook).
  kPaddedColumn,
};

struct FeasibleSampleTrial {
  bool bad = false;  // feasible for C' but not for C'_S
  bool feasible_full = false;
  bool feasible_sample = false;
  std::size_t flipped_column = 0;
  bool flipped_padded = false;
};

/// One run of the column-flip adversary against the first `coalition_size`
/// rows of a fresh instance.
FeasibleSampleTrial feasible_sample_trial(const TardosParams& params, std::size_t pad,
                                          std::size_t coalition_size, FlipStrategy strategy,
                                          RandomStream& rng);

}  // namespace fpclab
