#include "fpclab/kernels.h"

#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fpclab/error.h"

namespace fpclab::kernels {
namespace {

constexpr std::size_t kParallelThreshold = 256;

bool use_parallel(Backend backend, std::size_t work) {
#ifdef _OPENMP
  if (backend == Backend::kParallel) return true;
  if (backend == Backend::kSerial) return false;
  return work >= kParallelThreshold && !omp_in_parallel() && omp_get_max_threads() > 1;
#else
  (void)backend;
  (void)work;
  return false;
#endif
}

template <typename Mod>
std::uint64_t pow_mod(const Mod& m, std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  while (exp != 0) {
    if (exp & 1) result = m.mul(result, base);
    base = m.mul(base, base);
    exp >>= 1;
  }
  return result;
}

// Montgomery batch inversion: one exponentiation plus 3(n-1) products.
template <typename Mod>
void invert_all(const Mod& m, std::span<std::uint64_t> values) {
  if (values.empty()) return;
  std::vector<std::uint64_t> prefix(values.size());
  std::uint64_t acc = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) throw Error(ErrorKind::kDivisionByZero, "batch inversion of zero");
    prefix[i] = acc;
    acc = m.mul(acc, values[i]);
  }
  std::uint64_t inv = pow_mod(m, acc, m.modulus() - 2);
  for (std::size_t i = values.size(); i-- > 0;) {
    std::uint64_t vi = values[i];
    values[i] = m.mul(inv, prefix[i]);
    inv = m.mul(inv, vi);
  }
}

// master(x) = prod_k (x - xs[k]), degree m, lowest first.
template <typename Mod>
std::vector<std::uint64_t> master_polynomial(const Mod& m, std::span<const std::uint64_t> xs) {
  std::vector<std::uint64_t> master(xs.size() + 1, 0);
  master[0] = 1;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const std::uint64_t neg = m.sub(0, xs[k]);
    for (std::size_t i = k + 1; i > 0; --i) master[i] = m.add(master[i - 1], m.mul(neg, master[i]));
    master[0] = m.mul(neg, master[0]);
  }
  return master;
}

template <typename Mod>
void evaluate_impl(const Mod& m, std::span<const std::uint64_t> coeffs,
                   std::span<const std::uint64_t> xs, std::span<std::uint64_t> out, bool parallel) {
  constexpr std::size_t kBlock = 8;
  const std::size_t blocks = (xs.size() + kBlock - 1) / kBlock;
  auto run_block = [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t width = std::min(kBlock, xs.size() - lo);
    std::uint64_t acc[kBlock] = {};
    std::uint64_t x[kBlock] = {};
    for (std::size_t k = 0; k < width; ++k) x[k] = xs[lo + k];
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      const std::uint64_t c = coeffs[i];
      for (std::size_t k = 0; k < kBlock; ++k) acc[k] = m.add(m.mul(acc[k], x[k]), c);
    }
    for (std::size_t k = 0; k < width; ++k) out[lo + k] = acc[k];
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  }
}

constexpr std::size_t kLanes = 8;

// Adds sum_b scale[b] * master(x) / (x - root[b]) into acc, for up to kLanes
// roots at once; the synthetic divisions run interleaved.
template <typename Mod>
void accumulate_quotients(const Mod& m, std::span<const std::uint64_t> master, const std::uint64_t* roots,
                          const std::uint64_t* scales, std::size_t count, std::span<std::uint64_t> acc) {
  const std::size_t deg = master.size() - 1;
  std::uint64_t r[kLanes] = {};
  std::uint64_t s[kLanes] = {};
  std::uint64_t q[kLanes];
  for (std::size_t b = 0; b < count; ++b) {
    r[b] = roots[b];
    s[b] = scales[b];
  }
  for (std::size_t b = 0; b < kLanes; ++b) q[b] = master[deg];
  for (std::size_t i = deg; i-- > 0;) {
    acc[i] = m.add(acc[i], m.dot(s, q, kLanes));
    const std::uint64_t c = master[i];
    for (std::size_t b = 0; b < kLanes; ++b) q[b] = m.add(c, m.mul(r[b], q[b]));
  }
}

template <typename Mod>
void interpolate_impl(const Mod& m, std::span<const std::uint64_t> xs,
                      std::span<const std::uint64_t> ys, std::span<std::uint64_t> coeffs,
                      bool parallel) {
  const std::size_t n = xs.size();
  std::fill(coeffs.begin(), coeffs.end(), 0);
  if (n == 0) return;
  const auto master = master_polynomial(m, xs);

  // denom[j] = prod_{k != j} (xs[j] - xs[k]) = master'(xs[j])
  std::vector<std::uint64_t> derivative(n);
  for (std::size_t i = 0; i < n; ++i) derivative[i] = m.mul((i + 1) % m.modulus(), master[i + 1]);
  std::vector<std::uint64_t> denom(n);
  evaluate_impl(m, std::span<const std::uint64_t>(derivative), xs, std::span<std::uint64_t>(denom), parallel);
  invert_all(m, std::span<std::uint64_t>(denom));
  for (std::size_t j = 0; j < n; ++j) denom[j] = m.mul(ys[j], denom[j]);

  const std::size_t groups = (n + kLanes - 1) / kLanes;
  auto run_group = [&](std::size_t g, std::span<std::uint64_t> acc) {
    const std::size_t lo = g * kLanes;
    accumulate_quotients(m, master, xs.data() + lo, denom.data() + lo, std::min(kLanes, n - lo), acc);
  };
  if (!parallel) {
    for (std::size_t g = 0; g < groups; ++g) run_group(g, coeffs);
    return;
  }
#ifdef _OPENMP
  // Modular addition is exact, so per-thread partial sums merge to the same
  // residues as the serial order.
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(n, 0);
#pragma omp for schedule(static) nowait
    for (std::size_t g = 0; g < groups; ++g) run_group(g, local);
#pragma omp critical
    for (std::size_t i = 0; i < n; ++i) coeffs[i] = m.add(coeffs[i], local[i]);
  }
#endif
}

void check_modulus(std::uint64_t modulus) {
  if (modulus < 2 || modulus >= (std::uint64_t{1} << 63)) {
    throw Error(ErrorKind::kInvalidParameter, "modulus out of kernel range");
  }
}

}  // namespace

void interpolate(std::uint64_t modulus, std::span<const std::uint64_t> xs,
                 std::span<const std::uint64_t> ys, std::span<std::uint64_t> coeffs,
                 Backend backend) {
  check_modulus(modulus);
  if (xs.size() != ys.size() || coeffs.size() != xs.size()) {
    throw Error(ErrorKind::kArityMismatch, "interpolate: span sizes differ");
  }
  const bool parallel = use_parallel(backend, xs.size());
  if (modulus == Mersenne61::kModulus) {
    interpolate_impl(Mersenne61{}, xs, ys, coeffs, parallel);
  } else {
    interpolate_impl(GenericModulus{modulus}, xs, ys, coeffs, parallel);
  }
}

void evaluate_many(std::uint64_t modulus, std::span<const std::uint64_t> coeffs,
                   std::span<const std::uint64_t> xs, std::span<std::uint64_t> out,
                   Backend backend) {
  check_modulus(modulus);
  if (out.size() != xs.size()) throw Error(ErrorKind::kArityMismatch, "evaluate_many: sizes differ");
  const bool parallel = use_parallel(backend, xs.size());
  if (modulus == Mersenne61::kModulus) {
    evaluate_impl(Mersenne61{}, coeffs, xs, out, parallel);
  } else {
    evaluate_impl(GenericModulus{modulus}, coeffs, xs, out, parallel);
  }
}

void column_counts(const BitMatrix& matrix, std::span<const std::size_t> rows,
                   std::span<std::uint32_t> counts, Backend backend) {
  if (counts.size() != matrix.cols()) throw Error(ErrorKind::kLengthMismatch, "column_counts");
  const std::size_t words = (matrix.cols() + 63) / 64;
  auto run_word = [&](std::size_t w) {
    const std::size_t lo = w * 64;
    const std::size_t hi = std::min(matrix.cols(), lo + 64);
    std::uint32_t local[64] = {};
    for (std::size_t r : rows) {
      std::uint64_t bits = matrix.row(r).words()[w];
      while (bits != 0) {
        local[__builtin_ctzll(bits)] += 1;
        bits &= bits - 1;
      }
    }
    for (std::size_t j = lo; j < hi; ++j) counts[j] = local[j - lo];
  };
  if (use_parallel(backend, words * rows.size())) {
#pragma omp parallel for schedule(static)
    for (std::size_t w = 0; w < words; ++w) run_word(w);
  } else {
    for (std::size_t w = 0; w < words; ++w) run_word(w);
  }
}

void weighted_row_sums(const BitMatrix& matrix, std::span<const double> if_one,
                       std::span<const double> if_zero, std::span<double> scores, Backend backend) {
  if (if_one.size() != matrix.cols() || if_zero.size() != matrix.cols() ||
      scores.size() != matrix.rows()) {
    throw Error(ErrorKind::kLengthMismatch, "weighted_row_sums");
  }
  auto run_row = [&](std::size_t i) {
    const BitVector& row = matrix.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < matrix.cols(); ++j) s += row.get(j) ? if_one[j] : if_zero[j];
    scores[i] = s;
  };
  if (use_parallel(backend, matrix.rows() * matrix.cols() / 64)) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < matrix.rows(); ++i) run_row(i);
  } else {
    for (std::size_t i = 0; i < matrix.rows(); ++i) run_row(i);
  }
}

bool parallel_available() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace fpclab::kernels
