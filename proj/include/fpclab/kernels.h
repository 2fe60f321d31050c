#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an OpenMP
// version; both produce bit-identical results (the parallel versions never
// reorder a floating-point reduction). kAuto picks the parallel path for large
// inputs when not already inside a parallel region.

#include <cstddef>
#include <cstdint>
#include <span>

#include "fpclab/bits.h"

namespace fpclab::kernels {

enum class Backend { kSerial, kParallel, kAuto };

/// Arithmetic mod 2^61 - 1 with a shift-and-add reduction.
struct Mersenne61 {
  static constexpr std::uint64_t kModulus = (std::uint64_t{1} << 61) - 1;

  std::uint64_t modulus() const noexcept { return kModulus; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t s = a + b;
    return s >= kModulus ? s - kModulus : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + kModulus - b;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(p) & kModulus;
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    return add(lo, hi);
  }
  /// sum a[k] * b[k] over `count` <= 32 terms, reduced once.
  std::uint64_t dot(const std::uint64_t* a, const std::uint64_t* b, std::size_t count) const noexcept {
    unsigned __int128 acc = 0;
    for (std::size_t k = 0; k < count; ++k) acc += static_cast<unsigned __int128>(a[k]) * b[k];
    const std::uint64_t lo = static_cast<std::uint64_t>(acc) & kModulus;
    const std::uint64_t mid = static_cast<std::uint64_t>(acc >> 61) & kModulus;
    const std::uint64_t hi = static_cast<std::uint64_t>(acc >> 122);
    const std::uint64_t s = lo + mid + hi;
    return add(s & kModulus, s >> 61);
  }
};

/// Arithmetic mod an arbitrary q < 2^63.
struct GenericModulus {
  std::uint64_t q;

  std::uint64_t modulus() const noexcept { return q; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t s = a + b;
    return s >= q ? s - q : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept { return a >= b ? a - b : a + q - b; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
  }
  std::uint64_t dot(const std::uint64_t* a, const std::uint64_t* b, std::size_t count) const noexcept {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < count; ++k) acc = add(acc, mul(a[k], b[k]));
    return acc;
  }
};

/// Coefficients (lowest degree first) of the unique polynomial of degree
/// < xs.size() through (xs[k], ys[k]). xs must be pairwise distinct residues.
void interpolate(std::uint64_t modulus, std::span<const std::uint64_t> xs,
                 std::span<const std::uint64_t> ys, std::span<std::uint64_t> coeffs,
                 Backend backend = Backend::kAuto);

/// out[k] = p(xs[k]) by Horner.
void evaluate_many(std::uint64_t modulus, std::span<const std::uint64_t> coeffs,
                   std::span<const std::uint64_t> xs, std::span<std::uint64_t> out,
                   Backend backend = Backend::kAuto);

/// counts[j] = number of ones in column j over the selected rows.
void column_counts(const BitMatrix& matrix, std::span<const std::size_t> rows,
                   std::span<std::uint32_t> counts, Backend backend = Backend::kAuto);

/// scores[i] = sum over j of (C[i][j] ? if_one[j] : if_zero[j]), summed in
/// ascending j for every user.
void weighted_row_sums(const BitMatrix& matrix, std::span<const double> if_one,
                       std::span<const double> if_zero, std::span<double> scores,
                       Backend backend = Backend::kAuto);

/// True when the OpenMP runtime was compiled in.
bool parallel_available() noexcept;

}  // namespace fpclab::kernels
