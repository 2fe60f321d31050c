#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fpclab/random.h"

namespace fpclab {

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n) noexcept;

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

class FieldElement;

/// A prime field F_q with 5 <= q < 2^63. Immutable after construction.
class FieldContext {
 public:
  /// Throws NonPrimeModulus / ModulusTooSmall.
  static FieldContext create(std::uint64_t q);
  static FieldContext mersenne61() { return create(kMersenne61); }

  std::uint64_t modulus() const noexcept { return q_; }

  FieldElement element(std::uint64_t value) const;
  FieldElement zero() const;
  FieldElement one() const;
  FieldElement random(RandomStream& rng) const;

  // Residue-level arithmetic for the hot paths; inputs must be < q.
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept { return a >= b ? a - b : a + q_ - b; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept;
  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const noexcept;
  /// Throws DivisionByZero for 0.
  std::uint64_t inv(std::uint64_t a) const;

  bool operator==(const FieldContext&) const = default;

 private:
  explicit FieldContext(std::uint64_t q) : q_(q) {}
  std::uint64_t q_;
};

/// Residue together with the modulus it belongs to. Mixing moduli throws
/// FieldMismatch.
class FieldElement {
 public:
  FieldElement(std::uint64_t value, const FieldContext& ctx);

  std::uint64_t value() const noexcept { return value_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  FieldContext context() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inverse() const;

  bool operator==(const FieldElement&) const = default;

 private:
  FieldElement(std::uint64_t value, std::uint64_t modulus) : value_(value), modulus_(modulus) {}
  void check_same(const FieldElement& o) const;

  std::uint64_t value_;
  std::uint64_t modulus_;
};

/// Dense polynomial, lowest degree first. Holds exactly degree_bound + 1
/// coefficients; trailing zeros are allowed.
class Polynomial {
 public:
  Polynomial(const FieldContext& ctx, std::vector<std::uint64_t> coefficients);

  std::size_t degree_bound() const noexcept { return coeffs_.size() - 1; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  std::span<const std::uint64_t> coefficients() const noexcept { return coeffs_; }
  FieldElement coefficient(std::size_t i) const;

  bool operator==(const Polynomial&) const = default;

 private:
  std::uint64_t modulus_;
  std::vector<std::uint64_t> coeffs_;
};

using FieldPoint = std::pair<FieldElement, FieldElement>;

/// Unique polynomial of degree <= degree_bound through the points.
/// Throws ArityMismatch, DuplicatePoint, FieldMismatch.
Polynomial interpolate(std::span<const FieldPoint> points, std::size_t degree_bound);

/// Horner evaluation. Throws FieldMismatch.
FieldElement evaluate(const Polynomial& p, const FieldElement& x);

/// k pairwise distinct uniform elements, in sampled order. Throws FieldExhausted.
std::vector<FieldElement> sample_distinct(const FieldContext& ctx, std::size_t k, RandomStream& rng);

/// Incremental version of sample_distinct: every draw avoids all earlier
/// draws and anything registered through reserve().
class DistinctSampler {
 public:
  explicit DistinctSampler(const FieldContext& ctx) : ctx_(ctx) {}

  std::uint64_t next(RandomStream& rng);
  void reserve(std::uint64_t value) { seen_.insert(value); }
  std::size_t drawn() const noexcept { return seen_.size(); }

 private:
  FieldContext ctx_;
  std::unordered_set<std::uint64_t> seen_;
};

/// Residue-level helpers used by the encoders. xs must be distinct.
std::vector<std::uint64_t> interpolate_residues(const FieldContext& ctx, std::span<const std::uint64_t> xs,
                                                std::span<const std::uint64_t> ys);
std::vector<std::uint64_t> evaluate_residues(const FieldContext& ctx, std::span<const std::uint64_t> coeffs,
                                             std::span<const std::uint64_t> xs);

}  // namespace fpclab
