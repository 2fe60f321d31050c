#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fpclab {

/// Fixed-length packed bit string.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  static BitVector from_string(std::string_view bits);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool v) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  bool operator[](std::size_t i) const noexcept { return get(i); }

  std::size_t count() const noexcept;

  /// In-place XOR; sizes must match (LengthMismatch otherwise).
  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  bool operator==(const BitVector& other) const = default;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  std::string to_string() const;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Row-major binary matrix; each row is a packed BitVector.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols, bool value = false);
  explicit BitMatrix(std::vector<BitVector> rows);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  bool get(std::size_t i, std::size_t j) const noexcept { return rows_[i].get(j); }
  void set(std::size_t i, std::size_t j, bool v) noexcept { rows_[i].set(j, v); }

  const BitVector& row(std::size_t i) const noexcept { return rows_[i]; }
  BitVector& row(std::size_t i) noexcept { return rows_[i]; }
  const std::vector<BitVector>& row_vectors() const noexcept { return rows_; }

  /// Sub-matrix made of the given rows, in the given order.
  BitMatrix select_rows(std::span<const std::size_t> indices) const;
  BitMatrix first_rows(std::size_t count) const;

  bool operator==(const BitMatrix& other) const = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

}  // namespace fpclab
