#include "fpclab/bits.h"

#include <bit>

#include "fpclab/error.h"

namespace fpclab {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
  if (value && (size_ & 63) != 0) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      out.set(i, true);
    } else if (bits[i] != '0') {
      throw Error(ErrorKind::kNotBinary, "bit string contains '" + std::string(1, bits[i]) + "'");
    }
  }
  return out;
}

std::size_t BitVector::count() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size_ != size_) {
    throw Error(ErrorKind::kLengthMismatch, "xor of " + std::to_string(size_) + " and " +
                                                std::to_string(other.size_) + " bits");
  }
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

std::string BitVector::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) out[i] = '1';
  }
  return out;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols, bool value)
    : cols_(cols), rows_(rows, BitVector(cols, value)) {}

BitMatrix::BitMatrix(std::vector<BitVector> rows) : rows_(std::move(rows)) {
  if (!rows_.empty()) cols_ = rows_.front().size();
  for (const auto& r : rows_) {
    if (r.size() != cols_) throw Error(ErrorKind::kDimensionMismatch, "ragged rows");
  }
}

BitMatrix BitMatrix::select_rows(std::span<const std::size_t> indices) const {
  std::vector<BitVector> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= rows_.size()) throw Error(ErrorKind::kIndexOutOfRange, "row " + std::to_string(i));
    out.push_back(rows_[i]);
  }
  BitMatrix m(std::move(out));
  m.cols_ = cols_;
  return m;
}

BitMatrix BitMatrix::first_rows(std::size_t count) const {
  if (count > rows_.size()) throw Error(ErrorKind::kIndexOutOfRange, "first_rows");
  BitMatrix m(std::vector<BitVector>(rows_.begin(), rows_.begin() + static_cast<std::ptrdiff_t>(count)));
  m.cols_ = cols_;
  return m;
}

}  // namespace fpclab
