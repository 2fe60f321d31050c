#include "fpclab/oracle.h"

#include <string>

#include "fpclab/error.h"

namespace fpclab {

AttributeAnswer MeteredOracle::attribute_query(std::size_t, std::size_t) {
  throw Error(ErrorKind::kWrongMode, "attribute query on a row oracle");
}

BitVector MeteredOracle::row_query(std::size_t) {
  throw Error(ErrorKind::kWrongMode, "row query on an attribute oracle");
}

void MeteredOracle::check_row(std::size_t i) const {
  if (i < 1 || i > rows_) {
    throw Error(ErrorKind::kIndexOutOfRange, "row " + std::to_string(i) + " not in [1, " + std::to_string(rows_) + "]");
  }
}

void MeteredOracle::charge(std::size_t i, std::size_t amount) {
  ledger_.per_row[i] += amount;
  ledger_.total += amount;
}

AttributeAnswer AttributeOracle::attribute_query(std::size_t i, std::size_t j) {
  check_row(i);
  if (j < 1 || j > 2 * dim()) {
    throw Error(ErrorKind::kIndexOutOfRange, "attribute " + std::to_string(j) + " not in [1, " +
                                                 std::to_string(2 * dim()) + "]");
  }
  const std::uint64_t key = static_cast<std::uint64_t>(i) * (2 * dim() + 1) + j;
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  if (policy_ == PrefixPolicy::kOnFirstQuery && !ledger_.prefix_released.contains(i)) {
    prefixes_.emplace(i, fetch_prefix(i));
  }
  const AttributeAnswer a = answer(i, j);
  if (policy_ == PrefixPolicy::kOnFirstQuery) ledger_.prefix_released.insert(i);
  charge(i, 1);
  cache_.emplace(key, a);
  if (recording_) transcript_.push_back({i, j, a, {}});
  return a;
}

std::span<const std::uint64_t> AttributeOracle::prefix(std::size_t i) {
  check_row(i);
  auto it = prefixes_.find(i);
  if (it != prefixes_.end()) return it->second;
  if (policy_ == PrefixPolicy::kOnFirstQuery) {
    throw Error(ErrorKind::kPreconditionUnmet, "prefix of row " + std::to_string(i) + " not released yet");
  }
  return prefixes_.emplace(i, fetch_prefix(i)).first->second;
}

ShareOracle::ShareOracle(std::vector<ShareRow> rows, PrefixPolicy policy)
    : AttributeOracle(rows.size(), rows.empty() ? 0 : rows.front().dim(), policy),
      rows_data_(std::move(rows)),
      modulus_(rows_data_.empty() ? 0 : rows_data_.front().modulus) {
  for (const auto& r : rows_data_) {
    if (r.dim() != dim() || r.share_points.size() != 2 * dim() || r.share_values.size() != 2 * dim()) {
      throw Error(ErrorKind::kDimensionMismatch, "share rows differ in shape");
    }
    if (r.modulus != modulus_) throw Error(ErrorKind::kFieldMismatch, "share rows over different fields");
  }
}

AttributeAnswer ShareOracle::answer(std::size_t i, std::size_t j) {
  const ShareRow& r = rows_data_[i - 1];
  return {r.share_points[j - 1], r.share_values[j - 1]};
}

std::vector<std::uint64_t> ShareOracle::fetch_prefix(std::size_t i) { return rows_data_[i - 1].prefix; }

BitVector RowOracle::row_query(std::size_t i) {
  check_row(i);
  if (auto it = cache_.find(i); it != cache_.end()) return it->second;
  BitVector h = answer_row(i);
  charge(i, dim());
  ++ledger_.row_queries;
  if (recording_) transcript_.push_back({i, 0, {}, h});
  return cache_.emplace(i, std::move(h)).first->second;
}

MaskedRowOracle::MaskedRowOracle(MaskedDatabase masked, RandomOracle& oracle)
    : RowOracle(masked.rows.rows(), masked.rows.cols()), masked_(std::move(masked)), h_(oracle) {
  if (h_.width() != dim()) throw Error(ErrorKind::kDimensionMismatch, "oracle width differs from rows");
}

const BitVector& MaskedRowOracle::masked_row(std::size_t i) const {
  check_row(i);
  return masked_.rows.row(i - 1);
}

BitVector MaskedRowOracle::answer_row(std::size_t i) { return h_(i - 1); }

}  // namespace fpclab
