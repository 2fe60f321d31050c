#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "fpclab/bits.h"
#include "fpclab/problems.h"

namespace fpclab {

/// Distinct-query counters. Rows are 1-based. A row query is charged as d
/// attribute queries against its row.
struct QueryLedger {
  std::map<std::size_t, std::size_t> per_row;
  std::size_t total = 0;
  std::size_t row_queries = 0;
  std::set<std::size_t> prefix_released;

  bool operator==(const QueryLedger&) const = default;
};

/// Share (alpha_{j+d}, p(alpha_{j+d})) as residues.
struct AttributeAnswer {
  std::uint64_t point = 0;
  std::uint64_t value = 0;
  bool operator==(const AttributeAnswer&) const = default;
};

enum class OracleMode { kAttribute, kRow };

enum class PrefixPolicy {
  /// Released, uncharged, on the first attribute query to the row.
  kOnFirstQuery,
  /// Readable at any time.
  kPublic,
};

struct TranscriptEntry {
  std::size_t row = 0;
  /// 0 for row queries.
  std::size_t attribute = 0;
  AttributeAnswer answer;
  BitVector row_answer;
};

/// Base of every query-metered oracle. Single client.
class MeteredOracle {
 public:
  virtual ~MeteredOracle() = default;

  virtual OracleMode mode() const noexcept = 0;
  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }

  /// i in [1, n], j in [1, 2d]. WrongMode on row oracles.
  virtual AttributeAnswer attribute_query(std::size_t i, std::size_t j);
  /// i in [1, n]. WrongMode on attribute oracles.
  virtual BitVector row_query(std::size_t i);

  QueryLedger ledger_report() const { return ledger_; }
  const std::vector<TranscriptEntry>& transcript() const noexcept { return transcript_; }
  void set_recording(bool on) noexcept { recording_ = on; }

 protected:
  MeteredOracle(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim) {}
  void check_row(std::size_t i) const;
  void charge(std::size_t i, std::size_t amount);

  std::size_t rows_;
  std::size_t dim_;
  QueryLedger ledger_;
  std::vector<TranscriptEntry> transcript_;
  bool recording_ = true;
};

/// Attribute-query surface over share-encoded rows: caching, metering and
/// prefix release. Subclasses supply answers for fresh queries only.
class AttributeOracle : public MeteredOracle {
 public:
  OracleMode mode() const noexcept override { return OracleMode::kAttribute; }
  AttributeAnswer attribute_query(std::size_t i, std::size_t j) final;

  PrefixPolicy prefix_policy() const noexcept { return policy_; }
  /// Prefix points alpha_1..alpha_d of row i. Under kOnFirstQuery this throws
  /// PreconditionUnmet until the row has been queried.
  std::span<const std::uint64_t> prefix(std::size_t i);
  virtual std::uint64_t modulus() const noexcept = 0;

 protected:
  AttributeOracle(std::size_t rows, std::size_t dim, PrefixPolicy policy)
      : MeteredOracle(rows, dim), policy_(policy) {}
  virtual AttributeAnswer answer(std::size_t i, std::size_t j) = 0;
  virtual std::vector<std::uint64_t> fetch_prefix(std::size_t i) = 0;

 private:
  PrefixPolicy policy_;
  std::unordered_map<std::uint64_t, AttributeAnswer> cache_;
  std::map<std::size_t, std::vector<std::uint64_t>> prefixes_;
};

/// Honest oracle over an encode_ss output.
class ShareOracle final : public AttributeOracle {
 public:
  explicit ShareOracle(std::vector<ShareRow> rows, PrefixPolicy policy = PrefixPolicy::kOnFirstQuery);
  std::uint64_t modulus() const noexcept override { return modulus_; }

 protected:
  AttributeAnswer answer(std::size_t i, std::size_t j) override;
  std::vector<std::uint64_t> fetch_prefix(std::size_t i) override;

 private:
  std::vector<ShareRow> rows_data_;
  std::uint64_t modulus_;
};

/// Row-query surface for P_RO: the masked rows z_i are public and free,
/// H(i) costs d.
class RowOracle : public MeteredOracle {
 public:
  OracleMode mode() const noexcept override { return OracleMode::kRow; }
  BitVector row_query(std::size_t i) final;
  /// z_i, 1-based. Not metered.
  virtual const BitVector& masked_row(std::size_t i) const = 0;

 protected:
  RowOracle(std::size_t rows, std::size_t dim) : MeteredOracle(rows, dim) {}
  virtual BitVector answer_row(std::size_t i) = 0;

 private:
  std::map<std::size_t, BitVector> cache_;
};

/// Honest oracle over encode_ro(db, H). H must outlive the oracle.
class MaskedRowOracle final : public RowOracle {
 public:
  MaskedRowOracle(MaskedDatabase masked, RandomOracle& oracle);
  const BitVector& masked_row(std::size_t i) const override;

 protected:
  BitVector answer_row(std::size_t i) override;

 private:
  MaskedDatabase masked_;
  RandomOracle& h_;
};

}  // namespace fpclab
