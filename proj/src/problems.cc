#include "fpclab/problems.h"

#include <string>

#include "fpclab/error.h"
#include "fpclab/kernels.h"

namespace fpclab {

MarginalsVector exact_marginals(const BinaryDatabase& db) {
  if (db.rows() == 0) throw Error(ErrorKind::kEmptyDatabase, "marginals of an empty database");
  std::vector<std::size_t> all(db.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::uint32_t> counts(db.cols());
  kernels::column_counts(db, all, counts);
  MarginalsVector out(db.cols());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = static_cast<double>(counts[j]) / static_cast<double>(db.rows());
  return out;
}

BinaryDatabase random_database(std::size_t n, std::size_t d, RandomStream& rng) {
  BinaryDatabase db(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    auto words = db.row(i).words();
    for (auto& w : words) w = rng.next_u64();
    if ((d & 63) != 0 && !words.empty()) words.back() &= (std::uint64_t{1} << (d & 63)) - 1;
  }
  return db;
}

const BitVector& RandomOracle::operator()(std::size_t row) {
  auto it = table_.find(row);
  if (it != table_.end()) return it->second;
  BitVector value(width_);
  for (std::size_t j = 0; j < width_; ++j) value.set(j, rng_.coin());
  return table_.emplace(row, std::move(value)).first->second;
}

MaskedDatabase encode_ro(const BinaryDatabase& db, RandomOracle& oracle) {
  if (oracle.width() != db.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "oracle width " + std::to_string(oracle.width()) +
                                                   " vs database width " + std::to_string(db.cols()));
  }
  MaskedDatabase out{db, &oracle};
  for (std::size_t i = 0; i < db.rows(); ++i) out.rows.row(i) ^= oracle(i);
  return out;
}

bool MaskedDatabase::verify(const BinaryDatabase& db) const {
  if (oracle == nullptr || db.rows() != rows.rows() || db.cols() != rows.cols()) return false;
  for (std::size_t i = 0; i < db.rows(); ++i) {
    if (((*oracle)(i) ^ db.row(i)) != rows.row(i)) return false;
  }
  return true;
}

ShareRow encode_ss_row(const BitVector& x, const FieldContext& ctx, RandomStream& rng, Polynomial* escrow) {
  const std::size_t d = x.size();
  if (ctx.modulus() <= 4 * d) {
    throw Error(ErrorKind::kFieldTooSmall, "need |F| > 4d = " + std::to_string(4 * d));
  }
  DistinctSampler alphas(ctx);
  ShareRow row;
  row.modulus = ctx.modulus();
  row.prefix.resize(d);
  row.share_points.resize(2 * d);
  row.share_values.resize(2 * d);
  for (auto& a : row.prefix) a = alphas.next(rng);
  for (auto& a : row.share_points) a = alphas.next(rng);

  // Constraints: p(alpha_j) = x_j and p(alpha_{d+j}) = z_{d+j} for j <= d.
  std::vector<std::uint64_t> xs(2 * d);
  std::vector<std::uint64_t> ys(2 * d);
  for (std::size_t j = 0; j < d; ++j) {
    xs[j] = row.prefix[j];
    ys[j] = x.get(j) ? 1 : 0;
    xs[d + j] = row.share_points[j];
    ys[d + j] = rng.uniform_below(ctx.modulus());
    row.share_values[j] = ys[d + j];
  }
  auto coeffs = interpolate_residues(ctx, xs, ys);
  auto tail = evaluate_residues(ctx, coeffs, std::span<const std::uint64_t>(row.share_points).subspan(d));
  for (std::size_t j = 0; j < d; ++j) row.share_values[d + j] = tail[j];
  if (escrow != nullptr) *escrow = Polynomial(ctx, std::move(coeffs));
  return row;
}

std::vector<ShareRow> encode_ss(const BinaryDatabase& db, const FieldContext& ctx, RandomStream& rng,
                                std::vector<Polynomial>* escrow) {
  std::vector<ShareRow> out;
  out.reserve(db.rows());
  if (escrow != nullptr) escrow->clear();
  for (std::size_t i = 0; i < db.rows(); ++i) {
    if (escrow != nullptr) {
      Polynomial p(ctx, {});
      out.push_back(encode_ss_row(db.row(i), ctx, rng, &p));
      escrow->push_back(std::move(p));
    } else {
      out.push_back(encode_ss_row(db.row(i), ctx, rng));
    }
  }
  return out;
}

BitVector decode_ss(const ShareRow& row) {
  const std::size_t d = row.dim();
  if (row.share_points.size() < 2 * d || row.share_values.size() < 2 * d) {
    throw Error(ErrorKind::kIncompleteShares, std::to_string(row.share_points.size()) + " of " +
                                                  std::to_string(2 * d) + " shares");
  }
  if (row.share_points.size() != 2 * d || row.share_values.size() != 2 * d) {
    throw Error(ErrorKind::kArityMismatch, "more than 2d shares");
  }
  const FieldContext ctx = FieldContext::create(row.modulus);
  auto coeffs = interpolate_residues(ctx, row.share_points, row.share_values);
  auto values = evaluate_residues(ctx, coeffs, row.prefix);
  BitVector out(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (values[j] > 1) throw Error(ErrorKind::kNotBinary, "prefix point " + std::to_string(j + 1));
    out.set(j, values[j] == 1);
  }
  return out;
}

std::pair<std::uint64_t, std::uint64_t> ShareView::query(std::size_t j) {
  if (j < 1 || j > 2 * dim()) throw Error(ErrorKind::kIndexOutOfRange, "share " + std::to_string(j));
  auto it = asked_.find(j);
  if (it != asked_.end()) return it->second;
  if (asked_.size() >= budget_) {
    throw Error(ErrorKind::kQueryBudgetExceeded, "more than " + std::to_string(budget_) + " queries");
  }
  std::pair<std::uint64_t, std::uint64_t> answer{row_.share_points[j - 1], row_.share_values[j - 1]};
  asked_.emplace(j, answer);
  return answer;
}

SecurityAttacker decode_and_compare_attacker() {
  return [](ShareView& view, const BitVector& x, RandomStream& rng) -> int {
    const std::size_t d = view.dim();
    if (view.budget() < 2 * d) return rng.coin() ? 1 : 0;
    ShareRow row;
    row.modulus = view.modulus();
    row.prefix.assign(view.prefix().begin(), view.prefix().end());
    for (std::size_t j = 1; j <= 2 * d; ++j) {
      auto [point, value] = view.query(j);
      row.share_points.push_back(point);
      row.share_values.push_back(value);
    }
    try {
      return decode_ss(row) == x ? 0 : 1;
    } catch (const Error&) {
      return 1;
    }
  };
}

SecurityAttacker consistency_attacker() {
  return [](ShareView& view, const BitVector& x, RandomStream& rng) -> int {
    const std::size_t d = view.dim();
    const std::size_t q = std::min(view.budget(), 2 * d);
    if (q == 0) return rng.coin() ? 1 : 0;
    const FieldContext ctx = FieldContext::create(view.modulus());
    std::vector<std::uint64_t> xs(view.prefix().begin(), view.prefix().end());
    std::vector<std::uint64_t> ys;
    for (std::size_t j = 0; j < d; ++j) ys.push_back(x.get(j) ? 1 : 0);
    for (std::size_t j = 1; j < q; ++j) {
      auto [point, value] = view.query(j);
      xs.push_back(point);
      ys.push_back(value);
    }
    auto [probe_point, probe_value] = view.query(q);
    auto coeffs = interpolate_residues(ctx, xs, ys);
    std::uint64_t probe = probe_point;
    auto predicted = evaluate_residues(ctx, coeffs, std::span<const std::uint64_t>(&probe, 1));
    return predicted[0] == probe_value ? 0 : 1;
  };
}

SecurityAttacker random_guess_attacker() {
  return [](ShareView&, const BitVector&, RandomStream& rng) -> int { return rng.coin() ? 1 : 0; };
}

SecurityGameTrial security_game_trial(const SecurityAttacker& attacker, std::size_t q, const BitVector& x,
                                      const FieldContext& ctx, std::uint64_t seed) {
  const std::size_t d = x.size();
  if (q > 2 * d) throw Error(ErrorKind::kInvalidParameter, "q must be at most 2d");
  RandomStream rng(seed);
  SecurityGameTrial trial;
  trial.b = rng.coin() ? 1 : 0;
  const ShareRow y = encode_ss_row(trial.b == 0 ? x : BitVector(d), ctx, rng);
  ShareView view(y, q);
  try {
    trial.guess = attacker(view, x, rng);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kQueryBudgetExceeded) throw;
  }
  trial.queries = view.queries();
  return trial;
}

SecurityGameResult security_game_experiment(const SecurityAttacker& attacker, std::size_t q,
                                            const BitVector& x, const FieldContext& ctx,
                                            std::size_t trials, std::uint64_t seed) {
  SecurityGameResult result;
  result.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const SecurityGameTrial trial = security_game_trial(attacker, q, x, ctx, child_seed(seed, t));
    if (!trial.guess) ++result.budget_violations;
    if (trial.won()) ++result.successes;
  }
  return result;
}

std::vector<std::uint64_t> real_world_view(const BitVector& x, const FieldContext& ctx,
                                           std::span<const std::size_t> positions, RandomStream& rng) {
  const std::size_t d = x.size();
  if (positions.size() != d) throw Error(ErrorKind::kArityMismatch, "need exactly d share positions");
  const ShareRow row = encode_ss_row(x, ctx, rng);
  std::vector<std::uint64_t> out(row.prefix.begin(), row.prefix.end());
  for (std::size_t pos : positions) {
    if (pos < 1 || pos > 2 * d) throw Error(ErrorKind::kIndexOutOfRange, "share " + std::to_string(pos));
    out.push_back(row.share_points[pos - 1]);
    out.push_back(row.share_values[pos - 1]);
  }
  return out;
}

std::vector<std::uint64_t> ideal_world_view(std::size_t d, const FieldContext& ctx, RandomStream& rng) {
  std::vector<std::uint64_t> out(3 * d);
  for (auto& v : out) v = rng.uniform_below(ctx.modulus());
  return out;
}

}  // namespace fpclab
