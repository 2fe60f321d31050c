#include "fpclab/adversary.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpclab/error.h"
#include "fpclab/problems.h"

namespace fpclab {

CoalitionSample sample_coalition(const TardosParams& params, std::size_t ell, std::size_t coalition_size,
                                 RandomStream& rng) {
  if (coalition_size < 1 || coalition_size > params.n) {
    throw Error(ErrorKind::kInvalidCoalition, "coalition of " + std::to_string(coalition_size) + " rows out of " +
                                                  std::to_string(params.n));
  }
  auto instance = std::make_shared<PrppcInstance>(gen_prime(params, ell, rng));
  BitMatrix rows = instance->codebook.bits.first_rows(coalition_size);
  return {std::move(rows), std::move(instance)};
}

BitVector round_answer(const MarginalsVector& a) {
  BitVector out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out.set(j, a[j] >= 0.5);
  return out;
}

const char* attack_mode_name(AttackMode mode) {
  return mode == AttackMode::kRandomOracle ? "ro" : "ss";
}

SimulatedRowOracle::SimulatedRowOracle(const BitMatrix& coalition, std::size_t n, std::uint64_t seed)
    : RowOracle(n, coalition.cols()), coalition_(coalition) {
  RandomStream rng(seed);
  masked_ = random_database(n, coalition.cols(), rng).row_vectors();
}

const BitVector& SimulatedRowOracle::masked_row(std::size_t i) const {
  check_row(i);
  return masked_[i - 1];
}

BitVector SimulatedRowOracle::answer_row(std::size_t i) {
  if (bound_.size() >= coalition_.rows()) {
    throw Error(ErrorKind::kQueryBudgetExceeded,
                "distinct row query number " + std::to_string(bound_.size() + 1) + " with c = " +
                    std::to_string(coalition_.rows()));
  }
  BitVector h = masked_[i - 1];
  h ^= coalition_.row(bound_.size());
  bound_.push_back(i);
  return h;
}

SimulatedShareOracle::SimulatedShareOracle(const BitMatrix& coalition, std::size_t n, const FieldContext& ctx,
                                           std::uint64_t seed, PrefixPolicy policy)
    : AttributeOracle(n, coalition.cols(), policy), coalition_(coalition), ctx_(ctx), rng_(seed) {
  if (ctx.modulus() <= 4 * coalition.cols()) {
    throw Error(ErrorKind::kFieldTooSmall, "need |F| > 4d");
  }
}

SimulatedShareOracle::RowState& SimulatedShareOracle::state(std::size_t i) {
  auto it = rows_state_.find(i);
  if (it != rows_state_.end()) return it->second;
  RowState st(ctx_);
  st.prefix.resize(dim());
  for (auto& a : st.prefix) a = st.alphas.next(rng_);
  return rows_state_.emplace(i, std::move(st)).first->second;
}

const SimulatedShareOracle::RowState* SimulatedShareOracle::find(std::size_t i) const {
  auto it = rows_state_.find(i);
  return it == rows_state_.end() ? nullptr : &it->second;
}

std::vector<std::uint64_t> SimulatedShareOracle::fetch_prefix(std::size_t i) { return state(i).prefix; }

std::size_t SimulatedShareOracle::q(std::size_t i) const {
  const RowState* st = find(i);
  return st == nullptr ? 0 : st->answered;
}

bool SimulatedShareOracle::committed(std::size_t i) const {
  const RowState* st = find(i);
  return st != nullptr && st->member.has_value();
}

AttributeAnswer SimulatedShareOracle::answer(std::size_t i, std::size_t) {
  RowState& st = state(i);
  const std::size_t d = dim();
  if (!st.member && st.points.size() < d) {
    const std::uint64_t alpha = st.alphas.next(rng_);
    const std::uint64_t z = rng_.uniform_below(ctx_.modulus());
    st.points.push_back(alpha);
    st.values.push_back(z);
    ++st.answered;
    return {alpha, z};
  }
  if (!st.member) {
    if (commits_.size() >= coalition_.rows()) {
      throw Error(ErrorKind::kCommitBudgetExceeded,
                  "row " + std::to_string(i) + " would be commit number " + std::to_string(commits_.size() + 1) +
                      " with c = " + std::to_string(coalition_.rows()));
    }
    const std::size_t t = commits_.size();
    std::vector<std::uint64_t> xs(st.prefix);
    xs.insert(xs.end(), st.points.begin(), st.points.end());
    std::vector<std::uint64_t> ys(d);
    for (std::size_t j = 0; j < d; ++j) ys[j] = coalition_.get(t, j) ? 1 : 0;
    ys.insert(ys.end(), st.values.begin(), st.values.end());
    st.poly = interpolate_residues(ctx_, xs, ys);
    st.member = t;
    commits_.push_back(i);
    // 2d attributes per row, d of them answered before the commit.
    st.pending_points.resize(d);
    for (auto& a : st.pending_points) a = st.alphas.next(rng_);
    st.pending_values = evaluate_residues(ctx_, st.poly, st.pending_points);
  }
  const AttributeAnswer a{st.pending_points.at(st.served), st.pending_values.at(st.served)};
  ++st.served;
  ++st.answered;
  return a;
}

bool SimulatedShareOracle::consistent(std::size_t i) const {
  const RowState* st = find(i);
  if (st == nullptr || !st->member) return false;
  auto at_prefix = evaluate_residues(ctx_, st->poly, st->prefix);
  for (std::size_t j = 0; j < dim(); ++j) {
    if (at_prefix[j] != (coalition_.get(*st->member, j) ? 1U : 0U)) return false;
  }
  return evaluate_residues(ctx_, st->poly, st->points) == st->values;
}

namespace {

double max_abs_error(const MarginalsVector& a, const MarginalsVector& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

void diagnose(AttackReport& report, const MarginalsVector& output, const BitMatrix& coalition_rows,
              const PrppcInstance& instance) {
  report.rounded_answer = round_answer(output);
  report.outcome = trace_prime(report.rounded_answer, instance.state);
  report.accused_row = accused_row(report.outcome, instance.state);
  report.feasible_for_sample = is_feasible(report.rounded_answer, coalition_rows);
  report.feasible_for_full = is_feasible(report.rounded_answer, instance.codebook.bits);
  report.max_error_full = max_abs_error(output, exact_marginals(instance.codebook.bits));
  if (report.commit_count > 0) {
    const BitMatrix committed = coalition_rows.first_rows(report.commit_count);
    report.feasible_for_committed = is_feasible(report.rounded_answer, committed);
    report.max_error_committed = max_abs_error(output, exact_marginals(committed));
  }
}

template <typename Oracle>
AttackReport drive(Oracle& oracle, const BitMatrix& coalition_rows, const PrppcInstance& instance,
                   const CandidateAlgorithm& algorithm, RandomStream& rng,
                   std::vector<TranscriptEntry>* transcript) {
  oracle.set_recording(transcript != nullptr);
  AttackReport report;
  std::optional<MarginalsVector> output;
  try {
    output = run_candidate(algorithm, oracle, rng).output;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kQueryBudgetExceeded && e.kind() != ErrorKind::kCommitBudgetExceeded) throw;
    report.status = AttackStatus::kBudgetViolation;
    report.violation = e.what();
  }
  report.commit_count = oracle.commit_count();
  report.ledger = oracle.ledger_report();
  for (const auto& [row, count] : report.ledger.per_row) {
    if (count >= 2 * oracle.dim() || (oracle.mode() == OracleMode::kRow && count >= oracle.dim())) {
      ++report.decoded_rows;
    }
  }
  if (transcript != nullptr) *transcript = oracle.transcript();
  if (output) diagnose(report, *output, coalition_rows, instance);
  return report;
}

}  // namespace

AttackReport adversary_ro(const CoalitionSample& coalition, const CandidateAlgorithm& algorithm, RandomStream& rng,
                          std::vector<TranscriptEntry>* transcript) {
  SimulatedRowOracle oracle(coalition.rows, coalition.population(), rng.next_u64());
  return drive(oracle, coalition.rows, *coalition.instance, algorithm, rng, transcript);
}

AttackReport adversary_ss(const CoalitionSample& coalition, const CandidateAlgorithm& algorithm,
                          const FieldContext& ctx, RandomStream& rng, std::vector<TranscriptEntry>* transcript) {
  SimulatedShareOracle oracle(coalition.rows, coalition.population(), ctx, rng.next_u64());
  return drive(oracle, coalition.rows, *coalition.instance, algorithm, rng, transcript);
}

AttackReport run_attack(AttackMode mode, const CoalitionSample& coalition, const CandidateAlgorithm& algorithm,
                        const FieldContext& ctx, RandomStream& rng) {
  if (mode == AttackMode::kRandomOracle) return adversary_ro(coalition, algorithm, rng);
  return adversary_ss(coalition, algorithm, ctx, rng);
}

AttackReport neighbor_experiment(AttackMode mode, const CoalitionSample& coalition,
                                 const CandidateAlgorithm& algorithm, std::size_t removed,
                                 const FieldContext& ctx, RandomStream& rng) {
  if (removed < 1 || removed > coalition.size()) {
    throw Error(ErrorKind::kIndexOutOfRange, "removed row " + std::to_string(removed));
  }
  CoalitionSample neighbor = coalition;
  neighbor.rows.row(removed - 1) = BitVector(coalition.width());
  return run_attack(mode, neighbor, algorithm, ctx, rng);
}

}  // namespace fpclab
