#include "fpclab/serialize.h"

#include <string>

#include "fpclab/error.h"

namespace fpclab {
namespace {

Json residues(const std::vector<std::uint64_t>& values) {
  Json out = Json::array();
  for (auto v : values) out.push_back(std::to_string(v));
  return out;
}

std::vector<std::uint64_t> parse_residues(const Json& j) {
  std::vector<std::uint64_t> out;
  for (const auto& v : j) out.push_back(std::stoull(v.get<std::string>()));
  return out;
}

}  // namespace

Json to_json(const BitVector& bits) { return bits.to_string(); }

Json to_json(const ShareRow& row) {
  Json j;
  j["modulus"] = std::to_string(row.modulus);
  j["prefix"] = residues(row.prefix);
  j["share_points"] = residues(row.share_points);
  j["share_values"] = residues(row.share_values);
  return j;
}

ShareRow share_row_from_json(const Json& j) {
  try {
    ShareRow row;
    row.modulus = std::stoull(j.at("modulus").get<std::string>());
    row.prefix = parse_residues(j.at("prefix"));
    row.share_points = parse_residues(j.at("share_points"));
    row.share_values = parse_residues(j.at("share_values"));
    return row;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kConfigInvalid, std::string("share row: ") + e.what());
  }
}

Json to_json(const MaskedDatabase& db) {
  Json rows = Json::array();
  for (const auto& r : db.rows.row_vectors()) rows.push_back(r.to_string());
  Json j;
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const QueryLedger& ledger) {
  Json per_row = Json::object();
  for (const auto& [row, count] : ledger.per_row) per_row[std::to_string(row)] = count;
  Json j;
  j["total"] = ledger.total;
  j["row_queries"] = ledger.row_queries;
  j["per_row"] = std::move(per_row);
  j["prefix_released"] = ledger.prefix_released;
  return j;
}

Json to_json(const std::vector<TranscriptEntry>& transcript) {
  Json out = Json::array();
  for (const auto& e : transcript) {
    Json j;
    j["row"] = e.row;
    if (e.attribute == 0) {
      j["h"] = e.row_answer.to_string();
    } else {
      j["attribute"] = e.attribute;
      j["point"] = std::to_string(e.answer.point);
      j["value"] = std::to_string(e.answer.value);
    }
    out.push_back(std::move(j));
  }
  return out;
}

Json to_json(const SolverReport& report) {
  Json j;
  j["output"] = report.output;
  j["queries_used"] = to_json(report.queries_used);
  j["noise_sigma"] = report.noise_sigma ? Json(*report.noise_sigma) : Json(nullptr);
  j["below_threshold"] = report.below_threshold;
  return j;
}

Json to_json(const AttackReport& report) {
  Json j;
  j["status"] = report.status == AttackStatus::kCompleted ? "completed" : "budget-violation";
  if (!report.violation.empty()) j["violation"] = report.violation;
  j["accused_row"] = report.accused_row ? Json(*report.accused_row) : Json(nullptr);
  j["bottom"] = report.outcome.is_bottom();
  j["commit_count"] = report.commit_count;
  j["accused_committed"] = report.accused_committed();
  j["accused_innocent"] = report.accused_innocent();
  j["rounded_answer"] = report.rounded_answer.to_string();
  j["feasible_for_sample"] = report.feasible_for_sample;
  j["feasible_for_committed"] = report.feasible_for_committed;
  j["feasible_for_full"] = report.feasible_for_full;
  j["max_error_committed"] = report.max_error_committed ? Json(*report.max_error_committed) : Json(nullptr);
  j["max_error_full"] = report.max_error_full;
  j["decoded_rows"] = report.decoded_rows;
  j["ledger"] = to_json(report.ledger);
  return j;
}

Json to_json(const Proportion& p) {
  Json j;
  j["count"] = p.count;
  j["trials"] = p.trials;
  j["rate"] = p.rate;
  j["wilson_low"] = p.low;
  j["wilson_high"] = p.high;
  return j;
}

}  // namespace fpclab
