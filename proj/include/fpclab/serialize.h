#pragma once

// JSON forms of the data types. Field elements are decimal strings.

#include <json.hpp>

#include "fpclab/adversary.h"
#include "fpclab/oracle.h"
#include "fpclab/problems.h"
#include "fpclab/solvers.h"
#include "fpclab/stats.h"

namespace fpclab {

using Json = nlohmann::ordered_json;

Json to_json(const BitVector& bits);
Json to_json(const ShareRow& row);
ShareRow share_row_from_json(const Json& j);
Json to_json(const MaskedDatabase& db);
Json to_json(const QueryLedger& ledger);
Json to_json(const std::vector<TranscriptEntry>& transcript);
Json to_json(const SolverReport& report);
Json to_json(const AttackReport& report);
Json to_json(const Proportion& p);

}  // namespace fpclab
