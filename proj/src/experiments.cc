#include "fpclab/experiments.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fpclab/error.h"
#include "fpclab/solvers.h"
#include "fpclab/stats.h"

namespace fpclab {

const char* experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kFpcSecurity: return "fpc-security";
    case ExperimentKind::kFeasibleSample: return "feasible-sample";
    case ExperimentKind::kSsSecurityGame: return "ss-security-game";
    case ExperimentKind::kSolverAccuracy: return "solver-accuracy";
    case ExperimentKind::kReidAttack: return "reid-attack";
    case ExperimentKind::kNeighborGap: return "neighbor-gap";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::kFpcSecurity, ExperimentKind::kFeasibleSample, ExperimentKind::kSsSecurityGame,
                 ExperimentKind::kSolverAccuracy, ExperimentKind::kReidAttack, ExperimentKind::kNeighborGap}) {
    if (name == experiment_kind_name(k)) return k;
  }
  return std::nullopt;
}

namespace {

const char* flip_name(FlipStrategy f) {
  return f == FlipStrategy::kSampleConstantColumn ? "sample-constant" : "padded";
}

bool uses_code(ExperimentKind k) {
  return k == ExperimentKind::kFpcSecurity || k == ExperimentKind::kFeasibleSample ||
         k == ExperimentKind::kReidAttack || k == ExperimentKind::kNeighborGap;
}

bool is_attack(ExperimentKind k) { return k == ExperimentKind::kReidAttack || k == ExperimentKind::kNeighborGap; }

// Reads typed fields out of a JSON object, collecting one message per bad
// field instead of stopping at the first.
class FieldReader {
 public:
  FieldReader(const Json& j, std::vector<std::string>& diag) : j_(j), diag_(diag) {}

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    convert(key, j_.at(key), out);
  }

  template <typename T>
  void read(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    if (j_.at(key).is_null()) {
      out.reset();
      return;
    }
    T value{};
    if (convert(key, j_.at(key), value)) out = value;
  }

  void mark(const char* key) { seen_.insert(key); }

  void unknown_fields() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) diag_.push_back(it.key() + ": unknown field");
    }
  }

  void fail(const std::string& key, const std::string& what) { diag_.push_back(key + ": " + what); }

 private:
  bool convert(const std::string& key, const Json& v, std::size_t& out) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      fail(key, "expected a non-negative integer");
      return false;
    }
    out = v.get<std::size_t>();
    return true;
  }
  bool convert(const std::string& key, const Json& v, double& out) {
    if (!v.is_number()) {
      fail(key, "expected a number");
      return false;
    }
    out = v.get<double>();
    return true;
  }
  bool convert(const std::string& key, const Json& v, bool& out) {
    if (!v.is_boolean()) {
      fail(key, "expected true or false");
      return false;
    }
    out = v.get<bool>();
    return true;
  }
  bool convert(const std::string& key, const Json& v, std::string& out) {
    if (!v.is_string()) {
      fail(key, "expected a string");
      return false;
    }
    out = v.get<std::string>();
    return true;
  }

  const Json& j_;
  std::vector<std::string>& diag_;
  std::set<std::string> seen_;
};

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  std::vector<std::string> diag;
  if (!j.is_object()) throw Error(ErrorKind::kConfigInvalid, "config must be a JSON object");
  ExperimentConfig cfg;
  FieldReader r(j, diag);

  std::string kind;
  r.read("kind", kind);
  if (!j.contains("kind")) {
    diag.push_back("kind: required");
  } else if (auto k = parse_experiment_kind(kind)) {
    cfg.kind = *k;
  } else if (j.at("kind").is_string()) {
    diag.push_back("kind: unknown experiment kind '" + kind + "'");
  }

  r.read("name", cfg.name);
  // Seeds may exceed 2^53, so decimal strings are accepted too.
  r.mark("seed");
  if (j.contains("seed")) {
    const Json& v = j.at("seed");
    if (v.is_number_unsigned()) {
      cfg.seed = v.get<std::uint64_t>();
    } else {
      try {
        std::size_t used = 0;
        const std::string s = v.is_string() ? v.get<std::string>() : std::string("?");
        cfg.seed = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        diag.push_back("seed: expected an unsigned integer");
      }
    }
  }
  r.read("trials", cfg.trials);
  r.read("n", cfg.n);
  r.read("d", cfg.d);
  r.read("c", cfg.c);
  r.read("coalition_size", cfg.coalition_size);
  r.read("ell", cfg.ell);
  r.read("ell_factor", cfg.ell_factor);
  r.read("xi", cfg.xi);
  r.read("code_threshold", cfg.code_threshold);
  r.read("length_constant", cfg.length_constant);
  r.mark("modulus");
  if (j.contains("modulus")) {
    const Json& m = j.at("modulus");
    if (m.is_string()) {
      try {
        cfg.modulus = std::stoull(m.get<std::string>());
      } catch (const std::exception&) {
        diag.push_back("modulus: expected an unsigned integer");
      }
    } else if (m.is_number_unsigned()) {
      cfg.modulus = m.get<std::uint64_t>();
    } else {
      diag.push_back("modulus: expected an unsigned integer");
    }
  }
  r.read("epsilon", cfg.epsilon);
  r.read("delta", cfg.delta);
  r.read("alpha", cfg.alpha);
  r.read("p_fail", cfg.p_fail);
  r.read("sample_rows", cfg.sample_rows);
  r.read("allow_below_threshold", cfg.allow_below_threshold);
  r.read("q", cfg.q);
  r.read("attacker", cfg.attacker);
  r.read("x", cfg.x);
  r.mark("strategies");
  if (j.contains("strategies")) {
    const Json& s = j.at("strategies");
    if (!s.is_array() || s.empty()) {
      diag.push_back("strategies: expected a non-empty array of strategy names");
    } else {
      cfg.strategies.clear();
      for (const auto& e : s) {
        auto parsed = e.is_string() ? parse_pirate_strategy(e.get<std::string>()) : std::nullopt;
        if (!parsed) {
          diag.push_back("strategies: unknown strategy " + e.dump());
        } else {
          cfg.strategies.push_back(*parsed);
        }
      }
    }
  }
  std::string flip = flip_name(cfg.flip);
  r.read("flip", flip);
  if (flip == "sample-constant") {
    cfg.flip = FlipStrategy::kSampleConstantColumn;
  } else if (flip == "padded") {
    cfg.flip = FlipStrategy::kPaddedColumn;
  } else {
    diag.push_back("flip: expected 'sample-constant' or 'padded'");
  }
  r.read("solver", cfg.solver);
  r.read("problem", cfg.problem);
  r.read("accuracy_bound", cfg.accuracy_bound);
  std::string mode = attack_mode_name(cfg.mode);
  r.read("mode", mode);
  if (mode == "ro") {
    cfg.mode = AttackMode::kRandomOracle;
  } else if (mode == "ss") {
    cfg.mode = AttackMode::kSecretSharing;
  } else {
    diag.push_back("mode: expected 'ro' or 'ss'");
  }
  r.read("algorithm", cfg.algorithm);
  r.read("spread_rows", cfg.spread_rows);
  r.read("spread_per_row", cfg.spread_per_row);
  r.read("constant_value", cfg.constant_value);
  r.read("success_bound", cfg.success_bound);
  r.read("removed", cfg.removed);
  r.read("time_budget_s", cfg.time_budget_s);
  r.read("output", cfg.output);
  r.unknown_fields();

  if (diag.empty()) diag = config_diagnostics(cfg);
  if (!diag.empty()) {
    std::string msg;
    for (const auto& d : diag) msg += (msg.empty() ? "" : "; ") + d;
    throw Error(ErrorKind::kConfigInvalid, msg);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfigInvalid, "cannot read " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kConfigInvalid, path.string() + ": " + e.what());
  }
  return parse_config(j);
}

namespace {

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["kind"] = experiment_kind_name(cfg.kind);
  j["name"] = cfg.name;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["n"] = cfg.n;
  j["d"] = opt(cfg.d);
  j["c"] = cfg.c;
  j["coalition_size"] = opt(cfg.coalition_size);
  j["ell"] = opt(cfg.ell);
  j["ell_factor"] = cfg.ell_factor;
  j["xi"] = cfg.xi;
  j["code_threshold"] = opt(cfg.code_threshold);
  j["length_constant"] = cfg.length_constant;
  j["modulus"] = std::to_string(cfg.modulus);
  j["epsilon"] = cfg.epsilon;
  j["delta"] = cfg.delta;
  j["alpha"] = cfg.alpha;
  j["p_fail"] = cfg.p_fail;
  j["sample_rows"] = opt(cfg.sample_rows);
  j["allow_below_threshold"] = cfg.allow_below_threshold;
  j["q"] = opt(cfg.q);
  j["attacker"] = cfg.attacker;
  j["x"] = opt(cfg.x);
  Json strategies = Json::array();
  for (auto s : cfg.strategies) strategies.push_back(pirate_strategy_name(s));
  j["strategies"] = std::move(strategies);
  j["flip"] = flip_name(cfg.flip);
  j["solver"] = cfg.solver;
  j["problem"] = cfg.problem;
  j["accuracy_bound"] = opt(cfg.accuracy_bound);
  j["mode"] = attack_mode_name(cfg.mode);
  j["algorithm"] = cfg.algorithm;
  j["spread_rows"] = opt(cfg.spread_rows);
  j["spread_per_row"] = opt(cfg.spread_per_row);
  j["constant_value"] = cfg.constant_value;
  j["success_bound"] = cfg.success_bound;
  j["removed"] = opt(cfg.removed);
  j["time_budget_s"] = opt(cfg.time_budget_s);
  j["output"] = opt(cfg.output);
  return j;
}

TardosParams tardos_params(const ExperimentConfig& cfg) {
  TardosParams p;
  p.n = cfg.n;
  p.c = cfg.c;
  p.xi = cfg.xi;
  p.length = cfg.d;
  p.threshold = cfg.code_threshold;
  p.length_constant = cfg.length_constant;
  return p;
}

std::size_t pad_length(const ExperimentConfig& cfg) {
  if (cfg.ell) return *cfg.ell;
  return static_cast<std::size_t>(std::ceil(cfg.ell_factor * static_cast<double>(tardos_length(tardos_params(cfg)))));
}

std::vector<std::string> config_diagnostics(const ExperimentConfig& cfg) {
  std::vector<std::string> diag;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) diag.push_back(msg);
  };
  auto in_open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  need(cfg.trials >= 1, "trials: must be at least 1");
  need(in_open_unit(cfg.xi), "xi: must lie in (0, 1)");
  need(cfg.epsilon > 0.0, "epsilon: must be positive");
  need(in_open_unit(cfg.delta), "delta: must lie in (0, 1)");
  need(in_open_unit(cfg.alpha), "alpha: must lie in (0, 1)");
  need(in_open_unit(cfg.p_fail), "p_fail: must lie in (0, 1)");
  need(cfg.success_bound >= 0.0 && cfg.success_bound <= 1.0, "success_bound: must lie in [0, 1]");
  need(cfg.constant_value >= 0.0 && cfg.constant_value <= 1.0, "constant_value: must lie in [0, 1]");
  need(cfg.ell_factor > 0.0, "ell_factor: must be positive");
  need(cfg.length_constant > 0.0, "length_constant: must be positive");
  need(!cfg.time_budget_s || *cfg.time_budget_s > 0.0, "time_budget_s: must be positive");
  need(!cfg.d || *cfg.d >= 1, "d: must be at least 1");
  need(!cfg.ell || *cfg.ell >= 1, "ell: must be at least 1");
  need(!cfg.sample_rows || *cfg.sample_rows >= 1, "sample_rows: must be at least 1");
  const bool prime_ok = cfg.modulus >= 5 && cfg.modulus < (std::uint64_t{1} << 63) && is_prime(cfg.modulus);
  need(prime_ok, "modulus: must be a prime in [5, 2^63)");

  if (uses_code(cfg.kind)) {
    need(cfg.c >= 4 && cfg.c <= cfg.n, "c: need 4 <= c <= n");
    const std::size_t k = cfg.coalition_size.value_or(cfg.c);
    need(k >= 1 && k <= cfg.n, "coalition_size: need 1 <= coalition_size <= n");
  }
  if (cfg.kind == ExperimentKind::kSsSecurityGame) {
    need(cfg.d.has_value(), "d: required for ss-security-game");
    if (cfg.d) {
      need(!cfg.q || *cfg.q <= 2 * *cfg.d, "q: must be at most 2d");
      if (cfg.x) {
        const bool binary = std::all_of(cfg.x->begin(), cfg.x->end(), [](char ch) { return ch == '0' || ch == '1'; });
        need(binary && cfg.x->size() == *cfg.d, "x: expected a bit string of length d");
      }
      need(!prime_ok || cfg.modulus > 4 * *cfg.d, "modulus: need |F| > 4d");
    }
    need(cfg.attacker == "consistency" || cfg.attacker == "decode-and-compare" || cfg.attacker == "random",
         "attacker: expected 'consistency', 'decode-and-compare' or 'random'");
  }
  if (cfg.kind == ExperimentKind::kSolverAccuracy) {
    need(cfg.d.has_value(), "d: required for solver-accuracy");
    need(cfg.n >= 1, "n: must be at least 1");
    need(cfg.solver == "gaussian" || cfg.solver == "subsample", "solver: expected 'gaussian' or 'subsample'");
    need(cfg.problem == "ss" || cfg.problem == "ro", "problem: expected 'ss' or 'ro'");
    need(!cfg.sample_rows || *cfg.sample_rows <= cfg.n, "sample_rows: exceeds n");
    need(!cfg.accuracy_bound || (*cfg.accuracy_bound > 0.0 && *cfg.accuracy_bound <= 1.0),
         "accuracy_bound: must lie in (0, 1]");
    if (cfg.d && prime_ok) need(cfg.problem != "ss" || cfg.modulus > 4 * *cfg.d, "modulus: need |F| > 4d");
  }
  if (is_attack(cfg.kind)) {
    need(cfg.algorithm == "subsample" || cfg.algorithm == "gaussian" || cfg.algorithm == "constant" ||
             cfg.algorithm == "spread",
         "algorithm: expected 'subsample', 'gaussian', 'constant' or 'spread'");
    const std::size_t k = cfg.coalition_size.value_or(cfg.c);
    need(!cfg.sample_rows || *cfg.sample_rows <= cfg.n, "sample_rows: exceeds n");
    if (cfg.kind == ExperimentKind::kNeighborGap) {
      need(!cfg.removed || (*cfg.removed >= 1 && *cfg.removed <= k), "removed: need 1 <= removed <= coalition_size");
    }
  }
  if (diag.empty() && uses_code(cfg.kind)) {
    try {
      const std::size_t d = tardos_length(tardos_params(cfg));
      const std::size_t width = d + 2 * pad_length(cfg);
      if (cfg.kind != ExperimentKind::kFpcSecurity) need(pad_length(cfg) >= 1, "ell: must be at least 1");
      if (is_attack(cfg.kind) && cfg.mode == AttackMode::kSecretSharing) {
        need(cfg.modulus / 4 >= width, "modulus: need |F| > 4d' for the padded width");
      }
    } catch (const Error& e) {
      diag.push_back(std::string("code: ") + e.what());
    }
  }
  return diag;
}

namespace {

using Clock = std::chrono::steady_clock;

// Runs trial(t) for t in [0, count) in parallel, each trial independent.
// With a time budget, trials start in chunks and no chunk starts after the
// budget is spent; the returned records are the completed prefix.
template <typename F>
std::vector<Json> run_trials(std::size_t count, std::optional<double> budget_s, F&& trial) {
  std::vector<Json> out(count);
  const auto start = Clock::now();
  std::size_t chunk = count;
  if (budget_s) {
#ifdef _OPENMP
    chunk = static_cast<std::size_t>(std::max(1, omp_get_max_threads()));
#else
    chunk = 1;
#endif
  }
  std::size_t done = 0;
  while (done < count) {
    if (budget_s && std::chrono::duration<double>(Clock::now() - start).count() > *budget_s) break;
    const std::size_t hi = std::min(count, done + chunk);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = done; t < hi; ++t) {
      try {
        out[t] = trial(t);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    done = hi;
  }
  out.resize(done);
  return out;
}

Check upper_check(const std::string& name, const Proportion& p, double bound) {
  std::ostringstream detail;
  detail << p.count << "/" << p.trials << ", 99% Wilson [" << p.low << ", " << p.high << "]";
  return {name, p.rate, bound, "<=", within_upper(p, bound), detail.str()};
}

Check lower_check(const std::string& name, const Proportion& p, double bound) {
  std::ostringstream detail;
  detail << p.count << "/" << p.trials << ", 99% Wilson [" << p.low << ", " << p.high << "]";
  return {name, p.rate, bound, ">=", within_lower(p, bound), detail.str()};
}

Check exact_check(const std::string& name, double statistic, double bound, const std::string& detail) {
  return {name, statistic, bound, "==", statistic == bound, detail};
}

template <typename Pred>
Proportion count_where(const std::vector<Json>& records, Pred&& pred, std::size_t trials) {
  std::size_t k = 0;
  for (const auto& r : records) k += pred(r) ? 1 : 0;
  return wilson(k, trials);
}

Json optional_index(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

// ---- fpc-security --------------------------------------------------------

void run_fpc_security(const ExperimentConfig& cfg, ExperimentReport& report) {
  const TardosParams params = tardos_params(cfg);
  const std::size_t k = cfg.coalition_size.value_or(cfg.c);
  const std::size_t total = cfg.trials * cfg.strategies.size();
  auto records = run_trials(total, cfg.time_budget_s, [&](std::size_t t) {
    const PirateStrategy strategy = cfg.strategies[t / cfg.trials];
    const std::uint64_t seed = child_seed(cfg.seed, t);
    RandomStream rng(seed);
    const TardosCode code = tardos_gen(params, rng);
    const auto members = rng.sample_indices(cfg.n, k);
    const BitMatrix coalition = code.codebook.select_rows(members);
    const BitVector word = pirate_word(coalition, strategy, rng);
    const TraceOutcome outcome = tardos_trace(word, code.state);
    const bool colluder =
        outcome.accused && std::find(members.begin(), members.end(), *outcome.accused) != members.end();
    Json r;
    r["index"] = t;
    r["seed"] = seed;
    r["strategy"] = pirate_strategy_name(strategy);
    r["accused"] = optional_index(outcome.accused);
    r["bottom"] = outcome.is_bottom();
    r["accused_colluder"] = colluder;
    r["innocent"] = outcome.accused.has_value() && !colluder;
    r["feasible"] = is_feasible(word, coalition);
    return r;
  });
  report.completed_trials = records.size();
  report.aggregates["code_length"] = tardos_length(params);
  report.aggregates["threshold"] = tardos_threshold(params);
  Json per = Json::object();
  for (auto s : cfg.strategies) {
    const std::string name = pirate_strategy_name(s);
    std::vector<Json> mine;
    for (const auto& r : records) {
      if (r["strategy"] == name) mine.push_back(r);
    }
    const auto innocent = count_where(mine, [](const Json& r) { return r["innocent"].get<bool>(); }, mine.size());
    const auto feasible_bottom = count_where(
        mine, [](const Json& r) { return r["feasible"].get<bool>() && r["bottom"].get<bool>(); }, mine.size());
    const auto colluder =
        count_where(mine, [](const Json& r) { return r["accused_colluder"].get<bool>(); }, mine.size());
    per[name] = {{"innocent_accusation", to_json(innocent)},
                 {"feasible_and_bottom", to_json(feasible_bottom)},
                 {"colluder_accused", to_json(colluder)}};
    report.checks.push_back(upper_check("innocent_accusation[" + name + "]", innocent, cfg.xi));
    report.checks.push_back(upper_check("feasible_and_bottom[" + name + "]", feasible_bottom, cfg.xi));
  }
  report.aggregates["strategies"] = std::move(per);
  for (auto& r : records) report.records.push_back(std::move(r));
}

// ---- feasible-sample -----------------------------------------------------

void run_feasible_sample(const ExperimentConfig& cfg, ExperimentReport& report) {
  const TardosParams params = tardos_params(cfg);
  const std::size_t ell = pad_length(cfg);
  const std::size_t k = cfg.coalition_size.value_or(cfg.c);
  auto records = run_trials(cfg.trials, cfg.time_budget_s, [&](std::size_t t) {
    const std::uint64_t seed = child_seed(cfg.seed, t);
    RandomStream rng(seed);
    const FeasibleSampleTrial trial = feasible_sample_trial(params, ell, k, cfg.flip, rng);
    Json r;
    r["index"] = t;
    r["seed"] = seed;
    r["bad"] = trial.bad;
    r["feasible_full"] = trial.feasible_full;
    r["feasible_sample"] = trial.feasible_sample;
    r["flipped_column"] = trial.flipped_column;
    r["flipped_padded"] = trial.flipped_padded;
    return r;
  });
  report.completed_trials = records.size();
  const std::size_t d = tardos_length(params);
  const double bound = static_cast<double>(d) / static_cast<double>(ell);
  const auto bad = count_where(records, [](const Json& r) { return r["bad"].get<bool>(); }, records.size());
  report.aggregates["code_length"] = d;
  report.aggregates["ell"] = ell;
  report.aggregates["width"] = d + 2 * ell;
  report.aggregates["bad"] = to_json(bad);
  report.aggregates["bound_d_over_ell"] = bound;
  report.checks.push_back(upper_check("bad_sample", bad, bound));
  for (auto& r : records) report.records.push_back(std::move(r));
}

// ---- ss-security-game ----------------------------------------------------

SecurityAttacker make_attacker(const std::string& name) {
  if (name == "decode-and-compare") return decode_and_compare_attacker();
  if (name == "random") return random_guess_attacker();
  return consistency_attacker();
}

BitVector challenge_word(const ExperimentConfig& cfg) {
  if (cfg.x) return BitVector::from_string(*cfg.x);
  RandomStream rng(mix64(cfg.seed ^ 0x5851F42D4C957F2DULL));
  BitVector x(*cfg.d);
  while (x.count() == 0) {
    for (std::size_t j = 0; j < x.size(); ++j) x.set(j, rng.coin());
  }
  return x;
}

void run_security_game(const ExperimentConfig& cfg, ExperimentReport& report) {
  const std::size_t d = *cfg.d;
  const std::size_t q = cfg.q.value_or(d);
  const FieldContext ctx = FieldContext::create(cfg.modulus);
  const BitVector x = challenge_word(cfg);
  const SecurityAttacker attacker = make_attacker(cfg.attacker);
  auto records = run_trials(cfg.trials, cfg.time_budget_s, [&](std::size_t t) {
    const std::uint64_t seed = child_seed(cfg.seed, t);
    const SecurityGameTrial trial = security_game_trial(attacker, q, x, ctx, seed);
    Json r;
    r["index"] = t;
    r["seed"] = seed;
    r["b"] = trial.b;
    r["guess"] = trial.guess ? Json(*trial.guess) : Json(nullptr);
    r["won"] = trial.won();
    r["budget_violation"] = !trial.guess.has_value();
    r["queries"] = trial.queries;
    return r;
  });
  report.completed_trials = records.size();
  const auto won = count_where(records, [](const Json& r) { return r["won"].get<bool>(); }, records.size());
  const auto violations =
      count_where(records, [](const Json& r) { return r["budget_violation"].get<bool>(); }, records.size());
  report.aggregates["x"] = x.to_string();
  report.aggregates["q"] = q;
  report.aggregates["success"] = to_json(won);
  report.aggregates["budget_violations"] = violations.count;
  if (q <= d) {
    const double tol = 3.0 * std::sqrt(0.25 / static_cast<double>(std::max<std::size_t>(1, records.size())));
    const double gap = std::abs(won.rate - 0.5);
    report.checks.push_back({"advantage", gap, tol, "<=", gap <= tol,
                             "|success - 1/2| against 3 sigma of a fair coin"});
  } else if (q == 2 * d) {
    report.checks.push_back(lower_check("full_decode_success", won, 0.99));
  }
  for (auto& r : records) report.records.push_back(std::move(r));
}

// ---- solver-accuracy -----------------------------------------------------

SolverConfig solver_config(const ExperimentConfig& cfg) {
  SolverConfig s;
  s.epsilon = cfg.epsilon;
  s.delta = cfg.delta;
  s.alpha = cfg.alpha;
  s.p_fail = cfg.p_fail;
  s.sample_rows = cfg.sample_rows;
  s.allow_below_threshold = cfg.allow_below_threshold;
  return s;
}

void run_solver_accuracy(const ExperimentConfig& cfg, ExperimentReport& report) {
  const std::size_t n = cfg.n;
  const std::size_t d = *cfg.d;
  const bool gaussian = cfg.solver == "gaussian";
  const bool ss = cfg.problem == "ss";
  const SolverConfig scfg = solver_config(cfg);
  const FieldContext ctx = FieldContext::create(cfg.modulus);
  const double bound = cfg.accuracy_bound.value_or(cfg.alpha);
  const std::size_t k = gaussian ? n : cfg.sample_rows.value_or(hoeffding_sample_size(d, cfg.alpha, cfg.p_fail));
  const std::size_t expected = k * d * (ss ? 2 : 1);

  auto records = run_trials(cfg.trials, cfg.time_budget_s, [&](std::size_t t) {
    const std::uint64_t seed = child_seed(cfg.seed, t);
    RandomStream rng(seed);
    const BinaryDatabase db = random_database(n, d, rng);
    const MarginalsVector exact = exact_marginals(db);
    SolverReport out;
    if (ss) {
      ShareOracle oracle(encode_ss(db, ctx, rng));
      oracle.set_recording(false);
      out = gaussian ? gaussian_dp_solver(oracle, scfg, rng) : subsample_solver(oracle, scfg, rng);
    } else {
      RandomOracle h(d, rng.next_u64());
      MaskedRowOracle oracle(encode_ro(db, h), h);
      oracle.set_recording(false);
      out = gaussian ? gaussian_dp_solver(oracle, scfg, rng) : subsample_solver(oracle, scfg, rng);
    }
    double max_error = 0.0;
    for (std::size_t j = 0; j < d; ++j) max_error = std::max(max_error, std::abs(out.output[j] - exact[j]));
    Json r;
    r["index"] = t;
    r["seed"] = seed;
    r["max_error"] = max_error;
    r["accurate"] = max_error <= bound;
    r["queries"] = out.queries_used.total;
    r["ledger_exact"] = out.queries_used.total == expected;
    if (gaussian) {
      double sum = 0.0;
      double sumsq = 0.0;
      std::size_t count = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (exact[j] <= 0.0 || exact[j] >= 1.0) continue;
        const double e = out.pre_clamp[j] - exact[j];
        sum += e;
        sumsq += e * e;
        ++count;
      }
      r["decoded_exact"] = out.decoded_marginals == exact;
      r["noise_sum"] = sum;
      r["noise_sumsq"] = sumsq;
      r["noise_count"] = count;
    }
    return r;
  });
  report.completed_trials = records.size();
  const auto accurate = count_where(records, [](const Json& r) { return r["accurate"].get<bool>(); }, records.size());
  const auto ledger_ok =
      count_where(records, [](const Json& r) { return r["ledger_exact"].get<bool>(); }, records.size());
  report.aggregates["n"] = n;
  report.aggregates["rows_read"] = k;
  report.aggregates["expected_queries"] = expected;
  report.aggregates["accuracy_bound"] = bound;
  report.aggregates["accurate"] = to_json(accurate);
  report.checks.push_back(lower_check("accuracy", accurate, 1.0 - cfg.p_fail));
  report.checks.push_back(exact_check("ledger_exact", static_cast<double>(ledger_ok.count),
                                      static_cast<double>(records.size()),
                                      "trials whose ledger total equals " + std::to_string(expected)));
  if (gaussian) {
    const double threshold = gaussian_threshold_n(d, cfg.epsilon, cfg.delta);
    const double sigma = gaussian_sigma(n, d, cfg.epsilon, cfg.delta);
    double sum = 0.0;
    double sumsq = 0.0;
    double count = 0.0;
    std::size_t decoded = 0;
    for (const auto& r : records) {
      sum += r["noise_sum"].get<double>();
      sumsq += r["noise_sumsq"].get<double>();
      count += static_cast<double>(r["noise_count"].get<std::size_t>());
      decoded += r["decoded_exact"].get<bool>() ? 1 : 0;
    }
    const double m = count > 0 ? sum / count : 0.0;
    const double sd = count > 1 ? std::sqrt((sumsq - count * m * m) / (count - 1)) : 0.0;
    report.aggregates["threshold_n"] = threshold;
    report.aggregates["sigma"] = sigma;
    report.aggregates["noise_mean"] = m;
    report.aggregates["noise_sd"] = sd;
    report.checks.push_back(exact_check("decoded_exact", static_cast<double>(decoded),
                                        static_cast<double>(records.size()),
                                        "trials whose pre-noise marginals equal the database's"));
    const double rel = std::abs(sd / sigma - 1.0);
    report.checks.push_back({"noise_sd", rel, 0.05, "<=", rel <= 0.05, "relative gap to the mechanism's sigma"});
    if (n == static_cast<std::size_t>(std::ceil(threshold))) {
      const double reference_sigma = 1.0 / std::sqrt(200.0 * std::log(10.0 * static_cast<double>(d)));
      const double rel_reference = std::abs(sd / reference_sigma - 1.0);
      report.aggregates["reference_sigma"] = reference_sigma;
      report.checks.push_back({"noise_sd_vs_reference", rel_reference, 0.05, "<=", rel_reference <= 0.05,
                               "relative gap to 1/sqrt(200 ln(10d)) at the threshold n"});
    }
  }
  for (auto& r : records) report.records.push_back(std::move(r));
}

// ---- reid-attack / neighbor-gap ------------------------------------------

CandidateAlgorithm make_algorithm(const ExperimentConfig& cfg, std::size_t coalition, std::size_t width) {
  SolverConfig s = solver_config(cfg);
  if (cfg.algorithm == "gaussian") {
    s.allow_below_threshold = true;
    return gaussian_candidate(s);
  }
  if (cfg.algorithm == "constant") return constant_candidate(cfg.constant_value);
  if (cfg.algorithm == "spread") {
    return spread_candidate(cfg.spread_rows.value_or(cfg.n), cfg.spread_per_row.value_or(width));
  }
  s.sample_rows = cfg.sample_rows.value_or(coalition);
  return subsample_candidate(s);
}

Json attack_record(std::size_t t, std::uint64_t seed, const AttackReport& a, std::size_t coalition) {
  Json r;
  r["index"] = t;
  r["seed"] = seed;
  r["status"] = a.status == AttackStatus::kCompleted ? "completed" : "budget-violation";
  r["commit_count"] = a.commit_count;
  r["commit_invariant"] = a.commit_count <= coalition;
  r["accused_row"] = optional_index(a.accused_row);
  r["bottom"] = a.status == AttackStatus::kCompleted && a.outcome.is_bottom();
  r["accused_committed"] = a.accused_committed();
  r["accused_innocent"] = a.accused_innocent();
  r["feasible_sample"] = a.feasible_for_sample;
  r["feasible_committed"] = a.feasible_for_committed;
  r["feasible_full"] = a.feasible_for_full;
  r["max_error_committed"] = a.max_error_committed ? Json(*a.max_error_committed) : Json(nullptr);
  r["max_error_full"] = a.max_error_full;
  const bool acc_committed = a.max_error_committed && *a.max_error_committed <= 1.0 / 3.0;
  const bool acc_full = a.status == AttackStatus::kCompleted && a.max_error_full <= 1.0 / 3.0;
  r["rounding_consistent"] = (!acc_committed || a.feasible_for_committed) && (!acc_full || a.feasible_for_full);
  r["queries"] = a.ledger.total;
  r["row_queries"] = a.ledger.row_queries;
  r["decoded_rows"] = a.decoded_rows;
  return r;
}

struct AttackCampaign {
  std::vector<Json> records;
  std::size_t width = 0;
};

AttackCampaign attack_campaign(const ExperimentConfig& cfg, std::size_t first_index,
                               std::optional<std::size_t> removed) {
  const TardosParams params = tardos_params(cfg);
  const std::size_t ell = pad_length(cfg);
  const std::size_t k = cfg.coalition_size.value_or(cfg.c);
  const std::size_t width = tardos_length(params) + 2 * ell;
  const FieldContext ctx = FieldContext::create(cfg.modulus);
  const CandidateAlgorithm algorithm = make_algorithm(cfg, k, width);
  AttackCampaign out;
  out.width = width;
  out.records = run_trials(cfg.trials, cfg.time_budget_s, [&](std::size_t t) {
    const std::uint64_t seed = child_seed(cfg.seed, first_index + t);
    RandomStream rng(seed);
    const CoalitionSample coalition = sample_coalition(params, ell, k, rng);
    const AttackReport a = removed ? neighbor_experiment(cfg.mode, coalition, algorithm, *removed, ctx, rng)
                                   : run_attack(cfg.mode, coalition, algorithm, ctx, rng);
    Json r = attack_record(first_index + t, seed, a, k);
    if (removed) r["accused_removed"] = a.accused_row == *removed - 1;
    return r;
  });
  return out;
}

bool completed(const Json& r) { return r["status"] == "completed"; }

void summarize_attack(const ExperimentConfig& cfg, const std::vector<Json>& records, const std::string& prefix,
                      bool tracing_checks, ExperimentReport& report, Json& agg) {
  const std::size_t k = cfg.coalition_size.value_or(cfg.c);
  std::size_t done = 0;
  std::size_t max_commit = 0;
  std::size_t inconsistent = 0;
  std::size_t decoded = 0;
  double queries = 0.0;
  for (const auto& r : records) {
    done += completed(r) ? 1 : 0;
    max_commit = std::max(max_commit, r["commit_count"].get<std::size_t>());
    inconsistent += r["rounding_consistent"].get<bool>() ? 0 : 1;
    decoded += r["decoded_rows"].get<std::size_t>();
    queries += static_cast<double>(r["queries"].get<std::size_t>());
  }
  const auto success =
      count_where(records, [](const Json& r) { return completed(r) && r["accused_committed"].get<bool>(); }, done);
  const auto innocent =
      count_where(records, [](const Json& r) { return completed(r) && r["accused_innocent"].get<bool>(); }, done);
  const auto bottom = count_where(records, [](const Json& r) { return r["bottom"].get<bool>(); }, done);
  agg["completed"] = done;
  agg["budget_violations"] = records.size() - done;
  agg["committed_accused"] = to_json(success);
  agg["innocent_accused"] = to_json(innocent);
  agg["bottom"] = to_json(bottom);
  agg["max_commit_count"] = max_commit;
  agg["mean_queries"] = records.empty() ? 0.0 : queries / static_cast<double>(records.size());
  agg["decoded_rows_total"] = decoded;

  report.checks.push_back({prefix + "commit_invariant", static_cast<double>(max_commit), static_cast<double>(k),
                           "<=", max_commit <= k, "largest t over all trials"});
  report.checks.push_back({prefix + "rounded_feasibility", static_cast<double>(inconsistent), 0.0, "==",
                           inconsistent == 0, "trials accurate to 1/3 whose rounded answer was infeasible"});
  if (cfg.algorithm == "spread") {
    report.checks.push_back({prefix + "no_decoded_rows", static_cast<double>(decoded), 0.0, "==", decoded == 0,
                             "rows that received all 2d' shares"});
    report.checks.push_back({prefix + "no_commitments", static_cast<double>(max_commit), 0.0, "==",
                             max_commit == 0, "rows bound to a coalition member"});
  } else if (tracing_checks) {
    report.checks.push_back(lower_check(prefix + "trace_success", success, cfg.success_bound));
    report.checks.push_back(upper_check(prefix + "innocent_accusation", innocent, cfg.xi));
  }
}

void budget_check(const ExperimentConfig& cfg, std::size_t completed_trials, std::size_t requested,
                  ExperimentReport& report) {
  if (!cfg.time_budget_s) return;
  report.checks.push_back({"within_time_budget", static_cast<double>(completed_trials),
                           static_cast<double>(requested), "==", completed_trials == requested,
                           "trials finished inside " + std::to_string(*cfg.time_budget_s) + " s"});
}

void run_reid_attack(const ExperimentConfig& cfg, ExperimentReport& report) {
  AttackCampaign campaign = attack_campaign(cfg, 0, std::nullopt);
  report.completed_trials = campaign.records.size();
  report.aggregates["code_length"] = tardos_length(tardos_params(cfg));
  report.aggregates["width"] = campaign.width;
  summarize_attack(cfg, campaign.records, "", true, report, report.aggregates);
  budget_check(cfg, campaign.records.size(), cfg.trials, report);
  for (auto& r : campaign.records) report.records.push_back(std::move(r));
}

void run_neighbor_gap(const ExperimentConfig& cfg, ExperimentReport& report) {
  const std::size_t k = cfg.coalition_size.value_or(cfg.c);
  AttackCampaign intact = attack_campaign(cfg, 0, std::nullopt);
  std::size_t removed = cfg.removed.value_or(0);
  std::vector<std::size_t> counts(k, 0);
  for (const auto& r : intact.records) {
    if (completed(r) && r["accused_row"].is_number()) {
      const std::size_t row = r["accused_row"].get<std::size_t>();
      if (row < k) ++counts[row];
    }
  }
  if (!cfg.removed) {
    removed = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin()) + 1;
  }
  AttackCampaign neighbor = attack_campaign(cfg, cfg.trials, removed);
  report.completed_trials = intact.records.size() + neighbor.records.size();

  auto done = [](const std::vector<Json>& rs) {
    return static_cast<std::size_t>(std::count_if(rs.begin(), rs.end(), completed));
  };
  const auto p_intact = count_where(
      intact.records,
      [&](const Json& r) { return completed(r) && r["accused_row"] == Json(removed - 1); },
      done(intact.records));
  const auto p_neighbor = count_where(
      neighbor.records, [](const Json& r) { return completed(r) && r["accused_removed"].get<bool>(); },
      done(neighbor.records));
  const double e = std::exp(cfg.epsilon);
  const double gap = p_intact.rate - e * p_neighbor.rate - cfg.delta;
  const double conservative = p_intact.low - e * p_neighbor.high - cfg.delta;

  Json intact_agg = Json::object();
  Json neighbor_agg = Json::object();
  summarize_attack(cfg, intact.records, "intact.", false, report, intact_agg);
  summarize_attack(cfg, neighbor.records, "neighbor.", false, report, neighbor_agg);
  report.aggregates["code_length"] = tardos_length(tardos_params(cfg));
  report.aggregates["width"] = intact.width;
  report.aggregates["removed"] = removed;
  report.aggregates["accusations_by_row"] = counts;
  report.aggregates["removed_accused_intact"] = to_json(p_intact);
  report.aggregates["removed_accused_neighbor"] = to_json(p_neighbor);
  report.aggregates["gap"] = gap;
  report.aggregates["gap_conservative"] = conservative;
  report.aggregates["intact"] = std::move(intact_agg);
  report.aggregates["neighbor"] = std::move(neighbor_agg);
  report.checks.push_back({"dp_gap", gap, 0.0, ">", gap > 0.0,
                           "Pr[accuse i* | intact] - e^eps Pr[accuse i* | neighbor] - delta"});
  report.checks.push_back(upper_check("removed_accusation", p_neighbor, cfg.xi));
  budget_check(cfg, report.completed_trials, 2 * cfg.trials, report);
  for (auto& r : intact.records) {
    r["phase"] = "intact";
    report.records.push_back(std::move(r));
  }
  for (auto& r : neighbor.records) {
    r["phase"] = "neighbor";
    report.records.push_back(std::move(r));
  }
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return quoted + "\"";
  }
  return v.dump();
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  if (auto diag = config_diagnostics(cfg); !diag.empty()) {
    std::string msg;
    for (const auto& d : diag) msg += (msg.empty() ? "" : "; ") + d;
    throw Error(ErrorKind::kConfigInvalid, msg);
  }
#ifdef _OPENMP
  const int previous = omp_get_max_threads();
  if (options.threads > 0) omp_set_num_threads(options.threads);
#else
  (void)options;
#endif
  const auto start = Clock::now();
  ExperimentReport report;
  report.config = cfg;
  switch (cfg.kind) {
    case ExperimentKind::kFpcSecurity: run_fpc_security(cfg, report); break;
    case ExperimentKind::kFeasibleSample: run_feasible_sample(cfg, report); break;
    case ExperimentKind::kSsSecurityGame: run_security_game(cfg, report); break;
    case ExperimentKind::kSolverAccuracy: run_solver_accuracy(cfg, report); break;
    case ExperimentKind::kReidAttack: run_reid_attack(cfg, report); break;
    case ExperimentKind::kNeighborGap: run_neighbor_gap(cfg, report); break;
  }
  if (cfg.kind != ExperimentKind::kReidAttack && cfg.kind != ExperimentKind::kNeighborGap) {
    const std::size_t requested =
        cfg.kind == ExperimentKind::kFpcSecurity ? cfg.trials * cfg.strategies.size() : cfg.trials;
    budget_check(cfg, report.completed_trials, requested, report);
  }
  report.passed = std::all_of(report.checks.begin(), report.checks.end(), [](const Check& c) { return c.passed; });
  report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
#ifdef _OPENMP
  if (options.threads > 0) omp_set_num_threads(previous);
#endif
  return report;
}

Json ExperimentReport::to_json() const {
  Json j;
  j["format"] = "fpclab-report";
  j["version"] = 1;
  j["kind"] = experiment_kind_name(config.kind);
  j["name"] = config.name;
  j["config"] = config_to_json(config);
  j["trials_completed"] = completed_trials;
  j["aggregates"] = aggregates;
  Json checks_json = Json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"name", c.name},
                           {"statistic", c.statistic},
                           {"bound", c.bound},
                           {"relation", c.relation},
                           {"passed", c.passed},
                           {"detail", c.detail}});
  }
  j["checks"] = std::move(checks_json);
  j["passed"] = passed;
  j["records"] = records;
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::vector<std::string> columns;
  std::set<std::string> seen;
  for (const auto& r : records) {
    for (auto it = r.begin(); it != r.end(); ++it) {
      if (seen.insert(it.key()).second) columns.push_back(it.key());
    }
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& r : records) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << (i ? "," : "");
      if (r.contains(columns[i])) out << csv_cell(r.at(columns[i]));
    }
    out << "\n";
  }
  return out.str();
}

SweepResult scaling_sweep(const ExperimentConfig& base, const std::vector<std::size_t>& grid,
                          const RunOptions& options) {
  if (grid.empty()) throw Error(ErrorKind::kConfigInvalid, "grid: at least one code length required");
  SweepResult result;
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "d,width,c,n,mean_queries,trace_success,wilson_low,wilson_high,innocent,passed\n";
  Json first_success = nullptr;
  for (std::size_t d : grid) {
    ExperimentConfig cfg = base;
    cfg.kind = ExperimentKind::kReidAttack;
    cfg.d = d;
    const std::size_t ell = base.ell.value_or(
        static_cast<std::size_t>(std::ceil(base.ell_factor * static_cast<double>(d))));
    cfg.ell = ell;
    const std::size_t width = d + 2 * ell;
    const std::size_t c = std::max<std::size_t>(4, hoeffding_sample_size(width, base.alpha, base.p_fail));
    cfg.c = c;
    cfg.coalition_size = c;
    cfg.sample_rows = c;
    cfg.n = std::max(base.n, c);
    cfg.name = (base.name.empty() ? std::string("sweep") : base.name) + "-d" + std::to_string(d);
    ExperimentReport report = run_experiment(cfg, options);
    const Json& agg = report.aggregates;
    const Json& success = agg["committed_accused"];
    Json row;
    row["d"] = d;
    row["width"] = width;
    row["c"] = c;
    row["n"] = cfg.n;
    row["mean_queries"] = agg["mean_queries"];
    row["trace_success"] = success["rate"];
    row["wilson_low"] = success["wilson_low"];
    row["wilson_high"] = success["wilson_high"];
    row["innocent"] = agg["innocent_accused"]["rate"];
    row["passed"] = report.passed;
    csv << d << "," << width << "," << c << "," << cfg.n << "," << row["mean_queries"].dump() << ","
        << row["trace_success"].dump() << "," << row["wilson_low"].dump() << "," << row["wilson_high"].dump()
        << "," << row["innocent"].dump() << "," << (report.passed ? "true" : "false") << "\n";
    if (first_success.is_null() && success["wilson_high"].get<double>() >= base.success_bound) {
      first_success = {{"d", d}, {"queries", row["mean_queries"]}};
    }
    rows.push_back(std::move(row));
    result.reports.push_back(std::move(report));
  }
  result.summary = {{"format", "fpclab-sweep"},
                    {"version", 1},
                    {"base", config_to_json(base)},
                    {"grid", grid},
                    {"rows", std::move(rows)},
                    {"first_success", first_success}};
  result.summary_csv = csv.str();
  return result;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& suffix, const std::string& text) {
    std::ofstream out(dir / (stem + suffix), std::ios::binary);
    if (!out) throw Error(ErrorKind::kConfigInvalid, "cannot write " + (dir / (stem + suffix)).string());
    out << text;
  };
  write(".json", report.to_json().dump(2) + "\n");
  write(".csv", report.to_csv());
  Json timing = {{"seconds", report.seconds}, {"trials_completed", report.completed_trials}};
  write(".timing.json", timing.dump(2) + "\n");
}

}  // namespace fpclab
