// Copyright 2026 The qcommit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command implementations behind the qcommit executable. Each command
// returns a Table; rendering is CSV (header row, comma-separated,
// 17-significant-digit floats) or JSON.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qcommit/codebook.hpp"
#include "qcommit/cointoss.hpp"
#include "qcommit/commit_bitwise.hpp"
#include "qcommit/harness.hpp"
#include "qcommit/json_io.hpp"
#include "qcommit/sessions.hpp"

namespace qcommit::cli {

//============================================================================
// Tables
//============================================================================

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw Error(Errc::LengthMismatch, "row width differs from header");
    rows.push_back(std::move(row));
  }
};

namespace detail {

inline std::string render_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += "\"\"";
    else quoted.push_back(ch);
  }
  return quoted + "\"";
}

inline json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace detail

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out.push_back(',');
    out += detail::render_cell(t.columns[i]);
  }
  out.push_back('\n');
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += detail::render_cell(row[i]);
    }
    out.push_back('\n');
  }
  return out;
}

/// {"columns":[...],"rows":[[...],...]}
inline std::string to_json_text(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(detail::cell_json(c));
    rows.push_back(std::move(r));
  }
  return dump_json(json{{"columns", t.columns}, {"rows", rows}}) + "\n";
}

enum class Format { Csv, Json };

inline std::string render(const Table& t, Format f) { return f == Format::Csv ? to_csv(t) : to_json_text(t); }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IOError, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(Errc::IOError, "write to " + path + " failed");
}

//============================================================================
// bounds
//============================================================================

struct BoundsSpec {
  std::vector<double> thetas;
  std::vector<std::size_t> ns;
  double r = 1.0;
  std::optional<double> epsilon;  // default: sin(theta) per row
  std::vector<std::size_t> r2s;
};

/// One row per theta: cheat ceiling, per-qubit entropy, n - S per n,
/// min n for r, and the multistring bound 1 + (r2 - 1) epsilon per r2.
inline Table cmd_bounds(const BoundsSpec& spec) {
  if (spec.thetas.empty()) throw Error(Errc::InvalidSpec, "theta grid is empty");
  if (spec.epsilon && !(*spec.epsilon > 0.0 && *spec.epsilon <= 1.0)) {
    throw Error(Errc::DomainError, "epsilon must lie in (0, 1]");
  }
  Table t;
  t.columns = {"theta", "cheat_bound", "qubit_entropy"};
  for (auto n : spec.ns) {
    if (n < 1) throw Error(Errc::DomainError, "n grid values must be at least 1");
    t.columns.push_back("gap_n" + std::to_string(n));
  }
  t.columns.push_back("min_n_r" + format_double(spec.r));
  for (auto r2 : spec.r2s) {
    if (r2 < 1) throw Error(Errc::DomainError, "r2 grid values must be at least 1");
    t.columns.push_back("multistring_r" + std::to_string(r2));
  }
  for (double theta : spec.thetas) {
    check_theta(theta);
    std::vector<Cell> row{theta, cheat_bound(theta), qubit_entropy(theta)};
    for (auto n : spec.ns) row.emplace_back(inaccessible_bits(n, theta, 0.0).gap);
    try {
      row.emplace_back(static_cast<std::int64_t>(min_n_for(spec.r, theta)));
    } catch (const Error& e) {
      if (e.code() != Errc::Unbounded) throw;
      row.emplace_back(std::string("unbounded"));
    }
    double eps = spec.epsilon.value_or(std::sin(theta));
    for (auto r2 : spec.r2s) row.emplace_back(multistring_bound(r2, eps));
    t.add_row(std::move(row));
  }
  return t;
}

//============================================================================
// run
//============================================================================

struct RunSpec {
  Protocol protocol = Protocol::CoinToss;
  SessionParams params = CoinTossParams{};
  StrategyDescriptor alice{Party::Alice, "honest", {}};
  StrategyDescriptor bob{Party::Bob, "honest", {}};
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::optional<std::string> transcripts_dir;
  std::string protocol_label = "cointoss";  // used in transcript file names
};

inline std::string transcript_filename(const std::string& protocol_label, std::uint64_t seed, std::size_t trial) {
  return protocol_label + "-" + std::to_string(seed) + "-" + std::to_string(trial) + ".jsonl";
}

namespace detail {

struct RunAccumulator {
  std::map<std::string, std::int64_t> verdicts;
  // bitwise
  std::int64_t claim0 = 0, claim0_ok = 0, claim1 = 0, claim1_ok = 0;
  std::int64_t guessed = 0, guessed_right = 0;
  // codebook
  double total_sum = 0.0, bound_sum = 0.0;
  std::int64_t multistring = 0;
  double r_param = 0.0;
  // cointoss
  std::int64_t bits = 0, zero_bits = 0, anticorrelated = 0, completed = 0;
  double prefix_sum = 0.0;
};

inline void accumulate(RunAccumulator& acc, const Transcript& t) {
  acc.verdicts[t.verdict] += 1;
  const json& d = t.details;
  bool ok = t.verdict == verdict::kAccepted;
  switch (t.protocol) {
    case Protocol::BitwiseCommit: {
      auto claimed = d.at("claimed").get<std::string>();
      if (claimed.find('1') == std::string::npos) {
        ++acc.claim0;
        acc.claim0_ok += ok;
      }
      if (claimed.find('0') == std::string::npos) {
        ++acc.claim1;
        acc.claim1_ok += ok;
      }
      if (d.at("bob").contains("guess") && d.at("alice").contains("committed")) {
        auto guess = d.at("bob").at("guess").get<std::string>();
        auto truth = d.at("alice").at("committed").get<std::string>();
        for (std::size_t i = 0; i < guess.size() && i < truth.size(); ++i) {
          ++acc.guessed;
          acc.guessed_right += guess[i] == truth[i];
        }
      }
      break;
    }
    case Protocol::CodebookCommit: {
      if (d.at("alice").contains("total")) {
        ++acc.multistring;
        acc.total_sum += d.at("alice").at("total").get<double>();
        acc.bound_sum += d.at("alice").at("bound").get<double>();
      }
      break;
    }
    case Protocol::CoinToss: {
      if (t.verdict == verdict::kCompleted) {
        ++acc.completed;
        auto a = d.at("alice_bits").get<std::string>();
        auto b = d.at("bob_bits").get<std::string>();
        bool anti = a.size() == b.size();
        for (std::size_t i = 0; i < a.size(); ++i) {
          ++acc.bits;
          acc.zero_bits += a[i] == '0';
          if (i < b.size() && a[i] == b[i]) anti = false;
        }
        acc.anticorrelated += anti;
        acc.prefix_sum += static_cast<double>(std::min(a.find('1'), a.size()));
      }
      break;
    }
  }
}

inline double ratio(std::int64_t num, std::int64_t den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace detail

/// Runs `trials` sessions with seeds derive_seed(seed, trial) and returns a
/// metric,value summary. Transcripts are written per session when a
/// directory is given.
inline Table cmd_run(const RunSpec& spec) {
  if (spec.trials < 1) throw Error(Errc::InvalidSpec, "trials must be at least 1");
  const auto& registry = builtin_strategies();
  // fail fast on names before any work
  (void)registry.make(spec.protocol, spec.alice);
  (void)registry.make(spec.protocol, spec.bob);
  if (spec.transcripts_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*spec.transcripts_dir, ec);
    if (ec) throw Error(Errc::IOError, "cannot create " + *spec.transcripts_dir + ": " + ec.message());
  }

  std::optional<Codebook> codebook;
  if (spec.protocol == Protocol::CodebookCommit) {
    const auto* p = std::get_if<CodebookParams>(&spec.params);
    if (!p) throw Error(Errc::DomainError, "CodebookCommit needs CodebookParams");
    codebook.emplace(build_codebook(*p));
  }

  detail::RunAccumulator acc;
  for (std::size_t trial = 0; trial < spec.trials; ++trial) {
    std::uint64_t session_seed = derive_seed(spec.seed, trial);
    Transcript t;
    if (codebook) {
      auto a = registry.make_as<CodebookAlice>(spec.protocol, spec.alice);
      auto b = registry.make_as<CodebookBob>(spec.protocol, spec.bob);
      t = run_codebook_session(*codebook, std::get<CodebookParams>(spec.params), *a, *b, session_seed);
    } else {
      t = run_session(spec.protocol, spec.params, spec.alice, spec.bob, session_seed, registry);
    }
    detail::accumulate(acc, t);
    if (spec.transcripts_dir) {
      auto path = std::filesystem::path(*spec.transcripts_dir) /
                  transcript_filename(spec.protocol_label, spec.seed, trial);
      write_text(path.string(), serialize(t));
    }
  }

  Table out;
  out.columns = {"metric", "value"};
  auto add = [&](std::string k, Cell v) { out.add_row({std::move(k), std::move(v)}); };
  add("protocol", std::string(to_string(spec.protocol)));
  add("alice", spec.alice.name);
  add("bob", spec.bob.name);
  add("seed", static_cast<std::int64_t>(spec.seed));
  add("trials", static_cast<std::int64_t>(spec.trials));
  for (const auto& [v, n] : acc.verdicts) add("verdict_" + v, n);
  switch (spec.protocol) {
    case Protocol::BitwiseCommit: {
      add("sessions_claim_all0", acc.claim0);
      add("sessions_claim_all1", acc.claim1);
      double r0 = detail::ratio(acc.claim0_ok, acc.claim0);
      double r1 = detail::ratio(acc.claim1_ok, acc.claim1);
      add("accept_rate_claim_all0", r0);
      add("accept_rate_claim_all1", r1);
      add("accept_rate_sum", r0 + r1);
      if (const auto* p = std::get_if<SecurityParams>(&spec.params)) {
        add("cheat_bound_per_qubit", cheat_bound(p->theta));
      }
      if (acc.guessed > 0) add("bob_guess_rate", detail::ratio(acc.guessed_right, acc.guessed));
      break;
    }
    case Protocol::CodebookCommit: {
      auto accepted = acc.verdicts.count(std::string(verdict::kAccepted)) ? acc.verdicts[std::string(verdict::kAccepted)] : 0;
      double rate = detail::ratio(accepted, static_cast<std::int64_t>(spec.trials));
      add("accept_rate", rate);
      add("codebook_id", codebook->id());
      add("codebook_max_overlap", codebook->max_overlap());
      if (acc.multistring > 0) {
        double r = spec.alice.param("r", 2.0);
        add("mean_cheat_total", acc.total_sum / static_cast<double>(acc.multistring));
        add("mean_cheat_bound", acc.bound_sum / static_cast<double>(acc.multistring));
        add("cheat_sum_estimate", rate * r);
      }
      break;
    }
    case Protocol::CoinToss: {
      add("bits_total", acc.bits);
      add("bit_zero_frequency", detail::ratio(acc.zero_bits, acc.bits));
      add("anticorrelated_sessions", acc.anticorrelated);
      add("mean_zero_prefix", acc.completed > 0 ? acc.prefix_sum / static_cast<double>(acc.completed) : 0.0);
      if (const auto* p = std::get_if<CoinTossParams>(&spec.params)) add("log2M_over_N", p->advisory_ratio());
      break;
    }
  }
  return out;
}

//============================================================================
// sweep
//============================================================================

struct SweepSpec {
  std::string experiment;  // cheat_bound | bob_entropy | helstrom | bob_advantage | detection | multistring
  std::string variable;
  std::vector<double> values;
  std::map<std::string, double> fixed;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
};

namespace detail {

inline const std::map<std::string, std::set<std::string>>& sweep_variables() {
  static const std::map<std::string, std::set<std::string>> m{
      {"cheat_bound", {"theta"}},
      {"bob_entropy", {"theta", "n"}},
      {"helstrom", {"theta", "n"}},
      {"bob_advantage", {"batches", "pairs"}},
      {"detection", {"tampered", "batches", "pairs"}},
      {"multistring", {"r", "epsilon", "dim", "count"}},
  };
  return m;
}

inline std::size_t as_count(double v, const std::string& name) {
  if (!(v >= 0.0) || v != std::floor(v)) throw Error(Errc::InvalidSpec, name + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

inline void validate(const SweepSpec& spec) {
  const auto& vars = detail::sweep_variables();
  auto it = vars.find(spec.experiment);
  if (it == vars.end()) throw Error(Errc::InvalidSpec, "unknown experiment '" + spec.experiment + "'");
  if (!it->second.count(spec.variable)) {
    throw Error(Errc::InvalidSpec, "experiment '" + spec.experiment + "' cannot sweep '" + spec.variable + "'");
  }
  if (spec.values.empty()) throw Error(Errc::InvalidSpec, "sweep values are empty");
  if (spec.fixed.count(spec.variable)) throw Error(Errc::InvalidSpec, "swept variable also appears in fixed");
  if (spec.trials < 1) throw Error(Errc::InvalidSpec, "trials must be at least 1");
}

/// Columns: <variable>, mean, stderr, trials, reference. Point i draws from
/// rng_stream(derive_seed(seed, i), "sweep/<experiment>").
inline Table cmd_sweep(const SweepSpec& spec) {
  validate(spec);
  Table t;
  t.columns = {spec.variable, "mean", "stderr", "trials", "reference"};
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    std::map<std::string, double> p = spec.fixed;
    p[spec.variable] = spec.values[i];
    auto get = [&](const std::string& k, double fallback) {
      auto f = p.find(k);
      return f == p.end() ? fallback : f->second;
    };
    auto rng = rng_stream(derive_seed(spec.seed, i), "sweep/" + spec.experiment);
    double mean = 0.0, err = 0.0, reference = 0.0;
    std::size_t trials = spec.trials;

    if (spec.experiment == "cheat_bound") {
      double theta = get("theta", 0.3);
      mean = cheat_bound(theta);
      auto cheat = optimal_bit_cheat(theta);
      reference = cheat.p0 + cheat.p1;
      trials = 1;
    } else if (spec.experiment == "bob_entropy") {
      double theta = get("theta", 0.3);
      auto n = detail::as_count(get("n", 8), "n");
      mean = bob_entropy(n, theta);
      reference = static_cast<double>(n);
      trials = 1;
    } else if (spec.experiment == "helstrom") {
      double theta = get("theta", 0.3);
      auto n = detail::as_count(get("n", 8), "n");
      if (spec.trials < 1000) throw Error(Errc::InvalidSpec, "helstrom sweep needs trials >= 1000");
      auto res = helstrom_attack(n, theta, spec.trials, rng);
      mean = res.info_bits;
      err = res.info_stderr;
      reference = bob_entropy(n, theta);
    } else if (spec.experiment == "bob_advantage") {
      auto params = CoinTossParams::make(detail::as_count(get("batches", 16), "batches"),
                                         detail::as_count(get("pairs", 64), "pairs"), spec.seed);
      auto est = estimate_best_of_M(params, zero_prefix_score, spec.trials, rng);
      mean = est.mean;
      err = est.std_error;
      reference = std::log2(static_cast<double>(params.batches));
    } else if (spec.experiment == "detection") {
      auto params = CoinTossParams::make(detail::as_count(get("batches", 4), "batches"),
                                         detail::as_count(get("pairs", 8), "pairs"), 0);
      auto k = detail::as_count(get("tampered", 1), "tampered");
      int target = static_cast<int>(get("target", 0));
      auto plan = AliceStrategy::tamper_pairs(k, target);
      std::int64_t detected = 0;
      for (std::size_t s = 0; s < spec.trials; ++s) {
        CoinTossAlice alice(plan, {Party::Alice, "tamper", {}});
        HonestCoinTossBob bob;
        CoinTossParams q = params;
        q.seed = rng();
        detected += run_coin_toss(q, alice, bob).verdict == verdict::kCheatDetected;
      }
      mean = detail::ratio(detected, static_cast<std::int64_t>(spec.trials));
      err = std::sqrt(mean * (1.0 - mean) / static_cast<double>(spec.trials));
      std::size_t tested_pairs = std::min(k, params.pairs) * (params.batches - 1);
      reference = 1.0 - std::pow(0.5, static_cast<double>(tested_pairs));
    } else if (spec.experiment == "multistring") {
      auto dim = detail::as_count(get("dim", 16), "dim");
      auto count = detail::as_count(get("count", 32), "count");
      double eps = get("epsilon", 0.25);
      auto r = detail::as_count(get("r", 2), "r");
      auto cb = random_codebook_seeded(dim, count, eps, static_cast<std::uint64_t>(get("codebook_seed", 1)));
      if (r < 1 || r > cb.count()) throw Error(Errc::InvalidSpec, "r must lie in [1, count]");
      double sum = 0.0, sum2 = 0.0;
      for (std::size_t s = 0; s < spec.trials; ++s) {
        auto targets = rng.choose(cb.count(), r);
        double total = optimal_multistring_cheat(cb, targets).total;
        sum += total;
        sum2 += total * total;
      }
      double n = static_cast<double>(spec.trials);
      mean = sum / n;
      err = spec.trials > 1 ? std::sqrt(std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) / n) : 0.0;
      reference = multistring_bound(r, eps);
    }
    t.add_row({spec.values[i], mean, err, static_cast<std::int64_t>(trials), reference});
  }
  return t;
}

//============================================================================
// codebook
//============================================================================

/// Metric table for a codebook: size, coherence, and Bob's information.
inline Table codebook_summary(const Codebook& cb) {
  Table t;
  t.columns = {"metric", "value"};
  t.add_row({std::string("id"), cb.id()});
  t.add_row({std::string("construction"), std::string(to_string(cb.construction()))});
  t.add_row({std::string("dim"), static_cast<std::int64_t>(cb.dim())});
  t.add_row({std::string("count"), static_cast<std::int64_t>(cb.count())});
  t.add_row({std::string("epsilon"), cb.epsilon()});
  t.add_row({std::string("max_overlap"), cb.max_overlap()});
  t.add_row({std::string("packing_constant"), cb.packing_constant()});
  if (cb.dim() <= kMaxInfoReportDim) {
    auto info = bob_info_report(cb);
    t.add_row({std::string("holevo_bits"), info.holevo});
    t.add_row({std::string("dim_bound_bits"), info.dim_bound});
    t.add_row({std::string("committed_bits"), static_cast<std::int64_t>(info.committed_bits)});
  }
  return t;
}

}  // namespace qcommit::cli
