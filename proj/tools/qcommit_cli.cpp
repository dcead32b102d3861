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

// qcommit: run protocol sessions, tabulate security bounds, and sweep
// parameters to CSV/JSON.
//
// Exit status: 0 success, 2 usage error, 1 runtime error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcommit/cli.hpp"

namespace {

using namespace qcommit;

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 1;

struct OutputOptions {
  std::string format = "csv";
  std::string out;
};

void add_output_flags(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
}

void emit(const cli::Table& t, const OutputOptions& o) {
  auto text = cli::render(t, o.format == "json" ? cli::Format::Json : cli::Format::Csv);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    cli::write_text(o.out, text);
  }
}

Protocol parse_protocol_flag(const std::string& name, std::string& label) {
  if (name == "bitwise" || name == "BitwiseCommit") {
    label = "bitwise";
    return Protocol::BitwiseCommit;
  }
  if (name == "codebook" || name == "CodebookCommit") {
    label = "codebook";
    return Protocol::CodebookCommit;
  }
  if (name == "cointoss" || name == "CoinToss") {
    label = "cointoss";
    return Protocol::CoinToss;
  }
  throw Error(Errc::InvalidSpec, "unknown protocol '" + name + "' (bitwise, codebook, cointoss)");
}

Construction parse_construction(const std::string& s) {
  if (s == "random") return Construction::Random;
  if (s == "simplex") return Construction::Simplex;
  throw Error(Errc::InvalidSpec, "unknown construction '" + s + "'");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size()) throw Error(Errc::InvalidSpec, "'" + item + "' is not a number");
      out.push_back(v);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int usage_or_runtime(const Error& e) {
  switch (e.code()) {
    case Errc::UnknownStrategy:
    case Errc::InvalidSpec:
    case Errc::DomainError:
    case Errc::LengthMismatch:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate quantum bit string commitment and coin tossing protocols"};
  app.require_subcommand(1);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Tabulate cheating and information bounds over a theta grid");
  std::vector<double> b_theta;
  std::vector<std::size_t> b_n{8, 16};
  double b_r = 1.0;
  std::optional<double> b_eps;
  std::vector<std::size_t> b_r2{1, 2, 4};
  OutputOptions b_out;
  bounds->add_option("--theta", b_theta, "Theta grid (radians)")->required()->delimiter(',');
  bounds->add_option("--n", b_n, "String lengths n for the n - S(rho) columns")->delimiter(',');
  bounds->add_option("--r", b_r, "Inaccessible bits r for the min-n column");
  bounds->add_option("--epsilon", b_eps, "Codebook overlap bound (default: sin theta per row)");
  bounds->add_option("--r2", b_r2, "Target-set sizes for the multistring bound")->delimiter(',');
  add_output_flags(bounds, b_out);

  // run
  auto* run = app.add_subcommand("run", "Run protocol sessions and summarize verdicts");
  std::string r_protocol;
  double r_theta = 0.3;
  std::size_t r_n = 8, r_r = 1;
  std::size_t r_dim = 16, r_count = 32;
  double r_eps = 0.25;
  std::string r_construction = "random";
  std::optional<std::uint64_t> r_codebook_seed;
  std::size_t r_batches = 4, r_pairs = 16;
  std::string r_alice = "honest", r_bob = "honest";
  std::uint64_t r_seed = 0;
  std::size_t r_trials = 1;
  std::string r_transcripts;
  OutputOptions r_out;
  run->add_option("--protocol", r_protocol, "bitwise | codebook | cointoss")->required();
  run->add_option("--theta", r_theta, "Bitwise: encoding angle");
  run->add_option("--n", r_n, "Bitwise: string length");
  run->add_option("--r", r_r, "Bitwise: inaccessible bits (m = n - r)");
  run->add_option("--dim", r_dim, "Codebook: Hilbert-space dimension");
  run->add_option("--count", r_count, "Codebook: number of code vectors");
  run->add_option("--epsilon", r_eps, "Codebook: pairwise overlap bound");
  run->add_option("--construction", r_construction, "Codebook: random | simplex");
  run->add_option("--codebook-seed", r_codebook_seed, "Codebook: construction seed (default: --seed)");
  run->add_option("--batches", r_batches, "Coin toss: batch count M");
  run->add_option("--pairs", r_pairs, "Coin toss: singlets per batch N");
  run->add_option("--alice", r_alice, "Alice strategy, name[:key=value,...]");
  run->add_option("--bob", r_bob, "Bob strategy, name[:key=value,...]");
  run->add_option("--seed", r_seed, "Base seed")->required();
  run->add_option("--trials", r_trials, "Number of sessions");
  run->add_option("--transcripts-dir", r_transcripts, "Write one JSON-lines transcript per session here");
  add_output_flags(run, r_out);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and aggregate an experiment");
  cli::SweepSpec s_spec;
  std::string s_values;
  std::vector<std::string> s_fixed;
  OutputOptions s_out;
  sweep->add_option("--experiment", s_spec.experiment,
                    "cheat_bound | bob_entropy | helstrom | bob_advantage | detection | multistring")
      ->required();
  sweep->add_option("--variable", s_spec.variable, "Swept parameter name")->required();
  sweep->add_option("--values", s_values, "Comma-separated values")->required();
  sweep->add_option("--fixed", s_fixed, "Fixed parameter key=value (repeatable)");
  sweep->add_option("--trials", s_spec.trials, "Sessions per point");
  sweep->add_option("--seed", s_spec.seed, "Base seed")->required();
  add_output_flags(sweep, s_out);

  // codebook
  auto* cbook = app.add_subcommand("codebook", "Build or import a codebook, report its properties");
  std::size_t c_dim = 16, c_count = 32;
  double c_eps = 0.25;
  std::string c_construction = "random";
  std::optional<std::uint64_t> c_seed;
  std::string c_in, c_export;
  OutputOptions c_out;
  cbook->add_option("--dim", c_dim, "Hilbert-space dimension");
  cbook->add_option("--count", c_count, "Number of code vectors (random construction)");
  cbook->add_option("--epsilon", c_eps, "Pairwise overlap bound (random construction)");
  cbook->add_option("--construction", c_construction, "random | simplex");
  cbook->add_option("--seed", c_seed, "Construction seed (required for random)");
  cbook->add_option("--in", c_in, "Import and re-certify a codebook JSON file");
  cbook->add_option("--export", c_export, "Write the codebook JSON document here");
  add_output_flags(cbook, c_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*bounds) {
      emit(cli::cmd_bounds({b_theta, b_n, b_r, b_eps, b_r2}), b_out);
    } else if (*run) {
      cli::RunSpec spec;
      spec.protocol = parse_protocol_flag(r_protocol, spec.protocol_label);
      switch (spec.protocol) {
        case Protocol::BitwiseCommit:
          if (r_r < 1 || r_r > r_n) throw Error(Errc::InvalidSpec, "--r must lie in [1, n]");
          spec.params = SecurityParams::make(r_theta, r_n, r_n - r_r);
          break;
        case Protocol::CodebookCommit:
          spec.params = parse_construction(r_construction) == Construction::Simplex
                            ? CodebookParams::simplex(r_dim)
                            : CodebookParams::random(r_dim, r_count, r_eps, r_codebook_seed.value_or(r_seed));
          break;
        case Protocol::CoinToss:
          spec.params = CoinTossParams::make(r_batches, r_pairs, r_seed);
          break;
      }
      spec.alice = parse_strategy(Party::Alice, r_alice);
      spec.bob = parse_strategy(Party::Bob, r_bob);
      spec.seed = r_seed;
      spec.trials = r_trials;
      if (!r_transcripts.empty()) spec.transcripts_dir = r_transcripts;
      emit(cli::cmd_run(spec), r_out);
    } else if (*sweep) {
      s_spec.values = parse_list(s_values);
      for (const auto& kv : s_fixed) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw Error(Errc::InvalidSpec, "--fixed expects key=value");
        auto vals = parse_list(kv.substr(eq + 1));
        if (vals.size() != 1) throw Error(Errc::InvalidSpec, "--fixed expects a single number");
        s_spec.fixed[kv.substr(0, eq)] = vals.front();
      }
      emit(cli::cmd_sweep(s_spec), s_out);
    } else if (*cbook) {
      std::optional<Codebook> cb;
      if (!c_in.empty()) {
        cb.emplace(read_codebook(c_in));
      } else if (parse_construction(c_construction) == Construction::Simplex) {
        cb.emplace(simplex_codebook(c_dim));
      } else {
        if (!c_seed) throw Error(Errc::InvalidSpec, "--seed is required for a random codebook");
        cb.emplace(random_codebook_seeded(c_dim, c_count, c_eps, *c_seed));
      }
      if (!c_export.empty()) write_codebook(*cb, c_export);
      emit(cli::codebook_summary(*cb), c_out);
    }
  } catch (const Error& e) {
    std::cerr << "qcommit: " << e.what() << "\n";
    return usage_or_runtime(e);
  } catch (const std::exception& e) {
    std::cerr << "qcommit: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
