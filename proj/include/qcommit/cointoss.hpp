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

// Cut-and-choose coin tossing over Bell singlets. Alice prepares M batches
// of N pairs and hands Bob one particle of each; Bob keeps one batch,
// tests the other M-1 for singlet fidelity, and the kept batch is measured
// in sigma_z to produce N bits.
//
// Pair states are 4-dim with Alice's particle as the first (slow) factor.
// Bit convention: sigma_z = +1 -> 0, sigma_z = -1 -> 1, per pair in order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcommit/commit_bitwise.hpp"
#include "qcommit/error.hpp"
#include "qcommit/qmath.hpp"
#include "qcommit/rng.hpp"
#include "qcommit/transcript.hpp"

namespace qcommit {

struct CoinTossParams {
  std::size_t batches = 0;  // M
  std::size_t pairs = 0;    // N
  std::uint64_t seed = 0;

  static CoinTossParams make(std::size_t batches, std::size_t pairs, std::uint64_t seed) {
    if (batches < 2) throw Error(Errc::DomainError, "coin tossing needs M >= 2 batches");
    if (pairs < 1) throw Error(Errc::DomainError, "coin tossing needs N >= 1 pairs per batch");
    return {batches, pairs, seed};
  }

  /// log2(M) / N; the protocol wants this small. Reported, not enforced.
  double advisory_ratio() const { return std::log2(static_cast<double>(batches)) / static_cast<double>(pairs); }
};

inline json to_json(const CoinTossParams& p) {
  return json{{"batches", p.batches}, {"pairs", p.pairs}, {"seed", p.seed}};
}

struct PairState {
  StateVector state;
};

using Batch = std::vector<PairState>;

inline PairState singlet() {
  const double h = 1.0 / std::sqrt(2.0);
  return {StateVector::from_normalized({0.0, h, -h, 0.0})};
}

/// |a, 1-a>: Alice's sigma_z outcome is fixed to bit a.
inline PairState steered_pair(int alice_bit) {
  return {basis_state(4, alice_bit ? 2 : 1)};
}

namespace detail {

inline const Measurement& bell_measurement() {
  static const Measurement m = [] {
    const double h = 1.0 / std::sqrt(2.0);
    // Psi- first: outcome 0 is the singlet
    std::vector<StateVector> bell{StateVector::from_normalized({0.0, h, -h, 0.0}),
                                  StateVector::from_normalized({0.0, h, h, 0.0}),
                                  StateVector::from_normalized({h, 0.0, 0.0, h}),
                                  StateVector::from_normalized({h, 0.0, 0.0, -h})};
    return Measurement::in_basis(bell);
  }();
  return m;
}

inline const Measurement& zz_measurement() {
  static const Measurement m = [] {
    std::vector<StateVector> basis;
    for (std::size_t k = 0; k < 4; ++k) basis.push_back(basis_state(4, k));
    return Measurement::in_basis(basis);
  }();
  return m;
}

/// sigma_z on the second particle only: {1 (x) |0><0|, 1 (x) |1><1|}.
inline const Measurement& bob_z_measurement() {
  static const Measurement m = [] {
    auto id = HermitianOperator::identity(2);
    std::vector<HermitianOperator> ps{kron(id, projector(basis_state(2, 0))), kron(id, projector(basis_state(2, 1)))};
    return Measurement(std::move(ps));
  }();
  return m;
}

}  // namespace detail

//============================================================================
// Alice
//============================================================================

/// Honest preparation, or product-state tampering steering Alice's bits.
struct AliceStrategy {
  enum class Kind { Honest, Tamper };
  Kind kind = Kind::Honest;
  double fraction = 0.0;                       // tampered share of each tampered batch
  std::optional<std::size_t> pairs;            // absolute tampered count, overrides fraction
  int target_bit = 0;
  std::optional<std::size_t> tampered_batches;  // nullopt: every batch

  static AliceStrategy honest() { return {}; }
  static AliceStrategy tamper(double fraction, int target_bit,
                              std::optional<std::size_t> batches = std::nullopt) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error(Errc::DomainError, "tamper fraction must lie in [0, 1]");
    if (target_bit != 0 && target_bit != 1) throw Error(Errc::DomainError, "target bit must be 0 or 1");
    return {Kind::Tamper, fraction, std::nullopt, target_bit, batches};
  }
  static AliceStrategy tamper_pairs(std::size_t k, int target_bit,
                                    std::optional<std::size_t> batches = std::nullopt) {
    auto s = tamper(0.0, target_bit, batches);
    s.pairs = k;
    return s;
  }

  std::size_t tampered_per_batch(std::size_t n) const {
    if (kind == Kind::Honest) return 0;
    if (pairs) return std::min(*pairs, n);
    return std::min(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-12)));
  }
};

struct PreparedBatches {
  std::vector<Batch> batches;
  // Alice's private record: tampered pair positions per batch.
  std::vector<std::vector<std::size_t>> tampered;
};

/// Batches of singlets, with rng-chosen positions replaced by steered
/// product pairs under the tamper strategy.
template <class Rng>
PreparedBatches prepare_batches(const AliceStrategy& alice, const CoinTossParams& params, Rng& rng) {
  PreparedBatches out;
  out.batches.assign(params.batches, Batch(params.pairs, singlet()));
  out.tampered.assign(params.batches, {});
  if (alice.kind == AliceStrategy::Kind::Honest) return out;

  std::vector<std::size_t> which;
  if (alice.tampered_batches) {
    which = rng.choose(params.batches, std::min(*alice.tampered_batches, params.batches));
  } else {
    which.resize(params.batches);
    for (std::size_t b = 0; b < params.batches; ++b) which[b] = b;
  }
  const std::size_t k = alice.tampered_per_batch(params.pairs);
  for (auto b : which) {
    out.tampered[b] = rng.choose(params.pairs, k);
    for (auto i : out.tampered[b]) out.batches[b][i] = steered_pair(alice.target_bit);
  }
  return out;
}

//============================================================================
// Measurements
//============================================================================

/// Bell-basis test of every pair; passes iff every pair lands on the
/// singlet. Stops at the first failure.
template <UniformSource Rng>
bool singlet_test(const Batch& batch, Rng& rng) {
  const auto& bell = detail::bell_measurement();
  for (const auto& pair : batch) {
    if (born_sample(pair.state, bell, rng) != 0) return false;
  }
  return true;
}

struct BitPair {
  BitString alice;
  BitString bob;
};

/// Joint sigma_z (x) sigma_z sampling of every pair.
template <UniformSource Rng>
BitPair generate_bits(const Batch& batch, Rng& rng) {
  const auto& zz = detail::zz_measurement();
  BitPair out;
  out.alice.reserve(batch.size());
  out.bob.reserve(batch.size());
  for (const auto& pair : batch) {
    std::size_t k = born_sample(pair.state, zz, rng);
    out.alice.push_back(static_cast<std::uint8_t>(k >> 1));
    out.bob.push_back(static_cast<std::uint8_t>(k & 1));
  }
  return out;
}

/// Bob's handle on the particles he holds: he may measure his own half of
/// any pair in sigma_z, and nothing else. Measurement collapses the joint
/// state.
class BobHalves {
 public:
  explicit BobHalves(std::vector<Batch>& batches) : batches_(batches) {}

  std::size_t batches() const { return batches_.size(); }
  std::size_t pairs() const { return batches_.empty() ? 0 : batches_.front().size(); }

  template <UniformSource Rng>
  int measure_z(std::size_t batch, std::size_t pair, Rng& rng) {
    auto& st = batches_.at(batch).at(pair).state;
    auto res = measure(st, detail::bob_z_measurement(), rng);
    st = std::move(res.post_state);
    return static_cast<int>(res.outcome);
  }

 private:
  std::vector<Batch>& batches_;
};

//============================================================================
// Bob
//============================================================================

using ScoreFn = std::function<double(const BitString&)>;

/// Length of the leading run matching an all-zero target.
inline double zero_prefix_score(const BitString& bits) {
  std::size_t k = 0;
  while (k < bits.size() && bits[k] == 0) ++k;
  return static_cast<double>(k);
}

/// Bob's plug-in point: choose the batch to keep.
class CoinTossBob : public Strategy {
 public:
  using Strategy::Strategy;
  virtual std::size_t choose_kept(BobHalves& halves, RngStream& rng) = 0;
  /// Whether Bob actually runs the singlet test on the batches he tested.
  virtual bool runs_test() const { return true; }
};

class HonestCoinTossBob : public CoinTossBob {
 public:
  HonestCoinTossBob() : CoinTossBob({Party::Bob, "honest", {}}) {}
  explicit HonestCoinTossBob(StrategyDescriptor d) : CoinTossBob(std::move(d)) {}
  std::size_t choose_kept(BobHalves& halves, RngStream& rng) override {
    return static_cast<std::size_t>(rng.below(halves.batches()));
  }
};

/// Measures every half he holds, predicts Alice's bits as the complements,
/// keeps the batch whose predicted string scores best (lowest index on
/// ties), and waves the rest through without testing.
class BestOfMBob : public CoinTossBob {
 public:
  explicit BestOfMBob(ScoreFn score = zero_prefix_score)
      : CoinTossBob({Party::Bob, "best_of_m", {}}), score_(std::move(score)) {}
  BestOfMBob(StrategyDescriptor d, ScoreFn score) : CoinTossBob(std::move(d)), score_(std::move(score)) {}

  std::size_t choose_kept(BobHalves& halves, RngStream& rng) override {
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t b = 0; b < halves.batches(); ++b) {
      BitString predicted(halves.pairs());
      for (std::size_t i = 0; i < halves.pairs(); ++i) {
        predicted[i] = static_cast<std::uint8_t>(1 - halves.measure_z(b, i, rng));
      }
      double s = score_(predicted);
      if (s > best_score) {
        best_score = s;
        best = b;
      }
    }
    return best;
  }
  bool runs_test() const override { return false; }

 private:
  ScoreFn score_;
};

/// Alice's plug-in point. Her whole behaviour is the preparation plan.
class CoinTossAlice : public Strategy {
 public:
  explicit CoinTossAlice(AliceStrategy plan = AliceStrategy::honest(),
                         StrategyDescriptor d = {Party::Alice, "honest", {}})
      : Strategy(std::move(d)), plan_(plan) {}
  const AliceStrategy& plan() const { return plan_; }

 private:
  AliceStrategy plan_;
};

//============================================================================
// Session
//============================================================================

struct TossOutcome {
  std::string verdict;            // Completed | CheatDetected
  std::optional<BitString> bits;  // Alice's sigma_z string, iff Completed
  std::optional<BitString> bob_bits;
  std::size_t kept_batch = 0;
  Transcript transcript;

  bool completed() const { return verdict == verdict::kCompleted; }
};

/// One full session. Streams derive from params.seed with labels
/// "cointoss/alice", "cointoss/bob" and "cointoss/nature" (the joint
/// sigma_z measurement of the kept batch).
inline TossOutcome run_coin_toss(const CoinTossParams& params, CoinTossAlice& alice, CoinTossBob& bob) {
  auto alice_rng = rng_stream(params.seed, "cointoss/alice");
  auto bob_rng = rng_stream(params.seed, "cointoss/bob");
  auto nature_rng = rng_stream(params.seed, "cointoss/nature");

  SessionLog log(Protocol::CoinToss, to_json(params), params.seed, &alice, &bob);

  auto prepared = prepare_batches(alice.plan(), params, alice_rng);
  log.send(Party::Alice, "batches", {{"batches", params.batches}, {"pairs", params.pairs}});

  BobHalves halves(prepared.batches);
  std::size_t kept = bob.choose_kept(halves, bob_rng);
  if (kept >= params.batches) throw Error(Errc::ProtocolViolation, "Bob kept a batch that does not exist");
  std::vector<std::size_t> tested;
  for (std::size_t b = 0; b < params.batches; ++b)
    if (b != kept) tested.push_back(b);
  log.send(Party::Bob, "choose", {{"tested", tested}});
  log.send(Party::Alice, "reveal", {{"batches", tested}});

  bool pass = true;
  std::optional<std::size_t> failed_batch;
  if (bob.runs_test()) {
    for (auto b : tested) {
      if (!singlet_test(prepared.batches[b], bob_rng)) {
        pass = false;
        failed_batch = b;
        break;
      }
    }
  }
  log.send(Party::Bob, "test_result", {{"pass", pass}});

  json tampered = json::array();
  for (const auto& t : prepared.tampered) tampered.push_back(t);
  json details{{"kept_batch", kept}, {"tampered", tampered}, {"test_run", bob.runs_test()},
               {"advisory_ratio", params.advisory_ratio()}};

  TossOutcome out;
  out.kept_batch = kept;
  if (!pass) {
    details["failed_batch"] = *failed_batch;
    out.verdict = std::string(verdict::kCheatDetected);
    out.transcript = log.finish(verdict::kCheatDetected, std::move(details));
    return out;
  }

  auto bits = generate_bits(prepared.batches[kept], nature_rng);
  log.send(Party::Alice, "measure");
  log.send(Party::Bob, "measure");
  details["alice_bits"] = format_bits(bits.alice);
  details["bob_bits"] = format_bits(bits.bob);
  out.verdict = std::string(verdict::kCompleted);
  out.bits = bits.alice;
  out.bob_bits = bits.bob;
  out.transcript = log.finish(verdict::kCompleted, std::move(details));
  return out;
}

inline TossOutcome run_coin_toss(const CoinTossParams& params, const AliceStrategy& plan, CoinTossBob& bob) {
  CoinTossAlice alice(plan, {Party::Alice, plan.kind == AliceStrategy::Kind::Honest ? "honest" : "tamper", {}});
  return run_coin_toss(params, alice, bob);
}

//============================================================================
// Cheating Bob
//============================================================================

struct BestOfMResult {
  double advantage_bits = 0.0;  // score of the kept string
  std::size_t chosen = 0;
  BitString bits;               // Alice's final string
};

/// One measure-then-choose session against honest Alice.
inline BestOfMResult bob_best_of_M(const CoinTossParams& params, const ScoreFn& score, RngStream& rng) {
  if (params.batches < 2) throw Error(Errc::DomainError, "best-of-M needs M >= 2");
  auto prepared = prepare_batches(AliceStrategy::honest(), params, rng);
  BobHalves halves(prepared.batches);
  BestOfMBob bob(score);
  std::size_t chosen = bob.choose_kept(halves, rng);
  auto bits = generate_bits(prepared.batches[chosen], rng);
  return {score(bits.alice), chosen, std::move(bits.alice)};
}

struct AdvantageEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t sessions = 0;
};

inline AdvantageEstimate estimate_best_of_M(const CoinTossParams& params, const ScoreFn& score,
                                            std::size_t sessions, RngStream& rng) {
  if (sessions < 1) throw Error(Errc::DomainError, "need at least one session");
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t s = 0; s < sessions; ++s) {
    double a = bob_best_of_M(params, score, rng).advantage_bits;
    sum += a;
    sum2 += a * a;
  }
  double n = static_cast<double>(sessions);
  double mean = sum / n;
  double var = sessions > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n), sessions};
}

}  // namespace qcommit
