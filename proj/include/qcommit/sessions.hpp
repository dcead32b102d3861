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

// Session drivers for the two commitment protocols, and the strategy
// plug-in points each party exposes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qcommit/codebook.hpp"
#include "qcommit/commit_bitwise.hpp"
#include "qcommit/qmath.hpp"
#include "qcommit/rng.hpp"
#include "qcommit/transcript.hpp"

namespace qcommit {

/// Quantum systems held by the receiving party. The holder may apply
/// declared measurements (with collapse) but never reads amplitudes.
class HeldRegister {
 public:
  explicit HeldRegister(std::vector<StateVector>& systems) : systems_(systems) {}

  std::size_t size() const { return systems_.size(); }
  std::size_t dim(std::size_t i) const { return systems_.at(i).dim(); }

  template <UniformSource Rng>
  std::size_t measure(std::size_t i, const Measurement& m, Rng& rng) {
    auto res = qcommit::measure(systems_.at(i), m, rng);
    systems_[i] = std::move(res.post_state);
    return res.outcome;
  }

 private:
  std::vector<StateVector>& systems_;
};

/// Common hook: a private record merged into the transcript details.
class ReportingStrategy : public Strategy {
 public:
  using Strategy::Strategy;
  virtual json report() const { return json::object(); }
};

//============================================================================
// Bit-wise commitment
//============================================================================

inline json to_json(const SecurityParams& p) {
  return json{{"theta", p.theta}, {"delta", p.delta}, {"n", p.n}, {"m", p.m}, {"r", p.r}};
}

class BitwiseAlice : public ReportingStrategy {
 public:
  using ReportingStrategy::ReportingStrategy;
  virtual std::vector<StateVector> commit(const SecurityParams& params, RngStream& rng) = 0;
  virtual BitString unveil(const SecurityParams& params, RngStream& rng) = 0;
};

class BitwiseBob : public ReportingStrategy {
 public:
  using ReportingStrategy::ReportingStrategy;
  /// Runs between commitment and unveiling.
  virtual void after_commit(HeldRegister& /*held*/, const SecurityParams& /*params*/, RngStream& /*rng*/) {}
};

/// Commits a uniformly random string and unveils it truthfully.
class HonestBitwiseAlice : public BitwiseAlice {
 public:
  explicit HonestBitwiseAlice(StrategyDescriptor d = {Party::Alice, "honest", {}}) : BitwiseAlice(std::move(d)) {}

  std::vector<StateVector> commit(const SecurityParams& params, RngStream& rng) override {
    bits_.assign(params.n, 0);
    for (auto& b : bits_) b = rng.bit() ? 1 : 0;
    return qcommit::commit(bits_, params).qubits;
  }
  BitString unveil(const SecurityParams&, RngStream&) override { return bits_; }
  json report() const override { return {{"committed", format_bits(bits_)}}; }

 private:
  BitString bits_;
};

/// Sends the optimal two-way cheat state on every qubit, then claims
/// all-`reveal` (parameter 0 or 1) or, without the parameter, a uniformly
/// random string.
class CheatingBitwiseAlice : public BitwiseAlice {
 public:
  explicit CheatingBitwiseAlice(StrategyDescriptor d = {Party::Alice, "cheat", {}}) : BitwiseAlice(std::move(d)) {
    if (descriptor().has("reveal")) {
      double r = descriptor().param("reveal", 0.0);
      if (r != 0.0 && r != 1.0) throw Error(Errc::DomainError, "cheat reveal must be 0 or 1");
    }
  }

  std::vector<StateVector> commit(const SecurityParams& params, RngStream&) override {
    auto cheat = optimal_bit_cheat(params.theta);
    return std::vector<StateVector>(params.n, cheat.cheat_state);
  }
  BitString unveil(const SecurityParams& params, RngStream& rng) override {
    claimed_.assign(params.n, 0);
    if (descriptor().has("reveal")) {
      auto bit = static_cast<std::uint8_t>(descriptor().param("reveal", 0.0));
      std::fill(claimed_.begin(), claimed_.end(), bit);
    } else {
      for (auto& b : claimed_) b = rng.bit() ? 1 : 0;
    }
    return claimed_;
  }

 private:
  BitString claimed_;
};

class HonestBitwiseBob : public BitwiseBob {
 public:
  explicit HonestBitwiseBob(StrategyDescriptor d = {Party::Bob, "honest", {}}) : BitwiseBob(std::move(d)) {}
};

/// Guesses every bit with the Helstrom measurement before unveiling. The
/// measurement disturbs the qubits, so even honest unveilings may fail.
class HelstromBitwiseBob : public BitwiseBob {
 public:
  explicit HelstromBitwiseBob(StrategyDescriptor d = {Party::Bob, "helstrom", {}}) : BitwiseBob(std::move(d)) {}

  void after_commit(HeldRegister& held, const SecurityParams& params, RngStream& rng) override {
    auto m = helstrom_measurement(params.theta);
    guess_.assign(held.size(), 0);
    for (std::size_t i = 0; i < held.size(); ++i) guess_[i] = static_cast<std::uint8_t>(held.measure(i, m, rng));
  }
  json report() const override { return {{"guess", format_bits(guess_)}}; }
  const BitString& guess() const { return guess_; }

 private:
  BitString guess_;
};

/// Streams: "bitwise/alice" and "bitwise/bob" derived from `seed`.
inline Transcript run_bitwise_session(const SecurityParams& params, BitwiseAlice& alice, BitwiseBob& bob,
                                      std::uint64_t seed) {
  auto alice_rng = rng_stream(seed, "bitwise/alice");
  auto bob_rng = rng_stream(seed, "bitwise/bob");
  SessionLog log(Protocol::BitwiseCommit, to_json(params), seed, &alice, &bob);

  auto sent = alice.commit(params, alice_rng);
  if (sent.size() != params.n) throw Error(Errc::ProtocolViolation, "Alice sent the wrong number of qubits");
  for (const auto& q : sent)
    if (q.dim() != 2) throw Error(Errc::ProtocolViolation, "Alice sent a system that is not a qubit");
  log.send(Party::Alice, "commit", {{"qubits", params.n}});

  HeldRegister held(sent);
  bob.after_commit(held, params, bob_rng);
  log.send(Party::Bob, "ready");

  BitString claimed = alice.unveil(params, alice_rng);
  if (claimed.size() != params.n) throw Error(Errc::ProtocolViolation, "Alice unveiled the wrong length");
  log.send(Party::Alice, "unveil", {{"bits", format_bits(claimed)}});

  auto verdict = verify_unveil(BitwiseCommitment{sent}, claimed, params.theta, bob_rng);
  json payload{{"accepted", verdict.accepted}};
  if (verdict.failing_index) payload["failing_index"] = *verdict.failing_index;
  log.send(Party::Bob, "verdict", payload);

  json details{{"alice", alice.report()}, {"bob", bob.report()}, {"claimed", format_bits(claimed)}};
  if (verdict.failing_index) details["failing_index"] = *verdict.failing_index;
  return log.finish(verdict.accepted ? verdict::kAccepted : verdict::kRejected, std::move(details));
}

//============================================================================
// Codebook commitment
//============================================================================

struct CodebookParams {
  std::size_t dim = 0;
  std::size_t count = 0;
  double epsilon = 0.0;
  Construction construction = Construction::Random;
  std::uint64_t codebook_seed = 0;

  static CodebookParams random(std::size_t dim, std::size_t count, double epsilon, std::uint64_t codebook_seed) {
    if (count < 2 || dim < 1) throw Error(Errc::DomainError, "codebook needs dim >= 1 and count >= 2");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(Errc::DomainError, "epsilon must lie in (0, 1]");
    return {dim, count, epsilon, Construction::Random, codebook_seed};
  }
  static CodebookParams simplex(std::size_t dim) {
    if (dim < 2) throw Error(Errc::DomainError, "simplex codebook needs dim >= 2");
    return {dim, dim + 1, 1.0 / static_cast<double>(dim) + 1e-12, Construction::Simplex, 0};
  }
};

inline json to_json(const CodebookParams& p) {
  return json{{"dim", p.dim},
              {"count", p.count},
              {"epsilon", p.epsilon},
              {"construction", std::string(to_string(p.construction))},
              {"codebook_seed", p.codebook_seed}};
}

inline Codebook build_codebook(const CodebookParams& p) {
  if (p.construction == Construction::Simplex) return simplex_codebook(p.dim);
  return random_codebook_seeded(p.dim, p.count, p.epsilon, p.codebook_seed);
}

class CodebookAlice : public ReportingStrategy {
 public:
  using ReportingStrategy::ReportingStrategy;
  virtual StateVector commit(const Codebook& codebook, RngStream& rng) = 0;
  virtual std::size_t unveil(const Codebook& codebook, RngStream& rng) = 0;
};

class CodebookBob : public ReportingStrategy {
 public:
  using ReportingStrategy::ReportingStrategy;
  virtual void after_commit(HeldRegister& /*held*/, const Codebook& /*codebook*/, RngStream& /*rng*/) {}
};

/// Commits a uniformly random index (or parameter `index`) truthfully.
class HonestCodebookAlice : public CodebookAlice {
 public:
  explicit HonestCodebookAlice(StrategyDescriptor d = {Party::Alice, "honest", {}}) : CodebookAlice(std::move(d)) {}

  StateVector commit(const Codebook& codebook, RngStream& rng) override {
    index_ = descriptor().has("index") ? static_cast<std::size_t>(descriptor().param("index", 0.0))
                                       : static_cast<std::size_t>(rng.below(codebook.count()));
    return commit_string(codebook, index_).state;
  }
  std::size_t unveil(const Codebook&, RngStream&) override { return index_; }
  json report() const override { return {{"committed", index_}}; }

 private:
  std::size_t index_ = 0;
};

/// Keeps r random target strings open (parameter `r`, default 2) with the
/// top eigenvector of Q, then claims one target uniformly.
class MultistringCodebookAlice : public CodebookAlice {
 public:
  explicit MultistringCodebookAlice(StrategyDescriptor d = {Party::Alice, "multistring", {}})
      : CodebookAlice(std::move(d)) {
    double r = descriptor().param("r", 2.0);
    if (!(r >= 1.0) || r != std::floor(r)) throw Error(Errc::DomainError, "multistring r must be a positive integer");
    r_ = static_cast<std::size_t>(r);
  }

  StateVector commit(const Codebook& codebook, RngStream& rng) override {
    if (r_ > codebook.count()) throw Error(Errc::DomainError, "multistring r exceeds codebook size");
    targets_ = rng.choose(codebook.count(), r_);
    auto rep = optimal_multistring_cheat(codebook, targets_);
    total_ = rep.total;
    bound_ = rep.bound;
    return rep.cheat_state;
  }
  std::size_t unveil(const Codebook&, RngStream& rng) override {
    return targets_[static_cast<std::size_t>(rng.below(targets_.size()))];
  }
  json report() const override { return {{"targets", targets_}, {"total", total_}, {"bound", bound_}}; }

 private:
  std::size_t r_ = 2;
  std::vector<std::size_t> targets_;
  double total_ = 0.0;
  double bound_ = 0.0;
};

class HonestCodebookBob : public CodebookBob {
 public:
  explicit HonestCodebookBob(StrategyDescriptor d = {Party::Bob, "honest", {}}) : CodebookBob(std::move(d)) {}
};

/// Streams: "codebook/alice" and "codebook/bob" derived from `seed`.
inline Transcript run_codebook_session(const Codebook& codebook, const CodebookParams& params, CodebookAlice& alice,
                                       CodebookBob& bob, std::uint64_t seed) {
  auto alice_rng = rng_stream(seed, "codebook/alice");
  auto bob_rng = rng_stream(seed, "codebook/bob");
  SessionLog log(Protocol::CodebookCommit, to_json(params), seed, &alice, &bob);

  std::vector<StateVector> sent{alice.commit(codebook, alice_rng)};
  if (sent.front().dim() != codebook.dim()) throw Error(Errc::ProtocolViolation, "Alice sent a state of wrong dimension");
  log.send(Party::Alice, "commit", {{"dim", codebook.dim()}});

  HeldRegister held(sent);
  bob.after_commit(held, codebook, bob_rng);
  log.send(Party::Bob, "ready");

  std::size_t claimed = alice.unveil(codebook, alice_rng);
  log.send(Party::Alice, "unveil", {{"index", claimed}});

  auto verdict = verify_unveil(codebook, CodebookCommitment{sent.front(), codebook.id()}, claimed, bob_rng);
  log.send(Party::Bob, "verdict", {{"accepted", verdict.accepted}});

  json details{{"alice", alice.report()}, {"bob", bob.report()}, {"claimed", claimed},
               {"codebook_id", codebook.id()}};
  return log.finish(verdict.accepted ? verdict::kAccepted : verdict::kRejected, std::move(details));
}

}  // namespace qcommit
