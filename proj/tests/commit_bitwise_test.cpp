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

#include "qcommit/commit_bitwise.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qcommit/rng.hpp"
#include "test_util.hpp"

namespace qcommit {
namespace {

using testing::error_code;
using testing::within_sigma;

constexpr double kHalfPi = std::numbers::pi / 2;

TEST(EncodeBit, Definition) {
  for (double theta : {0.1, 0.3, 1.0, kHalfPi}) {
    auto zero = encode_bit(0, theta);
    EXPECT_EQ(zero[0], complex_t(1.0));
    EXPECT_EQ(zero[1], complex_t(0.0));
  }
  auto one = encode_bit(1, 0.3);
  EXPECT_NEAR(one[0].real(), std::sin(0.3), 1e-15);
  EXPECT_NEAR(one[1].real(), std::cos(0.3), 1e-15);
  auto same = encode_bit(1, kHalfPi);
  EXPECT_NEAR(same[0].real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(same[1]), 0.0, 1e-15);
  EXPECT_NEAR(inner(encode_bit(0, 0.7), encode_bit(1, 0.7)).real(), std::sin(0.7), 1e-15);
}

TEST(EncodeBit, DomainError) {
  EXPECT_EQ(error_code([] { encode_bit(0, 0.0); }), Errc::DomainError);
  EXPECT_EQ(error_code([] { encode_bit(0, 2.0); }), Errc::DomainError);
  EXPECT_EQ(error_code([] { encode_bit(2, 0.3); }), Errc::DomainError);
}

TEST(Commit, AllZeros) {
  auto params = SecurityParams::make(0.3, 5, 4);
  auto c = commit(parse_bits("00000"), params);
  ASSERT_EQ(c.n(), 5u);
  for (const auto& q : c.qubits) EXPECT_EQ(q[0], complex_t(1.0));
}

TEST(Commit, MixedString) {
  auto params = SecurityParams::make(0.3, 2, 1);
  auto c = commit(parse_bits("01"), params);
  EXPECT_EQ(c.qubits[0][0], complex_t(1.0));
  EXPECT_NEAR(c.qubits[1][0].real(), std::sin(0.3), 1e-15);
  EXPECT_NEAR(c.qubits[1][1].real(), std::cos(0.3), 1e-15);
}

TEST(Commit, LengthMismatch) {
  auto params = SecurityParams::make(0.3, 4, 3);
  EXPECT_EQ(error_code([&] { commit(parse_bits("011"), params); }), Errc::LengthMismatch);
}

TEST(VerifyUnveil, HonestAlwaysAccepted) {
  auto params = SecurityParams::make(0.3, 4, 3);
  auto rng = rng_stream(1, "verify");
  auto bits = parse_bits("0110");
  auto c = commit(bits, params);
  for (int t = 0; t < 10000; ++t) {
    auto v = verify_unveil(c, bits, params.theta, rng);
    ASSERT_TRUE(v.accepted);
    ASSERT_FALSE(v.failing_index.has_value());
  }
}

// Completeness over a theta grid and random strings.
TEST(VerifyUnveil, CompletenessGrid) {
  for (double theta : {0.1, 0.3, 0.6, 1.0}) {
    auto params = SecurityParams::make(theta, 8, 7);
    auto rng = rng_stream(2, "completeness");
    for (int t = 0; t < 10000; ++t) {
      BitString bits(8);
      for (auto& b : bits) b = rng.bit();
      auto c = commit(bits, params);
      ASSERT_TRUE(verify_unveil(c, bits, theta, rng).accepted) << theta;
    }
  }
}

// Acceptance of a false claim is |<psi_1|psi_0>|^2 = sin^2 theta.
TEST(VerifyUnveil, WrongClaimAcceptanceRate) {
  const double theta = 0.3;
  auto params = SecurityParams::make(theta, 1, 0);
  auto c = commit(parse_bits("0"), params);
  auto rng = rng_stream(3, "wrong-claim");
  const std::size_t n = 100000;
  std::size_t accepted = 0;
  for (std::size_t t = 0; t < n; ++t) accepted += verify_unveil(c, parse_bits("1"), theta, rng).accepted;
  double p = std::sin(theta) * std::sin(theta);
  EXPECT_TRUE(within_sigma(static_cast<double>(accepted) / n, p, n, 3.0)) << accepted;
}

TEST(VerifyUnveil, ReportsFirstFailingIndex) {
  auto params = SecurityParams::make(kHalfPi / 2, 3, 2);
  auto c = commit(parse_bits("011"), params);
  auto rng = rng_stream(4, "first-failure");
  bool saw_rejection = false;
  for (int t = 0; t < 200; ++t) {
    auto v = verify_unveil(c, parse_bits("000"), params.theta, rng);
    if (!v.accepted) {
      ASSERT_TRUE(v.failing_index.has_value());
      EXPECT_TRUE(*v.failing_index == 1 || *v.failing_index == 2);
      saw_rejection = true;
    }
  }
  EXPECT_TRUE(saw_rejection);
}

TEST(VerifyUnveil, LengthMismatch) {
  auto params = SecurityParams::make(0.3, 2, 1);
  auto c = commit(parse_bits("01"), params);
  auto rng = rng_stream(0, "x");
  EXPECT_EQ(error_code([&] { verify_unveil(c, parse_bits("010"), 0.3, rng); }), Errc::LengthMismatch);
}

TEST(OptimalBitCheat, Examples) {
  auto full = optimal_bit_cheat(kHalfPi);
  EXPECT_NEAR(full.p0 + full.p1, 2.0, 1e-9);
  auto small = optimal_bit_cheat(1e-6);
  EXPECT_NEAR(small.p0 + small.p1, 1.0, 1e-5);
  auto mid = optimal_bit_cheat(0.3);
  EXPECT_NEAR(mid.p0 + mid.p1, 1.0 + std::sin(0.3), 1e-9);
  EXPECT_NEAR(mid.p0, mid.p1, 1e-9);
}

TEST(CheatBound, MatchesEigensolver) {
  for (double theta : {0.05, 0.1, 0.3, 0.6, 1.0, 1.4, kHalfPi}) {
    auto p = projector(encode_bit(0, theta)) + projector(encode_bit(1, theta));
    EXPECT_NEAR(cheat_bound(theta), max_eigenvalue(p), 1e-9);
    EXPECT_LE(cheat_bound(theta), 1.0 + theta + 1e-15);
  }
  EXPECT_DOUBLE_EQ(cheat_bound(kHalfPi), 2.0);
}

// Soundness ceiling against random qubit cheat states.
TEST(CheatBound, HaarCheatStatesNeverExceed) {
  for (double theta : {0.1, 0.3, 0.6, 1.0}) {
    auto rng = rng_stream(5, "haar-cheat");
    auto p0 = projector(encode_bit(0, theta));
    auto p1 = projector(encode_bit(1, theta));
    double bound = cheat_bound(theta);
    for (int t = 0; t < 10000; ++t) {
      auto s = haar_state(2, rng);
      ASSERT_LE(p0.expectation(s) + p1.expectation(s), bound + 1e-9);
    }
    auto best = optimal_bit_cheat(theta);
    EXPECT_NEAR(best.p0 + best.p1, bound, 1e-9);
  }
}

TEST(BobEnsemble, Examples) {
  auto pure = bob_ensemble(1, kHalfPi);
  EXPECT_NEAR(pure(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(pure(1, 1)), 0.0, 1e-12);
  auto mixed = bob_ensemble(1, 1e-9);
  EXPECT_NEAR(mixed(0, 0).real(), 0.5, 1e-9);
  EXPECT_NEAR(mixed(1, 1).real(), 0.5, 1e-9);
  EXPECT_NEAR(von_neumann_entropy(bob_ensemble(3, 0.3)), 3.0 * binary_entropy((1.0 + std::sin(0.3)) / 2.0), 1e-9);
}

// Oracle: explicit equal mixture over all 2^n product encodings.
TEST(BobEnsemble, EqualsExplicitMixture) {
  const double theta = 0.6;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<StateVector> states;
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
      StateVector s = encode_bit((mask >> (n - 1)) & 1, theta);
      for (std::size_t i = 1; i < n; ++i) s = tensor(s, encode_bit((mask >> (n - 1 - i)) & 1, theta));
      states.push_back(s);
    }
    auto oracle = DensityMatrix::uniform_mixture(states);
    auto rho = bob_ensemble(n, theta);
    EXPECT_LT(rho.matrix().max_abs_diff(oracle.matrix()), 1e-12) << n;
  }
}

TEST(BobEnsemble, TooLarge) {
  EXPECT_EQ(error_code([] { bob_ensemble(11, 0.3); }), Errc::TooLarge);
}

TEST(BobEntropy, Examples) {
  for (std::size_t n : {1u, 4u, 9u}) {
    EXPECT_NEAR(bob_entropy(n, kHalfPi), 0.0, 1e-12);
    EXPECT_NEAR(bob_entropy(n, 1e-9), static_cast<double>(n), 1e-9);
  }
  // frozen with mpmath
  EXPECT_NEAR(bob_entropy(1, 0.3), 0.93605258048775166415, 1e-14);
}

// Entropy factorization against exact eigendecomposition, n <= 8.
TEST(BobEntropy, FactorizesOverQubits) {
  for (double theta : {0.3, 1.0}) {
    for (std::size_t n = 1; n <= 8; ++n) {
      EXPECT_NEAR(von_neumann_entropy(bob_ensemble(n, theta)), bob_entropy(n, theta), 1e-9)
          << "n " << n << " theta " << theta;
    }
  }
}

TEST(InaccessibleBits, Examples) {
  auto full = inaccessible_bits(7, kHalfPi, 6.5);
  EXPECT_NEAR(full.gap, 7.0, 1e-12);
  EXPECT_TRUE(full.satisfied);
  auto none = inaccessible_bits(7, 1e-9, 1.0);
  EXPECT_NEAR(none.gap, 0.0, 1e-9);
  EXPECT_FALSE(none.satisfied);
}

// Scan oracle at sin theta = 0.1, frozen: per-qubit gap 0.0072255460121917.
TEST(InaccessibleBits, SmallestNAtSinPointOne) {
  const double theta = std::asin(0.1);
  std::size_t n = 1;
  while (!inaccessible_bits(n, theta, 1.0).satisfied) ++n;
  EXPECT_EQ(n, 139u);
  EXPECT_NEAR(1.0 - qubit_entropy(theta), 0.0072255460121917, 1e-15);
}

TEST(MinNFor, FrozenValues) {
  EXPECT_EQ(min_n_for(1, std::numbers::pi / 3), 2u);
  EXPECT_EQ(min_n_for(1, 0.3), 16u);
  EXPECT_EQ(min_n_for(4, 0.3), 63u);
  EXPECT_EQ(min_n_for(10, 0.6), 41u);
  EXPECT_EQ(min_n_for(3, 1.0), 5u);
}

TEST(MinNFor, ConsistencyAndMonotonicity) {
  std::vector<double> thetas{0.05, 0.1, 0.2, 0.3, 0.6, 1.0, 1.4};
  for (double r : {1.0, 2.0, 3.5, 8.0, 20.0}) {
    std::size_t prev = SIZE_MAX;
    for (double theta : thetas) {
      auto n = min_n_for(r, theta);
      EXPECT_TRUE(inaccessible_bits(n, theta, r).satisfied);
      if (n > 1) {
        EXPECT_FALSE(inaccessible_bits(n - 1, theta, r).satisfied);
      }
      EXPECT_LE(n, prev);
      prev = n;
      EXPECT_LE(min_n_for(2 * r, theta), 2 * n + 1);
      EXPECT_GE(min_n_for(r + 1, theta), n);
    }
  }
}

TEST(MinNFor, Errors) {
  EXPECT_EQ(error_code([] { min_n_for(0.5, 0.3); }), Errc::DomainError);
  EXPECT_EQ(error_code([] { min_n_for(1.0, 1e-300); }), Errc::Unbounded);
}

TEST(Helstrom, SuccessMatchesAngleGridOracle) {
  for (double theta : {0.1, 0.3, 0.6, 1.0}) {
    auto psi0 = encode_bit(0, theta);
    auto psi1 = encode_bit(1, theta);
    double best = 0.0;
    const int steps = 200000;
    for (int k = 0; k <= steps; ++k) {
      double phi = -std::numbers::pi / 2 + std::numbers::pi * k / steps;
      auto e0 = ket({std::cos(phi), std::sin(phi)});
      auto e1 = ket({-std::sin(phi), std::cos(phi)});
      double p = 0.5 * std::norm(inner(e0, psi0)) + 0.5 * std::norm(inner(e1, psi1));
      best = std::max(best, p);
    }
    EXPECT_NEAR(helstrom_success(theta), best, 1e-9) << theta;
    auto m = helstrom_measurement(theta);
    double attained = 0.5 * m.probabilities(psi0)[0] + 0.5 * m.probabilities(psi1)[1];
    EXPECT_NEAR(attained, helstrom_success(theta), 1e-12);
  }
}

TEST(Helstrom, AttackSuccessRate) {
  auto rng = rng_stream(6, "helstrom");
  auto res = helstrom_attack(1, 0.3, 100000, rng);
  EXPECT_TRUE(within_sigma(res.success_rate, helstrom_success(0.3), 100000, 3.0)) << res.success_rate;
}

TEST(Helstrom, AttackLimits) {
  auto rng = rng_stream(7, "helstrom-limits");
  auto same = helstrom_attack(4, kHalfPi, 10000, rng);
  EXPECT_NEAR(same.success_rate, 0.5, 4 * same.success_stderr + 1e-12);
  EXPECT_LT(same.info_bits, 0.01);
  auto far = helstrom_attack(4, 1e-6, 10000, rng);
  EXPECT_GT(far.success_rate, 0.999);
  EXPECT_GT(far.info_bits, 3.9);
}

// Holevo ceiling: empirical info <= bob_entropy + 4 sigma.
TEST(Helstrom, HolevoCeiling) {
  struct Case {
    std::size_t n;
    double theta;
  };
  for (auto c : {Case{1, 0.1}, Case{4, 0.3}, Case{8, 0.3}, Case{16, 0.6}, Case{32, 1.0}, Case{8, 1.4}}) {
    auto rng = rng_stream(8, "holevo");
    auto res = helstrom_attack(c.n, c.theta, 20000, rng);
    EXPECT_LE(res.info_bits, bob_entropy(c.n, c.theta) + 4 * res.info_stderr) << c.n << " " << c.theta;
  }
}

TEST(Helstrom, TooFewTrials) {
  auto rng = rng_stream(0, "x");
  EXPECT_EQ(error_code([&] { helstrom_attack(1, 0.3, 999, rng); }), Errc::DomainError);
}

TEST(SecurityParams, Validation) {
  EXPECT_NO_THROW(SecurityParams::make(0.3, 10, 6));
  EXPECT_THROW(SecurityParams::make(0.3, 10, 10), Error);
  EXPECT_THROW(SecurityParams::make(0.0, 10, 6), Error);
}

}  // namespace
}  // namespace qcommit
