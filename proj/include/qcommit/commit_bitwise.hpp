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

// Bit-wise string commitment: each bit a_i travels as one qubit psi_{a_i},
// with psi_0 = |0> and psi_1 = sin(theta)|0> + cos(theta)|1>.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcommit/error.hpp"
#include "qcommit/qmath.hpp"

namespace qcommit {

using BitString = std::vector<std::uint8_t>;

inline BitString parse_bits(std::string_view text) {
  BitString bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw Error(Errc::DomainError, "bit string may only contain '0' and '1'");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return bits;
}

inline std::string format_bits(const BitString& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline void check_theta(double theta) {
  if (!(theta > 0.0 && theta <= std::numbers::pi / 2)) {
    throw Error(Errc::DomainError, "theta must lie in (0, pi/2]");
  }
}

/// Security parameters of the bit-wise protocol.
struct SecurityParams {
  double theta = 0.0;
  double delta = 0.0;  // sin^2 theta
  std::size_t n = 0;   // committed bits
  std::size_t m = 0;   // bits Bob is allowed to learn
  std::size_t r = 0;   // n - m

  static SecurityParams make(double theta, std::size_t n, std::size_t m) {
    check_theta(theta);
    if (n < 1) throw Error(Errc::DomainError, "n must be at least 1");
    if (m >= n) throw Error(Errc::DomainError, "m must be smaller than n");
    double s = std::sin(theta);
    return SecurityParams{theta, s * s, n, m, n - m};
  }
};

struct BitwiseCommitment {
  std::vector<StateVector> qubits;
  std::size_t n() const { return qubits.size(); }
};

struct UnveilVerdict {
  bool accepted = true;
  std::optional<std::size_t> failing_index;  // set iff !accepted

  static UnveilVerdict accept() { return {}; }
  static UnveilVerdict reject(std::size_t index) { return {false, index}; }
};

inline StateVector encode_bit(int bit, double theta) {
  check_theta(theta);
  if (bit == 0) return basis_state(2, 0);
  if (bit != 1) throw Error(Errc::DomainError, "bit must be 0 or 1");
  std::vector<complex_t> amps{std::sin(theta), std::cos(theta)};
  return ket(std::move(amps));
}

inline BitwiseCommitment commit(const BitString& bits, const SecurityParams& params) {
  if (bits.size() != params.n) throw Error(Errc::LengthMismatch, "bit string length differs from n");
  BitwiseCommitment c;
  c.qubits.reserve(bits.size());
  for (auto b : bits) c.qubits.push_back(encode_bit(b, params.theta));
  return c;
}

/// Tests each held qubit against the claimed encoding, in order, and stops
/// at the first eigenvalue-0 outcome.
template <UniformSource Rng>
UnveilVerdict verify_unveil(const BitwiseCommitment& held, const BitString& claimed, double theta, Rng& rng) {
  if (claimed.size() != held.n()) throw Error(Errc::LengthMismatch, "claimed string length differs from commitment");
  const Measurement test0 = Measurement::test(encode_bit(0, theta));
  const Measurement test1 = Measurement::test(encode_bit(1, theta));
  for (std::size_t i = 0; i < claimed.size(); ++i) {
    const Measurement& m = claimed[i] ? test1 : test0;
    if (born_sample(held.qubits[i], m, rng) != 0) return UnveilVerdict::reject(i);
  }
  return UnveilVerdict::accept();
}

struct BitCheat {
  StateVector cheat_state;
  double p0;
  double p1;
};

/// Alice's best single-qubit state for keeping both reveals open: the top
/// eigenvector of P_0 + P_1.
inline BitCheat optimal_bit_cheat(double theta) {
  auto psi0 = encode_bit(0, theta);
  auto psi1 = encode_bit(1, theta);
  auto p0 = projector(psi0);
  auto p1 = projector(psi1);
  auto eig = hermitian_eigen(p0 + p1);
  const auto& top = eig.eigenvectors.front();
  return {top, p0.expectation(top), p1.expectation(top)};
}

/// max over rho of p0 + p1, closed form.
inline double cheat_bound(double theta) {
  check_theta(theta);
  return 1.0 + std::sin(theta);
}

/// rho_1 = (|psi0><psi0| + |psi1><psi1|)/2, the single-qubit ensemble.
inline DensityMatrix single_qubit_ensemble(double theta) {
  std::vector<StateVector> states{encode_bit(0, theta), encode_bit(1, theta)};
  return DensityMatrix::uniform_mixture(states);
}

inline constexpr std::size_t kMaxEnsembleQubits = 10;

/// Bob's view of a uniformly random n-bit commitment. The uniform mixture
/// over all 2^n product encodings factorizes into rho_1^{(x) n}.
inline DensityMatrix bob_ensemble(std::size_t n, double theta) {
  if (n < 1) throw Error(Errc::DomainError, "n must be at least 1");
  if (n > kMaxEnsembleQubits) throw Error(Errc::TooLarge, "exact ensemble is limited to 10 qubits");
  return tensor_power(single_qubit_ensemble(theta), n);
}

/// Per-qubit entropy H2((1 + sin theta)/2).
inline double qubit_entropy(double theta) {
  check_theta(theta);
  return binary_entropy((1.0 + std::sin(theta)) / 2.0);
}

inline double bob_entropy(std::size_t n, double theta) {
  if (n < 1) throw Error(Errc::DomainError, "n must be at least 1");
  return static_cast<double>(n) * qubit_entropy(theta);
}

struct InaccessibleBits {
  double gap;  // n - S(rho)
  bool satisfied;
};

inline InaccessibleBits inaccessible_bits(std::size_t n, double theta, double r) {
  if (r < 0.0) throw Error(Errc::DomainError, "r must be nonnegative");
  double gap = static_cast<double>(n) - bob_entropy(n, theta);
  return {gap, gap > r};
}

/// Smallest n with n (1 - H2((1 + sin theta)/2)) > r.
inline std::size_t min_n_for(double r, double theta) {
  if (!(r >= 1.0)) throw Error(Errc::DomainError, "r must be at least 1");
  double per_qubit = 1.0 - qubit_entropy(theta);
  if (!(per_qubit > 0.0)) throw Error(Errc::Unbounded, "per-qubit gap underflows to zero");
  double estimate = std::floor(r / per_qubit);
  if (!(estimate < 0x1.0p52)) throw Error(Errc::Unbounded, "required n exceeds representable range");
  auto satisfied = [&](std::size_t n) { return static_cast<double>(n) * per_qubit > r; };
  auto n = static_cast<std::size_t>(estimate);
  if (n == 0) n = 1;
  // settle rounding at the boundary
  while (n > 1 && satisfied(n - 1)) --n;
  while (!satisfied(n)) ++n;
  return n;
}

/// Helstrom measurement for the pair (psi_0, psi_1): outcome k guesses bit k.
inline Measurement helstrom_measurement(double theta) {
  check_theta(theta);
  // psi_0 sits at angle 0 and psi_1 at alpha = pi/2 - theta in the real
  // plane; the optimal basis is symmetric about alpha/2.
  double alpha = std::numbers::pi / 2 - theta;
  double phi = alpha / 2 - std::numbers::pi / 4;
  std::vector<StateVector> basis{ket({std::cos(phi), std::sin(phi)}),
                                 ket({-std::sin(phi), std::cos(phi)})};
  return Measurement::in_basis(basis);
}

inline double helstrom_success(double theta) {
  check_theta(theta);
  return (1.0 + std::cos(theta)) / 2.0;
}

struct HelstromResult {
  std::size_t trials = 0;
  std::size_t qubits = 0;       // n
  std::size_t successes = 0;    // correctly guessed qubits, over all trials
  double success_rate = 0.0;
  double info_bits = 0.0;       // n (1 - H2(success_rate))
  double success_stderr = 0.0;
  double info_stderr = 0.0;     // delta-method propagation of success_stderr
};

/// Bob guesses every committed bit with the per-qubit Helstrom measurement.
template <UniformSource Rng>
HelstromResult helstrom_attack(std::size_t n, double theta, std::size_t trials, Rng& rng) {
  if (trials < 1000) throw Error(Errc::DomainError, "helstrom_attack needs at least 1000 trials");
  if (n < 1) throw Error(Errc::DomainError, "n must be at least 1");
  const Measurement guess = helstrom_measurement(theta);
  const StateVector psi[2] = {encode_bit(0, theta), encode_bit(1, theta)};
  HelstromResult out;
  out.trials = trials;
  out.qubits = n;
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      int bit = rng.uniform() < 0.5 ? 0 : 1;
      if (born_sample(psi[bit], guess, rng) == static_cast<std::size_t>(bit)) ++out.successes;
    }
  }
  double draws = static_cast<double>(n * trials);
  double p = static_cast<double>(out.successes) / draws;
  out.success_rate = p;
  out.info_bits = static_cast<double>(n) * (1.0 - binary_entropy(p));
  out.success_stderr = std::sqrt(p * (1.0 - p) / draws);
  double slope = (p > 0.0 && p < 1.0) ? std::abs(std::log2(p / (1.0 - p))) : 0.0;
  out.info_stderr = static_cast<double>(n) * slope * out.success_stderr;
  return out;
}

}  // namespace qcommit
