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

// Codebook string commitment: an N-bit string is committed as a single
// state v_index drawn from a codebook whose vectors pairwise overlap by
// less than epsilon.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qcommit/commit_bitwise.hpp"
#include "qcommit/error.hpp"
#include "qcommit/json_io.hpp"
#include "qcommit/qmath.hpp"
#include "qcommit/rng.hpp"

namespace qcommit {

enum class Construction { Random, Simplex };

constexpr std::string_view to_string(Construction c) { return c == Construction::Random ? "random" : "simplex"; }

inline constexpr int kCodebookFormatVersion = 1;

class Codebook {
 public:
  /// Certifies |<v_i|v_j>| < epsilon for all i != j; throws InvalidCodebook.
  Codebook(std::vector<StateVector> vectors, double epsilon, Construction construction,
           std::optional<std::uint64_t> seed = std::nullopt)
      : vectors_(std::move(vectors)), epsilon_(epsilon), construction_(construction), seed_(seed) {
    if (vectors_.size() < 2) throw Error(Errc::InvalidCodebook, "a codebook needs at least two vectors");
    if (!(epsilon_ > 0.0)) throw Error(Errc::InvalidCodebook, "epsilon must be positive");
    dim_ = vectors_.front().dim();
    for (const auto& v : vectors_) {
      if (v.dim() != dim_) throw Error(Errc::InvalidCodebook, "codebook vectors differ in dimension");
    }
    if (!certify()) {
      throw Error(Errc::InvalidCodebook, "pairwise overlap " + std::to_string(max_overlap()) +
                                             " is not below epsilon " + std::to_string(epsilon_));
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t count() const noexcept { return vectors_.size(); }
  double epsilon() const noexcept { return epsilon_; }
  Construction construction() const noexcept { return construction_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }
  std::span<const StateVector> vectors() const noexcept { return vectors_; }
  const StateVector& vector(std::size_t i) const {
    if (i >= vectors_.size()) throw Error(Errc::IndexOutOfRange, "codebook index out of range");
    return vectors_[i];
  }

  /// Committed string length floor(log2 count).
  std::size_t bits() const noexcept { return static_cast<std::size_t>(std::bit_width(vectors_.size()) - 1); }

  /// Packing exponent log2(count) / log2(dim); metadata only.
  double packing_constant() const {
    return dim_ > 1 ? std::log2(static_cast<double>(count())) / std::log2(static_cast<double>(dim_)) : 0.0;
  }

  /// Largest pairwise overlap magnitude (the measured coherence).
  double max_overlap() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < vectors_.size(); ++i)
      for (std::size_t j = i + 1; j < vectors_.size(); ++j)
        worst = std::max(worst, std::abs(inner(vectors_[i], vectors_[j])));
    return worst;
  }

  /// Re-checks the overlap invariant exactly.
  bool certify() const {
    for (std::size_t i = 0; i < vectors_.size(); ++i)
      for (std::size_t j = i + 1; j < vectors_.size(); ++j)
        if (!(std::abs(inner(vectors_[i], vectors_[j])) < epsilon_)) return false;
    return true;
  }

  /// Content fingerprint (FNV-1a over dim and amplitude bits), hex.
  std::string id() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::uint64_t x) {
      for (int k = 0; k < 8; ++k) {
        h ^= (x >> (8 * k)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    };
    mix(dim_);
    for (const auto& v : vectors_)
      for (const auto& a : v.amplitudes()) {
        std::uint64_t re = 0, im = 0;
        double r = a.real(), i = a.imag();
        std::memcpy(&re, &r, sizeof re);
        std::memcpy(&im, &i, sizeof im);
        mix(re);
        mix(im);
      }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
  }

 private:
  std::vector<StateVector> vectors_;
  std::size_t dim_ = 0;
  double epsilon_ = 0.0;
  Construction construction_;
  std::optional<std::uint64_t> seed_;
};

//============================================================================
// Construction
//============================================================================

inline constexpr std::size_t kDefaultPackingAttempts = 100000;
inline constexpr int kDefaultRepairSteps = 200;

namespace detail {

/// Pushes a candidate away from the accepted set by gradient steps on
/// sum_a |<a|v>|^8, projected onto the unit sphere. Stops as soon as every
/// overlap is below epsilon.
inline StateVector repair_candidate(StateVector v, std::span<const StateVector> accepted, double epsilon,
                                    int steps) {
  const std::size_t d = v.dim();
  std::vector<complex_t> overlaps(accepted.size());
  for (int it = 0; it < steps; ++it) {
    double worst = 0.0;
    for (std::size_t a = 0; a < accepted.size(); ++a) {
      overlaps[a] = inner(accepted[a], v);
      worst = std::max(worst, std::abs(overlaps[a]));
    }
    if (worst < epsilon) break;
    std::vector<complex_t> grad(d, 0.0);
    for (std::size_t a = 0; a < accepted.size(); ++a) {
      double mag2 = std::norm(overlaps[a]);
      complex_t w = mag2 * mag2 * mag2 * overlaps[a];  // |c|^6 c
      for (std::size_t k = 0; k < d; ++k) grad[k] += w * accepted[a][k];
    }
    complex_t along = 0.0;
    for (std::size_t k = 0; k < d; ++k) along += std::conj(v[k]) * grad[k];
    double scale = 0.5 / std::max(1e-12, std::pow(worst, 6));
    std::vector<complex_t> next(d);
    for (std::size_t k = 0; k < d; ++k) next[k] = v[k] - scale * (grad[k] - along * v[k]);
    v = ket(std::move(next));
  }
  return v;
}

}  // namespace detail

/// Greedy packing: Haar candidates are accepted iff their overlap with
/// every accepted vector is below epsilon. A rejected candidate first gets
/// up to `repair_steps` gradient steps away from the accepted set; with
/// repair_steps = 0 this is plain rejection sampling. Acceptance is always
/// decided by the exact overlap check.
template <GaussianSource Rng>
Codebook random_codebook(std::size_t dim, std::size_t count, double epsilon, Rng& rng,
                         std::size_t max_attempts = kDefaultPackingAttempts,
                         int repair_steps = kDefaultRepairSteps,
                         std::optional<std::uint64_t> seed_tag = std::nullopt) {
  if (count < 2) throw Error(Errc::DomainError, "codebook count must be at least 2");
  if (dim < 1) throw Error(Errc::DomainError, "codebook dimension must be at least 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(Errc::DomainError, "epsilon must lie in (0, 1]");
  std::vector<StateVector> accepted;
  accepted.reserve(count);
  std::size_t attempts = 0;
  auto fits = [&](const StateVector& v) {
    for (const auto& a : accepted)
      if (!(std::abs(inner(a, v)) < epsilon)) return false;
    return true;
  };
  while (accepted.size() < count) {
    if (attempts >= max_attempts) {
      throw Error(Errc::PackingFailure, "placed " + std::to_string(accepted.size()) + " of " +
                                            std::to_string(count) + " vectors in " +
                                            std::to_string(attempts) + " attempts");
    }
    ++attempts;
    StateVector v = haar_state(dim, rng);
    if (!fits(v) && repair_steps > 0) v = detail::repair_candidate(std::move(v), accepted, epsilon, repair_steps);
    if (fits(v)) accepted.push_back(std::move(v));
  }
  return Codebook(std::move(accepted), epsilon, Construction::Random, seed_tag);
}

/// Seeded convenience form; records the seed in the codebook metadata.
inline Codebook random_codebook_seeded(std::size_t dim, std::size_t count, double epsilon, std::uint64_t seed,
                                       std::size_t max_attempts = kDefaultPackingAttempts,
                                       int repair_steps = kDefaultRepairSteps) {
  auto rng = rng_stream(seed, "codebook");
  return random_codebook(dim, count, epsilon, rng, max_attempts, repair_steps, seed);
}

/// d+1 real unit vectors in R^d with pairwise inner product -1/d.
///
/// v_i = a e_i + b 1 for i < d and v_d = -1/sqrt(d) 1, with
/// a = sqrt((d+1)/d) and b = (1/sqrt(d) - a)/d.
inline Codebook simplex_codebook(std::size_t d) {
  if (d < 2) throw Error(Errc::DomainError, "simplex codebook needs d >= 2");
  const double dd = static_cast<double>(d);
  const double a = std::sqrt((dd + 1.0) / dd);
  const double b = (1.0 / std::sqrt(dd) - a) / dd;
  std::vector<StateVector> vs;
  vs.reserve(d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<complex_t> amps(d, b);
    amps[i] += a;
    vs.push_back(ket(std::move(amps)));
  }
  vs.push_back(ket(std::vector<complex_t>(d, -1.0 / std::sqrt(dd))));
  return Codebook(std::move(vs), 1.0 / dd + 1e-12, Construction::Simplex);
}

//============================================================================
// Protocol
//============================================================================

struct CodebookCommitment {
  StateVector state;
  std::string codebook_id;
};

inline CodebookCommitment commit_string(const Codebook& codebook, std::size_t index) {
  return {codebook.vector(index), codebook.id()};
}

/// Projective test {P_claimed, 1 - P_claimed}; accept on eigenvalue 1.
template <UniformSource Rng>
UnveilVerdict verify_unveil(const Codebook& codebook, const CodebookCommitment& held, std::size_t claimed,
                            Rng& rng) {
  const auto& v = codebook.vector(claimed);
  if (held.state.dim() != codebook.dim()) throw Error(Errc::DimMismatch, "commitment dimension differs from codebook");
  if (!held.codebook_id.empty() && held.codebook_id != codebook.id()) {
    throw Error(Errc::DomainError, "commitment was made against a different codebook");
  }
  if (born_sample(held.state, Measurement::test(v), rng) == 0) return UnveilVerdict::accept();
  return UnveilVerdict::reject(0);
}

namespace detail {

inline void check_targets(const Codebook& codebook, std::span<const std::size_t> targets) {
  if (targets.empty()) throw Error(Errc::DomainError, "target set must be nonempty");
  std::set<std::size_t> seen;
  for (auto t : targets) {
    if (t >= codebook.count()) throw Error(Errc::IndexOutOfRange, "target index out of range");
    if (!seen.insert(t).second) throw Error(Errc::DuplicateTargets, "target indices must be distinct");
  }
}

}  // namespace detail

/// Q = sum_{i in targets} |v_i><v_i|
inline HermitianOperator cheat_operator(const Codebook& codebook, std::span<const std::size_t> targets) {
  detail::check_targets(codebook, targets);
  Matrix q(codebook.dim());
  for (auto t : targets) q += Matrix::outer(codebook.vector(t));
  return HermitianOperator(std::move(q));
}

/// G_jk = <v_{i_j}|v_{i_k}>
inline HermitianOperator gram_matrix(const Codebook& codebook, std::span<const std::size_t> targets) {
  detail::check_targets(codebook, targets);
  const std::size_t r = targets.size();
  Matrix g(r);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t k = 0; k < r; ++k) g(j, k) = inner(codebook.vector(targets[j]), codebook.vector(targets[k]));
  return HermitianOperator(std::move(g));
}

/// Multistring bound 1 + (r - 1) epsilon.
inline double multistring_bound(std::size_t r, double epsilon) {
  if (r < 1) throw Error(Errc::DomainError, "r must be at least 1");
  return 1.0 + static_cast<double>(r - 1) * epsilon;
}

struct CheatReport {
  std::vector<std::size_t> target_indices;
  StateVector cheat_state;
  std::vector<double> success_probs;  // p_i = <cheat|P_i|cheat>
  double total = 0.0;                 // sum p_i = lambda_max(Q)
  double bound = 0.0;                 // 1 + (r - 1) epsilon
};

/// Alice's best state for keeping every target string open: the top
/// eigenvector of Q.
inline CheatReport optimal_multistring_cheat(const Codebook& codebook, std::span<const std::size_t> targets) {
  auto q = cheat_operator(codebook, targets);
  auto eig = hermitian_eigen(q);
  CheatReport rep{std::vector<std::size_t>(targets.begin(), targets.end()), eig.eigenvectors.front(), {}, 0.0,
                  multistring_bound(targets.size(), codebook.epsilon())};
  for (auto t : targets) {
    double p = std::norm(inner(codebook.vector(t), rep.cheat_state));
    rep.success_probs.push_back(p);
    rep.total += p;
  }
  return rep;
}

inline constexpr std::size_t kMaxInfoReportDim = 256;

struct BobInfoReport {
  double holevo = 0.0;           // S of the uniform codebook mixture
  double dim_bound = 0.0;        // log2 d
  std::size_t committed_bits = 0;
};

inline BobInfoReport bob_info_report(const Codebook& codebook) {
  if (codebook.dim() > kMaxInfoReportDim) throw Error(Errc::TooLarge, "exact Holevo quantity limited to d <= 256");
  auto rho = DensityMatrix::uniform_mixture(codebook.vectors());
  return {von_neumann_entropy(rho), std::log2(static_cast<double>(codebook.dim())), codebook.bits()};
}

//============================================================================
// JSON
//============================================================================

inline json to_json(const Codebook& cb) {
  json vectors = json::array();
  for (const auto& v : cb.vectors()) {
    json amps = json::array();
    for (const auto& a : v.amplitudes()) amps.push_back(json::array({a.real(), a.imag()}));
    vectors.push_back(std::move(amps));
  }
  json j;
  j["version"] = kCodebookFormatVersion;
  j["dim"] = cb.dim();
  j["epsilon"] = cb.epsilon();
  j["construction"] = std::string(to_string(cb.construction()));
  j["seed"] = cb.seed() ? json(*cb.seed()) : json(nullptr);
  j["vectors"] = std::move(vectors);
  return j;
}

/// Parses and re-certifies. Format problems raise DeserializeError; a
/// well-formed document that violates the overlap bound raises
/// InvalidCodebook.
inline Codebook codebook_from_json(const json& j) {
  std::vector<StateVector> vectors;
  double epsilon = 0.0;
  Construction construction = Construction::Random;
  std::optional<std::uint64_t> seed;
  try {
    if (j.at("version").get<int>() != kCodebookFormatVersion) {
      throw Error(Errc::DeserializeError, "unsupported codebook format version");
    }
    auto dim = j.at("dim").get<std::size_t>();
    epsilon = j.at("epsilon").get<double>();
    auto c = j.at("construction").get<std::string>();
    if (c == "random") construction = Construction::Random;
    else if (c == "simplex") construction = Construction::Simplex;
    else throw Error(Errc::DeserializeError, "unknown construction '" + c + "'");
    if (j.contains("seed") && !j.at("seed").is_null()) seed = j.at("seed").get<std::uint64_t>();
    for (const auto& jv : j.at("vectors")) {
      std::vector<complex_t> amps;
      for (const auto& pair : jv) {
        if (!pair.is_array() || pair.size() != 2) throw Error(Errc::DeserializeError, "amplitude must be [re, im]");
        amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
      }
      if (amps.size() != dim) throw Error(Errc::DeserializeError, "vector length differs from dim");
      try {
        vectors.push_back(StateVector::from_normalized(std::move(amps)));
      } catch (const Error& e) {
        throw Error(Errc::InvalidCodebook, e.what());
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::DeserializeError, e.what());
  }
  return Codebook(std::move(vectors), epsilon, construction, seed);
}

inline void write_codebook(const Codebook& cb, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IOError, "cannot open " + path + " for writing");
  out << dump_json(to_json(cb)) << '\n';
  if (!out) throw Error(Errc::IOError, "write to " + path + " failed");
}

inline Codebook read_codebook(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IOError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::DeserializeError, e.what());
  }
  return codebook_from_json(j);
}

}  // namespace qcommit
