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

#include "qcommit/codebook.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "qcommit/rng.hpp"
#include "test_util.hpp"

namespace qcommit {
namespace {

using testing::error_code;
using testing::within_sigma;

const Codebook& packed_16_32() {
  static const Codebook cb = random_codebook_seeded(16, 32, 0.25, 2026);
  return cb;
}

TEST(RandomCodebook, VacuousBound) {
  auto cb = random_codebook_seeded(2, 2, 1.0, 1);
  EXPECT_EQ(cb.count(), 2u);
  EXPECT_TRUE(cb.certify());
  EXPECT_EQ(cb.bits(), 1u);
}

TEST(RandomCodebook, SixteenByThirtyTwo) {
  const auto& cb = packed_16_32();
  EXPECT_EQ(cb.dim(), 16u);
  EXPECT_EQ(cb.count(), 32u);
  EXPECT_EQ(cb.bits(), 5u);
  EXPECT_TRUE(cb.certify());
  EXPECT_LT(cb.max_overlap(), 0.25);
  for (std::size_t i = 0; i < cb.count(); ++i)
    for (std::size_t j = i + 1; j < cb.count(); ++j) EXPECT_LT(std::abs(inner(cb.vector(i), cb.vector(j))), 0.25);
}

TEST(RandomCodebook, PackingFailureForFourQubitStates) {
  EXPECT_EQ(error_code([] { random_codebook_seeded(2, 4, 0.1, 1, 2000, 20); }), Errc::PackingFailure);
}

TEST(RandomCodebook, DomainErrors) {
  EXPECT_EQ(error_code([] { random_codebook_seeded(4, 1, 0.5, 1); }), Errc::DomainError);
  EXPECT_EQ(error_code([] { random_codebook_seeded(4, 3, 0.0, 1); }), Errc::DomainError);
}

TEST(RandomCodebook, SeedReproducesBitForBit) {
  auto a = random_codebook_seeded(8, 12, 0.5, 99);
  auto b = random_codebook_seeded(8, 12, 0.5, 99);
  ASSERT_EQ(a.count(), b.count());
  for (std::size_t i = 0; i < a.count(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) ASSERT_EQ(a.vector(i)[k], b.vector(i)[k]);
  EXPECT_EQ(a.id(), b.id());
  EXPECT_NE(a.id(), random_codebook_seeded(8, 12, 0.5, 100).id());
}

TEST(RandomCodebook, PureGreedyWithoutRepair) {
  auto cb = random_codebook_seeded(8, 10, 0.6, 5, 100000, 0);
  EXPECT_TRUE(cb.certify());
}

TEST(Codebook, RejectsInvalidInput) {
  std::vector<StateVector> one{basis_state(2, 0)};
  EXPECT_EQ(error_code([&] { Codebook(one, 0.5, Construction::Random); }), Errc::InvalidCodebook);
  std::vector<StateVector> close{basis_state(2, 0), ket({1.0, 0.1})};
  EXPECT_EQ(error_code([&] { Codebook(close, 0.5, Construction::Random); }), Errc::InvalidCodebook);
}

TEST(SimplexCodebook, SmallCases) {
  for (std::size_t d : {2u, 3u}) {
    auto cb = simplex_codebook(d);
    ASSERT_EQ(cb.count(), d + 1);
    for (std::size_t i = 0; i < cb.count(); ++i)
      for (std::size_t j = 0; j < cb.count(); ++j) {
        double expected = i == j ? 1.0 : -1.0 / static_cast<double>(d);
        EXPECT_NEAR(inner(cb.vector(i), cb.vector(j)).real(), expected, 1e-14);
      }
    EXPECT_DOUBLE_EQ(cb.epsilon(), 1.0 / static_cast<double>(d) + 1e-12);
  }
}

// Gram spectrum of a regular simplex: {0, (d+1)/d x d}.
TEST(SimplexCodebook, GramSpectrum) {
  for (std::size_t d : {2u, 3u, 5u, 8u, 16u}) {
    auto cb = simplex_codebook(d);
    std::vector<std::size_t> all(d + 1);
    for (std::size_t i = 0; i <= d; ++i) all[i] = i;
    auto eig = hermitian_eigen(gram_matrix(cb, all));
    double top = (static_cast<double>(d) + 1.0) / static_cast<double>(d);
    for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(eig.eigenvalues[k], top, 1e-9);
    EXPECT_NEAR(eig.eigenvalues[d], 0.0, 1e-9);
  }
}

TEST(CommitString, Examples) {
  auto cb = simplex_codebook(3);
  auto c = commit_string(cb, 0);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(c.state[k], cb.vector(0)[k]);
  EXPECT_EQ(c.codebook_id, cb.id());
  EXPECT_EQ(error_code([&] { commit_string(cb, cb.count()); }), Errc::IndexOutOfRange);
}

TEST(VerifyUnveil, HonestAlwaysAccepted) {
  const auto& cb = packed_16_32();
  auto rng = rng_stream(1, "codebook-verify");
  for (int t = 0; t < 10000; ++t) {
    auto idx = static_cast<std::size_t>(rng.below(cb.count()));
    ASSERT_TRUE(verify_unveil(cb, commit_string(cb, idx), idx, rng).accepted);
  }
}

TEST(VerifyUnveil, WrongIndexOnRandomCodebook) {
  const auto& cb = packed_16_32();
  auto rng = rng_stream(2, "codebook-wrong");
  auto c = commit_string(cb, 3);
  double p = std::norm(inner(cb.vector(7), cb.vector(3)));
  EXPECT_LT(p, 0.25 * 0.25);
  const std::size_t n = 100000;
  std::size_t accepted = 0;
  for (std::size_t t = 0; t < n; ++t) accepted += verify_unveil(cb, c, 7, rng).accepted;
  EXPECT_TRUE(within_sigma(static_cast<double>(accepted) / n, p, n, 3.0)) << accepted << " vs p " << p;
}

TEST(VerifyUnveil, WrongIndexOnSimplexIsOneQuarter) {
  auto cb = simplex_codebook(2);
  auto rng = rng_stream(3, "simplex-wrong");
  auto c = commit_string(cb, 0);
  const std::size_t n = 100000;
  std::size_t accepted = 0;
  for (std::size_t t = 0; t < n; ++t) accepted += verify_unveil(cb, c, 2, rng).accepted;
  EXPECT_TRUE(within_sigma(static_cast<double>(accepted) / n, 0.25, n, 3.0)) << accepted;
}

TEST(VerifyUnveil, IndexOutOfRange) {
  auto cb = simplex_codebook(2);
  auto rng = rng_stream(0, "x");
  EXPECT_EQ(error_code([&] { verify_unveil(cb, commit_string(cb, 0), 3, rng); }), Errc::IndexOutOfRange);
}

TEST(CheatOperator, Examples) {
  const auto& cb = packed_16_32();
  std::vector<std::size_t> one{4};
  auto q1 = cheat_operator(cb, one);
  EXPECT_NEAR(max_eigenvalue(q1), 1.0, 1e-9);
  std::vector<std::size_t> two{1, 9};
  double s = std::abs(inner(cb.vector(1), cb.vector(9)));
  EXPECT_NEAR(max_eigenvalue(cheat_operator(cb, two)), 1.0 + s, 1e-9);
  std::vector<std::size_t> many{0, 3, 5, 8, 13, 21};
  EXPECT_NEAR(cheat_operator(cb, many).trace(), 6.0, 1e-9);
}

TEST(CheatOperator, TargetErrors) {
  auto cb = simplex_codebook(3);
  std::vector<std::size_t> dup{1, 1};
  EXPECT_EQ(error_code([&] { cheat_operator(cb, dup); }), Errc::DuplicateTargets);
  EXPECT_EQ(error_code([&] { gram_matrix(cb, dup); }), Errc::DuplicateTargets);
  std::vector<std::size_t> out{0, 4};
  EXPECT_EQ(error_code([&] { cheat_operator(cb, out); }), Errc::IndexOutOfRange);
}

TEST(GramMatrix, Examples) {
  const auto& cb = packed_16_32();
  std::vector<std::size_t> one{2};
  auto g1 = gram_matrix(cb, one);
  EXPECT_NEAR(g1(0, 0).real(), 1.0, 1e-12);
  std::vector<std::size_t> two{2, 11};
  double s = std::abs(inner(cb.vector(2), cb.vector(11)));
  auto eig = hermitian_eigen(gram_matrix(cb, two));
  EXPECT_NEAR(eig.eigenvalues[0], 1.0 + s, 1e-12);
  EXPECT_NEAR(eig.eigenvalues[1], 1.0 - s, 1e-12);
}

TEST(GramMatrix, GershgorinBound) {
  const auto& cb = packed_16_32();
  auto rng = rng_stream(4, "gershgorin");
  for (int t = 0; t < 20; ++t) {
    auto targets = rng.choose(cb.count(), 2 + rng.below(10));
    auto g = gram_matrix(cb, targets);
    double off = 0.0;
    for (std::size_t j = 0; j < targets.size(); ++j)
      for (std::size_t k = 0; k < targets.size(); ++k)
        if (j != k) off = std::max(off, std::abs(g(j, k)));
    EXPECT_LE(max_eigenvalue(g), 1.0 + (targets.size() - 1) * off + 1e-9);
  }
}

TEST(MultistringCheat, SingleTargetIsHonest) {
  const auto& cb = packed_16_32();
  std::vector<std::size_t> one{0};
  auto rep = optimal_multistring_cheat(cb, one);
  EXPECT_NEAR(rep.total, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(rep.bound, 1.0);
}

TEST(MultistringCheat, PairMatchesOverlap) {
  const auto& cb = packed_16_32();
  std::vector<std::size_t> two{5, 17};
  double s = std::abs(inner(cb.vector(5), cb.vector(17)));
  auto rep = optimal_multistring_cheat(cb, two);
  EXPECT_NEAR(rep.total, 1.0 + s, 1e-9);
  EXPECT_LE(rep.total, 1.0 + cb.epsilon());
}

// 50 random target sets of size 8 on a d=16, eps=0.25 codebook.
TEST(MultistringCheat, CeilingOnRandomTargets) {
  const auto& cb = packed_16_32();
  auto rng = rng_stream(5, "ceiling");
  for (int t = 0; t < 50; ++t) {
    auto targets = rng.choose(cb.count(), 8);
    auto rep = optimal_multistring_cheat(cb, targets);
    EXPECT_LE(rep.total, 2.75 + 1e-9);
    EXPECT_LE(rep.total, rep.bound + 1e-9);
    double sum = 0.0;
    for (double p : rep.success_probs) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0 + 1e-12);
      sum += p;
    }
    EXPECT_NEAR(sum, rep.total, 1e-9);
    EXPECT_NEAR(rep.total, max_eigenvalue(cheat_operator(cb, targets)), 1e-9);
  }
}

// Property: Haar cheat states never beat the top eigenvalue of Q.
TEST(MultistringCheat, HaarStatesBelowTopEigenvalue) {
  struct Book {
    Codebook cb;
  };
  std::vector<Book> books{{packed_16_32()}, {simplex_codebook(4)}, {random_codebook_seeded(6, 12, 0.7, 8)}};
  auto rng = rng_stream(6, "haar-multistring");
  for (const auto& b : books) {
    for (int set = 0; set < 5; ++set) {
      auto r = 1 + rng.below(std::min<std::size_t>(b.cb.count(), 6));
      auto targets = rng.choose(b.cb.count(), r);
      auto q = cheat_operator(b.cb, targets);
      double top = max_eigenvalue(q);
      EXPECT_LE(top, multistring_bound(targets.size(), b.cb.epsilon()) + 1e-9);
      for (int t = 0; t < 1000; ++t) {
        auto s = haar_state(b.cb.dim(), rng);
        ASSERT_LE(q.expectation(s), top + 1e-9);
      }
    }
  }
}

// Property: nonzero spectrum of Q equals the Gram spectrum.
TEST(MultistringCheat, GramSpectralEquivalence) {
  const auto& cb = packed_16_32();
  auto rng = rng_stream(7, "spectral");
  for (int t = 0; t < 30; ++t) {
    auto r = 1 + rng.below(12);
    auto targets = rng.choose(cb.count(), r);
    auto gq = hermitian_eigen(cheat_operator(cb, targets)).eigenvalues;
    auto gg = hermitian_eigen(gram_matrix(cb, targets)).eigenvalues;
    ASSERT_GT(gg.back(), 1e-6);
    for (std::size_t k = 0; k < r; ++k) EXPECT_NEAR(gq[k], gg[k], 1e-9);
    for (std::size_t k = r; k < gq.size(); ++k) EXPECT_NEAR(gq[k], 0.0, 1e-9);
  }
}

TEST(MultistringBound, Values) {
  EXPECT_DOUBLE_EQ(multistring_bound(1, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(multistring_bound(8, 0.25), 2.75);
  EXPECT_EQ(error_code([] { multistring_bound(0, 0.3); }), Errc::DomainError);
}

TEST(BobInfoReport, SimplexQubit) {
  auto rep = bob_info_report(simplex_codebook(2));
  EXPECT_LE(rep.holevo, 1.0 + 1e-9);
  EXPECT_NEAR(rep.holevo, 1.0, 1e-9);
  EXPECT_EQ(rep.committed_bits, 1u);
  EXPECT_DOUBLE_EQ(rep.dim_bound, 1.0);
}

TEST(BobInfoReport, HidingGap) {
  auto cb = random_codebook_seeded(16, 64, 0.5, 7);
  auto rep = bob_info_report(cb);
  EXPECT_EQ(rep.committed_bits, 6u);
  EXPECT_LE(rep.holevo, 4.0 + 1e-9);
  EXPECT_LT(rep.dim_bound, static_cast<double>(rep.committed_bits));
  auto simplex = bob_info_report(simplex_codebook(8));
  EXPECT_LE(simplex.holevo, simplex.dim_bound + 1e-9);
}

TEST(BobInfoReport, TooLarge) {
  auto cb = random_codebook_seeded(257, 2, 1.0, 1);
  EXPECT_EQ(error_code([&] { bob_info_report(cb); }), Errc::TooLarge);
}

TEST(CodebookJson, RoundTripRecertifies) {
  const auto& cb = packed_16_32();
  auto back = codebook_from_json(to_json(cb));
  EXPECT_EQ(back.id(), cb.id());
  EXPECT_EQ(back.seed(), cb.seed());
  EXPECT_EQ(back.construction(), Construction::Random);
  EXPECT_TRUE(back.certify());
  auto path = (std::filesystem::temp_directory_path() / "qcommit_codebook_test.json").string();
  write_codebook(simplex_codebook(3), path);
  auto simplex = read_codebook(path);
  EXPECT_EQ(simplex.id(), simplex_codebook(3).id());
  EXPECT_EQ(simplex.construction(), Construction::Simplex);
  std::filesystem::remove(path);
}

TEST(CodebookJson, Rejections) {
  auto j = to_json(simplex_codebook(3));
  auto tampered = j;
  tampered["epsilon"] = 0.2;
  EXPECT_EQ(error_code([&] { codebook_from_json(tampered); }), Errc::InvalidCodebook);
  auto bad_version = j;
  bad_version["version"] = 99;
  EXPECT_EQ(error_code([&] { codebook_from_json(bad_version); }), Errc::DeserializeError);
  auto missing = j;
  missing.erase("vectors");
  EXPECT_EQ(error_code([&] { codebook_from_json(missing); }), Errc::DeserializeError);
  EXPECT_EQ(error_code([] { read_codebook("/nonexistent/qcommit.json"); }), Errc::IOError);
}

}  // namespace
}  // namespace qcommit
