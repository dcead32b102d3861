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

// Dense small-dimension quantum linear algebra: state vectors, Hermitian
// operators, density matrices, a cyclic Jacobi eigensolver, entropies, and
// Born-rule sampling.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcommit/error.hpp"

namespace qcommit {

using complex_t = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kNegativeEigenTolerance = 1e-10;
inline constexpr double kCompletenessTolerance = 1e-9;
inline constexpr double kJacobiThreshold = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr std::size_t kMaxEigenDim = 4096;

/// Anything that yields uniform doubles in [0, 1).
template <class R>
concept UniformSource = requires(R& r) {
  { r.uniform() } -> std::convertible_to<double>;
};

/// Anything that additionally yields standard normal variates.
template <class R>
concept GaussianSource = UniformSource<R> && requires(R& r) {
  { r.normal() } -> std::convertible_to<double>;
};

//============================================================================
// StateVector
//============================================================================

/// Unit-norm complex amplitude vector.
class StateVector {
 public:
  /// Wraps amplitudes that are already normalized (within 1e-12).
  static StateVector from_normalized(std::vector<complex_t> amplitudes) {
    if (amplitudes.empty()) throw Error(Errc::DomainError, "state vector needs dim >= 1");
    double n = norm_of(amplitudes);
    if (std::abs(n - 1.0) > kNormTolerance) {
      throw Error(Errc::DomainError, "amplitudes are not unit norm (norm " + std::to_string(n) + ")");
    }
    return StateVector(std::move(amplitudes));
  }

  std::size_t dim() const noexcept { return amps_.size(); }
  const complex_t& operator[](std::size_t i) const { return amps_[i]; }
  std::span<const complex_t> amplitudes() const noexcept { return amps_; }
  double norm() const { return norm_of(amps_); }

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  explicit StateVector(std::vector<complex_t> amps) : amps_(std::move(amps)) {}

  static double norm_of(std::span<const complex_t> v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return std::sqrt(s);
  }

  friend StateVector ket(std::vector<complex_t> amplitudes);

  std::vector<complex_t> amps_;
};

/// Normalizes `amplitudes` into a state.
inline StateVector ket(std::vector<complex_t> amplitudes) {
  if (amplitudes.empty()) throw Error(Errc::DomainError, "state vector needs dim >= 1");
  double n = StateVector::norm_of(amplitudes);
  if (!(n >= 1e-300) || !std::isfinite(n)) throw Error(Errc::ZeroVector, "cannot normalize a zero vector");
  for (auto& a : amplitudes) a /= n;
  return StateVector(std::move(amplitudes));
}

inline StateVector basis_state(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(Errc::IndexOutOfRange, "basis index out of range");
  std::vector<complex_t> amps(dim, 0.0);
  amps[index] = 1.0;
  return StateVector::from_normalized(std::move(amps));
}

/// <a|b>, conjugate-linear in the first argument.
inline complex_t inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw Error(Errc::DimMismatch, "inner product of different dimensions");
  complex_t s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// Kronecker product; the first factor is the slow index.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<complex_t> out;
  out.reserve(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out.push_back(a[i] * b[j]);
  // product of unit vectors; renormalize away rounding
  return ket(std::move(out));
}

/// Haar-random pure state (normalized complex Gaussian vector).
template <GaussianSource Rng>
StateVector haar_state(std::size_t dim, Rng& rng) {
  std::vector<complex_t> amps(dim);
  for (auto& a : amps) {
    double re = rng.normal();
    double im = rng.normal();
    a = complex_t(re, im);
  }
  return ket(std::move(amps));
}

//============================================================================
// Matrix
//============================================================================

/// Square dense complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}
  Matrix(std::size_t dim, std::vector<complex_t> data) : dim_(dim), data_(std::move(data)) {
    if (data_.size() != dim_ * dim_) throw Error(Errc::DimMismatch, "matrix data size is not dim*dim");
  }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> diag) {
    Matrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  /// |v><v|
  static Matrix outer(const StateVector& v) {
    Matrix m(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i)
      for (std::size_t j = 0; j < v.dim(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  complex_t& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const complex_t& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::span<const complex_t> data() const noexcept { return data_; }

  complex_t trace() const {
    complex_t t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  Matrix adjoint() const {
    Matrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
  }

  /// Largest entrywise deviation from Hermiticity.
  double hermitian_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j)
        worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(complex_t s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, complex_t s) { return a *= s; }
  friend Matrix operator*(complex_t s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.check_same(b);
    const std::size_t n = a.dim_;
    Matrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        complex_t aik = a(i, k);
        if (aik == complex_t(0.0)) continue;
        for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  std::vector<complex_t> apply(std::span<const complex_t> v) const {
    if (v.size() != dim_) throw Error(Errc::DimMismatch, "matrix-vector dimension mismatch");
    std::vector<complex_t> out(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      complex_t s = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) s += (*this)(i, j) * v[j];
      out[i] = s;
    }
    return out;
  }

  double max_abs_diff(const Matrix& o) const {
    check_same(o);
    double worst = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k) worst = std::max(worst, std::abs(data_[k] - o.data_[k]));
    return worst;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_same(const Matrix& o) const {
    if (o.dim_ != dim_) throw Error(Errc::DimMismatch, "matrix dimension mismatch");
  }

  std::size_t dim_ = 0;
  std::vector<complex_t> data_;
};

/// Kronecker product; the first factor is the slow index.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
  Matrix c(n);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      complex_t aij = a(i, j);
      if (aij == complex_t(0.0)) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) c(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return c;
}

//============================================================================
// HermitianOperator / DensityMatrix
//============================================================================

class HermitianOperator {
 public:
  /// Validates Hermiticity within 1e-12 entrywise.
  explicit HermitianOperator(Matrix m) : m_(std::move(m)) {
    if (m_.dim() == 0) throw Error(Errc::DomainError, "operator needs dim >= 1");
    double defect = m_.hermitian_defect();
    if (defect > kHermitianTolerance) {
      throw Error(Errc::DomainError, "matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }
  }

  static HermitianOperator identity(std::size_t dim) { return HermitianOperator(Matrix::identity(dim)); }

  std::size_t dim() const noexcept { return m_.dim(); }
  const Matrix& matrix() const noexcept { return m_; }
  complex_t operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  /// <v|H|v>
  double expectation(const StateVector& v) const {
    if (v.dim() != dim()) throw Error(Errc::DimMismatch, "expectation of operator on wrong dimension");
    complex_t s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
      complex_t row = 0.0;
      for (std::size_t j = 0; j < dim(); ++j) row += m_(i, j) * v[j];
      s += std::conj(v[i]) * row;
    }
    return s.real();
  }

  HermitianOperator& operator+=(const HermitianOperator& o) {
    m_ += o.m_;
    return *this;
  }
  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(a.m_ - b.m_);
  }

 private:
  Matrix m_;
};

/// |v><v| as an operator.
inline HermitianOperator projector(const StateVector& v) { return HermitianOperator(Matrix::outer(v)); }

inline HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

//============================================================================
// Eigendecomposition
//============================================================================

struct EigenDecomposition {
  std::vector<double> eigenvalues;         // descending
  std::vector<StateVector> eigenvectors;   // eigenvectors[k] pairs with eigenvalues[k]
  int sweeps = 0;

  /// sum_k lambda_k |u_k><u_k|
  Matrix reconstruct() const {
    std::size_t n = eigenvectors.empty() ? 0 : eigenvectors.front().dim();
    Matrix m(n);
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
      const auto& u = eigenvectors[k];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) += eigenvalues[k] * u[i] * std::conj(u[j]);
    }
    return m;
  }
};

/// Cyclic complex Jacobi. Each rotation J = D R D^H, with D a phase on
/// column q that makes a_pq real and R the classical real Jacobi rotation,
/// zeroes one off-diagonal pair. Converged when every off-diagonal
/// magnitude is below 1e-12.
namespace detail {

// Plain complex product; std::complex operator* adds inf/nan recovery that
// dominates the eigensolver's inner loops.
inline complex_t cmul(complex_t x, complex_t y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

}  // namespace detail

inline EigenDecomposition hermitian_eigen(const HermitianOperator& op) {
  const std::size_t n = op.dim();
  if (n > kMaxEigenDim) throw Error(Errc::TooLarge, "eigensolver dimension guard exceeded");

  std::vector<complex_t> a(op.matrix().data().begin(), op.matrix().data().end());
  // Exact Hermitian symmetrization of the working copy.
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = a[i * n + i].real();
    for (std::size_t j = i + 1; j < n; ++j) {
      complex_t avg = 0.5 * (a[i * n + j] + std::conj(a[j * n + i]));
      a[i * n + j] = avg;
      a[j * n + i] = std::conj(avg);
    }
  }
  std::vector<complex_t> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 1.0;

  auto max_off = [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) worst = std::max(worst, std::abs(a[i * n + j]));
    return worst;
  };

  int sweep = 0;
  for (;; ++sweep) {
    if (max_off() < kJacobiThreshold) break;
    if (sweep >= kJacobiMaxSweeps) {
      throw Error(Errc::NoConvergence, "Jacobi did not converge in " + std::to_string(kJacobiMaxSweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex_t apq = a[p * n + q];
        const double mag = std::abs(apq);
        if (mag < 1e-3 * kJacobiThreshold) continue;
        const complex_t phase = apq / mag;  // e^{i phi}
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J block: [[c, s e^{i phi}], [-s e^{-i phi}, c]]
        const complex_t jpq = s * phase;
        const complex_t jqp = -s * std::conj(phase);

        // A <- J^H A J. Rows p, q are rotated in place; for k outside {p, q}
        // the new column entries are the conjugates of the new row entries,
        // and the 2x2 block is set directly.
        complex_t* rp = &a[p * n];
        complex_t* rq = &a[q * n];
        const complex_t cjqp = std::conj(jqp);
        const complex_t cjpq = std::conj(jpq);
        for (std::size_t k = 0; k < n; ++k) {
          complex_t apk = rp[k];
          complex_t aqk = rq[k];
          rp[k] = c * apk + detail::cmul(cjqp, aqk);
          rq[k] = detail::cmul(cjpq, apk) + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          a[k * n + p] = std::conj(rp[k]);
          a[k * n + q] = std::conj(rq[k]);
        }
        rp[q] = 0.0;
        rq[p] = 0.0;
        rp[p] = app - t * mag;
        rq[q] = aqq + t * mag;
        // W <- J^T W, with W = V^T holding eigenvectors as rows.
        complex_t* wp = &w[p * n];
        complex_t* wq = &w[q * n];
        for (std::size_t k = 0; k < n; ++k) {
          complex_t wpk = wp[k];
          complex_t wqk = wq[k];
          wp[k] = c * wpk + detail::cmul(jqp, wqk);
          wq[k] = detail::cmul(jpq, wpk) + c * wqk;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x].real() > a[y * n + y].real(); });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.eigenvalues.reserve(n);
  out.eigenvectors.reserve(n);
  for (std::size_t k : order) {
    out.eigenvalues.push_back(a[k * n + k].real());
    out.eigenvectors.push_back(ket(std::vector<complex_t>(w.begin() + k * n, w.begin() + (k + 1) * n)));
  }
  return out;
}

inline double max_eigenvalue(const HermitianOperator& op) { return hermitian_eigen(op).eigenvalues.front(); }

//============================================================================
// DensityMatrix
//============================================================================

class DensityMatrix {
 public:
  /// Full validation: Hermitian, unit trace, eigenvalues >= -1e-10.
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
    HermitianOperator h(m_);
    double tr_defect = std::abs(m_.trace() - complex_t(1.0));
    if (tr_defect > kNormTolerance) throw Error(Errc::DomainError, "density matrix trace is not 1");
    auto eig = hermitian_eigen(h);
    if (eig.eigenvalues.back() < -kNegativeEigenTolerance) {
      throw Error(Errc::DomainError, "density matrix has a negative eigenvalue");
    }
  }

  static DensityMatrix pure(const StateVector& v) { return DensityMatrix(Matrix::outer(v), Trusted{}); }

  /// sum_k w_k |v_k><v_k|; weights must be nonnegative and sum to 1.
  static DensityMatrix mixture(std::span<const double> weights, std::span<const StateVector> states) {
    if (weights.size() != states.size() || states.empty()) {
      throw Error(Errc::LengthMismatch, "mixture needs one weight per state");
    }
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw Error(Errc::DomainError, "mixture weight is negative");
      total += w;
    }
    if (std::abs(total - 1.0) > kNormTolerance) throw Error(Errc::DomainError, "mixture weights do not sum to 1");
    const std::size_t d = states.front().dim();
    Matrix m(d);
    for (std::size_t k = 0; k < states.size(); ++k) {
      const auto& v = states[k];
      if (v.dim() != d) throw Error(Errc::DimMismatch, "mixture states differ in dimension");
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) += weights[k] * v[i] * std::conj(v[j]);
    }
    return DensityMatrix(std::move(m), Trusted{});
  }

  /// Equal-weight mixture.
  static DensityMatrix uniform_mixture(std::span<const StateVector> states) {
    std::vector<double> w(states.size(), 1.0 / static_cast<double>(states.size()));
    return mixture(w, states);
  }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    Matrix m = Matrix::identity(dim);
    m *= 1.0 / static_cast<double>(dim);
    return DensityMatrix(std::move(m), Trusted{});
  }

  friend DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(kron(a.m_, b.m_), Trusted{});
  }

  std::size_t dim() const noexcept { return m_.dim(); }
  const Matrix& matrix() const noexcept { return m_; }
  complex_t operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  HermitianOperator as_operator() const { return HermitianOperator(m_); }

  /// Tr(rho H)
  double expectation(const HermitianOperator& h) const {
    if (h.dim() != dim()) throw Error(Errc::DimMismatch, "expectation on wrong dimension");
    complex_t s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) s += m_(i, j) * h(j, i);
    return s.real();
  }

 private:
  struct Trusted {};
  // Convex combinations and products of valid states skip the spectral check.
  DensityMatrix(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

inline DensityMatrix tensor_power(const DensityMatrix& rho, std::size_t n) {
  if (n == 0) throw Error(Errc::DomainError, "tensor power needs n >= 1");
  DensityMatrix out = rho;
  for (std::size_t k = 1; k < n; ++k) out = tensor(out, rho);
  return out;
}

//============================================================================
// Entropies
//============================================================================

/// -sum p log2 p over a spectrum, with 0 log 0 := 0 and values within
/// -1e-10 of zero clipped.
inline double spectrum_entropy(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double lambda : eigenvalues) {
    double p = std::clamp(lambda, 0.0, 1.0);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  auto eig = hermitian_eigen(rho.as_operator());
  return spectrum_entropy(eig.eigenvalues);
}

inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::DomainError, "binary entropy needs p in [0, 1]");
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

//============================================================================
// Measurement
//============================================================================

/// Complete projective measurement {P_k}, sum_k P_k = 1 within 1e-9.
class Measurement {
 public:
  explicit Measurement(std::vector<HermitianOperator> projectors) : projectors_(std::move(projectors)) {
    if (projectors_.empty()) throw Error(Errc::IncompleteMeasurement, "measurement has no outcomes");
    const std::size_t d = projectors_.front().dim();
    Matrix sum(d);
    for (const auto& p : projectors_) {
      if (p.dim() != d) throw Error(Errc::DimMismatch, "measurement projectors differ in dimension");
      sum += p.matrix();
    }
    if (sum.max_abs_diff(Matrix::identity(d)) > kCompletenessTolerance) {
      throw Error(Errc::IncompleteMeasurement, "projectors do not resolve the identity");
    }
  }

  /// Measurement in an orthonormal basis.
  static Measurement in_basis(std::span<const StateVector> basis) {
    std::vector<HermitianOperator> ps;
    ps.reserve(basis.size());
    for (const auto& b : basis) ps.push_back(qcommit::projector(b));
    return Measurement(std::move(ps));
  }

  /// Two-outcome test {P_v, 1 - P_v}; outcome 0 means "found in v".
  static Measurement test(const StateVector& v) {
    auto p = qcommit::projector(v);
    auto rest = HermitianOperator::identity(v.dim()) - p;
    std::vector<HermitianOperator> ps;
    ps.push_back(std::move(p));
    ps.push_back(std::move(rest));
    return Measurement(std::move(ps));
  }

  std::size_t dim() const { return projectors_.front().dim(); }
  std::size_t outcomes() const { return projectors_.size(); }
  const HermitianOperator& projector(std::size_t k) const { return projectors_.at(k); }

  std::vector<double> probabilities(const StateVector& state) const {
    if (state.dim() != dim()) throw Error(Errc::DimMismatch, "measured state has wrong dimension");
    std::vector<double> probs;
    probs.reserve(projectors_.size());
    for (const auto& p : projectors_) probs.push_back(std::max(0.0, p.expectation(state)));
    return probs;
  }

 private:
  std::vector<HermitianOperator> projectors_;
};

namespace detail {

template <UniformSource Rng>
std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  double u = rng.uniform() * total;
  double cum = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    cum += probs[k];
    last_nonzero = k;
    if (u < cum) return k;
  }
  return last_nonzero;
}

}  // namespace detail

/// Draws outcome k with probability <state|P_k|state>. Consumes exactly
/// one uniform draw.
template <UniformSource Rng>
std::size_t born_sample(const StateVector& state, const Measurement& m, Rng& rng) {
  auto probs = m.probabilities(state);
  return detail::sample_index(probs, rng);
}

template <UniformSource Rng>
std::size_t born_sample(const StateVector& state, std::span<const HermitianOperator> projectors, Rng& rng) {
  Measurement m(std::vector<HermitianOperator>(projectors.begin(), projectors.end()));
  return born_sample(state, m, rng);
}

struct MeasurementResult {
  std::size_t outcome;
  StateVector post_state;  // P_k|state> / ||P_k|state>||
};

/// Born sampling followed by Lueders collapse.
template <UniformSource Rng>
MeasurementResult measure(const StateVector& state, const Measurement& m, Rng& rng) {
  std::size_t k = born_sample(state, m, rng);
  auto collapsed = m.projector(k).matrix().apply(state.amplitudes());
  return {k, ket(std::move(collapsed))};
}

}  // namespace qcommit
