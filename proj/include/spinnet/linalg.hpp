#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "spinnet/error.hpp"

namespace spinnet {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    if (dim == 0) throw ValidationError("matrix dimension must be positive");
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const { return dim_; }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw ValidationError("matrix product: dimension mismatch");
    ComplexMatrix out(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i) {
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const Complex aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < a.dim_; ++j) out(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

  double max_abs_diff(const ComplexMatrix& other) const {
    if (dim_ != other.dim_) throw ValidationError("matrix comparison: dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i)
      worst = std::max(worst, std::abs(entries_[i] - other.entries_[i]));
    return worst;
  }

  bool has_finite_entries() const {
    for (const Complex& z : entries_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  double frobenius_norm() const {
    double sum = 0.0;
    for (const Complex& z : entries_) sum += std::norm(z);
    return std::sqrt(sum);
  }

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

// Hermitian matrix with an associated energy scale (couplings in units of J,
// hbar = 1). Hermiticity is checked on construction to 1e-12 elementwise.
class HermitianOperator {
 public:
  static constexpr double kHermitianTol = 1e-12;

  explicit HermitianOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    if (!matrix_.has_finite_entries())
      throw ValidationError("hermitian operator has non-finite entries");
    for (std::size_t i = 0; i < matrix_.dim(); ++i) {
      for (std::size_t j = i; j < matrix_.dim(); ++j) {
        const double mismatch = std::abs(matrix_(i, j) - std::conj(matrix_(j, i)));
        if (mismatch > kHermitianTol) {
          std::ostringstream msg;
          msg << "matrix is not Hermitian: |H(" << i << "," << j << ") - conj(H(" << j << ","
              << i << "))| = " << mismatch << " exceeds " << kHermitianTol;
          throw ValidationError(msg.str());
        }
      }
    }
  }

  std::size_t dim() const { return matrix_.dim(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }

 private:
  ComplexMatrix matrix_;
};

// Normalized complex amplitude vector over the site basis.
class StateVector {
 public:
  static constexpr double kNormTol = 1e-10;

  explicit StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) throw ValidationError("state vector must be non-empty");
    double norm2 = 0.0;
    for (const Complex& a : amplitudes_) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > kNormTol) {
      std::ostringstream msg;
      msg << "state vector is not normalized: sum |a_i|^2 = " << norm2;
      throw ValidationError(msg.str());
    }
  }

  // |r_site>: the single excitation localized at `site` (0-based).
  static StateVector basis_state(std::size_t dim, std::size_t site) {
    if (site >= dim) throw ValidationError("basis_state: site index out of range");
    std::vector<Complex> a(dim);
    a[site] = 1.0;
    return StateVector(std::move(a));
  }

  std::size_t dim() const { return amplitudes_.size(); }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }

 private:
  std::vector<Complex> amplitudes_;
};

inline Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw ValidationError("inner product: dimension mismatch");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

// Eigenvalues ascending, eigenvector columns orthonormal.
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  Complex vector_entry(std::size_t row, std::size_t which) const {
    return eigenvectors(row, which);
  }
};

namespace detail {

// One cyclic sweep of complex Jacobi rotations. Zeroes A(p,q) with the
// unitary that diagonalizes the 2x2 principal submatrix, accumulating the
// rotations into V.
inline void jacobi_sweep(ComplexMatrix& a, ComplexMatrix& v) {
  const std::size_t n = a.dim();
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const Complex apq = a(p, q);
      const double mag = std::abs(apq);
      if (mag == 0.0) continue;

      const Complex phase = apq / mag;  // apq = mag * phase
      const double app = a(p, p).real();
      const double aqq = a(q, q).real();
      const double theta = (aqq - app) / (2.0 * mag);
      const double t = (theta >= 0.0 ? -1.0 : 1.0) /
                       (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;

      // Column rotation R: columns p,q of any matrix M become
      //   M(:,p) <- c*M(:,p) + s*conj(phase)*M(:,q)
      //   M(:,q) <- -s*phase*M(:,p) + c*M(:,q)
      // Applying R^dagger on the left and R on the right annihilates A(p,q).
      const Complex sp = s * phase;
      const Complex spc = s * std::conj(phase);

      for (std::size_t k = 0; k < n; ++k) {  // A <- A R
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = c * akp + spc * akq;
        a(k, q) = -sp * akp + c * akq;
      }
      for (std::size_t k = 0; k < n; ++k) {  // A <- R^dagger A
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = c * apk + sp * aqk;
        a(q, k) = -spc * apk + c * aqk;
      }
      for (std::size_t k = 0; k < n; ++k) {  // V <- V R
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = c * vkp + spc * vkq;
        v(k, q) = -sp * vkp + c * vkq;
      }
      a(p, q) = 0.0;
      a(q, p) = 0.0;
    }
  }
}

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

}  // namespace detail

// Cyclic Jacobi diagonalization. Converges when the off-diagonal Frobenius
// norm falls below 1e-13 (relative to the matrix norm); at most 100 sweeps.
inline Spectrum eig_hermitian(const HermitianOperator& h) {
  constexpr double kOffDiagTol = 1e-13;
  constexpr int kMaxSweeps = 100;

  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, a.frobenius_norm());
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) <= kOffDiagTol * scale) break;
    detail::jacobi_sweep(a, v);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  Spectrum out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

// psi(t) = sum_j <phi_j|psi0> e^{-i lambda_j t} |phi_j>.
inline StateVector evolve(const Spectrum& spectrum, const StateVector& psi0, double t) {
  const std::size_t n = psi0.dim();
  if (spectrum.eigenvectors.dim() != n)
    throw ValidationError("evolve: state dimension does not match spectrum");

  std::vector<Complex> overlaps(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += std::conj(spectrum.eigenvectors(i, j)) * psi0[i];
    overlaps[j] = c;
  }
  std::vector<Complex> result(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex coeff = overlaps[j] * std::polar(1.0, -spectrum.eigenvalues[j] * t);
    for (std::size_t i = 0; i < n; ++i) result[i] += coeff * spectrum.eigenvectors(i, j);
  }
  return StateVector(std::move(result));
}

inline StateVector evolve(const HermitianOperator& h, const StateVector& psi0, double t) {
  if (h.dim() != psi0.dim()) throw ValidationError("evolve: dimension mismatch");
  return evolve(eig_hermitian(h), psi0, t);
}

// U H U^{-1} for unitary U (so U^{-1} = U^dagger). The spectrum is preserved.
inline HermitianOperator similarity_transform(const HermitianOperator& h, const ComplexMatrix& u) {
  if (u.dim() != h.dim()) throw ValidationError("similarity_transform: dimension mismatch");

  constexpr double kUnitaryTol = 1e-12;
  const ComplexMatrix uut = u * u.adjoint();
  const double defect = uut.max_abs_diff(ComplexMatrix::identity(u.dim()));
  if (defect > kUnitaryTol) {
    std::ostringstream msg;
    msg << "U is not unitary: max |U*U^dagger - I| entry = " << defect;
    throw ValidationError(msg.str());
  }
  return HermitianOperator(u * h.matrix() * u.adjoint());
}

}  // namespace spinnet
