#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <sstream>
#include <utility>

#include "spinnet/error.hpp"
#include "spinnet/linalg.hpp"

namespace spinnet {

// Reduced density matrix of a site pair (A,B), basis order
// (|00>, |01>, |10>, |11>) with the first slot belonging to A.
class TwoSiteDensity {
 public:
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kPsdTol = -1e-10;

  explicit TwoSiteDensity(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.dim() != 4) throw ValidationError("two-site density matrix must be 4x4");
    HermitianOperator check(matrix_);  // validates Hermiticity
    double trace = 0.0;
    for (std::size_t i = 0; i < 4; ++i) trace += matrix_(i, i).real();
    if (std::abs(trace - 1.0) > kTraceTol) {
      std::ostringstream msg;
      msg << "density matrix trace is " << trace << ", expected 1";
      throw ValidationError(msg.str());
    }
    const Spectrum spectrum = eig_hermitian(check);
    if (spectrum.eigenvalues.front() < kPsdTol) {
      std::ostringstream msg;
      msg << "density matrix is not positive semidefinite: min eigenvalue "
          << spectrum.eigenvalues.front();
      throw ValidationError(msg.str());
    }
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }

 private:
  ComplexMatrix matrix_;
};

// Partial trace of a single-excitation pure state onto sites (a, b). The
// excitation is either on A (|10>), on B (|01>), or elsewhere (|00>); the
// |11> sector is empty in this subspace.
inline TwoSiteDensity reduce_two_sites(const StateVector& psi, std::size_t a, std::size_t b) {
  if (a >= psi.dim() || b >= psi.dim())
    throw ValidationError("reduce_two_sites: site index out of range");
  if (a == b) throw ValidationError("reduce_two_sites: sites must be distinct");

  double rest = 0.0;
  for (std::size_t k = 0; k < psi.dim(); ++k)
    if (k != a && k != b) rest += std::norm(psi[k]);

  ComplexMatrix rho(4);
  rho(0, 0) = rest;
  rho(1, 1) = std::norm(psi[b]);
  rho(2, 2) = std::norm(psi[a]);
  rho(1, 2) = psi[b] * std::conj(psi[a]);
  rho(2, 1) = std::conj(rho(1, 2));
  return TwoSiteDensity(std::move(rho));
}

// (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y).
inline TwoSiteDensity spin_flip(const TwoSiteDensity& rho) {
  // sigma_y x sigma_y = antidiag(-1, 1, 1, -1) in the (|00>,|01>,|10>,|11>) basis.
  ComplexMatrix flip(4);
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;

  ComplexMatrix conjugated(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) conjugated(i, j) = std::conj(rho(i, j));
  return TwoSiteDensity(flip * conjugated * flip);
}

namespace detail {

// V diag(f(lambda)) V^dagger with eigenvalue round-off clamped at zero.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const Spectrum s = eig_hermitian(HermitianOperator(m));
  const std::size_t n = m.dim();
  ComplexMatrix out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = std::max(s.eigenvalues[j], 0.0);
    const double root = std::sqrt(lambda);
    for (std::size_t r = 0; r < n; ++r) {
      const Complex scaled = root * s.eigenvectors(r, j);
      for (std::size_t c = 0; c < n; ++c)
        out(r, c) += scaled * std::conj(s.eigenvectors(c, j));
    }
  }
  return out;
}

inline double binary_entropy(double x) {
  const auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return term(x) + term(1.0 - x);
}

}  // namespace detail

// Entanglement of formation via the spin-flipped density matrix. The
// eigenvalues of rho*rho_tilde are obtained from the Hermitian product
// sqrt(rho)*rho_tilde*sqrt(rho), which has the same spectrum.
inline double eof(const TwoSiteDensity& rho) {
  const TwoSiteDensity flipped = spin_flip(rho);
  const ComplexMatrix root = detail::psd_sqrt(rho.matrix());
  const ComplexMatrix product = root * flipped.matrix() * root;

  Spectrum s = eig_hermitian(HermitianOperator(product));
  double lambdas[4];
  for (std::size_t i = 0; i < 4; ++i) {
    double eps = s.eigenvalues[i];
    if (eps < -1e-10) {
      std::ostringstream msg;
      msg << "rho * rho_tilde has negative eigenvalue " << eps;
      throw ValidationError(msg.str());
    }
    // Exact zeros of rho*rho_tilde come back as +-1e-15 round-off; taking
    // their square root would inject ~1e-8 into the concurrence.
    if (std::abs(eps) < 1e-12) eps = 0.0;
    lambdas[i] = std::sqrt(eps);
  }
  std::sort(lambdas, lambdas + 4, std::greater<>());

  const double concurrence = std::max(lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3], 0.0);
  const double tangle = concurrence * concurrence;
  const double x = 0.5 * (1.0 + std::sqrt(std::max(1.0 - tangle, 0.0)));
  return std::clamp(detail::binary_entropy(x), 0.0, 1.0);
}

}  // namespace spinnet
