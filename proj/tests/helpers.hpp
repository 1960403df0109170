#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "spinnet/linalg.hpp"
#include "spinnet/network.hpp"
#include "spinnet/random.hpp"

namespace spinnet::testing {

inline ComplexMatrix random_hermitian(std::size_t dim, RandomStream& rng) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    m(i, i) = 2.0 * rng.next_symmetric();
    for (std::size_t j = i + 1; j < dim; ++j) {
      const Complex z{rng.next_symmetric(), rng.next_symmetric()};
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

inline StateVector random_state(std::size_t dim, RandomStream& rng) {
  std::vector<Complex> a(dim);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    a[i] = Complex{rng.next_gaussian(1.0), rng.next_gaussian(1.0)};
    norm2 += std::norm(a[i]);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (Complex& z : a) z *= scale;
  return StateVector(std::move(a));
}

// exp(i G) for Hermitian G, built from its spectral decomposition.
inline ComplexMatrix random_unitary(std::size_t dim, RandomStream& rng) {
  const Spectrum s = eig_hermitian(HermitianOperator(random_hermitian(dim, rng)));
  ComplexMatrix u(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const Complex phase = std::polar(1.0, s.eigenvalues[j]);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c)
        u(r, c) += phase * s.eigenvectors(r, j) * std::conj(s.eigenvectors(c, j));
  }
  return u;
}

// The six-site network used throughout: two uniform trimers joined by the
// Hadamard connector on sites 3 and 6 (1-based).
inline NetworkHamiltonian six_site_network(double j) {
  const NetworkHamiltonian pair = build_uncoupled_pair(j);
  const ComplexMatrix u = hadamard_connector(6, {2, 5});
  const HermitianOperator transformed = similarity_transform(pair.operator_, u);
  return detail::finalize_network(transformed.matrix());
}

// Exact matrix of the connected six-site network for coupling j.
inline ComplexMatrix six_site_matrix(double j) {
  const double r = j / std::sqrt(2.0);
  ComplexMatrix m(6);
  m(0, 1) = m(1, 0) = j;
  m(1, 2) = m(2, 1) = r;
  m(1, 5) = m(5, 1) = r;
  m(2, 4) = m(4, 2) = r;
  m(3, 4) = m(4, 3) = j;
  m(4, 5) = m(5, 4) = -r;
  return m;
}

}  // namespace spinnet::testing
