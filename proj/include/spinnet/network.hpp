#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "spinnet/error.hpp"
#include "spinnet/linalg.hpp"
#include "spinnet/random.hpp"

namespace spinnet {

// Linear chain with nearest-neighbor couplings, in the single-excitation
// site basis: entry (i,i+1) = J_{i,i+1}, diagonal (i,i) = onsite energy.
struct ChainSpec {
  std::size_t n_sites = 0;
  std::vector<double> couplings;  // length n_sites - 1
  std::vector<double> onsite;     // length n_sites

  static ChainSpec uniform(std::size_t n, double j) {
    return ChainSpec{n, std::vector<double>(n > 0 ? n - 1 : 0, j), std::vector<double>(n, 0.0)};
  }
};

enum class Distribution { Flat, Gaussian };
enum class DisorderKind { Diagonal, OffDiagonal };

// Standard deviation of the unit-window flat distribution; the Gaussian uses
// the same width so the two error models are directly comparable.
inline constexpr double kGaussianWidth = 0.28867513459481287;  // 1/(2*sqrt(3))

struct DisorderSpec {
  double error_scale = 0.0;  // E, in units of the network's base coupling scale
  Distribution distribution = Distribution::Flat;
  DisorderKind kind = DisorderKind::Diagonal;
  double width = kGaussianWidth;

  DisorderSpec validated() const {
    if (error_scale < 0.0) throw ValidationError("disorder error scale must be >= 0");
    if (!(width > 0.0)) throw ValidationError("disorder width must be positive");
    return *this;
  }
};

// A Hamiltonian together with its physical coupling graph. `coupling_mask`
// records the unordered site pairs carrying a nonzero unperturbed coupling;
// disorder only ever lands on those pairs (off-diagonal) or on the sites
// themselves (diagonal). `base_scale` is max |J_ij| of the clean network and
// sets the unit for error scales and for the mirroring time.
struct NetworkHamiltonian {
  HermitianOperator operator_;
  std::set<std::pair<std::size_t, std::size_t>> coupling_mask;  // pairs with i < j
  double base_scale = 0.0;

  std::size_t dim() const { return operator_.dim(); }
};

namespace detail {

inline NetworkHamiltonian finalize_network(ComplexMatrix matrix) {
  std::set<std::pair<std::size_t, std::size_t>> mask;
  double scale = 0.0;
  for (std::size_t i = 0; i < matrix.dim(); ++i) {
    for (std::size_t j = i + 1; j < matrix.dim(); ++j) {
      const double mag = std::abs(matrix(i, j));
      if (mag > 0.0) {
        mask.insert({i, j});
        scale = std::max(scale, mag);
      }
    }
  }
  if (scale <= 0.0) throw ValidationError("network has no couplings (degenerate, no dynamics)");
  return NetworkHamiltonian{HermitianOperator(std::move(matrix)), std::move(mask), scale};
}

}  // namespace detail

inline NetworkHamiltonian build_chain(const ChainSpec& spec) {
  if (spec.n_sites < 2) throw ValidationError("chain needs at least 2 sites");
  if (spec.couplings.size() != spec.n_sites - 1)
    throw ValidationError("chain couplings must have length n_sites - 1");
  if (spec.onsite.size() != spec.n_sites)
    throw ValidationError("chain onsite energies must have length n_sites");

  ComplexMatrix m(spec.n_sites);
  for (std::size_t i = 0; i < spec.n_sites; ++i) m(i, i) = spec.onsite[i];
  for (std::size_t i = 0; i + 1 < spec.n_sites; ++i) {
    m(i, i + 1) = spec.couplings[i];
    m(i + 1, i) = spec.couplings[i];
  }

  // A zero-coupling chain has an empty mask; keep the matrix anyway.
  bool any = false;
  for (double j : spec.couplings) any = any || j != 0.0;
  if (!any) {
    return NetworkHamiltonian{HermitianOperator(std::move(m)), {}, 0.0};
  }
  return detail::finalize_network(std::move(m));
}

inline ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.dim() + b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out(a.dim() + i, a.dim() + j) = b(i, j);
  return out;
}

// Two identical uniform trimers, block diagonal: sites {0,1,2} and {3,4,5}.
inline NetworkHamiltonian build_uncoupled_pair(double j) {
  if (j == 0.0) throw ValidationError("trimer pair coupling must be nonzero");
  const NetworkHamiltonian trimer = build_chain(ChainSpec::uniform(3, j));
  return detail::finalize_network(direct_sum(trimer.operator_.matrix(), trimer.operator_.matrix()));
}

// Identity except for a 2x2 Hadamard block on the given site pair. Self-inverse.
inline ComplexMatrix hadamard_connector(std::size_t dim, std::pair<std::size_t, std::size_t> pair) {
  const auto [a, b] = pair;
  if (a >= dim || b >= dim) throw ValidationError("hadamard_connector: site index out of range");
  if (a == b) throw ValidationError("hadamard_connector: sites must be distinct");

  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix u = ComplexMatrix::identity(dim);
  u(a, a) = r;
  u(a, b) = r;
  u(b, a) = r;
  u(b, b) = -r;
  return u;
}

// One raw draw d from the error distribution; the caller applies E and the
// coupling scale.
inline double sample_disorder(const DisorderSpec& spec, RandomStream& rng) {
  spec.validated();
  switch (spec.distribution) {
    case Distribution::Flat:
      return rng.next_symmetric();
    case Distribution::Gaussian:
      return rng.next_gaussian(spec.width);
  }
  throw ValidationError("unknown disorder distribution");
}

// Static disorder on the physical network. Off-diagonal: one draw per coupled
// pair, J_ij -> J_ij + E*base_scale*d_ij applied symmetrically so the result
// stays Hermitian; entries outside the coupling mask are untouched. Diagonal:
// one draw per site on the on-site energies. The mask and base scale carry
// over unchanged (they describe the clean device).
inline NetworkHamiltonian apply_disorder(const NetworkHamiltonian& h, const DisorderSpec& spec,
                                         RandomStream& rng) {
  spec.validated();
  ComplexMatrix m = h.operator_.matrix();
  const double strength = spec.error_scale * h.base_scale;

  if (spec.kind == DisorderKind::OffDiagonal) {
    for (const auto& [i, j] : h.coupling_mask) {
      const double perturbation = strength * sample_disorder(spec, rng);
      m(i, j) += perturbation;
      m(j, i) += perturbation;
    }
  } else {
    for (std::size_t i = 0; i < m.dim(); ++i) {
      m(i, i) += strength * sample_disorder(spec, rng);
    }
  }
  return NetworkHamiltonian{HermitianOperator(std::move(m)), h.coupling_mask, h.base_scale};
}

}  // namespace spinnet
