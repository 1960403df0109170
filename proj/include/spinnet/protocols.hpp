#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <vector>

#include "spinnet/dynamics.hpp"
#include "spinnet/entanglement.hpp"
#include "spinnet/error.hpp"
#include "spinnet/linalg.hpp"
#include "spinnet/network.hpp"

namespace spinnet {

// Site roles in the six-site network (0-based): the excitation is injected at
// site 0, control phases are applied at site 5, and routed transfer targets
// site 3.
inline constexpr std::size_t kInjectionSite = 0;
inline constexpr std::size_t kControlSite = 5;
inline constexpr std::size_t kTargetSite = 3;

namespace detail {

inline void require_protocol_network(const NetworkHamiltonian& h) {
  if (h.dim() < 6)
    throw ValidationError("protocol requires the six-site network (dimension >= 6)");
  if (!(h.base_scale > 0.0))
    throw ValidationError("protocol requires a positive coupling scale");
}

// State at the mirroring time, plus everything needed to finish an experiment
// after a kick. Kick times and measurement times use the clean device's
// mirroring time even when the Hamiltonian is disordered.
struct ProtocolContext {
  Spectrum spectrum;
  StateVector at_mirror;
  double mirror_time;
};

inline ProtocolContext prepare(const NetworkHamiltonian& h) {
  require_protocol_network(h);
  const double t_m = mirroring_time(h.base_scale);
  Spectrum spectrum = eig_hermitian(h.operator_);
  StateVector at_mirror =
      evolve(spectrum, StateVector::basis_state(h.dim(), kInjectionSite), t_m);
  return ProtocolContext{std::move(spectrum), std::move(at_mirror), t_m};
}

}  // namespace detail

// Fidelity against |r_target> at even multiples of the mirroring time, keyed
// by the multiple (2, 4, ..., 2*n_periods).
struct RouterResult {
  std::map<int, double> fidelities;
};

// Routing: inject at site 0, flip the phase at the control site at t_m, and
// let the network carry the excitation to the target. With no disorder the
// excitation sits on the target at every even multiple of t_m.
inline RouterResult run_router(const NetworkHamiltonian& h, int n_periods) {
  if (n_periods < 1) throw ValidationError("run_router: n_periods must be >= 1");
  const detail::ProtocolContext ctx = detail::prepare(h);
  const StateVector kicked = phase_kick(ctx.at_mirror, kControlSite, std::numbers::pi);
  const StateVector target = StateVector::basis_state(h.dim(), kTargetSite);

  RouterResult out;
  for (int k = 1; k <= n_periods; ++k) {
    const StateVector at_measurement =
        evolve(ctx.spectrum, kicked, (2 * k - 1) * ctx.mirror_time);
    out.fidelities[2 * k] = fidelity(target, at_measurement);
  }
  return out;
}

// Entanglement generation: a pi/2 kick at the control site at t_m leaves the
// injection and target sites sharing a Bell pair at every even multiple of
// t_m. Returns EOF(injection, target) keyed by the t_m multiple.
inline std::map<int, double> run_entangler(const NetworkHamiltonian& h, int n_periods) {
  if (n_periods < 1) throw ValidationError("run_entangler: n_periods must be >= 1");
  const detail::ProtocolContext ctx = detail::prepare(h);
  const StateVector kicked =
      phase_kick(ctx.at_mirror, kControlSite, std::numbers::pi / 2.0);

  std::map<int, double> out;
  for (int k = 1; k <= n_periods; ++k) {
    const StateVector at_measurement =
        evolve(ctx.spectrum, kicked, (2 * k - 1) * ctx.mirror_time);
    out[2 * k] = eof(reduce_two_sites(at_measurement, kInjectionSite, kTargetSite));
  }
  return out;
}

// One phase-sensing experiment: kick theta at the control site at t_m,
// measure the return fidelity against the injection site at 2 t_m.
namespace detail {

inline double sense_fidelity(const ProtocolContext& ctx, double kick_theta) {
  const StateVector kicked = phase_kick(ctx.at_mirror, kControlSite, kick_theta);
  const StateVector back = evolve(ctx.spectrum, kicked, ctx.mirror_time);
  return fidelity(StateVector::basis_state(back.dim(), kInjectionSite), back);
}

}  // namespace detail

// The two return fidelities used to resolve an unknown phase over [0, 2pi):
// f1 from the bare kick, f2 from the kick with a known extra -pi/2 shift.
struct SenseSample {
  double f1 = 0.0;
  double f2 = 0.0;
};

// The two experiments may run on distinct disorder realizations; pass the
// same Hamiltonian twice for a single fabricated device.
inline SenseSample sense_once(const NetworkHamiltonian& h1, const NetworkHamiltonian& h2,
                              double theta) {
  const detail::ProtocolContext c1 = detail::prepare(h1);
  const detail::ProtocolContext c2 = detail::prepare(h2);
  return SenseSample{detail::sense_fidelity(c1, theta),
                     detail::sense_fidelity(c2, theta - std::numbers::pi / 2.0)};
}

// theta1 in [0, 2pi); theta2 in [-pi/2, 3pi/2), shifted only when aggregated.
struct PhaseEstimate {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

// Inverts the fidelity laws f1 = (1+cos theta)/2 and f2 = (1+sin theta)/2,
// using each fidelity to pick the branch of the other. Boundary ties at
// f = 0.5 take the ">=" branch. Inputs are clamped: disorder can push the
// measured fidelities outside the analytically valid range.
inline PhaseEstimate estimate_phase(const SenseSample& sample) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const auto clamp_unit = [](double f) { return std::clamp(2.0 * f - 1.0, -1.0, 1.0); };

  const double f1 = std::clamp(sample.f1, 0.0, 1.0);
  const double f2 = std::clamp(sample.f2, 0.0, 1.0);

  double theta1 = std::acos(clamp_unit(f1));
  if (f2 < 0.5) theta1 = kTwoPi - theta1;
  if (theta1 >= kTwoPi) theta1 = 0.0;  // acos returned exactly 0

  double theta2 = std::asin(clamp_unit(f2));
  if (f1 < 0.5) theta2 = std::numbers::pi - theta2;
  if (theta2 >= 1.5 * std::numbers::pi) theta2 -= kTwoPi;  // fold onto [-pi/2, 3pi/2)

  return PhaseEstimate{theta1, theta2};
}

enum class Estimator { FromF1, FromF2 };

struct AggregateEstimate {
  double mean1 = 0.0;  // radians, [0, 2pi)
  double mean2 = 0.0;  // radians, [0, 2pi) after the negative-mean shift
  double std1 = 0.0;
  double std2 = 0.0;
  Estimator chosen = Estimator::FromF1;
  double value = 0.0;
};

namespace detail {

struct MeanStd {
  double mean;
  double std;
};

inline MeanStd mean_and_sample_std(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

}  // namespace detail

// Averages each estimator over the realizations and keeps the one with the
// smaller spread (ties prefer the f1-based estimator). A negative theta2
// average is shifted by 2pi so the reported angle lies in [0, 2pi).
inline AggregateEstimate aggregate_estimates(std::span<const PhaseEstimate> estimates) {
  if (estimates.empty())
    throw ValidationError("aggregate_estimates: need at least one estimate");

  std::vector<double> t1s, t2s;
  t1s.reserve(estimates.size());
  t2s.reserve(estimates.size());
  for (const PhaseEstimate& e : estimates) {
    t1s.push_back(e.theta1);
    t2s.push_back(e.theta2);
  }
  const auto [m1, s1] = detail::mean_and_sample_std(t1s);
  const auto [m2raw, s2] = detail::mean_and_sample_std(t2s);
  const double m2 = m2raw < 0.0 ? m2raw + 2.0 * std::numbers::pi : m2raw;

  AggregateEstimate out{m1, m2, s1, s2, Estimator::FromF1, m1};
  if (s2 < s1) {
    out.chosen = Estimator::FromF2;
    out.value = m2;
  }
  return out;
}

inline AggregateEstimate aggregate_estimates(const std::vector<PhaseEstimate>& estimates) {
  return aggregate_estimates(std::span<const PhaseEstimate>(estimates));
}

}  // namespace spinnet
