#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <ostream>
#include <vector>

#include "spinnet/error.hpp"
#include "spinnet/linalg.hpp"
#include "spinnet/network.hpp"

namespace spinnet {

// Time at which a trimer state maps to its mirror image: pi / (sqrt(2) J).
inline double mirroring_time(double j) {
  if (!(j > 0.0)) throw ValidationError("mirroring_time: coupling must be positive");
  return std::numbers::pi / (std::sqrt(2.0) * j);
}

// Multiplies the amplitude at `site` by e^{i theta}; instantaneous on the
// timescale of the dynamics (sudden approximation).
inline StateVector phase_kick(const StateVector& psi, std::size_t site, double theta) {
  if (site >= psi.dim()) throw ValidationError("phase_kick: site index out of range");
  std::vector<Complex> a = psi.amplitudes();
  a[site] *= std::polar(1.0, theta);
  return StateVector(std::move(a));
}

// |<psi_des|psi>|^2. Unit-norm states can round a fraction of an ulp above
// one; the result is pinned to the declared [0, 1] range.
inline double fidelity(const StateVector& desired, const StateVector& actual) {
  if (desired.dim() != actual.dim()) throw ValidationError("fidelity: dimension mismatch");
  return std::min(std::norm(inner_product(desired, actual)), 1.0);
}

struct KickEvent {
  double time = 0.0;  // units of 1/J
  std::size_t site = 0;
  double theta = 0.0;  // radians
};

// Free evolution interrupted by instantaneous phase kicks.
struct Schedule {
  StateVector initial;
  std::vector<KickEvent> kicks;  // strictly increasing in time
  NetworkHamiltonian hamiltonian;
};

struct TimedState {
  double time;
  StateVector state;
};

// Evolves the schedule piecewise and samples the state on the dt grid plus at
// every kick time. The sample at a kick time is the post-kick state.
inline std::vector<TimedState> run_schedule(const Schedule& schedule, double t_end, double dt) {
  if (!(dt > 0.0)) throw ValidationError("run_schedule: dt must be positive");
  if (schedule.initial.dim() != schedule.hamiltonian.dim())
    throw ValidationError("run_schedule: state and Hamiltonian dimensions differ");

  double previous = 0.0;
  for (const KickEvent& kick : schedule.kicks) {
    if (kick.time < 0.0) throw ValidationError("run_schedule: kick time must be >= 0");
    if (kick.time > t_end) throw ValidationError("run_schedule: kick time beyond t_end");
    if (kick.site >= schedule.hamiltonian.dim())
      throw ValidationError("run_schedule: kick site out of range");
    if (&kick != &schedule.kicks.front() && kick.time <= previous)
      throw ValidationError("run_schedule: kick times must be strictly increasing");
    previous = kick.time;
  }

  // Sample times: the dt grid, t_end, and all kick times (deduplicated).
  constexpr double kTimeEps = 1e-12;
  std::vector<double> times;
  const auto n_steps = static_cast<std::size_t>(std::floor(t_end / dt + kTimeEps));
  times.reserve(n_steps + schedule.kicks.size() + 2);
  for (std::size_t k = 0; k <= n_steps; ++k) times.push_back(static_cast<double>(k) * dt);
  if (times.empty() || t_end - times.back() > kTimeEps) times.push_back(t_end);
  for (const KickEvent& kick : schedule.kicks) times.push_back(kick.time);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::abs(a - b) <= kTimeEps; }),
              times.end());

  const Spectrum spectrum = eig_hermitian(schedule.hamiltonian.operator_);

  std::vector<TimedState> samples;
  samples.reserve(times.size());

  // Stage state: the state right after the most recent kick (or the initial
  // state), anchored at stage_start.
  StateVector stage_state = schedule.initial;
  double stage_start = 0.0;
  std::size_t next_kick = 0;

  for (double t : times) {
    while (next_kick < schedule.kicks.size() &&
           schedule.kicks[next_kick].time <= t + kTimeEps) {
      const KickEvent& kick = schedule.kicks[next_kick];
      stage_state = phase_kick(evolve(spectrum, stage_state, kick.time - stage_start),
                               kick.site, kick.theta);
      stage_start = kick.time;
      ++next_kick;
    }
    samples.push_back({t, evolve(spectrum, stage_state, t - stage_start)});
  }
  return samples;
}

// Occupation trace: one row per sample per site, long format. Times are
// divided by `time_scale` (pass the mirroring time to report in t_m units)
// and sites are reported 1-based.
inline void write_trace(const std::vector<TimedState>& samples, std::ostream& out,
                        double time_scale = 1.0) {
  out << "t,site,prob\n";
  for (const TimedState& sample : samples) {
    for (std::size_t site = 0; site < sample.state.dim(); ++site) {
      out << (sample.time / time_scale) << ',' << (site + 1) << ','
          << std::norm(sample.state[site]) << '\n';
    }
  }
}

}  // namespace spinnet
