#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "spinnet/error.hpp"
#include "spinnet/network.hpp"
#include "spinnet/protocols.hpp"
#include "spinnet/random.hpp"
#include "spinnet/version.hpp"

namespace spinnet {

enum class Protocol { Router, Entangler, Sensor };

inline std::vector<double> default_error_scales() {
  std::vector<double> scales;
  for (int i = 0; i <= 8; ++i) scales.push_back(0.05 * i);  // 0 .. 0.4
  return scales;
}

inline std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  for (int deg = 0; deg < 360; deg += 5)
    grid.push_back(deg * std::numbers::pi / 180.0);
  return grid;
}

// One disorder-averaging job. Every realization draws its Hamiltonian from
// substream(base_seed, {scale_index, realization_index}), so results are
// reproducible bit-for-bit and independent of the worker count.
struct SweepConfig {
  Protocol protocol = Protocol::Router;
  DisorderKind disorder_kind = DisorderKind::Diagonal;
  Distribution distribution = Distribution::Flat;
  std::vector<double> error_scales = default_error_scales();
  int realizations = 1000;
  std::uint64_t base_seed = 0;
  std::vector<int> measurement_times = {2, 4, 6};      // multiples of t_m
  std::vector<double> theta_grid = default_theta_grid();  // radians, sensor only
  unsigned workers = 1;
};

// Statistic at one sweep point. `coordinate` is the measurement time in t_m
// units (router/entangler) or the unknown angle in radians (sensor).
struct SweepPoint {
  double error_scale = 0.0;
  double coordinate = 0.0;
  double mean = 0.0;
  double sample_std = 0.0;
  double std_error = 0.0;  // sample_std / sqrt(n)
  int n = 0;
};

// Full per-theta sensor statistics: both fidelities and both estimators.
struct SensorCurvePoint {
  double error_scale = 0.0;
  double theta = 0.0;  // radians
  double mean_f1 = 0.0, std_f1 = 0.0;
  double mean_f2 = 0.0, std_f2 = 0.0;
  AggregateEstimate estimate;
  int n = 0;
};

struct SweepResult {
  SweepConfig config;
  std::string rng_id{kRngId};
  std::string version{kVersion};
  std::vector<SweepPoint> points;
  std::vector<SensorCurvePoint> sensor_curves;  // populated for sensor sweeps
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const unsigned n_threads = std::min<unsigned>(workers, static_cast<unsigned>(count));
  pool.reserve(n_threads);
  for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
}

inline SweepPoint reduce_point(double scale, double coordinate, std::span<const double> values) {
  const auto [mean, std] = mean_and_sample_std(values);
  const double n = static_cast<double>(values.size());
  return SweepPoint{scale, coordinate, mean, std, std / std::sqrt(n),
                    static_cast<int>(values.size())};
}

inline void validate_sweep_config(const SweepConfig& cfg) {
  if (cfg.realizations < 1) throw ValidationError("sweep needs at least one realization");
  if (cfg.error_scales.empty()) throw ValidationError("sweep needs at least one error scale");
  for (double scale : cfg.error_scales)
    if (scale < 0.0) throw ValidationError("error scales must be >= 0");
  if (cfg.protocol == Protocol::Sensor) {
    if (cfg.theta_grid.empty()) throw ValidationError("sensor sweep needs a theta grid");
  } else {
    if (cfg.measurement_times.empty())
      throw ValidationError("sweep needs at least one measurement time");
    for (int multiple : cfg.measurement_times)
      if (multiple < 2 || multiple % 2 != 0)
        throw ValidationError("router/entangler measure at even positive multiples of t_m");
  }
}

}  // namespace detail

inline SweepResult run_sweep(const NetworkHamiltonian& base, const SweepConfig& cfg) {
  detail::validate_sweep_config(cfg);
  DisorderSpec disorder{0.0, cfg.distribution, cfg.disorder_kind};
  const auto n_real = static_cast<std::size_t>(cfg.realizations);

  SweepResult result;
  result.config = cfg;

  for (std::size_t scale_index = 0; scale_index < cfg.error_scales.size(); ++scale_index) {
    disorder.error_scale = cfg.error_scales[scale_index];

    if (cfg.protocol == Protocol::Sensor) {
      const std::size_t n_theta = cfg.theta_grid.size();
      std::vector<double> f1(n_real * n_theta), f2(n_real * n_theta);
      std::vector<PhaseEstimate> estimates(n_real * n_theta);

      detail::parallel_for(n_real, cfg.workers, [&](std::size_t r) {
        RandomStream rng = substream(cfg.base_seed, {scale_index, r});
        const NetworkHamiltonian device = apply_disorder(base, disorder, rng);
        // One device per realization: both experiments share the same
        // disorder, and the same device is probed at every grid angle.
        const detail::ProtocolContext ctx = detail::prepare(device);
        for (std::size_t ti = 0; ti < n_theta; ++ti) {
          const double theta = cfg.theta_grid[ti];
          const SenseSample sample{
              detail::sense_fidelity(ctx, theta),
              detail::sense_fidelity(ctx, theta - std::numbers::pi / 2.0)};
          const std::size_t slot = ti * n_real + r;
          f1[slot] = sample.f1;
          f2[slot] = sample.f2;
          estimates[slot] = estimate_phase(sample);
        }
      });

      for (std::size_t ti = 0; ti < n_theta; ++ti) {
        const std::span<const double> f1s(f1.data() + ti * n_real, n_real);
        const std::span<const double> f2s(f2.data() + ti * n_real, n_real);
        const std::span<const PhaseEstimate> ests(estimates.data() + ti * n_real, n_real);
        const auto [mf1, sf1] = detail::mean_and_sample_std(f1s);
        const auto [mf2, sf2] = detail::mean_and_sample_std(f2s);
        const AggregateEstimate agg = aggregate_estimates(ests);
        const double chosen_std = agg.chosen == Estimator::FromF1 ? agg.std1 : agg.std2;

        result.sensor_curves.push_back(SensorCurvePoint{
            disorder.error_scale, cfg.theta_grid[ti], mf1, sf1, mf2, sf2, agg,
            static_cast<int>(n_real)});
        result.points.push_back(SweepPoint{
            disorder.error_scale, cfg.theta_grid[ti], agg.value, chosen_std,
            chosen_std / std::sqrt(static_cast<double>(n_real)), static_cast<int>(n_real)});
      }
    } else {
      const std::size_t n_times = cfg.measurement_times.size();
      const int n_periods = *std::max_element(cfg.measurement_times.begin(),
                                              cfg.measurement_times.end()) /
                            2;
      std::vector<double> values(n_real * n_times);

      detail::parallel_for(n_real, cfg.workers, [&](std::size_t r) {
        RandomStream rng = substream(cfg.base_seed, {scale_index, r});
        const NetworkHamiltonian device = apply_disorder(base, disorder, rng);
        if (cfg.protocol == Protocol::Router) {
          const RouterResult rr = run_router(device, n_periods);
          for (std::size_t ti = 0; ti < n_times; ++ti)
            values[ti * n_real + r] = rr.fidelities.at(cfg.measurement_times[ti]);
        } else {
          const auto eofs = run_entangler(device, n_periods);
          for (std::size_t ti = 0; ti < n_times; ++ti)
            values[ti * n_real + r] = eofs.at(cfg.measurement_times[ti]);
        }
      });

      for (std::size_t ti = 0; ti < n_times; ++ti) {
        result.points.push_back(detail::reduce_point(
            disorder.error_scale, static_cast<double>(cfg.measurement_times[ti]),
            std::span<const double>(values.data() + ti * n_real, n_real)));
      }
    }
  }
  return result;
}

}  // namespace spinnet
