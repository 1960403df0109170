#pragma once

#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>

#include <json.hpp>

#include "spinnet/error.hpp"
#include "spinnet/format.hpp"
#include "spinnet/montecarlo.hpp"
#include "spinnet/network.hpp"

namespace spinnet {

inline std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Router: return "router";
    case Protocol::Entangler: return "entangler";
    case Protocol::Sensor: return "sensor";
  }
  throw ValidationError("unknown protocol");
}

inline std::string to_string(DisorderKind kind) {
  return kind == DisorderKind::Diagonal ? "diagonal" : "off_diagonal";
}

inline std::string to_string(Distribution dist) {
  return dist == Distribution::Flat ? "flat" : "gaussian";
}

inline Protocol parse_protocol(const std::string& s) {
  if (s == "router") return Protocol::Router;
  if (s == "entangler") return Protocol::Entangler;
  if (s == "sensor") return Protocol::Sensor;
  throw ValidationError("unknown protocol: " + s);
}

inline constexpr double kDegPerRad = 180.0 / std::numbers::pi;

// Sweep statistics table. The coordinate column is the measurement time in
// t_m units for the router/entangler and the unknown angle in degrees for the
// sensor; sensor means and spreads are reported in degrees as well.
inline void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "protocol,disorder_kind,distribution,error_scale,time_or_theta,mean,sample_std,stderr,n\n";
  const bool sensor = result.config.protocol == Protocol::Sensor;
  const auto value = [sensor](double x) {
    return sensor ? format_degrees(x * kDegPerRad) : format_double(x);
  };
  for (const SweepPoint& p : result.points) {
    out << to_string(result.config.protocol) << ',' << to_string(result.config.disorder_kind)
        << ',' << to_string(result.config.distribution) << ',' << format_double(p.error_scale)
        << ',' << value(p.coordinate) << ',' << value(p.mean) << ',' << value(p.sample_std)
        << ',' << value(p.std_error) << ',' << p.n << '\n';
  }
}

// Per-angle sensor detail: both fidelities and both estimators, in degrees.
inline void write_sensor_curves_csv(const SweepResult& result, std::ostream& out) {
  out << "error_scale,theta_deg,mean_f1,std_f1,mean_f2,std_f2,"
         "theta1_mean_deg,theta1_std_deg,theta2_mean_deg,theta2_std_deg,"
         "chosen,value_deg,n\n";
  for (const SensorCurvePoint& p : result.sensor_curves) {
    const AggregateEstimate& est = p.estimate;
    out << format_double(p.error_scale) << ',' << format_degrees(p.theta * kDegPerRad) << ','
        << format_double(p.mean_f1) << ',' << format_double(p.std_f1) << ','
        << format_double(p.mean_f2) << ',' << format_double(p.std_f2) << ','
        << format_degrees(est.mean1 * kDegPerRad) << ',' << format_degrees(est.std1 * kDegPerRad)
        << ',' << format_degrees(est.mean2 * kDegPerRad) << ','
        << format_degrees(est.std2 * kDegPerRad) << ','
        << (est.chosen == Estimator::FromF1 ? "f1" : "f2") << ','
        << format_degrees(est.value * kDegPerRad) << ',' << p.n << '\n';
  }
}

inline nlohmann::json sweep_metadata(const SweepResult& result) {
  const SweepConfig& cfg = result.config;
  nlohmann::json config{
      {"protocol", to_string(cfg.protocol)},
      {"disorder_kind", to_string(cfg.disorder_kind)},
      {"distribution", to_string(cfg.distribution)},
      {"error_scales", cfg.error_scales},
      {"realizations", cfg.realizations},
      {"base_seed", cfg.base_seed},
      {"workers", cfg.workers},
  };
  if (cfg.protocol == Protocol::Sensor) {
    nlohmann::json grid = nlohmann::json::array();
    for (double theta : cfg.theta_grid) grid.push_back(theta * kDegPerRad);
    config["theta_grid_deg"] = grid;
  } else {
    config["measurement_times_tm"] = cfg.measurement_times;
  }
  return nlohmann::json{
      {"config", config},
      {"seed", cfg.base_seed},
      {"rng", result.rng_id},
      {"version", result.version},
  };
}

inline void write_sweep_metadata(const SweepResult& result, std::ostream& out) {
  out << sweep_metadata(result).dump(2) << '\n';
}

}  // namespace spinnet
