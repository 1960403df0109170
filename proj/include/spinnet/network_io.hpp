#pragma once

#include <cstddef>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spinnet/error.hpp"
#include "spinnet/linalg.hpp"
#include "spinnet/network.hpp"

namespace spinnet {

// On-disk network description. Sites are numbered from 1, matching the CLI.
// Connectors are Hadamard couplings applied as unitary transformations after
// the base network is assembled. Serialization uses shortest round-trip
// decimal forms, so load(save(spec)) reproduces every value bit-exactly.
//
//   {
//     "sites": 6,
//     "onsite": [0, 0, 0, 0, 0, 0],
//     "couplings": [{"i": 1, "j": 2, "strength": 1.0}, ...],
//     "connectors": [{"a": 3, "b": 6}]
//   }
struct NetworkSpec {
  struct Coupling {
    std::size_t i = 0;  // 1-based
    std::size_t j = 0;  // 1-based
    double strength = 0.0;

    bool operator==(const Coupling&) const = default;
  };
  struct Connector {
    std::size_t a = 0;  // 1-based
    std::size_t b = 0;  // 1-based

    bool operator==(const Connector&) const = default;
  };

  std::size_t sites = 0;
  std::vector<double> onsite;
  std::vector<Coupling> couplings;
  std::vector<Connector> connectors;

  bool operator==(const NetworkSpec&) const = default;

  // The standard six-site device: two uniform trimers joined by a Hadamard
  // connector between sites 3 and 6.
  static NetworkSpec six_site(double j) {
    NetworkSpec spec;
    spec.sites = 6;
    spec.onsite.assign(6, 0.0);
    spec.couplings = {{1, 2, j}, {2, 3, j}, {4, 5, j}, {5, 6, j}};
    spec.connectors = {{3, 6}};
    return spec;
  }
};

inline nlohmann::json to_json(const NetworkSpec& spec) {
  nlohmann::json couplings = nlohmann::json::array();
  for (const auto& c : spec.couplings)
    couplings.push_back({{"i", c.i}, {"j", c.j}, {"strength", c.strength}});
  nlohmann::json connectors = nlohmann::json::array();
  for (const auto& c : spec.connectors) connectors.push_back({{"a", c.a}, {"b", c.b}});
  return nlohmann::json{{"sites", spec.sites},
                        {"onsite", spec.onsite},
                        {"couplings", couplings},
                        {"connectors", connectors}};
}

inline NetworkSpec parse_network_spec(const nlohmann::json& j) {
  NetworkSpec spec;
  try {
    spec.sites = j.at("sites").get<std::size_t>();
    if (j.contains("onsite")) spec.onsite = j.at("onsite").get<std::vector<double>>();
    for (const auto& c : j.at("couplings"))
      spec.couplings.push_back({c.at("i").get<std::size_t>(), c.at("j").get<std::size_t>(),
                                c.at("strength").get<double>()});
    if (j.contains("connectors"))
      for (const auto& c : j.at("connectors"))
        spec.connectors.push_back({c.at("a").get<std::size_t>(), c.at("b").get<std::size_t>()});
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("network config: ") + e.what());
  }

  if (spec.sites < 2) throw ValidationError("network config: need at least 2 sites");
  if (spec.onsite.empty()) spec.onsite.assign(spec.sites, 0.0);
  if (spec.onsite.size() != spec.sites)
    throw ValidationError("network config: onsite list must have one entry per site");
  for (const auto& c : spec.couplings)
    if (c.i < 1 || c.i > spec.sites || c.j < 1 || c.j > spec.sites || c.i == c.j)
      throw ValidationError("network config: coupling site indices must be distinct and in 1..sites");
  for (const auto& c : spec.connectors)
    if (c.a < 1 || c.a > spec.sites || c.b < 1 || c.b > spec.sites || c.a == c.b)
      throw ValidationError("network config: connector site indices must be distinct and in 1..sites");
  return spec;
}

inline NetworkSpec load_network_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open network config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("network config parse error: ") + e.what());
  }
  return parse_network_spec(j);
}

inline void save_network_spec(const NetworkSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write network config: " + path);
  out << to_json(spec).dump(2) << '\n';
}

// Assembles the Hamiltonian: base couplings and on-site energies first, then
// each connector applied as a similarity transformation.
inline NetworkHamiltonian realize(const NetworkSpec& spec) {
  ComplexMatrix m(spec.sites);
  for (std::size_t i = 0; i < spec.sites; ++i) m(i, i) = spec.onsite[i];
  for (const auto& c : spec.couplings) {
    m(c.i - 1, c.j - 1) += c.strength;
    m(c.j - 1, c.i - 1) += c.strength;
  }

  HermitianOperator h{std::move(m)};
  for (const auto& c : spec.connectors) {
    const ComplexMatrix u = hadamard_connector(spec.sites, {c.a - 1, c.b - 1});
    h = similarity_transform(h, u);
  }
  return detail::finalize_network(h.matrix());
}

}  // namespace spinnet
