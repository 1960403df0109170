// Acceptance suite: end-to-end checks of the simulator against its exact
// zero-disorder predictions and the disorder-robustness thresholds, printed
// one line per criterion. Exit code is the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "helpers.hpp"
#include "spinnet/spinnet.hpp"

using namespace spinnet;
namespace st = spinnet::testing;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

int g_failures = 0;

class Criterion {
 public:
  Criterion(int id, std::string name) : id_(id), name_(std::move(name)) {}

  void require(bool ok, const std::string& detail) {
    if (!ok) {
      pass_ = false;
      if (!first_failure_.empty()) first_failure_ += "; ";
      first_failure_ += detail;
    }
  }

  ~Criterion() {
    std::printf("criterion %d %-28s %s%s%s\n", id_, name_.c_str(), pass_ ? "PASS" : "FAIL",
                pass_ ? "" : " -- ", pass_ ? "" : first_failure_.c_str());
    std::fflush(stdout);
    if (!pass_) ++g_failures;
  }

 private:
  int id_;
  std::string name_;
  bool pass_ = true;
  std::string first_failure_;
};

std::string describe(const char* what, double got, double bound) {
  std::ostringstream out;
  out << what << " = " << got << " vs bound " << bound;
  return out.str();
}

unsigned workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

double wrap_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

// --- criterion 1: spectrum and spectral projectors ---

ComplexMatrix analytic_projector(double eigenvalue) {
  const double q = 1.0 / (2.0 * kSqrt2);
  std::vector<std::vector<double>> columns;
  if (eigenvalue < -1.0) {
    columns = {{q * kSqrt2, -2 * q, q, 0, 0, q}, {0, 0, -q, -q * kSqrt2, 2 * q, q}};
  } else if (eigenvalue > 1.0) {
    columns = {{q * kSqrt2, 2 * q, q, 0, 0, q}, {0, 0, q, q * kSqrt2, 2 * q, -q}};
  } else {
    columns = {{-kSqrt2 / 2, 0, 0.5, 0, 0, 0.5}, {0, 0, -0.5, kSqrt2 / 2, 0, 0.5}};
  }
  ComplexMatrix p(6);
  for (const auto& v : columns)
    for (std::size_t r = 0; r < 6; ++r)
      for (std::size_t c = 0; c < 6; ++c) p(r, c) += v[r] * v[c];
  return p;
}

ComplexMatrix numeric_projector(const Spectrum& s, double eigenvalue) {
  ComplexMatrix p(6);
  for (std::size_t j = 0; j < 6; ++j) {
    if (std::abs(s.eigenvalues[j] - eigenvalue) > 1e-6) continue;
    for (std::size_t r = 0; r < 6; ++r)
      for (std::size_t c = 0; c < 6; ++c)
        p(r, c) += s.eigenvectors(r, j) * std::conj(s.eigenvectors(c, j));
  }
  return p;
}

void check_spectrum() {
  Criterion criterion(1, "spectrum");
  const Spectrum s = eig_hermitian(st::six_site_network(1.0).operator_);
  const double expected[6] = {-kSqrt2, -kSqrt2, 0.0, 0.0, kSqrt2, kSqrt2};
  for (int i = 0; i < 6; ++i)
    criterion.require(std::abs(s.eigenvalues[i] - expected[i]) < 1e-10,
                      describe("eigenvalue error", std::abs(s.eigenvalues[i] - expected[i]), 1e-10));
  for (double lambda : {-kSqrt2, 0.0, kSqrt2}) {
    const double diff = numeric_projector(s, lambda).max_abs_diff(analytic_projector(lambda));
    criterion.require(diff < 1e-9, describe("projector mismatch", diff, 1e-9));
  }
}

// --- criterion 2: exact routing at zero disorder ---

void check_routing_exactness() {
  Criterion criterion(2, "routing exactness");
  const NetworkHamiltonian net = st::six_site_network(1.0);
  const double t_m = mirroring_time(1.0);

  const RouterResult single = run_router(net, 1);
  criterion.require(std::abs(single.fidelities.at(2) - 1.0) < 1e-10,
                    describe("fidelity at 2 t_m", single.fidelities.at(2), 1.0));

  const Schedule repeated{StateVector::basis_state(6, 0),
                          {{t_m, kControlSite, kPi},
                           {3.0 * t_m, kControlSite, kPi},
                           {5.0 * t_m, kControlSite, kPi}},
                          net};
  const auto samples = run_schedule(repeated, 6.0 * t_m, t_m / 4.0);
  const StateVector site1 = StateVector::basis_state(6, 0);
  const StateVector site4 = StateVector::basis_state(6, 3);
  bool saw_4tm = false, saw_6tm = false;
  for (const TimedState& sample : samples) {
    if (std::abs(sample.time - 4.0 * t_m) < 1e-9) {
      saw_4tm = true;
      criterion.require(std::abs(fidelity(site1, sample.state) - 1.0) < 1e-10,
                        describe("fidelity on site 1 at 4 t_m", fidelity(site1, sample.state), 1.0));
    }
    if (std::abs(sample.time - 6.0 * t_m) < 1e-9) {
      saw_6tm = true;
      criterion.require(std::abs(fidelity(site4, sample.state) - 1.0) < 1e-10,
                        describe("fidelity on site 4 at 6 t_m", fidelity(site4, sample.state), 1.0));
    }
  }
  criterion.require(saw_4tm && saw_6tm, "schedule samples missed the measurement times");
}

// --- criterion 3: analytic fidelity laws on a one-degree grid ---

void check_fidelity_laws() {
  Criterion criterion(3, "fidelity laws");
  const detail::ProtocolContext ctx = detail::prepare(st::six_site_network(1.0));
  double worst = 0.0;
  for (int deg = 0; deg < 360; ++deg) {
    const double theta = deg * kPi / 180.0;
    const double f1 = detail::sense_fidelity(ctx, theta);
    const double f2 = detail::sense_fidelity(ctx, theta - kPi / 2.0);
    worst = std::max(worst, std::abs(f1 - 0.5 * (1.0 + std::cos(theta))));
    worst = std::max(worst, std::abs(f2 - 0.5 * (1.0 + std::sin(theta))));
  }
  criterion.require(worst < 1e-10, describe("max law deviation", worst, 1e-10));
}

// --- criterion 4: entanglement values and the closed-form oracle ---

void check_entanglement() {
  Criterion criterion(4, "entanglement");
  const NetworkHamiltonian net = st::six_site_network(1.0);
  const Spectrum s = eig_hermitian(net.operator_);
  const double t_m = mirroring_time(1.0);

  const StateVector at_mirror = evolve(s, StateVector::basis_state(6, 0), t_m);
  criterion.require(std::abs(eof(reduce_two_sites(at_mirror, 2, 5)) - 1.0) < 1e-10,
                    describe("EOF(3,6) at t_m", eof(reduce_two_sites(at_mirror, 2, 5)), 1.0));

  const StateVector returned =
      evolve(s, phase_kick(at_mirror, kControlSite, kPi / 2.0), t_m);
  criterion.require(std::abs(eof(reduce_two_sites(returned, 0, 3)) - 1.0) < 1e-10,
                    describe("EOF(1,4) at 2 t_m", eof(reduce_two_sites(returned, 0, 3)), 1.0));

  RandomStream rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const StateVector psi = st::random_state(6, rng);
    const std::size_t a = static_cast<std::size_t>(rng.next_u64() % 6);
    std::size_t b = static_cast<std::size_t>(rng.next_u64() % 6);
    if (b == a) b = (a + 1) % 6;
    const double concurrence = 2.0 * std::abs(psi[a]) * std::abs(psi[b]);
    const double x = 0.5 * (1.0 + std::sqrt(std::max(1.0 - concurrence * concurrence, 0.0)));
    const auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
    const double oracle = term(x) + term(1.0 - x);
    worst = std::max(worst, std::abs(eof(reduce_two_sites(psi, a, b)) - oracle));
  }
  criterion.require(worst < 1e-9, describe("max oracle deviation", worst, 1e-9));
}

// --- criteria 5-8: disorder robustness ---

std::map<int, double> sweep_means(Protocol protocol, DisorderKind kind, Distribution dist,
                                  double scale, std::vector<int> times) {
  SweepConfig cfg;
  cfg.protocol = protocol;
  cfg.disorder_kind = kind;
  cfg.distribution = dist;
  cfg.error_scales = {scale};
  cfg.realizations = 1000;
  cfg.base_seed = 42;
  cfg.measurement_times = std::move(times);
  cfg.workers = workers();
  const SweepResult result = run_sweep(st::six_site_network(1.0), cfg);
  std::map<int, double> means;
  for (const SweepPoint& p : result.points)
    means[static_cast<int>(p.coordinate)] = p.mean;
  return means;
}

void check_router_robustness() {
  Criterion criterion(5, "router robustness");
  for (Distribution dist : {Distribution::Flat, Distribution::Gaussian}) {
    const char* tag = dist == Distribution::Flat ? "flat" : "gauss";

    const auto heavy = sweep_means(Protocol::Router, DisorderKind::Diagonal, dist, 0.25,
                                   {2, 4, 6});
    criterion.require(heavy.at(2) >= 0.97,
                      describe((std::string("diag 0.25 @2t_m ") + tag).c_str(), heavy.at(2), 0.97));
    criterion.require(heavy.at(4) >= 0.93,
                      describe((std::string("diag 0.25 @4t_m ") + tag).c_str(), heavy.at(4), 0.93));
    criterion.require(heavy.at(6) >= 0.87,
                      describe((std::string("diag 0.25 @6t_m ") + tag).c_str(), heavy.at(6), 0.87));

    const auto mild = sweep_means(Protocol::Router, DisorderKind::Diagonal, dist, 0.15, {2, 6});
    criterion.require(mild.at(2) >= 0.98,
                      describe((std::string("diag 0.15 @2t_m ") + tag).c_str(), mild.at(2), 0.98));
    criterion.require(mild.at(6) >= 0.94,
                      describe((std::string("diag 0.15 @6t_m ") + tag).c_str(), mild.at(6), 0.94));

    const auto coupling = sweep_means(Protocol::Router, DisorderKind::OffDiagonal, dist, 0.10,
                                      {2, 4, 6});
    for (int t : {2, 4, 6})
      criterion.require(coupling.at(t) >= 0.89,
                        describe((std::string("offdiag 0.10 ") + tag).c_str(), coupling.at(t), 0.89));
  }
}

void check_eof_robustness() {
  Criterion criterion(6, "EOF robustness");
  for (Distribution dist : {Distribution::Flat, Distribution::Gaussian}) {
    const char* tag = dist == Distribution::Flat ? "flat" : "gauss";

    const auto mild = sweep_means(Protocol::Entangler, DisorderKind::Diagonal, dist, 0.15, {2});
    criterion.require(mild.at(2) >= 0.98,
                      describe((std::string("diag 0.15 @2t_m ") + tag).c_str(), mild.at(2), 0.98));

    const auto heavy = sweep_means(Protocol::Entangler, DisorderKind::Diagonal, dist, 0.25, {2});
    criterion.require(heavy.at(2) >= 0.94,
                      describe((std::string("diag 0.25 @2t_m ") + tag).c_str(), heavy.at(2), 0.94));

    const auto coupling = sweep_means(Protocol::Entangler, DisorderKind::OffDiagonal, dist, 0.10,
                                      {2, 4});
    criterion.require(coupling.at(2) >= 0.96,
                      describe((std::string("offdiag 0.10 @2t_m ") + tag).c_str(), coupling.at(2), 0.96));
    criterion.require(coupling.at(4) >= 0.94,
                      describe((std::string("offdiag 0.10 @4t_m ") + tag).c_str(), coupling.at(4), 0.94));
  }
}

void check_sensor_accuracy() {
  Criterion criterion(7, "sensor accuracy");
  SweepConfig cfg;
  cfg.protocol = Protocol::Sensor;
  cfg.disorder_kind = DisorderKind::OffDiagonal;
  cfg.distribution = Distribution::Gaussian;
  cfg.error_scales = {0.20};
  cfg.realizations = 1000;
  cfg.base_seed = 42;
  cfg.workers = workers();
  const SweepResult result = run_sweep(st::six_site_network(1.0), cfg);

  const double one_degree = kPi / 180.0;
  double max_stderr = 0.0, argmax_theta = 0.0, max_error = 0.0;
  for (const SweepPoint& p : result.points) {
    if (p.std_error > max_stderr) {
      max_stderr = p.std_error;
      argmax_theta = p.coordinate;
    }
    max_error = std::max(max_error, wrap_distance(p.mean, p.coordinate));
  }
  criterion.require(max_stderr < one_degree,
                    describe("max std of the mean (deg)", max_stderr / one_degree, 1.0));
  const double argmax_deg = argmax_theta * 180.0 / kPi;
  criterion.require(argmax_deg >= 30.0 && argmax_deg <= 60.0,
                    describe("argmax of the std (deg)", argmax_deg, 45.0));
  criterion.require(max_error < one_degree,
                    describe("max retrieval error (deg)", max_error / one_degree, 1.0));
}

void check_distribution_equivalence() {
  Criterion criterion(8, "distribution equivalence");
  for (DisorderKind kind : {DisorderKind::Diagonal, DisorderKind::OffDiagonal}) {
    const char* tag = kind == DisorderKind::Diagonal ? "diag" : "offdiag";
    for (double scale : {0.05, 0.10, 0.15, 0.20}) {
      const double flat = sweep_means(Protocol::Router, kind, Distribution::Flat, scale, {2}).at(2);
      const double gauss =
          sweep_means(Protocol::Router, kind, Distribution::Gaussian, scale, {2}).at(2);
      criterion.require(std::abs(flat - gauss) < 0.02,
                        describe((std::string("router ") + tag).c_str(), std::abs(flat - gauss), 0.02));
    }
    for (double scale : {0.05, 0.10, 0.15, 0.20, 0.25, 0.30}) {
      const double flat =
          sweep_means(Protocol::Entangler, kind, Distribution::Flat, scale, {2}).at(2);
      const double gauss =
          sweep_means(Protocol::Entangler, kind, Distribution::Gaussian, scale, {2}).at(2);
      criterion.require(std::abs(flat - gauss) < 0.02,
                        describe((std::string("EOF ") + tag).c_str(), std::abs(flat - gauss), 0.02));
    }
  }
}

// --- criterion 9: property suite ---

void check_properties() {
  Criterion criterion(9, "property suite");
  RandomStream rng(777);

  // Norm conservation.
  for (int trial = 0; trial < 100; ++trial) {
    const Spectrum s = eig_hermitian(HermitianOperator(st::random_hermitian(6, rng)));
    const StateVector psi = evolve(s, st::random_state(6, rng), 30.0 * rng.next_double());
    double norm2 = 0.0;
    for (std::size_t i = 0; i < 6; ++i) norm2 += std::norm(psi[i]);
    criterion.require(std::abs(norm2 - 1.0) < 1e-10, describe("norm drift", norm2 - 1.0, 1e-10));
  }

  // Hermiticity preserved under disorder.
  const NetworkHamiltonian net = st::six_site_network(1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const DisorderSpec spec{rng.next_double(),
                            trial % 2 == 0 ? Distribution::Flat : Distribution::Gaussian,
                            trial % 4 < 2 ? DisorderKind::Diagonal : DisorderKind::OffDiagonal};
    const NetworkHamiltonian out = apply_disorder(net, spec, rng);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        criterion.require(out.operator_(i, j) == std::conj(out.operator_(j, i)),
                          "disorder broke Hermiticity");
  }

  // Spectrum invariance under the connector unitary.
  for (double j : {0.7, 1.0, 2.0}) {
    const Spectrum before = eig_hermitian(build_uncoupled_pair(j).operator_);
    const Spectrum after = eig_hermitian(st::six_site_network(j).operator_);
    for (int i = 0; i < 6; ++i)
      criterion.require(std::abs(before.eigenvalues[i] - after.eigenvalues[i]) < 1e-10,
                        "connector changed the spectrum");
  }

  // Evolution composition.
  for (int trial = 0; trial < 20; ++trial) {
    const Spectrum s = eig_hermitian(HermitianOperator(st::random_hermitian(6, rng)));
    const StateVector psi = st::random_state(6, rng);
    const double t1 = 10.0 * rng.next_double();
    const double t2 = 10.0 * rng.next_double();
    const StateVector direct = evolve(s, psi, t1 + t2);
    const StateVector stepped = evolve(s, evolve(s, psi, t1), t2);
    for (std::size_t i = 0; i < 6; ++i)
      criterion.require(std::abs(direct[i] - stepped[i]) < 1e-9, "composition mismatch");
  }

  // Determinism and worker independence of seeded sweeps.
  SweepConfig cfg;
  cfg.protocol = Protocol::Router;
  cfg.disorder_kind = DisorderKind::OffDiagonal;
  cfg.distribution = Distribution::Gaussian;
  cfg.error_scales = {0.1};
  cfg.realizations = 100;
  cfg.base_seed = 9;
  cfg.measurement_times = {2, 4};
  cfg.workers = 1;
  const SweepResult serial = run_sweep(net, cfg);
  const SweepResult again = run_sweep(net, cfg);
  cfg.workers = 4;
  const SweepResult parallel = run_sweep(net, cfg);
  for (std::size_t i = 0; i < serial.points.size(); ++i) {
    criterion.require(serial.points[i].mean == again.points[i].mean &&
                          serial.points[i].sample_std == again.points[i].sample_std,
                      "seeded sweep is not deterministic");
    criterion.require(serial.points[i].mean == parallel.points[i].mean,
                      "parallel and serial sweeps disagree");
  }
}

}  // namespace

int main() {
  check_spectrum();
  check_routing_exactness();
  check_fidelity_laws();
  check_entanglement();
  check_router_robustness();
  check_eof_robustness();
  check_sensor_accuracy();
  check_distribution_equivalence();
  check_properties();

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria failed\n", g_failures);
  }
  return g_failures;
}
