// Command-line front end: spectrum inspection, occupation traces, single
// protocol runs, and disorder-averaged sweeps. Times are given in units of
// the mirroring time t_m and angles in degrees; both are converted on entry.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "spinnet/spinnet.hpp"

namespace {

using namespace spinnet;

constexpr double kPi = std::numbers::pi;
constexpr double kRadPerDeg = kPi / 180.0;

// Angles on the command line: plain numbers are degrees; forms built on "pi"
// ("pi", "-pi/2", "0.5pi", "3pi/4") are radians.
double parse_angle(const std::string& text) {
  const std::size_t pos = text.find("pi");
  if (pos == std::string::npos) {
    return std::stod(text) * kRadPerDeg;
  }
  double coefficient = 1.0;
  const std::string before = text.substr(0, pos);
  if (before == "-") {
    coefficient = -1.0;
  } else if (!before.empty() && before != "+") {
    coefficient = std::stod(before);
  }
  double divisor = 1.0;
  const std::string after = text.substr(pos + 2);
  if (!after.empty()) {
    if (after[0] != '/' || after.size() < 2)
      throw ValidationError("cannot parse angle: " + text);
    divisor = std::stod(after.substr(1));
  }
  return coefficient * kPi / divisor;
}

// "start:stop:step" in degrees, inclusive of stop up to rounding.
std::vector<double> parse_grid_degrees(const std::string& text) {
  double start = 0.0, stop = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
    throw ValidationError("cannot parse grid (expected start:stop:step in degrees): " + text);
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
  if (grid.empty()) throw ValidationError("grid is empty: " + text);
  return grid;
}

struct KickSpec {
  std::size_t site_1based = 6;
  double theta = kPi;
  double at_tm = 1.0;
};

// "site=6,phase=pi,at=1"
KickSpec parse_kick(const std::string& text) {
  KickSpec kick;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    const std::size_t eq = field.find('=');
    if (eq == std::string::npos)
      throw ValidationError("cannot parse kick field (expected key=value): " + field);
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "site") {
      kick.site_1based = std::stoul(value);
    } else if (key == "phase") {
      kick.theta = parse_angle(value);
    } else if (key == "at") {
      kick.at_tm = std::stod(value);
    } else {
      throw ValidationError("unknown kick field: " + key);
    }
  }
  if (kick.site_1based < 1) throw ValidationError("kick site numbers start at 1");
  return kick;
}

DisorderKind parse_disorder_kind(const std::string& s) {
  if (s == "diag") return DisorderKind::Diagonal;
  if (s == "offdiag") return DisorderKind::OffDiagonal;
  throw ValidationError("unknown disorder kind: " + s);
}

Distribution parse_distribution(const std::string& s) {
  if (s == "flat") return Distribution::Flat;
  if (s == "gauss") return Distribution::Gaussian;
  throw ValidationError("unknown distribution: " + s);
}

unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Writes to the file when a path is given, otherwise to stdout.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct NetworkOptions {
  std::string config_path;
  double j = 1.0;

  NetworkHamiltonian build() const {
    if (!config_path.empty()) return realize(load_network_spec(config_path));
    return realize(NetworkSpec::six_site(j));
  }
};

struct DisorderOptions {
  std::string kind = "none";
  std::string distribution = "flat";
  double scale = 0.0;
  std::uint64_t seed = 1;

  bool enabled() const { return kind != "none"; }

  DisorderSpec spec() const {
    if (!enabled() && scale != 0.0)
      throw ValidationError("--scale requires --disorder diag or offdiag");
    return DisorderSpec{scale, parse_distribution(distribution),
                        enabled() ? parse_disorder_kind(kind) : DisorderKind::Diagonal};
  }

  // A single realization, drawn exactly like realization 0 of a sweep.
  NetworkHamiltonian realize_device(const NetworkHamiltonian& clean) const {
    if (!enabled()) return clean;
    RandomStream rng = substream(seed, {0, 0});
    return apply_disorder(clean, spec(), rng);
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--disorder", kind, "disorder kind: none, diag, offdiag")
        ->check(CLI::IsMember({"none", "diag", "offdiag"}));
    cmd->add_option("--dist", distribution, "error distribution: flat, gauss")
        ->check(CLI::IsMember({"flat", "gauss"}));
    cmd->add_option("--scale", scale, "error scale E in units of the base coupling");
    cmd->add_option("--seed", seed, "random seed");
  }
};

void print_spectrum(const NetworkHamiltonian& net, std::ostream& out) {
  const Spectrum s = eig_hermitian(net.operator_);
  out << "eigenvalues:";
  for (double lambda : s.eigenvalues) out << ' ' << format_double(lambda);
  out << "\n\neigenvectors (columns, site amplitudes as re+im*i):\n";
  for (std::size_t i = 0; i < net.dim(); ++i) {
    out << "site " << (i + 1) << ':';
    for (std::size_t j = 0; j < net.dim(); ++j) {
      const Complex z = s.eigenvectors(i, j);
      out << ' ' << format_double(z.real());
      if (z.imag() != 0.0) out << (z.imag() > 0 ? "+" : "") << format_double(z.imag()) << 'i';
    }
    out << '\n';
  }
}

int run_trace(const NetworkOptions& network, const std::vector<std::string>& kick_texts,
              int initial_site, double tmax_tm, double dt_tm, const std::string& out_path) {
  const NetworkHamiltonian net = network.build();
  if (initial_site < 1 || static_cast<std::size_t>(initial_site) > net.dim())
    throw ValidationError("--initial site out of range");
  const double t_m = mirroring_time(net.base_scale);

  std::vector<KickEvent> kicks;
  for (const std::string& text : kick_texts) {
    const KickSpec k = parse_kick(text);
    if (k.site_1based > net.dim()) throw ValidationError("kick site out of range");
    kicks.push_back(KickEvent{k.at_tm * t_m, k.site_1based - 1, k.theta});
  }

  const Schedule schedule{
      StateVector::basis_state(net.dim(), static_cast<std::size_t>(initial_site - 1)), kicks,
      net};
  const auto samples = run_schedule(schedule, tmax_tm * t_m, dt_tm * t_m);

  OutputTarget out(out_path);
  write_trace(samples, out.stream(), t_m);
  return 0;
}

int run_route_or_entangle(bool router, const NetworkOptions& network,
                          const DisorderOptions& disorder, int periods,
                          const std::string& out_path) {
  const NetworkHamiltonian device = disorder.realize_device(network.build());
  OutputTarget out(out_path);
  if (router) {
    const RouterResult result = run_router(device, periods);
    out.stream() << "time_tm,fidelity\n";
    for (const auto& [multiple, f] : result.fidelities)
      out.stream() << multiple << ',' << format_double(f) << '\n';
  } else {
    const auto eofs = run_entangler(device, periods);
    out.stream() << "time_tm,eof\n";
    for (const auto& [multiple, value] : eofs)
      out.stream() << multiple << ',' << format_double(value) << '\n';
  }
  return 0;
}

void write_sidecar(const SweepResult& result, const std::string& csv_path) {
  std::ofstream meta(csv_path + ".meta.json");
  if (!meta) throw ValidationError("cannot open metadata sidecar for: " + csv_path);
  write_sweep_metadata(result, meta);
}

int run_sense(const NetworkOptions& network, const DisorderOptions& disorder,
              std::optional<double> theta_deg, const std::string& grid_text, int realizations,
              unsigned workers, const std::string& out_path) {
  SweepConfig cfg;
  cfg.protocol = Protocol::Sensor;
  cfg.disorder_kind = disorder.enabled() ? parse_disorder_kind(disorder.kind)
                                         : DisorderKind::Diagonal;
  cfg.distribution = parse_distribution(disorder.distribution);
  cfg.error_scales = {disorder.enabled() ? disorder.scale : 0.0};
  if (!disorder.enabled() && disorder.scale != 0.0)
    throw ValidationError("--scale requires --disorder diag or offdiag");
  cfg.realizations = realizations;
  cfg.base_seed = disorder.seed;
  cfg.workers = workers;

  if (theta_deg && !grid_text.empty())
    throw ValidationError("give either --theta or --grid, not both");
  cfg.theta_grid.clear();
  if (theta_deg) {
    cfg.theta_grid.push_back(*theta_deg * kRadPerDeg);
  } else if (!grid_text.empty()) {
    for (double deg : parse_grid_degrees(grid_text)) cfg.theta_grid.push_back(deg * kRadPerDeg);
  } else {
    throw ValidationError("sense needs --theta <degrees> or --grid start:stop:step");
  }

  const SweepResult result = run_sweep(network.build(), cfg);
  if (!out_path.empty()) {
    OutputTarget out(out_path);
    write_sensor_curves_csv(result, out.stream());
    write_sidecar(result, out_path);
    return 0;
  }
  for (const SensorCurvePoint& p : result.sensor_curves) {
    std::cout << "theta " << format_degrees(p.theta / kRadPerDeg)
              << " deg: f1 " << format_double(p.mean_f1) << ", f2 " << format_double(p.mean_f2)
              << ", retrieved " << format_degrees(p.estimate.value / kRadPerDeg) << " deg"
              << " (estimator " << (p.estimate.chosen == Estimator::FromF1 ? "f1" : "f2")
              << ", std " << format_degrees((p.estimate.chosen == Estimator::FromF1
                                                 ? p.estimate.std1
                                                 : p.estimate.std2) /
                                            kRadPerDeg)
              << " deg, n " << p.n << ")\n";
  }
  return 0;
}

int run_sweep_command(const NetworkOptions& network, const std::string& protocol,
                      const std::string& disorder_kind, const std::string& distribution,
                      std::vector<double> scales, int realizations, std::uint64_t seed,
                      std::vector<int> times, const std::string& theta_grid_text,
                      unsigned workers, const std::string& out_path) {
  SweepConfig cfg;
  cfg.protocol = parse_protocol(protocol);
  cfg.disorder_kind = parse_disorder_kind(disorder_kind);
  cfg.distribution = parse_distribution(distribution);
  if (!scales.empty()) cfg.error_scales = std::move(scales);
  cfg.realizations = realizations;
  cfg.base_seed = seed;
  if (!times.empty()) cfg.measurement_times = std::move(times);
  cfg.theta_grid.clear();
  for (double deg : parse_grid_degrees(theta_grid_text))
    cfg.theta_grid.push_back(deg * kRadPerDeg);
  cfg.workers = workers;

  const SweepResult result = run_sweep(network.build(), cfg);
  OutputTarget out(out_path);
  write_sweep_csv(result, out.stream());
  if (!out_path.empty()) write_sidecar(result, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-excitation spin network simulator"};
  app.require_subcommand(1);
  app.fallthrough(true);
  app.set_version_flag("--version", std::string(kVersion));

  NetworkOptions network;
  app.add_option("--config", network.config_path, "network definition JSON file");
  app.add_option("--j", network.j, "coupling strength of the built-in six-site network");

  // spectrum
  CLI::App* spectrum_cmd =
      app.add_subcommand("spectrum", "print eigenvalues and eigenvectors of the network");
  std::string spectrum_out;
  spectrum_cmd->add_option("--out", spectrum_out, "output path (default: stdout)");

  // trace
  CLI::App* trace_cmd =
      app.add_subcommand("trace", "per-site occupation time series (CSV, times in t_m)");
  std::vector<std::string> kick_texts;
  int initial_site = 1;
  double tmax_tm = 6.0, dt_tm = 0.01;
  std::string trace_out;
  trace_cmd->add_option("--initial", initial_site, "injection site (1-based)");
  trace_cmd->add_option("--kick", kick_texts,
                        "phase kick as site=S,phase=P,at=T (T in t_m; repeatable)");
  trace_cmd->add_option("--tmax", tmax_tm, "end time in t_m units");
  trace_cmd->add_option("--dt", dt_tm, "sample spacing in t_m units");
  trace_cmd->add_option("--out", trace_out, "output path (default: stdout)");

  // route / entangle
  CLI::App* route_cmd = app.add_subcommand("route", "run the routing protocol once");
  CLI::App* entangle_cmd =
      app.add_subcommand("entangle", "run the entanglement-generation protocol once");
  DisorderOptions route_disorder, entangle_disorder;
  int route_periods = 3, entangle_periods = 3;
  std::string route_out, entangle_out;
  route_disorder.attach(route_cmd);
  route_cmd->add_option("--periods", route_periods, "number of 2 t_m measurement periods");
  route_cmd->add_option("--out", route_out, "output path (default: stdout)");
  entangle_disorder.attach(entangle_cmd);
  entangle_cmd->add_option("--periods", entangle_periods, "number of 2 t_m measurement periods");
  entangle_cmd->add_option("--out", entangle_out, "output path (default: stdout)");

  // sense
  CLI::App* sense_cmd = app.add_subcommand("sense", "retrieve an unknown control phase");
  DisorderOptions sense_disorder;
  std::optional<double> sense_theta;
  std::string sense_grid, sense_out;
  int sense_realizations = 1;
  unsigned sense_workers = default_workers();
  sense_disorder.attach(sense_cmd);
  sense_cmd->add_option("--theta", sense_theta, "unknown angle in degrees");
  sense_cmd->add_option("--grid", sense_grid, "angle grid start:stop:step in degrees");
  sense_cmd->add_option("--realizations", sense_realizations, "disorder realizations per angle");
  sense_cmd->add_option("--workers", sense_workers, "worker threads");
  sense_cmd->add_option("--out", sense_out, "CSV output path (default: print to stdout)");

  // sweep
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "disorder-averaged sweep over error scales");
  std::string sweep_protocol, sweep_disorder = "diag", sweep_dist = "flat";
  std::vector<double> sweep_scales;
  std::vector<int> sweep_times;
  std::string sweep_theta_grid = "0:355:5";
  int sweep_realizations = 1000;
  std::uint64_t sweep_seed = 1;
  unsigned sweep_workers = default_workers();
  std::string sweep_out = "sweep.csv";
  sweep_cmd->add_option("--protocol", sweep_protocol, "router, entangler, or sensor")
      ->required()
      ->check(CLI::IsMember({"router", "entangler", "sensor"}));
  sweep_cmd->add_option("--disorder", sweep_disorder, "diag or offdiag")
      ->check(CLI::IsMember({"diag", "offdiag"}));
  sweep_cmd->add_option("--dist", sweep_dist, "flat or gauss")
      ->check(CLI::IsMember({"flat", "gauss"}));
  sweep_cmd->add_option("--scale", sweep_scales, "error scales (default 0:0.4:0.05)")
      ->delimiter(',');
  sweep_cmd->add_option("--realizations", sweep_realizations, "realizations per scale");
  sweep_cmd->add_option("--seed", sweep_seed, "base seed for the disorder substreams");
  sweep_cmd->add_option("--times", sweep_times, "measurement times as multiples of t_m")
      ->delimiter(',');
  sweep_cmd->add_option("--theta-grid", sweep_theta_grid,
                        "sensor angle grid start:stop:step in degrees");
  sweep_cmd->add_option("--workers", sweep_workers, "worker threads");
  sweep_cmd->add_option("--out", sweep_out, "CSV output path; sidecar <out>.meta.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (spectrum_cmd->parsed()) {
      OutputTarget out(spectrum_out);
      print_spectrum(network.build(), out.stream());
      return 0;
    }
    if (trace_cmd->parsed())
      return run_trace(network, kick_texts, initial_site, tmax_tm, dt_tm, trace_out);
    if (route_cmd->parsed())
      return run_route_or_entangle(true, network, route_disorder, route_periods, route_out);
    if (entangle_cmd->parsed())
      return run_route_or_entangle(false, network, entangle_disorder, entangle_periods,
                                   entangle_out);
    if (sense_cmd->parsed())
      return run_sense(network, sense_disorder, sense_theta, sense_grid, sense_realizations,
                       sense_workers, sense_out);
    if (sweep_cmd->parsed())
      return run_sweep_command(network, sweep_protocol, sweep_disorder, sweep_dist,
                               sweep_scales, sweep_realizations, sweep_seed, sweep_times,
                               sweep_theta_grid, sweep_workers, sweep_out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
