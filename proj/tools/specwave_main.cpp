// Command-line front end over the C interface: loads TOML scenarios, runs the
// solver pipeline, and emits CSV/JSON artifacts suitable for offline plotting.
// All numeric output is byte-deterministic for a fixed scenario and seed.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specwave.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitInconclusive = 4;

const char* status_name(sw_status status) {
  switch (status) {
    case SW_OK: return "ok";
    case SW_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case SW_ERR_DIMENSION_MISMATCH: return "dimension-mismatch";
    case SW_ERR_ASSUMPTION_VIOLATION: return "assumption-violation";
    case SW_ERR_SINGULAR: return "singular";
    case SW_ERR_UNSUPPORTED: return "unsupported";
    case SW_ERR_DIVERGENCE: return "divergence";
    case SW_ERR_VALIDATION: return "validation";
    case SW_ERR_FIT_FAILURE: return "fit-failure";
    case SW_ERR_INCONCLUSIVE: return "inconclusive";
    case SW_ERR_IO: return "io";
    case SW_ERR_INTERNAL: return "internal";
  }
  return "internal";
}

int exit_code_for(sw_status status) {
  switch (status) {
    case SW_OK: return kExitOk;
    case SW_ERR_DIVERGENCE: return kExitDivergence;
    case SW_ERR_INCONCLUSIVE: return kExitInconclusive;
    case SW_ERR_INTERNAL: return kExitFailure;
    default: return kExitValidation;
  }
}

// The structured failure channel: prints one JSON object to stdout and carries
// the process exit code.
struct CliError {
  int code;
  json body;
};

[[noreturn]] void fail(sw_status status, const std::string& message) {
  json error{{"kind", status_name(status)}, {"message", message}};
  if (status == SW_ERR_DIVERGENCE) {
    const size_t count = sw_last_divergence_ratios(nullptr, 0);
    std::vector<double> ratios(count);
    sw_last_divergence_ratios(ratios.data(), count);
    error["contraction_ratios"] = ratios;
  }
  const int code = exit_code_for(status);
  error["exit_code"] = code;
  throw CliError{code, json{{"error", error}}};
}

[[noreturn]] void fail_validation(const std::string& message) {
  fail(SW_ERR_VALIDATION, message);
}

void check(sw_status status) {
  if (status != SW_OK) fail(status, sw_last_error());
}

std::string format_double(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

double require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) fail(SW_ERR_INTERNAL, what + " is not finite");
  return v;
}

/* ---------------------------------------------------------------- scenario */

struct Scenario {
  std::string problem_class;  // linear | semilinear | general | higher-order

  std::string basis_kind;  // hermite | torus | explicit (or explicit:<path>)
  std::string basis_path;
  int dimension = 1;
  int max_degree = 7;
  int quadrature = 0;
  int max_frequency = 4;
  int grid = 0;

  double b = 1.0;
  double m = 0.0;

  double p = 3.0;
  double mu = 0.0;
  int phi_mode = 0;
  bool first_order_scale = false;

  std::string profile = "single-mode";
  int mode = 0;
  double amplitude = 1e-2;
  double velocity_amplitude = 0.0;
  double decay = 1.0;
  std::uint64_t seed = 12345;
  std::string initial_path;

  double t_end = 8.0;
  int samples = 161;

  double picard_tol = 1e-10;
  int max_iterations = 25;
  double smallness_threshold = 1e-2;
  double smallness_sigma = 1.0;

  std::string prefix = "run";
};

Scenario load_scenario(const std::string& path) {
  if (!fs::exists(path)) fail(SW_ERR_IO, "scenario file not found: " + path);
  Scenario sc;
  CLI::App loader{"scenario"};
  loader.set_config("--config")->required();
  loader.allow_config_extras(false);

  // TOML sections map onto configurable subcommands; unknown keys anywhere
  // are a hard error.
  auto section = [&loader](const std::string& name) {
    auto* sub = loader.add_subcommand(name);
    sub->configurable();
    sub->allow_config_extras(false);
    return sub;
  };

  auto* problem = section("problem");
  problem->add_option("--class", sc.problem_class)
      ->check(CLI::IsMember({"linear", "semilinear", "general", "higher-order"}));

  auto* basis = section("basis");
  basis->add_option("--kind", sc.basis_kind);
  basis->add_option("--path", sc.basis_path);
  basis->add_option("--dimension", sc.dimension);
  basis->add_option("--max_degree", sc.max_degree);
  basis->add_option("--quadrature", sc.quadrature);
  basis->add_option("--max_frequency", sc.max_frequency);
  basis->add_option("--grid", sc.grid);

  auto* params = section("params");
  params->add_option("--b", sc.b);
  params->add_option("--m", sc.m);

  auto* nonlinearity = section("nonlinearity");
  nonlinearity->add_option("--p", sc.p);
  nonlinearity->add_option("--mu", sc.mu);
  nonlinearity->add_option("--phi_mode", sc.phi_mode);
  nonlinearity->add_option("--first_order_scale", sc.first_order_scale);

  auto* initial = section("initial");
  initial->add_option("--profile", sc.profile)
      ->check(CLI::IsMember({"single-mode", "gaussian-bump", "random-with-seed", "file"}));
  initial->add_option("--mode", sc.mode);
  initial->add_option("--amplitude", sc.amplitude);
  initial->add_option("--velocity_amplitude", sc.velocity_amplitude);
  initial->add_option("--decay", sc.decay);
  initial->add_option("--seed", sc.seed);
  initial->add_option("--path", sc.initial_path);

  auto* time = section("time");
  time->add_option("--t_end", sc.t_end);
  time->add_option("--samples", sc.samples);

  auto* tolerances = section("tolerances");
  tolerances->add_option("--picard_tol", sc.picard_tol);
  tolerances->add_option("--max_iterations", sc.max_iterations);
  tolerances->add_option("--smallness_threshold", sc.smallness_threshold);
  tolerances->add_option("--smallness_sigma", sc.smallness_sigma);

  auto* output = section("output");
  output->add_option("--prefix", sc.prefix);

  try {
    loader.parse(std::vector<std::string>{path, "--config"});
  } catch (const CLI::ParseError& e) {
    fail_validation("scenario " + path + ": " + e.what());
  }

  if (sc.problem_class.empty()) fail_validation("scenario " + path + ": problem.class is required");
  if (sc.basis_kind.empty()) fail_validation("scenario " + path + ": basis.kind is required");

  if (sc.basis_kind.rfind("explicit:", 0) == 0) {
    sc.basis_path = sc.basis_kind.substr(9);
    sc.basis_kind = "explicit";
  }
  if (sc.basis_kind != "hermite" && sc.basis_kind != "torus" && sc.basis_kind != "explicit")
    fail_validation("basis.kind must be hermite, torus or explicit:<path>, got " + sc.basis_kind);
  if (sc.basis_kind == "explicit" && sc.basis_path.empty())
    fail_validation("explicit basis needs a path (basis.path or kind = \"explicit:<path>\")");
  if (!(sc.t_end > 0.0)) fail_validation("time.t_end must be positive");
  if (sc.samples < 2) fail_validation("time.samples must be at least 2");
  return sc;
}

struct BasisHandle {
  sw_basis* ptr = nullptr;
  ~BasisHandle() { sw_basis_free(ptr); }
  BasisHandle() = default;
  BasisHandle(const BasisHandle&) = delete;
  BasisHandle& operator=(const BasisHandle&) = delete;
};

struct PicardHandle {
  sw_picard* ptr = nullptr;
  ~PicardHandle() { sw_picard_free(ptr); }
  PicardHandle() = default;
  PicardHandle(const PicardHandle&) = delete;
  PicardHandle& operator=(const PicardHandle&) = delete;
};

void build_basis(const Scenario& sc, BasisHandle& basis) {
  if (sc.basis_kind == "hermite") {
    check(sw_basis_harmonic_oscillator(sc.dimension, sc.max_degree, sc.quadrature, &basis.ptr));
  } else if (sc.basis_kind == "torus") {
    check(sw_basis_torus(sc.dimension, sc.max_frequency, sc.grid, &basis.ptr));
  } else {
    check(sw_basis_load(sc.basis_path.c_str(), &basis.ptr));
  }
}

/* ------------------------------------------------------------ initial data */

// Deterministic standard normals: 53-bit uniforms through Box-Muller, so the
// draw sequence is identical on every platform for a given seed.
struct NormalSource {
  std::mt19937_64 gen;
  explicit NormalSource(std::uint64_t seed) : gen(seed) {}
  double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  double operator()() {
    const double u = 1.0 - uniform();  // (0, 1]
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }
};

void build_initial(const Scenario& sc, const sw_basis* basis, std::uint64_t seed,
                   std::vector<double>& u0, std::vector<double>& u1) {
  const int n = sw_basis_mode_count(basis);
  u0.assign(n, 0.0);
  u1.assign(n, 0.0);

  if (sc.profile == "single-mode") {
    if (sc.mode < 0 || sc.mode >= n)
      fail_validation("initial.mode " + std::to_string(sc.mode) + " out of range for " +
                      std::to_string(n) + " modes");
    u0[sc.mode] = sc.amplitude;
    u1[sc.mode] = sc.velocity_amplitude;
    return;
  }

  if (sc.profile == "gaussian-bump") {
    const int nodes = sw_basis_node_count(basis);
    const int dim = sw_basis_dimension(basis);
    std::vector<double> coords(static_cast<size_t>(nodes) * dim);
    check(sw_basis_nodes(basis, coords.data()));
    const double center = sc.basis_kind == "torus" ? M_PI : 0.0;
    std::vector<double> values(nodes);
    for (int q = 0; q < nodes; ++q) {
      double r2 = 0.0;
      for (int a = 0; a < dim; ++a) {
        const double d = coords[static_cast<size_t>(q) * dim + a] - center;
        r2 += d * d;
      }
      values[q] = std::exp(-sc.decay * r2);
    }
    std::vector<double> shape(n);
    check(sw_forward_transform(basis, values.data(), shape.data()));
    for (int k = 0; k < n; ++k) {
      u0[k] = sc.amplitude * shape[k];
      u1[k] = sc.velocity_amplitude * shape[k];
    }
    return;
  }

  if (sc.profile == "random-with-seed") {
    std::vector<double> eigenvalues(n);
    check(sw_basis_eigenvalues(basis, eigenvalues.data()));
    NormalSource normal(seed);
    for (int k = 0; k < n; ++k) {
      const double weight = std::pow(1.0 + eigenvalues[k], sc.decay);
      u0[k] = sc.amplitude * normal() / weight;
      u1[k] = sc.velocity_amplitude * normal() / weight;
    }
    return;
  }

  // file profile: {"u0": [...], "u1": [...]} with u1 optional.
  std::ifstream in(sc.initial_path);
  if (!in) fail(SW_ERR_IO, "cannot open initial data file " + sc.initial_path);
  json data;
  try {
    in >> data;
  } catch (const json::exception& e) {
    fail_validation("cannot parse " + sc.initial_path + ": " + e.what());
  }
  if (!data.contains("u0") || !data["u0"].is_array() ||
      data["u0"].size() != static_cast<size_t>(n))
    fail_validation("initial data file needs a u0 array with one entry per mode");
  for (int k = 0; k < n; ++k) u0[k] = data["u0"][k].get<double>();
  if (data.contains("u1")) {
    if (!data["u1"].is_array() || data["u1"].size() != static_cast<size_t>(n))
      fail_validation("u1 must be an array with one entry per mode");
    for (int k = 0; k < n; ++k) u1[k] = data["u1"][k].get<double>();
  }
}

// The nonlinearity is determined by the problem class; phi must outlive the
// returned struct.
sw_nonlinearity build_nonlinearity(const Scenario& sc, int mode_count,
                                   std::vector<double>& phi) {
  sw_nonlinearity nl{};
  if (sc.problem_class == "linear") {
    nl.kind = SW_NONLINEARITY_NONE;
    return nl;
  }
  if (sc.problem_class == "semilinear") {
    nl.kind = SW_NONLINEARITY_POWER;
    nl.p = sc.p;
    nl.mu = sc.mu;
    return nl;
  }
  if (sc.phi_mode < 0 || sc.phi_mode >= mode_count)
    fail_validation("nonlinearity.phi_mode out of range");
  phi.assign(mode_count, 0.0);
  phi[sc.phi_mode] = 1.0;
  nl.kind = SW_NONLINEARITY_NORM;
  nl.p = sc.p;
  nl.mu = sc.mu;
  nl.phi = phi.data();
  nl.order = sc.problem_class == "higher-order" ? 2 : 1;
  nl.first_order_scale = sc.first_order_scale ? 1 : 0;
  return nl;
}

std::vector<double> time_grid(const Scenario& sc) {
  std::vector<double> times(sc.samples);
  for (int i = 0; i < sc.samples; ++i)
    times[i] = sc.t_end * static_cast<double>(i) / (sc.samples - 1);
  times[0] = 0.0;
  return times;
}

json scenario_echo(const Scenario& sc, std::uint64_t seed) {
  json basis{{"kind", sc.basis_kind}, {"dimension", sc.dimension}};
  if (sc.basis_kind == "hermite") {
    basis["max_degree"] = sc.max_degree;
    basis["quadrature"] = sc.quadrature;
  } else if (sc.basis_kind == "torus") {
    basis["max_frequency"] = sc.max_frequency;
    basis["grid"] = sc.grid;
  } else {
    basis["path"] = sc.basis_path;
  }
  json initial{{"profile", sc.profile},
               {"amplitude", sc.amplitude},
               {"velocity_amplitude", sc.velocity_amplitude}};
  if (sc.profile == "single-mode") initial["mode"] = sc.mode;
  if (sc.profile == "gaussian-bump" || sc.profile == "random-with-seed")
    initial["decay"] = sc.decay;
  if (sc.profile == "file") initial["path"] = sc.initial_path;
  json echo{{"problem", {{"class", sc.problem_class}}},
            {"basis", basis},
            {"params", {{"b", sc.b}, {"m", sc.m}}},
            {"initial", initial},
            {"time", {{"t_end", sc.t_end}, {"samples", sc.samples}}},
            {"tolerances",
             {{"picard_tol", sc.picard_tol},
              {"max_iterations", sc.max_iterations},
              {"smallness_threshold", sc.smallness_threshold},
              {"smallness_sigma", sc.smallness_sigma}}},
            {"seed", seed}};
  if (sc.problem_class != "linear") {
    json nl{{"p", sc.p}, {"mu", sc.mu}};
    if (sc.problem_class != "semilinear") {
      nl["phi_mode"] = sc.phi_mode;
      nl["order"] = sc.problem_class == "higher-order" ? 2 : 1;
      nl["first_order_scale"] = sc.first_order_scale;
    }
    echo["nonlinearity"] = nl;
  }
  return echo;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(SW_ERR_IO, "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) fail(SW_ERR_IO, "failed writing " + path.string());
}

void write_json_file(const fs::path& path, const json& value) {
  write_text_file(path, value.dump(1, ' ') + "\n");
}

/* ------------------------------------------------------------ subcommands */

struct CommonOpts {
  std::string scenario_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  int threads = 0;
  CLI::Option* threads_opt = nullptr;
  std::string format = "csv";
};

void resolve_threads(const CommonOpts& opts) {
  int threads = 0;
  if (opts.threads_opt && opts.threads_opt->count() > 0) {
    threads = opts.threads;
  } else if (const char* env = std::getenv("SPECWAVE_THREADS")) {
    threads = std::atoi(env);
  }
  if (threads > 0) sw_set_threads(threads);
}

std::uint64_t resolve_seed(const CommonOpts& opts, const Scenario& sc) {
  if (opts.seed_opt && opts.seed_opt->count() > 0) return opts.seed;
  return sc.seed;
}

struct SolveOutputs {
  json manifest;
  bool converged = false;
};

// Pipeline: build basis -> assemble data -> fixed-point solve (one application
// for linear classes) -> classify / fit -> emit artifacts.
SolveOutputs run_solve(const Scenario& sc, const CommonOpts& opts) {
  BasisHandle basis;
  build_basis(sc, basis);
  const int n = sw_basis_mode_count(basis.ptr);
  const std::uint64_t seed = resolve_seed(opts, sc);

  std::vector<double> u0, u1;
  build_initial(sc, basis.ptr, seed, u0, u1);
  const auto times = time_grid(sc);

  std::vector<double> phi;
  const sw_nonlinearity nl = build_nonlinearity(sc, n, phi);

  sw_picard_options options{};
  options.tolerance = sc.picard_tol;
  options.max_iterations = sc.max_iterations;
  options.smallness_threshold = sc.smallness_threshold;
  options.smallness_sigma = sc.smallness_sigma;
  options.keep_iterates = 0;

  PicardHandle run;
  check(sw_picard_solve(basis.ptr, sc.b, sc.m, &nl, u0.data(), u1.data(), times.data(),
                        times.size(), &options, &run.ptr));

  const int iterations = sw_picard_iterations(run.ptr);
  const bool converged = sw_picard_converged(run.ptr) != 0;

  double gamma = 0.0, q = 0.0, fitted_c = 0.0;
  check(sw_picard_envelope(run.ptr, &gamma, &q, &fitted_c));
  double epsilon = 0.0, sigma = 0.0, threshold = 0.0;
  int within = 0;
  check(sw_picard_smallness(run.ptr, &epsilon, &sigma, &threshold, &within));

  std::vector<double> increments(sw_picard_increment_count(run.ptr));
  if (!increments.empty()) check(sw_picard_increments(run.ptr, increments.data()));
  std::vector<double> ratios(increments.empty() ? 0 : increments.size() - 1);
  if (!ratios.empty()) check(sw_picard_contraction_ratios(run.ptr, ratios.data()));
  std::vector<double> z_norms(static_cast<size_t>(iterations) + 1);
  check(sw_picard_iterate_z_norms(run.ptr, z_norms.data()));

  // Per-time summary rows.
  std::vector<double> u(n), ut(n), lhalf(n);
  std::vector<double> u_norms(times.size()), ut_norms(times.size()), lhalf_norms(times.size()),
      state_norms(times.size()), energies(times.size()), bounds(times.size());
  std::vector<std::vector<double>> coefficients(times.size());
  for (size_t i = 0; i < times.size(); ++i) {
    check(sw_picard_state(run.ptr, i, u.data(), ut.data()));
    double un = 0.0, utn = 0.0, ln = 0.0, energy = 0.0;
    check(sw_h_norm(basis.ptr, u.data(), &un));
    check(sw_h_norm(basis.ptr, ut.data(), &utn));
    check(sw_apply_l_power(basis.ptr, u.data(), 0.5, lhalf.data()));
    check(sw_h_norm(basis.ptr, lhalf.data(), &ln));
    check(sw_energy(basis.ptr, sc.b, sc.m, u.data(), ut.data(), &energy));
    u_norms[i] = require_finite(un, "u norm");
    ut_norms[i] = require_finite(utn, "du/dt norm");
    lhalf_norms[i] = require_finite(ln, "half-power norm");
    state_norms[i] = require_finite(un + utn + ln, "state norm");
    energies[i] = require_finite(energy, "energy");
    bounds[i] = require_finite(
        fitted_c * std::pow(1.0 + times[i], q) * std::exp(-gamma * times[i]), "envelope bound");
    coefficients[i] = u;
    for (double v : u) require_finite(v, "coefficient");
  }

  // Envelope fit of the state norm; purely diagnostic, so a fit that cannot
  // be formed (all-zero data) is recorded as null rather than failing the run.
  json fit = nullptr;
  {
    double gamma_hat = 0.0, q_hat = 0.0, c_hat = 0.0, residual = 0.0;
    const sw_status status = sw_fit_envelope(times.data(), state_norms.data(), times.size(), 0.0,
                                             &gamma_hat, &q_hat, &c_hat, &residual);
    if (status == SW_OK) {
      fit = json{{"gamma_hat", gamma_hat},
                 {"q_hat", q_hat},
                 {"c_hat", c_hat},
                 {"residual", residual}};
    } else if (status != SW_ERR_FIT_FAILURE) {
      fail(status, sw_last_error());
    }
  }

  fs::create_directories(opts.out_dir);
  const bool csv = opts.format == "csv";
  json artifacts;

  if (csv) {
    std::ostringstream trajectory;
    trajectory << "t,u_norm,ut_norm,lhalf_u_norm,state_norm,energy,envelope_bound";
    for (int k = 0; k < n; ++k) trajectory << ",u" << k;
    trajectory << "\n";
    for (size_t i = 0; i < times.size(); ++i) {
      trajectory << format_double(times[i]) << ',' << format_double(u_norms[i]) << ','
                 << format_double(ut_norms[i]) << ',' << format_double(lhalf_norms[i]) << ','
                 << format_double(state_norms[i]) << ',' << format_double(energies[i]) << ','
                 << format_double(bounds[i]);
      for (int k = 0; k < n; ++k) trajectory << ',' << format_double(coefficients[i][k]);
      trajectory << "\n";
    }
    const std::string trajectory_name = sc.prefix + ".trajectory.csv";
    write_text_file(fs::path(opts.out_dir) / trajectory_name, trajectory.str());
    artifacts["trajectory"] = trajectory_name;

    std::ostringstream iters;
    iters << "iterate,increment,contraction_ratio,z_norm\n";
    for (int k = 0; k <= iterations; ++k) {
      iters << k << ',';
      if (k >= 1) iters << format_double(increments[k - 1]);
      iters << ',';
      if (k >= 2) iters << format_double(ratios[k - 2]);
      iters << ',' << format_double(z_norms[k]) << "\n";
    }
    const std::string iterations_name = sc.prefix + ".iterations.csv";
    write_text_file(fs::path(opts.out_dir) / iterations_name, iters.str());
    artifacts["iterations"] = iterations_name;

    if (!fit.is_null()) {
      std::ostringstream fit_csv;
      fit_csv << "gamma_hat,q_hat,c_hat,residual\n"
              << format_double(fit["gamma_hat"].get<double>()) << ','
              << format_double(fit["q_hat"].get<double>()) << ','
              << format_double(fit["c_hat"].get<double>()) << ','
              << format_double(fit["residual"].get<double>()) << "\n";
      const std::string fit_name = sc.prefix + ".fit.csv";
      write_text_file(fs::path(opts.out_dir) / fit_name, fit_csv.str());
      artifacts["fit"] = fit_name;
    }
  } else {
    json trajectory{{"t", times},
                    {"u_norm", u_norms},
                    {"ut_norm", ut_norms},
                    {"lhalf_u_norm", lhalf_norms},
                    {"state_norm", state_norms},
                    {"energy", energies},
                    {"envelope_bound", bounds},
                    {"u", coefficients}};
    const std::string trajectory_name = sc.prefix + ".trajectory.json";
    write_json_file(fs::path(opts.out_dir) / trajectory_name, trajectory);
    artifacts["trajectory"] = trajectory_name;
  }

  json manifest{
      {"format", "specwave-run"},
      {"version", 1},
      {"command", "solve"},
      {"scenario", scenario_echo(sc, seed)},
      {"basis",
       {{"modes", n},
        {"nodes", sw_basis_node_count(basis.ptr)},
        {"gram_defect", sw_basis_gram_defect(basis.ptr)},
        {"lambda0", sw_basis_bottom(basis.ptr, nullptr)}}},
      {"results",
       {{"converged", converged},
        {"iterations", iterations},
        {"smallness",
         {{"epsilon", epsilon}, {"sigma", sigma}, {"threshold", threshold}, {"within", within != 0}}},
        {"envelope", {{"gamma", gamma}, {"q", q}, {"fitted_c", fitted_c}}},
        {"fit", fit},
        {"energy", {{"initial", energies.front()}, {"final", energies.back()}}},
        {"increments", increments},
        {"contraction_ratios", ratios},
        {"iterate_z_norms", z_norms}}},
      {"artifacts", artifacts}};
  const std::string manifest_name = sc.prefix + ".manifest.json";
  write_json_file(fs::path(opts.out_dir) / manifest_name, manifest);

  std::cout << "converged=" << (converged ? "true" : "false") << " iterations=" << iterations;
  if (!fit.is_null())
    std::cout << " gamma_hat=" << format_double(fit["gamma_hat"].get<double>())
              << " q_hat=" << format_double(fit["q_hat"].get<double>());
  std::cout << " -> " << (fs::path(opts.out_dir) / manifest_name).generic_string() << "\n";
  return SolveOutputs{std::move(manifest), converged};
}

int cmd_solve(const CommonOpts& opts) {
  const Scenario sc = load_scenario(opts.scenario_path);
  resolve_threads(opts);
  run_solve(sc, opts);
  return kExitOk;
}

int cmd_classify(const CommonOpts& opts, int alpha, double beta) {
  const Scenario sc = load_scenario(opts.scenario_path);
  resolve_threads(opts);
  BasisHandle basis;
  build_basis(sc, basis);
  const double lambda0 = sw_basis_bottom(basis.ptr, nullptr);
  const bool nonlinear = sc.problem_class != "linear";
  double gamma = 0.0, q = 0.0;
  check(sw_classify_decay(sc.b, sc.m, lambda0, alpha, beta, nonlinear ? 1 : 0, &gamma, &q));
  if (opts.format == "json") {
    json out{{"gamma", gamma}, {"q", q},     {"nonlinear", nonlinear},
             {"b", sc.b},      {"m", sc.m},  {"lambda0", lambda0},
             {"alpha", alpha}, {"beta", beta}};
    std::cout << out.dump(1, ' ') << "\n";
  } else {
    std::cout << "gamma,q\n" << format_double(gamma) << ',' << format_double(q) << "\n";
  }
  return kExitOk;
}

int cmd_gn_check(const std::string& family, int dimension, double p, const std::string& format) {
  int family_code = SW_FAMILY_HARMONIC_OSCILLATOR;
  if (family == "manifold") family_code = SW_FAMILY_COMPACT_MANIFOLD;
  if (family == "twisted") family_code = SW_FAMILY_TWISTED;
  int admissible = 0;
  double exponent = 0.0;
  check(sw_gn_admissible(family_code, dimension, p, &admissible, &exponent));
  if (format == "json") {
    json out{{"family", family},
             {"dimension", dimension},
             {"p", p},
             {"admissible", admissible != 0}};
    if (admissible) out["exponent"] = exponent;
    std::cout << out.dump(1, ' ') << "\n";
  } else if (admissible) {
    std::cout << "admissible: theta = " << format_double(exponent) << "\n";
  } else {
    std::cout << "not admissible for n = " << dimension << ", p = " << format_double(p) << "\n";
  }
  return kExitOk;
}

int cmd_fit_envelope(const std::string& input, const std::string& time_column,
                     const std::string& value_column, double tail, const std::string& format) {
  std::ifstream in(input);
  if (!in) fail(SW_ERR_IO, "cannot open " + input);
  std::string header;
  if (!std::getline(in, header)) fail_validation("empty input file " + input);

  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    return fields;
  };
  const auto columns = split(header);
  int t_index = -1, v_index = -1;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == time_column) t_index = static_cast<int>(i);
    if (columns[i] == value_column) v_index = static_cast<int>(i);
  }
  if (t_index < 0) fail_validation("input has no column named " + time_column);
  if (v_index < 0) fail_validation("input has no column named " + value_column);

  std::vector<double> times, values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line);
    if (static_cast<int>(fields.size()) <= std::max(t_index, v_index))
      fail_validation("short row in " + input);
    times.push_back(std::strtod(fields[t_index].c_str(), nullptr));
    values.push_back(std::strtod(fields[v_index].c_str(), nullptr));
  }

  double gamma = 0.0, q = 0.0, c = 0.0, residual = 0.0;
  check(sw_fit_envelope(times.data(), values.data(), times.size(), tail, &gamma, &q, &c,
                        &residual));
  if (format == "json") {
    json out{{"gamma_hat", gamma}, {"q_hat", q}, {"c_hat", c}, {"residual", residual},
             {"samples", times.size()}};
    std::cout << out.dump(1, ' ') << "\n";
  } else {
    std::cout << "gamma_hat,q_hat,c_hat,residual\n"
              << format_double(gamma) << ',' << format_double(q) << ',' << format_double(c) << ','
              << format_double(residual) << "\n";
  }
  return kExitOk;
}

int cmd_probe_conv(const CommonOpts& opts, int trials) {
  const Scenario sc = load_scenario(opts.scenario_path);
  resolve_threads(opts);
  BasisHandle basis;
  build_basis(sc, basis);
  const std::uint64_t seed = resolve_seed(opts, sc);
  double max_ratio = 0.0, sup_e_l1 = 0.0;
  check(sw_convolution_probe(basis.ptr, trials, seed, &max_ratio, &sup_e_l1));
  if (opts.format == "csv") {
    std::cout << "max_ratio,sup_e_l1,trials,seed\n"
              << format_double(max_ratio) << ',' << format_double(sup_e_l1) << ',' << trials << ','
              << seed << "\n";
  } else {
    json out{{"max_ratio", max_ratio}, {"sup_e_l1", sup_e_l1}, {"trials", trials}, {"seed", seed}};
    std::cout << out.dump(1, ' ') << "\n";
  }
  return kExitOk;
}

int cmd_compare_oracle(const CommonOpts& opts, double tolerance, double initial_dt) {
  const Scenario sc = load_scenario(opts.scenario_path);
  resolve_threads(opts);
  BasisHandle basis;
  build_basis(sc, basis);
  const int n = sw_basis_mode_count(basis.ptr);
  const std::uint64_t seed = resolve_seed(opts, sc);

  std::vector<double> u0, u1;
  build_initial(sc, basis.ptr, seed, u0, u1);
  const auto times = time_grid(sc);
  std::vector<double> phi;
  const sw_nonlinearity nl = build_nonlinearity(sc, n, phi);

  const bool linear = sc.problem_class == "linear";
  if (tolerance <= 0.0) tolerance = linear ? 1e-6 : 1e-5;

  int conclusive = 0, pass = 0;
  double discrepancy = 0.0, dt_used = 0.0;
  check(sw_compare_oracle(basis.ptr, sc.b, sc.m, &nl, u0.data(), u1.data(), times.data(),
                          times.size(), tolerance, initial_dt, &conclusive, &pass, &discrepancy,
                          &dt_used));
  json out{{"conclusive", conclusive != 0},
           {"pass", pass != 0},
           {"discrepancy", discrepancy},
           {"tolerance", tolerance},
           {"dt_used", dt_used}};
  std::cout << out.dump(1, ' ') << "\n";
  if (!conclusive) return kExitInconclusive;
  return pass ? kExitOk : kExitFailure;
}

int cmd_export_basis(const CommonOpts& opts) {
  const Scenario sc = load_scenario(opts.scenario_path);
  BasisHandle basis;
  build_basis(sc, basis);
  fs::create_directories(opts.out_dir);
  const std::string name = sc.prefix + ".basis.json";
  const fs::path path = fs::path(opts.out_dir) / name;
  check(sw_basis_save(basis.ptr, path.string().c_str()));
  json out{{"artifact", name},
           {"modes", sw_basis_mode_count(basis.ptr)},
           {"nodes", sw_basis_node_count(basis.ptr)},
           {"gram_defect", sw_basis_gram_defect(basis.ptr)}};
  std::cout << out.dump(1, ' ') << "\n";
  return kExitOk;
}

void attach_common(CLI::App* sub, CommonOpts& opts, bool needs_scenario = true) {
  auto* scenario = sub->add_option("--scenario", opts.scenario_path, "scenario TOML file");
  if (needs_scenario) scenario->required();
  sub->add_option("--out", opts.out_dir, "output directory");
  opts.seed_opt = sub->add_option("--seed", opts.seed, "override the scenario seed");
  opts.threads_opt =
      sub->add_option("--threads", opts.threads, "worker threads (or SPECWAVE_THREADS)");
  sub->add_option("--format", opts.format, "artifact format")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral solver for damped wave equations with discrete-spectrum operators"};
  app.require_subcommand(1);

  CommonOpts solve_opts;
  auto* solve = app.add_subcommand("solve", "run a scenario and emit artifacts");
  attach_common(solve, solve_opts);

  CommonOpts classify_opts;
  int alpha = 0;
  double beta = 0.0;
  auto* classify = app.add_subcommand("classify", "decay envelope exponents for a scenario");
  attach_common(classify, classify_opts);
  classify->add_option("--alpha", alpha, "time-derivative count");
  classify->add_option("--beta", beta, "operator half-power (multiple of 1/2)");

  std::string gn_family = "hermite";
  int gn_dimension = 1;
  double gn_p = 2.0;
  std::string gn_format = "text";
  auto* gn = app.add_subcommand("gn-check", "interpolation-inequality admissibility");
  gn->add_option("--family", gn_family)->check(CLI::IsMember({"hermite", "manifold", "twisted"}));
  gn->add_option("--dimension", gn_dimension)->required();
  gn->add_option("--p", gn_p)->required();
  gn->add_option("--format", gn_format)->check(CLI::IsMember({"text", "json"}));

  std::string fit_input, fit_time = "t", fit_value = "state_norm";
  double fit_tail = 0.0;
  std::string fit_format = "json";
  auto* fit = app.add_subcommand("fit-envelope", "fit (1+t)^q e^{-gamma t} to a CSV column");
  fit->add_option("--input", fit_input, "CSV file with a header row")->required();
  fit->add_option("--time-column", fit_time);
  fit->add_option("--value-column", fit_value);
  fit->add_option("--tail", fit_tail, "trailing fraction to fit (default 0.6)");
  fit->add_option("--format", fit_format)->check(CLI::IsMember({"csv", "json"}));

  CommonOpts probe_opts;
  probe_opts.format = "json";
  int probe_trials = 1000;
  auto* probe = app.add_subcommand("probe-conv", "random-pair product-norm probe");
  attach_common(probe, probe_opts);
  probe->add_option("--trials", probe_trials);

  CommonOpts oracle_opts;
  double oracle_tolerance = 0.0;
  double oracle_dt = 1e-2;
  auto* oracle = app.add_subcommand("compare-oracle", "check a scenario against the RK4 reference");
  attach_common(oracle, oracle_opts);
  oracle->add_option("--tolerance", oracle_tolerance,
                     "pass threshold (default 1e-6 linear, 1e-5 nonlinear)");
  oracle->add_option("--dt", oracle_dt, "initial reference step");

  CommonOpts export_opts;
  auto* export_basis = app.add_subcommand("export-basis", "write the scenario basis as JSON");
  attach_common(export_basis, export_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    json error{{"error",
                {{"kind", "usage"}, {"message", e.what()}, {"exit_code", kExitValidation}}}};
    std::cout << error.dump(1, ' ') << "\n";
    return kExitValidation;
  }

  try {
    if (app.got_subcommand(solve)) return cmd_solve(solve_opts);
    if (app.got_subcommand(classify)) return cmd_classify(classify_opts, alpha, beta);
    if (app.got_subcommand(gn)) return cmd_gn_check(gn_family, gn_dimension, gn_p, gn_format);
    if (app.got_subcommand(fit))
      return cmd_fit_envelope(fit_input, fit_time, fit_value, fit_tail, fit_format);
    if (app.got_subcommand(probe)) return cmd_probe_conv(probe_opts, probe_trials);
    if (app.got_subcommand(oracle))
      return cmd_compare_oracle(oracle_opts, oracle_tolerance, oracle_dt);
    if (app.got_subcommand(export_basis)) return cmd_export_basis(export_opts);
  } catch (const CliError& e) {
    std::cout << e.body.dump(1, ' ') << "\n";
    return e.code;
  } catch (const std::exception& e) {
    json error{{"error",
                {{"kind", "internal"}, {"message", e.what()}, {"exit_code", kExitFailure}}}};
    std::cout << error.dump(1, ' ') << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
