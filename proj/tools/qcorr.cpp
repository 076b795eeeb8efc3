// qcorr: build states, evaluate correlation measures, sweep the two-detector
// model and run the invariant suites.
//
// Exit codes: 0 success, 1 verification failure, 2 input error, 3 measure /
// dimension mismatch. Diagnostics go to stderr (level from QC_LOG), data to
// stdout.

#include "qcorr/detector.hpp"
#include "qcorr/io.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"
#include "qcorr/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace qcorr;

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level() {
  static const Level level = [] {
    const char* env = std::getenv("QC_LOG");
    const std::string v = env ? env : "warn";
    if (v == "error") return Level::Error;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

void log(Level level, const std::string& msg) {
  static constexpr const char* names[] = {"error", "warn", "info", "debug"};
  if (level <= log_level()) std::cerr << "qcorr: " << names[static_cast<int>(level)] << ": " << msg << '\n';
}

constexpr int kExitVerify = 1;
constexpr int kExitInput = 2;
constexpr int kExitMismatch = 3;

struct UsageError : Error {
  using Error::Error;
};

void emit(const std::optional<std::string>& path, const std::string& contents) {
  if (path) {
    write_file(*path, contents);
    log(Level::Info, "wrote " + *path);
  } else {
    std::cout << contents;
  }
}

// ---------------------------------------------------------------------------
// state

struct StateArgs {
  std::string family;
  std::optional<double> p;
  std::optional<int> index;
  std::vector<double> probs;
  std::vector<int> dims;
  std::vector<double> alphas;
  std::optional<int> rank;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::string format = "json";
};

StateSpec spec_from_args(const StateArgs& a) {
  StateSpec spec;
  auto need_p = [&] {
    if (!a.p) throw UsageError("--p is required for family " + a.family);
    return *a.p;
  };
  auto dims = [&]() -> std::pair<double, double> {
    if (a.dims.size() != 2) throw UsageError("--dims A,B is required for family " + a.family);
    return {a.dims[0], a.dims[1]};
  };
  const std::string& f = a.family;
  if (f == "werner") {
    spec.family = StateFamily::Werner;
    spec.parameters["p"] = {need_p()};
  } else if (f == "singlet") {
    spec.family = StateFamily::Bell;
    spec.parameters["index"] = {3};
  } else if (f == "bell") {
    spec.family = StateFamily::Bell;
    spec.parameters["index"] = {static_cast<double>(a.index.value_or(3))};
  } else if (f == "pseudo-pure") {
    spec.family = StateFamily::PseudoPure;
    spec.parameters["p"] = {need_p()};
    spec.parameters["bell_index"] = {static_cast<double>(a.index.value_or(3))};
  } else if (f == "classical") {
    spec.family = StateFamily::Classical;
    auto [da, db] = dims();
    spec.parameters["dim_a"] = {da};
    spec.parameters["dim_b"] = {db};
    spec.parameters["probs"] = a.probs;
  } else if (f == "tile") {
    spec.family = StateFamily::TileVector;
    if (!a.index) throw UsageError("--index (1..9, 0 for the stopper) is required for family tile");
    spec.parameters["index"] = {static_cast<double>(*a.index)};
  } else if (f == "tiles-bound") {
    spec.family = StateFamily::TileBoundEntangled;
  } else if (f == "cq") {
    spec.family = StateFamily::Cq;
    spec.parameters["alphas"] = a.alphas;
  } else if (f == "random") {
    spec.family = StateFamily::RandomDensity;
    auto [da, db] = dims();
    spec.parameters["dim_a"] = {da};
    spec.parameters["dim_b"] = {db};
    if (a.rank) spec.parameters["rank"] = {static_cast<double>(*a.rank)};
    spec.seed = a.seed;
  } else if (f == "random-pure") {
    spec.family = StateFamily::RandomPure;
    auto [da, db] = dims();
    spec.parameters["dim_a"] = {da};
    spec.parameters["dim_b"] = {db};
    spec.seed = a.seed;
  } else {
    throw UsageError("unknown state family '" + f + "'");
  }
  return spec;
}

int cmd_state(const StateArgs& a) {
  const StateSpec spec = spec_from_args(a);
  log(Level::Debug, "state spec: " + state_spec_to_json(spec));
  const BipartiteState rho = make_state(spec);
  emit(a.out, state_to_json(rho));
  return 0;
}

// ---------------------------------------------------------------------------
// measure

struct MeasureArgs {
  std::string name;
  std::string state;
  std::optional<std::string> state2;
  std::string basis = "eigen";
  bool json = false;
};

struct MeasureOutput {
  nlohmann::ordered_json doc;
  std::string text;
};

MeasureOutput scalar_output(const std::string& name, double value, const char* unit, std::optional<bool> degenerate) {
  MeasureOutput out;
  out.doc["measure"] = name;
  out.doc["value"] = value;
  out.doc["unit"] = unit;
  out.text = name + " " + format_double(value) + " " + unit;
  if (degenerate) {
    out.doc["degenerate"] = *degenerate;
    out.text += std::string(" degenerate=") + (*degenerate ? "true" : "false");
  }
  return out;
}

MeasureOutput evaluate_measure(const MeasureArgs& a, const BipartiteState& rho) {
  const std::string& m = a.name;
  if (m == "entropy") return scalar_output(m, vn_entropy(rho.density()), "bits", std::nullopt);
  if (m == "mutual-info") return scalar_output(m, mutual_information(rho), "bits", std::nullopt);
  if (m == "fidelity") {
    if (!a.state2) throw UsageError("fidelity needs --state2");
    const BipartiteState other = state_from_json(read_file(*a.state2));
    if (other.dim_a() != rho.dim_a() || other.dim_b() != rho.dim_b())
      throw DimensionError("fidelity: states have different dims");
    return scalar_output(m, fidelity(rho.density(), other.density()), "dimensionless", std::nullopt);
  }
  if (m == "schmidt") {
    const Spectrum s = eig_hermitian(rho.matrix());
    if (s.values(0) < 1.0 - 1e-8) throw DimensionError("schmidt: state is not pure");
    PureVector psi = s.vectors.col(0);
    psi /= psi.norm();
    const SchmidtDecomposition sd = schmidt_decompose(psi, rho.dim_a(), rho.dim_b());
    MeasureOutput out = scalar_output(m, entanglement_entropy(psi, rho.dim_a(), rho.dim_b()), "bits", std::nullopt);
    out.doc["coefficients"] = sd.coefficients;
    out.text = "schmidt coefficients";
    for (double c : sd.coefficients) out.text += " " + format_double(c);
    out.text += "\nentanglement-entropy " + format_double(out.doc["value"].get<double>()) + " bits";
    return out;
  }
  if (m == "concurrence") return scalar_output(m, concurrence_wootters(rho), "dimensionless", std::nullopt);
  if (m == "ppt") {
    const PptReport r = ppt_check(rho);
    MeasureOutput out;
    out.doc = {{"measure", m}, {"is_ppt", r.is_ppt}, {"min_eigenvalue", r.min_eigenvalue}, {"negativity", r.negativity}};
    out.text = std::string("ppt is_ppt=") + (r.is_ppt ? "true" : "false") + " min_eigenvalue=" +
               format_double(r.min_eigenvalue) + " negativity=" + format_double(r.negativity);
    return out;
  }
  if (m == "chsh") {
    const double v = chsh_max(rho);
    MeasureOutput out = scalar_output(m, v, "dimensionless", std::nullopt);
    out.doc["violation"] = v > 2.0;
    out.text += std::string(" violation=") + (v > 2.0 ? "true" : "false");
    return out;
  }
  if (m == "d3") {
    if (a.basis == "computational")
      return scalar_output(m, discord_given_measurement(rho, ProjectiveMeasurement::computational(rho.dim_a())),
                           "bits", false);
    const MeasureResult r = discord_d3(rho);
    return scalar_output(m, r.value, "bits", r.degenerate);
  }
  if (m == "discord-opt") {
    if (rho.dim_a() != 2) throw DimensionError("discord-opt requires dim_a = 2");
    const OptimizedDiscord r = discord_projective_opt(rho);
    MeasureOutput out = scalar_output(m, r.value, "bits", std::nullopt);
    out.doc["theta"] = r.theta;
    out.doc["phi"] = r.phi;
    return out;
  }
  if (m == "classical-cq") {
    const CqVerdict v = is_classical_quantum(rho);
    const char* word = v == CqVerdict::Classical       ? "classical"
                       : v == CqVerdict::NotClassical ? "not-classical"
                                                      : "undetermined-by-d3";
    MeasureOutput out;
    out.doc = {{"measure", m}, {"verdict", word}, {"degenerate", v == CqVerdict::UndeterminedByD3}};
    out.text = std::string("classical-cq ") + word;
    return out;
  }
  throw UsageError("unknown measure '" + m + "'");
}

int cmd_measure(const MeasureArgs& a) {
  if (a.basis != "eigen" && a.basis != "computational") throw UsageError("--basis must be eigen or computational");
  BipartiteState rho = state_from_json(read_file(a.state));
  log(Level::Info, "loaded " + std::to_string(rho.dim_a()) + "x" + std::to_string(rho.dim_b()) + " state");
  const MeasureOutput out = evaluate_measure(a, rho);
  std::cout << (a.json ? out.doc.dump() : out.text) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  double eps0 = 1e-2;
  double os_min = 0.25, os_max = 4.0;
  int os_steps = 20;
  double l_min = 0.25, l_max = 8.0;
  int l_steps = 20;
  std::optional<std::string> out;
  std::string format = "csv";
  std::optional<std::string> svg;
  unsigned threads = 0;
};

int cmd_sweep(const SweepArgs& a) {
  if (a.format != "csv" && a.format != "json") throw UsageError("--format must be csv or json");
  if (!(a.os_min > 0.0) || !(a.l_min >= 1e-3) || a.os_min > a.os_max || a.l_min > a.l_max)
    throw UsageError("sweep ranges must be positive, ordered, and have l-min >= 1e-3");
  const SweepGrid grid{SweepGrid::linspace(a.os_min, a.os_max, a.os_steps),
                       SweepGrid::linspace(a.l_min, a.l_max, a.l_steps), a.eps0};
  const std::vector<SweepRow> rows = sweep(grid, a.threads);
  std::size_t flagged = 0;
  for (const auto& r : rows) flagged += r.flag != RowFlag::Ok;
  if (flagged) log(Level::Warn, std::to_string(flagged) + " grid points flagged clipped/invalid");
  emit(a.out, a.format == "csv" ? sweep_to_csv(rows) : sweep_to_json(rows, grid));
  if (a.svg) write_file(*a.svg, sweep_to_svg(rows, grid));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum correlation toolkit: entropy, fidelity, entanglement, discord, detector sweeps"};
  app.require_subcommand(1);

  StateArgs state_args;
  auto* state = app.add_subcommand("state", "Write a named state to a JSON state file");
  state->add_option("family", state_args.family,
                    "werner | singlet | bell | pseudo-pure | classical | tile | tiles-bound | cq | random | random-pure")
      ->required();
  state->add_option("--p", state_args.p, "Mixing parameter in [0, 1]");
  state->add_option("--index", state_args.index, "Bell index (0 phi+, 1 phi-, 2 psi+, 3 psi-) or tile index");
  state->add_option("--probs", state_args.probs, "Row-major joint distribution (classical)")->delimiter(',');
  state->add_option("--dims", state_args.dims, "Subsystem dims A,B")->delimiter(',');
  state->add_option("--alphas", state_args.alphas, "Classical weights (cq)")->delimiter(',');
  state->add_option("--rank", state_args.rank, "Rank of a random state");
  state->add_option("--seed", state_args.seed, "Seed for random families");
  state->add_option("--out", state_args.out, "Output path (stdout when omitted)");
  state->add_option("--format", state_args.format, "Output format")->check(CLI::IsMember({"json"}));

  MeasureArgs measure_args;
  auto* measure = app.add_subcommand("measure", "Evaluate a measure on a state file");
  measure
      ->add_option("measure", measure_args.name,
                   "entropy | mutual-info | fidelity | schmidt | concurrence | ppt | chsh | d3 | discord-opt | classical-cq")
      ->required();
  measure->add_option("--state", measure_args.state, "State file")->required();
  measure->add_option("--state2", measure_args.state2, "Second state file (fidelity)");
  measure->add_option("--basis", measure_args.basis, "Measurement basis on A for d3: eigen | computational");
  measure->add_flag("--json", measure_args.json, "Print a JSON object");

  SweepArgs sweep_args;
  auto* sw = app.add_subcommand("sweep", "Scan the two-detector state over (Omega sigma, L/sigma)");
  sw->add_option("--eps0", sweep_args.eps0, "Coupling strength");
  sw->add_option("--omega-sigma-min", sweep_args.os_min);
  sw->add_option("--omega-sigma-max", sweep_args.os_max);
  sw->add_option("--omega-sigma-steps", sweep_args.os_steps);
  sw->add_option("--l-min", sweep_args.l_min, "Minimum L/sigma (>= 1e-3)");
  sw->add_option("--l-max", sweep_args.l_max);
  sw->add_option("--l-steps", sweep_args.l_steps);
  sw->add_option("--out", sweep_args.out, "Output path (stdout when omitted)");
  sw->add_option("--format", sweep_args.format, "csv | json");
  sw->add_option("--svg", sweep_args.svg, "Also write an SVG heatmap");
  sw->add_option("--threads", sweep_args.threads, "Worker threads (0 = hardware concurrency)");

  VerifyOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "Run the seeded invariant suites");
  verify->add_option("--suite", verify_opts.suite, "core | measures | detector | all")
      ->check(CLI::IsMember({"core", "measures", "detector", "all"}));
  verify->add_option("--seed", verify_opts.seed);
  verify->add_option("--tol-scale", verify_opts.tolerance_scale, "Scale every tolerance (testing hook)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  const bool measuring = measure->parsed();
  try {
    if (state->parsed()) return cmd_state(state_args);
    if (measuring) return cmd_measure(measure_args);
    if (sw->parsed()) return cmd_sweep(sweep_args);
    if (verify->parsed()) {
      const auto results = run_verification(verify_opts);
      return report_verification(results, std::cout) ? 0 : kExitVerify;
    }
  } catch (const DimensionError& e) {
    log(Level::Error, e.what());
    return measuring ? kExitMismatch : kExitInput;
  } catch (const DomainError& e) {
    log(Level::Error, e.what());
    // Unsupported subsystem dims for a measure are a mismatch, not bad input.
    return measuring && std::string(e.what()).find("dim_a") != std::string::npos ? kExitMismatch : kExitInput;
  } catch (const Error& e) {
    log(Level::Error, e.what());
    return kExitInput;
  }
  return kExitInput;
}
