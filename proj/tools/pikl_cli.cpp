// pikl: run benchmark scenarios, effective-dimension sweeps and wave-solver
// comparisons; inspect serialized matrices, models and manifests.
//
// Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numeric
// failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pikl/config.hpp"
#include "pikl/effdim.hpp"
#include "pikl/estimator.hpp"
#include "pikl/gram.hpp"
#include "pikl/parallel.hpp"
#include "pikl/report.hpp"
#include "pikl/wave_solvers.hpp"

namespace fs = std::filesystem;
using namespace pikl;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::string out_dir;
  std::string seeds;
  unsigned threads = 0;
  std::string precision = "float64";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "JSON config file or a manifest from an earlier run");
  cmd->add_option("-o,--out", c.out_dir, "Output directory (default $PIKL_OUTPUT_DIR, else ./pikl_out)");
  cmd->add_option("--seeds", c.seeds, "Seed list: 1..10 or 1,2,3");
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores; 1 = reproducible accumulation order)");
  cmd->add_option("--precision", c.precision, "Floating-point precision; only float64 is accepted");
}

fs::path output_dir(const Common& c) {
  fs::path dir = "pikl_out";
  if (const char* env = std::getenv("PIKL_OUTPUT_DIR"); env && *env) dir = env;
  if (!c.out_dir.empty()) dir = c.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

// Loads the named section of a config file; absent file means "use presets".
std::optional<json> section(const Common& c, const std::string& key, std::optional<unsigned>& threads) {
  if (c.config_path.empty()) return std::nullopt;
  LoadedConfig loaded = load_config_file(c.config_path);
  threads = loaded.threads;
  if (!loaded.config.contains(key))
    throw ConfigError("config file '" + c.config_path + "' has no '" + key + "' section");
  return loaded.config.at(key);
}

unsigned resolve_threads(const Common& c, std::optional<unsigned> recorded) {
  if (c.threads != 0) return c.threads;
  if (recorded && *recorded != 0) return *recorded;
  return default_threads();
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write '" + path.string() + "'");
  fn(os);
  os.flush();
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config, unsigned threads,
                    const std::vector<fs::path>& reproducible) {
  std::vector<std::string> files;
  for (const auto& p : reproducible) files.push_back(p.string());
  const json manifest = make_manifest(command, config, threads, files);
  write_file(dir / "manifest.json", [&](std::ostream& os) { os << manifest.dump(2) << '\n'; });
}

// Echoes aggregate rows exactly as they appear in report.csv.
void print_summary(const RunReport& report) {
  std::ostringstream csv;
  write_report_csv(report, csv);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  std::cout << "estimator,n,metric,mean,std,count\n";
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() < 13 || f[2] != "aggregate") continue;
    std::cout << f[3] << ',' << f[4] << ',' << f[9] << ',' << f[10] << ',' << f[11] << ',' << f[12] << '\n';
  }
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
  Common common;
  std::string scenario;
  std::optional<double> beta;
  std::optional<int> m;
  std::vector<long> ns;
};

int cmd_run(const RunArgs& a) {
  check_precision_value(a.common.precision);
  std::optional<unsigned> recorded;
  Scenario sc;
  if (auto j = section(a.common, "scenario", recorded)) {
    if (!a.scenario.empty()) throw ConfigError("--scenario and --config are mutually exclusive");
    sc = scenario_from_json(*j);
  } else {
    if (a.scenario.empty()) throw ConfigError("run needs --scenario NAME or --config FILE");
    sc = Scenario::preset(a.scenario);
  }
  if (a.beta) sc.beta = *a.beta;
  if (a.m) sc.m = *a.m;
  if (!a.ns.empty()) sc.ns = a.ns;
  if (!a.common.seeds.empty()) sc.seeds = parse_seed_list(a.common.seeds);
  sc.validate();
  const unsigned threads = resolve_threads(a.common, recorded);
  sc.threads = threads;

  const json config = {{"scenario", to_json(sc)}};
  const fs::path dir = output_dir(a.common);
  const RunReport report = run_scenario(sc);

  const fs::path csv = dir / "report.csv";
  const fs::path js = dir / "report.json";
  write_file(csv, [&](std::ostream& os) { write_report_csv(report, os); });
  write_file(js, [&](std::ostream& os) { os << report_to_json(report).dump(2) << '\n'; });
  write_file(dir / "timings.csv", [&](std::ostream& os) { write_timings_csv(report, os); });
  write_manifest(dir, "run", config, threads, {csv, js});
  print_summary(report);
  std::cerr << "wrote " << csv.string() << ", " << js.string() << ", timings.csv, manifest.json\n";
  return 0;
}

// ---- effdim / spectrum -----------------------------------------------------

struct EffDimArgs {
  Common common;
  std::string preset;
  std::vector<int> ms;
  std::vector<double> ns;
};

EffDimConfig load_effdim(const EffDimArgs& a, std::optional<unsigned>& recorded) {
  check_precision_value(a.common.precision);
  EffDimConfig c;
  if (auto j = section(a.common, "effdim", recorded)) {
    if (!a.preset.empty()) throw ConfigError("--preset and --config are mutually exclusive");
    c = effdim_from_json(*j);
  } else {
    if (a.preset.empty()) throw ConfigError("needs --preset NAME or --config FILE");
    c = EffDimConfig::preset(a.preset);
  }
  if (!a.ms.empty()) c.ms = a.ms;
  if (!a.ns.empty()) c.ns = a.ns;
  c.validate();
  return c;
}

int cmd_effdim(const EffDimArgs& a) {
  std::optional<unsigned> recorded;
  const EffDimConfig c = load_effdim(a, recorded);
  const unsigned threads = resolve_threads(a.common, recorded);
  const fs::path dir = output_dir(a.common);

  const MConvergence mc = m_convergence_diagnostic(c.spec(c.ms.front(), c.ns.front()), c.ms, c.ns, c.schedule(),
                                                   threads);
  std::vector<real> n_eff_at_max;
  for (const auto& p : mc.table)
    if (p.m == c.ms.back()) n_eff_at_max.push_back(p.n_eff);
  const real slope = c.ns.size() >= 2 ? loglog_slope(c.ns, n_eff_at_max) : std::nan("");

  json diag = {{"schema_version", kSchemaVersion},
               {"name", c.name},
               {"m_max", c.ms.back()},
               {"loglog_slope", format_real(slope)}};
  if (c.ms.size() < 2) {
    std::cerr << "warning: a single m was given; no m* convergence diagnostic is reported\n";
    diag["m_star"] = nullptr;
  } else {
    diag["m_star"] = mc.m_star ? json(*mc.m_star) : json(nullptr);
    if (!mc.m_star) std::cerr << "warning: N_eff did not settle to 1% over the m list\n";
  }

  const fs::path csv = dir / "effdim.csv";
  const fs::path js = dir / "effdim.json";
  write_file(csv, [&](std::ostream& os) { write_effdim_csv(c.name, mc.table, os); });
  write_file(js, [&](std::ostream& os) { os << diag.dump(2) << '\n'; });
  write_manifest(dir, "effdim", json{{"effdim", to_json(c)}}, threads, {csv, js});

  std::ifstream back(csv);
  std::cout << back.rdbuf();
  std::cout << "loglog_slope," << diag["loglog_slope"].get<std::string>() << '\n';
  if (!diag["m_star"].is_null()) std::cout << "m_star," << diag["m_star"].get<int>() << '\n';
  return 0;
}

struct SpectrumArgs {
  EffDimArgs base;
  std::optional<int> m;
  std::optional<double> n;
  bool save_matrix = false;
};

int cmd_spectrum(const SpectrumArgs& a) {
  std::optional<unsigned> recorded;
  EffDimConfig c = load_effdim(a.base, recorded);
  const int m = a.m.value_or(c.ms.back());
  const real n = a.n.value_or(c.ns.back());
  c.ms = {m};
  c.ns = {n};
  c.validate();
  const unsigned threads = resolve_threads(a.base.common, recorded);
  const fs::path dir = output_dir(a.base.common);

  const GramSpec spec = c.spec(m, n);
  const HermitianMatrix mm = assemble_m(spec, threads);
  const HermitianMatrix cc = assemble_c(spec, threads);
  SpectrumReport rep = compute_spectrum(mm, cc);
  rep.lambda = spec.lambda;
  rep.mu = spec.mu;

  const fs::path csv = dir / "spectrum.csv";
  const fs::path js = dir / "spectrum.json";
  const json summary = {{"schema_version", kSchemaVersion}, {"name", c.name},
                        {"m", m},
                        {"n", format_real(n)},
                        {"lambda", format_real(spec.lambda)},
                        {"mu", format_real(spec.mu)},
                        {"N_eff", format_real(effective_dimension(rep))}};
  write_file(csv, [&](std::ostream& os) { write_spectrum_csv(rep, os); });
  write_file(js, [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
  std::vector<fs::path> outputs{csv, js};
  if (a.save_matrix) {
    const fs::path bin = dir / "m_matrix.bin";
    write_file(bin, [&](std::ostream& os) { write_binary(mm, os); });
    outputs.push_back(bin);
  }
  write_manifest(dir, "spectrum", json{{"effdim", to_json(c)}}, threads, outputs);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

// ---- solve-wave ------------------------------------------------------------

struct WaveArgs {
  Common common;
  std::optional<long> n;
  std::optional<double> sigma;
  std::vector<std::string> methods;
  bool grids = false;
};

int cmd_solve_wave(const WaveArgs& a) {
  check_precision_value(a.common.precision);
  std::optional<unsigned> recorded;
  WaveConfig c;
  if (auto j = section(a.common, "wave", recorded)) c = wave_from_json(*j);
  if (a.n) c.n = *a.n;
  if (a.sigma) c.sigma = *a.sigma;
  if (!a.methods.empty()) c.methods = a.methods;
  if (!a.common.seeds.empty()) c.seeds = parse_seed_list(a.common.seeds);
  Scenario sc = c.scenario();
  const unsigned threads = resolve_threads(a.common, recorded);
  sc.threads = threads;
  const fs::path dir = output_dir(a.common);

  const RunReport report = run_scenario(sc);
  const fs::path table = dir / "wave_table.csv";
  const fs::path csv = dir / "report.csv";
  const fs::path js = dir / "report.json";
  write_file(table, [&](std::ostream& os) { write_wave_table_csv(report, c.sigma, os); });
  write_file(csv, [&](std::ostream& os) { write_report_csv(report, os); });
  write_file(js, [&](std::ostream& os) { os << report_to_json(report).dump(2) << '\n'; });
  write_file(dir / "timings.csv", [&](std::ostream& os) { write_timings_csv(report, os); });
  std::vector<fs::path> outputs{table, csv, js};

  if (a.grids) {
    const auto [l1, l2] = wave_grid_split(c.n);
    for (const auto& b : sc.baselines) {
      WaveOptions o;
      o.l1 = l1;
      o.l2 = l2;
      o.noise = NoisySpec{c.sigma, c.seeds.front()};
      o.keep_grid = true;
      const WaveResult r = solve_wave(parse_wave_method(b), o);
      const fs::path g = dir / ("grid_" + b + ".csv");
      write_file(g, [&](std::ostream& os) { write_csv(*r.grid, os); });
      outputs.push_back(g);
    }
  }
  write_manifest(dir, "solve-wave", json{{"wave", to_json(c)}}, threads, outputs);

  std::ifstream back(table);
  std::cout << back.rdbuf();
  return 0;
}

// ---- inspect ---------------------------------------------------------------

int cmd_inspect(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  char magic[8] = {};
  in.read(magic, 8);
  const std::string head(magic, static_cast<std::size_t>(in.gcount()));
  in.clear();
  in.seekg(0);
  if (head == "PIKLHM01") {
    const HermitianMatrix m = read_binary_matrix(in);
    std::cout << "kind,hermitian_matrix\nm," << m.modes.m() << "\nd," << m.modes.dim() << "\nL,"
              << format_real(m.modes.half_width()) << "\nsize," << m.size() << "\nasymmetry,"
              << format_real(m.asymmetry()) << "\nmax_abs_entry," << format_real(m.entries.cwiseAbs().maxCoeff())
              << '\n';
    return 0;
  }
  if (head == "PIKLMD01") {
    const PiklModel model = read_binary_model(in);
    std::cout << "kind,model\nm," << model.modes.m() << "\nd," << model.modes.dim() << "\nL,"
              << format_real(model.modes.half_width()) << "\ncoefficients," << model.z.size() << "\nmax_abs_z,"
              << format_real(model.z.cwiseAbs().maxCoeff()) << '\n';
    return 0;
  }
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error&) {
    throw ConfigError("'" + path + "' is neither a pikl binary file nor JSON");
  }
  if (!doc.is_object() || !doc.contains("manifest_version")) {
    check_precision(doc);
    std::cout << "kind,config\nsections,";
    bool first = true;
    for (const auto& [k, v] : doc.items()) {
      std::cout << (first ? "" : ";") << k;
      first = false;
    }
    std::cout << "\nconfig_hash," << config_hash(doc) << '\n';
    return 0;
  }
  // Manifest: recompute the config hash and every output hash next to it.
  const fs::path dir = fs::path(path).parent_path();
  bool ok = config_hash(doc.at("config")) == doc.at("config_hash").get<std::string>();
  std::cout << "kind,manifest\ncommand," << doc.at("command").get<std::string>() << "\nconfig_hash,"
            << doc.at("config_hash").get<std::string>() << (ok ? ",ok" : ",MISMATCH") << '\n';
  for (const auto& [name, hash] : doc.at("outputs").items()) {
    std::ifstream f(dir / name, std::ios::binary);
    std::string status = "missing";
    if (f) {
      std::ostringstream buf;
      buf << f.rdbuf();
      status = content_hash(buf.str()) == hash.get<std::string>() ? "ok" : "MISMATCH";
    }
    if (status != "ok") ok = false;
    std::cout << "output," << name << ',' << status << '\n';
  }
  return ok ? 0 : kExitIo;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const FactorizationError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapacityError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics-informed kernel learning: benchmarks, spectra and wave solvers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pikl 0.1.0");

  RunArgs run;
  auto* c_run = app.add_subcommand("run", "Run a benchmark scenario and write report.csv/report.json/manifest.json");
  add_common(c_run, run.common);
  c_run->add_option("-s,--scenario", run.scenario, "Preset: oscillator, heat_hybrid, convection, wave, wave_noisy");
  c_run->add_option("--beta", run.beta, "Convection speed");
  c_run->add_option("--m", run.m, "Modes per axis");
  c_run->add_option("--n", run.ns, "Sample sizes (repeatable)");

  EffDimArgs eff;
  auto* c_eff = app.add_subcommand("effdim", "Effective dimension over an (m, n) sweep");
  add_common(c_eff, eff.common);
  c_eff->add_option("-p,--preset", eff.preset, "ddx, harmonic_oscillator or heat_disk");
  c_eff->add_option("--m", eff.ms, "Mode budgets, increasing (repeatable)");
  c_eff->add_option("--n", eff.ns, "Sample sizes (repeatable)");

  SpectrumArgs spec;
  auto* c_spec = app.add_subcommand("spectrum", "Eigenvalues of C M^-1 C at one (m, n)");
  add_common(c_spec, spec.base.common);
  c_spec->add_option("-p,--preset", spec.base.preset, "ddx, harmonic_oscillator or heat_disk");
  c_spec->add_option("--m", spec.m, "Modes per axis (default: largest m of the config)");
  c_spec->add_option("--n", spec.n, "Sample size fixing (lambda, mu) through the schedule");
  c_spec->add_flag("--save-matrix", spec.save_matrix, "Also write M as m_matrix.bin");

  WaveArgs wave;
  auto* c_wave = app.add_subcommand("solve-wave", "PIKL against Euler, RK4 and Crank-Nicolson on the wave equation");
  add_common(c_wave, wave.common);
  c_wave->add_option("--n", wave.n, "Number of conditioning points");
  c_wave->add_option("--sigma", wave.sigma, "Noise standard deviation on initial and boundary data");
  c_wave->add_option("--method", wave.methods, "pikl, euler, rk4 or cn (repeatable)");
  c_wave->add_flag("--grids", wave.grids, "Dump the classic solvers' grids for the first seed");

  std::string inspect_path;
  auto* c_inspect = app.add_subcommand("inspect", "Describe a matrix/model file, a config, or verify a manifest");
  c_inspect->add_option("file", inspect_path, "File to inspect")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (c_run->parsed()) return guarded([&] { return cmd_run(run); });
  if (c_eff->parsed()) return guarded([&] { return cmd_effdim(eff); });
  if (c_spec->parsed()) return guarded([&] { return cmd_spectrum(spec); });
  if (c_wave->parsed()) return guarded([&] { return cmd_solve_wave(wave); });
  if (c_inspect->parsed()) return guarded([&] { return cmd_inspect(inspect_path); });
  return kExitConfig;
}
