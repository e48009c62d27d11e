#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "thzorient/constants.hpp"
#include "thzorient/ensemble_run.hpp"
#include "thzorient/parallel.hpp"
#include "thzorient/result_file.hpp"
#include "thzorient/run_setup.hpp"
#include "thzorient/scans.hpp"
#include "thzorient/svg.hpp"
#include "thzorient/units.hpp"

namespace {

using namespace thzo;

constexpr const char* kVersion = "1.0.0";

// Pulls `--config PATH` out of the raw arguments and splices the file's
// "key = value" entries in as flags, skipping any key already given on the
// command line (flags override the file). Unknown keys then fail in the
// regular option parser, which names them.
std::vector<std::string> merge_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  std::string config_path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        throw std::invalid_argument("--config needs a file path");
      }
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      ++i;
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) {
    throw std::invalid_argument("cannot read config file " + config_path);
  }
  const auto given = [&args](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (value == "true") {
      args.push_back(flag);
    } else if (value == "false") {
      // explicit off: nothing to inject
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

struct CommonOptions {
  std::string out_dir = "./out";
  bool svg = false;
  int workers = 0;  // 0 = hardware concurrency
};

struct PhysicsFlags {
  std::string molecule;
  double B = 0.0, mu0 = 0.0;
  double E0 = 0.0, delta = 0.0, f = 0.0;
  double A = 0.0, F = 0.0, D = 0.0;
  double T = 0.0, Ttilde = 0.0;
  bool has(const CLI::App& app, const std::string& name) const {
    return app.count(name) > 0;
  }
};

void add_physics_options(CLI::App* cmd, PhysicsFlags& flags) {
  cmd->add_option("--molecule", flags.molecule,
                  "built-in molecule name (see `molecules`)");
  cmd->add_option("--B", flags.B, "rotational constant (cm^-1)");
  cmd->add_option("--mu0", flags.mu0, "permanent dipole (debye)");
  cmd->add_option("--E0", flags.E0, "peak field amplitude (MV/cm)");
  cmd->add_option("--delta", flags.delta, "pulse duration (ps)");
  cmd->add_option("--f", flags.f, "central frequency (THz)");
  cmd->add_option("--A", flags.A, "reduced field amplitude");
  cmd->add_option("--F", flags.F, "reduced central frequency");
  cmd->add_option("--D", flags.D, "reduced pulse duration");
  cmd->add_option("--T", flags.T, "temperature (K)");
  cmd->add_option("--Ttilde", flags.Ttilde, "reduced temperature");
}

RunConfig to_run_config(const CLI::App& cmd, const PhysicsFlags& f) {
  RunConfig rc;
  if (cmd.count("--molecule")) rc.molecule = f.molecule;
  if (cmd.count("--B")) rc.B_cm1 = f.B;
  if (cmd.count("--mu0")) rc.mu0_debye = f.mu0;
  if (cmd.count("--E0")) rc.E0_mv_cm = f.E0;
  if (cmd.count("--delta")) rc.delta_ps = f.delta;
  if (cmd.count("--f")) rc.f_thz = f.f;
  if (cmd.count("--A")) rc.A = f.A;
  if (cmd.count("--F")) rc.F = f.F;
  if (cmd.count("--D")) rc.D = f.D;
  if (cmd.count("--T")) rc.T_K = f.T;
  if (cmd.count("--Ttilde")) rc.T_tilde = f.Ttilde;
  return rc;
}

std::string echo_hash(const std::vector<std::pair<std::string, std::string>>& echo) {
  std::string canon;
  for (const auto& [k, v] : echo) canon += k + " = " + v + "\n";
  return hash_hex(fnv1a64(canon));
}

MetadataHeader base_header(const std::string& subcommand,
                           const std::vector<std::pair<std::string, std::string>>& echo) {
  MetadataHeader h;
  h.line(std::string("thzorient ") + kVersion);
  h.kv("subcommand", subcommand);
  h.kv("config_hash", echo_hash(echo));
  for (const auto& [k, v] : echo) h.config(k, v);
  return h;
}

void add_ensemble_summary(MetadataHeader& h, const EnsembleRunResult& run) {
  h.kv("ensemble: Ttilde", run.ensemble.T_tilde);
  h.kv("ensemble: J0max", static_cast<double>(run.ensemble.J0_max));
  h.kv("ensemble: members", static_cast<double>(run.ensemble.members.size()));
  h.kv("ensemble: tail_mass", run.ensemble.tail_mass);
  h.kv("ensemble: max_Jmax", static_cast<double>(run.max_Jmax));
  h.kv("ensemble: max_norm_drift", run.max_norm_drift);
}

int run_molecules() {
  std::printf("name,B_cm1,mu0_debye,A,F,D\n");
  for (const auto& mol : molecule_table()) {
    const ReducedParams rp = to_reduced(mol, default_field(), 0.0);
    std::printf("%s,%g,%g,%.4f,%.4f,%.4f\n", mol.name.c_str(),
                mol.rotational_constant_cm1, mol.dipole_debye, rp.amplitude,
                rp.frequency, rp.duration);
  }
  return 0;
}

int run_convert(const CLI::App& cmd, const PhysicsFlags& flags) {
  const RunConfig rc = to_run_config(cmd, flags);
  const ResolvedRun run = resolve_run(rc);
  std::printf("A=%.4f F=%.4f D=%.4f", run.pulse.amplitude, run.pulse.frequency,
              run.pulse.duration);
  if (rc.T_K.has_value() || rc.T_tilde.has_value()) {
    std::printf(" Ttilde=%.4f", run.T_tilde);
  }
  std::printf("\n");
  return 0;
}

struct TraceOptions {
  double post_periods = 2.0;
  int post_samples = 1024;
  int trace_samples = 512;
  double samples_per_period = 64.0;
  double norm_tol = 1e-8;
  double cutoff = 1e-6;
};

int run_trace(const CLI::App& cmd, const PhysicsFlags& flags,
              const TraceOptions& opt, const CommonOptions& common) {
  const ResolvedRun setup = resolve_run(to_run_config(cmd, flags));

  auto echo = setup.echo;
  echo.emplace_back("post-periods", format_sig12(opt.post_periods));
  echo.emplace_back("post-samples", std::to_string(opt.post_samples));
  echo.emplace_back("trace-samples", std::to_string(opt.trace_samples));
  echo.emplace_back("samples-per-period", format_sig12(opt.samples_per_period));
  echo.emplace_back("norm-tol", format_sig12(opt.norm_tol));
  echo.emplace_back("cutoff", format_sig12(opt.cutoff));

  PropagationConfig cfg;
  cfg.samples_per_period = opt.samples_per_period;
  cfg.norm_tolerance = opt.norm_tol;
  cfg.trace_samples = opt.trace_samples;
  const int workers = common.workers > 0 ? common.workers : default_workers();

  const EnsembleRunResult run =
      run_ensemble(setup.pulse, setup.T_tilde, cfg, workers, opt.cutoff);
  const OrientationTrace trace =
      run.trace(opt.post_samples, opt.post_periods * constants::pi);
  const OrientationExtremum ext = run.max_post_pulse(Component::total);

  MetadataHeader h = base_header("trace", echo);
  add_ensemble_summary(h, run);
  h.kv("max_orientation", ext.magnitude);
  h.kv("max_orientation_signed", ext.value);
  h.kv("max_orientation_tau", ext.tau);
  h.columns("tau,total,zero_T,thermal");

  std::ostringstream csv;
  csv << h.render();
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    csv << format_sig12(trace.times[i]) << "," << format_sig12(trace.total[i])
        << "," << format_sig12(trace.zero_T[i]) << ","
        << format_sig12(trace.thermal[i]) << "\n";
  }

  const std::filesystem::path dir(common.out_dir);
  const std::string stem = "trace_" + echo_hash(echo);
  write_text_atomic(dir / (stem + ".csv"), csv.str());
  std::printf("wrote %s\n", (dir / (stem + ".csv")).c_str());

  if (common.svg) {
    std::vector<svg::Series> series(3);
    series[0] = {"total", "#4c72b0", trace.times, trace.total};
    series[1] = {"zero_T", "#c44e52", trace.times, trace.zero_T};
    series[2] = {"thermal", "#55a868", trace.times, trace.thermal};
    write_text_atomic(dir / (stem + ".svg"),
                      svg::line_chart("<cos theta>(tau)", "tau (reduced)",
                                      "<cos theta>", series));
    std::printf("wrote %s\n", (dir / (stem + ".svg")).c_str());
  }
  return 0;
}

struct SpectrumOptions {
  int jmax_lines = 40;
  double resolution_factor = 40.0;  // grid spacing = 1/(factor * D)
  double cutoff = 1e-6;
};

int run_spectrum(const CLI::App& cmd, const PhysicsFlags& flags,
                 const SpectrumOptions& opt, const CommonOptions& common) {
  const ResolvedRun setup = resolve_run(to_run_config(cmd, flags));

  auto echo = setup.echo;
  echo.emplace_back("jmax-lines", std::to_string(opt.jmax_lines));
  echo.emplace_back("resolution-factor", format_sig12(opt.resolution_factor));
  echo.emplace_back("cutoff", format_sig12(opt.cutoff));

  FrequencyGrid grid = default_grid(setup.pulse);
  grid.resolution = 1.0 / (opt.resolution_factor * setup.pulse.duration);
  const FieldSpectrum spec = spectrum(setup.pulse, grid);
  const ThermalEnsemble ens = build_ensemble(setup.T_tilde, opt.cutoff);
  const OverlapReport report = overlap_report(setup.pulse, ens, opt.jmax_lines);

  MetadataHeader h = base_header("spectrum", echo);
  h.kv("ensemble: Ttilde", ens.T_tilde);
  h.kv("ensemble: J0max", static_cast<double>(ens.J0_max));
  h.kv("ensemble: members", static_cast<double>(ens.members.size()));
  h.kv("ensemble: tail_mass", ens.tail_mass);
  h.kv("overlap_score", report.score);

  const std::filesystem::path dir(common.out_dir);
  const std::string stem = "spectrum_" + echo_hash(echo);

  {
    MetadataHeader hs = h;
    hs.columns("nu,magnitude");
    std::ostringstream csv;
    csv << hs.render();
    for (std::size_t i = 0; i < spec.frequencies.size(); ++i) {
      csv << format_sig12(spec.frequencies[i]) << ","
          << format_sig12(spec.magnitudes[i]) << "\n";
    }
    write_text_atomic(dir / (stem + ".csv"), csv.str());
    std::printf("wrote %s\n", (dir / (stem + ".csv")).c_str());
  }
  {
    MetadataHeader hl = h;
    hl.columns("J,omega,P,magnitude");
    std::ostringstream csv;
    csv << hl.render();
    for (const auto& line : report.lines) {
      csv << line.J << "," << format_sig12(line.omega) << ","
          << format_sig12(line.population) << ","
          << format_sig12(line.magnitude) << "\n";
    }
    write_text_atomic(dir / (stem + "_lines.csv"), csv.str());
    std::printf("wrote %s\n", (dir / (stem + "_lines.csv")).c_str());
  }

  if (common.svg) {
    std::vector<double> omega(spec.frequencies.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
      omega[i] = 2.0 * constants::pi * spec.frequencies[i];
    }
    std::vector<svg::SpectrumStick> sticks;
    for (const auto& line : report.lines) {
      sticks.push_back({line.omega, line.population});
    }
    write_text_atomic(dir / (stem + ".svg"),
                      svg::spectrum_chart("field spectrum vs rotational lines",
                                          omega, spec.magnitudes, sticks));
    std::printf("wrote %s\n", (dir / (stem + ".svg")).c_str());
  }
  return 0;
}

struct ScanFlags {
  std::string mode;  // bt | e0t | tcurve
  std::string axis1, axis2;
  std::string molecule;
  double mu0 = 1.0;
  double B = 0.0;
  double E0 = 2.0, delta = 5.0, f = 0.5;
  double samples_per_period = 64.0;
  double norm_tol = 1e-8;
  double cutoff = 1e-6;
  bool fresh = false;
};

int run_scan(const CLI::App& cmd, const ScanFlags& flags,
             const CommonOptions& common) {
  ScanOptions options;
  options.prop.samples_per_period = flags.samples_per_period;
  options.prop.norm_tolerance = flags.norm_tol;
  options.prop.trace_samples = 0;
  options.ensemble_cutoff = flags.cutoff;
  options.workers = common.workers > 0 ? common.workers : default_workers();

  PhysicalMolecule molecule;
  const bool needs_molecule = flags.mode == "e0t" || flags.mode == "tcurve";
  if (needs_molecule) {
    if (cmd.count("--molecule")) {
      const auto found = find_molecule(flags.molecule);
      if (!found) {
        throw std::invalid_argument("unknown molecule '" + flags.molecule + "'");
      }
      molecule = *found;
    } else if (cmd.count("--B") && cmd.count("--mu0")) {
      molecule = PhysicalMolecule{"custom", flags.B, flags.mu0};
    } else {
      throw std::invalid_argument(
          "scan mode " + flags.mode + " needs --molecule or --B/--mu0");
    }
  }

  std::vector<std::pair<std::string, std::string>> echo;
  echo.emplace_back("mode", flags.mode);
  echo.emplace_back("axis1", flags.axis1);
  AxisSpec axis1, axis2;
  if (flags.mode == "bt") {
    axis1 = AxisSpec::parse(flags.axis1, "cm^-1");
    axis2 = AxisSpec::parse(flags.axis2, "K");
    echo.emplace_back("axis2", flags.axis2);
    echo.emplace_back("mu0", format_sig12(flags.mu0));
  } else if (flags.mode == "e0t") {
    axis1 = AxisSpec::parse(flags.axis1, "MV/cm");
    axis2 = AxisSpec::parse(flags.axis2, "K");
    echo.emplace_back("axis2", flags.axis2);
  } else if (flags.mode == "tcurve") {
    axis1 = AxisSpec::parse(flags.axis1, "K");
  } else {
    throw std::invalid_argument("scan mode must be bt, e0t or tcurve");
  }
  if (needs_molecule) {
    if (cmd.count("--molecule")) {
      echo.emplace_back("molecule", molecule.name);
    } else {
      echo.emplace_back("B", format_sig12(molecule.rotational_constant_cm1));
      echo.emplace_back("mu0", format_sig12(molecule.dipole_debye));
    }
  }
  if (flags.mode != "e0t") echo.emplace_back("E0", format_sig12(flags.E0));
  echo.emplace_back("delta", format_sig12(flags.delta));
  echo.emplace_back("f", format_sig12(flags.f));
  echo.emplace_back("samples-per-period", format_sig12(flags.samples_per_period));
  echo.emplace_back("norm-tol", format_sig12(flags.norm_tol));
  echo.emplace_back("cutoff", format_sig12(flags.cutoff));

  const std::string hash = echo_hash(echo);
  const std::filesystem::path dir(common.out_dir);
  const std::string stem = "scan_" + flags.mode + "_" + hash;
  std::filesystem::create_directories(dir);

  ScanCheckpoint checkpoint(dir / (stem + ".ndjson"), hash, !flags.fresh);
  if (checkpoint.loaded_cells() > 0) {
    std::printf("resuming from checkpoint: %zu cells already done\n",
                checkpoint.loaded_cells());
  }

  ScanResult result;
  const PhysicalField field{flags.E0, flags.delta, flags.f};
  if (flags.mode == "bt") {
    result = scan_B_T(axis1, axis2, field, flags.mu0, options, &checkpoint);
  } else if (flags.mode == "e0t") {
    result = scan_E0_T(axis1, axis2, molecule, flags.delta, flags.f, options,
                       &checkpoint);
  } else {
    result = temperature_curve(molecule, axis1, field, options, &checkpoint);
  }

  MetadataHeader h = base_header("scan", echo);
  std::size_t failed = 0;
  for (const auto& m : result.meta) failed += m.ok ? 0 : 1;
  h.kv("cells", static_cast<double>(result.cell_count()));
  h.kv("failed_cells", static_cast<double>(failed));

  const auto written = write_scan_outputs(result, h, dir, stem, common.svg);
  for (const auto& p : written) std::printf("wrote %s\n", p.c_str());

  if (flags.mode == "bt") {
    std::printf("two_zone_structure: %s\n",
                two_zone_structure(result) ? "yes" : "no");
  }
  if (failed > 0) {
    std::fprintf(stderr, "%zu of %zu cells failed; partial results kept\n",
                 failed, result.cell_count());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Field-free orientation of linear polar molecules driven by "
               "zero-area THz pulses"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonOptions common;
  PhysicsFlags physics;
  TraceOptions trace_opt;
  SpectrumOptions spectrum_opt;
  ScanFlags scan_flags;

  CLI::App* molecules = app.add_subcommand(
      "molecules", "print the built-in molecule table as CSV");

  std::string config_doc;  // handled by merge_config_args before parsing
  const auto add_config_doc = [&config_doc](CLI::App* cmd) {
    cmd->add_option("--config", config_doc,
                    "key=value config file; flags override the file");
  };

  CLI::App* convert = app.add_subcommand(
      "convert", "convert a physical specification to reduced parameters");
  add_physics_options(convert, physics);
  add_config_doc(convert);

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out-dir", common.out_dir, "output directory");
    cmd->add_flag("--svg", common.svg, "also emit SVG figures");
    cmd->add_option("--workers", common.workers, "worker thread count")
        ->envname("THZORIENT_WORKERS");
    add_config_doc(cmd);
  };

  CLI::App* trace = app.add_subcommand(
      "trace", "time trace of <cos theta> through and after the pulse");
  add_physics_options(trace, physics);
  trace->add_option("--post-periods", trace_opt.post_periods,
                    "post-pulse rotational periods to sample");
  trace->add_option("--post-samples", trace_opt.post_samples,
                    "post-pulse sample count");
  trace->add_option("--trace-samples", trace_opt.trace_samples,
                    "in-pulse sample count");
  trace->add_option("--samples-per-period", trace_opt.samples_per_period,
                    "integrator samples per carrier period");
  trace->add_option("--norm-tol", trace_opt.norm_tol, "norm drift tolerance");
  trace->add_option("--cutoff", trace_opt.cutoff, "ensemble tail cutoff");
  add_common(trace);

  CLI::App* spectrumc = app.add_subcommand(
      "spectrum", "field spectrum and rotational-line overlap report");
  add_physics_options(spectrumc, physics);
  spectrumc->add_option("--jmax-lines", spectrum_opt.jmax_lines,
                        "highest rotational line J");
  spectrumc->add_option("--resolution-factor", spectrum_opt.resolution_factor,
                        "grid spacing = 1/(factor*D)");
  spectrumc->add_option("--cutoff", spectrum_opt.cutoff, "ensemble tail cutoff");
  add_common(spectrumc);

  CLI::App* scan = app.add_subcommand(
      "scan", "parameter sweeps with checkpoint/resume (bt, e0t, tcurve)");
  scan->add_option("--mode", scan_flags.mode, "bt | e0t | tcurve")->required();
  scan->add_option("--axis1", scan_flags.axis1,
                   "first axis, name:scale:min:max:count")->required();
  scan->add_option("--axis2", scan_flags.axis2,
                   "second axis (bt/e0t), name:scale:min:max:count");
  scan->add_option("--molecule", scan_flags.molecule, "molecule (e0t/tcurve)");
  scan->add_option("--B", scan_flags.B, "raw rotational constant (cm^-1)");
  scan->add_option("--mu0", scan_flags.mu0, "dipole (debye); bt: fictive dipole");
  scan->add_option("--E0", scan_flags.E0, "peak amplitude (MV/cm)");
  scan->add_option("--delta", scan_flags.delta, "pulse duration (ps)");
  scan->add_option("--f", scan_flags.f, "central frequency (THz)");
  scan->add_option("--samples-per-period", scan_flags.samples_per_period,
                   "integrator samples per carrier period");
  scan->add_option("--norm-tol", scan_flags.norm_tol, "norm drift tolerance");
  scan->add_option("--cutoff", scan_flags.cutoff, "ensemble tail cutoff");
  scan->add_flag("--fresh", scan_flags.fresh,
                 "ignore an existing checkpoint and start over");
  add_common(scan);

  try {
    std::vector<std::string> args = merge_config_args(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (molecules->parsed()) return run_molecules();
    if (convert->parsed()) return run_convert(*convert, physics);
    if (trace->parsed()) return run_trace(*trace, physics, trace_opt, common);
    if (spectrumc->parsed()) {
      return run_spectrum(*spectrumc, physics, spectrum_opt, common);
    }
    if (scan->parsed()) return run_scan(*scan, scan_flags, common);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
