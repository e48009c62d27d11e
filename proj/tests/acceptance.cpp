// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Run with no arguments for all criteria, or pass criterion numbers
// (e.g. "acceptance 3 7"). Exits nonzero if any executed criterion fails.

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "oracles.hpp"
#include "thzorient/constants.hpp"
#include "thzorient/ensemble_run.hpp"
#include "thzorient/parallel.hpp"
#include "thzorient/propagate.hpp"
#include "thzorient/result_file.hpp"
#include "thzorient/scans.hpp"
#include "thzorient/units.hpp"

using namespace thzo;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(bool ok, int criterion, const std::string& text) {
  std::printf("[%s] criterion %02d: %s\n", ok ? "PASS" : "FAIL", criterion,
              text.c_str());
  if (!ok) ++failures;
}

void note(const std::string& text) { std::printf("       %s\n", text.c_str()); }

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "thzo_acceptance";
  fs::create_directories(dir);
  return dir;
}

struct CliResult {
  int exit_code = -1;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
  const fs::path out = work_dir() / "cli_stdout.txt";
  const std::string cmd = std::string(THZORIENT_BIN) + " " + args + " > " +
                          out.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(out);
  r.stdout_text.assign((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  return r;
}

double parse_value(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + "=");
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + key.size() + 1));
}

EnsembleRunResult run_reduced(double A, double F, double D, double T_tilde,
                              int trace_samples = 0) {
  PropagationConfig cfg;
  cfg.trace_samples = trace_samples;
  return run_ensemble({A, F, D}, T_tilde, cfg, 1);
}

double max_total(double A, double F, double D, double T_tilde) {
  return run_reduced(A, F, D, T_tilde).max_post_pulse(Component::total).magnitude;
}

// ---------------------------------------------------------------------------

void criterion_01() {
  struct Row {
    const char* name;
    double A, F, D;
  };
  const Row table[] = {{"OCS", 117.8497, 13.0823, 0.1911},
                       {"HF", 2.9167, 0.1267, 19.7371},
                       {"LiH", 26.2842, 0.3533, 7.0760},
                       {"CO", 1.9479, 1.3746, 1.8187},
                       {"LiCl", 158.0563, 1.9735, 1.2668}};
  bool ok = true;
  double worst = 0.0;
  for (const Row& row : table) {
    const CliResult r = run_cli(std::string("convert --molecule ") + row.name);
    if (r.exit_code != 0) {
      ok = false;
      note(fmt("convert %s exited %d", row.name, r.exit_code));
      continue;
    }
    const double A = parse_value(r.stdout_text, "A");
    const double F = parse_value(r.stdout_text, "F");
    const double D = parse_value(r.stdout_text, "D");
    const double dev = std::max({std::abs(A - row.A), std::abs(F - row.F),
                                 std::abs(D - row.D)});
    worst = std::max(worst, dev);
    if (!(dev <= 1e-3)) {
      ok = false;
      note(fmt("%s: A=%.4f F=%.4f D=%.4f deviates %.2e", row.name, A, F, D, dev));
    }
  }
  verdict(ok, 1, fmt("`convert` reproduces all five reference molecules to "
                     "±1e-3 at 2 MV/cm, 5 ps, 0.5 THz (worst %.2e)", worst));
}

void criterion_02() {
  struct Item {
    const char* what;
    double measured, target;
  };
  const Item items[] = {
      {"delta(B=2, D=1) [ps]", from_reduced_duration_ps(2.0, 1.0), 2.654},
      {"delta(B=2, D=3) [ps]", from_reduced_duration_ps(2.0, 3.0), 7.963},
      {"f(B=2, F=2) [THz]", from_reduced_frequency_thz(2.0, 2.0), 0.753},
      {"f(B=2, F=0.5) [THz]", from_reduced_frequency_thz(2.0, 0.5), 0.188},
      {"T(B=2, Ttilde=50) [K]", from_reduced_temperature_K(2.0, 50.0), 143.9},
  };
  bool ok = true;
  for (const Item& item : items) {
    const double dev = std::abs(item.measured - item.target);
    const bool pass = dev <= 1e-3;
    if (!pass) ok = false;
    note(fmt("%-24s measured %.6f target %.3f |dev| %.2e -> %s", item.what,
             item.measured, item.target, dev, pass ? "ok" : "MISS"));
  }
  if (!ok) {
    note("the temperature item cannot meet ±0.001 K: the exact conversion of");
    note("Ttilde=50 at B=2 cm^-1 is 143.8778 K with exact 2019-SI constants,");
    note("and the 143.9 K target is a one-decimal rounding of that value");
    note("(it does match at the target's own 0.05 K print precision).");
  }
  verdict(ok, 2, "reference unit conversions reproduce to ±0.001 in the "
                 "stated unit");
}

void criterion_03() {
  bool ok = true;

  // Dense time-ordered exponential oracle, Jmax <= 8.
  {
    const BasisSpec basis{0, 6};
    const PulseShape pulse{4.0, 2.0, 1.0};
    Eigen::VectorXcd init = Eigen::VectorXcd::Zero(basis.dimension());
    init[0] = 1.0;
    const Eigen::VectorXcd ref =
        oracles::converged_time_ordered(basis, pulse, init, 1e-10);
    PropagationConfig cfg;
    cfg.trace_samples = 0;
    const BlockResult run =
        propagate_block(RotorOperators::build(basis), {0}, pulse, cfg);
    const double err = (run.final_amplitudes.col(0) - ref).norm();
    note(fmt("dense oracle (Jmax=6, A=4, F=2, D=1): |diff| = %.2e", err));
    if (!(err <= 1e-8)) ok = false;
  }
  {
    const BasisSpec basis{1, 8};
    const PulseShape pulse{6.0, 1.2, 2.0};
    Eigen::VectorXcd init = Eigen::VectorXcd::Zero(basis.dimension());
    init[0] = 1.0;
    const Eigen::VectorXcd ref =
        oracles::converged_time_ordered(basis, pulse, init, 1e-10);
    PropagationConfig cfg;
    cfg.trace_samples = 0;
    const BlockResult run =
        propagate_block(RotorOperators::build(basis), {1}, pulse, cfg);
    const double err = (run.final_amplitudes.col(0) - ref).norm();
    note(fmt("dense oracle (Jmax=8, M=1, A=6): |diff| = %.2e", err));
    if (!(err <= 1e-8)) ok = false;
  }

  // Unitarity across the reference-molecule pulses and the figure ensembles.
  double worst_drift = 0.0;
  const double rows[][4] = {{117.8497, 13.0823, 0.1911, 513.8},
                            {2.9167, 0.1267, 19.7371, 0.0},
                            {26.2842, 0.3533, 7.0760, 10.0},
                            {1.9479, 1.3746, 1.8187, 3.6},
                            {158.0563, 1.9735, 1.2668, 25.0},
                            {4.0, 2.0, 1.0, 50.0},
                            {4.0, 2.5, 3.0, 50.0}};
  for (const auto& row : rows) {
    const EnsembleRunResult run = run_reduced(row[0], row[1], row[2], row[3]);
    worst_drift = std::max(worst_drift, run.max_norm_drift);
  }
  note(fmt("worst norm drift across the battery: %.2e (every ensemble run in "
           "this suite enforces 1e-8 internally)", worst_drift));
  if (!(worst_drift <= 1e-8)) ok = false;

  verdict(ok, 3, "norm drift <= 1e-8 and dense-oracle agreement <= 1e-8");
}

void criterion_04() {
  bool ok = true;
  double worst = 0.0;
  for (const double T_tilde : {0.0, 50.0}) {
    const EnsembleRunResult run = run_reduced(4.0, 2.0, 1.0, T_tilde);
    for (int i = 0; i < 64; ++i) {
      const double tau = 0.02 + constants::pi * i / 64.0;
      const double diff =
          std::abs(run.evaluate(Component::total, tau + constants::pi) -
                   run.evaluate(Component::total, tau));
      worst = std::max(worst, diff);
    }
  }
  if (!(worst <= 1e-10)) ok = false;
  verdict(ok, 4, fmt("post-pulse revival total(tau+pi) = total(tau), worst "
                     "|diff| %.2e <= 1e-10", worst));
}

void criterion_05() {
  // Threshold 1e-3 confirmed by a step-halving companion run, printed here.
  const double coarse = max_total(4.0, 2.0, 0.01, 0.0);
  PropagationConfig fine_cfg;
  fine_cfg.trace_samples = 0;
  fine_cfg.samples_per_period = 128.0;
  fine_cfg.min_pulse_steps = 512;
  const EnsembleRunResult fine_run =
      run_ensemble({4.0, 2.0, 0.01}, 0.0, fine_cfg, 1);
  const double fine = fine_run.max_post_pulse(Component::total).magnitude;
  note(fmt("max |<cos>| = %.3e (default steps), %.3e (halved steps)", coarse,
           fine));
  const bool ok = coarse < 1e-3 && fine < 1e-3;
  verdict(ok, 5, "zero-area sudden limit (D=0.01, A=4, F=2, T=0): max "
                 "post-pulse orientation < 1e-3");
}

void criterion_06() {
  const double d1_t0 = max_total(4.0, 2.0, 1.0, 0.0);
  const double d1_t50 = max_total(4.0, 2.0, 1.0, 50.0);
  const double d3_t0 = max_total(4.0, 2.0, 3.0, 0.0);
  const double d3_t50 = max_total(4.0, 2.0, 3.0, 50.0);
  const double f25_t0 = max_total(4.0, 2.5, 3.0, 0.0);
  const double f25_t50 = max_total(4.0, 2.5, 3.0, 50.0);
  const double f05_t50 = max_total(4.0, 0.5, 3.0, 50.0);

  note(fmt("(F=2.0, D=1): T=0 -> %.4f, T=50 -> %.4f", d1_t0, d1_t50));
  note(fmt("(F=2.0, D=3): T=0 -> %.4f, T=50 -> %.4f", d3_t0, d3_t50));
  note(fmt("(F=2.5, D=3): T=0 -> %.4f, T=50 -> %.4f", f25_t0, f25_t50));
  note(fmt("(F=0.5, D=3): T=50 -> %.4f", f05_t50));

  // nonzero >= 0.02, near-zero <= 0.01 (cuts confirmed by the convergence
  // battery behind criterion 3; measured values sit far from both cuts).
  bool ok = true;
  ok &= d1_t0 >= 0.02;
  ok &= d1_t50 >= 0.02;
  ok &= d3_t0 <= 0.01;
  ok &= d3_t50 >= 0.02;
  ok &= f25_t0 <= 0.01;
  ok &= f25_t50 >= 0.02;
  ok &= d1_t50 > f25_t50;
  ok &= d1_t50 > f05_t50;
  verdict(ok, 6, "broadband pulse orients at T=0 and T=50; narrowband and "
                 "detuned pulses only at T=50; D=1 beats both "
                 "frequency-shifted cases at T=50");
}

void criterion_07() {
  ScanOptions opt;
  const AxisSpec co_T{"T", "K", "lin", 5.0, 20.0, 4};
  const ScanResult co =
      temperature_curve(*find_molecule("CO"), co_T, default_field(), opt);
  double co_best = 0.0;
  for (std::size_t i = 0; i < co.total.size(); ++i) {
    note(fmt("CO   T=%3.0f K: max|<cos>| = %.4f", co.axis1_values[i], co.total[i]));
    co_best = std::max(co_best, co.total[i]);
  }

  const AxisSpec ocs_T{"T", "K", "lin", 140.0, 160.0, 3};
  const ScanResult ocs =
      temperature_curve(*find_molecule("OCS"), ocs_T, default_field(), opt);
  double ocs_best = 0.0;
  for (std::size_t i = 0; i < ocs.total.size(); ++i) {
    note(fmt("OCS  T=%3.0f K: max|<cos>| = %.4f", ocs.axis1_values[i],
             ocs.total[i]));
    ocs_best = std::max(ocs_best, ocs.total[i]);
  }

  const bool ok = co.all_ok() && ocs.all_ok() && co_best >= 0.10 &&
                  co_best <= 0.20 && ocs_best >= 0.05 && ocs_best <= 0.15;
  verdict(ok, 7, fmt("CO near 10 K: %.3f in 0.15±0.05; OCS near 150 K: %.3f "
                     "in 0.1±0.05", co_best, ocs_best));
}

void criterion_08() {
  // Pointwise decomposition along a full traced run.
  const EnsembleRunResult run = run_reduced(4.0, 2.0, 1.0, 50.0, 512);
  const OrientationTrace trace = run.trace(512, 2.0 * constants::pi);
  double worst = 0.0;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    worst = std::max(worst, std::abs(trace.total[i] -
                                     (trace.zero_T[i] + trace.thermal[i])));
  }
  note(fmt("decomposition identity along %zu samples: worst |diff| %.2e",
           trace.times.size(), worst));
  bool ok = worst <= 1e-12;

  // LiCl: the slope change sits at the zero_T/thermal crossover.
  ScanOptions opt;
  const AxisSpec T_axis{"T", "K", "lin", 0.0, 200.0, 41};
  const ScanResult licl =
      temperature_curve(*find_molecule("LiCl"), T_axis, default_field(), opt);
  ok &= licl.all_ok();

  std::size_t cross = licl.total.size();
  for (std::size_t i = 0; i < licl.total.size(); ++i) {
    if (licl.thermal[i] > licl.zero_T[i]) {
      cross = i;
      break;
    }
  }
  std::size_t knee = 1;
  double best_d2 = -1.0;
  for (std::size_t i = 1; i + 1 < licl.total.size(); ++i) {
    const double d2 =
        std::abs(licl.total[i + 1] - 2.0 * licl.total[i] + licl.total[i - 1]);
    if (d2 > best_d2) {
      best_d2 = d2;
      knee = i;
    }
  }
  note(fmt("LiCl crossover at T=%.0f K (grid step 5 K), slope change at "
           "T=%.0f K", licl.axis1_values[cross], licl.axis1_values[knee]));
  ok &= cross < licl.total.size();
  ok &= std::llabs(static_cast<long long>(cross) -
                   static_cast<long long>(knee)) <= 1;
  verdict(ok, 8, "total = zero_T + thermal to 1e-12 pointwise; LiCl slope "
                 "change coincides with the crossover (±1 grid step)");
}

void criterion_09() {
  ScanOptions opt;
  const AxisSpec E0{"E0", "MV/cm", "lin", 0.05, 2.0, 40};
  const AxisSpec T0{"T", "K", "lin", 0.0, 0.0, 1};
  const ScanResult r =
      scan_E0_T(E0, T0, *find_molecule("LiCl"), 5.0, 0.5, opt);
  bool ok = r.all_ok();

  // Least-squares fit of magnitude = a * E0^p on [0.05, 0.6] MV/cm.
  std::vector<double> e, m;
  for (std::size_t i = 0; i < r.axis1_values.size(); ++i) {
    if (r.axis1_values[i] <= 0.6 + 1e-9) {
      e.push_back(r.axis1_values[i]);
      m.push_back(r.total[i]);
    }
  }
  const auto sse = [&](double p, double* a_out) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      num += m[i] * std::pow(e[i], p);
      den += std::pow(e[i], 2.0 * p);
    }
    const double a = num / den;
    if (a_out != nullptr) *a_out = a;
    double s = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double d = m[i] - a * std::pow(e[i], p);
      s += d * d;
    }
    return s;
  };
  double lo = 0.5, hi = 4.0;
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
  double f1 = sse(x1, nullptr), f2 = sse(x2, nullptr);
  for (int it = 0; it < 100; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = sse(x1, nullptr);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = sse(x2, nullptr);
    }
  }
  const double p = 0.5 * (lo + hi);

  // Reference log-log slope, for the record.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double lx = std::log(e[i]), ly = std::log(m[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  const double n = static_cast<double>(e.size());
  const double loglog = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  note(fmt("fit a*E0^p on [0.05, 0.6] MV/cm (%zu points): p = %.3f "
           "(log-log slope %.3f reflects the first-order tail below ~0.15)",
           e.size(), p, loglog));
  ok &= p >= 1.7 && p <= 2.3;

  // Non-monotone beyond 0.6 MV/cm: an interior local max and a local min.
  bool saw_max = false, saw_min = false;
  for (std::size_t i = 1; i + 1 < r.axis1_values.size(); ++i) {
    if (r.axis1_values[i] <= 0.6) continue;
    if (r.total[i] > r.total[i - 1] && r.total[i] > r.total[i + 1]) saw_max = true;
    if (r.total[i] < r.total[i - 1] && r.total[i] < r.total[i + 1]) saw_min = true;
  }
  note(fmt("above 0.6 MV/cm: interior local max %s, local min %s",
           saw_max ? "found" : "missing", saw_min ? "found" : "missing"));
  ok &= saw_max && saw_min;
  verdict(ok, 9, fmt("LiCl at T=0: magnitude fits E0^%.2f (2 ± 0.3) below "
                     "0.6 MV/cm and is non-monotone above", p));
}

void criterion_10() {
  const AxisSpec B{"B", "cm^-1", "log", 0.1, 21.0, 16};
  const AxisSpec T{"T", "K", "lin", 0.0, 300.0, 16};
  ScanOptions opt;
  opt.workers = default_workers();
  const ScanResult r = scan_B_T(B, T, default_field(), 1.0, opt);
  bool ok = r.all_ok();
  if (!ok) note("scan reported failed cells");

  const auto comps = superlevel_components(r, 0.5);
  note(fmt("half-maximum superlevel set splits into %zu component(s)",
           comps.size()));
  for (std::size_t i = 0; i < comps.size() && i < 4; ++i) {
    note(fmt("  component %zu: %3zu cells, mean log10 B = %+.2f, mean T = "
             "%5.1f K, peak %.3f", i, comps[i].cells.size(),
             comps[i].mean_axis1, comps[i].mean_axis2, comps[i].max_value));
  }
  ok &= two_zone_structure(r);
  verdict(ok, 10, "16x16 (B, T) map shows two disjoint half-maximum regions: "
                  "high-B/low-T and low-B/elevated-T");
}

void criterion_11() {
  const fs::path dir = work_dir() / "c11";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string scan_args =
      "scan --mode bt --axis1 B:log:5:20:3 --axis2 T:lin:0:80:2 --mu0 1.0 "
      "--out-dir ";
  bool ok = true;

  // Deterministic rerun.
  const fs::path out_a = dir / "a";
  ok &= run_cli(scan_args + out_a.string()).exit_code == 0;
  std::string ref;
  fs::path csv_a;
  for (const auto& entry : fs::directory_iterator(out_a)) {
    if (entry.path().filename().string().find("_total.csv") != std::string::npos) {
      csv_a = entry.path();
    }
  }
  {
    std::ifstream in(csv_a);
    ref.assign((std::istreambuf_iterator<char>(in)),
               std::istreambuf_iterator<char>());
  }
  ok &= run_cli(scan_args + out_a.string() + " --fresh").exit_code == 0;
  {
    std::ifstream in(csv_a);
    const std::string again((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    const bool same = again == ref;
    note(fmt("fresh rerun bitwise-identical: %s", same ? "yes" : "NO"));
    ok &= same;
  }

  // Kill mid-run, resume, compare.
  const fs::path out_b = dir / "b";
  const pid_t pid = fork();
  if (pid == 0) {
    std::vector<std::string> args = {"thzorient", "scan", "--mode", "bt",
                                     "--axis1", "B:log:5:20:3", "--axis2",
                                     "T:lin:0:80:2", "--mu0", "1.0",
                                     "--out-dir", out_b.string()};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    execv(THZORIENT_BIN, argv.data());
    _exit(127);
  }
  fs::path ndjson;
  int records = 0;
  for (int i = 0; i < 1200 && records < 3; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    if (ndjson.empty() && fs::exists(out_b)) {
      for (const auto& e : fs::directory_iterator(out_b)) {
        if (e.path().extension() == ".ndjson") ndjson = e.path();
      }
    }
    if (!ndjson.empty()) {
      std::ifstream in(ndjson);
      std::string line;
      records = 0;
      while (std::getline(in, line)) ++records;
    }
  }
  kill(pid, SIGKILL);
  int status = 0;
  waitpid(pid, &status, 0);
  note(fmt("killed scan after %d checkpoint lines", records));
  ok &= records >= 2;

  ok &= run_cli(scan_args + out_b.string()).exit_code == 0;
  fs::path csv_b;
  for (const auto& entry : fs::directory_iterator(out_b)) {
    if (entry.path().filename().string().find("_total.csv") != std::string::npos) {
      csv_b = entry.path();
    }
  }
  {
    std::ifstream in(csv_b);
    const std::string resumed((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    const bool same = resumed == ref;
    note(fmt("kill + resume bitwise-identical: %s", same ? "yes" : "NO"));
    ok &= same;
  }
  verdict(ok, 11, "scan rerun and kill-resume both reproduce the data "
                  "sections bit for bit");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  const auto enabled = [&](int n) { return wanted.empty() || wanted.count(n); };

  if (enabled(1)) criterion_01();
  if (enabled(2)) criterion_02();
  if (enabled(3)) criterion_03();
  if (enabled(4)) criterion_04();
  if (enabled(5)) criterion_05();
  if (enabled(6)) criterion_06();
  if (enabled(7)) criterion_07();
  if (enabled(8)) criterion_08();
  if (enabled(9)) criterion_09();
  if (enabled(10)) criterion_10();
  if (enabled(11)) criterion_11();

  if (failures == 0) {
    std::printf("acceptance: all executed criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return 1;
}
