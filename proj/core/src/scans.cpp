#include "thzorient/scans.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "thzorient/parallel.hpp"
#include "thzorient/svg.hpp"

namespace thzo {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json to_json(const CellRecord& r) {
  json j;
  j["i1"] = r.i1;
  j["i2"] = r.i2;
  j["ok"] = r.ok;
  if (r.ok) {
    j["total"] = r.total;
    j["zero_T"] = r.zero_T;
    j["thermal"] = r.thermal;
    j["total_signed"] = r.total_signed;
    j["zero_T_signed"] = r.zero_T_signed;
    j["thermal_signed"] = r.thermal_signed;
  } else {
    j["error"] = r.error;
  }
  j["jmax"] = r.Jmax;
  j["j0max"] = r.J0max;
  j["norm_drift"] = r.norm_drift;
  j["runtime_ms"] = r.runtime_ms;
  return j;
}

CellRecord from_json(const json& j) {
  CellRecord r;
  r.i1 = j.at("i1").get<std::size_t>();
  r.i2 = j.at("i2").get<std::size_t>();
  r.ok = j.at("ok").get<bool>();
  if (r.ok) {
    r.total = j.at("total").get<double>();
    r.zero_T = j.at("zero_T").get<double>();
    r.thermal = j.at("thermal").get<double>();
    r.total_signed = j.at("total_signed").get<double>();
    r.zero_T_signed = j.at("zero_T_signed").get<double>();
    r.thermal_signed = j.at("thermal_signed").get<double>();
  } else {
    r.error = j.value("error", "");
  }
  r.Jmax = j.value("jmax", 0);
  r.J0max = j.value("j0max", 0);
  r.norm_drift = j.value("norm_drift", 0.0);
  r.runtime_ms = j.value("runtime_ms", 0.0);
  return r;
}

// Maps one grid cell to the physical inputs of a single ensemble run.
struct CellProblem {
  PhysicalMolecule molecule;
  PhysicalField field;
  double temperature_K = 0.0;
};

ScanResult run_grid(const AxisSpec& axis1, const AxisSpec& axis2,
                    const std::function<CellProblem(double, double)>& setup,
                    const ScanOptions& options, ScanCheckpoint* checkpoint) {
  ScanResult result;
  result.axis1 = axis1;
  result.axis2 = axis2;
  result.axis1_values = axis1.values();
  if (axis2.count > 0) result.axis2_values = axis2.values();

  const std::size_t n1 = result.axis1_values.size();
  const std::size_t n2 = std::max<std::size_t>(result.axis2_values.size(), 1);
  const std::size_t n_cells = n1 * n2;
  result.total.assign(n_cells, kNaN);
  result.zero_T.assign(n_cells, kNaN);
  result.thermal.assign(n_cells, kNaN);
  result.total_signed.assign(n_cells, kNaN);
  result.zero_T_signed.assign(n_cells, kNaN);
  result.thermal_signed.assign(n_cells, kNaN);
  result.meta.assign(n_cells, CellMeta{});

  const auto apply_record = [&](const CellRecord& rec) {
    const std::size_t idx = result.index(rec.i1, rec.i2);
    CellMeta& meta = result.meta[idx];
    meta.ok = rec.ok;
    meta.Jmax = rec.Jmax;
    meta.J0max = rec.J0max;
    meta.norm_drift = rec.norm_drift;
    meta.runtime_ms = rec.runtime_ms;
    meta.error = rec.error;
    if (rec.ok) {
      result.total[idx] = rec.total;
      result.zero_T[idx] = rec.zero_T;
      result.thermal[idx] = rec.thermal;
      result.total_signed[idx] = rec.total_signed;
      result.zero_T_signed[idx] = rec.zero_T_signed;
      result.thermal_signed[idx] = rec.thermal_signed;
    }
  };

  // Cells still to compute (completed ones come from the checkpoint; failed
  // ones are retried).
  std::vector<std::pair<std::size_t, std::size_t>> todo;
  for (std::size_t i1 = 0; i1 < n1; ++i1) {
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
      if (checkpoint != nullptr) {
        const auto rec = checkpoint->lookup(i1, i2);
        if (rec.has_value() && rec->ok) {
          apply_record(*rec);
          continue;
        }
      }
      todo.emplace_back(i1, i2);
    }
  }

  const int outer =
      std::max(1, std::min<int>(options.workers,
                                static_cast<int>(todo.size())));
  const int inner = std::max(1, options.workers / std::max(outer, 1));

  parallel_for(todo.size(), outer, [&](std::size_t t) {
    const auto [i1, i2] = todo[t];
    const double v1 = result.axis1_values[i1];
    const double v2 = result.axis2_values.empty() ? 0.0 : result.axis2_values[i2];

    CellRecord rec;
    rec.i1 = i1;
    rec.i2 = i2;
    const auto start = std::chrono::steady_clock::now();
    try {
      const CellProblem problem = setup(v1, v2);
      const ReducedParams rp =
          to_reduced(problem.molecule, problem.field, problem.temperature_K);
      PulseShape pulse{rp.amplitude, rp.frequency, rp.duration};

      PropagationConfig cfg = options.prop;
      cfg.trace_samples = 0;
      const EnsembleRunResult run =
          run_ensemble(pulse, rp.temperature, cfg, inner, options.ensemble_cutoff);

      const OrientationExtremum et = run.max_post_pulse(Component::total);
      const OrientationExtremum ez = run.max_post_pulse(Component::zero_T);
      const OrientationExtremum eh = run.max_post_pulse(Component::thermal);
      rec.ok = true;
      rec.total = et.magnitude;
      rec.zero_T = ez.magnitude;
      rec.thermal = eh.magnitude;
      rec.total_signed = et.value;
      rec.zero_T_signed = ez.value;
      rec.thermal_signed = eh.value;
      rec.Jmax = run.max_Jmax;
      rec.J0max = run.ensemble.J0_max;
      rec.norm_drift = run.max_norm_drift;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
    rec.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();

    apply_record(rec);
    if (checkpoint != nullptr) checkpoint->append(rec);
  });

  return result;
}

}  // namespace

std::vector<double> AxisSpec::values() const {
  if (count < 1) throw std::invalid_argument("axis " + name + ": count must be >= 1");
  if (count > 1 && !(max > min)) {
    throw std::invalid_argument("axis " + name + ": need max > min");
  }
  if (scale == "log" && !(min > 0.0)) {
    throw std::invalid_argument("axis " + name + ": log scale needs min > 0");
  }
  if (scale != "log" && scale != "lin") {
    throw std::invalid_argument("axis " + name + ": unknown scale " + scale);
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = min;
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    out[i] = (scale == "log")
                 ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
                 : min + t * (max - min);
  }
  return out;
}

AxisSpec AxisSpec::parse(const std::string& text, const std::string& unit) {
  AxisSpec spec;
  spec.unit = unit;
  std::istringstream in(text);
  std::string token;
  std::vector<std::string> parts;
  while (std::getline(in, token, ':')) parts.push_back(token);
  if (parts.size() != 5) {
    throw std::invalid_argument(
        "axis spec must be name:scale:min:max:count, got '" + text + "'");
  }
  spec.name = parts[0];
  spec.scale = parts[1];
  spec.min = std::stod(parts[2]);
  spec.max = std::stod(parts[3]);
  spec.count = std::stoi(parts[4]);
  (void)spec.values();  // validate
  return spec;
}

bool ScanResult::all_ok() const {
  return std::all_of(meta.begin(), meta.end(),
                     [](const CellMeta& m) { return m.ok; });
}

ScanCheckpoint::ScanCheckpoint(std::filesystem::path path,
                               std::string config_hash, bool resume)
    : path_(std::move(path)), config_hash_(std::move(config_hash)) {
  if (!resume) std::filesystem::remove(path_);

  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error&) {
        continue;  // torn trailing line from a killed run
      }
      if (first) {
        first = false;
        if (!j.is_object() || j.value("config_hash", "") != config_hash_) {
          throw std::invalid_argument(
              "checkpoint " + path_.string() +
              " belongs to a different scan configuration");
        }
        continue;
      }
      try {
        const CellRecord rec = from_json(j);
        records_[{rec.i1, rec.i2}] = rec;
      } catch (const json::exception&) {
        continue;
      }
    }
  }

  const bool fresh = !std::filesystem::exists(path_);
  if (!path_.parent_path().empty()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  out_.open(path_, std::ios::app);
  if (!out_) {
    throw std::runtime_error("cannot open checkpoint " + path_.string());
  }
  if (fresh) {
    json header;
    header["config_hash"] = config_hash_;
    out_ << header.dump() << "\n" << std::flush;
  }
}

std::optional<CellRecord> ScanCheckpoint::lookup(std::size_t i1,
                                                 std::size_t i2) const {
  const auto it = records_.find({i1, i2});
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void ScanCheckpoint::append(const CellRecord& rec) {
  std::lock_guard<std::mutex> lock(write_mutex_);
  out_ << to_json(rec).dump() << "\n" << std::flush;
}

ScanResult scan_B_T(const AxisSpec& B_axis, const AxisSpec& T_axis,
                    const PhysicalField& field, double mu0_debye,
                    const ScanOptions& options, ScanCheckpoint* checkpoint) {
  return run_grid(B_axis, T_axis,
                  [&](double B, double T) {
                    return CellProblem{{"fictive", B, mu0_debye}, field, T};
                  },
                  options, checkpoint);
}

ScanResult scan_E0_T(const AxisSpec& E0_axis, const AxisSpec& T_axis,
                     const PhysicalMolecule& molecule, double delta_ps,
                     double f_thz, const ScanOptions& options,
                     ScanCheckpoint* checkpoint) {
  return run_grid(E0_axis, T_axis,
                  [&](double E0, double T) {
                    return CellProblem{molecule, {E0, delta_ps, f_thz}, T};
                  },
                  options, checkpoint);
}

ScanResult temperature_curve(const PhysicalMolecule& molecule,
                             const AxisSpec& T_axis, const PhysicalField& field,
                             const ScanOptions& options,
                             ScanCheckpoint* checkpoint) {
  AxisSpec none;
  none.count = 0;
  return run_grid(T_axis, none,
                  [&](double T, double) {
                    return CellProblem{molecule, field, T};
                  },
                  options, checkpoint);
}

std::vector<ZoneComponent> superlevel_components(const ScanResult& result,
                                                 double level_fraction) {
  double vmax = 0.0;
  for (double v : result.total) {
    if (std::isfinite(v)) vmax = std::max(vmax, v);
  }
  const double level = level_fraction * vmax;
  const std::size_t n1 = result.axis1_values.size();
  const std::size_t n2 = result.columns();

  const auto above = [&](std::size_t i1, std::size_t i2) {
    const double v = result.total[result.index(i1, i2)];
    return std::isfinite(v) && v >= level && vmax > 0.0;
  };

  std::vector<char> visited(n1 * n2, 0);
  std::vector<ZoneComponent> components;
  const bool log1 = result.axis1.scale == "log";

  for (std::size_t s1 = 0; s1 < n1; ++s1) {
    for (std::size_t s2 = 0; s2 < n2; ++s2) {
      if (visited[result.index(s1, s2)] || !above(s1, s2)) continue;
      ZoneComponent comp;
      std::vector<std::pair<std::size_t, std::size_t>> stack{{s1, s2}};
      visited[result.index(s1, s2)] = 1;
      while (!stack.empty()) {
        const auto [i1, i2] = stack.back();
        stack.pop_back();
        comp.cells.emplace_back(i1, i2);
        comp.max_value =
            std::max(comp.max_value, result.total[result.index(i1, i2)]);
        const std::pair<long, long> neighbours[4] = {
            {static_cast<long>(i1) - 1, static_cast<long>(i2)},
            {static_cast<long>(i1) + 1, static_cast<long>(i2)},
            {static_cast<long>(i1), static_cast<long>(i2) - 1},
            {static_cast<long>(i1), static_cast<long>(i2) + 1}};
        for (const auto& [j1, j2] : neighbours) {
          if (j1 < 0 || j2 < 0 || j1 >= static_cast<long>(n1) ||
              j2 >= static_cast<long>(n2)) {
            continue;
          }
          const std::size_t u1 = static_cast<std::size_t>(j1);
          const std::size_t u2 = static_cast<std::size_t>(j2);
          if (!visited[result.index(u1, u2)] && above(u1, u2)) {
            visited[result.index(u1, u2)] = 1;
            stack.emplace_back(u1, u2);
          }
        }
      }
      for (const auto& [i1, i2] : comp.cells) {
        const double a1 = result.axis1_values[i1];
        comp.mean_axis1 += log1 ? std::log10(a1) : a1;
        comp.mean_axis2 +=
            result.axis2_values.empty() ? 0.0 : result.axis2_values[i2];
      }
      comp.mean_axis1 /= static_cast<double>(comp.cells.size());
      comp.mean_axis2 /= static_cast<double>(comp.cells.size());
      components.push_back(std::move(comp));
    }
  }

  std::sort(components.begin(), components.end(),
            [](const ZoneComponent& a, const ZoneComponent& b) {
              return a.cells.size() > b.cells.size();
            });
  return components;
}

bool two_zone_structure(const ScanResult& result) {
  const auto components = superlevel_components(result, 0.5);
  if (components.size() < 2) return false;
  const ZoneComponent& a = components[0];
  const ZoneComponent& b = components[1];
  const ZoneComponent& high1 = (a.mean_axis1 >= b.mean_axis1) ? a : b;
  const ZoneComponent& low1 = (&high1 == &a) ? b : a;
  return high1.mean_axis1 > low1.mean_axis1 && high1.mean_axis2 < low1.mean_axis2;
}

namespace {

std::string matrix_csv(const ScanResult& r, const std::vector<double>& values,
                       const MetadataHeader& header) {
  MetadataHeader h = header;
  std::ostringstream out;
  h.columns(r.axis1.name + "_" + r.axis1.unit + "/" + r.axis2.name + "_" +
            r.axis2.unit);
  out << h.render();
  out << r.axis1.name;
  for (double v2 : r.axis2_values) out << "," << format_sig12(v2);
  out << "\n";
  for (std::size_t i1 = 0; i1 < r.axis1_values.size(); ++i1) {
    out << format_sig12(r.axis1_values[i1]);
    for (std::size_t i2 = 0; i2 < r.axis2_values.size(); ++i2) {
      const double v = values[r.index(i1, i2)];
      out << ",";
      if (std::isfinite(v)) out << format_sig12(v);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace

std::vector<std::filesystem::path> write_scan_outputs(
    const ScanResult& result, const MetadataHeader& header,
    const std::filesystem::path& out_dir, const std::string& stem,
    bool with_svg) {
  std::vector<std::filesystem::path> written;
  std::filesystem::create_directories(out_dir);

  if (result.axis2.count > 0) {
    const struct {
      const char* name;
      const std::vector<double>* values;
    } parts[] = {{"total", &result.total},
                 {"zero_T", &result.zero_T},
                 {"thermal", &result.thermal}};
    for (const auto& part : parts) {
      const auto csv_path = out_dir / (stem + "_" + part.name + ".csv");
      write_text_atomic(csv_path, matrix_csv(result, *part.values, header));
      written.push_back(csv_path);
      if (with_svg) {
        const auto svg_path = out_dir / (stem + "_" + part.name + ".svg");
        write_text_atomic(
            svg_path,
            svg::heatmap_chart("max |<cos theta>| (" + std::string(part.name) + ")",
                               result.axis1.label(), result.axis2.label(),
                               result.axis1_values,
                               result.axis1.scale == "log",
                               result.axis2_values, *part.values));
        written.push_back(svg_path);
      }
    }
  } else {
    MetadataHeader h = header;
    h.columns(result.axis1.name + "_" + result.axis1.unit +
              ",total,zero_T,thermal");
    std::ostringstream out;
    out << h.render();
    for (std::size_t i = 0; i < result.axis1_values.size(); ++i) {
      out << format_sig12(result.axis1_values[i]) << ",";
      if (result.meta[i].ok) {
        out << format_sig12(result.total[i]) << ","
            << format_sig12(result.zero_T[i]) << ","
            << format_sig12(result.thermal[i]);
      } else {
        out << ",,";
      }
      out << "\n";
    }
    const auto csv_path = out_dir / (stem + ".csv");
    write_text_atomic(csv_path, out.str());
    written.push_back(csv_path);
    if (with_svg) {
      std::vector<svg::Series> series(3);
      series[0] = {"total", "#4c72b0", result.axis1_values, result.total};
      series[1] = {"zero_T", "#c44e52", result.axis1_values, result.zero_T};
      series[2] = {"thermal", "#55a868", result.axis1_values, result.thermal};
      const auto svg_path = out_dir / (stem + ".svg");
      write_text_atomic(svg_path,
                        svg::line_chart("max |<cos theta>| vs " + result.axis1.name,
                                        result.axis1.label(), "max |<cos theta>|",
                                        series));
      written.push_back(svg_path);
    }
  }
  return written;
}

}  // namespace thzo
