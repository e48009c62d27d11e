#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "thzorient/ensemble_run.hpp"
#include "thzorient/result_file.hpp"
#include "thzorient/units.hpp"

namespace thzo {

struct AxisSpec {
  std::string name;          // "B", "T", "E0"
  std::string unit;          // "cm^-1", "K", "MV/cm"
  std::string scale = "lin"; // "lin" or "log"
  double min = 0.0;
  double max = 0.0;
  int count = 0;

  std::vector<double> values() const;
  std::string label() const { return name + " (" + unit + ")"; }
  // "name:scale:min:max:count", e.g. "B:log:0.1:21:16".
  static AxisSpec parse(const std::string& text, const std::string& unit);
};

struct ScanOptions {
  PropagationConfig prop;
  double ensemble_cutoff = 1e-6;
  int workers = 1;
};

struct CellMeta {
  bool ok = false;
  int Jmax = 0;
  int J0max = 0;
  double norm_drift = 0.0;
  double runtime_ms = 0.0;
  std::string error;
};

// Grid of per-cell maximum post-pulse orientation. Matrices are row-major
// [i1 * n2 + i2]; failed cells hold NaN and keep their error in the metadata,
// never a silently interpolated value.
struct ScanResult {
  AxisSpec axis1, axis2;  // axis2.count == 0 for 1-D curves
  std::vector<double> axis1_values, axis2_values;
  std::vector<double> total, zero_T, thermal;  // magnitudes
  std::vector<double> total_signed, zero_T_signed, thermal_signed;
  std::vector<CellMeta> meta;

  std::size_t columns() const {
    return axis2_values.empty() ? 1 : axis2_values.size();
  }
  std::size_t index(std::size_t i1, std::size_t i2) const {
    return i1 * columns() + i2;
  }
  std::size_t cell_count() const { return total.size(); }
  bool all_ok() const;
};

// One completed cell, as stored in the NDJSON checkpoint.
struct CellRecord {
  std::size_t i1 = 0, i2 = 0;
  bool ok = false;
  double total = 0.0, zero_T = 0.0, thermal = 0.0;
  double total_signed = 0.0, zero_T_signed = 0.0, thermal_signed = 0.0;
  int Jmax = 0, J0max = 0;
  double norm_drift = 0.0, runtime_ms = 0.0;
  std::string error;
};

// Append-only NDJSON checkpoint, one record per completed cell. A scan can be
// killed at any point and resumed; a torn trailing line is ignored. The first
// line pins the config hash so a checkpoint can never be resumed against a
// different scan configuration.
class ScanCheckpoint {
 public:
  ScanCheckpoint(std::filesystem::path path, std::string config_hash,
                 bool resume);

  std::size_t loaded_cells() const { return records_.size(); }
  std::optional<CellRecord> lookup(std::size_t i1, std::size_t i2) const;
  void append(const CellRecord& rec);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::string config_hash_;
  std::map<std::pair<std::size_t, std::size_t>, CellRecord> records_;
  std::ofstream out_;
  std::mutex write_mutex_;
};

// Survey of Fig.-1 type: maximum orientation over (B, T) for a fictive
// molecule of given dipole, field timing fixed.
ScanResult scan_B_T(const AxisSpec& B_axis, const AxisSpec& T_axis,
                    const PhysicalField& field, double mu0_debye,
                    const ScanOptions& options,
                    ScanCheckpoint* checkpoint = nullptr);

// Maximum orientation over (E0, T) for one molecule, pulse timing fixed.
ScanResult scan_E0_T(const AxisSpec& E0_axis, const AxisSpec& T_axis,
                     const PhysicalMolecule& molecule, double delta_ps,
                     double f_thz, const ScanOptions& options,
                     ScanCheckpoint* checkpoint = nullptr);

// Maximum orientation versus temperature for one molecule.
ScanResult temperature_curve(const PhysicalMolecule& molecule,
                             const AxisSpec& T_axis, const PhysicalField& field,
                             const ScanOptions& options,
                             ScanCheckpoint* checkpoint = nullptr);

// Connected component (4-neighbour) of the superlevel set
// {cell : total >= level_fraction * max(total)}.
struct ZoneComponent {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  double mean_axis1 = 0.0;  // log10-averaged when axis1 is logarithmic
  double mean_axis2 = 0.0;
  double max_value = 0.0;
};

// Components sorted by cell count, largest first.
std::vector<ZoneComponent> superlevel_components(const ScanResult& result,
                                                 double level_fraction = 0.5);

// True when the two largest half-maximum regions are disjoint with one at
// high axis1 / low axis2 and the other at low axis1 / higher axis2.
bool two_zone_structure(const ScanResult& result);

// File emission. 2-D scans write one CSV matrix per component plus one SVG
// heatmap per matrix; 1-D curves write a single 4-column CSV and one chart.
std::vector<std::filesystem::path> write_scan_outputs(
    const ScanResult& result, const MetadataHeader& header,
    const std::filesystem::path& out_dir, const std::string& stem,
    bool with_svg);

}  // namespace thzo
