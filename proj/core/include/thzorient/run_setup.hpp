#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thzorient/field.hpp"
#include "thzorient/units.hpp"

namespace thzo {

// Physics selection shared by the trace/spectrum subcommands. Exactly one of
// {molecule name, raw (B, mu0)} and exactly one of {physical field, reduced
// field} may be given; reduced-parameter inputs (A, F, D, Ttilde) need no
// molecule at all.
struct RunConfig {
  std::optional<std::string> molecule;
  std::optional<double> B_cm1;
  std::optional<double> mu0_debye;

  std::optional<double> E0_mv_cm;
  std::optional<double> delta_ps;
  std::optional<double> f_thz;

  std::optional<double> A;
  std::optional<double> F;
  std::optional<double> D;

  std::optional<double> T_K;
  std::optional<double> T_tilde;
};

struct ResolvedRun {
  PulseShape pulse;
  double T_tilde = 0.0;
  bool physical = false;
  std::optional<PhysicalMolecule> molecule;  // set in physical mode
  std::optional<PhysicalField> field;
  std::optional<double> T_K;
  // Canonical config echo for the metadata header, in fixed key order.
  std::vector<std::pair<std::string, std::string>> echo;
};

// Validates the exactly-one invariants and produces the reduced parameters.
// Violations throw std::invalid_argument naming the offending keys.
ResolvedRun resolve_run(const RunConfig& config);

}  // namespace thzo
