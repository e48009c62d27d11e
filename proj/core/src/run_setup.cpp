#include "thzorient/run_setup.hpp"

#include <stdexcept>

#include "thzorient/result_file.hpp"

namespace thzo {

ResolvedRun resolve_run(const RunConfig& config) {
  const bool any_reduced =
      config.A.has_value() || config.F.has_value() || config.D.has_value();
  const bool any_molecule = config.molecule.has_value() ||
                            config.B_cm1.has_value() ||
                            config.mu0_debye.has_value();
  const bool any_physical_field = config.E0_mv_cm.has_value() ||
                                  config.delta_ps.has_value() ||
                                  config.f_thz.has_value();

  ResolvedRun out;
  if (any_reduced) {
    if (!(config.A && config.F && config.D)) {
      throw std::invalid_argument(
          "reduced field needs all of A, F, D");
    }
    if (any_molecule || any_physical_field || config.T_K.has_value()) {
      throw std::invalid_argument(
          "reduced parameters (A, F, D, Ttilde) exclude molecule, physical "
          "field and T; give exactly one field form");
    }
    out.physical = false;
    out.pulse = PulseShape{*config.A, *config.F, *config.D};
    validate(out.pulse);
    out.T_tilde = config.T_tilde.value_or(0.0);
    if (out.T_tilde < 0.0) throw std::invalid_argument("Ttilde must be >= 0");
    out.echo.emplace_back("mode", "reduced");
    out.echo.emplace_back("A", format_sig12(out.pulse.amplitude));
    out.echo.emplace_back("F", format_sig12(out.pulse.frequency));
    out.echo.emplace_back("D", format_sig12(out.pulse.duration));
    out.echo.emplace_back("Ttilde", format_sig12(out.T_tilde));
    return out;
  }

  if (config.T_tilde.has_value()) {
    throw std::invalid_argument("Ttilde is only valid with reduced parameters; use T (kelvin)");
  }

  PhysicalMolecule mol;
  if (config.molecule.has_value()) {
    if (config.B_cm1.has_value() || config.mu0_debye.has_value()) {
      throw std::invalid_argument(
          "give exactly one of molecule name or raw (B, mu0)");
    }
    const auto found = find_molecule(*config.molecule);
    if (!found.has_value()) {
      std::string names;
      for (const auto& m : molecule_table()) {
        if (!names.empty()) names += ", ";
        names += m.name;
      }
      throw std::invalid_argument("unknown molecule '" + *config.molecule +
                                  "'; available: " + names);
    }
    mol = *found;
  } else if (config.B_cm1.has_value() && config.mu0_debye.has_value()) {
    mol = PhysicalMolecule{"custom", *config.B_cm1, *config.mu0_debye};
  } else {
    throw std::invalid_argument(
        "give exactly one of molecule name or raw (B, mu0), or a reduced "
        "(A, F, D) field");
  }

  PhysicalField field = default_field();
  if (config.E0_mv_cm) field.peak_mv_cm = *config.E0_mv_cm;
  if (config.delta_ps) field.duration_ps = *config.delta_ps;
  if (config.f_thz) field.frequency_thz = *config.f_thz;
  const double T_K = config.T_K.value_or(0.0);

  const ReducedParams rp = to_reduced(mol, field, T_K);
  out.physical = true;
  out.molecule = mol;
  out.field = field;
  out.T_K = T_K;
  out.pulse = PulseShape{rp.amplitude, rp.frequency, rp.duration};
  out.T_tilde = rp.temperature;
  out.echo.emplace_back("mode", "physical");
  if (config.molecule.has_value()) {
    out.echo.emplace_back("molecule", mol.name);
  } else {
    out.echo.emplace_back("B", format_sig12(mol.rotational_constant_cm1));
    out.echo.emplace_back("mu0", format_sig12(mol.dipole_debye));
  }
  out.echo.emplace_back("E0", format_sig12(field.peak_mv_cm));
  out.echo.emplace_back("delta", format_sig12(field.duration_ps));
  out.echo.emplace_back("f", format_sig12(field.frequency_thz));
  out.echo.emplace_back("T", format_sig12(T_K));
  return out;
}

}  // namespace thzo
