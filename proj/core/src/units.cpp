#include "thzorient/units.hpp"

#include <cmath>
#include <stdexcept>

#include "thzorient/constants.hpp"

namespace thzo {

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string(field) + " must be > 0, got " +
                                std::to_string(v));
  }
}

void require_non_negative(double v, const char* field) {
  if (!(v >= 0.0)) {
    throw std::invalid_argument(std::string(field) + " must be >= 0, got " +
                                std::to_string(v));
  }
}

}  // namespace

double rotational_angular_frequency(double B_cm1) {
  require_positive(B_cm1, "B");
  return 2.0 * constants::pi * constants::speed_of_light_cm * B_cm1;
}

ReducedParams to_reduced(const PhysicalMolecule& mol, const PhysicalField& field,
                         double temperature_K) {
  require_positive(mol.rotational_constant_cm1, "B");
  require_non_negative(mol.dipole_debye, "mu0");
  require_non_negative(field.peak_mv_cm, "E_peak");
  require_positive(field.duration_ps, "delta");
  require_positive(field.frequency_thz, "f");
  require_non_negative(temperature_K, "T");

  const double omega_B = rotational_angular_frequency(mol.rotational_constant_cm1);
  const double energy_B = constants::hbar * omega_B;

  ReducedParams out;
  out.amplitude = mol.dipole_debye * constants::debye * field.peak_mv_cm *
                  constants::mv_per_cm / energy_B;
  out.frequency = field.frequency_thz * constants::thz / omega_B;
  out.duration = omega_B * field.duration_ps * constants::picosecond;
  out.temperature = constants::boltzmann * temperature_K / energy_B;
  return out;
}

double from_reduced_duration_ps(double B_cm1, double D) {
  require_positive(D, "D");
  return D / rotational_angular_frequency(B_cm1) / constants::picosecond;
}

double from_reduced_frequency_thz(double B_cm1, double F) {
  require_positive(F, "F");
  return F * rotational_angular_frequency(B_cm1) / constants::thz;
}

double from_reduced_amplitude_mv_cm(double B_cm1, double mu0_debye, double A) {
  require_positive(mu0_debye, "mu0");
  require_non_negative(A, "A");
  const double energy_B = constants::hbar * rotational_angular_frequency(B_cm1);
  return A * energy_B / (mu0_debye * constants::debye) / constants::mv_per_cm;
}

double from_reduced_temperature_K(double B_cm1, double T_tilde) {
  require_non_negative(T_tilde, "T_tilde");
  const double energy_B = constants::hbar * rotational_angular_frequency(B_cm1);
  return T_tilde * energy_B / constants::boltzmann;
}

PhysicalField default_field() { return PhysicalField{2.0, 5.0, 0.5}; }

const std::vector<PhysicalMolecule>& molecule_table() {
  static const std::vector<PhysicalMolecule> table = {
      {"OCS", 0.2029, 0.712},
      {"HF", 20.956, 1.820},
      {"LiH", 7.513, 5.88},
      {"CO", 1.931, 0.112},
      {"LiCl", 1.345, 6.33},
  };
  return table;
}

std::optional<PhysicalMolecule> find_molecule(const std::string& name) {
  for (const auto& mol : molecule_table()) {
    if (mol.name == name) return mol;
  }
  return std::nullopt;
}

}  // namespace thzo
