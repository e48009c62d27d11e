#pragma once

#include <optional>
#include <string>
#include <vector>

namespace thzo {

// Linear polar molecule, interface units: B in cm^-1, dipole in debye.
struct PhysicalMolecule {
  std::string name;
  double rotational_constant_cm1 = 0.0;  // B > 0
  double dipole_debye = 0.0;             // mu0 >= 0
};

// Pulse in lab units: peak amplitude MV/cm, duration ps, central frequency THz.
struct PhysicalField {
  double peak_mv_cm = 0.0;
  double duration_ps = 0.0;
  double frequency_thz = 0.0;
};

// Dimensionless parameters driving all dynamics: reduced time is tau = omega_B t
// with omega_B = 2*pi*c*B. One simulation at fixed (A, F, D, T_tilde) covers
// every molecule that maps to the same values.
struct ReducedParams {
  double amplitude = 0.0;    // A = mu0 E0 / (hbar omega_B)
  double frequency = 0.0;    // F = f / omega_B
  double duration = 0.0;     // D = omega_B delta
  double temperature = 0.0;  // T_tilde = kB T / (hbar omega_B)
};

// Rotational angular frequency omega_B [rad/s] for B in cm^-1.
double rotational_angular_frequency(double B_cm1);

ReducedParams to_reduced(const PhysicalMolecule& mol, const PhysicalField& field,
                         double temperature_K);

// Inverse maps, one per reduced parameter.
double from_reduced_duration_ps(double B_cm1, double D);
double from_reduced_frequency_thz(double B_cm1, double F);
double from_reduced_amplitude_mv_cm(double B_cm1, double mu0_debye, double A);
double from_reduced_temperature_K(double B_cm1, double T_tilde);

// Default survey field: 2 MV/cm peak, 5 ps, 0.5 THz.
PhysicalField default_field();

// Built-in molecule table (OCS, HF, LiH, CO, LiCl).
const std::vector<PhysicalMolecule>& molecule_table();
std::optional<PhysicalMolecule> find_molecule(const std::string& name);

}  // namespace thzo
