#pragma once

#include <cstdint>
#include <vector>

namespace thzo {

// One propagated wavefunction of the thermal average. States with +-M0 evolve
// identically under the cos(theta) coupling, so only M0 >= 0 is enumerated and
// the pair is folded into multiplicity 2.
struct EnsembleMember {
  int J0 = 0;
  int M0 = 0;
  int multiplicity = 1;   // 1 for M0 == 0, else 2
  double weight = 0.0;    // multiplicity * c_J0 / Z
};

// Boltzmann ensemble over rotational levels at dimensionless temperature
// T_tilde = kB T / (hbar omega_B). Weights are c_J = exp(-J(J+1)/T_tilde);
// the partition function Z = sum_J (2J+1) c_J is summed to machine
// convergence, while the member list is truncated once the relative tail mass
// drops below `cutoff`.
struct ThermalEnsemble {
  double T_tilde = 0.0;
  double partition_function = 1.0;        // Z
  int J0_max = 0;
  double tail_mass = 0.0;                 // sum_{J>J0max} (2J+1) c_J / Z
  std::vector<double> weights_cJ;         // c_J for J = 0..J0_max+1
  std::vector<EnsembleMember> members;    // sorted by (J0, M0)

  double boltzmann_weight(int J) const;   // c_J, any J >= 0
};

ThermalEnsemble build_ensemble(double T_tilde, double cutoff = 1e-6);

// Weighted sum of per-member expectation values in fixed (J0, M0) order,
// i.e. the thermal average with the 1/Z weights already folded in.
// `member_values` must hold one entry per ensemble member, same order.
double thermal_expectation(const std::vector<double>& member_values,
                           const ThermalEnsemble& ensemble);

struct OrientationDecomposition {
  double total = 0.0;
  double zero_T = 0.0;   // weighted (0,0) term only
  double thermal = 0.0;  // all J0 >= 1 terms
};

OrientationDecomposition decompose(const std::vector<double>& member_values,
                                   const ThermalEnsemble& ensemble);

}  // namespace thzo
