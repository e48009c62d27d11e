#include "thzorient/thermal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace thzo {

namespace {

double weight_cJ(int J, double T_tilde) {
  if (T_tilde <= 0.0) return J == 0 ? 1.0 : 0.0;
  return std::exp(-static_cast<double>(J) * (J + 1) / T_tilde);
}

}  // namespace

double ThermalEnsemble::boltzmann_weight(int J) const {
  if (J < static_cast<int>(weights_cJ.size())) return weights_cJ[J];
  return weight_cJ(J, T_tilde);
}

ThermalEnsemble build_ensemble(double T_tilde, double cutoff) {
  if (!(T_tilde >= 0.0)) {
    throw std::invalid_argument("T_tilde must be >= 0, got " +
                                std::to_string(T_tilde));
  }
  if (!(cutoff > 0.0)) {
    throw std::invalid_argument("cutoff must be > 0");
  }

  ThermalEnsemble ens;
  ens.T_tilde = T_tilde;

  if (T_tilde == 0.0) {
    ens.partition_function = 1.0;
    ens.J0_max = 0;
    ens.tail_mass = 0.0;
    ens.weights_cJ = {1.0, 0.0};
    ens.members.push_back({0, 0, 1, 1.0});
    return ens;
  }

  // Z summed until terms stop contributing at machine precision.
  double Z = 0.0;
  std::vector<double> partial;  // cumulative sum up to J
  for (int J = 0;; ++J) {
    const double term = (2.0 * J + 1.0) * weight_cJ(J, T_tilde);
    Z += term;
    partial.push_back(Z);
    if (J > 1 && term < Z * 1e-18) break;
  }
  ens.partition_function = Z;

  // Smallest J0max whose relative tail mass is within the cutoff.
  int J0_max = static_cast<int>(partial.size()) - 1;
  for (int J = 0; J < static_cast<int>(partial.size()); ++J) {
    if ((Z - partial[J]) / Z <= cutoff) {
      J0_max = J;
      break;
    }
  }
  ens.J0_max = J0_max;
  ens.tail_mass = (Z - partial[J0_max]) / Z;

  ens.weights_cJ.resize(J0_max + 2);
  for (int J = 0; J <= J0_max + 1; ++J) ens.weights_cJ[J] = weight_cJ(J, T_tilde);

  for (int J0 = 0; J0 <= J0_max; ++J0) {
    const double cJ = ens.weights_cJ[J0];
    for (int M0 = 0; M0 <= J0; ++M0) {
      const int mult = (M0 == 0) ? 1 : 2;
      ens.members.push_back({J0, M0, mult, mult * cJ / Z});
    }
  }
  return ens;
}

double thermal_expectation(const std::vector<double>& member_values,
                           const ThermalEnsemble& ensemble) {
  if (member_values.size() != ensemble.members.size()) {
    throw std::invalid_argument(
        "incomplete ensemble: expected " + std::to_string(ensemble.members.size()) +
        " member values, got " + std::to_string(member_values.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < member_values.size(); ++i) {
    sum += ensemble.members[i].weight * member_values[i];
  }
  return sum;
}

OrientationDecomposition decompose(const std::vector<double>& member_values,
                                   const ThermalEnsemble& ensemble) {
  if (member_values.size() != ensemble.members.size()) {
    throw std::invalid_argument(
        "incomplete ensemble: expected " + std::to_string(ensemble.members.size()) +
        " member values, got " + std::to_string(member_values.size()));
  }
  OrientationDecomposition out;
  for (std::size_t i = 0; i < member_values.size(); ++i) {
    const auto& m = ensemble.members[i];
    const double term = m.weight * member_values[i];
    if (m.J0 == 0) {
      out.zero_T += term;
    } else {
      out.thermal += term;
    }
    out.total += term;
  }
  return out;
}

}  // namespace thzo
