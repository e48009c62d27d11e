#include "thzorient/rotor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace thzo {

double cos_theta_coupling(int J, int M) {
  if (J < std::abs(M)) {
    throw std::invalid_argument("cos_theta_coupling: need J >= |M|, got J=" +
                                std::to_string(J) + " M=" + std::to_string(M));
  }
  const double j1 = static_cast<double>(J) + 1.0;
  const double m = static_cast<double>(M);
  return std::sqrt((j1 * j1 - m * m) /
                   ((2.0 * J + 1.0) * (2.0 * J + 3.0)));
}

RotorOperators RotorOperators::build(const BasisSpec& basis) {
  if (basis.Jmax < basis.Jmin()) {
    throw std::invalid_argument("RotorOperators: Jmax must be >= |M|");
  }
  RotorOperators ops;
  ops.basis = basis;
  const int n = basis.dimension();
  ops.kinetic.resize(n);
  ops.coupling.resize(n);
  for (int j = 0; j < n; ++j) {
    const int J = basis.Jmin() + j;
    ops.kinetic[j] = static_cast<double>(J) * (J + 1);
    ops.coupling[j] = (j + 1 < n) ? cos_theta_coupling(J, basis.M) : 0.0;
  }
  return ops;
}

RotorState RotorState::basis_state(const BasisSpec& basis, int J0) {
  if (J0 < basis.Jmin() || J0 > basis.Jmax) {
    throw std::invalid_argument("basis_state: J0 outside ladder");
  }
  RotorState s;
  s.basis = basis;
  s.amplitudes = Eigen::VectorXcd::Zero(basis.dimension());
  s.amplitudes[J0 - basis.Jmin()] = 1.0;
  return s;
}

double expectation_cos_theta(const RotorState& state) {
  const int n = static_cast<int>(state.amplitudes.size());
  double sum = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    const int J = state.basis.Jmin() + j;
    sum += 2.0 *
           (std::conj(state.amplitudes[j]) * state.amplitudes[j + 1]).real() *
           cos_theta_coupling(J, state.basis.M);
  }
  return sum;
}

Eigen::VectorXcd apply_hamiltonian(const RotorState& state, double field_value) {
  const auto ops = RotorOperators::build(state.basis);
  const int n = state.basis.dimension();
  Eigen::MatrixXcd in(n, 1), out(n, 1);
  in.col(0) = state.amplitudes;
  apply_hamiltonian_block(ops, field_value, in, out);
  return out.col(0);
}

void apply_hamiltonian_block(const RotorOperators& ops, double field_value,
                             const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) {
  const int n = ops.basis.dimension();
  const Eigen::Index cols = in.cols();
  out.resize(n, cols);
  const double* k = ops.kinetic.data();
  const double* c = ops.coupling.data();
  const double g = field_value;
  for (Eigen::Index col = 0; col < cols; ++col) {
    const std::complex<double>* x = in.col(col).data();
    std::complex<double>* y = out.col(col).data();
    if (n == 1) {
      y[0] = k[0] * x[0];
      continue;
    }
    y[0] = k[0] * x[0] - g * c[0] * x[1];
    for (int j = 1; j + 1 < n; ++j) {
      y[j] = k[j] * x[j] - g * (c[j - 1] * x[j - 1] + c[j] * x[j + 1]);
    }
    y[n - 1] = k[n - 1] * x[n - 1] - g * c[n - 2] * x[n - 2];
  }
}

}  // namespace thzo
