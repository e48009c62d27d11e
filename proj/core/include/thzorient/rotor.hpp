#pragma once

#include <Eigen/Dense>
#include <complex>

namespace thzo {

// Truncated |J,M> basis at fixed M: J runs from |M| to Jmax. The linearly
// polarized coupling conserves M, so each ensemble member lives in one such
// ladder. No angular grid exists anywhere; everything is spectral.
struct BasisSpec {
  int M = 0;
  int Jmax = 0;

  int Jmin() const { return std::abs(M); }
  int dimension() const { return Jmax - Jmin() + 1; }
};

// <J+1,M| cos(theta) |J,M> = sqrt(((J+1)^2 - M^2) / ((2J+1)(2J+3))).
double cos_theta_coupling(int J, int M);

// Kinetic diagonal J(J+1) and the symmetric off-diagonal coupling C(J,M)
// linking J <-> J+1, both over the truncated ladder.
struct RotorOperators {
  BasisSpec basis;
  Eigen::VectorXd kinetic;   // kinetic[j] = J(J+1),       J = Jmin + j
  Eigen::VectorXd coupling;  // coupling[j] = C(Jmin+j, M), last entry unused

  static RotorOperators build(const BasisSpec& basis);
};

struct RotorState {
  BasisSpec basis;
  Eigen::VectorXcd amplitudes;  // a_J, J = Jmin..Jmax

  static RotorState basis_state(const BasisSpec& basis, int J0);
  double norm() const { return amplitudes.norm(); }
};

// <cos(theta)> = sum_J 2 Re(conj(a_J) a_{J+1}) C(J,M); always in [-1, 1].
double expectation_cos_theta(const RotorState& state);

// (kinetic - field_value * coupling) applied to the amplitudes; tridiagonal,
// O(dimension). field_value is A*f(tau), already evaluated.
Eigen::VectorXcd apply_hamiltonian(const RotorState& state, double field_value);

// Same product for a block of states sharing one ladder (states as columns).
void apply_hamiltonian_block(const RotorOperators& ops, double field_value,
                             const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out);

}  // namespace thzo
