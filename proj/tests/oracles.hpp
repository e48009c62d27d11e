// Test-only reference implementations, kept independent of the code paths
// they check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "thzorient/field.hpp"
#include "thzorient/rotor.hpp"

namespace oracles {

// Dense Hamiltonian matrix J(J+1) - field_value * C over the truncated ladder.
inline Eigen::MatrixXd dense_hamiltonian(const thzo::BasisSpec& basis,
                                         double field_value) {
  const int n = basis.dimension();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const int J = basis.Jmin() + j;
    H(j, j) = static_cast<double>(J) * (J + 1);
    if (j + 1 < n) {
      const double c = thzo::cos_theta_coupling(J, basis.M);
      H(j, j + 1) = -field_value * c;
      H(j + 1, j) = -field_value * c;
    }
  }
  return H;
}

// Time-ordered product of midpoint exponentials, each computed exactly by
// eigendecomposition of the (real symmetric) dense Hamiltonian.
inline Eigen::VectorXcd time_ordered_exponential(const thzo::BasisSpec& basis,
                                                 const thzo::PulseShape& pulse,
                                                 const Eigen::VectorXcd& initial,
                                                 int steps) {
  const double h = pulse.duration / steps;
  Eigen::VectorXcd psi = initial;
  for (int k = 0; k < steps; ++k) {
    const double t_mid = -pulse.duration / 2.0 + (k + 0.5) * h;
    const Eigen::MatrixXd H = dense_hamiltonian(basis, thzo::waveform(pulse, t_mid));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& V = es.eigenvectors();
    Eigen::VectorXcd coeff = V.transpose() * psi;
    for (int i = 0; i < coeff.size(); ++i) {
      coeff[i] *= std::exp(std::complex<double>(0.0, -lam[i] * h));
    }
    psi = V * coeff;
  }
  return psi;
}

// Same product with the step count doubled until the result stabilizes.
inline Eigen::VectorXcd converged_time_ordered(const thzo::BasisSpec& basis,
                                               const thzo::PulseShape& pulse,
                                               const Eigen::VectorXcd& initial,
                                               double tol = 1e-10) {
  int steps = 512;
  Eigen::VectorXcd prev = time_ordered_exponential(basis, pulse, initial, steps);
  for (int iter = 0; iter < 12; ++iter) {
    steps *= 2;
    Eigen::VectorXcd next = time_ordered_exponential(basis, pulse, initial, steps);
    if ((next - prev).norm() < tol) return next;
    prev = next;
  }
  return prev;
}

// Normalized theta-part of the spherical harmonic, for the quadrature oracle.
inline double normalized_assoc_legendre(int J, int M, double x) {
  double log_ratio = 0.0;  // log((J-M)!/(J+M)!)
  for (int k = J - M + 1; k <= J + M; ++k) log_ratio -= std::log(k);
  const double norm = std::sqrt((2.0 * J + 1.0) / 2.0 * std::exp(log_ratio));
  return norm * std::assoc_legendre(J, M, x);
}

// <J+1,M| cos theta |J,M> by Simpson quadrature over x = cos(theta).
inline double coupling_by_quadrature(int J, int M) {
  const int n = 4000;
  const double h = 2.0 / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double x = -1.0 + k * h;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * normalized_assoc_legendre(J + 1, M, x) * x *
           normalized_assoc_legendre(J, M, x);
  }
  return std::abs(sum * h / 3.0);
}

}  // namespace oracles
