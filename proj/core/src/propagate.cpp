#include "thzorient/propagate.hpp"

#include <cmath>
#include <complex>

#include "thzorient/bessel.hpp"
#include "thzorient/constants.hpp"

namespace thzo {

namespace {

using Cplx = std::complex<double>;

// One fused Chebyshev recurrence pass over a column of interleaved
// re/im doubles: next[t] = a0[t] x[t] - gg (c2[t-2] x[t-2] + c2[t] x[t+2])
// [- next_old[t]], i.e. next = 2 Htilde cur - prev (or Htilde cur when
// seeding). Coefficient arrays are duplicated per component so every loop is
// stride-1 over doubles and vectorizes.
template <bool SubtractPrev>
void cheb_column_pass(int N, const double* a0, const double* c2, double gg,
                      const double* x, double* y) {
  const auto old = [&](int t) { return SubtractPrev ? y[t] : 0.0; };
  if (N == 2) {
    y[0] = a0[0] * x[0] - old(0);
    y[1] = a0[1] * x[1] - old(1);
    return;
  }
  y[0] = a0[0] * x[0] - gg * c2[0] * x[2] - old(0);
  y[1] = a0[1] * x[1] - gg * c2[1] * x[3] - old(1);
  for (int t = 2; t < N - 2; ++t) {
    y[t] = a0[t] * x[t] - gg * (c2[t - 2] * x[t - 2] + c2[t] * x[t + 2]) - old(t);
  }
  y[N - 2] = a0[N - 2] * x[N - 2] - gg * c2[N - 4] * x[N - 4] - old(N - 2);
  y[N - 1] = a0[N - 1] * x[N - 1] - gg * c2[N - 3] * x[N - 3] - old(N - 1);
}

template <bool SubtractPrev>
void cheb_block_pass(int n, const std::vector<double>& a0,
                     const std::vector<double>& c2, double gg,
                     const Eigen::MatrixXcd& cur, Eigen::MatrixXcd& out) {
  const int N = 2 * n;
  for (Eigen::Index col = 0; col < cur.cols(); ++col) {
    cheb_column_pass<SubtractPrev>(
        N, a0.data(), c2.data(), gg,
        reinterpret_cast<const double*>(cur.col(col).data()),
        reinterpret_cast<double*>(out.col(col).data()));
  }
}

// exp(-i s (K - g C)) applied to a block of states via Chebyshev expansion.
// Workspace buffers are reused across steps.
struct ChebyshevWorkspace {
  Eigen::MatrixXcd phi_prev, phi_cur, acc;
  std::vector<double> offdiag2;  // coupling, duplicated per re/im slot
  std::vector<double> diag2;     // scaled shifted kinetic, same layout
  const double* ops_key = nullptr;

  void bind(const RotorOperators& ops) {
    if (ops_key == ops.coupling.data()) return;
    ops_key = ops.coupling.data();
    const int n = ops.basis.dimension();
    offdiag2.assign(std::max(2 * (n - 1), 2), 0.0);
    for (int j = 0; j + 1 < n; ++j) {
      offdiag2[2 * j] = ops.coupling[j];
      offdiag2[2 * j + 1] = ops.coupling[j];
    }
    diag2.assign(2 * n, 0.0);
  }

  void apply(const RotorOperators& ops, double g, double s,
             Eigen::MatrixXcd& X) {
    const int n = ops.basis.dimension();
    bind(ops);

    if (g == 0.0) {
      // Pure kinetic factor: exact diagonal phases.
      for (int j = 0; j < n; ++j) {
        const double phase = -s * ops.kinetic[j];
        X.row(j) *= Cplx(std::cos(phase), std::sin(phase));
      }
      return;
    }

    // Gershgorin bounds: coupling entries are < 1, so the off-diagonal part
    // shifts the kinetic range by at most 2|g|.
    const double kmin = ops.kinetic[0] - 2.0 * std::abs(g);
    const double kmax = ops.kinetic[n - 1] + 2.0 * std::abs(g);
    const double half_span = std::max(0.5 * (kmax - kmin), 1e-12);
    const double center = 0.5 * (kmax + kmin);
    const double z = std::abs(s) * half_span;

    const int m_max =
        static_cast<int>(std::ceil(z + 20.0 + 12.0 * std::cbrt(z + 4.0)));
    const std::vector<double> bessel = bessel_j_array(z, m_max);
    int m = m_max;
    while (m > 1 && std::abs(bessel[m]) < 1e-17) --m;

    const double inv_a = 1.0 / half_span;

    // acc = J0 T0 + 2 sum_k (-i)^k Jk Tk, phases cycling {1,-i,-1,i}.
    phi_prev = X;
    for (int j = 0; j < n; ++j) {
      const double v = inv_a * (ops.kinetic[j] - center);
      diag2[2 * j] = v;
      diag2[2 * j + 1] = v;
    }
    phi_cur.resize(n, X.cols());
    cheb_block_pass<false>(n, diag2, offdiag2, inv_a * g, phi_prev, phi_cur);

    acc = bessel[0] * phi_prev;
    static const Cplx phase_cycle[4] = {Cplx(1, 0), Cplx(0, -1), Cplx(-1, 0),
                                        Cplx(0, 1)};
    acc.noalias() += (2.0 * bessel[1] * phase_cycle[1]) * phi_cur;

    for (double& v : diag2) v *= 2.0;
    const double gg = 2.0 * inv_a * g;
    for (int k = 2; k <= m; ++k) {
      // phi_prev becomes phi_next in place, then the buffers swap.
      cheb_block_pass<true>(n, diag2, offdiag2, gg, phi_cur, phi_prev);
      phi_prev.swap(phi_cur);
      acc.noalias() += (2.0 * bessel[k] * phase_cycle[k % 4]) * phi_cur;
    }

    const double global = -s * center;
    X = Cplx(std::cos(global), std::sin(global)) * acc;
  }
};

// Integrates X across the pulse support in place. Returns the largest
// population seen in the two topmost ladder levels (sampled every audit
// interval and at the end). When trace_out is non-null it receives
// (trace_samples+1) rows of per-column <cos(theta)>, endpoints included.
double integrate_pulse(const RotorOperators& ops, Eigen::MatrixXcd& X,
                       const PulseShape& pulse, const PropagationConfig& cfg,
                       Eigen::MatrixXd* trace_out) {
  const int n = ops.basis.dimension();
  const int ncols = static_cast<int>(X.cols());
  const int nsteps = pulse_step_count(pulse, cfg);
  const double h = pulse.duration / nsteps;
  const int trace_stride =
      (trace_out != nullptr && cfg.trace_samples > 0)
          ? nsteps / cfg.trace_samples
          : 0;
  const int audit_stride = std::max(trace_stride, 64);

  double max_top = 0.0;
  const auto audit_top = [&] {
    if (n >= 2) {
      max_top = std::max(max_top, X.row(n - 1).cwiseAbs2().maxCoeff() +
                                      X.row(n - 2).cwiseAbs2().maxCoeff());
    }
  };
  const auto record_trace = [&](int sample_index) {
    for (int c = 0; c < ncols; ++c) {
      double sum = 0.0;
      for (int j = 0; j + 1 < n; ++j) {
        sum += 2.0 * (std::conj(X(j, c)) * X(j + 1, c)).real() *
               ops.coupling[j];
      }
      (*trace_out)(sample_index, c) = sum;
    }
  };

  if (trace_out != nullptr) {
    trace_out->resize(cfg.trace_samples + 1, ncols);
    record_trace(0);
  }

  // 4th-order commutator-free scheme: Gauss nodes, weights 1/4 +- sqrt(3)/6.
  const double sqrt3_6 = std::sqrt(3.0) / 6.0;
  const double node1 = 0.5 - sqrt3_6, node2 = 0.5 + sqrt3_6;
  const double w_minus = 0.25 - sqrt3_6, w_plus = 0.25 + sqrt3_6;

  ChebyshevWorkspace ws;
  for (int k = 0; k < nsteps; ++k) {
    const double tau = -pulse.duration / 2.0 + k * h;
    const double f1 = waveform(pulse, tau + node1 * h);
    const double f2 = waveform(pulse, tau + node2 * h);
    const double g_first = 2.0 * (w_plus * f1 + w_minus * f2);
    const double g_second = 2.0 * (w_minus * f1 + w_plus * f2);
    ws.apply(ops, g_first, 0.5 * h, X);
    ws.apply(ops, g_second, 0.5 * h, X);
    if (trace_stride > 0 && (k + 1) % trace_stride == 0) {
      record_trace((k + 1) / trace_stride);
    }
    if ((k + 1) % audit_stride == 0) audit_top();
  }
  audit_top();
  return max_top;
}

}  // namespace

int basis_headroom(const PulseShape& pulse) {
  const double climb = 3.0 * std::sqrt(std::max(pulse.amplitude, 0.0));
  const double reach =
      2.0 * constants::pi * pulse.frequency * pulse.duration + 10.0;
  return std::max(20, static_cast<int>(std::ceil(std::max(climb, reach))));
}

int pulse_step_count(const PulseShape& pulse, const PropagationConfig& cfg) {
  if (!(cfg.samples_per_period >= 64.0)) {
    throw std::invalid_argument("samples_per_period must be >= 64");
  }
  if (!(cfg.norm_tolerance > 0.0)) {
    throw std::invalid_argument("norm_tolerance must be > 0");
  }
  if (cfg.trace_samples < 0) {
    throw std::invalid_argument("trace_samples must be >= 0");
  }
  const double carrier =
      cfg.samples_per_period * pulse.frequency * pulse.duration;
  int n = static_cast<int>(
      std::ceil(std::max(carrier, static_cast<double>(cfg.min_pulse_steps))));
  const int chunk = std::max(cfg.trace_samples, 1);
  n = ((n + chunk - 1) / chunk) * chunk;
  return n;
}

BlockResult propagate_block(const RotorOperators& ops,
                            const std::vector<int>& initial_J0,
                            const PulseShape& pulse,
                            const PropagationConfig& cfg) {
  validate(pulse);
  const int n = ops.basis.dimension();
  const int ncols = static_cast<int>(initial_J0.size());

  BlockResult result;
  result.final_amplitudes = Eigen::MatrixXcd::Zero(n, ncols);
  for (int c = 0; c < ncols; ++c) {
    const int j = initial_J0[c] - ops.basis.Jmin();
    if (j < 0 || j >= n) {
      throw std::invalid_argument("propagate_block: J0 outside ladder");
    }
    result.final_amplitudes(j, c) = 1.0;
  }

  Eigen::MatrixXd* trace_ptr =
      (cfg.trace_samples > 0) ? &result.pulse_trace : nullptr;
  result.max_top_population = integrate_pulse(ops, result.final_amplitudes,
                                              pulse, cfg, trace_ptr);

  result.norm_drift.resize(ncols);
  for (int c = 0; c < ncols; ++c) {
    result.norm_drift[c] = std::abs(result.final_amplitudes.col(c).norm() - 1.0);
  }
  return result;
}

RotorState propagate_pulse(const RotorState& initial, const PulseShape& pulse,
                           const PropagationConfig& cfg) {
  validate(pulse);
  // Anchor the truncation policy at the highest occupied J.
  int J_top = initial.basis.Jmin();
  for (int j = 0; j < initial.basis.dimension(); ++j) {
    if (std::norm(initial.amplitudes[j]) > 1e-24) {
      J_top = initial.basis.Jmin() + j;
    }
  }

  int headroom = cfg.basis_headroom_override > 0 ? cfg.basis_headroom_override
                                                 : basis_headroom(pulse);
  for (int attempt = 0;; ++attempt) {
    BasisSpec basis{initial.basis.M, J_top + headroom};
    const auto ops = RotorOperators::build(basis);
    const int n = basis.dimension();

    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(n, 1);
    for (int j = 0; j < initial.basis.dimension(); ++j) {
      const int J = initial.basis.Jmin() + j;
      if (J <= basis.Jmax) X(J - basis.Jmin(), 0) = initial.amplitudes[j];
    }

    PropagationConfig run_cfg = cfg;
    run_cfg.trace_samples = 0;
    const double top_pop = integrate_pulse(ops, X, pulse, run_cfg, nullptr);

    if (top_pop >= 1e-10) {
      if (attempt >= cfg.max_basis_retries) {
        throw BasisEscapeError(basis.Jmax, top_pop);
      }
      headroom *= 2;
      continue;
    }

    const double drift = std::abs(X.col(0).norm() - 1.0);
    if (drift > cfg.norm_tolerance) throw IntegrationError(drift);

    RotorState out;
    out.basis = basis;
    out.amplitudes = X.col(0);
    return out;
  }
}

RotorState free_evolve(const RotorState& state, double dtau) {
  if (dtau < 0.0) throw std::invalid_argument("free_evolve: dtau must be >= 0");
  RotorState out = state;
  for (int j = 0; j < state.basis.dimension(); ++j) {
    const int J = state.basis.Jmin() + j;
    const double phase = -static_cast<double>(J) * (J + 1) * dtau;
    out.amplitudes[j] *= Cplx(std::cos(phase), std::sin(phase));
  }
  return out;
}

}  // namespace thzo
