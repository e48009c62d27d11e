#include "thzorient/ensemble_run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "thzorient/constants.hpp"
#include "thzorient/parallel.hpp"

namespace thzo {

namespace {

using Cplx = std::complex<double>;

double evaluate_coherences(const std::vector<Cplx>& Q, double tau) {
  double sum = 0.0;
  for (std::size_t J = 0; J < Q.size(); ++J) {
    const double phase = -2.0 * (static_cast<double>(J) + 1.0) * tau;
    sum += 2.0 * (Q[J] * Cplx(std::cos(phase), std::sin(phase))).real();
  }
  return sum;
}

// Per-member outputs gathered before the ordered reduction.
struct MemberScratch {
  std::vector<Cplx> coherences;     // q_J, global J index
  std::vector<double> pulse_trace;  // in-pulse <cos>, may be empty
};

}  // namespace

double EnsembleRunResult::evaluate(Component c, double tau) const {
  switch (c) {
    case Component::zero_T: return evaluate_coherences(Q_zero, tau);
    case Component::thermal: return evaluate_coherences(Q_thermal, tau);
    default: return evaluate_coherences(Q_total, tau);
  }
}

OrientationExtremum EnsembleRunResult::max_post_pulse(Component c,
                                                      int dense_samples) const {
  dense_samples = std::max(dense_samples, 2048);
  const std::vector<Cplx>& Q = (c == Component::zero_T)   ? Q_zero
                               : (c == Component::thermal) ? Q_thermal
                                                           : Q_total;
  const double period = constants::pi;
  double best_tau = 0.0;
  double best_abs = -1.0;
  for (int i = 0; i < dense_samples; ++i) {
    const double tau = period * i / dense_samples;
    const double v = std::abs(evaluate_coherences(Q, tau));
    if (v > best_abs) {
      best_abs = v;
      best_tau = tau;
    }
  }

  // Local refinement: repeatedly rescan a shrinking bracket.
  double span = period / dense_samples;
  for (int round = 0; round < 4; ++round) {
    const int pts = 32;
    const double lo = best_tau - span;
    const double step = 2.0 * span / pts;
    for (int i = 0; i <= pts; ++i) {
      const double tau = lo + i * step;
      const double v = std::abs(evaluate_coherences(Q, tau));
      if (v > best_abs) {
        best_abs = v;
        best_tau = tau;
      }
    }
    span /= 16.0;
  }

  OrientationExtremum ext;
  ext.tau = best_tau;
  ext.value = evaluate_coherences(Q, best_tau);
  ext.magnitude = std::abs(ext.value);
  return ext;
}

OrientationTrace EnsembleRunResult::trace(int post_samples,
                                          double post_length) const {
  OrientationTrace out;
  const int ts = static_cast<int>(pulse_total.empty() ? 0 : pulse_total.size() - 1);
  out.times.reserve(ts + 1 + post_samples);
  out.total.reserve(ts + 1 + post_samples);
  out.zero_T.reserve(ts + 1 + post_samples);
  out.thermal.reserve(ts + 1 + post_samples);

  for (int i = 0; i <= ts && ts > 0; ++i) {
    // Shifted time axis: integration runs [-D/2, D/2], reports [-D, 0].
    out.times.push_back(-pulse.duration + pulse.duration * i / ts);
    out.total.push_back(pulse_total[i]);
    out.zero_T.push_back(pulse_zero[i]);
    out.thermal.push_back(pulse_thermal[i]);
  }
  out.pulse_end = out.times.empty() ? 0 : out.times.size() - 1;

  for (int i = 1; i <= post_samples; ++i) {
    const double tau = post_length * i / post_samples;
    out.times.push_back(tau);
    out.total.push_back(evaluate(Component::total, tau));
    out.zero_T.push_back(evaluate(Component::zero_T, tau));
    out.thermal.push_back(evaluate(Component::thermal, tau));
  }
  return out;
}

EnsembleRunResult run_ensemble(const PulseShape& pulse, double T_tilde,
                               const PropagationConfig& cfg, int workers,
                               double cutoff) {
  validate(pulse);
  EnsembleRunResult result;
  result.pulse = pulse;
  result.ensemble = build_ensemble(T_tilde, cutoff);
  const ThermalEnsemble& ens = result.ensemble;

  const int J0_max = ens.J0_max;
  const std::size_t n_members = ens.members.size();
  std::vector<MemberScratch> scratch(n_members);
  // members are sorted by (J0, M0): index(J0, M0) = J0(J0+1)/2 + M0.
  const auto member_index = [](int J0, int M0) {
    return static_cast<std::size_t>(J0) * (J0 + 1) / 2 + M0;
  };

  std::atomic<double> max_drift{0.0};
  std::atomic<int> max_jmax{0};
  const auto update_max = [](std::atomic<double>& target, double v) {
    double cur = target.load();
    while (v > cur && !target.compare_exchange_weak(cur, v)) {
    }
  };

  // One task per M0 ladder; all J0 >= M0 members propagate together.
  parallel_for(static_cast<std::size_t>(J0_max) + 1, workers, [&](std::size_t task) {
    const int M0 = static_cast<int>(task);
    std::vector<int> initial_J0;
    for (int J0 = M0; J0 <= J0_max; ++J0) initial_J0.push_back(J0);

    int headroom = cfg.basis_headroom_override > 0
                       ? cfg.basis_headroom_override
                       : basis_headroom(pulse);
    for (int attempt = 0;; ++attempt) {
      const BasisSpec basis{M0, J0_max + headroom};
      const auto ops = RotorOperators::build(basis);
      BlockResult block = propagate_block(ops, initial_J0, pulse, cfg);

      if (block.max_top_population >= 1e-10) {
        if (attempt >= cfg.max_basis_retries) {
          throw BasisEscapeError(basis.Jmax, block.max_top_population);
        }
        headroom *= 2;
        continue;
      }
      for (double d : block.norm_drift) {
        if (d > cfg.norm_tolerance) throw IntegrationError(d);
        update_max(max_drift, d);
      }
      int cur = max_jmax.load();
      while (basis.Jmax > cur &&
             !max_jmax.compare_exchange_weak(cur, basis.Jmax)) {
      }

      const int n = basis.dimension();
      for (std::size_t c = 0; c < initial_J0.size(); ++c) {
        MemberScratch& slot = scratch[member_index(initial_J0[c], M0)];
        slot.coherences.assign(basis.Jmax, Cplx(0.0, 0.0));
        for (int j = 0; j + 1 < n; ++j) {
          const int J = basis.Jmin() + j;
          slot.coherences[J] =
              std::conj(block.final_amplitudes(j, c)) *
              block.final_amplitudes(j + 1, c) * ops.coupling[j];
        }
        if (cfg.trace_samples > 0) {
          slot.pulse_trace.resize(cfg.trace_samples + 1);
          for (int i = 0; i <= cfg.trace_samples; ++i) {
            slot.pulse_trace[i] = block.pulse_trace(i, static_cast<int>(c));
          }
        }
      }
      break;
    }
  });

  result.max_norm_drift = max_drift.load();
  result.max_Jmax = max_jmax.load();

  // Ordered reduction, fixed (J0, M0) order.
  std::size_t q_len = 0;
  for (const auto& s : scratch) q_len = std::max(q_len, s.coherences.size());
  result.Q_total.assign(q_len, Cplx(0.0, 0.0));
  result.Q_zero.assign(q_len, Cplx(0.0, 0.0));
  result.Q_thermal.assign(q_len, Cplx(0.0, 0.0));
  if (cfg.trace_samples > 0) {
    result.pulse_total.assign(cfg.trace_samples + 1, 0.0);
    result.pulse_zero.assign(cfg.trace_samples + 1, 0.0);
    result.pulse_thermal.assign(cfg.trace_samples + 1, 0.0);
  }

  for (std::size_t i = 0; i < n_members; ++i) {
    const EnsembleMember& m = ens.members[i];
    const MemberScratch& s = scratch[i];
    const double w = m.weight;
    auto& Q_part = (m.J0 == 0) ? result.Q_zero : result.Q_thermal;
    for (std::size_t J = 0; J < s.coherences.size(); ++J) {
      result.Q_total[J] += w * s.coherences[J];
      Q_part[J] += w * s.coherences[J];
    }
    if (cfg.trace_samples > 0) {
      auto& trace_part = (m.J0 == 0) ? result.pulse_zero : result.pulse_thermal;
      for (std::size_t k = 0; k < s.pulse_trace.size(); ++k) {
        result.pulse_total[k] += w * s.pulse_trace[k];
        trace_part[k] += w * s.pulse_trace[k];
      }
    }
  }
  return result;
}

}  // namespace thzo
