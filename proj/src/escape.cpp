#include "dprgda/escape.hpp"

#include <cmath>
#include <numeric>

namespace dprgda {

Vec descent_step(const Vec& x, const Vec& v, double eta) {
  const double norm = v.norm();
  if (!(norm > 0)) throw ValidationError("descent_step: ||v|| must be positive");
  if (!(eta > 0)) throw ValidationError("descent_step: eta must be positive");
  return x - (eta / norm) * v;
}

Vec enter_escape(RandomStream& perturbation, Phase& phase, int t, const Vec& x,
                 double radius) {
  phase.mode = PhaseMode::kEscape;
  phase.m_s = t;
  phase.s += 1;
  phase.esc = 0;
  phase.v_sq_terms.clear();
  return x + sample_uniform_ball(perturbation, static_cast<int>(x.size()), radius);
}

EscapeStep escape_step(Phase& phase, int t, const Vec& x, const Vec& v,
                       double eta_h, double d_bar, int t_thres) {
  if (phase.mode != PhaseMode::kEscape)
    throw ValidationError("escape_step: phase is not escape");

  phase.v_sq_terms.push_back(v.squaredNorm());
  const double sum_v_sq =
      std::accumulate(phase.v_sq_terms.begin(), phase.v_sq_terms.end(), 0.0);
  const double steps = static_cast<double>(t - phase.m_s);
  const double movement = eta_h * eta_h * sum_v_sq;

  EscapeStep out;
  if (movement > steps * d_bar) {
    // Rescale the current step so sum_j eta_t^2 ||v_j||^2 == (t - m_s) d_bar.
    // movement > steps * d_bar >= 0 guarantees sum_v_sq > 0 here.
    const double eta_t = std::sqrt(steps * d_bar / sum_v_sq);
    out.outcome = EscapeOutcome::kExitToDescent;
    out.eta_used = eta_t;
    out.x_next = x - eta_t * v;
    phase.mode = PhaseMode::kDescent;
    phase.v_sq_terms.clear();
    return out;
  }

  out.eta_used = eta_h;
  out.x_next = x - eta_h * v;
  phase.esc += 1;
  out.outcome = phase.esc >= t_thres ? EscapeOutcome::kTerminate
                                     : EscapeOutcome::kContinue;
  return out;
}

namespace {

void emit(TrajectorySink* sink, const Instrument& instrument, int t,
          PhaseMode mode, const char* phase_name, const Vec& x, const Vec& v,
          double eps_placeholder = 0.0) {
  if (sink == nullptr && !instrument) return;
  TrajectoryRow row;
  row.t = t;
  row.phase = phase_name;
  row.v_norm = v.size() > 0 ? v.norm() : std::numeric_limits<double>::quiet_NaN();
  row.eps_spent = eps_placeholder;
  if (instrument) instrument(t, mode, x, v, row);
  if (sink) sink->push(row);
}

}  // namespace

RunOutcome run(const MinimaxOracle& oracle, RandomSource& rng, const Vec& x0,
               const Vec& y0, const AlgoParams& p, const NoiseScale& noise,
               ClipMode clip_mode, TrajectorySink* sink,
               const Instrument& instrument) {
  p.validate(oracle.n());
  if (x0.size() != oracle.dim_x() || y0.size() != oracle.dim_y())
    throw ValidationError("run: initial point dimensions do not match the oracle");
  if (!x0.allFinite() || !y0.allFinite())
    throw ValidationError("run: initial point must be finite");

  IterateState st;
  st.x_t = x0;
  st.x_prev = x0;
  st.y_t = oracle.project_y(y0);
  st.v_prev = Vec::Zero(oracle.dim_x());
  st.u_prev = Vec::Zero(oracle.dim_y());
  st.t = 0;

  Phase phase;
  Vec anchor = x0;
  RunOutcome out;
  out.has_anchor = false;

  const Vec no_v;
  for (int t = 0; t < p.big_t; ++t) {
    const InnerResult inner = inner_loop(oracle, rng.subsampling(), rng.noise(),
                                         st, p, noise, clip_mode);
    const Vec& v = inner.v_out;
    Vec x_next;

    if (phase.mode == PhaseMode::kDescent) {
      if (v.norm() >= p.alpha) {
        emit(sink, instrument, t, PhaseMode::kDescent, "descent", st.x_t, v);
        x_next = descent_step(st.x_t, v, p.eta);
      } else {
        emit(sink, instrument, t, PhaseMode::kEscape, "escape", st.x_t, v);
        anchor = st.x_t;
        out.has_anchor = true;
        out.escapes += 1;
        x_next = enter_escape(rng.perturbation(), phase, t, st.x_t, p.radius);
      }
    } else {
      emit(sink, instrument, t, PhaseMode::kEscape, "escape", st.x_t, v);
      const EscapeStep step =
          escape_step(phase, t, st.x_t, v, p.eta_h, p.d_bar, p.t_thres);
      x_next = step.x_next;
      if (step.outcome == EscapeOutcome::kExitToDescent) {
        out.early_exits += 1;
      } else if (step.outcome == EscapeOutcome::kTerminate) {
        // The trajectory keeps the iterate history; the output point is the
        // certified anchor and is reported through the summary.
        emit(sink, instrument, t + 1, PhaseMode::kEscape, "escape", step.x_next,
             no_v);
        out.x_out = anchor;
        out.y_out = inner.y_next;
        out.reason = StopReason::kEscapeExhausted;
        out.certified = true;
        out.t_end = t + 1;
        return out;
      }
    }

    st.x_prev = st.x_t;
    st.x_t = x_next;
    st.y_t = inner.y_next;
    st.v_prev = v;
    st.u_prev = inner.u_out;
    st.t = t + 1;
  }

  emit(sink, instrument, p.big_t,
       phase.mode == PhaseMode::kDescent ? PhaseMode::kDescent : PhaseMode::kEscape,
       phase.mode == PhaseMode::kDescent ? "descent" : "escape", st.x_t, no_v);
  out.x_out = out.has_anchor ? anchor : st.x_t;
  out.y_out = st.y_t;
  out.reason = StopReason::kIterationBudget;
  out.certified = false;
  out.t_end = p.big_t;
  return out;
}

}  // namespace dprgda
