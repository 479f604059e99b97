#pragma once

#include <functional>
#include <vector>

#include "dprgda/core.hpp"
#include "dprgda/spider.hpp"
#include "dprgda/trajectory.hpp"

namespace dprgda {

enum class PhaseMode { kDescent, kEscape };

// Escape-episode bookkeeping. v_sq_terms holds ||v_j||^2 for
// j = m_s+1, ..., t of the current episode; it is empty in descent mode.
struct Phase {
  PhaseMode mode = PhaseMode::kDescent;
  int m_s = -1;  // anchor iteration of the current episode
  int esc = 0;   // steps taken inside the episode
  int s = 0;     // episode counter
  std::vector<double> v_sq_terms;
};

// x - (eta / ||v||) v. Callers guarantee ||v|| >= alpha > 0.
Vec descent_step(const Vec& x, const Vec& v, double eta);

// Anchor at x, perturb uniformly in the radius ball, switch the phase to
// escape with an empty movement accumulator.
Vec enter_escape(RandomStream& perturbation, Phase& phase, int t, const Vec& x,
                 double radius);

enum class EscapeOutcome { kContinue, kExitToDescent, kTerminate };

struct EscapeStep {
  EscapeOutcome outcome = EscapeOutcome::kContinue;
  Vec x_next;
  double eta_used = 0.0;
};

// One monitored escape step. Appends eta_h^2 ||v||^2 to the accumulator; if
// the accumulated movement exceeds (t - m_s) d_bar the step is rescaled so
// the sum lands exactly on the threshold and the phase flips back to descent.
// Otherwise a plain eta_h step is taken and the episode terminates once esc
// reaches t_thres.
EscapeStep escape_step(Phase& phase, int t, const Vec& x, const Vec& v,
                       double eta_h, double d_bar, int t_thres);

enum class StopReason { kEscapeExhausted, kIterationBudget };

inline const char* to_string(StopReason r) {
  return r == StopReason::kEscapeExhausted ? "escape-exhausted"
                                           : "iteration-budget";
}

// Evaluation-only hook that fills the diagnostic fields of a trajectory row.
// It must not touch the optimizer's random streams.
using Instrument = std::function<void(int t, PhaseMode mode, const Vec& x,
                                      const Vec& v, TrajectoryRow& row)>;

struct RunOutcome {
  Vec x_out;
  Vec y_out;
  StopReason reason = StopReason::kIterationBudget;
  // True when some episode exhausted its step budget: the returned anchor
  // carries the movement-based curvature certificate.
  bool certified = false;
  bool has_anchor = false;
  int t_end = 0;
  int escapes = 0;
  int early_exits = 0;
};

// The outer state machine: normalized descent while the privatized gradient
// is large, perturb-and-monitor escape episodes otherwise. Returns the anchor
// of the terminating episode, or the last anchor (final iterate when no
// episode ever started) on budget exhaustion. Everything here is
// post-processing of the privatized estimators; the phase machine itself
// performs no data access.
RunOutcome run(const MinimaxOracle& oracle, RandomSource& rng, const Vec& x0,
               const Vec& y0, const AlgoParams& p, const NoiseScale& noise,
               ClipMode clip_mode, TrajectorySink* sink = nullptr,
               const Instrument& instrument = {});

}  // namespace dprgda
