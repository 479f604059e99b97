#pragma once

#include <vector>

#include "dprgda/core.hpp"
#include "dprgda/privacy.hpp"

namespace dprgda {

// Where the clip lands. kBatchMean clips the averaged batch quantity, the
// form the recursion is stated in; kPerSample clips each per-sample term
// before averaging, which is what makes the 2C/S sensitivity bound hold for
// unbounded per-sample gradients.
enum class ClipMode { kBatchMean, kPerSample };

// Recursive gradient estimators for the two blocks.
struct EstimatorPair {
  Vec v;  // estimate of grad_x f at the current iterate
  Vec u;  // estimate of grad_y f
};

struct InnerResult {
  Vec y_next;
  Vec v_out, u_out;
  int selected_k = 0;

  struct PathPoint {
    Vec y;             // y_{t,k}
    double gmap_norm;  // ||(y_{t,k} - proj(y_{t,k} + lambda u_{t,k})) / lambda||
  };
  std::vector<PathPoint> inner_path;

  // Diagnostics for estimator-drift checks: squared movement and number of
  // incremental updates along the kept prefix k = 0..selected_k.
  double kept_motion_sq = 0.0;
  int kept_increments = 0;
};

// Carries the cross-iteration status of the optimizer.
struct IterateState {
  Vec x_t;
  Vec x_prev;
  Vec y_t;
  Vec v_prev;
  Vec u_prev;
  int t = 0;
};

// Fresh privatized estimators from an S1-sample batch at (x, y).
EstimatorPair refresh(const MinimaxOracle& oracle, RandomStream& subsampling,
                      RandomStream& noise_rng, const Vec& x, const Vec& y,
                      const AlgoParams& p, const NoiseScale& noise,
                      ClipMode mode);

// One recursive update: prev plus noise plus the clipped mean gradient
// difference between w_new and w_old over a shared S2-sample batch. Noise is
// drawn whenever its scale is positive, regardless of the difference.
EstimatorPair incremental_update(const MinimaxOracle& oracle,
                                 RandomStream& subsampling,
                                 RandomStream& noise_rng,
                                 const EstimatorPair& prev, const Vec& x_old,
                                 const Vec& y_old, const Vec& x_new,
                                 const Vec& y_new, const AlgoParams& p,
                                 const NoiseScale& noise, ClipMode mode);

// Full inner pass at anchor x_t: refresh-or-carry, K incremental updates with
// projected ascent on y, then argmin selection by the privatized gradient
// mapping (post-processing of already-private estimators). Candidates are
// k = 0..K-1; ties go to the lowest k.
InnerResult inner_loop(const MinimaxOracle& oracle, RandomStream& subsampling,
                       RandomStream& noise_rng, const IterateState& state,
                       const AlgoParams& p, const NoiseScale& noise,
                       ClipMode mode);

}  // namespace dprgda
