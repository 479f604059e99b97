#include "dprgda/spider.hpp"

#include <cmath>

namespace dprgda {

namespace {

// Clip-then-average or average-then-clip over per-sample columns.
Vec privatize_columns(const Mat& cols, double c, ClipMode mode) {
  if (mode == ClipMode::kBatchMean) return clip(cols.rowwise().mean(), c);
  Vec acc = Vec::Zero(cols.rows());
  for (int j = 0; j < cols.cols(); ++j) acc += clip(cols.col(j), c);
  return acc / static_cast<double>(cols.cols());
}

Vec maybe_noise(RandomStream& rng, int dim, double sigma) {
  if (sigma == 0.0) return Vec::Zero(dim);
  return rng.gaussian_vec(dim, sigma);
}

}  // namespace

EstimatorPair refresh(const MinimaxOracle& oracle, RandomStream& subsampling,
                      RandomStream& noise_rng, const Vec& x, const Vec& y,
                      const AlgoParams& p, const NoiseScale& noise,
                      ClipMode mode) {
  const std::vector<int> batch =
      subsampling.sample_without_replacement(oracle.n(), p.s1);
  EstimatorPair est;
  est.v = privatize_columns(oracle.grads_x(batch, x, y), p.c_v, mode) +
          maybe_noise(noise_rng, oracle.dim_x(), noise.sigma_refresh_x);
  est.u = privatize_columns(oracle.grads_y(batch, x, y), p.c_v, mode) +
          maybe_noise(noise_rng, oracle.dim_y(), noise.sigma_refresh_y);
  return est;
}

EstimatorPair incremental_update(const MinimaxOracle& oracle,
                                 RandomStream& subsampling,
                                 RandomStream& noise_rng,
                                 const EstimatorPair& prev, const Vec& x_old,
                                 const Vec& y_old, const Vec& x_new,
                                 const Vec& y_new, const AlgoParams& p,
                                 const NoiseScale& noise, ClipMode mode) {
  // One batch per step, shared by the x- and y-coordinate differences.
  const std::vector<int> batch =
      subsampling.sample_without_replacement(oracle.n(), p.s2);

  const Mat dx = oracle.grads_x(batch, x_new, y_new) -
                 oracle.grads_x(batch, x_old, y_old);
  const Mat dy = oracle.grads_y(batch, x_new, y_new) -
                 oracle.grads_y(batch, x_old, y_old);

  EstimatorPair est;
  est.v = prev.v + maybe_noise(noise_rng, oracle.dim_x(), noise.sigma_inc_x) +
          privatize_columns(dx, p.c_u, mode);
  est.u = prev.u + maybe_noise(noise_rng, oracle.dim_y(), noise.sigma_inc_y) +
          privatize_columns(dy, p.c_u, mode);
  return est;
}

InnerResult inner_loop(const MinimaxOracle& oracle, RandomStream& subsampling,
                       RandomStream& noise_rng, const IterateState& state,
                       const AlgoParams& p, const NoiseScale& noise,
                       ClipMode mode) {
  p.validate(oracle.n());

  EstimatorPair est;
  if (state.t % p.period_q == 0) {
    est = refresh(oracle, subsampling, noise_rng, state.x_t, state.y_t, p,
                  noise, mode);
  } else {
    est.v = state.v_prev;
    est.u = state.u_prev;
  }

  // Index convention: x_{t,-1} = x_{t-1}, x_{t,k} = x_t for k >= 0,
  // y_{t,-1} = y_{t,0} = y_t. The k = 0 difference therefore carries the
  // x-block movement of the last outer step.
  Vec x_old = state.x_prev;
  Vec y_old = state.y_t;
  Vec y_cur = state.y_t;

  std::vector<EstimatorPair> candidates;
  candidates.reserve(static_cast<std::size_t>(p.inner_k));
  InnerResult res;
  res.inner_path.reserve(static_cast<std::size_t>(p.inner_k));

  std::vector<double> step_sq(static_cast<std::size_t>(p.inner_k), 0.0);
  int best_k = 0;
  double best_norm = kInf;

  for (int k = 0; k < p.inner_k; ++k) {
    est = incremental_update(oracle, subsampling, noise_rng, est, x_old, y_old,
                             state.x_t, y_cur, p, noise, mode);
    step_sq[static_cast<std::size_t>(k)] =
        k == 0 ? (state.x_t - state.x_prev).squaredNorm()
               : (y_cur - y_old).squaredNorm();

    const Vec y_ascended = oracle.project_y(y_cur + p.lambda * est.u);
    const double gmap_norm = (y_cur - y_ascended).norm() / p.lambda;

    res.inner_path.push_back({y_cur, gmap_norm});
    candidates.push_back(est);
    if (gmap_norm < best_norm) {
      best_norm = gmap_norm;
      best_k = k;
    }

    x_old = state.x_t;
    y_old = y_cur;
    y_cur = y_ascended;
  }

  res.selected_k = best_k;
  res.y_next = res.inner_path[static_cast<std::size_t>(best_k)].y;
  res.v_out = candidates[static_cast<std::size_t>(best_k)].v;
  res.u_out = candidates[static_cast<std::size_t>(best_k)].u;
  res.kept_increments = best_k + 1;
  for (int k = 0; k <= best_k; ++k)
    res.kept_motion_sq += step_sq[static_cast<std::size_t>(k)];
  return res;
}

}  // namespace dprgda
