#pragma once

#include <functional>

#include "dprgda/core.hpp"
#include "dprgda/escape.hpp"
#include "dprgda/privacy.hpp"
#include "dprgda/spider.hpp"
#include "dprgda/trajectory.hpp"

namespace dprgda {

// Single-loop simultaneous descent-ascent with per-step privatized batch
// gradients.
struct SgdaOptions {
  int steps = 400;
  double eta_x = 0.05;
  double eta_y = 0.8;
  int batch = 50;
  double clip_c = 1.0;
  double sigma_x = 0.0;  // per-query Gaussian scale on the x-gradient
  double sigma_y = 0.0;
  ClipMode clip_mode = ClipMode::kPerSample;
};

struct BaselineResult {
  Vec x_out;
  Vec y_out;
  int t_end = 0;
};

// Every step samples one batch, privatizes both block gradients, then updates
// x and y simultaneously from the old pair (ascent on y is projected).
BaselineResult dp_sgda(const MinimaxOracle& oracle, RandomSource& rng,
                       const Vec& x0, const Vec& y0, const SgdaOptions& opts,
                       TrajectorySink* sink = nullptr,
                       const Instrument& instrument = {});

// Variance-reduced private minimization run directly on an explicit
// objective: periodic refresh, recursive clipped gradient differences in
// between, plain descent steps x <- x - eta v.
struct SpiderMinOptions {
  int steps = 400;
  double eta = 0.005;
  int s1 = 200;
  int s2 = 50;
  int period_q = 10;
  double c_v = 1.0;
  double c_u = 1.0;
  double sigma_refresh = 0.0;
  double sigma_inc = 0.0;
  ClipMode clip_mode = ClipMode::kPerSample;
};

BaselineResult dp_spider_min(const MinOracle& oracle, RandomSource& rng,
                             const Vec& x0, const SpiderMinOptions& opts,
                             TrajectorySink* sink = nullptr,
                             const Instrument& instrument = {});

}  // namespace dprgda
