#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dprgda/core.hpp"

namespace dprgda {

// min{C/||x||, 1} x. The scale factor is 1 when ||x|| = 0.
Vec clip(const Vec& x, double c);

// value + N(0, sigma^2 I) with sigma = sensitivity * sqrt(log(1.25/delta)) / eps.
// eps >= 1 is accepted with a one-time warning; the classical analysis covers
// eps in (0, 1) but experiment budgets routinely exceed it.
Vec gaussian_mechanism(RandomStream& rng, const Vec& value, double sensitivity,
                       double eps, double delta);

// Standard deviations for the four noise injections of the inner updater.
// All zero exactly when privacy is disabled.
struct NoiseScale {
  double sigma_refresh_x = 0.0;  // refresh noise on the x-estimator
  double sigma_refresh_y = 0.0;  // refresh noise on the y-estimator
  double sigma_inc_x = 0.0;      // incremental noise on the x-estimator
  double sigma_inc_y = 0.0;      // incremental noise on the y-estimator

  bool disabled() const {
    return sigma_refresh_x == 0.0 && sigma_refresh_y == 0.0 &&
           sigma_inc_x == 0.0 && sigma_inc_y == 0.0;
  }
};

// Closed-form noise schedule:
//   refresh sigma     = c_scale * (C_v sqrt(log(1/delta)) / eps) * max{1/S1, sqrt(T)/(sqrt(q) n)}
//   incremental sigma = c_scale * (C_u sqrt(log(1/delta)) / eps) * max{1/S2, sqrt(T)/n}
// c_scale stands in for the unspecified universal constant (default 1).
// A disabled budget returns all zeros.
NoiseScale calibrate_noise(const AlgoParams& p, const PrivacyBudget& budget,
                           int n, double c_scale = 1.0);

enum class QueryKind { kRefresh, kIncremental };

// One homogeneous class of private queries: its l2 sensitivity and how many
// times it is issued over a run.
struct QueryClass {
  QueryKind kind = QueryKind::kRefresh;
  double sensitivity = 0.0;
  std::size_t count = 0;
};

inline double refresh_sensitivity(double c_v, int s1) { return 2.0 * c_v / s1; }
inline double incremental_sensitivity(double c_u, int s2) { return 2.0 * c_u / s2; }

struct AccountResult {
  double eps_per_query = 0.0;
  double delta_per_query = 0.0;
  double total_eps = 0.0;    // composition bound re-evaluated at eps_per_query
  double total_delta = 0.0;
  std::size_t total_queries = 0;
  std::string rule;          // "single", "basic" or "advanced"
};

// Advanced-composition bound for k queries at uniform eps_i:
//   sqrt(2 k log(1/delta')) eps_i + k eps_i (e^{eps_i} - 1)
double advanced_composition_eps(double eps_i, std::size_t k, double delta_prime);

// Largest uniform per-query (eps_i, delta_i) whose composition stays within
// the target. eps_i is found by bisection of the advanced bound, with plain
// additive composition as a fallback when it allows a larger per-query
// budget. delta_i = (delta - delta_prime) / k. Throws BudgetError when the
// required eps_i falls below 1e-12.
AccountResult account(const std::vector<QueryClass>& schedule,
                      const PrivacyBudget& target, double delta_prime);

// Per-class Gaussian scales from an allocation:
// sigma = sensitivity * sqrt(log(1.25/delta_i)) / eps_i.
NoiseScale noise_from_account(double refresh_sens, double incremental_sens,
                              const AccountResult& acc);

// Target budget annotated with the allocated per-class ledger.
PrivacyBudget ledger_from_account(const std::vector<QueryClass>& schedule,
                                  const PrivacyBudget& target,
                                  const AccountResult& acc);

}  // namespace dprgda
