#include "dprgda/privacy.hpp"

#include <atomic>
#include <cmath>
#include <iostream>

namespace dprgda {

Vec clip(const Vec& x, double c) {
  if (!(c > 0)) throw ValidationError("clip threshold must be positive");
  const double norm = x.norm();
  if (norm <= c) return x;
  return (c / norm) * x;
}

Vec gaussian_mechanism(RandomStream& rng, const Vec& value, double sensitivity,
                       double eps, double delta) {
  if (!(eps > 0)) throw ValidationError("gaussian_mechanism: eps must be positive");
  if (!(delta > 0 && delta < 1))
    throw ValidationError("gaussian_mechanism: delta must lie in (0, 1)");
  if (!(sensitivity >= 0))
    throw ValidationError("gaussian_mechanism: sensitivity must be non-negative");
  if (eps >= 1.0) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) {
      std::cerr << "gaussian_mechanism: eps >= 1 is outside the (0, 1) regime "
                   "of the standard analysis; proceeding\n";
    }
  }
  const double sigma = sensitivity * std::sqrt(std::log(1.25 / delta)) / eps;
  if (sigma == 0.0) return value;
  return value + rng.gaussian_vec(static_cast<int>(value.size()), sigma);
}

NoiseScale calibrate_noise(const AlgoParams& p, const PrivacyBudget& budget,
                           int n, double c_scale) {
  p.validate(n);
  if (budget.disabled()) return {};
  if (!(budget.epsilon > 0) || !(budget.delta > 0 && budget.delta < 1))
    throw ValidationError("calibrate_noise: invalid privacy target");
  if (!(c_scale > 0)) throw ValidationError("calibrate_noise: c_scale must be positive");

  const double log_term = std::sqrt(std::log(1.0 / budget.delta));
  const double sqrt_t = std::sqrt(static_cast<double>(p.big_t));
  const double refresh =
      c_scale * (p.c_v * log_term / budget.epsilon) *
      std::max(1.0 / p.s1, sqrt_t / (std::sqrt(static_cast<double>(p.period_q)) * n));
  const double incremental = c_scale * (p.c_u * log_term / budget.epsilon) *
                             std::max(1.0 / p.s2, sqrt_t / n);

  NoiseScale s;
  s.sigma_refresh_x = refresh;
  s.sigma_refresh_y = refresh;
  s.sigma_inc_x = incremental;
  s.sigma_inc_y = incremental;
  return s;
}

double advanced_composition_eps(double eps_i, std::size_t k, double delta_prime) {
  const double kd = static_cast<double>(k);
  return std::sqrt(2.0 * kd * std::log(1.0 / delta_prime)) * eps_i +
         kd * eps_i * (std::expm1(eps_i));
}

AccountResult account(const std::vector<QueryClass>& schedule,
                      const PrivacyBudget& target, double delta_prime) {
  if (target.disabled()) throw ValidationError("account: privacy target is disabled");
  if (!(target.epsilon > 0) || !(target.delta > 0 && target.delta < 1))
    throw ValidationError("account: invalid privacy target");

  std::size_t k = 0;
  for (const auto& q : schedule) k += q.count;
  if (k == 0) throw ValidationError("account: empty query schedule");

  AccountResult res;
  res.total_queries = k;

  if (k == 1) {
    res.eps_per_query = target.epsilon;
    res.delta_per_query = target.delta;
    res.total_eps = target.epsilon;
    res.total_delta = target.delta;
    res.rule = "single";
    return res;
  }

  if (!(delta_prime > 0 && delta_prime < target.delta))
    throw ValidationError("account: delta_prime must lie in (0, delta)");
  const double delta_i = (target.delta - delta_prime) / static_cast<double>(k);

  // Advanced composition: largest feasible eps_i by bisection. The bound is
  // strictly increasing in eps_i, so the lower bracket stays feasible.
  double lo = 0.0;
  double hi = target.epsilon;
  if (advanced_composition_eps(hi, k, delta_prime) <= target.epsilon) {
    lo = hi;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (advanced_composition_eps(mid, k, delta_prime) <= target.epsilon) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  const double eps_advanced = lo;
  const double eps_basic = target.epsilon / static_cast<double>(k);

  if (eps_advanced >= eps_basic) {
    res.rule = "advanced";
    res.eps_per_query = eps_advanced;
    res.total_eps = advanced_composition_eps(eps_advanced, k, delta_prime);
    res.total_delta = static_cast<double>(k) * delta_i + delta_prime;
  } else {
    res.rule = "basic";
    res.eps_per_query = eps_basic;
    res.total_eps = static_cast<double>(k) * eps_basic;
    res.total_delta = static_cast<double>(k) * delta_i;
  }
  res.delta_per_query = delta_i;

  if (res.eps_per_query < 1e-12)
    throw BudgetError("account: infeasible target, per-query eps below 1e-12");
  return res;
}

NoiseScale noise_from_account(double refresh_sens, double incremental_sens,
                              const AccountResult& acc) {
  if (!(refresh_sens >= 0) || !(incremental_sens >= 0))
    throw ValidationError("noise_from_account: sensitivities must be non-negative");
  const double scale =
      std::sqrt(std::log(1.25 / acc.delta_per_query)) / acc.eps_per_query;
  NoiseScale s;
  s.sigma_refresh_x = refresh_sens * scale;
  s.sigma_refresh_y = refresh_sens * scale;
  s.sigma_inc_x = incremental_sens * scale;
  s.sigma_inc_y = incremental_sens * scale;
  return s;
}

PrivacyBudget ledger_from_account(const std::vector<QueryClass>& schedule,
                                  const PrivacyBudget& target,
                                  const AccountResult& acc) {
  PrivacyBudget out = target;
  out.ledger.clear();
  for (const auto& q : schedule) {
    PrivacyBudget::LedgerEntry e;
    e.query_class = q.kind == QueryKind::kRefresh ? "refresh" : "incremental";
    e.eps_per_query = acc.eps_per_query;
    e.delta_per_query = acc.delta_per_query;
    e.count = q.count;
    out.ledger.push_back(e);
  }
  return out;
}

}  // namespace dprgda
