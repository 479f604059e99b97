#include "dprgda/diagnostics.hpp"

#include <cmath>

namespace dprgda {

Vec gradient_mapping(const MinimaxOracle& oracle, const Vec& x, const Vec& y,
                     double lambda) {
  if (!(lambda > 0)) throw ValidationError("gradient_mapping: lambda must be positive");
  const Vec g = oracle.mean_grad_y(oracle.full_batch(), x, y);
  return (y - oracle.project_y(y + lambda * g)) / lambda;
}

Vec hvp(const PhiOracle& phi, const Vec& x, const Vec& direction, double h) {
  if (!(h > 0)) throw ValidationError("hvp: step size must be positive");
  const double norm = direction.norm();
  if (!(norm > 0)) throw ValidationError("hvp: direction must be nonzero");
  const Vec d = direction / norm;
  return (phi.gradient(x + h * d) - phi.gradient(x - h * d)) / (2.0 * h);
}

namespace {

struct PowerResult {
  double rayleigh = 0.0;
  double radius = 0.0;  // max ||op(v)|| seen over normalized iterates
  bool converged = false;
  int iterations = 0;
};

constexpr int kSafeguardIters = 10;

// Power iteration on op, tracking the Rayleigh quotient of the normalized
// iterate. Stops once successive Rayleigh quotients differ by less than tol,
// after a few safeguard rounds. The norm-growth statistic gives a spectral
// radius estimate that is reliable even when the Rayleigh quotient is not
// (symmetric +/- spectra).
template <typename Op>
PowerResult power_iterate(const Op& op, Vec v, int maxiter, double tol) {
  PowerResult res;
  double prev = kInf;
  int stable = -1;
  for (int it = 0; it < maxiter; ++it) {
    res.iterations = it + 1;
    Vec w = op(v);
    res.rayleigh = v.dot(w);
    const double wn = w.norm();
    res.radius = std::max(res.radius, wn);
    if (wn < 1e-300) {  // operator annihilates the iterate; spectrum ~ 0
      res.rayleigh = 0.0;
      res.converged = true;
      return res;
    }
    v = w / wn;
    if (std::abs(res.rayleigh - prev) < tol) {
      if (stable < 0) stable = 0;
      if (++stable >= kSafeguardIters) {
        res.converged = true;
        return res;
      }
    } else {
      stable = -1;
    }
    prev = res.rayleigh;
  }
  res.converged = stable >= 0;
  return res;
}

}  // namespace

MinEigResult min_eigenvalue(const PhiOracle& phi, const Vec& x, double h,
                            int maxiter, double tol) {
  if (maxiter < 1) throw ValidationError("min_eigenvalue: maxiter must be >= 1");
  if (!(tol > 0)) throw ValidationError("min_eigenvalue: tol must be positive");

  const int d = static_cast<int>(x.size());
  // Deterministic start vector independent of the optimizer streams.
  RandomStream start(splitmix64(0x5eedULL + static_cast<std::uint64_t>(d)));
  Vec v0 = start.gaussian_vec(d, 1.0);
  if (v0.norm() == 0) v0 = Vec::Ones(d);
  v0.normalize();

  const auto apply_h = [&](const Vec& v) { return hvp(phi, x, v, h); };
  const PowerResult bound = power_iterate(apply_h, v0, maxiter, tol);

  MinEigResult res;
  res.iterations = bound.iterations;
  double shift = 1.2 * std::max(bound.radius, std::abs(bound.rayleigh)) + tol;
  PowerResult dominant;
  // A negative Rayleigh quotient on the shifted operator means the shift was
  // below lambda_max; enlarge and retry.
  for (int attempt = 0; attempt < 3; ++attempt) {
    const auto apply_shifted = [&](const Vec& v) -> Vec {
      return shift * v - hvp(phi, x, v, h);
    };
    dominant = power_iterate(apply_shifted, v0, maxiter, tol);
    res.iterations += dominant.iterations;
    if (dominant.rayleigh >= 0) break;
    shift = 4.0 * (shift + std::abs(dominant.rayleigh));
  }

  res.value = shift - dominant.rayleigh;
  res.converged = bound.converged && dominant.converged;
  return res;
}

SospCertificate sosp_check(const PhiOracle& phi, const Vec& x, double alpha,
                           double rho_phi, double h, int maxiter, double tol) {
  if (!(alpha > 0)) throw ValidationError("sosp_check: alpha must be positive");
  if (!(rho_phi > 0)) throw ValidationError("sosp_check: rho_phi must be positive");

  SospCertificate cert;
  cert.alpha = alpha;
  cert.alpha_h = std::sqrt(rho_phi * alpha);
  cert.grad_norm = phi.gradient(x).norm();
  const MinEigResult eig = min_eigenvalue(phi, x, h, maxiter, tol);
  cert.lambda_min = eig.value;
  cert.degraded = !eig.converged;
  cert.passes = cert.grad_norm <= alpha && cert.lambda_min >= -cert.alpha_h;
  return cert;
}

}  // namespace dprgda
