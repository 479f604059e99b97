#pragma once

#include "dprgda/core.hpp"
#include "dprgda/problems.hpp"

namespace dprgda {

// Value-function surface for the evaluation instruments. Implementations are
// exact (non-private) hooks; nothing here draws from the optimizer's noise
// streams or touches the privacy accountant.
class PhiOracle {
 public:
  virtual ~PhiOracle() = default;
  virtual double value(const Vec& x) const = 0;
  virtual Vec gradient(const Vec& x) const = 0;
};

class SensingPhi : public PhiOracle {
 public:
  explicit SensingPhi(const MatrixSensingInstance& inst) : inst_(inst) {}
  double value(const Vec& x) const override { return inst_.phi(x); }
  Vec gradient(const Vec& x) const override { return inst_.grad_phi(x); }

 private:
  const MatrixSensingInstance& inst_;
};

class SaddlePhi : public PhiOracle {
 public:
  explicit SaddlePhi(const QuadraticSaddleInstance& inst) : inst_(inst) {}
  double value(const Vec& x) const override { return inst_.phi(x); }
  Vec gradient(const Vec& x) const override { return inst_.grad_phi(x); }

 private:
  const QuadraticSaddleInstance& inst_;
};

// (1/2) x' H x.
class QuadraticPhi : public PhiOracle {
 public:
  explicit QuadraticPhi(Mat h) : h_(std::move(h)) {}
  double value(const Vec& x) const override { return 0.5 * x.dot(h_ * x); }
  Vec gradient(const Vec& x) const override { return h_ * x; }

 private:
  Mat h_;
};

// base plus (c/2) ||x||^2, which shifts every Hessian eigenvalue by c.
class ShiftedPhi : public PhiOracle {
 public:
  ShiftedPhi(const PhiOracle& base, double c) : base_(base), c_(c) {}
  double value(const Vec& x) const override {
    return base_.value(x) + 0.5 * c_ * x.squaredNorm();
  }
  Vec gradient(const Vec& x) const override {
    return base_.gradient(x) + c_ * x;
  }

 private:
  const PhiOracle& base_;
  double c_;
};

// (y - proj(y + lambda grad_y f(x, y))) / lambda with the exact full-data
// gradient. Zero exactly at the inner maximizer; for unconstrained domains it
// reduces to -grad_y f.
Vec gradient_mapping(const MinimaxOracle& oracle, const Vec& x, const Vec& y,
                     double lambda);

// Central-difference Hessian-vector product on the exact value gradient:
// (grad(x + h d) - grad(x - h d)) / (2h) for a unit direction d.
Vec hvp(const PhiOracle& phi, const Vec& x, const Vec& direction, double h);

struct MinEigResult {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Smallest Hessian eigenvalue via shifted power iteration on the finite-
// difference Hessian-vector operator: first bound the spectral radius, then
// iterate on (shift I - H) whose dominant eigenvalue is shift - lambda_min.
// A phase counts as converged once successive Rayleigh quotients differ by
// less than tol; a few safeguard iterations follow before stopping. On
// non-convergence the last estimate is returned with the flag cleared.
MinEigResult min_eigenvalue(const PhiOracle& phi, const Vec& x, double h,
                            int maxiter, double tol);

struct SospCertificate {
  double grad_norm = 0.0;
  double lambda_min = 0.0;
  double alpha = 0.0;
  double alpha_h = 0.0;
  bool passes = false;
  bool degraded = false;  // eigensolver did not converge
};

// passes <=> grad_norm <= alpha and lambda_min >= -sqrt(rho_phi alpha).
SospCertificate sosp_check(const PhiOracle& phi, const Vec& x, double alpha,
                           double rho_phi, double h = 5e-4, int maxiter = 500,
                           double tol = 1e-4);

}  // namespace dprgda
