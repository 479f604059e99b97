#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dprgda/core.hpp"

#include "json.hpp"

namespace dprgda {

// Synthetic low-rank sensing task in saddle form. The x-variable stacks the
// factor pair as [vec(U); vec(V)] (column-major), the y-variable is one dual
// coordinate per measurement. Per-sample losses exclude the 1/n factor; the
// oracle's batch mean supplies it, which pins the sensitivity bookkeeping.
struct MatrixSensingInstance {
  int p = 0, q = 0, rank = 0, n = 0;
  double sigma_noise = 0.0;
  double x_star_scale = 1.0;     // Frobenius norm of the planted matrix
  std::vector<Mat> sensing;      // n matrices, p x q
  Mat a_flat;                    // n x (p*q), row i = vec(sensing[i])
  Vec b;                         // measurements
  Mat x_star;                    // planted p x q matrix

  int dim_x() const { return (p + q) * rank; }
  int dim_y() const { return n; }

  Eigen::Map<const Mat> u_of(const Vec& x) const {
    return Eigen::Map<const Mat>(x.data(), p, rank);
  }
  Eigen::Map<const Mat> v_of(const Vec& x) const {
    return Eigen::Map<const Mat>(x.data() + p * rank, q, rank);
  }

  Vec residuals(const Vec& x) const;   // r_i = <A_i, U V^T> - b_i
  double phi(const Vec& x) const;      // (1/2n) sum r_i^2
  Vec grad_phi(const Vec& x) const;
  Vec inner_maximizer(const Vec& x) const { return residuals(x); }
  double saddle_value(const Vec& x, const Vec& y) const;  // f(x, y)

  Vec grad_x_sample(int i, const Vec& x, const Vec& y) const;
  Vec grad_y_sample(int i, const Vec& x, const Vec& y) const;

  // Factor entries N(0, 0.1^2); the dual starts at zero.
  Vec init_x(RandomStream& rng) const;

  nlohmann::json to_json() const;  // matrices serialized row-major
  static MatrixSensingInstance from_json(const nlohmann::json& j);
};

// Sensing matrices have N(0, 1/(pq)) entries; the planted matrix is a product
// of standard Gaussian factors rescaled to Frobenius norm x_star_scale;
// measurements carry N(0, sigma_noise^2) additive noise.
MatrixSensingInstance generate_matrix_sensing(RandomStream& rng, int p, int q,
                                              int rank, int n,
                                              double sigma_noise,
                                              double x_star_scale = 1.0);

class MatrixSensingOracle : public MinimaxOracle {
 public:
  explicit MatrixSensingOracle(const MatrixSensingInstance& inst) : inst_(inst) {}

  int n() const override { return inst_.n; }
  int dim_x() const override { return inst_.dim_x(); }
  int dim_y() const override { return inst_.dim_y(); }
  Vec grad_x(int i, const Vec& x, const Vec& y) const override {
    return inst_.grad_x_sample(i, x, y);
  }
  Vec grad_y(int i, const Vec& x, const Vec& y) const override {
    return inst_.grad_y_sample(i, x, y);
  }
  Mat grads_x(const std::vector<int>& batch, const Vec& x,
              const Vec& y) const override;
  Mat grads_y(const std::vector<int>& batch, const Vec& x,
              const Vec& y) const override;
  double inner_concavity() const override { return 1.0 / inst_.n; }
  bool has_exact() const override { return true; }
  double phi(const Vec& x) const override { return inst_.phi(x); }
  Vec grad_phi(const Vec& x) const override { return inst_.grad_phi(x); }
  Vec max_y(const Vec& x) const override { return inst_.inner_maximizer(x); }

  const MatrixSensingInstance& instance() const { return inst_; }

 private:
  const MatrixSensingInstance& inst_;
};

// Per-sample gradients of the explicit squared-residual objective
// (1/2) (<A_i, U V^T> - b_i)^2, for methods that minimize the value function
// directly.
class SensingLossOracle : public MinOracle {
 public:
  explicit SensingLossOracle(const MatrixSensingInstance& inst) : inst_(inst) {}
  int n() const override { return inst_.n; }
  int dim() const override { return inst_.dim_x(); }
  Vec grad(int i, const Vec& x) const override;
  Mat grads(const std::vector<int>& batch, const Vec& x) const override;

 private:
  const MatrixSensingInstance& inst_;
};

// Analytic saddle family for oracle tests:
//   F_i(x, y) = (1/2) x' Hx x + x' B y + (1/2) y' Hy y + cx_i' x + cy_i' y
// with Hy negative definite. Exact hooks are available on the unconstrained
// domain; a finite y_radius installs a ball projector for projection tests
// (at the cost of the closed-form hooks).
struct QuadraticSaddleInstance {
  Mat h_x;       // d1 x d1, symmetric
  Mat coupling;  // d1 x d2
  Mat h_y;       // d2 x d2, symmetric negative definite
  Mat shift_x;   // d1 x n per-sample shifts
  Mat shift_y;   // d2 x n
  double y_radius = kInf;

  int n() const { return static_cast<int>(shift_x.cols()); }
  int dim_x() const { return static_cast<int>(h_x.rows()); }
  int dim_y() const { return static_cast<int>(h_y.rows()); }

  Vec mean_shift_x() const { return shift_x.rowwise().mean(); }
  Vec mean_shift_y() const { return shift_y.rowwise().mean(); }

  Vec grad_x_sample(int i, const Vec& x, const Vec& y) const;
  Vec grad_y_sample(int i, const Vec& x, const Vec& y) const;

  bool unconstrained() const { return !(y_radius < kInf); }
  Vec y_star(const Vec& x) const;  // unconstrained maximizer
  double phi(const Vec& x) const;
  Vec grad_phi(const Vec& x) const;
  double f_value(const Vec& x, const Vec& y) const;

  double mu() const;      // -lambda_max(h_y)
  double lip_grad() const;  // operator norm of the joint gradient Jacobian
};

// Pure minimization toy: f(x, y) = (1/2) x' H x - (1/2) y^2 replicated over
// n identical samples, so the value function is the quadratic itself.
QuadraticSaddleInstance quadratic_phi_instance(const Mat& h, int n);

class QuadraticSaddleOracle : public MinimaxOracle {
 public:
  explicit QuadraticSaddleOracle(const QuadraticSaddleInstance& inst)
      : inst_(inst) {}

  int n() const override { return inst_.n(); }
  int dim_x() const override { return inst_.dim_x(); }
  int dim_y() const override { return inst_.dim_y(); }
  Vec grad_x(int i, const Vec& x, const Vec& y) const override {
    return inst_.grad_x_sample(i, x, y);
  }
  Vec grad_y(int i, const Vec& x, const Vec& y) const override {
    return inst_.grad_y_sample(i, x, y);
  }
  Vec project_y(const Vec& y) const override;
  double inner_concavity() const override { return inst_.mu(); }
  bool has_exact() const override { return inst_.unconstrained(); }
  double phi(const Vec& x) const override;
  Vec grad_phi(const Vec& x) const override;
  Vec max_y(const Vec& x) const override;

  const QuadraticSaddleInstance& instance() const { return inst_; }

 private:
  const QuadraticSaddleInstance& inst_;
};

}  // namespace dprgda
