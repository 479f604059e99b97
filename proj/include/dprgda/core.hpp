#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dprgda {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Smoothness and curvature constants of the problem family. Consumed by the
// theory-scaled parameter presets; every field is config-exposed and defaults
// to 1.
struct ProblemConstants {
  double lip_m = 1.0;    // per-sample gradient norm bound
  double lip_l = 1.0;    // gradient Lipschitz constant of per-sample losses
  double mu = 1.0;       // strong-concavity modulus of the inner problem
  double rho = 1.0;      // Hessian Lipschitz constant of per-sample losses
  double sigma = 1.0;    // per-sample gradient deviation bound
  double l_phi = 1.0;    // gradient Lipschitz constant of the value function
  double rho_phi = 1.0;  // Hessian Lipschitz constant of the value function
  double f0 = 1.0;       // initial optimality gap

  double kappa() const { return lip_l / mu; }
};

// Every tunable of the two-loop optimizer.
struct AlgoParams {
  double eta = 0.2;      // normalized descent step length
  double eta_h = 0.5;    // escape-phase step size
  double radius = 0.01;  // perturbation ball radius
  int t_thres = 50;      // escape step budget per episode
  double d_bar = 1e-4;   // average squared-movement threshold
  double alpha = 0.05;   // first-order target, also the escape trigger
  double lambda = 0.8;   // inner ascent step
  int inner_k = 5;       // inner steps per outer iteration
  int period_q = 10;     // estimator refresh period
  int s1 = 200;          // refresh batch size
  int s2 = 50;           // incremental batch size
  int big_t = 400;       // outer iteration budget
  double c_v = 1.0;      // clip threshold for refresh queries
  double c_u = 1.0;      // clip threshold for incremental queries
  ProblemConstants constants;

  // Throws ValidationError on any violated constraint. n is the dataset size.
  void validate(int n) const;
};

// Parameter presets derived from the theory-scaled choices for finite-sum and
// population objectives. Universal constants are taken as 1; callers override
// individual fields afterwards as needed.
AlgoParams erm_preset(int n, int d, double eps, double delta,
                      const ProblemConstants& c = {}, double delta1 = 0.01,
                      double delta2 = 0.01);
AlgoParams population_preset(int n, int d, double eps, double delta,
                             const ProblemConstants& c = {},
                             double delta1 = 0.01, double delta2 = 0.01);

// Privacy target plus a ledger of the per-query budgets actually allocated.
struct PrivacyBudget {
  double epsilon = kInf;
  double delta = 0.0;

  struct LedgerEntry {
    std::string query_class;
    double eps_per_query = 0.0;
    double delta_per_query = 0.0;
    std::size_t count = 0;
  };
  std::vector<LedgerEntry> ledger;

  bool disabled() const { return !(epsilon < kInf); }

  static PrivacyBudget none() { return {}; }
  static PrivacyBudget of(double eps, double delta);
};

// Deterministic stream over a fixed 64-bit engine. Gaussians use Box-Muller
// directly so each draw consumes exactly two engine words; this keeps seeded
// runs bit-identical across standard library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();  // [0, 1)
  double gaussian();   // standard normal
  Vec gaussian_vec(int dim, double sigma);

  // k distinct indices from {0, ..., n-1}. k == n returns the identity
  // permutation without consuming randomness.
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  std::mt19937_64 engine_;
};

// Independent named streams derived from a single seed. Equal seeds plus
// equal call sequences give bit-identical outputs.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  RandomStream& subsampling() { return subsampling_; }
  RandomStream& noise() { return noise_; }
  RandomStream& perturbation() { return perturbation_; }
  RandomStream& baseline() { return baseline_; }

 private:
  std::uint64_t seed_;
  RandomStream subsampling_;
  RandomStream noise_;
  RandomStream perturbation_;
  RandomStream baseline_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Uniform draw from the centered ball of the given radius. Direction from a
// normalized Gaussian, length via the inverse-CDF radial scaling U^(1/dim).
Vec sample_uniform_ball(RandomStream& rng, int dim, double radius);

// Per-sample gradient access to the saddle objective f(x, y) plus the
// projector onto the y-domain. This is the only surface that touches data.
// The exact hooks (phi, grad_phi, max_y) are evaluation-only instruments and
// never participate in private updates.
class MinimaxOracle {
 public:
  virtual ~MinimaxOracle() = default;

  virtual int n() const = 0;
  virtual int dim_x() const = 0;
  virtual int dim_y() const = 0;

  virtual Vec grad_x(int i, const Vec& x, const Vec& y) const = 0;
  virtual Vec grad_y(int i, const Vec& x, const Vec& y) const = 0;

  // Columns are per-sample gradients for the given batch. Defaults loop over
  // grad_x / grad_y; implementations override to share per-point work.
  virtual Mat grads_x(const std::vector<int>& batch, const Vec& x,
                      const Vec& y) const;
  virtual Mat grads_y(const std::vector<int>& batch, const Vec& x,
                      const Vec& y) const;

  // Projection onto the (convex) y-domain. Identity for the unconstrained
  // default. Must be idempotent and non-expansive.
  virtual Vec project_y(const Vec& y) const { return y; }

  // Strong-concavity modulus of y -> f(x, y). A structural constant of the
  // objective, not a data-dependent quantity.
  virtual double inner_concavity() const = 0;

  virtual bool has_exact() const { return false; }
  virtual double phi(const Vec& x) const;
  virtual Vec grad_phi(const Vec& x) const;
  virtual Vec max_y(const Vec& x) const;

  Vec mean_grad_x(const std::vector<int>& batch, const Vec& x,
                  const Vec& y) const;
  Vec mean_grad_y(const std::vector<int>& batch, const Vec& x,
                  const Vec& y) const;
  std::vector<int> full_batch() const;
};

// Per-sample gradient access for plain minimization of an explicit objective.
class MinOracle {
 public:
  virtual ~MinOracle() = default;
  virtual int n() const = 0;
  virtual int dim() const = 0;
  virtual Vec grad(int i, const Vec& x) const = 0;
  virtual Mat grads(const std::vector<int>& batch, const Vec& x) const;
  Vec mean_grad(const std::vector<int>& batch, const Vec& x) const;
};

}  // namespace dprgda
