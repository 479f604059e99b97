#include "dprgda/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dprgda {

namespace {

constexpr std::uint64_t kSubsamplingSalt = 0x9d2c5680aull;
constexpr std::uint64_t kNoiseSalt = 0x38b34c1fbull;
constexpr std::uint64_t kPerturbationSalt = 0x6a09e667f3ull;
constexpr std::uint64_t kBaselineSalt = 0xbb67ae8584ull;

void require(bool cond, const char* msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

void AlgoParams::validate(int n) const {
  require(n >= 1, "dataset must be non-empty");
  require(eta > 0, "eta must be positive");
  require(eta_h > 0, "eta_h must be positive");
  require(radius >= 0, "perturbation radius must be non-negative");
  require(t_thres >= 1, "t_thres must be at least 1");
  require(d_bar > 0, "d_bar must be positive");
  require(alpha > 0, "alpha must be positive");
  require(lambda > 0, "lambda must be positive");
  require(inner_k >= 1, "inner_k must be at least 1");
  require(period_q >= 1, "period_q must be at least 1");
  require(s1 >= 1 && s1 <= n, "s1 must lie in [1, n]");
  require(s2 >= 1 && s2 <= n, "s2 must lie in [1, n]");
  require(big_t >= 0, "big_t must be non-negative");
  require(c_v > 0, "c_v must be positive");
  require(c_u > 0, "c_u must be positive");
}

PrivacyBudget PrivacyBudget::of(double eps, double delta) {
  if (!(eps > 0)) throw ValidationError("epsilon must be positive");
  if (!(delta > 0 && delta < 1)) throw ValidationError("delta must lie in (0, 1)");
  PrivacyBudget b;
  b.epsilon = eps;
  b.delta = delta;
  return b;
}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  // Box-Muller, cosine branch. u1 is pushed away from zero so the log is
  // finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Vec RandomStream::gaussian_vec(int dim, double sigma) {
  Vec out(dim);
  for (int i = 0; i < dim; ++i) out[i] = sigma * gaussian();
  return out;
}

std::vector<int> RandomStream::sample_without_replacement(int n, int k) {
  require(n >= 0 && k >= 0 && k <= n, "batch size must lie in [0, n]");
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  if (k == n) return idx;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(next_u64() % static_cast<std::uint64_t>(n - i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

RandomSource::RandomSource(std::uint64_t seed)
    : seed_(seed),
      subsampling_(splitmix64(seed ^ kSubsamplingSalt)),
      noise_(splitmix64(seed ^ kNoiseSalt)),
      perturbation_(splitmix64(seed ^ kPerturbationSalt)),
      baseline_(splitmix64(seed ^ kBaselineSalt)) {}

Vec sample_uniform_ball(RandomStream& rng, int dim, double radius) {
  require(dim >= 1, "ball dimension must be at least 1");
  require(radius >= 0, "ball radius must be non-negative");
  if (radius == 0.0) return Vec::Zero(dim);
  Vec dir = rng.gaussian_vec(dim, 1.0);
  const double norm = dir.norm();
  if (norm == 0.0) return Vec::Zero(dim);
  const double len = radius * std::pow(rng.uniform01(), 1.0 / dim);
  return (len / norm) * dir;
}

Mat MinimaxOracle::grads_x(const std::vector<int>& batch, const Vec& x,
                           const Vec& y) const {
  Mat out(dim_x(), static_cast<int>(batch.size()));
  for (std::size_t j = 0; j < batch.size(); ++j)
    out.col(static_cast<int>(j)) = grad_x(batch[j], x, y);
  return out;
}

Mat MinimaxOracle::grads_y(const std::vector<int>& batch, const Vec& x,
                           const Vec& y) const {
  Mat out(dim_y(), static_cast<int>(batch.size()));
  for (std::size_t j = 0; j < batch.size(); ++j)
    out.col(static_cast<int>(j)) = grad_y(batch[j], x, y);
  return out;
}

double MinimaxOracle::phi(const Vec&) const {
  throw ValidationError("oracle does not provide exact evaluation hooks");
}

Vec MinimaxOracle::grad_phi(const Vec&) const {
  throw ValidationError("oracle does not provide exact evaluation hooks");
}

Vec MinimaxOracle::max_y(const Vec&) const {
  throw ValidationError("oracle does not provide exact evaluation hooks");
}

Vec MinimaxOracle::mean_grad_x(const std::vector<int>& batch, const Vec& x,
                               const Vec& y) const {
  require(!batch.empty(), "batch must be non-empty");
  return grads_x(batch, x, y).rowwise().mean();
}

Vec MinimaxOracle::mean_grad_y(const std::vector<int>& batch, const Vec& x,
                               const Vec& y) const {
  require(!batch.empty(), "batch must be non-empty");
  return grads_y(batch, x, y).rowwise().mean();
}

std::vector<int> MinimaxOracle::full_batch() const {
  std::vector<int> idx(static_cast<std::size_t>(n()));
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

Mat MinOracle::grads(const std::vector<int>& batch, const Vec& x) const {
  Mat out(dim(), static_cast<int>(batch.size()));
  for (std::size_t j = 0; j < batch.size(); ++j)
    out.col(static_cast<int>(j)) = grad(batch[j], x);
  return out;
}

Vec MinOracle::mean_grad(const std::vector<int>& batch, const Vec& x) const {
  require(!batch.empty(), "batch must be non-empty");
  return grads(batch, x).rowwise().mean();
}

namespace {

// Shared escape-phase geometry used by both presets: follows the
// perturbed-descent scaling with all universal constants set to 1.
void fill_escape_geometry(AlgoParams& p, int d, double delta2,
                          const ProblemConstants& c) {
  const double alpha_h = std::sqrt(c.rho_phi * p.alpha);
  const double big_r = 1.0 / (2.0 * c.l_phi * p.eta_h);
  double r = std::min(big_r, c.l_phi * p.eta_h * alpha_h / c.rho_phi);
  if (!(r > 0) || !std::isfinite(r)) r = big_r;
  double r0 = std::min(r, delta2 * r / std::sqrt(static_cast<double>(d)));
  if (!(r0 > 0)) r0 = r;
  const double log_arg =
      std::max(2.0, p.eta_h * alpha_h * c.l_phi / (c.rho_phi * r0));
  p.radius = r;
  p.t_thres = std::max(1, static_cast<int>(std::ceil(2.0 * std::log(log_arg) / p.eta_h)));
  p.d_bar = (big_r * big_r) / (static_cast<double>(p.t_thres) * p.t_thres);
}

}  // namespace

AlgoParams erm_preset(int n, int d, double eps, double delta,
                      const ProblemConstants& c, double /*delta1*/,
                      double delta2) {
  require(n >= 1 && d >= 1, "n and d must be positive");
  require(eps > 0 && delta > 0 && delta < 1, "invalid privacy target");
  const double log_delta = std::log(1.0 / delta);
  const double eps_bar = std::sqrt(d * log_delta) / (n * eps);

  AlgoParams p;
  p.constants = c;
  p.eta = 1.0 / (2.0 * c.lip_l);
  p.eta_h = p.eta;
  p.lambda = 1.0 / (6.0 * c.lip_l);
  p.inner_k = 1;
  p.alpha = std::pow(eps_bar, 2.0 / 3.0);
  p.s1 = n;

  const double t_a =
      std::pow(std::pow(c.lip_l * c.f0, 0.25) / (std::sqrt(c.lip_m) * eps_bar),
               4.0 / 3.0);
  const double t_b = n * eps / (std::sqrt(static_cast<double>(d)) * log_delta);
  p.big_t = std::max(1, static_cast<int>(std::ceil(std::max(t_a, t_b))));

  const double q_raw = (static_cast<double>(n) * n * eps * eps) /
                       (c.lip_l * c.lip_l * p.big_t * d * log_delta);
  p.period_q = std::max(1, static_cast<int>(std::floor(q_raw)));
  if (p.period_q > p.big_t) p.period_q = p.big_t;

  const double s2_a = std::pow(
      c.lip_m * n * eps / std::sqrt(c.f0 * c.lip_l * d * log_delta), 2.0 / 3.0);
  const double s2_b = std::pow(c.lip_m * n * d * log_delta, 1.0 / 3.0) /
                      std::pow(c.lip_l * c.f0, 1.0 / 6.0);
  p.s2 = std::min(n, std::max(1, static_cast<int>(std::ceil(std::max(s2_a, s2_b)))));

  p.c_v = c.lip_m;
  p.c_u = c.lip_m;
  fill_escape_geometry(p, d, delta2, c);
  return p;
}

AlgoParams population_preset(int n, int d, double eps, double delta,
                             const ProblemConstants& c, double delta1,
                             double delta2) {
  require(n >= 1 && d >= 1, "n and d must be positive");
  require(eps > 0 && delta > 0 && delta < 1, "invalid privacy target");
  const double log_delta = std::log(1.0 / delta);
  const double eps_bar = std::sqrt(d * log_delta) / (n * eps);
  const double inv_eps_bar = 1.0 / eps_bar;
  const double log_d1 = std::log(4.0 / delta1);

  AlgoParams p;
  p.constants = c;
  p.lambda = 1.0 / (6.0 * c.lip_l);
  p.inner_k = std::max(1, static_cast<int>(std::ceil(c.kappa())));
  p.alpha = std::pow(n, -1.0 / 3.0) + std::sqrt(eps_bar);
  p.eta = std::sqrt(eps_bar) / (c.lip_l * log_d1);
  p.eta_h = p.eta;
  p.s1 = n;
  p.s2 = std::min(
      n, std::max(1, static_cast<int>(std::ceil(log_d1 * log_d1 * c.kappa() *
                                                std::pow(inv_eps_bar, 1.0 / 3.0)))));
  p.period_q = std::max(1, static_cast<int>(std::ceil(std::pow(inv_eps_bar, 1.0 / 3.0))));
  p.big_t = std::max(p.period_q,
                     static_cast<int>(std::ceil(std::pow(inv_eps_bar, 2.0 / 3.0))));
  p.c_v = c.lip_m;
  p.c_u = c.lip_m;
  fill_escape_geometry(p, d, delta2, c);
  // The population analysis caps per-episode average movement by the privacy
  // scale as well.
  p.d_bar = std::min(p.d_bar, eps_bar / (c.lip_l * c.lip_l * log_d1 * log_d1));
  return p;
}

}  // namespace dprgda
