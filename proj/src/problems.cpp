#include "dprgda/problems.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace dprgda {

namespace {

Vec flatten(const Mat& m) {  // column-major
  return Eigen::Map<const Vec>(m.data(), m.size());
}

void check_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) throw ValidationError(std::string(what) + " must be finite");
}

}  // namespace

Vec MatrixSensingInstance::residuals(const Vec& x) const {
  check_finite(x, "x");
  const Mat xmat = u_of(x) * v_of(x).transpose();
  return a_flat * flatten(xmat) - b;
}

double MatrixSensingInstance::phi(const Vec& x) const {
  return residuals(x).squaredNorm() / (2.0 * n);
}

Vec MatrixSensingInstance::grad_phi(const Vec& x) const {
  const Vec r = residuals(x);
  const Vec m_flat = a_flat.transpose() * r / static_cast<double>(n);
  const Eigen::Map<const Mat> m(m_flat.data(), p, q);
  Vec g(dim_x());
  Eigen::Map<Mat>(g.data(), p, rank) = m * v_of(x);
  Eigen::Map<Mat>(g.data() + p * rank, q, rank) = m.transpose() * u_of(x);
  return g;
}

double MatrixSensingInstance::saddle_value(const Vec& x, const Vec& y) const {
  const Vec r = residuals(x);
  return (y.dot(r) - 0.5 * y.squaredNorm()) / static_cast<double>(n);
}

Vec MatrixSensingInstance::grad_x_sample(int i, const Vec& x, const Vec& y) const {
  const Mat& a = sensing[static_cast<std::size_t>(i)];
  Vec g(dim_x());
  Eigen::Map<Mat>(g.data(), p, rank) = y[i] * (a * v_of(x));
  Eigen::Map<Mat>(g.data() + p * rank, q, rank) = y[i] * (a.transpose() * u_of(x));
  return g;
}

Vec MatrixSensingInstance::grad_y_sample(int i, const Vec& x, const Vec& y) const {
  const Mat xmat = u_of(x) * v_of(x).transpose();
  const double r_i = a_flat.row(i).dot(flatten(xmat)) - b[i];
  Vec g = Vec::Zero(n);
  g[i] = r_i - y[i];
  return g;
}

Vec MatrixSensingInstance::init_x(RandomStream& rng) const {
  return rng.gaussian_vec(dim_x(), 0.1);
}

nlohmann::json MatrixSensingInstance::to_json() const {
  nlohmann::json j;
  j["format"] = "matrix-sensing-instance";
  j["p"] = p;
  j["q"] = q;
  j["rank"] = rank;
  j["n"] = n;
  j["sigma_noise"] = sigma_noise;
  j["x_star_scale"] = x_star_scale;
  auto row_major = [](const Mat& m) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    return out;
  };
  nlohmann::json mats = nlohmann::json::array();
  for (const Mat& a : sensing) mats.push_back(row_major(a));
  j["a"] = std::move(mats);
  j["b"] = std::vector<double>(b.data(), b.data() + b.size());
  j["x_star"] = row_major(x_star);
  return j;
}

MatrixSensingInstance MatrixSensingInstance::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "matrix-sensing-instance")
    throw ValidationError("instance file is not a matrix-sensing instance");
  MatrixSensingInstance inst;
  inst.p = j.at("p").get<int>();
  inst.q = j.at("q").get<int>();
  inst.rank = j.at("rank").get<int>();
  inst.n = j.at("n").get<int>();
  inst.sigma_noise = j.at("sigma_noise").get<double>();
  inst.x_star_scale = j.value("x_star_scale", 1.0);
  auto from_row_major = [](const std::vector<double>& v, int rows, int cols) {
    if (static_cast<int>(v.size()) != rows * cols)
      throw ValidationError("matrix payload has wrong size");
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = v[static_cast<std::size_t>(r * cols + c)];
    return m;
  };
  const auto& mats = j.at("a");
  if (static_cast<int>(mats.size()) != inst.n)
    throw ValidationError("instance has wrong number of sensing matrices");
  inst.sensing.reserve(static_cast<std::size_t>(inst.n));
  inst.a_flat.resize(inst.n, inst.p * inst.q);
  for (int i = 0; i < inst.n; ++i) {
    Mat a = from_row_major(mats[static_cast<std::size_t>(i)].get<std::vector<double>>(),
                           inst.p, inst.q);
    inst.a_flat.row(i) = flatten(a).transpose();
    inst.sensing.push_back(std::move(a));
  }
  const auto bvec = j.at("b").get<std::vector<double>>();
  if (static_cast<int>(bvec.size()) != inst.n)
    throw ValidationError("instance has wrong number of measurements");
  inst.b = Eigen::Map<const Vec>(bvec.data(), inst.n);
  inst.x_star = from_row_major(j.at("x_star").get<std::vector<double>>(), inst.p, inst.q);
  return inst;
}

MatrixSensingInstance generate_matrix_sensing(RandomStream& rng, int p, int q,
                                              int rank, int n,
                                              double sigma_noise,
                                              double x_star_scale) {
  if (p < 1 || q < 1 || rank < 1 || n < 1)
    throw ValidationError("generate_matrix_sensing: dimensions must be positive");
  if (rank > std::min(p, q))
    throw ValidationError("generate_matrix_sensing: rank exceeds min(p, q)");
  if (!(sigma_noise >= 0))
    throw ValidationError("generate_matrix_sensing: sigma_noise must be non-negative");
  if (!(x_star_scale > 0))
    throw ValidationError("generate_matrix_sensing: x_star_scale must be positive");

  MatrixSensingInstance inst;
  inst.p = p;
  inst.q = q;
  inst.rank = rank;
  inst.n = n;
  inst.sigma_noise = sigma_noise;
  inst.x_star_scale = x_star_scale;

  Mat u_star(p, rank), v_star(q, rank);
  for (int c = 0; c < rank; ++c)
    for (int r = 0; r < p; ++r) u_star(r, c) = rng.gaussian();
  for (int c = 0; c < rank; ++c)
    for (int r = 0; r < q; ++r) v_star(r, c) = rng.gaussian();
  inst.x_star = u_star * v_star.transpose();
  const double norm = inst.x_star.norm();
  if (norm > 0) inst.x_star *= x_star_scale / norm;

  const double entry_sigma = 1.0 / std::sqrt(static_cast<double>(p) * q);
  inst.sensing.reserve(static_cast<std::size_t>(n));
  inst.a_flat.resize(n, p * q);
  inst.b.resize(n);
  for (int i = 0; i < n; ++i) {
    Mat a(p, q);
    for (int c = 0; c < q; ++c)
      for (int r = 0; r < p; ++r) a(r, c) = entry_sigma * rng.gaussian();
    inst.a_flat.row(i) = flatten(a).transpose();
    inst.b[i] = a.cwiseProduct(inst.x_star).sum() + sigma_noise * rng.gaussian();
    inst.sensing.push_back(std::move(a));
  }
  return inst;
}

Mat MatrixSensingOracle::grads_x(const std::vector<int>& batch, const Vec& x,
                                 const Vec& y) const {
  const auto u = inst_.u_of(x);
  const auto v = inst_.v_of(x);
  Mat out(dim_x(), static_cast<int>(batch.size()));
  const int pr = inst_.p * inst_.rank;
  const int qr = inst_.q * inst_.rank;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const Mat& a = inst_.sensing[static_cast<std::size_t>(batch[j])];
    const double yi = y[batch[j]];
    Eigen::Map<Mat>(out.col(static_cast<int>(j)).data(), inst_.p, inst_.rank) =
        yi * (a * v);
    Eigen::Map<Mat>(out.col(static_cast<int>(j)).data() + pr, inst_.q, inst_.rank) =
        yi * (a.transpose() * u);
    (void)qr;
  }
  return out;
}

Mat MatrixSensingOracle::grads_y(const std::vector<int>& batch, const Vec& x,
                                 const Vec& y) const {
  const Mat xmat = inst_.u_of(x) * inst_.v_of(x).transpose();
  const Vec xflat = Eigen::Map<const Vec>(xmat.data(), xmat.size());
  Mat out = Mat::Zero(dim_y(), static_cast<int>(batch.size()));
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const int i = batch[j];
    const double r_i = inst_.a_flat.row(i).dot(xflat) - inst_.b[i];
    out(i, static_cast<int>(j)) = r_i - y[i];
  }
  return out;
}

Vec SensingLossOracle::grad(int i, const Vec& x) const {
  const auto u = inst_.u_of(x);
  const auto v = inst_.v_of(x);
  const Mat& a = inst_.sensing[static_cast<std::size_t>(i)];
  const double r_i = a.cwiseProduct(u * v.transpose()).sum() - inst_.b[i];
  Vec g(dim());
  Eigen::Map<Mat>(g.data(), inst_.p, inst_.rank) = r_i * (a * v);
  Eigen::Map<Mat>(g.data() + inst_.p * inst_.rank, inst_.q, inst_.rank) =
      r_i * (a.transpose() * u);
  return g;
}

Mat SensingLossOracle::grads(const std::vector<int>& batch, const Vec& x) const {
  const auto u = inst_.u_of(x);
  const auto v = inst_.v_of(x);
  const Mat xmat = u * v.transpose();
  const Vec xflat = Eigen::Map<const Vec>(xmat.data(), xmat.size());
  Mat out(dim(), static_cast<int>(batch.size()));
  const int pr = inst_.p * inst_.rank;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const int i = batch[j];
    const Mat& a = inst_.sensing[static_cast<std::size_t>(i)];
    const double r_i = inst_.a_flat.row(i).dot(xflat) - inst_.b[i];
    Eigen::Map<Mat>(out.col(static_cast<int>(j)).data(), inst_.p, inst_.rank) =
        r_i * (a * v);
    Eigen::Map<Mat>(out.col(static_cast<int>(j)).data() + pr, inst_.q,
                    inst_.rank) = r_i * (a.transpose() * u);
  }
  return out;
}

Vec QuadraticSaddleInstance::grad_x_sample(int i, const Vec& x, const Vec& y) const {
  return h_x * x + coupling * y + shift_x.col(i);
}

Vec QuadraticSaddleInstance::grad_y_sample(int i, const Vec& x, const Vec& y) const {
  return coupling.transpose() * x + h_y * y + shift_y.col(i);
}

Vec QuadraticSaddleInstance::y_star(const Vec& x) const {
  return (-h_y).ldlt().solve(coupling.transpose() * x + mean_shift_y());
}

double QuadraticSaddleInstance::f_value(const Vec& x, const Vec& y) const {
  return 0.5 * x.dot(h_x * x) + x.dot(coupling * y) + 0.5 * y.dot(h_y * y) +
         mean_shift_x().dot(x) + mean_shift_y().dot(y);
}

double QuadraticSaddleInstance::phi(const Vec& x) const {
  return f_value(x, y_star(x));
}

Vec QuadraticSaddleInstance::grad_phi(const Vec& x) const {
  return h_x * x + coupling * y_star(x) + mean_shift_x();
}

double QuadraticSaddleInstance::mu() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(h_y);
  return -es.eigenvalues().maxCoeff();
}

double QuadraticSaddleInstance::lip_grad() const {
  const int d1 = dim_x();
  const int d2 = dim_y();
  Mat jac(d1 + d2, d1 + d2);
  jac.topLeftCorner(d1, d1) = h_x;
  jac.topRightCorner(d1, d2) = coupling;
  jac.bottomLeftCorner(d2, d1) = coupling.transpose();
  jac.bottomRightCorner(d2, d2) = h_y;
  Eigen::SelfAdjointEigenSolver<Mat> es(jac);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

QuadraticSaddleInstance quadratic_phi_instance(const Mat& h, int n) {
  QuadraticSaddleInstance inst;
  const int d1 = static_cast<int>(h.rows());
  inst.h_x = h;
  inst.coupling = Mat::Zero(d1, 1);
  inst.h_y = -Mat::Identity(1, 1);
  inst.shift_x = Mat::Zero(d1, n);
  inst.shift_y = Mat::Zero(1, n);
  return inst;
}

Vec QuadraticSaddleOracle::project_y(const Vec& y) const {
  if (inst_.unconstrained()) return y;
  const double norm = y.norm();
  if (norm <= inst_.y_radius) return y;
  return (inst_.y_radius / norm) * y;
}

double QuadraticSaddleOracle::phi(const Vec& x) const {
  if (!has_exact()) return MinimaxOracle::phi(x);
  return inst_.phi(x);
}

Vec QuadraticSaddleOracle::grad_phi(const Vec& x) const {
  if (!has_exact()) return MinimaxOracle::grad_phi(x);
  return inst_.grad_phi(x);
}

Vec QuadraticSaddleOracle::max_y(const Vec& x) const {
  if (!has_exact()) return MinimaxOracle::max_y(x);
  return inst_.y_star(x);
}

}  // namespace dprgda
