#include "spvarinf/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace spvarinf {

std::vector<std::string> default_names(int N) {
  std::vector<std::string> names(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) names[static_cast<size_t>(i)] = "y" + std::to_string(i + 1);
  return names;
}

static double sufficient_lhs_scaled(const CoefSet& coefs, const ModelOrders& orders,
                                    const Omega& omega, double c) {
  CoefSet scaled = coefs;
  for (auto& G : scaled.mats) G *= c;
  SpvarModel m{orders, omega, scaled, {}};
  double lhs = 0.0;
  stationarity_sufficient(m, &lhs, nullptr);
  return lhs;
}

CoefSet rescale_for_stationarity(const CoefSet& coefs, const ModelOrders& orders,
                                 const Omega& omega, double target, bool* all_zero) {
  if (!(target > 0.0 && target < 1.0))
    throw std::invalid_argument("stationarity target must lie in (0,1)");
  if (all_zero) *all_zero = false;
  bool zero = true;
  for (const auto& G : coefs.mats)
    if (G.size() > 0 && G.cwiseAbs().maxCoeff() > 0.0) zero = false;
  if (coefs.mats.empty() || zero) {
    if (all_zero) *all_zero = true;
    return coefs;
  }

  double lo = 1e-8, hi = 1e8;
  if (sufficient_lhs_scaled(coefs, orders, omega, hi) < target)
    throw std::runtime_error(
        "cannot rescale: criterion stays below target (all spectral radii zero)");
  if (sufficient_lhs_scaled(coefs, orders, omega, lo) > target)
    throw std::runtime_error("cannot rescale: criterion exceeds target at c = 1e-8");
  double c = 1.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, hi); ++it) {
    c = 0.5 * (lo + hi);
    const double f = sufficient_lhs_scaled(coefs, orders, omega, c);
    if (std::abs(f - target) <= 1e-13) break;
    (f < target ? lo : hi) = c;
  }
  CoefSet out = coefs;
  for (auto& G : out.mats) G *= c;
  return out;
}

CoefSet gen_sparse_coefs(const DgpSpec& spec, Rng& rng) {
  const int N = spec.N;
  const int d = spec.orders.d();
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (!spec.total_mode && (spec.nonzeros_per_row < 0 || spec.nonzeros_per_row > N))
    throw std::invalid_argument("nonzeros_per_row must lie in [0, N]");
  if (spec.total_mode && (spec.total_nonzeros < 0 || spec.total_nonzeros > N * N))
    throw std::invalid_argument("total_nonzeros must lie in [0, N^2]");

  std::uniform_real_distribution<double> val(spec.coef_min, spec.coef_max);
  CoefSet coefs;
  coefs.N = N;
  for (int k = 0; k < d; ++k) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(N, N);
    if (!spec.total_mode) {
      std::vector<int> cols(static_cast<size_t>(N));
      for (int i = 0; i < N; ++i) {
        std::iota(cols.begin(), cols.end(), 0);
        for (int t = 0; t < spec.nonzeros_per_row; ++t) {
          std::uniform_int_distribution<int> pick(t, N - 1);
          std::swap(cols[static_cast<size_t>(t)], cols[static_cast<size_t>(pick(rng))]);
        }
        std::sort(cols.begin(), cols.begin() + spec.nonzeros_per_row);
        for (int t = 0; t < spec.nonzeros_per_row; ++t)
          G(i, cols[static_cast<size_t>(t)]) = val(rng);
      }
    } else {
      std::vector<int> cells(static_cast<size_t>(N) * static_cast<size_t>(N));
      std::iota(cells.begin(), cells.end(), 0);
      for (int t = 0; t < spec.total_nonzeros; ++t) {
        std::uniform_int_distribution<int> pick(t, N * N - 1);
        std::swap(cells[static_cast<size_t>(t)], cells[static_cast<size_t>(pick(rng))]);
      }
      std::sort(cells.begin(), cells.begin() + spec.total_nonzeros);
      for (int t = 0; t < spec.total_nonzeros; ++t) {
        const int cell = cells[static_cast<size_t>(t)];
        G(cell / N, cell % N) = val(rng);
      }
    }
    coefs.mats.push_back(std::move(G));
  }
  return rescale_for_stationarity(coefs, spec.orders, spec.omega,
                                  spec.stationarity_target);
}

SeriesPanel simulate_spvar(const SpvarModel& model, int T, int burn_in,
                           double noise_sd, Rng& rng, bool force) {
  validate(model);
  if (T < 1 || burn_in < 0) throw std::invalid_argument("need T >= 1, burn_in >= 0");
  if (!force && !stationarity_sufficient(model))
    throw std::runtime_error(
        "model fails the sufficient stationarity condition (pass force to simulate anyway)");

  const int N = model.coefs.N;
  const auto& o = model.orders;
  const int M = burn_in + T;
  Eigen::MatrixXd Y(M, N);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<Eigen::VectorXd> u(static_cast<size_t>(o.r),
                                 Eigen::VectorXd::Zero(N));
  std::vector<Eigen::VectorXcd> c(static_cast<size_t>(o.s),
                                  Eigen::VectorXcd::Zero(N));
  Eigen::VectorXd y_t(N);
  for (int t = 1; t <= M; ++t) {
    y_t.setZero();
    for (int k = 1; k <= o.p; ++k)
      if (t - k >= 1)
        y_t.noalias() +=
            model.coefs.mats[static_cast<size_t>(k - 1)] * Y.row(t - k - 1).transpose();
    for (int j = 0; j < o.r; ++j)
      y_t.noalias() += model.coefs.mats[static_cast<size_t>(o.p + j)] * u[static_cast<size_t>(j)];
    for (int m = 0; m < o.s; ++m) {
      y_t.noalias() += model.coefs.mats[static_cast<size_t>(o.p + o.r + 2 * m)] *
                       c[static_cast<size_t>(m)].real();
      y_t.noalias() += model.coefs.mats[static_cast<size_t>(o.p + o.r + 2 * m + 1)] *
                       c[static_cast<size_t>(m)].imag();
    }
    for (int i = 0; i < N; ++i) y_t(i) += noise_sd * normal(rng);
    Y.row(t - 1) = y_t.transpose();

    // push y_{t-p} into the decay accumulators for step t+1
    Eigen::VectorXd feed = Eigen::VectorXd::Zero(N);
    if (t - o.p >= 1) feed = Y.row(t - o.p - 1).transpose();
    for (int j = 0; j < o.r; ++j)
      u[static_cast<size_t>(j)] =
          model.omega.lambdas[static_cast<size_t>(j)] * (u[static_cast<size_t>(j)] + feed);
    for (int m = 0; m < o.s; ++m) {
      const double gam = model.omega.etas[static_cast<size_t>(m)][0];
      const double the = model.omega.etas[static_cast<size_t>(m)][1];
      const std::complex<double> a = std::polar(gam, the);
      c[static_cast<size_t>(m)] =
          a * (c[static_cast<size_t>(m)] + feed.cast<std::complex<double>>());
    }
  }

  SeriesPanel panel;
  panel.data = Y.bottomRows(T);
  panel.names = model.names.size() == static_cast<size_t>(N) ? model.names
                                                             : default_names(N);
  return panel;
}

Eigen::MatrixXd varma11_ar_coef(const Eigen::MatrixXd& Phi,
                                const Eigen::MatrixXd& Theta, int h) {
  if (h < 1) throw std::invalid_argument("h must be >= 1");
  Eigen::MatrixXd A = Phi - Theta;
  for (int i = 1; i < h; ++i) A = Theta * A;
  return A;
}

Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

std::pair<SpvarModel, Eigen::MatrixXd> varma11_from_jordan(
    const Eigen::MatrixXd& Phi, const Omega& omega, const Eigen::MatrixXd& B0) {
  const int N = static_cast<int>(Phi.rows());
  if (Phi.cols() != N) throw std::invalid_argument("Phi must be square");
  const int r = static_cast<int>(omega.lambdas.size());
  const int s = static_cast<int>(omega.etas.size());
  const int nj = r + 2 * s;
  if (nj > N) throw std::invalid_argument("r + 2s exceeds the dimension");
  const int b = static_cast<int>(B0.rows());
  if (B0.cols() != b || b < nj || b > N)
    throw std::invalid_argument("B0 must be square with r+2s <= size <= N");
  for (int j = 0; j < r; ++j) {
    const double lam = omega.lambdas[static_cast<size_t>(j)];
    if (lam == 0.0 || std::abs(lam) >= 1.0)
      throw std::invalid_argument("lambda_" + std::to_string(j + 1) +
                                  " must be nonzero with |lambda| < 1");
    for (int i = 0; i < j; ++i)
      if (omega.lambdas[static_cast<size_t>(i)] == lam)
        throw std::invalid_argument("eigenvalues must be distinct");
  }
  for (int m = 0; m < s; ++m) {
    const double gam = omega.etas[static_cast<size_t>(m)][0];
    const double the = omega.etas[static_cast<size_t>(m)][1];
    if (gam <= 0.0 || gam >= 1.0 || the <= 0.0 || the >= M_PI)
      throw std::invalid_argument("eta_" + std::to_string(m + 1) +
                                  " must satisfy 0 < gamma < 1, 0 < theta < pi");
    for (int i = 0; i < m; ++i)
      if (omega.etas[static_cast<size_t>(i)] == omega.etas[static_cast<size_t>(m)])
        throw std::invalid_argument("eigenvalues must be distinct");
  }

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
  for (int j = 0; j < r; ++j) J(j, j) = omega.lambdas[static_cast<size_t>(j)];
  for (int m = 0; m < s; ++m) {
    const double gam = omega.etas[static_cast<size_t>(m)][0];
    const double the = omega.etas[static_cast<size_t>(m)][1];
    const int o = r + 2 * m;
    J(o, o) = gam * std::cos(the);
    J(o, o + 1) = gam * std::sin(the);
    J(o + 1, o) = -gam * std::sin(the);
    J(o + 1, o + 1) = gam * std::cos(the);
  }

  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(N, N);
  B.topLeftCorner(b, b) = B0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  Eigen::MatrixXd Theta = B * J * lu.solve(Eigen::MatrixXd::Identity(N, N));
  Eigen::MatrixXd G1 = Phi - Theta;
  Eigen::MatrixXd Bminus = lu.solve(G1);  // B^{-1} (Phi - Theta)

  SpvarModel model;
  model.orders = ModelOrders{1, r, s};
  model.omega = omega;
  model.coefs.N = N;
  model.coefs.mats.push_back(G1);
  for (int j = 0; j < r; ++j)
    model.coefs.mats.emplace_back(B.col(j) * Bminus.row(j));
  for (int m = 0; m < s; ++m) {
    const int o = r + 2 * m;
    Eigen::MatrixXd Gcos = B.col(o) * Bminus.row(o) + B.col(o + 1) * Bminus.row(o + 1);
    Eigen::MatrixXd Gsin = B.col(o) * Bminus.row(o + 1) - B.col(o + 1) * Bminus.row(o);
    model.coefs.mats.push_back(std::move(Gcos));
    model.coefs.mats.push_back(std::move(Gsin));
  }
  model.names = default_names(N);
  validate(model);
  return {model, Theta};
}

SeriesPanel simulate_varma11(const Eigen::MatrixXd& Phi,
                             const Eigen::MatrixXd& Theta, int T, int burn_in,
                             double noise_sd, Rng& rng) {
  const int N = static_cast<int>(Phi.rows());
  if (Phi.cols() != N || Theta.rows() != N || Theta.cols() != N)
    throw std::invalid_argument("Phi and Theta must be square of equal size");
  if (T < 1 || burn_in < 0) throw std::invalid_argument("need T >= 1, burn_in >= 0");
  if (spectral_radius(Phi) >= 1.0)
    throw std::invalid_argument("Phi is not stationary (spectral radius >= 1)");
  if (spectral_radius(Theta) >= 1.0)
    throw std::invalid_argument("Theta is not invertible (spectral radius >= 1)");

  const int M = burn_in + T;
  Eigen::MatrixXd Y(M, N);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd eps_prev = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd y_prev = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd eps(N);
  for (int t = 0; t < M; ++t) {
    for (int i = 0; i < N; ++i) eps(i) = noise_sd * normal(rng);
    Eigen::VectorXd y = Phi * y_prev + eps - Theta * eps_prev;
    Y.row(t) = y.transpose();
    y_prev = y;
    eps_prev = eps;
  }
  SeriesPanel panel;
  panel.data = Y.bottomRows(T);
  panel.names = default_names(N);
  return panel;
}

}  // namespace spvarinf
