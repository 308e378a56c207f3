#include "spvarinf/loss.hpp"

#include <complex>
#include <stdexcept>

namespace spvarinf {

static void fill_decay_blocks(PredictorPanel& panel, const Eigen::MatrixXd& Y,
                              bool with_derivatives) {
  const ModelOrders& orders = panel.orders;
  const Omega& omega = panel.omega;
  const int T = panel.T;
  const int N = panel.N;
  const int p = orders.p;
  for (int j = 0; j < orders.r; ++j) {
    const double lam = omega.lambdas[static_cast<size_t>(j)];
    const int col = (p + j) * N;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(N);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(N);
    for (int t = 1; t <= T; ++t) {
      panel.Z.block(t - 1, col, 1, N) = u.transpose();
      if (with_derivatives)
        panel.dlam[static_cast<size_t>(j)].row(t - 1) = v.transpose();
      if (t - p >= 1) u += Y.row(t - p - 1).transpose();  // u now holds u_t + y_{t-p}
      if (with_derivatives) v = u + lam * v;
      u *= lam;
    }
  }
  for (int m = 0; m < orders.s; ++m) {
    const double gam = omega.etas[static_cast<size_t>(m)][0];
    const double the = omega.etas[static_cast<size_t>(m)][1];
    const std::complex<double> a = std::polar(gam, the);
    const std::complex<double> eit = std::polar(1.0, the);
    const std::complex<double> ia = a * std::complex<double>(0.0, 1.0);
    const int ccol = (p + orders.r + 2 * m) * N;
    const int scol = ccol + N;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(N);
    Eigen::VectorXcd dg = Eigen::VectorXcd::Zero(N);
    Eigen::VectorXcd dt = Eigen::VectorXcd::Zero(N);
    for (int t = 1; t <= T; ++t) {
      panel.Z.block(t - 1, ccol, 1, N) = c.real().transpose();
      panel.Z.block(t - 1, scol, 1, N) = c.imag().transpose();
      if (with_derivatives) {
        panel.dcos_dgam[static_cast<size_t>(m)].row(t - 1) = dg.real().transpose();
        panel.dsin_dgam[static_cast<size_t>(m)].row(t - 1) = dg.imag().transpose();
        panel.dcos_dthe[static_cast<size_t>(m)].row(t - 1) = dt.real().transpose();
        panel.dsin_dthe[static_cast<size_t>(m)].row(t - 1) = dt.imag().transpose();
      }
      if (t - p >= 1)
        c += Y.row(t - p - 1).transpose().cast<std::complex<double>>();
      if (with_derivatives) {  // c currently holds c_t + y_{t-p}
        dg = eit * c + a * dg;
        dt = ia * c + a * dt;
      }
      c *= a;
    }
  }
}

static void fill_predictors(PredictorPanel& panel, const Eigen::MatrixXd& Y,
                            const ModelOrders& orders, const Omega& omega,
                            bool with_derivatives) {
  const int T = static_cast<int>(Y.rows());
  const int N = static_cast<int>(Y.cols());
  const int d = orders.d();
  panel.orders = orders;
  panel.omega = omega;
  panel.T = T;
  panel.N = N;
  panel.Z.setZero(T, N * d);
  panel.has_derivatives = with_derivatives;
  panel.dlam.assign(static_cast<size_t>(with_derivatives ? orders.r : 0),
                    Eigen::MatrixXd::Zero(T, N));
  const size_t sder = static_cast<size_t>(with_derivatives ? orders.s : 0);
  panel.dcos_dgam.assign(sder, Eigen::MatrixXd::Zero(T, N));
  panel.dsin_dgam.assign(sder, Eigen::MatrixXd::Zero(T, N));
  panel.dcos_dthe.assign(sder, Eigen::MatrixXd::Zero(T, N));
  panel.dsin_dthe.assign(sder, Eigen::MatrixXd::Zero(T, N));

  for (int k = 1; k <= orders.p; ++k)
    if (T > k) panel.Z.block(k, (k - 1) * N, T - k, N) = Y.topRows(T - k);
  fill_decay_blocks(panel, Y, with_derivatives);
}

void update_decay_blocks(PredictorPanel& panel, const Eigen::MatrixXd& Y,
                         const Omega& omega, bool with_derivatives) {
  if (panel.T != Y.rows() || panel.N != Y.cols())
    throw std::logic_error("panel shape does not match the data");
  panel.omega = omega;
  if (with_derivatives && !panel.has_derivatives) {
    panel.dlam.assign(static_cast<size_t>(panel.orders.r),
                      Eigen::MatrixXd::Zero(panel.T, panel.N));
    const size_t sder = static_cast<size_t>(panel.orders.s);
    panel.dcos_dgam.assign(sder, Eigen::MatrixXd::Zero(panel.T, panel.N));
    panel.dsin_dgam.assign(sder, Eigen::MatrixXd::Zero(panel.T, panel.N));
    panel.dcos_dthe.assign(sder, Eigen::MatrixXd::Zero(panel.T, panel.N));
    panel.dsin_dthe.assign(sder, Eigen::MatrixXd::Zero(panel.T, panel.N));
  }
  // derivatives not refreshed here are stale for the new omega
  panel.has_derivatives = with_derivatives;
  fill_decay_blocks(panel, Y, with_derivatives);
}

PredictorPanel build_predictors(const Eigen::MatrixXd& Y,
                                const ModelOrders& orders, const Omega& omega,
                                bool with_derivatives) {
  if (static_cast<int>(omega.lambdas.size()) != orders.r ||
      static_cast<int>(omega.etas.size()) != orders.s)
    throw std::invalid_argument("omega does not match the orders");
  PredictorPanel panel;
  fill_predictors(panel, Y, orders, omega, with_derivatives);
  return panel;
}

PredictorPanel build_predictors_bruteforce(const Eigen::MatrixXd& Y,
                                           const ModelOrders& orders,
                                           const Omega& omega) {
  const int T = static_cast<int>(Y.rows());
  const int N = static_cast<int>(Y.cols());
  const int d = orders.d();
  PredictorPanel panel;
  panel.orders = orders;
  panel.omega = omega;
  panel.T = T;
  panel.N = N;
  panel.Z.setZero(T, N * d);
  panel.has_derivatives = false;
  for (int t = 1; t <= T; ++t)
    for (int k = 1; k <= d; ++k)
      for (int h = 1; h <= t - 1; ++h) {
        const double w = weight(h, k, orders, omega);
        if (w != 0.0)
          panel.Z.block(t - 1, (k - 1) * N, 1, N) += w * Y.row(t - h - 1);
      }
  return panel;
}

Eigen::RowVectorXd next_predictor_row(const Eigen::MatrixXd& Y,
                                      const ModelOrders& orders,
                                      const Omega& omega) {
  const int T = static_cast<int>(Y.rows());
  const int N = static_cast<int>(Y.cols());
  const int p = orders.p;
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(N * orders.d());
  for (int k = 1; k <= p; ++k)
    if (T + 1 - k >= 1) row.segment((k - 1) * N, N) = Y.row(T - k);
  for (int j = 0; j < orders.r; ++j) {
    const double lam = omega.lambdas[static_cast<size_t>(j)];
    Eigen::VectorXd u = Eigen::VectorXd::Zero(N);
    for (int t = 1; t <= T; ++t) {
      if (t - p >= 1)
        u = lam * (u + Y.row(t - p - 1).transpose());
      else
        u = lam * u;
    }
    row.segment((p + j) * N, N) = u.transpose();
  }
  for (int m = 0; m < orders.s; ++m) {
    const double gam = omega.etas[static_cast<size_t>(m)][0];
    const double the = omega.etas[static_cast<size_t>(m)][1];
    const std::complex<double> a = std::polar(gam, the);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(N);
    for (int t = 1; t <= T; ++t) {
      if (t - p >= 1)
        c = a * (c + Y.row(t - p - 1).transpose().cast<std::complex<double>>());
      else
        c = a * c;
    }
    row.segment((p + orders.r + 2 * m) * N, N) = c.real().transpose();
    row.segment((p + orders.r + 2 * m + 1) * N, N) = c.imag().transpose();
  }
  return row;
}

Eigen::MatrixXd concat_coefs(const CoefSet& coefs) {
  const int N = coefs.N;
  const int d = static_cast<int>(coefs.mats.size());
  Eigen::MatrixXd G(N, N * d);
  for (int k = 0; k < d; ++k) G.middleCols(k * N, N) = coefs.mats[static_cast<size_t>(k)];
  return G;
}

CoefSet split_coefs(const Eigen::MatrixXd& Gcat, int N) {
  if (Gcat.cols() % N != 0)
    throw std::invalid_argument("concatenated coefficient width is not a multiple of N");
  CoefSet out;
  out.N = N;
  const int d = static_cast<int>(Gcat.cols()) / N;
  for (int k = 0; k < d; ++k) out.mats.push_back(Gcat.middleCols(k * N, N));
  return out;
}

double loss_value(const Eigen::MatrixXd& Yresp, const PredictorPanel& panel,
                  const Eigen::MatrixXd& Gcat) {
  const double T = static_cast<double>(panel.T);
  return (Yresp - panel.Z * Gcat.transpose()).squaredNorm() / T;
}

double loss_value(const Eigen::MatrixXd& Yresp, const PredictorPanel& panel,
                  const CoefSet& coefs) {
  return loss_value(Yresp, panel, concat_coefs(coefs));
}

Eigen::MatrixXd grad_g(const Eigen::MatrixXd& Yresp, const PredictorPanel& panel,
                       const Eigen::MatrixXd& Gcat) {
  return grad_g_resid(Yresp - panel.Z * Gcat.transpose(), panel);
}

Eigen::MatrixXd grad_g_resid(const Eigen::MatrixXd& R, const PredictorPanel& panel) {
  const double T = static_cast<double>(panel.T);
  return (-2.0 / T) * (R.transpose() * panel.Z);
}

Eigen::VectorXd grad_omega(const Eigen::MatrixXd& Yresp,
                           const PredictorPanel& panel,
                           const Eigen::MatrixXd& Gcat) {
  return grad_omega_resid(Yresp - panel.Z * Gcat.transpose(), panel, Gcat);
}

Eigen::VectorXd grad_omega_resid(const Eigen::MatrixXd& R,
                                 const PredictorPanel& panel,
                                 const Eigen::MatrixXd& Gcat) {
  if (!panel.has_derivatives)
    throw std::logic_error("grad_omega requires a panel built with derivatives");
  const auto& o = panel.orders;
  const int N = panel.N;
  const double T = static_cast<double>(panel.T);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(o.r + 2 * o.s);
  for (int j = 0; j < o.r; ++j) {
    const Eigen::MatrixXd Gj = Gcat.middleCols((o.p + j) * N, N);
    grad(j) = (-2.0 / T) *
              (R.cwiseProduct(panel.dlam[static_cast<size_t>(j)] * Gj.transpose())).sum();
  }
  for (int m = 0; m < o.s; ++m) {
    const Eigen::MatrixXd Gc = Gcat.middleCols((o.p + o.r + 2 * m) * N, N);
    const Eigen::MatrixXd Gs = Gcat.middleCols((o.p + o.r + 2 * m + 1) * N, N);
    const auto& dcg = panel.dcos_dgam[static_cast<size_t>(m)];
    const auto& dsg = panel.dsin_dgam[static_cast<size_t>(m)];
    const auto& dct = panel.dcos_dthe[static_cast<size_t>(m)];
    const auto& dst = panel.dsin_dthe[static_cast<size_t>(m)];
    grad(o.r + 2 * m) =
        (-2.0 / T) *
        (R.cwiseProduct(dcg * Gc.transpose() + dsg * Gs.transpose())).sum();
    grad(o.r + 2 * m + 1) =
        (-2.0 / T) *
        (R.cwiseProduct(dct * Gc.transpose() + dst * Gs.transpose())).sum();
  }
  return grad;
}

Eigen::MatrixXd residuals(const SpvarModel& model, const SeriesPanel& Y) {
  validate(model);
  if (Y.N() != model.coefs.N)
    throw std::invalid_argument("panel dimension does not match the model");
  PredictorPanel panel = build_predictors(Y.data, model.orders, model.omega, false);
  return Y.data - panel.Z * concat_coefs(model.coefs).transpose();
}

}  // namespace spvarinf
