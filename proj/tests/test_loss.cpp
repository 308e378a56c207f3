#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "spvarinf/loss.hpp"

using namespace spvarinf;

namespace {

Eigen::MatrixXd randn(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = g(rng);
  return M;
}

Omega random_omega(const ModelOrders& orders, Rng& rng) {
  std::uniform_real_distribution<double> ul(-0.85, 0.85);
  std::uniform_real_distribution<double> ug(0.05, 0.85);
  std::uniform_real_distribution<double> ut(0.2, M_PI - 0.2);
  Omega w;
  for (int j = 0; j < orders.r; ++j) w.lambdas.push_back(ul(rng));
  for (int m = 0; m < orders.s; ++m) w.etas.push_back({ug(rng), ut(rng)});
  return w;
}

// Independent of the recursions: x_t^{[k]} = sum_{h=1}^{t-1} l_{h,k} y_{t-h}
// straight from weight().
Eigen::MatrixXd direct_predictors(const Eigen::MatrixXd& Y,
                                  const ModelOrders& orders, const Omega& omega) {
  const int T = static_cast<int>(Y.rows());
  const int N = static_cast<int>(Y.cols());
  const int d = orders.d();
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(T, N * d);
  for (int t = 1; t <= T; ++t)
    for (int k = 1; k <= d; ++k)
      for (int h = 1; h <= t - 1; ++h)
        Z.row(t - 1).segment((k - 1) * N, N) +=
            weight(h, k, orders, omega) * Y.row(t - 1 - h);
  return Z;
}

double loss_at(const Eigen::MatrixXd& Y, const ModelOrders& orders,
               const Omega& omega, const Eigen::MatrixXd& Gcat) {
  const PredictorPanel panel = build_predictors(Y, orders, omega, false);
  return loss_value(Y, panel, Gcat);
}

}  // namespace

TEST_CASE("recursive, brute-force and direct predictor panels agree") {
  Rng rng(1234);
  for (int p = 0; p <= 2; ++p)
    for (int r = 0; r <= 2; ++r)
      for (int s = 0; s <= 2; ++s) {
        const ModelOrders orders{p, r, s};
        if (orders.d() == 0) continue;
        for (int rep = 0; rep < 2; ++rep) {
          const Omega omega = random_omega(orders, rng);
          const Eigen::MatrixXd Y = randn(25, 3, rng);
          const Eigen::MatrixXd Zd = direct_predictors(Y, orders, omega);
          const PredictorPanel fast = build_predictors(Y, orders, omega, true);
          const PredictorPanel brute =
              build_predictors_bruteforce(Y, orders, omega);
          CHECK((fast.Z - Zd).cwiseAbs().maxCoeff() < 1e-11);
          CHECK((brute.Z - Zd).cwiseAbs().maxCoeff() < 1e-11);
          const PredictorPanel noder = build_predictors(Y, orders, omega, false);
          CHECK((noder.Z - fast.Z).cwiseAbs().maxCoeff() == 0.0);
        }
      }
}

TEST_CASE("update_decay_blocks equals a fresh build at the new omega") {
  Rng rng(77);
  const ModelOrders orders{2, 1, 2};
  const Eigen::MatrixXd Y = randn(30, 4, rng);
  PredictorPanel panel =
      build_predictors(Y, orders, random_omega(orders, rng), true);
  const Omega w1 = random_omega(orders, rng);
  update_decay_blocks(panel, Y, w1, true);
  const PredictorPanel fresh = build_predictors(Y, orders, w1, true);
  CHECK((panel.Z - fresh.Z).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE(panel.has_derivatives);
  for (int j = 0; j < orders.r; ++j)
    CHECK((panel.dlam[j] - fresh.dlam[j]).cwiseAbs().maxCoeff() < 1e-14);
  for (int m = 0; m < orders.s; ++m) {
    CHECK((panel.dcos_dgam[m] - fresh.dcos_dgam[m]).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((panel.dsin_dgam[m] - fresh.dsin_dgam[m]).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((panel.dcos_dthe[m] - fresh.dcos_dthe[m]).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((panel.dsin_dthe[m] - fresh.dsin_dthe[m]).cwiseAbs().maxCoeff() < 1e-14);
  }
  // dropping the derivative panels is recorded
  update_decay_blocks(panel, Y, random_omega(orders, rng), false);
  CHECK_FALSE(panel.has_derivatives);
}

TEST_CASE("next_predictor_row matches the direct weight sum for t = T+1") {
  Rng rng(99);
  const ModelOrders orders{1, 1, 1};
  const Omega omega = random_omega(orders, rng);
  const Eigen::MatrixXd Y = randn(20, 3, rng);
  const Eigen::RowVectorXd z = next_predictor_row(Y, orders, omega);
  const int T = 20, N = 3, d = orders.d();
  Eigen::RowVectorXd want = Eigen::RowVectorXd::Zero(N * d);
  for (int k = 1; k <= d; ++k)
    for (int h = 1; h <= T; ++h)
      want.segment((k - 1) * N, N) +=
          weight(h, k, orders, omega) * Y.row(T - h);
  CHECK((z - want).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("loss hand values") {
  // scalar series y = (1, 1), p = 1, G = 0.5: (1 + 0.25)/2
  Eigen::MatrixXd Y(2, 1);
  Y << 1.0, 1.0;
  const ModelOrders orders{1, 0, 0};
  const PredictorPanel panel = build_predictors(Y, orders, Omega{}, false);
  Eigen::MatrixXd G(1, 1);
  G << 0.5;
  CHECK(loss_value(Y, panel, G) == doctest::Approx(0.625).epsilon(1e-15));
  // G = 0: mean squared row norm
  Rng rng(3);
  const Eigen::MatrixXd Y2 = randn(17, 3, rng);
  const PredictorPanel p2 = build_predictors(Y2, orders, Omega{}, false);
  CHECK(loss_value(Y2, p2, Eigen::MatrixXd::Zero(3, 3)) ==
        doctest::Approx(Y2.squaredNorm() / 17.0).epsilon(1e-14));
}

TEST_CASE("gradients match central finite differences") {
  Rng rng(2024);
  const std::vector<ModelOrders> cases = {{1, 1, 0}, {0, 1, 1}, {2, 0, 2},
                                          {1, 2, 1}, {2, 2, 2}, {0, 0, 2},
                                          {0, 1, 0}};
  for (const ModelOrders& orders : cases) {
    const int N = 3, T = 30;
    const Omega omega = random_omega(orders, rng);
    const Eigen::MatrixXd Y = randn(T, N, rng);
    Eigen::MatrixXd G = 0.3 * randn(N, N * orders.d(), rng);
    const PredictorPanel panel = build_predictors(Y, orders, omega, true);

    const Eigen::MatrixXd gg = grad_g(Y, panel, G);
    CHECK((gg - grad_g_resid(Y - panel.Z * G.transpose(), panel))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    for (int idx = 0; idx < G.size(); idx += std::max<int>(1, G.size() / 12)) {
      const double h = 1e-6 * std::max(1.0, std::abs(G(idx)));
      Eigen::MatrixXd Gp = G, Gm = G;
      Gp(idx) += h;
      Gm(idx) -= h;
      const double fd =
          (loss_value(Y, panel, Gp) - loss_value(Y, panel, Gm)) / (2 * h);
      CHECK(std::abs(gg(idx) - fd) <=
            1e-5 * std::max(std::abs(fd), 1.0) + 1e-8);
    }

    const Eigen::VectorXd gw = grad_omega(Y, panel, G);
    CHECK((gw - grad_omega_resid(Y - panel.Z * G.transpose(), panel, G))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    const int nw = orders.r + 2 * orders.s;
    REQUIRE(gw.size() == nw);
    for (int i = 0; i < nw; ++i) {
      auto perturbed = [&](double h) {
        Omega w = omega;
        if (i < orders.r)
          w.lambdas[static_cast<size_t>(i)] += h;
        else {
          const int m = (i - orders.r) / 2;
          w.etas[static_cast<size_t>(m)][(i - orders.r) % 2] += h;
        }
        return loss_at(Y, orders, w, G);
      };
      const double h = 1e-6;
      const double fd = (perturbed(h) - perturbed(-h)) / (2 * h);
      CHECK(std::abs(gw(i) - fd) <= 1e-5 * std::max(std::abs(fd), 1.0) + 1e-8);
    }
  }
}

TEST_CASE("grad_g vanishes at the least-squares solution") {
  Rng rng(11);
  const ModelOrders orders{2, 0, 0};
  const Eigen::MatrixXd Y = randn(60, 3, rng);
  const PredictorPanel panel = build_predictors(Y, orders, Omega{}, false);
  const Eigen::MatrixXd Gls =
      (panel.Z.transpose() * panel.Z)
          .ldlt()
          .solve(panel.Z.transpose() * Y)
          .transpose();
  CHECK(grad_g(Y, panel, Gls).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("residuals match the panel formulation") {
  Rng rng(42);
  const ModelOrders orders{1, 1, 1};
  SpvarModel model;
  model.orders = orders;
  model.omega = random_omega(orders, rng);
  model.coefs.N = 3;
  for (int k = 0; k < orders.d(); ++k)
    model.coefs.mats.push_back(0.25 * randn(3, 3, rng));
  SeriesPanel Y;
  Y.data = randn(22, 3, rng);
  Y.names = default_names(3);
  const PredictorPanel panel =
      build_predictors(Y.data, orders, model.omega, false);
  const Eigen::MatrixXd want =
      Y.data - panel.Z * concat_coefs(model.coefs).transpose();
  CHECK((residuals(model, Y) - want).cwiseAbs().maxCoeff() < 1e-12);
}
