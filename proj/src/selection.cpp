#include "spvarinf/selection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "spvarinf/parallel.hpp"

namespace spvarinf {

double bic_score(double loss, const ModelOrders& orders, int N, int T,
                 double tau, double q) {
  if (!(loss > 0.0)) throw std::invalid_argument("bic_score: loss must be > 0");
  if (T < 2) throw std::invalid_argument("bic_score: T must be >= 2");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("bic_score: q must lie in [0, 1]");
  if (N < 1) throw std::invalid_argument("bic_score: N must be >= 1");
  const double Td = static_cast<double>(T);
  const double base = std::log(static_cast<double>(N) * std::max(orders.p, 1)) / Td;
  return std::log(loss) +
         tau * orders.d() * std::pow(base, 1.0 - q / 2.0) * std::log(Td);
}

BicTable select_orders(const SeriesPanel& Y, const std::array<int, 3>& max_orders,
                       const SelectConfig& config) {
  if (max_orders[0] < 0 || max_orders[1] < 0 || max_orders[2] < 0)
    throw std::invalid_argument("select_orders: max orders must be >= 0");
  const int N = Y.N();
  const int T = Y.T();
  const int nr = max_orders[1] + 1;
  const int ns = max_orders[2] + 1;
  const int ncell = (max_orders[0] + 1) * nr * ns;

  BicTable table;
  table.rows.resize(static_cast<size_t>(ncell));
  parallel_for_indexed(ncell, config.threads, [&](int idx) {
    const ModelOrders o{idx / (nr * ns), (idx / ns) % nr, idx % ns};
    BicRow row;
    row.orders = o;
    FitConfig fc = config.fit;
    fc.threads = 1;
    if (config.lambda_c > 0.0)
      fc.lambda_g = config.lambda_c *
                    std::sqrt(std::log(static_cast<double>(N) * std::max(o.p, 1)) / T);
    row.lambda_g_used = fc.lambda_g;
    try {
      const FitResult fr = config.use_re ? fit_re(Y, o, fc) : fit_je(Y, o, fc);
      row.loss = fr.in_sample_loss;
      row.converged = fr.converged;
      double l = row.loss;
      if (!(l > 1e-300)) {
        l = 1e-300;
        row.error = "loss clamped to 1e-300";
      }
      row.bic = bic_score(l, o, N, T, config.tau, config.q);
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    table.rows[static_cast<size_t>(idx)] = std::move(row);
  });

  int best = -1;
  for (int i = 0; i < ncell; ++i) {
    const BicRow& r = table.rows[static_cast<size_t>(i)];
    if (r.failed || !r.converged) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const BicRow& b = table.rows[static_cast<size_t>(best)];
    if (r.bic < b.bic ||
        (r.bic == b.bic && r.orders.d() < b.orders.d()))
      best = i;  // equal bic and d keeps the earlier (lexicographically smaller) cell
  }
  if (best < 0)
    throw std::runtime_error("select_orders: no candidate cell produced a converged fit");
  table.chosen = best;
  return table;
}

double select_lambda_g(const SeriesPanel& Y, const ModelOrders& orders,
                       std::vector<double> lambda_grid, const FitConfig& config) {
  const int N = Y.N();
  const int T = Y.T();
  const int d = orders.d();
  if (lambda_grid.empty()) {
    const double lmax = lambda_max_bound(Y, orders, config);
    if (!(lmax > 0.0))
      throw std::runtime_error("select_lambda_g: degenerate data, zero gradient at g = 0");
    lambda_grid.resize(20);
    for (int i = 0; i < 20; ++i)
      lambda_grid[static_cast<size_t>(i)] =
          lmax * std::pow(10.0, -3.0 * (19 - i) / 19.0);
  }
  for (double l : lambda_grid)
    if (!(l > 0.0))
      throw std::invalid_argument("select_lambda_g: grid values must be positive");
  std::sort(lambda_grid.begin(), lambda_grid.end(), std::greater<double>());

  FitConfig fc = config;
  bool have_warm = false;
  Omega warm_omega;
  Eigen::MatrixXd warm_g;
  bool any = false;
  double best_score = std::numeric_limits<double>::infinity();
  double best_lambda = 0.0;
  std::string first_error;
  for (double lam : lambda_grid) {
    fc.lambda_g = lam;
    if (have_warm) {
      fc.omega_inits = {warm_omega};
      fc.g_init = GInitMode::Explicit;
      fc.g_init_explicit = warm_g;
    }
    try {
      const FitResult fr = fit_je(Y, orders, fc);
      warm_omega = fr.model.omega;
      warm_g = concat_coefs(fr.model.coefs);
      have_warm = true;
      const double loss = std::max(fr.in_sample_loss, 1e-300);
      const double penalty =
          d > 0 ? fr.nnz * std::log(static_cast<double>(T)) *
                      std::log(static_cast<double>(N) * N * d) / T
                : 0.0;
      const double score = std::log(loss) + penalty;
      if (!any || score < best_score) {  // ties keep the earlier, larger lambda
        any = true;
        best_score = score;
        best_lambda = lam;
      }
    } catch (const std::exception& e) {
      if (first_error.empty()) first_error = e.what();
    }
  }
  if (!any)
    throw std::runtime_error(
        first_error.empty()
            ? "select_lambda_g: every grid value failed"
            : "select_lambda_g: every grid value failed: " + first_error);
  return best_lambda;
}

double lambda_max_bound(const SeriesPanel& Y, const ModelOrders& orders,
                        const FitConfig& config) {
  if (orders.d() == 0) return 0.0;
  const std::vector<Omega> cands =
      config.omega_inits.empty() ? init_omega_candidates(orders) : config.omega_inits;
  const Omega w0 = project_omega(cands.front(), config.epsilon_box);
  const PredictorPanel panel = build_predictors(Y.data, orders, w0, false);
  const Eigen::MatrixXd g0 = Eigen::MatrixXd::Zero(Y.N(), Y.N() * orders.d());
  const Eigen::MatrixXd gr = grad_g(Y.data, panel, g0);
  return gr.size() > 0 ? gr.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace spvarinf
