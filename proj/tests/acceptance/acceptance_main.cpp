// End-to-end acceptance harness. Each criterion prints exactly one
// PASS/FAIL line with the measured quantity and its pinned bound; the
// process exits nonzero if any criterion fails. Monte-Carlo criteria write
// their CSVs under --work-dir so a failing run can be inspected.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "spvarinf/experiments.hpp"
#include "spvarinf/forecast.hpp"
#include "spvarinf/io.hpp"
#include "spvarinf/loss.hpp"
#include "spvarinf/model.hpp"
#include "spvarinf/selection.hpp"
#include "spvarinf/simulate.hpp"
#include "spvarinf/solver.hpp"

namespace fs = std::filesystem;
using namespace spvarinf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double median(std::vector<double> v) {
  if (v.empty()) throw std::runtime_error("median of empty set");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(4) << x;
  return os.str();
}

Eigen::MatrixXd gaussian(int rows, int cols, double sd, Rng& rng) {
  std::normal_distribution<double> nrm(0.0, sd);
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = nrm(rng);
  return M;
}

Omega random_omega(int r, int s, Rng& rng) {
  std::uniform_real_distribution<double> mag(0.25, 0.85);
  std::uniform_real_distribution<double> ang(0.3, M_PI - 0.3);
  std::uniform_int_distribution<int> coin(0, 1);
  Omega w;
  for (int j = 0; j < r; ++j) {
    double lam = 0.0;
    bool distinct = false;
    while (!distinct) {
      lam = (coin(rng) ? 1.0 : -1.0) * mag(rng);
      distinct = true;
      for (double prev : w.lambdas)
        if (std::abs(prev - lam) < 0.05) distinct = false;
    }
    w.lambdas.push_back(lam);
  }
  for (int m = 0; m < s; ++m) w.etas.push_back({mag(rng), ang(rng)});
  return w;
}

// Column `col` of a comma-separated file, optionally restricted to rows
// whose `filter_col` equals `filter_val`.
std::vector<std::string> csv_column(const std::string& path, int col,
                                    int filter_col = -1,
                                    const std::string& filter_val = "") {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(is, line);  // header
  std::vector<std::string> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (filter_col >= 0 && cells.at(static_cast<size_t>(filter_col)) != filter_val)
      continue;
    out.push_back(cells.at(static_cast<size_t>(col)));
  }
  return out;
}

std::vector<double> csv_doubles(const std::string& path, int col,
                                int filter_col = -1,
                                const std::string& filter_val = "") {
  std::vector<double> out;
  for (const auto& s : csv_column(path, col, filter_col, filter_val))
    out.push_back(std::stod(s));
  return out;
}

std::string read_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// The DGP1 draw and fit of the error-scaling runner, replicated with the
// same per-index seed so criterion 8 can inspect the very fits criterion 6
// scored (the recomputed errors are cross-checked against its CSV).
struct Dgp1Fit {
  SpvarModel truth;
  SeriesPanel Y;
  FitResult fr;
  FitConfig fc;
  double err_a = 0.0;
  double err_g = 0.0;
};

Dgp1Fit rerun_error_scaling_cell(const ExperimentConfig& cfg, int idx) {
  const ModelOrders orders{1, 1, 0};
  const int ti = idx / cfg.replicates;
  const int T = cfg.T_list[static_cast<size_t>(ti)];
  Rng rng(cfg.seed + static_cast<std::uint64_t>(idx));

  DgpSpec spec;
  spec.N = cfg.N;
  spec.orders = orders;
  spec.omega.lambdas = {cfg.lambda1};
  spec.nonzeros_per_row = cfg.nonzeros_per_row;
  spec.noise_sd = cfg.noise_sd;
  spec.stationarity_target = cfg.stationarity_target;

  Dgp1Fit out;
  out.truth.orders = orders;
  out.truth.omega = spec.omega;
  out.truth.coefs = gen_sparse_coefs(spec, rng);
  out.truth.names = default_names(cfg.N);
  out.Y = simulate_spvar(out.truth, T, 200, cfg.noise_sd, rng);

  out.fc = cfg.fit;
  out.fc.threads = 1;
  out.fc.lambda_g =
      cfg.lambda_c * std::sqrt(std::log(static_cast<double>(cfg.N)) / T);
  out.fr = fit_je(out.Y, orders, out.fc);
  out.err_a = stacked_coef_error(out.fr.model, out.truth);
  out.err_g = (concat_coefs(out.fr.model.coefs) - concat_coefs(out.truth.coefs)).norm();
  return out;
}

// ---------------------------------------------------------------- criteria

// AR(infinity) coefficients of the constructed VARMA(1,1) match
// Theta^{h-1}(Phi - Theta) for h <= 30 on 20 random instances.
Outcome c1_varma_oracle() {
  const int N = 6;
  const std::array<std::array<int, 2>, 5> combos = {
      {{1, 0}, {2, 0}, {3, 0}, {0, 1}, {1, 1}}};
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    Rng rng(7000 + static_cast<std::uint64_t>(i));
    const auto [r, s] = combos[static_cast<size_t>(i % 5)];
    const Omega omega = random_omega(r, s, rng);
    const int nj = r + 2 * s;
    const int b = nj + (i % (N - nj + 1));  // exercise the identity padding
    const Eigen::MatrixXd B0 = random_orthogonal(b, rng);
    const Eigen::MatrixXd Phi = 0.5 * random_orthogonal(N, rng);
    const auto [model, Theta] = varma11_from_jordan(Phi, omega, B0);
    for (int h = 1; h <= 30; ++h) {
      const double gap =
          (coef_matrix(h, model) - varma11_ar_coef(Phi, Theta, h)).norm();
      worst = std::max(worst, gap);
    }
  }
  return {worst <= 1e-8, "max_h ||A_h - Theta^(h-1)(Phi-Theta)||_F = " +
                             fmt(worst) + " (bound 1e-8)"};
}

// Recursive predictor construction equals the direct double loop for every
// order combination in {0,1,2}^3.
Outcome c2_predictor_oracle() {
  const int N = 4, T = 40;
  double worst = 0.0;
  for (int p = 0; p <= 2; ++p)
    for (int r = 0; r <= 2; ++r)
      for (int s = 0; s <= 2; ++s)
        for (int rep = 0; rep < 5; ++rep) {
          Rng rng(8000 + static_cast<std::uint64_t>(125 * (p * 9 + r * 3 + s) + rep));
          const ModelOrders orders{p, r, s};
          const Omega omega = random_omega(r, s, rng);
          const Eigen::MatrixXd Y = gaussian(T, N, 1.0, rng);
          const PredictorPanel fast = build_predictors(Y, orders, omega, false);
          const PredictorPanel slow = build_predictors_bruteforce(Y, orders, omega);
          if (fast.Z.size() > 0)
            worst = std::max(worst, (fast.Z - slow.Z).cwiseAbs().maxCoeff());
        }
  return {worst <= 1e-10,
          "max |Z_fast - Z_direct| = " + fmt(worst) + " (bound 1e-10)"};
}

// Analytic gradients in g and omega against central finite differences.
Outcome c3_gradient_fd() {
  const int N = 4, T = 60;
  const std::array<ModelOrders, 5> orders_cycle = {
      ModelOrders{1, 1, 0}, ModelOrders{0, 1, 1}, ModelOrders{2, 1, 1},
      ModelOrders{1, 0, 2}, ModelOrders{1, 2, 0}};
  const double h = 1e-5;
  double worst = 0.0;  // excess over the allowance, normalized
  auto check = [&](double an, double fd) {
    const double allow = std::max(1e-8, 1e-5 * std::max(std::abs(an), std::abs(fd)));
    worst = std::max(worst, std::abs(an - fd) / allow);
  };
  for (int i = 0; i < 20; ++i) {
    Rng rng(9000 + static_cast<std::uint64_t>(i));
    const ModelOrders orders = orders_cycle[static_cast<size_t>(i % 5)];
    const Omega omega = random_omega(orders.r, orders.s, rng);
    const Eigen::MatrixXd Y = gaussian(T, N, 1.0, rng);
    const Eigen::MatrixXd G = gaussian(N, N * orders.d(), 0.3, rng);

    const PredictorPanel panel = build_predictors(Y, orders, omega, true);
    const Eigen::MatrixXd gg = grad_g(Y, panel, G);
    for (int a = 0; a < G.rows(); ++a)
      for (int b = 0; b < G.cols(); ++b) {
        Eigen::MatrixXd Gp = G, Gm = G;
        Gp(a, b) += h;
        Gm(a, b) -= h;
        check(gg(a, b),
              (loss_value(Y, panel, Gp) - loss_value(Y, panel, Gm)) / (2 * h));
      }

    if (orders.r + 2 * orders.s == 0) continue;
    const Eigen::VectorXd gw = grad_omega(Y, panel, G);
    auto loss_at = [&](const Omega& w) {
      return loss_value(Y, build_predictors(Y, orders, w, false), G);
    };
    int c = 0;
    for (int j = 0; j < orders.r; ++j, ++c) {
      Omega wp = omega, wm = omega;
      wp.lambdas[static_cast<size_t>(j)] += h;
      wm.lambdas[static_cast<size_t>(j)] -= h;
      check(gw(c), (loss_at(wp) - loss_at(wm)) / (2 * h));
    }
    for (int m = 0; m < orders.s; ++m)
      for (int q = 0; q < 2; ++q, ++c) {
        Omega wp = omega, wm = omega;
        wp.etas[static_cast<size_t>(m)][static_cast<size_t>(q)] += h;
        wm.etas[static_cast<size_t>(m)][static_cast<size_t>(q)] -= h;
        check(gw(c), (loss_at(wp) - loss_at(wm)) / (2 * h));
      }
  }
  return {worst <= 1.0, "max |grad - fd| / allowance = " + fmt(worst) +
                            " (rel 1e-5, floor 1e-8)"};
}

// Moving-average weights: recursion vs the explicit sum over lag
// compositions, plus the closed forms for one AR lag and one decay rate.
Outcome c4_vma_oracle() {
  const std::array<ModelOrders, 5> orders_cycle = {
      ModelOrders{1, 1, 0}, ModelOrders{0, 1, 1}, ModelOrders{2, 0, 1},
      ModelOrders{1, 2, 0}, ModelOrders{0, 2, 1}};
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    Rng rng(10000 + static_cast<std::uint64_t>(i));
    SpvarModel m;
    m.orders = orders_cycle[static_cast<size_t>(i % 5)];
    m.omega = random_omega(m.orders.r, m.orders.s, rng);
    m.coefs.N = 3;
    for (int k = 0; k < m.orders.d(); ++k)
      m.coefs.mats.push_back(gaussian(3, 3, 0.3, rng));
    m.names = default_names(3);

    const auto fast = vma_coeffs(m, 4);
    std::vector<Eigen::MatrixXd> A(5);
    for (int hh = 1; hh <= 4; ++hh) A[static_cast<size_t>(hh)] = coef_matrix(hh, m);
    for (int j = 1; j <= 4; ++j) {
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(3, 3);
      std::function<void(int, const Eigen::MatrixXd&)> go =
          [&](int rem, const Eigen::MatrixXd& prod) {
            if (rem == 0) {
              sum += prod;
              return;
            }
            for (int hh = 1; hh <= rem; ++hh)
              go(rem - hh, prod * A[static_cast<size_t>(hh)]);
          };
      go(j, Eigen::MatrixXd::Identity(3, 3));
      worst = std::max(
          worst, (fast[static_cast<size_t>(j - 1)] - sum).cwiseAbs().maxCoeff());
    }
  }

  double worst_closed = 0.0;
  for (int i = 0; i < 5; ++i) {
    Rng rng(10100 + static_cast<std::uint64_t>(i));
    SpvarModel m;
    m.orders = ModelOrders{1, 1, 0};
    m.omega = random_omega(1, 0, rng);
    const double lam = m.omega.lambdas[0];
    m.coefs.N = 3;
    m.coefs.mats = {gaussian(3, 3, 0.4, rng), gaussian(3, 3, 0.4, rng)};
    m.names = default_names(3);
    const auto psi = vma_coeffs(m, 3);
    const Eigen::MatrixXd& G1 = m.coefs.mats[0];
    const Eigen::MatrixXd& G2 = m.coefs.mats[1];
    const Eigen::MatrixXd psi2 = G1 * G1 + lam * G2;
    const Eigen::MatrixXd psi3 =
        G1 * G1 * G1 + lam * G1 * G2 + lam * G2 * G1 + lam * lam * G2;
    worst_closed = std::max(worst_closed, (psi[1] - psi2).cwiseAbs().maxCoeff());
    worst_closed = std::max(worst_closed, (psi[2] - psi3).cwiseAbs().maxCoeff());
  }
  const bool pass = worst <= 1e-10 && worst_closed <= 1e-12;
  return {pass, "max |Psi - composition sum| = " + fmt(worst) +
                    " (bound 1e-10), closed forms = " + fmt(worst_closed) +
                    " (bound 1e-12)"};
}

// For pure VAR(2) the sufficient condition must coincide with the companion
// spectral radius test; target rescaling must land on 0.8 exactly.
Outcome c5_stationarity() {
  const int N = 4;
  int stat = 0, nonstat = 0, agree = 0;
  double worst_rho_gap = 0.0;
  for (int i = 0; i < 50; ++i) {
    Rng rng(11000 + static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> unif(0.6, 1.4);
    Eigen::MatrixXd G1 = gaussian(N, N, 0.3, rng);
    Eigen::MatrixXd G2 = gaussian(N, N, 0.3, rng);
    // Companion eigenvalues scale as c when (G1, G2) -> (c G1, c^2 G2), so
    // the drawn target radius is hit exactly and straddles 1.
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    comp.topLeftCorner(N, N) = G1;
    comp.topRightCorner(N, N) = G2;
    comp.bottomLeftCorner(N, N) = Eigen::MatrixXd::Identity(N, N);
    const double rho0 =
        Eigen::EigenSolver<Eigen::MatrixXd>(comp).eigenvalues().cwiseAbs().maxCoeff();
    const double u = unif(rng);
    const double c = u / rho0;
    G1 *= c;
    G2 *= c * c;

    SpvarModel m;
    m.orders = ModelOrders{2, 0, 0};
    m.coefs.N = N;
    m.coefs.mats = {G1, G2};
    m.names = default_names(N);
    double lhs = 0.0, rhoc = 0.0;
    const bool ok = stationarity_sufficient(m, &lhs, &rhoc);

    Eigen::MatrixXd comp2 = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    comp2.topLeftCorner(N, N) = G1;
    comp2.topRightCorner(N, N) = G2;
    comp2.bottomLeftCorner(N, N) = Eigen::MatrixXd::Identity(N, N);
    const double rho_direct =
        Eigen::EigenSolver<Eigen::MatrixXd>(comp2).eigenvalues().cwiseAbs().maxCoeff();
    worst_rho_gap = std::max(worst_rho_gap, std::abs(rhoc - rho_direct));
    if (ok == (rho_direct < 1.0)) ++agree;
    if (rho_direct < 1.0) ++stat; else ++nonstat;
  }

  double worst_rescale = 0.0;
  for (int i = 0; i < 10; ++i) {
    Rng rng(11500 + static_cast<std::uint64_t>(i));
    SpvarModel m;
    if (i % 2 == 0) {
      m.orders = ModelOrders{2, 0, 0};
      m.coefs.mats = {gaussian(3, 3, 0.5, rng), gaussian(3, 3, 0.5, rng)};
    } else {
      m.orders = ModelOrders{1, 1, 0};
      m.omega = random_omega(1, 0, rng);
      m.coefs.mats = {gaussian(3, 3, 0.5, rng), gaussian(3, 3, 0.5, rng)};
    }
    m.coefs.N = 3;
    m.names = default_names(3);
    m.coefs = rescale_for_stationarity(m.coefs, m.orders, m.omega, 0.8);
    double lhs = 0.0;
    stationarity_sufficient(m, &lhs, nullptr);
    worst_rescale = std::max(worst_rescale, std::abs(lhs - 0.8));
  }

  const bool pass = agree == 50 && stat >= 10 && nonstat >= 10 &&
                    worst_rho_gap <= 1e-10 && worst_rescale <= 1e-8;
  return {pass, "agreement 50/50 required, got " + std::to_string(agree) +
                    " (" + std::to_string(stat) + " stable / " +
                    std::to_string(nonstat) + " not), |lhs - 0.8| = " +
                    fmt(worst_rescale) + " (bound 1e-8)"};
}

// Estimation error shrinks with T at (at least) the predicted pace.
Outcome c6_error_scaling(const ExperimentConfig& base, std::string* csv_out) {
  ExperimentConfig cfg = base;
  cfg.out_dir = base.out_dir + "/error_scaling_t1";
  const std::string path = run_error_scaling(cfg);
  *csv_out = path;
  std::vector<double> med;
  for (int T : cfg.T_list) {
    const auto errs = csv_doubles(path, 3, 1, std::to_string(T));
    if (static_cast<int>(errs.size()) != cfg.replicates)
      return {false, "expected " + std::to_string(cfg.replicates) +
                         " rows for T=" + std::to_string(T)};
    med.push_back(median(errs));
  }
  const bool decreasing = med[0] > med[1] && med[1] > med[2];
  const double ratio = med[0] / med[2];
  return {decreasing && ratio >= 1.5,
          "median ||a_hat - a*|| = {" + fmt(med[0]) + ", " + fmt(med[1]) + ", " +
              fmt(med[2]) + "} for T = {60, 120, 240}, ratio " + fmt(ratio) +
              " (need strictly decreasing, ratio >= 1.5)"};
}

// Order selection picks the generating (1,1,0) most of the time.
Outcome c7_bic_consistency(const ExperimentConfig& base, std::string* csv_out) {
  ExperimentConfig cfg = base;
  cfg.out_dir = base.out_dir + "/bic_t1";
  const std::string path = run_bic_consistency(cfg);
  *csv_out = path;
  const auto correct = csv_doubles(path, 7);
  if (static_cast<int>(correct.size()) != cfg.replicates)
    return {false, "expected " + std::to_string(cfg.replicates) + " rows"};
  double prop = 0.0;
  for (double c : correct) prop += c;
  prop /= static_cast<double>(correct.size());
  return {prop >= 0.7, "correct-selection proportion = " + fmt(prop) +
                           " (need >= 0.7, " + std::to_string(cfg.replicates) +
                           " replicates)"};
}

// Solver contracts on the very fits criterion 6 scored: monotone penalized
// objective, small proximal fixed-point residual, decay rates inside the box.
Outcome c8_solver_contracts(const ExperimentConfig& cfg, const std::string& c6_csv) {
  const auto csv_a = csv_doubles(c6_csv, 3);
  const auto csv_g = csv_doubles(c6_csv, 4);
  const int n = static_cast<int>(cfg.T_list.size()) * cfg.replicates;
  if (static_cast<int>(csv_a.size()) != n)
    return {false, "criterion-6 CSV has wrong row count"};

  int n_conv = 0;
  double worst_increase = 0.0, worst_prox_ratio = 0.0, worst_box = 0.0;
  for (int idx = 0; idx < n; ++idx) {
    const Dgp1Fit cell = rerun_error_scaling_cell(cfg, idx);
    // Bit-equality with the CSV proves these are the criterion-6 fits.
    if (cell.err_a != csv_a[static_cast<size_t>(idx)] ||
        cell.err_g != csv_g[static_cast<size_t>(idx)])
      return {false, "replayed fit " + std::to_string(idx) +
                         " does not match the criterion-6 CSV"};

    const auto& tr = cell.fr.objective_trace;
    for (size_t k = 1; k < tr.size(); ++k)
      worst_increase = std::max(
          worst_increase, (tr[k] - tr[k - 1]) / std::max(1.0, std::abs(tr[k - 1])));

    for (double lam : cell.fr.model.omega.lambdas)
      worst_box = std::max(worst_box,
                           std::abs(lam) - (1.0 - cell.fc.epsilon_box));

    if (!cell.fr.converged) continue;
    ++n_conv;
    const PredictorPanel panel = build_predictors(
        cell.Y.data, cell.fr.model.orders, cell.fr.model.omega, false);
    const Eigen::MatrixXd G = concat_coefs(cell.fr.model.coefs);
    const Eigen::MatrixXd R = residuals(cell.fr.model, cell.Y);
    const Eigen::MatrixXd gg = grad_g_resid(R, panel);
    const double a = cell.fr.final_alpha;
    const double prox =
        (soft_threshold(G - a * gg, a * cell.fc.lambda_g) - G).cwiseAbs().maxCoeff();
    worst_prox_ratio = std::max(worst_prox_ratio, prox / (10.0 * cell.fc.tol));
  }
  const bool pass = worst_increase <= 1e-12 && worst_prox_ratio <= 1.0 &&
                    worst_box <= 1e-12 && n_conv > 0;
  return {pass, "max objective increase = " + fmt(worst_increase) +
                    ", prox residual / (10 tol) = " + fmt(worst_prox_ratio) +
                    ", box excess = " + fmt(worst_box) + " over " +
                    std::to_string(n) + " fits (" + std::to_string(n_conv) +
                    " converged)"};
}

// Joint and rowwise estimators land within a factor 1.5 of each other, and
// the rowwise estimator degenerates to the joint one when N = 1.
Outcome c9_je_re(const ExperimentConfig& cfg) {
  const ModelOrders orders{1, 1, 0};
  const int T = 300;
  std::vector<double> err_je, err_re;
  for (int rep = 0; rep < cfg.replicates; ++rep) {
    Rng rng(cfg.seed + static_cast<std::uint64_t>(rep));
    DgpSpec spec;
    spec.N = cfg.N;
    spec.orders = orders;
    spec.omega.lambdas = {cfg.lambda1};
    spec.nonzeros_per_row = cfg.nonzeros_per_row;
    spec.noise_sd = cfg.noise_sd;
    spec.stationarity_target = cfg.stationarity_target;
    SpvarModel truth;
    truth.orders = orders;
    truth.omega = spec.omega;
    truth.coefs = gen_sparse_coefs(spec, rng);
    truth.names = default_names(cfg.N);
    const SeriesPanel Y = simulate_spvar(truth, T, 200, cfg.noise_sd, rng);

    FitConfig fc = cfg.fit;
    fc.threads = 1;
    fc.lambda_g =
        cfg.lambda_c * std::sqrt(std::log(static_cast<double>(cfg.N)) / T);
    const Eigen::MatrixXd g_true = concat_coefs(truth.coefs);
    err_je.push_back((concat_coefs(fit_je(Y, orders, fc).model.coefs) - g_true).norm());
    err_re.push_back((concat_coefs(fit_re(Y, orders, fc).model.coefs) - g_true).norm());
  }
  const double mje = median(err_je), mre = median(err_re);
  const double factor = std::max(mje, mre) / std::min(mje, mre);

  // Univariate equivalence.
  Rng rng(cfg.seed + 777);
  DgpSpec spec;
  spec.N = 1;
  spec.orders = orders;
  spec.omega.lambdas = {cfg.lambda1};
  spec.nonzeros_per_row = 1;
  spec.noise_sd = cfg.noise_sd;
  spec.stationarity_target = cfg.stationarity_target;
  SpvarModel truth;
  truth.orders = orders;
  truth.omega = spec.omega;
  truth.coefs = gen_sparse_coefs(spec, rng);
  truth.names = default_names(1);
  const SeriesPanel Y1 = simulate_spvar(truth, 200, 200, cfg.noise_sd, rng);
  FitConfig fc = cfg.fit;
  fc.threads = 1;
  fc.lambda_g = 0.05;
  auto pen_obj = [&](const SpvarModel& m) {
    const PredictorPanel panel = build_predictors(Y1.data, m.orders, m.omega, false);
    const Eigen::MatrixXd G = concat_coefs(m.coefs);
    return loss_value(Y1.data, panel, G) + fc.lambda_g * G.cwiseAbs().sum();
  };
  const double gap =
      std::abs(pen_obj(fit_je(Y1, orders, fc).model) - pen_obj(fit_re(Y1, orders, fc).model));

  const bool pass = factor <= 1.5 && gap <= 1e-10;
  return {pass, "median g-error joint " + fmt(mje) + " vs rowwise " + fmt(mre) +
                    ", factor " + fmt(factor) + " (need <= 1.5); N=1 objective gap " +
                    fmt(gap) + " (bound 1e-10)"};
}

// One-step forecasts on VARMA(1,1) data: the infinite-order fit beats (or
// ties) the order-16 Lasso VAR in median over replicates.
Outcome c10_varma_forecast(const ExperimentConfig& base, std::string* csv_out) {
  ExperimentConfig cfg = base;
  cfg.replicates = 10;
  cfg.out_dir = base.out_dir + "/varma_t1";
  const std::string path = run_varma_forecast(cfg);
  *csv_out = path;
  const auto je = csv_doubles(path, 4, 3, "spvar_je");
  const auto va = csv_doubles(path, 4, 3, "var_lasso");
  if (static_cast<int>(je.size()) != cfg.replicates ||
      static_cast<int>(va.size()) != cfg.replicates)
    return {false, "unexpected row counts in " + path};
  const double mje = median(je), mva = median(va);
  return {mje <= mva, "median one-step error " + fmt(mje) +
                          " vs Lasso VAR(16) " + fmt(mva) + " (need <=)"};
}

// The three Monte-Carlo CSVs are byte-identical when rerun with the same
// seed at a different thread count.
Outcome c11_determinism(const ExperimentConfig& base, const std::string& c6_csv,
                        const std::string& c7_csv, const std::string& c10_csv) {
  ExperimentConfig cfg = base;
  cfg.threads = 4;
  cfg.out_dir = base.out_dir + "/rerun_t4";
  const std::string e = run_error_scaling(cfg);
  const std::string b = run_bic_consistency(cfg);
  ExperimentConfig cfg10 = cfg;
  cfg10.replicates = 10;
  const std::string v = run_varma_forecast(cfg10);
  const bool same_e = read_bytes(e) == read_bytes(c6_csv);
  const bool same_b = read_bytes(b) == read_bytes(c7_csv);
  const bool same_v = read_bytes(v) == read_bytes(c10_csv);
  return {same_e && same_b && same_v,
          std::string("threads 1 vs 4 byte-identical: error-scaling ") +
              (same_e ? "yes" : "NO") + ", order-selection " +
              (same_b ? "yes" : "NO") + ", varma-forecast " +
              (same_v ? "yes" : "NO")};
}

}  // namespace

int main(int argc, char** argv) {
  std::string work_dir = "acceptance_work";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--work-dir" && i + 1 < argc) {
      work_dir = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--work-dir DIR]\n";
      return 2;
    }
  }
  fs::create_directories(work_dir);

  ExperimentConfig base;  // pinned defaults: seed 20240601, 20 replicates
  base.out_dir = work_dir;
  base.threads = 1;

  std::string c6_csv, c7_csv, c10_csv;
  struct Item {
    std::string name;
    std::function<Outcome()> run;
    double budget_s;  // 0 = untimed
  };
  const std::vector<Item> items = {
      {"varma-ar-oracle", [&] { return c1_varma_oracle(); }, 5},
      {"predictor-oracle", [&] { return c2_predictor_oracle(); }, 10},
      {"gradient-fd", [&] { return c3_gradient_fd(); }, 30},
      {"vma-oracle", [&] { return c4_vma_oracle(); }, 0},
      {"stationarity-var2", [&] { return c5_stationarity(); }, 0},
      {"error-scaling", [&] { return c6_error_scaling(base, &c6_csv); }, 600},
      {"bic-consistency", [&] { return c7_bic_consistency(base, &c7_csv); }, 1800},
      {"solver-contracts", [&] { return c8_solver_contracts(base, c6_csv); }, 0},
      {"je-re-consistency", [&] { return c9_je_re(base); }, 0},
      {"varma-forecast", [&] { return c10_varma_forecast(base, &c10_csv); }, 600},
      {"determinism", [&] { return c11_determinism(base, c6_csv, c7_csv, c10_csv); }, 0},
  };

  int failed = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome oc;
    try {
      oc = items[i].run();
    } catch (const std::exception& e) {
      oc = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = items[i].budget_s == 0 || secs < items[i].budget_s;
    const bool pass = oc.pass && in_budget;
    if (!pass) ++failed;
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " criterion-" << (i + 1) << ' '
         << items[i].name << ": " << oc.detail << " [" << std::fixed
         << std::setprecision(1) << secs << "s";
    if (items[i].budget_s > 0)
      line << " < " << static_cast<int>(items[i].budget_s) << "s"
           << (in_budget ? "" : " EXCEEDED");
    line << "]";
    std::cout << line.str() << std::endl;
  }
  if (failed == 0) {
    std::cout << "all 11 criteria passed" << std::endl;
    return 0;
  }
  std::cout << failed << " criteria failed" << std::endl;
  return 1;
}
