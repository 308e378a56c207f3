#include "spvarinf/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spvarinf {

void validate(const SpvarModel& model) {
  const auto& o = model.orders;
  if (o.p < 0 || o.r < 0 || o.s < 0)
    throw std::invalid_argument("model orders must be nonnegative");
  if (static_cast<int>(model.omega.lambdas.size()) != o.r)
    throw std::invalid_argument("omega has " +
                                std::to_string(model.omega.lambdas.size()) +
                                " lambdas, orders require " + std::to_string(o.r));
  if (static_cast<int>(model.omega.etas.size()) != o.s)
    throw std::invalid_argument("omega has " +
                                std::to_string(model.omega.etas.size()) +
                                " eta pairs, orders require " + std::to_string(o.s));
  if (static_cast<int>(model.coefs.mats.size()) != o.d())
    throw std::invalid_argument("coefficient set has " +
                                std::to_string(model.coefs.mats.size()) +
                                " matrices, orders require " + std::to_string(o.d()));
  for (const auto& G : model.coefs.mats) {
    if (G.rows() != model.coefs.N || G.cols() != model.coefs.N)
      throw std::invalid_argument("coefficient matrix is not N x N");
    if (!G.allFinite())
      throw std::invalid_argument("coefficient matrix has non-finite entries");
  }
}

double rho_bar_of(const Omega& omega) {
  double rho = 0.0;
  for (double l : omega.lambdas) rho = std::max(rho, std::abs(l));
  for (const auto& e : omega.etas) rho = std::max(rho, std::abs(e[0]));
  return rho;
}

double weight(int h, int k, const ModelOrders& orders, const Omega& omega) {
  if (h < 1) throw std::invalid_argument("lag h must be >= 1");
  if (k < 1 || k > orders.d())
    throw std::invalid_argument("weight index k out of range");
  const int p = orders.p, r = orders.r;
  if (k <= p) return h == k ? 1.0 : 0.0;
  if (h <= p) return 0.0;
  const int e = h - p;
  if (k <= p + r) {
    const double lam = omega.lambdas[static_cast<size_t>(k - p - 1)];
    return std::pow(lam, e);
  }
  const int m = (k - p - r - 1) / 2;  // 0-based pair index
  const double gam = omega.etas[static_cast<size_t>(m)][0];
  const double the = omega.etas[static_cast<size_t>(m)][1];
  const double mag = std::pow(gam, e);
  const bool cos_col = ((k - p - r) % 2) == 1;
  return cos_col ? mag * std::cos(e * the) : mag * std::sin(e * the);
}

Eigen::MatrixXd coef_matrix(int h, const SpvarModel& model) {
  const int N = model.coefs.N;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  const int d = model.orders.d();
  for (int k = 1; k <= d; ++k) {
    const double w = weight(h, k, model.orders, model.omega);
    if (w != 0.0) A.noalias() += w * model.coefs.mats[static_cast<size_t>(k - 1)];
  }
  return A;
}

std::vector<Eigen::MatrixXd> vma_coeffs(const SpvarModel& model, int J) {
  if (J < 1) throw std::invalid_argument("J must be >= 1");
  const int N = model.coefs.N;
  std::vector<Eigen::MatrixXd> psi;
  psi.reserve(static_cast<size_t>(J) + 1);
  psi.push_back(Eigen::MatrixXd::Identity(N, N));
  std::vector<Eigen::MatrixXd> A;
  A.reserve(static_cast<size_t>(J));
  for (int h = 1; h <= J; ++h) A.push_back(coef_matrix(h, model));
  for (int j = 1; j <= J; ++j) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(N, N);
    for (int h = 1; h <= j; ++h)
      acc.noalias() += A[static_cast<size_t>(h - 1)] * psi[static_cast<size_t>(j - h)];
    psi.push_back(std::move(acc));
  }
  psi.erase(psi.begin());  // drop Psi_0
  return psi;
}

Eigen::MatrixXd companion_matrix(const CoefSet& coefs, int p) {
  const int N = coefs.N;
  if (p == 0) return Eigen::MatrixXd();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N * p, N * p);
  for (int k = 0; k < p; ++k)
    C.block(0, N * k, N, N) = coefs.mats[static_cast<size_t>(k)];
  if (p > 1)
    C.block(N, 0, N * (p - 1), N * (p - 1)) =
        Eigen::MatrixXd::Identity(N * (p - 1), N * (p - 1));
  return C;
}

double spectral_radius(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

static double sufficient_lhs(const SpvarModel& model, double rho_bar,
                             double* rho_companion_out) {
  const auto& o = model.orders;
  double rho_comp = 0.0;
  if (o.p > 0) rho_comp = spectral_radius(companion_matrix(model.coefs, o.p));
  if (rho_companion_out) *rho_companion_out = rho_comp;
  double tail = 0.0;
  for (int k = o.p; k < o.d(); ++k)
    tail += spectral_radius(model.coefs.mats[static_cast<size_t>(k)]);
  const double factor = (o.r + 2 * o.s) > 0 ? rho_bar / (1.0 - rho_bar) : 0.0;
  return rho_comp + factor * tail;
}

bool stationarity_sufficient(const SpvarModel& model, double rho_bar,
                             double* lhs_out, double* rho_companion_out) {
  validate(model);
  const bool has_decay = (model.orders.r + 2 * model.orders.s) > 0;
  if (has_decay) {
    if (!(rho_bar > 0.0 && rho_bar < 1.0))
      throw std::invalid_argument("rho_bar must lie in (0,1)");
  } else if (!(rho_bar >= 0.0 && rho_bar < 1.0)) {
    throw std::invalid_argument("rho_bar must lie in [0,1) when r = s = 0");
  }
  for (size_t j = 0; j < model.omega.lambdas.size(); ++j)
    if (std::abs(model.omega.lambdas[j]) > rho_bar)
      throw std::invalid_argument("|lambda_" + std::to_string(j + 1) +
                                  "| exceeds rho_bar");
  for (size_t m = 0; m < model.omega.etas.size(); ++m)
    if (std::abs(model.omega.etas[m][0]) > rho_bar)
      throw std::invalid_argument("gamma_" + std::to_string(m + 1) +
                                  " exceeds rho_bar");
  const double lhs = sufficient_lhs(model, rho_bar, rho_companion_out);
  if (lhs_out) *lhs_out = lhs;
  return lhs < 1.0;
}

bool stationarity_sufficient(const SpvarModel& model, double* lhs_out,
                             double* rho_companion_out) {
  double rho = rho_bar_of(model.omega);
  if ((model.orders.r + 2 * model.orders.s) > 0 && rho == 0.0)
    rho = 1e-12;  // all decay rates exactly zero: the tail term vanishes
  return stationarity_sufficient(model, rho, lhs_out, rho_companion_out);
}

StationarityReport stationarity_numerical(const SpvarModel& model, int J_max,
                                          int tail_window, double tol) {
  if (J_max < tail_window || tail_window < 1 || tol <= 0.0)
    throw std::invalid_argument("need J_max >= tail_window >= 1 and tol > 0");
  validate(model);
  StationarityReport rep;
  try {
    rep.sufficient_ok = stationarity_sufficient(model, nullptr, &rep.rho_companion);
  } catch (const std::invalid_argument&) {
    rep.sufficient_ok = false;  // a decay rate at or beyond 1
    if (model.orders.p > 0)
      rep.rho_companion = spectral_radius(companion_matrix(model.coefs, model.orders.p));
  }

  const int N = model.coefs.N;
  std::vector<Eigen::MatrixXd> psi;
  psi.push_back(Eigen::MatrixXd::Identity(N, N));
  std::vector<Eigen::MatrixXd> A;
  double S = 0.0;
  for (int j = 1; j <= J_max; ++j) {
    A.push_back(coef_matrix(j, model));
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(N, N);
    for (int h = 1; h <= j; ++h)
      next.noalias() += A[static_cast<size_t>(h - 1)] * psi[static_cast<size_t>(j - h)];
    const double inc = next.norm();
    if (!std::isfinite(inc) || inc > 1e150) {
      rep.numerical_ok = false;
      rep.J_used = j;
      return rep;
    }
    S += inc;
    rep.partial_sums.push_back(S);
    psi.push_back(std::move(next));
  }
  rep.J_used = J_max;
  bool ok = true;
  for (int j = J_max - tail_window; j < J_max; ++j) {
    const double inc = rep.partial_sums[static_cast<size_t>(j)] -
                       (j > 0 ? rep.partial_sums[static_cast<size_t>(j - 1)] : 0.0);
    if (inc >= tol) ok = false;
  }
  rep.numerical_ok = ok;
  return rep;
}

SpvarModel canonicalize(const SpvarModel& model) {
  validate(model);
  const auto& o = model.orders;
  SpvarModel out = model;

  std::vector<int> lam_idx(static_cast<size_t>(o.r));
  std::iota(lam_idx.begin(), lam_idx.end(), 0);
  std::stable_sort(lam_idx.begin(), lam_idx.end(), [&](int a, int b) {
    return model.omega.lambdas[static_cast<size_t>(a)] >
           model.omega.lambdas[static_cast<size_t>(b)];
  });
  std::vector<int> eta_idx(static_cast<size_t>(o.s));
  std::iota(eta_idx.begin(), eta_idx.end(), 0);
  std::stable_sort(eta_idx.begin(), eta_idx.end(), [&](int a, int b) {
    const auto& ea = model.omega.etas[static_cast<size_t>(a)];
    const auto& eb = model.omega.etas[static_cast<size_t>(b)];
    if (ea[1] != eb[1]) return ea[1] < eb[1];
    return ea[0] < eb[0];
  });

  for (int j = 0; j < o.r; ++j) {
    out.omega.lambdas[static_cast<size_t>(j)] =
        model.omega.lambdas[static_cast<size_t>(lam_idx[static_cast<size_t>(j)])];
    out.coefs.mats[static_cast<size_t>(o.p + j)] =
        model.coefs.mats[static_cast<size_t>(o.p + lam_idx[static_cast<size_t>(j)])];
  }
  for (int m = 0; m < o.s; ++m) {
    const int src = eta_idx[static_cast<size_t>(m)];
    out.omega.etas[static_cast<size_t>(m)] = model.omega.etas[static_cast<size_t>(src)];
    out.coefs.mats[static_cast<size_t>(o.p + o.r + 2 * m)] =
        model.coefs.mats[static_cast<size_t>(o.p + o.r + 2 * src)];
    out.coefs.mats[static_cast<size_t>(o.p + o.r + 2 * m + 1)] =
        model.coefs.mats[static_cast<size_t>(o.p + o.r + 2 * src + 1)];
  }
  return out;
}

}  // namespace spvarinf
