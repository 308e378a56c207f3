#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace spvarinf {

// Orders of the parametric VAR(inf): p finite AR lags, r real decay rates,
// s damped cosine/sine pairs. d = p + r + 2s base coefficient matrices.
struct ModelOrders {
  int p = 0;
  int r = 0;
  int s = 0;
  int d() const { return p + r + 2 * s; }
};

// Decay parameters: lambdas[j] in (-1,1), etas[m] = (gamma_m, theta_m) with
// gamma_m in [0,1), theta_m in (0,pi).
struct Omega {
  std::vector<double> lambdas;
  std::vector<std::array<double, 2>> etas;
};

// The d base matrices G_1..G_d, each N x N. First p are the AR blocks.
struct CoefSet {
  int N = 0;
  std::vector<Eigen::MatrixXd> mats;
};

struct SpvarModel {
  ModelOrders orders;
  Omega omega;
  CoefSet coefs;
  std::vector<std::string> names;  // optional series labels
};

struct StationarityReport {
  bool sufficient_ok = false;
  std::vector<double> partial_sums;  // S_J = sum_{j<=J} ||Psi_j||_F
  bool numerical_ok = false;
  int J_used = 0;
  double rho_companion = 0.0;
};

// Throws std::invalid_argument if omega lengths or coefficient count/shape
// disagree with the orders.
void validate(const SpvarModel& model);

// max{|lambda_j|, gamma_m}; 0 when r = s = 0.
double rho_bar_of(const Omega& omega);

// Weight l_{h,k}(omega): indicator for k <= p, lambda_j^{h-p} for k = p+j,
// gamma_m^{h-p} cos/sin((h-p) theta_m) for the complex pair columns.
double weight(int h, int k, const ModelOrders& orders, const Omega& omega);

// A_h = sum_k l_{h,k}(omega) G_k.
Eigen::MatrixXd coef_matrix(int h, const SpvarModel& model);

// Psi_1..Psi_J via the convolution recursion Psi_j = sum_{h<=j} A_h Psi_{j-h},
// Psi_0 = I. Equals the combinatorial composition sum.
std::vector<Eigen::MatrixXd> vma_coeffs(const SpvarModel& model, int J);

// Sufficient stationarity condition:
//   rho(companion(G_1..G_p)) + rho_bar/(1-rho_bar) * sum_{k>p} rho(G_k) < 1.
// rho_bar must dominate every |lambda_j| and gamma_m. Optional outputs give
// the left-hand side and the companion spectral radius.
bool stationarity_sufficient(const SpvarModel& model, double rho_bar,
                             double* lhs_out = nullptr,
                             double* rho_companion_out = nullptr);
// Convenience overload using rho_bar_of(model.omega).
bool stationarity_sufficient(const SpvarModel& model,
                             double* lhs_out = nullptr,
                             double* rho_companion_out = nullptr);

// Partial sums S_J of ||Psi_j||_F up to J_max; numerical_ok when the last
// tail_window increments all fall below tol. Divergence (overflow) is
// reported, not thrown.
StationarityReport stationarity_numerical(const SpvarModel& model,
                                          int J_max = 200,
                                          int tail_window = 10,
                                          double tol = 1e-8);

// Equivalent model with lambdas sorted descending and etas sorted by theta
// ascending (gamma breaking ties), G blocks permuted to match.
SpvarModel canonicalize(const SpvarModel& model);

// Np x Np companion matrix of the AR blocks (empty when p = 0).
Eigen::MatrixXd companion_matrix(const CoefSet& coefs, int p);

double spectral_radius(const Eigen::MatrixXd& M);

}  // namespace spvarinf
