#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "spvarinf/model.hpp"

namespace spvarinf {

// N-variate series of length T, row t = y_t. Standardization metadata is
// recorded when a loader rescaled the columns.
struct SeriesPanel {
  Eigen::MatrixXd data;
  std::vector<std::string> names;
  bool standardized = false;
  Eigen::VectorXd means;
  Eigen::VectorXd sds;

  int T() const { return static_cast<int>(data.rows()); }
  int N() const { return static_cast<int>(data.cols()); }
};

std::vector<std::string> default_names(int N);

// Synthetic-data recipe: sparse uniform G entries rescaled to a stationarity
// margin, Gaussian innovations.
struct DgpSpec {
  int N = 10;
  ModelOrders orders;
  Omega omega;
  int nonzeros_per_row = 3;   // row-sparse mode
  bool total_mode = false;    // total-count mode instead of per-row
  int total_nonzeros = 0;     // used when total_mode
  double coef_min = -0.5;
  double coef_max = 0.5;
  double stationarity_target = 0.8;
  double noise_sd = 0.2;
  std::uint64_t seed = 0;
};

using Rng = std::mt19937_64;

// Sparsity pattern + uniform values, then rescale_for_stationarity.
CoefSet gen_sparse_coefs(const DgpSpec& spec, Rng& rng);

// Scales all G_k by a common factor c so the sufficient-condition LHS equals
// `target` (bisection; LHS is continuous and increasing in c). All-zero input
// is returned unchanged with *all_zero = true.
CoefSet rescale_for_stationarity(const CoefSet& coefs, const ModelOrders& orders,
                                 const Omega& omega, double target,
                                 bool* all_zero = nullptr);

// Iterates y_t = sum_k G_k x_t^{[k]} + eps_t from zero initial values for
// burn_in + T steps, returns the last T rows. Refuses non-stationary models
// unless force.
SeriesPanel simulate_spvar(const SpvarModel& model, int T, int burn_in,
                           double noise_sd, Rng& rng, bool force = false);

// Theta^{h-1} (Phi - Theta).
Eigen::MatrixXd varma11_ar_coef(const Eigen::MatrixXd& Phi,
                                const Eigen::MatrixXd& Theta, int h);

// Orthogonal matrix via QR of a Gaussian draw with sign-fixed R diagonal.
Eigen::MatrixXd random_orthogonal(int n, Rng& rng);

// Builds Theta = B J B^{-1} with J = diag{lambda_1..lambda_r, C_1..C_s, 0}
// and B = diag{B0, I}, then the equivalent p = 1 model with G_1 = Phi - Theta
// and rank-one/rank-two MA blocks from the Jordan factors.
std::pair<SpvarModel, Eigen::MatrixXd> varma11_from_jordan(
    const Eigen::MatrixXd& Phi, const Omega& omega, const Eigen::MatrixXd& B0);

// y_t = Phi y_{t-1} + eps_t - Theta eps_{t-1}, zero initials plus burn-in.
SeriesPanel simulate_varma11(const Eigen::MatrixXd& Phi,
                             const Eigen::MatrixXd& Theta, int T, int burn_in,
                             double noise_sd, Rng& rng);

}  // namespace spvarinf
