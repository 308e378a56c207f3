#pragma once

#include <cstdint>
#include <optional>

#include "spvarinf/loss.hpp"

namespace spvarinf {

enum class GInitMode { Zero, VarLasso, Explicit };

struct FitConfig {
  double lambda_g = 0.1;
  double step = 0.0;          // 0 -> 1/L_hat from a power-iteration estimate
  bool backtracking = true;   // halve alpha until the majorization bound holds
  double epsilon_box = 0.05;  // boundary margin of C_lambda and C_eta
  int max_iter = 5000;
  double tol = 1e-6;          // relative penalized-objective change
  std::vector<Omega> omega_inits;  // empty -> auto grid from init_omega_candidates
  GInitMode g_init = GInitMode::VarLasso;
  Eigen::MatrixXd g_init_explicit;
  std::uint64_t seed = 0;     // reserved; the solver itself is deterministic
  int threads = 1;

  // Multi-start screening: when screen_iters > 0 every candidate runs that
  // many iterations, only the screen_keep best continue to convergence.
  // Off (0) runs every candidate to convergence.
  int screen_iters = 0;
  int screen_keep = 2;

  // Budget of the preliminary Lasso VAR(P) used only to initialize g.
  int init_lasso_max_iter = 500;
  double init_lasso_tol = 1e-4;
};

struct FitResult {
  SpvarModel model;
  std::vector<double> objective_trace;  // penalized objective per iteration
  bool converged = false;
  int iterations = 0;
  double in_sample_loss = 0.0;  // unpenalized zero-initialized loss
  int nnz = 0;
  FitConfig config_used;
  std::vector<Omega> per_row_omega;  // rowwise estimator only
  double final_alpha = 0.0;          // g-step length at exit
};

// sign(z) * max(|z| - tau, 0), componentwise.
Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& z, double tau);
double soft_threshold(double z, double tau);

// Clamp lambda_j to [-1+eps, 1-eps], gamma_m to [0, 1-eps], theta_m to
// [eps, pi-eps].
Omega project_omega(const Omega& omega, double epsilon_box);

// Initial-value grid; dense single-slot grids when r = 1 or s = 1, otherwise
// all sorted combinations of distinct values from the coarse grids.
std::vector<Omega> init_omega_candidates(const ModelOrders& orders);

// Lasso VAR(P) by proximal gradient on the zero-initialized loss (the r=s=0
// special case of the joint estimator). Returns A_1..A_P.
std::vector<Eigen::MatrixXd> var_lasso_fit(const SeriesPanel& Y, int P,
                                           double lambda_g,
                                           const FitConfig& config);

// g^{(0)} from a preliminary Lasso VAR(P), P = floor(1.5 sqrt(T)), mapped
// through the pseudoinverse of the P x d truncation of L(omega0):
// G_k^{(0)} = sum_h Lplus_{k,h} A_h^{(0)}.
Eigen::MatrixXd init_g(const SeriesPanel& Y, const Omega& omega0,
                       const ModelOrders& orders, const FitConfig& config);

// Joint estimator: block coordinate descent alternating projected gradient
// steps on omega with a proximal (soft-thresholded) gradient step on g.
// Delegates to multi_start when more than one omega init is configured.
FitResult fit_je(const SeriesPanel& Y, const ModelOrders& orders,
                 const FitConfig& config);

// Rowwise estimator: independent fits per row, each with its own omega_i;
// the assembled model reports the omega of the row with the largest
// in-sample loss reduction, per-row omegas kept in per_row_omega.
FitResult fit_re(const SeriesPanel& Y, const ModelOrders& orders,
                 const FitConfig& config);

// Runs the solver from every omega candidate, returns the minimum
// in-sample-loss result; ties by fewer nonzeros, then candidate order.
FitResult multi_start(const SeriesPanel& Y, const ModelOrders& orders,
                      const FitConfig& config);

}  // namespace spvarinf
