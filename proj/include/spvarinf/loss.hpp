#pragma once

#include "spvarinf/model.hpp"
#include "spvarinf/simulate.hpp"

namespace spvarinf {

// Stacked predictors under zero initialization: row t of Z is
// (x_t^{[1]}',...,x_t^{[d]}') with x_t^{[k]} = sum_{h=1}^{t-1} l_{h,k} y_{t-h}.
// Optional derivative panels hold the per-parameter derivatives of the
// decay blocks (for the complex pairs, of both the cos and sin block).
struct PredictorPanel {
  ModelOrders orders;
  Omega omega;
  int T = 0;
  int N = 0;
  Eigen::MatrixXd Z;  // T x (N*d)
  bool has_derivatives = false;
  std::vector<Eigen::MatrixXd> dlam;                      // r panels, T x N
  std::vector<Eigen::MatrixXd> dcos_dgam, dsin_dgam;      // s panels each
  std::vector<Eigen::MatrixXd> dcos_dthe, dsin_dthe;      // s panels each
};

// O(T*N*d) recursive construction (AR lag shifts, geometric and complex
// accumulators).
PredictorPanel build_predictors(const Eigen::MatrixXd& Y,
                                const ModelOrders& orders, const Omega& omega,
                                bool with_derivatives);

/// O(T^2) reference: direct double loop through weight(); no derivatives.
PredictorPanel build_predictors_bruteforce(const Eigen::MatrixXd& Y,
                                           const ModelOrders& orders,
                                           const Omega& omega);

// Rewrites only the decay-rate columns (and derivative panels when
// requested) of an existing panel for a new omega; the AR columns depend on
// Y alone and are kept. Used by the solver, which changes omega every
// iteration.
void update_decay_blocks(PredictorPanel& panel, const Eigen::MatrixXd& Y,
                         const Omega& omega, bool with_derivatives);

// Predictor row for t = T+1 given the observed history (one-step forecasts).
Eigen::RowVectorXd next_predictor_row(const Eigen::MatrixXd& Y,
                                      const ModelOrders& orders,
                                      const Omega& omega);

// Horizontal concatenation (G_1 ... G_d) -> N x (N*d), and its inverse.
Eigen::MatrixXd concat_coefs(const CoefSet& coefs);
CoefSet split_coefs(const Eigen::MatrixXd& Gcat, int N);

// (1/T) sum_t ||y_t - G z_t||_2^2. Yresp may have fewer rows than N (rowwise
// estimation); Gcat is then rows_of_Yresp x (N*d).
double loss_value(const Eigen::MatrixXd& Yresp, const PredictorPanel& panel,
                  const Eigen::MatrixXd& Gcat);
double loss_value(const Eigen::MatrixXd& Yresp, const PredictorPanel& panel,
                  const CoefSet& coefs);

// -(2/T) sum_t (y_t - G z_t) z_t'.
Eigen::MatrixXd grad_g(const Eigen::MatrixXd& Yresp,
                       const PredictorPanel& panel,
                       const Eigen::MatrixXd& Gcat);

// Length r+2s vector: entry for lambda_j is
// -(2/T) sum_t <y_t - G z_t, G_{p+j} v_t>, complex-pair entries use both
// matrices of the pair and their derivative panels. Requires derivatives.
Eigen::VectorXd grad_omega(const Eigen::MatrixXd& Yresp,
                           const PredictorPanel& panel,
                           const Eigen::MatrixXd& Gcat);

// Variants taking the precomputed residual matrix R = Yresp - Z G'.
Eigen::MatrixXd grad_g_resid(const Eigen::MatrixXd& R, const PredictorPanel& panel);
Eigen::VectorXd grad_omega_resid(const Eigen::MatrixXd& R,
                                 const PredictorPanel& panel,
                                 const Eigen::MatrixXd& Gcat);

// eps_t = y_t - sum_{h<t} A_h y_{t-h} for the full panel.
Eigen::MatrixXd residuals(const SpvarModel& model, const SeriesPanel& Y);

}  // namespace spvarinf
