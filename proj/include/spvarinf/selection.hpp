#pragma once

#include "spvarinf/solver.hpp"

namespace spvarinf {

struct BicRow {
  ModelOrders orders;
  double lambda_g_used = 0.0;
  double loss = 0.0;
  double bic = 0.0;
  bool converged = false;
  bool failed = false;
  std::string error;
};

struct BicTable {
  std::vector<BicRow> rows;
  int chosen = -1;  // index of the argmin row
  const BicRow& chosen_row() const { return rows.at(static_cast<size_t>(chosen)); }
};

struct SelectConfig {
  FitConfig fit;
  double tau = 0.05;
  double q = 0.0;
  bool use_re = false;
  // lambda_c > 0 switches the per-cell penalty to the scaled rule
  // lambda_g = lambda_c * sqrt(log(N * max(p,1)) / T); otherwise fit.lambda_g
  // is used for every cell.
  double lambda_c = 0.0;
  int threads = 1;
};

// log(loss) + tau * d * [log(N * max(p,1)) / T]^{1 - q/2} * log(T).
double bic_score(double loss, const ModelOrders& orders, int N, int T,
                 double tau = 0.05, double q = 0.0);

// Fits every (p,r,s) up to max_orders, scores the in-sample loss, returns the
// table with the argmin among converged cells (ties: smaller d, then
// lexicographic orders).
BicTable select_orders(const SeriesPanel& Y, const std::array<int, 3>& max_orders,
                       const SelectConfig& config);

// Sparsity-penalized criterion log(loss) + nnz * log(T) * log(N^2 d) / T over
// the grid (descending, warm-started); ties prefer the larger (sparser)
// lambda_g. Empty grid -> default 20 log-spaced points in [1e-3, 1]*lambda_max.
double select_lambda_g(const SeriesPanel& Y, const ModelOrders& orders,
                       std::vector<double> lambda_grid, const FitConfig& config);

// Smallest lambda_g whose solution is all-zero: max |grad_g| at g = 0 under
// the first omega candidate.
double lambda_max_bound(const SeriesPanel& Y, const ModelOrders& orders,
                        const FitConfig& config);

}  // namespace spvarinf
