#pragma once

#include "spvarinf/solver.hpp"

namespace spvarinf {

enum class RefitSchedule { EveryStep, Once };

struct StepRecord {
  int t = 0;  // forecast target row (1-based)
  Eigen::VectorXd forecast;
  Eigen::VectorXd realized;
  double l2_error = 0.0;
  bool failed = false;
};

struct RollingReport {
  std::vector<StepRecord> per_step;
  double mean_error = 0.0;  // over non-failed steps
  std::string estimator;
  std::string refit_schedule;
};

struct RollSpec {
  ModelOrders orders;
  FitConfig config;
  bool use_re = false;
};

// yhat_{T+1} = sum_{h=1}^{T} A_h y_{T+1-h} via the predictor recursions.
Eigen::VectorXd one_step_forecast(const SpvarModel& model,
                                  const SeriesPanel& history);

// For k = 1..horizon_steps: fit on rows 1..origin+k-1 (or once on
// 1..origin), forecast row origin+k, record the l2 error. lambda_g and all
// tuning stay fixed across the window.
RollingReport rolling_eval(const SeriesPanel& Y, const RollSpec& spec,
                           int origin, int horizon_steps,
                           RefitSchedule refit = RefitSchedule::EveryStep);

}  // namespace spvarinf
