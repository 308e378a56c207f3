#include "spvarinf/forecast.hpp"

#include <stdexcept>

namespace spvarinf {

Eigen::VectorXd one_step_forecast(const SpvarModel& model,
                                  const SeriesPanel& history) {
  validate(model);
  if (history.N() != model.coefs.N)
    throw std::invalid_argument("one_step_forecast: history dimension does not match the model");
  if (history.T() < 1)
    throw std::invalid_argument("one_step_forecast: history must contain at least one row");
  const Eigen::RowVectorXd z =
      next_predictor_row(history.data, model.orders, model.omega);
  return concat_coefs(model.coefs) * z.transpose();
}

RollingReport rolling_eval(const SeriesPanel& Y, const RollSpec& spec,
                           int origin, int horizon_steps, RefitSchedule refit) {
  const int T = Y.T();
  const int N = Y.N();
  if (horizon_steps < 0)
    throw std::invalid_argument("rolling_eval: horizon_steps must be >= 0");
  if (origin < 1) throw std::invalid_argument("rolling_eval: origin must be >= 1");
  if (origin + horizon_steps > T)
    throw std::invalid_argument("rolling_eval: origin + horizon_steps must be <= T");

  RollingReport rep;
  rep.estimator = spec.use_re ? "re" : "je";
  rep.refit_schedule = refit == RefitSchedule::EveryStep ? "every" : "once";
  if (horizon_steps == 0) return rep;

  FitResult fitted;
  Eigen::MatrixXd Gcat;
  bool have_fit = false;
  double err_sum = 0.0;
  int n_ok = 0;
  for (int k = 1; k <= horizon_steps; ++k) {
    const int train_T = refit == RefitSchedule::EveryStep ? origin + k - 1 : origin;
    StepRecord step;
    step.t = origin + k;
    step.realized = Y.data.row(origin + k - 1).transpose();

    if (refit == RefitSchedule::EveryStep || !have_fit) {
      SeriesPanel train;
      train.data = Y.data.topRows(train_T);
      train.names = Y.names;
      try {
        fitted = spec.use_re ? fit_re(train, spec.orders, spec.config)
                             : fit_je(train, spec.orders, spec.config);
        Gcat = concat_coefs(fitted.model.coefs);
        have_fit = true;
      } catch (const std::exception&) {
        have_fit = false;
      }
    }
    if (!have_fit) {
      step.failed = true;
      rep.per_step.push_back(std::move(step));
      continue;
    }

    const Eigen::MatrixXd history = Y.data.topRows(origin + k - 1);
    Eigen::VectorXd yhat(N);
    if (spec.use_re && static_cast<int>(fitted.per_row_omega.size()) == N) {
      // Each row forecasts with its own omega_i.
      for (int i = 0; i < N; ++i) {
        const Eigen::RowVectorXd z = next_predictor_row(
            history, spec.orders, fitted.per_row_omega[static_cast<size_t>(i)]);
        yhat(i) = Gcat.row(i).dot(z);
      }
    } else {
      const Eigen::RowVectorXd z =
          next_predictor_row(history, spec.orders, fitted.model.omega);
      yhat = Gcat * z.transpose();
    }
    step.forecast = yhat;
    step.l2_error = (yhat - step.realized).norm();
    err_sum += step.l2_error;
    ++n_ok;
    rep.per_step.push_back(std::move(step));
  }
  rep.mean_error = n_ok > 0 ? err_sum / n_ok : 0.0;
  return rep;
}

}  // namespace spvarinf
