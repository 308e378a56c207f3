#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spvarinf/experiments.hpp"

namespace py = pybind11;

namespace {

using namespace spvarinf;

SeriesPanel panel_from(const Eigen::MatrixXd& data) {
  SeriesPanel p;
  p.data = data;
  p.names = default_names(static_cast<int>(data.cols()));
  return p;
}

FitConfig config_from(double lambda_g, int max_iter, double tol,
                      const std::string& g_init, int screen_iters,
                      int screen_keep, int threads) {
  FitConfig c;
  c.lambda_g = lambda_g;
  c.max_iter = max_iter;
  c.tol = tol;
  c.g_init = g_init == "zero" ? GInitMode::Zero : GInitMode::VarLasso;
  c.screen_iters = screen_iters;
  c.screen_keep = screen_keep;
  c.threads = threads;
  return c;
}

py::dict result_dict(const FitResult& r) {
  py::dict d;
  d["model_json"] = model_to_json(r.model);
  d["converged"] = r.converged;
  d["iterations"] = r.iterations;
  d["loss"] = r.in_sample_loss;
  d["nnz"] = r.nnz;
  d["objective_trace"] = r.objective_trace;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "sparse parametric VAR(infinity): simulation, penalized "
            "estimation, order selection, forecasting";

  m.def(
      "random_model",
      [](int n, int p, int r, int s, std::vector<double> lambdas,
         std::vector<std::array<double, 2>> etas, int nonzeros_per_row,
         double coef_min, double coef_max, double stationarity_target,
         std::uint64_t seed) {
        DgpSpec spec;
        spec.N = n;
        spec.orders = {p, r, s};
        spec.omega.lambdas = std::move(lambdas);
        spec.omega.etas = std::move(etas);
        spec.nonzeros_per_row = nonzeros_per_row;
        spec.coef_min = coef_min;
        spec.coef_max = coef_max;
        spec.stationarity_target = stationarity_target;
        Rng rng(seed);
        SpvarModel model;
        model.orders = spec.orders;
        model.omega = spec.omega;
        model.coefs = gen_sparse_coefs(spec, rng);
        model.names = default_names(n);
        return model_to_json(model);
      },
      py::arg("n"), py::arg("p"), py::arg("r"), py::arg("s"),
      py::arg("lambdas"), py::arg("etas") = std::vector<std::array<double, 2>>{},
      py::arg("nonzeros_per_row") = 3, py::arg("coef_min") = -0.5,
      py::arg("coef_max") = 0.5, py::arg("stationarity_target") = 0.8,
      py::arg("seed") = 0,
      "Draw a sparse stationary model; returns its JSON text.");

  m.def(
      "simulate",
      [](const std::string& model_json, int t, int burn_in, double noise_sd,
         std::uint64_t seed, bool force) {
        Rng rng(seed);
        return simulate_spvar(model_from_json(model_json), t, burn_in,
                              noise_sd, rng, force)
            .data;
      },
      py::arg("model_json"), py::arg("t"), py::arg("burn_in") = 200,
      py::arg("noise_sd") = 0.2, py::arg("seed") = 0, py::arg("force") = false,
      "Sample path of the model, rows are time points.");

  m.def(
      "fit",
      [](const Eigen::MatrixXd& data, int p, int r, int s, double lambda_g,
         const std::string& estimator, int max_iter, double tol,
         const std::string& g_init, int screen_iters, int screen_keep,
         int threads) {
        const SeriesPanel Y = panel_from(data);
        const ModelOrders orders{p, r, s};
        const FitConfig cfg = config_from(lambda_g, max_iter, tol, g_init,
                                          screen_iters, screen_keep, threads);
        return result_dict(estimator == "re" ? fit_re(Y, orders, cfg)
                                             : fit_je(Y, orders, cfg));
      },
      py::arg("data"), py::arg("p"), py::arg("r"), py::arg("s"),
      py::arg("lambda_g") = 0.1, py::arg("estimator") = "je",
      py::arg("max_iter") = 5000, py::arg("tol") = 1e-6,
      py::arg("g_init") = "lasso", py::arg("screen_iters") = 0,
      py::arg("screen_keep") = 2, py::arg("threads") = 1,
      "Penalized fit; returns model_json plus solver diagnostics.");

  m.def(
      "select_orders",
      [](const Eigen::MatrixXd& data, int max_p, int max_r, int max_s,
         double tau, double q, double lambda_c, const std::string& estimator,
         double lambda_g, int max_iter, double tol, const std::string& g_init,
         int screen_iters, int screen_keep, int threads) {
        const SeriesPanel Y = panel_from(data);
        SelectConfig sc;
        sc.fit = config_from(lambda_g, max_iter, tol, g_init, screen_iters,
                             screen_keep, 1);
        sc.tau = tau;
        sc.q = q;
        sc.lambda_c = lambda_c;
        sc.use_re = estimator == "re";
        sc.threads = threads;
        const BicTable table = select_orders(Y, {max_p, max_r, max_s}, sc);
        py::list rows;
        for (const auto& row : table.rows) {
          py::dict rd;
          rd["p"] = row.orders.p;
          rd["r"] = row.orders.r;
          rd["s"] = row.orders.s;
          rd["lambda_g"] = row.lambda_g_used;
          rd["loss"] = row.loss;
          rd["bic"] = row.bic;
          rd["converged"] = row.converged;
          rd["failed"] = row.failed;
          rd["error"] = row.error;
          rows.append(rd);
        }
        py::dict out;
        const BicRow& chosen = table.chosen_row();
        out["p"] = chosen.orders.p;
        out["r"] = chosen.orders.r;
        out["s"] = chosen.orders.s;
        out["rows"] = rows;
        return out;
      },
      py::arg("data"), py::arg("max_p"), py::arg("max_r"), py::arg("max_s"),
      py::arg("tau") = 0.05, py::arg("q") = 0.0, py::arg("lambda_c") = 0.0,
      py::arg("estimator") = "je", py::arg("lambda_g") = 0.1,
      py::arg("max_iter") = 5000, py::arg("tol") = 1e-6,
      py::arg("g_init") = "lasso", py::arg("screen_iters") = 0,
      py::arg("screen_keep") = 2, py::arg("threads") = 1,
      "Information-criterion scan of every (p,r,s) cell up to the bounds.");

  m.def(
      "select_lambda",
      [](const Eigen::MatrixXd& data, int p, int r, int s,
         std::vector<double> grid, int max_iter, double tol,
         const std::string& g_init, int screen_iters, int screen_keep,
         int threads) {
        const FitConfig cfg = config_from(0.1, max_iter, tol, g_init,
                                          screen_iters, screen_keep, threads);
        return select_lambda_g(panel_from(data), {p, r, s}, std::move(grid),
                               cfg);
      },
      py::arg("data"), py::arg("p"), py::arg("r"), py::arg("s"),
      py::arg("grid") = std::vector<double>{}, py::arg("max_iter") = 5000,
      py::arg("tol") = 1e-6, py::arg("g_init") = "lasso",
      py::arg("screen_iters") = 0, py::arg("screen_keep") = 2,
      py::arg("threads") = 1,
      "Penalty level chosen on a (default log-spaced) grid.");

  m.def(
      "one_step_forecast",
      [](const std::string& model_json, const Eigen::MatrixXd& history) {
        return one_step_forecast(model_from_json(model_json),
                                 panel_from(history));
      },
      py::arg("model_json"), py::arg("history"),
      "Forecast of the row after the last one in history.");

  m.def(
      "impulse_responses",
      [](const std::string& model_json, int horizon) {
        return impulse_responses(model_from_json(model_json), horizon);
      },
      py::arg("model_json"), py::arg("horizon") = 20,
      "Moving-average coefficient matrices Psi_1..Psi_horizon.");

  m.def(
      "coef_matrix",
      [](const std::string& model_json, int h) {
        return coef_matrix(h, model_from_json(model_json));
      },
      py::arg("model_json"), py::arg("h"), "Lag-h autoregressive matrix A_h.");

  m.def(
      "granger",
      [](const std::string& model_json, double zero_tol) {
        const GrangerNetwork net =
            granger_network(model_from_json(model_json), zero_tol);
        py::list edges;
        for (const auto& e : net.edges) {
          py::dict ed;
          ed["from"] = e.from;
          ed["to"] = e.to;
          ed["kind"] = to_string(e.kind);
          ed["magnitude"] = e.magnitude;
          ed["support"] = e.support;
          edges.append(ed);
        }
        return edges;
      },
      py::arg("model_json"), py::arg("zero_tol") = 1e-8,
      "Directed edges j->i with their lag-range kind and magnitude.");

  m.def(
      "stationarity",
      [](const std::string& model_json) {
        const SpvarModel model = model_from_json(model_json);
        double lhs = 0.0, rho_c = 0.0;
        const bool ok = stationarity_sufficient(model, &lhs, &rho_c);
        const StationarityReport rep = stationarity_numerical(model);
        py::dict d;
        d["sufficient_ok"] = ok;
        d["lhs"] = lhs;
        d["rho_companion"] = rho_c;
        d["numerical_ok"] = rep.numerical_ok;
        d["partial_sum"] =
            rep.partial_sums.empty() ? 0.0 : rep.partial_sums.back();
        return d;
      },
      py::arg("model_json"),
      "Sufficient-condition and numerical stationarity diagnostics.");
}
