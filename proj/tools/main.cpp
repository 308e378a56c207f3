#include <array>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spvarinf/experiments.hpp"

namespace {

using namespace spvarinf;

struct FitFlags {
  double lambda_g = 0.1;
  int max_iter = 5000;
  double tol = 1e-6;
  double step = 0.0;
  bool no_backtracking = false;
  double epsilon_box = 0.05;
  std::string g_init = "lasso";
  int screen_iters = 0;
  int screen_keep = 2;
  int init_lasso_max_iter = 500;
  double init_lasso_tol = 1e-4;
};

void add_fit_flags(CLI::App* cmd, FitFlags& f) {
  cmd->add_option("--lambda-g", f.lambda_g, "l1 penalty weight");
  cmd->add_option("--max-iter", f.max_iter, "solver iteration cap");
  cmd->add_option("--tol", f.tol, "relative objective-change tolerance");
  cmd->add_option("--step", f.step, "fixed step length, 0 = spectral default");
  cmd->add_flag("--no-backtracking", f.no_backtracking, "disable the line search");
  cmd->add_option("--epsilon-box", f.epsilon_box, "decay-parameter box margin");
  cmd->add_option("--g-init", f.g_init, "g start: zero|lasso")
      ->check(CLI::IsMember({"zero", "lasso"}));
  cmd->add_option("--screen-iters", f.screen_iters,
                  "multi-start screening iterations, 0 = run every start fully");
  cmd->add_option("--screen-keep", f.screen_keep, "starts kept after screening");
  cmd->add_option("--init-lasso-max-iter", f.init_lasso_max_iter,
                  "budget of the initializing Lasso VAR");
  cmd->add_option("--init-lasso-tol", f.init_lasso_tol,
                  "tolerance of the initializing Lasso VAR");
}

FitConfig to_config(const FitFlags& f, int threads) {
  FitConfig c;
  c.lambda_g = f.lambda_g;
  c.max_iter = f.max_iter;
  c.tol = f.tol;
  c.step = f.step;
  c.backtracking = !f.no_backtracking;
  c.epsilon_box = f.epsilon_box;
  c.g_init = f.g_init == "zero" ? GInitMode::Zero : GInitMode::VarLasso;
  c.screen_iters = f.screen_iters;
  c.screen_keep = f.screen_keep;
  c.init_lasso_max_iter = f.init_lasso_max_iter;
  c.init_lasso_tol = f.init_lasso_tol;
  c.threads = threads;
  return c;
}

ModelOrders parse_orders(const std::vector<int>& v, const std::string& what) {
  if (v.size() != 3)
    throw std::runtime_error(what + " expects three values p,r,s");
  return ModelOrders{v[0], v[1], v[2]};
}

Omega parse_omega(const std::vector<double>& lambdas,
                  const std::vector<double>& etas_flat) {
  if (etas_flat.size() % 2 != 0)
    throw std::runtime_error("--etas expects gamma,theta pairs (even count)");
  Omega w;
  w.lambdas = lambdas;
  for (size_t m = 0; m + 1 < etas_flat.size(); m += 2)
    w.etas.push_back({etas_flat[m], etas_flat[m + 1]});
  return w;
}

std::string joined(const std::string& out_dir, const std::string& file) {
  const std::string dir = out_dir.empty() ? "." : out_dir;
  std::filesystem::create_directories(dir);
  std::filesystem::path p(file);
  if (p.is_absolute()) return file;
  return (std::filesystem::path(dir) / p).string();
}

void shared_flags(CLI::App* cmd, std::uint64_t& seed, int& threads,
                  std::string& out_dir, std::string& config_path) {
  cmd->add_option("--seed", seed, "root RNG seed");
  cmd->add_option("--threads", threads, "worker thread cap")->check(CLI::PositiveNumber);
  cmd->add_option("--out-dir", out_dir, "output directory");
  cmd->add_option("--config", config_path,
                  "flat key=value file of long option names; explicit flags win");
}

// Applies key=value lines to the parsed subcommand. Keys are long option
// names without the leading dashes; options given on the command line keep
// their value; unknown keys are an error.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  const std::string text = read_text_file(path);
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto l = line.find_first_not_of(" \t\r");
    if (l == std::string::npos) continue;
    const auto r = line.find_last_not_of(" \t\r");
    line = line.substr(l, r - l + 1);
    if (line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t");
      return s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config")
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": bad key");
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw std::runtime_error(path + ": unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse parametric VAR(infinity): simulate, fit, select, forecast"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_dir = ".";
  std::string config_path;

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw a sparse model and a sample path");
  std::vector<int> sim_orders = {1, 1, 0};
  std::vector<double> sim_lambdas = {-0.6};
  std::vector<double> sim_etas;
  int sim_n = 10, sim_t = 200, sim_burn = 200, sim_nnz_row = 3, sim_total = 0;
  double sim_cmin = -0.5, sim_cmax = 0.5, sim_target = 0.8, sim_sd = 0.2;
  bool sim_force = false;
  std::string sim_model;
  sim->add_option("--orders", sim_orders, "p,r,s")->delimiter(',');
  sim->add_option("--lambdas", sim_lambdas, "decay rates lambda_1..lambda_r")->delimiter(',');
  sim->add_option("--etas", sim_etas, "gamma,theta pairs, flattened")->delimiter(',');
  sim->add_option("--n", sim_n, "series count")->check(CLI::PositiveNumber);
  sim->add_option("--t", sim_t, "sample length")->check(CLI::PositiveNumber);
  sim->add_option("--burn-in", sim_burn, "burn-in steps")->check(CLI::NonNegativeNumber);
  sim->add_option("--nonzeros-per-row", sim_nnz_row, "row sparsity of each G_k");
  sim->add_option("--total-nonzeros", sim_total,
                  "total nonzeros per G_k (overrides per-row mode when > 0)");
  sim->add_option("--coef-min", sim_cmin, "uniform lower bound of G entries");
  sim->add_option("--coef-max", sim_cmax, "uniform upper bound of G entries");
  sim->add_option("--stationarity-target", sim_target,
                  "rescale so the sufficient-condition LHS equals this");
  sim->add_option("--noise-sd", sim_sd, "innovation standard deviation");
  sim->add_option("--model", sim_model, "simulate from this model JSON instead");
  sim->add_flag("--force", sim_force, "simulate even if the sufficient condition fails");
  shared_flags(sim, seed, threads, out_dir, config_path);

  // fit
  auto* fit = app.add_subcommand("fit", "estimate a model from a CSV panel");
  std::string fit_data, fit_out = "model.json", fit_estimator = "je";
  std::vector<int> fit_orders = {1, 1, 0};
  bool fit_std = false, fit_select_lambda = false;
  FitFlags fit_flags;
  fit->add_option("--data", fit_data, "input panel CSV")->required();
  fit->add_flag("--standardize", fit_std, "center and scale each column");
  fit->add_option("--orders", fit_orders, "p,r,s")->delimiter(',');
  fit->add_option("--estimator", fit_estimator, "je|re")
      ->check(CLI::IsMember({"je", "re"}));
  fit->add_flag("--select-lambda", fit_select_lambda,
                "choose lambda-g on a default grid first");
  fit->add_option("--out", fit_out, "model JSON output (relative to --out-dir)");
  add_fit_flags(fit, fit_flags);
  shared_flags(fit, seed, threads, out_dir, config_path);

  // select
  auto* sel = app.add_subcommand("select", "order selection over a (p,r,s) grid");
  std::string sel_data, sel_estimator = "je";
  std::vector<int> sel_max = {6, 6, 6};
  double sel_tau = 0.05, sel_q = 0.0, sel_lambda_c = 0.0;
  bool sel_std = false;
  FitFlags sel_flags;
  sel->add_option("--data", sel_data, "input panel CSV")->required();
  sel->add_flag("--standardize", sel_std, "center and scale each column");
  sel->add_option("--max-orders", sel_max, "p,r,s upper bounds")->delimiter(',');
  sel->add_option("--tau", sel_tau, "penalty weight");
  sel->add_option("--q", sel_q, "weak-sparsity exponent in [0,1]");
  sel->add_option("--estimator", sel_estimator, "je|re")
      ->check(CLI::IsMember({"je", "re"}));
  sel->add_option("--lambda-c", sel_lambda_c,
                  "per-cell rule lambda_g = c*sqrt(log(N*max(p,1))/T); 0 = fixed lambda-g");
  add_fit_flags(sel, sel_flags);
  shared_flags(sel, seed, threads, out_dir, config_path);

  // forecast
  auto* fc = app.add_subcommand("forecast", "rolling one-step evaluation");
  std::string fc_data, fc_estimator = "je", fc_refit = "every";
  std::vector<int> fc_orders = {1, 1, 0};
  int fc_origin = 0, fc_steps = 0;
  bool fc_std = false;
  FitFlags fc_flags;
  fc->add_option("--data", fc_data, "input panel CSV")->required();
  fc->add_flag("--standardize", fc_std, "center and scale each column");
  fc->add_option("--orders", fc_orders, "p,r,s")->delimiter(',');
  fc->add_option("--origin", fc_origin, "first training length")->required();
  fc->add_option("--steps", fc_steps, "forecast steps")->required();
  fc->add_option("--refit", fc_refit, "every|once")
      ->check(CLI::IsMember({"every", "once"}));
  fc->add_option("--estimator", fc_estimator, "je|re")
      ->check(CLI::IsMember({"je", "re"}));
  add_fit_flags(fc, fc_flags);
  shared_flags(fc, seed, threads, out_dir, config_path);

  // granger
  auto* gr = app.add_subcommand("granger", "causal network of a fitted model");
  std::string gr_model;
  double gr_tol = 1e-8;
  gr->add_option("--model", gr_model, "model JSON")->required();
  gr->add_option("--zero-tol", gr_tol, "entries at or below this count as zero");
  shared_flags(gr, seed, threads, out_dir, config_path);

  // irf
  auto* ir = app.add_subcommand("irf", "impulse responses of a fitted model");
  std::string ir_model;
  int ir_horizon = 20;
  ir->add_option("--model", ir_model, "model JSON")->required();
  ir->add_option("--horizon", ir_horizon, "number of response matrices")
      ->check(CLI::PositiveNumber);
  shared_flags(ir, seed, threads, out_dir, config_path);

  // experiment
  auto* ex = app.add_subcommand("experiment", "replication studies");
  std::string ex_name;
  ExperimentConfig ec;
  FitFlags ex_flags;
  std::vector<int> ex_tlist = {60, 120, 240};
  std::vector<int> ex_max = {3, 3, 3};
  ex->add_option("name", ex_name, "error-scaling|bic-consistency|varma-forecast")
      ->required()
      ->check(CLI::IsMember({"error-scaling", "bic-consistency", "varma-forecast"}));
  ex->add_option("--replicates", ec.replicates, "Monte-Carlo replicates")
      ->check(CLI::PositiveNumber);
  ex->add_option("--n", ec.N, "series count");
  ex->add_option("--t-list", ex_tlist, "sample lengths (error-scaling)")->delimiter(',');
  ex->add_option("--lambda1", ec.lambda1, "decay rate of the sparse DGP");
  ex->add_option("--nonzeros-per-row", ec.nonzeros_per_row, "row sparsity of G_k");
  ex->add_option("--noise-sd", ec.noise_sd, "innovation standard deviation");
  ex->add_option("--stationarity-target", ec.stationarity_target,
                 "sufficient-condition LHS of the DGP");
  ex->add_option("--lambda-c", ec.lambda_c, "per-cell penalty rule constant");
  ex->add_option("--tau", ec.tau, "order-selection penalty weight");
  ex->add_option("--q", ec.q, "weak-sparsity exponent");
  ex->add_option("--max-orders", ex_max, "selection grid bounds")->delimiter(',');
  ex->add_option("--bic-n", ec.bic_N, "series count (bic-consistency)");
  ex->add_option("--bic-t", ec.bic_T, "sample length (bic-consistency)");
  ex->add_option("--bic-lambda1", ec.bic_lambda1, "decay rate (bic-consistency)");
  ex->add_option("--bic-lambda-c", ec.bic_lambda_c,
                 "per-cell penalty rule constant (bic-consistency)");
  ex->add_option("--varma-t", ec.varma_T, "training length (varma-forecast)");
  ex->add_option("--varma-lambda1", ec.varma_lambda1, "MA decay rate (varma-forecast)");
  ex->add_option("--varma-lambda-c", ec.varma_lambda_c,
                 "shared rate constant for both methods (varma-forecast)");
  ex->add_option("--varma-epsilon-box", ec.varma_epsilon_box,
                 "decay-parameter box margin (varma-forecast)");
  add_fit_flags(ex, ex_flags);
  shared_flags(ex, seed, threads, out_dir, config_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim->parsed()) {
      apply_config_file(sim, config_path);
      Rng rng(seed);
      SpvarModel model;
      if (!sim_model.empty()) {
        model = load_model_json(sim_model);
      } else {
        DgpSpec spec;
        spec.N = sim_n;
        spec.orders = parse_orders(sim_orders, "--orders");
        spec.omega = parse_omega(sim_lambdas, sim_etas);
        if (static_cast<int>(spec.omega.lambdas.size()) != spec.orders.r ||
            static_cast<int>(spec.omega.etas.size()) != spec.orders.s)
          throw std::runtime_error("--lambdas/--etas sizes must match --orders r,s");
        spec.nonzeros_per_row = sim_nnz_row;
        spec.total_mode = sim_total > 0;
        spec.total_nonzeros = sim_total;
        spec.coef_min = sim_cmin;
        spec.coef_max = sim_cmax;
        spec.stationarity_target = sim_target;
        spec.noise_sd = sim_sd;
        model.orders = spec.orders;
        model.omega = spec.omega;
        model.coefs = gen_sparse_coefs(spec, rng);
        model.names = default_names(sim_n);
      }
      const SeriesPanel panel =
          simulate_spvar(model, sim_t, sim_burn, sim_sd, rng, sim_force);
      const std::string panel_path = joined(out_dir, "panel.csv");
      const std::string model_path = joined(out_dir, "model.json");
      save_csv(panel, panel_path);
      save_model_json(model, model_path);
      std::cout << panel_path << "\n" << model_path << "\n";
      return 0;
    }

    if (fit->parsed()) {
      apply_config_file(fit, config_path);
      const SeriesPanel Y = load_csv(fit_data, fit_std);
      const ModelOrders orders = parse_orders(fit_orders, "--orders");
      FitConfig cfg = to_config(fit_flags, threads);
      if (fit_select_lambda) cfg.lambda_g = select_lambda_g(Y, orders, {}, cfg);
      const FitResult res = fit_estimator == "re" ? fit_re(Y, orders, cfg)
                                                  : fit_je(Y, orders, cfg);
      const std::string out_path = joined(out_dir, fit_out);
      save_model_json(res.model, out_path);
      std::cout << "model=" << out_path << " estimator=" << fit_estimator
                << " converged=" << (res.converged ? 1 : 0)
                << " iterations=" << res.iterations
                << " loss=" << format_g17(res.in_sample_loss)
                << " nnz=" << res.nnz
                << " lambda_g=" << format_g17(cfg.lambda_g) << "\n";
      return res.converged ? 0 : 2;
    }

    if (sel->parsed()) {
      apply_config_file(sel, config_path);
      const SeriesPanel Y = load_csv(sel_data, sel_std);
      if (sel_max.size() != 3)
        throw std::runtime_error("--max-orders expects three values p,r,s");
      SelectConfig sc;
      sc.fit = to_config(sel_flags, 1);
      sc.tau = sel_tau;
      sc.q = sel_q;
      sc.use_re = sel_estimator == "re";
      sc.lambda_c = sel_lambda_c;
      sc.threads = threads;
      const BicTable table =
          select_orders(Y, {sel_max[0], sel_max[1], sel_max[2]}, sc);
      const std::string table_path = joined(out_dir, "bic_table.csv");
      save_bic_table_csv(table, table_path);
      const ModelOrders chosen = table.chosen_row().orders;
      std::cout << "table=" << table_path << "\n"
                << "chosen p=" << chosen.p << " r=" << chosen.r
                << " s=" << chosen.s << "\n";
      return 0;
    }

    if (fc->parsed()) {
      apply_config_file(fc, config_path);
      const SeriesPanel Y = load_csv(fc_data, fc_std);
      RollSpec spec;
      spec.orders = parse_orders(fc_orders, "--orders");
      spec.config = to_config(fc_flags, threads);
      spec.use_re = fc_estimator == "re";
      const RollingReport rep =
          rolling_eval(Y, spec, fc_origin, fc_steps,
                       fc_refit == "once" ? RefitSchedule::Once
                                          : RefitSchedule::EveryStep);
      const std::string roll_path = joined(out_dir, "rolling.csv");
      save_rolling_csv(rep, Y.names, roll_path);
      int failed = 0;
      for (const auto& s : rep.per_step) failed += s.failed ? 1 : 0;
      std::cout << "report=" << roll_path
                << " mean_l2_error=" << format_g17(rep.mean_error)
                << " steps=" << rep.per_step.size() << " failed=" << failed
                << "\n";
      return 0;
    }

    if (gr->parsed()) {
      apply_config_file(gr, config_path);
      const SpvarModel model = load_model_json(gr_model);
      const GrangerNetwork net = granger_network(model, gr_tol);
      const std::string csv_path = joined(out_dir, "granger.csv");
      const std::string dot_path = joined(out_dir, "granger.dot");
      save_granger_csv(net, model.names, csv_path);
      save_dot(net, model.names, dot_path);
      std::cout << csv_path << "\n" << dot_path << "\n"
                << "edges=" << net.edges.size() << "\n";
      return 0;
    }

    if (ir->parsed()) {
      apply_config_file(ir, config_path);
      const SpvarModel model = load_model_json(ir_model);
      const std::string irf_path = joined(out_dir, "irf.csv");
      save_irf_csv(impulse_responses(model, ir_horizon), irf_path);
      std::cout << irf_path << "\n";
      return 0;
    }

    if (ex->parsed()) {
      apply_config_file(ex, config_path);
      ec.seed = seed;
      ec.threads = threads;
      ec.out_dir = out_dir;
      ec.T_list = ex_tlist;
      if (ex_max.size() != 3)
        throw std::runtime_error("--max-orders expects three values p,r,s");
      ec.max_orders = {ex_max[0], ex_max[1], ex_max[2]};
      ec.fit = to_config(ex_flags, 1);
      std::cout << run_experiment(ex_name, ec) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
