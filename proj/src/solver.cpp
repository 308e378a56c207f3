#include "spvarinf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spvarinf/parallel.hpp"
#include "spvarinf/simulate.hpp"

namespace spvarinf {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd pack_omega(const Omega& o) {
  const int r = static_cast<int>(o.lambdas.size());
  const int s = static_cast<int>(o.etas.size());
  Eigen::VectorXd w(r + 2 * s);
  for (int j = 0; j < r; ++j) w(j) = o.lambdas[static_cast<size_t>(j)];
  for (int m = 0; m < s; ++m) {
    w(r + 2 * m) = o.etas[static_cast<size_t>(m)][0];
    w(r + 2 * m + 1) = o.etas[static_cast<size_t>(m)][1];
  }
  return w;
}

Omega unpack_omega(const Eigen::VectorXd& w, int r, int s) {
  Omega o;
  o.lambdas.resize(static_cast<size_t>(r));
  o.etas.resize(static_cast<size_t>(s));
  for (int j = 0; j < r; ++j) o.lambdas[static_cast<size_t>(j)] = w(j);
  for (int m = 0; m < s; ++m) {
    o.etas[static_cast<size_t>(m)][0] = w(r + 2 * m);
    o.etas[static_cast<size_t>(m)][1] = w(r + 2 * m + 1);
  }
  return o;
}

void clamp_packed(Eigen::VectorXd& w, int r, int s, double eps) {
  for (int j = 0; j < r; ++j) w(j) = std::clamp(w(j), -1.0 + eps, 1.0 - eps);
  for (int m = 0; m < s; ++m) {
    w(r + 2 * m) = std::clamp(w(r + 2 * m), 0.0, 1.0 - eps);
    w(r + 2 * m + 1) = std::clamp(w(r + 2 * m + 1), eps, kPi - eps);
  }
}

int count_nnz(const Eigen::MatrixXd& G) {
  return static_cast<int>((G.array() != 0.0).count());
}

// 1 / L_hat with L_hat = 2 sigma_max(Z)^2 / T, sigma_max by power iteration.
double default_step(const Eigen::MatrixXd& Z, double T) {
  if (Z.cols() == 0 || Z.rows() == 0) return 1.0;
  Eigen::VectorXd w =
      Eigen::VectorXd::Constant(Z.cols(), 1.0 / std::sqrt(static_cast<double>(Z.cols())));
  double smax2 = 0.0;
  for (int it = 0; it < 20; ++it) {
    Eigen::VectorXd u = Z.transpose() * (Z * w);
    smax2 = u.norm();
    if (smax2 <= 0.0) break;
    w = u / smax2;
  }
  const double L = 2.0 * smax2 / T;
  return L > 0.0 ? 1.0 / L : 1.0;
}

struct EngineOut {
  Omega omega;
  Eigen::MatrixXd G;
  std::vector<double> trace;
  bool converged = false;
  int iterations = 0;
  double loss = std::numeric_limits<double>::infinity();
  double alpha_g = 0.0;
  bool failed = false;
  std::string error;
};

// One solver run: alternate a projected gradient step on omega (all r + 2s
// coordinates stepped jointly from gradients at the current iterate) with a
// proximal gradient step on g. Backtracking halves the step until the local
// quadratic majorization holds, which keeps the penalized objective
// nonincreasing.
EngineOut engine_run(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Yresp,
                     const ModelOrders& orders, const FitConfig& cfg,
                     const Omega& omega0, Eigen::MatrixXd G, int budget,
                     double tol) {
  EngineOut out;
  const double T = static_cast<double>(X.rows());
  const int nw = orders.r + 2 * orders.s;

  Eigen::VectorXd w = pack_omega(omega0);
  clamp_packed(w, orders.r, orders.s, cfg.epsilon_box);
  Omega omega = unpack_omega(w, orders.r, orders.s);

  PredictorPanel panel = build_predictors(X, orders, omega, nw > 0);
  const double alpha0 = cfg.step > 0.0 ? cfg.step : default_step(panel.Z, T);

  Eigen::MatrixXd R = Yresp - panel.Z * G.transpose();
  double loss = R.squaredNorm() / T;
  if (!std::isfinite(loss)) {
    out.failed = true;
    out.error = "non-finite objective at the initial point";
    return out;
  }
  double obj = loss + cfg.lambda_g * G.cwiseAbs().sum();
  out.trace.push_back(obj);

  double alpha_w = alpha0;
  double alpha_g = alpha0;
  bool grow_w = true;  // last accept took the first trial step
  bool grow_g = true;

  for (int iter = 1; iter <= budget; ++iter) {
    bool moved_w = false;
    bool moved_g = false;

    if (nw > 0) {
      const Eigen::VectorXd gw = grad_omega_resid(R, panel, G);
      if (!gw.allFinite()) {
        out.failed = true;
        out.error = "non-finite omega gradient";
        out.iterations = iter;
        return out;
      }
      if (cfg.backtracking) {
        double a = grow_w ? 2.0 * alpha_w : alpha_w;
        for (int bt = 0; bt < 60; ++bt) {
          Eigen::VectorXd wt = w - a * gw;
          clamp_packed(wt, orders.r, orders.s, cfg.epsilon_box);
          const Eigen::VectorXd delta = wt - w;
          if (delta.cwiseAbs().maxCoeff() == 0.0) break;  // pinned at the box
          Omega otrial = unpack_omega(wt, orders.r, orders.s);
          update_decay_blocks(panel, X, otrial, false);
          Eigen::MatrixXd Rt = Yresp - panel.Z * G.transpose();
          const double lt = Rt.squaredNorm() / T;
          const double bound = loss + gw.dot(delta) + delta.squaredNorm() / (2.0 * a);
          if (std::isfinite(lt) && lt <= bound) {
            w = wt;
            omega = std::move(otrial);
            R.swap(Rt);
            loss = lt;
            alpha_w = a;
            grow_w = (bt == 0);
            moved_w = true;
            break;
          }
          a *= 0.5;
          if (a < alpha0 * 1e-18) break;
        }
      } else {
        Eigen::VectorXd wt = w - alpha_w * gw;
        clamp_packed(wt, orders.r, orders.s, cfg.epsilon_box);
        if ((wt - w).cwiseAbs().maxCoeff() > 0.0) {
          w = wt;
          omega = unpack_omega(w, orders.r, orders.s);
          update_decay_blocks(panel, X, omega, false);
          R = Yresp - panel.Z * G.transpose();
          loss = R.squaredNorm() / T;
          moved_w = true;
        }
      }
      // Restores Z when every trial was rejected, and refreshes the
      // derivative panels at the (possibly new) omega either way.
      update_decay_blocks(panel, X, omega, true);
    }

    {
      const Eigen::MatrixXd gg = grad_g_resid(R, panel);
      if (!gg.allFinite()) {
        out.failed = true;
        out.error = "non-finite g gradient";
        out.iterations = iter;
        return out;
      }
      if (cfg.backtracking) {
        double a = grow_g ? 2.0 * alpha_g : alpha_g;
        for (int bt = 0; bt < 60; ++bt) {
          Eigen::MatrixXd Gt = soft_threshold(G - a * gg, a * cfg.lambda_g);
          const double dn = (Gt - G).squaredNorm();
          if (dn == 0.0) {  // proximal fixed point at this step length
            alpha_g = a;
            grow_g = (bt == 0);
            break;
          }
          Eigen::MatrixXd Rt = Yresp - panel.Z * Gt.transpose();
          const double lt = Rt.squaredNorm() / T;
          const double bound =
              loss + gg.cwiseProduct(Gt - G).sum() + dn / (2.0 * a);
          if (std::isfinite(lt) && lt <= bound) {
            G.swap(Gt);
            R.swap(Rt);
            loss = lt;
            alpha_g = a;
            grow_g = (bt == 0);
            moved_g = true;
            break;
          }
          a *= 0.5;
          if (a < alpha0 * 1e-18) break;
        }
      } else {
        Eigen::MatrixXd Gt = soft_threshold(G - alpha_g * gg, alpha_g * cfg.lambda_g);
        if ((Gt - G).squaredNorm() > 0.0) {
          G = std::move(Gt);
          R = Yresp - panel.Z * G.transpose();
          loss = R.squaredNorm() / T;
          moved_g = true;
        }
      }
      if (!std::isfinite(loss)) {
        out.failed = true;
        out.error = "objective diverged";
        out.iterations = iter;
        return out;
      }
    }

    const double objn = loss + cfg.lambda_g * G.cwiseAbs().sum();
    out.trace.push_back(objn);
    out.iterations = iter;

    if (std::abs(obj - objn) / std::max(1.0, std::abs(obj)) < tol) {
      double resid = 0.0;
      if (G.size() > 0) {
        const Eigen::MatrixXd gg = grad_g_resid(R, panel);
        resid = (soft_threshold(G - alpha_g * gg, alpha_g * cfg.lambda_g) - G)
                    .cwiseAbs()
                    .maxCoeff();
      }
      if (resid <= 10.0 * tol) {
        obj = objn;
        out.converged = true;
        break;
      }
    }
    obj = objn;
    if (!moved_w && !moved_g) break;  // both blocks pinned, nothing can improve
  }

  out.omega = std::move(omega);
  out.G = std::move(G);
  out.loss = loss;
  out.alpha_g = alpha_g;
  return out;
}

struct CoreOut {
  EngineOut best;
  int candidate = -1;
};

// Runs every candidate start and keeps the best finished run: smallest loss,
// ties by fewer nonzeros, then by candidate order. With screen_iters > 0 all
// candidates run that many iterations first and only the screen_keep most
// promising (plus any that already converged) continue to the full budget.
CoreOut multi_start_core(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Yresp,
                         const ModelOrders& orders, const FitConfig& cfg,
                         const std::vector<Omega>& candidates,
                         const std::function<Eigen::MatrixXd(int)>& g0_of,
                         int threads) {
  const int nc = static_cast<int>(candidates.size());
  const int keep = std::max(1, cfg.screen_keep);
  const bool screening = cfg.screen_iters > 0 && nc > keep;
  const int budget1 = screening ? std::min(cfg.screen_iters, cfg.max_iter) : cfg.max_iter;

  std::vector<EngineOut> outs(static_cast<size_t>(nc));
  parallel_for_indexed(nc, threads, [&](int i) {
    outs[static_cast<size_t>(i)] =
        engine_run(X, Yresp, orders, cfg, candidates[static_cast<size_t>(i)],
                   g0_of(i), budget1, cfg.tol);
  });

  std::vector<char> eligible(static_cast<size_t>(nc), 1);
  if (screening) {
    std::vector<int> alive;
    std::vector<int> nnzs(static_cast<size_t>(nc), 0);
    for (int i = 0; i < nc; ++i) {
      if (outs[static_cast<size_t>(i)].failed) continue;
      alive.push_back(i);
      nnzs[static_cast<size_t>(i)] = count_nnz(outs[static_cast<size_t>(i)].G);
    }
    std::stable_sort(alive.begin(), alive.end(), [&](int a, int b) {
      const auto& oa = outs[static_cast<size_t>(a)];
      const auto& ob = outs[static_cast<size_t>(b)];
      if (oa.loss != ob.loss) return oa.loss < ob.loss;
      return nnzs[static_cast<size_t>(a)] < nnzs[static_cast<size_t>(b)];
    });
    std::fill(eligible.begin(), eligible.end(), 0);
    std::vector<int> resume;
    for (size_t pos = 0; pos < alive.size(); ++pos) {
      const int i = alive[pos];
      if (static_cast<int>(pos) < keep) {
        eligible[static_cast<size_t>(i)] = 1;
        if (!outs[static_cast<size_t>(i)].converged) resume.push_back(i);
      } else if (outs[static_cast<size_t>(i)].converged) {
        eligible[static_cast<size_t>(i)] = 1;  // already finished, keep it
      }
    }
    parallel_for_indexed(static_cast<int>(resume.size()), threads, [&](int k) {
      const int i = resume[static_cast<size_t>(k)];
      EngineOut& head = outs[static_cast<size_t>(i)];
      EngineOut cont =
          engine_run(X, Yresp, orders, cfg, head.omega, std::move(head.G),
                     std::max(1, cfg.max_iter - head.iterations), cfg.tol);
      cont.iterations += head.iterations;
      if (!cont.trace.empty())
        head.trace.insert(head.trace.end(), cont.trace.begin() + 1, cont.trace.end());
      cont.trace = std::move(head.trace);
      head = std::move(cont);
    });
  }

  CoreOut res;
  int best_nnz = 0;
  std::string first_error;
  for (int i = 0; i < nc; ++i) {
    const auto& o = outs[static_cast<size_t>(i)];
    if (o.failed) {
      if (first_error.empty()) first_error = o.error;
      continue;
    }
    if (!eligible[static_cast<size_t>(i)]) continue;
    const int nnz = count_nnz(o.G);
    if (res.candidate < 0 || o.loss < res.best.loss ||
        (o.loss == res.best.loss && nnz < best_nnz)) {
      res.best = o;
      res.candidate = i;
      best_nnz = nnz;
    }
  }
  if (res.candidate < 0)
    throw std::runtime_error(
        first_error.empty()
            ? "estimation failed from every initial value"
            : "estimation failed from every initial value: " + first_error);
  return res;
}

std::vector<std::vector<double>> lambda_sets(int r) {
  if (r == 0) return {{}};
  if (r == 1) {
    std::vector<std::vector<double>> sets;
    for (double v : {0.2, 0.4, 0.6, 0.8}) {
      sets.push_back({v});
      sets.push_back({-v});
    }
    return sets;
  }
  if (r <= 4) {
    const std::vector<double> grid = {0.6, 0.3, -0.3, -0.6};
    std::vector<std::vector<double>> sets;
    std::vector<int> idx(static_cast<size_t>(r));
    std::iota(idx.begin(), idx.end(), 0);
    const int n = static_cast<int>(grid.size());
    while (true) {
      std::vector<double> v(static_cast<size_t>(r));
      for (int j = 0; j < r; ++j) v[static_cast<size_t>(j)] = grid[static_cast<size_t>(idx[static_cast<size_t>(j)])];
      sets.push_back(std::move(v));
      int i = r - 1;
      while (i >= 0 && idx[static_cast<size_t>(i)] == n - r + i) --i;
      if (i < 0) break;
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < r; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
    return sets;
  }
  // More slots than the coarse grid: one evenly spread start.
  std::vector<double> v(static_cast<size_t>(r));
  for (int j = 0; j < r; ++j)
    v[static_cast<size_t>(j)] = 0.7 - 1.4 * j / (r - 1.0);
  return {v};
}

std::vector<std::vector<std::array<double, 2>>> eta_sets(int s) {
  if (s == 0) return {{}};
  if (s == 1) {
    std::vector<std::vector<std::array<double, 2>>> sets;
    for (double g : {0.2, 0.4, 0.6, 0.8})
      for (double t : {kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0})
        sets.push_back({{g, t}});
    return sets;
  }
  if (s <= 4) {
    // Listed by ascending theta then gamma so combinations come out sorted.
    const std::vector<std::array<double, 2>> grid = {
        {0.3, kPi / 4.0}, {0.6, kPi / 4.0}, {0.3, 3.0 * kPi / 4.0}, {0.6, 3.0 * kPi / 4.0}};
    std::vector<std::vector<std::array<double, 2>>> sets;
    std::vector<int> idx(static_cast<size_t>(s));
    std::iota(idx.begin(), idx.end(), 0);
    const int n = static_cast<int>(grid.size());
    while (true) {
      std::vector<std::array<double, 2>> v(static_cast<size_t>(s));
      for (int m = 0; m < s; ++m) v[static_cast<size_t>(m)] = grid[static_cast<size_t>(idx[static_cast<size_t>(m)])];
      sets.push_back(std::move(v));
      int i = s - 1;
      while (i >= 0 && idx[static_cast<size_t>(i)] == n - s + i) --i;
      if (i < 0) break;
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < s; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
    return sets;
  }
  std::vector<std::array<double, 2>> v(static_cast<size_t>(s));
  for (int m = 0; m < s; ++m)
    v[static_cast<size_t>(m)] = {0.45, kPi / 4.0 + kPi / 2.0 * m / (s - 1.0)};
  return {v};
}

// Preliminary Lasso VAR(P), P = floor(1.5 sqrt(T)) clamped to [1, T-1], run
// on a reduced budget; shared by every start of a fit call.
std::vector<Eigen::MatrixXd> lasso_var_a0(const Eigen::MatrixXd& Ydata,
                                          const FitConfig& cfg) {
  const int T = static_cast<int>(Ydata.rows());
  const int N = static_cast<int>(Ydata.cols());
  int P = static_cast<int>(std::floor(1.5 * std::sqrt(static_cast<double>(T))));
  P = std::max(1, std::min(P, T - 1));
  const ModelOrders o{P, 0, 0};
  EngineOut out = engine_run(Ydata, Ydata, o, cfg, Omega{},
                             Eigen::MatrixXd::Zero(N, N * P),
                             std::max(1, cfg.init_lasso_max_iter),
                             cfg.init_lasso_tol);
  if (out.failed) throw std::runtime_error("g initialization failed: " + out.error);
  std::vector<Eigen::MatrixXd> A(static_cast<size_t>(P));
  for (int h = 0; h < P; ++h) A[static_cast<size_t>(h)] = out.G.middleCols(h * N, N);
  return A;
}

// G_k^0 = sum_h Lplus_{k,h} A_h^0 with L the P x d truncation of the weight
// map at omega0 and Lplus = (L'L)^-1 L'; a small ridge covers rank-deficient
// truncations (for example d > P or decay rates at zero).
Eigen::MatrixXd map_g0(const std::vector<Eigen::MatrixXd>& A0, const Omega& omega0,
                       const ModelOrders& orders) {
  const int P = static_cast<int>(A0.size());
  const int N = P > 0 ? static_cast<int>(A0[0].rows()) : 0;
  const int d = orders.d();
  if (d == 0) return Eigen::MatrixXd::Zero(N, 0);
  Eigen::MatrixXd L(P, d);
  for (int h = 1; h <= P; ++h)
    for (int k = 1; k <= d; ++k) L(h - 1, k - 1) = weight(h, k, orders, omega0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L);
  const auto& sv = svd.singularValues();
  const bool deficient = sv.size() < d || sv(0) <= 0.0 ||
                         sv(sv.size() - 1) < 1e-10 * sv(0);
  const double ridge = deficient ? 1e-8 : 0.0;
  const Eigen::MatrixXd M =
      (L.transpose() * L + ridge * Eigen::MatrixXd::Identity(d, d))
          .ldlt()
          .solve(L.transpose());
  Eigen::MatrixXd G0 = Eigen::MatrixXd::Zero(N, N * d);
  for (int k = 0; k < d; ++k)
    for (int h = 0; h < P; ++h)
      if (M(k, h) != 0.0) G0.middleCols(k * N, N) += M(k, h) * A0[static_cast<size_t>(h)];
  return G0;
}

void check_config(const FitConfig& c) {
  if (!(c.lambda_g >= 0.0)) throw std::invalid_argument("lambda_g must be >= 0");
  if (c.step < 0.0) throw std::invalid_argument("step must be >= 0");
  if (!(c.epsilon_box > 0.0 && c.epsilon_box < 0.5))
    throw std::invalid_argument("epsilon_box must lie in (0, 0.5)");
  if (c.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(c.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
}

void check_panel(const SeriesPanel& Y, const ModelOrders& orders) {
  if (orders.p < 0 || orders.r < 0 || orders.s < 0)
    throw std::invalid_argument("orders must be nonnegative");
  if (Y.N() < 1 || Y.T() < 2)
    throw std::invalid_argument("panel must have at least 2 rows and 1 column");
}

std::vector<Omega> resolve_candidates(const ModelOrders& orders, const FitConfig& cfg) {
  if (cfg.omega_inits.empty()) return init_omega_candidates(orders);
  for (const auto& o : cfg.omega_inits)
    if (static_cast<int>(o.lambdas.size()) != orders.r ||
        static_cast<int>(o.etas.size()) != orders.s)
      throw std::invalid_argument("an omega init does not match the requested orders");
  return cfg.omega_inits;
}

// Same ordering as canonicalize(), applied to one row of g and its own omega.
void canonical_row(Omega& w, Eigen::RowVectorXd& g, const ModelOrders& o, int N) {
  std::vector<int> li(static_cast<size_t>(o.r));
  std::iota(li.begin(), li.end(), 0);
  std::stable_sort(li.begin(), li.end(), [&](int a, int b) {
    return w.lambdas[static_cast<size_t>(a)] > w.lambdas[static_cast<size_t>(b)];
  });
  std::vector<int> ei(static_cast<size_t>(o.s));
  std::iota(ei.begin(), ei.end(), 0);
  std::stable_sort(ei.begin(), ei.end(), [&](int a, int b) {
    const auto& ea = w.etas[static_cast<size_t>(a)];
    const auto& eb = w.etas[static_cast<size_t>(b)];
    if (ea[1] != eb[1]) return ea[1] < eb[1];
    return ea[0] < eb[0];
  });
  Omega w2 = w;
  Eigen::RowVectorXd g2 = g;
  for (int j = 0; j < o.r; ++j) {
    w2.lambdas[static_cast<size_t>(j)] = w.lambdas[static_cast<size_t>(li[static_cast<size_t>(j)])];
    g2.segment((o.p + j) * N, N) = g.segment((o.p + li[static_cast<size_t>(j)]) * N, N);
  }
  for (int m = 0; m < o.s; ++m) {
    const int src = ei[static_cast<size_t>(m)];
    w2.etas[static_cast<size_t>(m)] = w.etas[static_cast<size_t>(src)];
    g2.segment((o.p + o.r + 2 * m) * N, N) = g.segment((o.p + o.r + 2 * src) * N, N);
    g2.segment((o.p + o.r + 2 * m + 1) * N, N) =
        g.segment((o.p + o.r + 2 * src + 1) * N, N);
  }
  w = std::move(w2);
  g = std::move(g2);
}

}  // namespace

double soft_threshold(double z, double tau) {
  const double a = std::abs(z) - tau;
  return a > 0.0 ? (z > 0.0 ? a : -a) : 0.0;
}

Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& z, double tau) {
  return z.unaryExpr([tau](double v) { return soft_threshold(v, tau); });
}

Omega project_omega(const Omega& omega, double epsilon_box) {
  Eigen::VectorXd w = pack_omega(omega);
  clamp_packed(w, static_cast<int>(omega.lambdas.size()),
               static_cast<int>(omega.etas.size()), epsilon_box);
  return unpack_omega(w, static_cast<int>(omega.lambdas.size()),
                      static_cast<int>(omega.etas.size()));
}

std::vector<Omega> init_omega_candidates(const ModelOrders& orders) {
  if (orders.p < 0 || orders.r < 0 || orders.s < 0)
    throw std::invalid_argument("orders must be nonnegative");
  const auto ls = lambda_sets(orders.r);
  const auto es = eta_sets(orders.s);
  std::vector<Omega> out;
  out.reserve(ls.size() * es.size());
  for (const auto& l : ls)
    for (const auto& e : es) {
      Omega o;
      o.lambdas = l;
      o.etas = e;
      out.push_back(std::move(o));
    }
  return out;
}

std::vector<Eigen::MatrixXd> var_lasso_fit(const SeriesPanel& Y, int P,
                                           double lambda_g,
                                           const FitConfig& config) {
  check_config(config);
  const int T = Y.T();
  const int N = Y.N();
  if (P < 1 || P >= T)
    throw std::invalid_argument("var_lasso_fit: P must lie in [1, T-1]");
  FitConfig cfg = config;
  cfg.lambda_g = lambda_g;
  const ModelOrders o{P, 0, 0};
  EngineOut out =
      engine_run(Y.data, Y.data, o, cfg, Omega{}, Eigen::MatrixXd::Zero(N, N * P),
                 cfg.max_iter, cfg.tol);
  if (out.failed) throw std::runtime_error("var_lasso_fit: " + out.error);
  std::vector<Eigen::MatrixXd> A(static_cast<size_t>(P));
  for (int h = 0; h < P; ++h) A[static_cast<size_t>(h)] = out.G.middleCols(h * N, N);
  return A;
}

Eigen::MatrixXd init_g(const SeriesPanel& Y, const Omega& omega0,
                       const ModelOrders& orders, const FitConfig& config) {
  check_config(config);
  check_panel(Y, orders);
  if (static_cast<int>(omega0.lambdas.size()) != orders.r ||
      static_cast<int>(omega0.etas.size()) != orders.s)
    throw std::invalid_argument("init_g: omega0 does not match the orders");
  return map_g0(lasso_var_a0(Y.data, config), omega0, orders);
}

FitResult multi_start(const SeriesPanel& Y, const ModelOrders& orders,
                      const FitConfig& config) {
  check_config(config);
  check_panel(Y, orders);
  const int N = Y.N();
  const int d = orders.d();
  const std::vector<Omega> candidates = resolve_candidates(orders, config);

  std::vector<Eigen::MatrixXd> A0;
  std::function<Eigen::MatrixXd(int)> g0_of;
  switch (config.g_init) {
    case GInitMode::Zero:
      g0_of = [N, d](int) { return Eigen::MatrixXd::Zero(N, N * d); };
      break;
    case GInitMode::Explicit:
      if (config.g_init_explicit.rows() != N || config.g_init_explicit.cols() != N * d)
        throw std::invalid_argument("g_init_explicit must be N x (N*d)");
      g0_of = [&config](int) { return config.g_init_explicit; };
      break;
    case GInitMode::VarLasso:
      A0 = lasso_var_a0(Y.data, config);
      g0_of = [&](int i) {
        return map_g0(A0, project_omega(candidates[static_cast<size_t>(i)],
                                        config.epsilon_box),
                      orders);
      };
      break;
  }

  const CoreOut core = multi_start_core(Y.data, Y.data, orders, config,
                                        candidates, g0_of, config.threads);

  FitResult res;
  res.model.orders = orders;
  res.model.omega = core.best.omega;
  res.model.coefs = split_coefs(core.best.G, N);
  res.model.names =
      static_cast<int>(Y.names.size()) == N ? Y.names : default_names(N);
  res.model = canonicalize(res.model);
  res.objective_trace = core.best.trace;
  res.converged = core.best.converged;
  res.iterations = core.best.iterations;
  res.in_sample_loss = core.best.loss;
  res.nnz = count_nnz(core.best.G);
  res.config_used = config;
  res.final_alpha = core.best.alpha_g;
  return res;
}

FitResult fit_je(const SeriesPanel& Y, const ModelOrders& orders,
                 const FitConfig& config) {
  return multi_start(Y, orders, config);
}

FitResult fit_re(const SeriesPanel& Y, const ModelOrders& orders,
                 const FitConfig& config) {
  check_config(config);
  check_panel(Y, orders);
  const int N = Y.N();
  const int T = Y.T();
  const int d = orders.d();
  const std::vector<Omega> candidates = resolve_candidates(orders, config);
  const int nc = static_cast<int>(candidates.size());

  std::vector<Eigen::MatrixXd> G0full;
  if (config.g_init == GInitMode::VarLasso) {
    const auto A0 = lasso_var_a0(Y.data, config);
    G0full.resize(static_cast<size_t>(nc));
    for (int c = 0; c < nc; ++c)
      G0full[static_cast<size_t>(c)] =
          map_g0(A0, project_omega(candidates[static_cast<size_t>(c)],
                                   config.epsilon_box),
                 orders);
  } else if (config.g_init == GInitMode::Explicit) {
    if (config.g_init_explicit.rows() != N || config.g_init_explicit.cols() != N * d)
      throw std::invalid_argument("g_init_explicit must be N x (N*d)");
  }

  std::vector<CoreOut> rows(static_cast<size_t>(N));
  parallel_for_indexed(N, config.threads, [&](int i) {
    std::function<Eigen::MatrixXd(int)> g0row;
    switch (config.g_init) {
      case GInitMode::Zero:
        g0row = [N, d](int) { return Eigen::MatrixXd::Zero(1, N * d); };
        break;
      case GInitMode::Explicit:
        g0row = [&config, i](int) -> Eigen::MatrixXd {
          return config.g_init_explicit.row(i);
        };
        break;
      case GInitMode::VarLasso:
        g0row = [&G0full, i](int c) -> Eigen::MatrixXd {
          return G0full[static_cast<size_t>(c)].row(i);
        };
        break;
    }
    rows[static_cast<size_t>(i)] = multi_start_core(
        Y.data, Y.data.col(i), orders, config, candidates, g0row, 1);
  });

  Eigen::MatrixXd Gfull(N, N * d);
  std::vector<Omega> per_row(static_cast<size_t>(N));
  bool all_converged = true;
  int iterations = 0;
  double loss_sum = 0.0;
  double best_reduction = -std::numeric_limits<double>::infinity();
  int best_row = 0;
  for (int i = 0; i < N; ++i) {
    const EngineOut& b = rows[static_cast<size_t>(i)].best;
    Omega wi = b.omega;
    Eigen::RowVectorXd gi = b.G.row(0);
    canonical_row(wi, gi, orders, N);
    per_row[static_cast<size_t>(i)] = std::move(wi);
    Gfull.row(i) = gi;
    all_converged = all_converged && b.converged;
    iterations = std::max(iterations, b.iterations);
    loss_sum += b.loss;
    const double reduction = Y.data.col(i).squaredNorm() / T - b.loss;
    if (reduction > best_reduction) {
      best_reduction = reduction;
      best_row = i;
    }
  }

  FitResult res;
  res.model.orders = orders;
  res.model.omega = per_row[static_cast<size_t>(best_row)];
  res.model.coefs = split_coefs(Gfull, N);
  res.model.names =
      static_cast<int>(Y.names.size()) == N ? Y.names : default_names(N);
  res.objective_trace = rows[static_cast<size_t>(best_row)].best.trace;
  res.converged = all_converged;
  res.iterations = iterations;
  res.in_sample_loss = loss_sum;
  res.nnz = count_nnz(Gfull);
  res.config_used = config;
  res.per_row_omega = std::move(per_row);
  res.final_alpha = rows[static_cast<size_t>(best_row)].best.alpha_g;
  return res;
}

}  // namespace spvarinf
