#include "spvarinf/diagnostics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spvarinf {

std::string to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::ShortOnly: return "short";
    case EdgeKind::LongOnly: return "long";
    case EdgeKind::Both: return "both";
  }
  return "both";
}

GrangerNetwork granger_network(const SpvarModel& model, double zero_tol) {
  validate(model);
  if (zero_tol < 0.0) throw std::invalid_argument("zero_tol must be >= 0");
  const int N = model.coefs.N;
  const int d = model.orders.d();
  GrangerNetwork net;
  net.N = N;
  net.threshold = zero_tol;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      GrangerEdge e;
      e.from = j;
      e.to = i;
      bool short_hit = false;
      bool long_hit = false;
      for (int k = 1; k <= d; ++k) {
        const double v = std::abs(model.coefs.mats[static_cast<size_t>(k - 1)](i, j));
        if (v > zero_tol) {
          e.support.push_back(k);
          e.magnitude = std::max(e.magnitude, v);
          (k <= model.orders.p ? short_hit : long_hit) = true;
        }
      }
      if (!short_hit && !long_hit) continue;
      e.kind = short_hit && long_hit ? EdgeKind::Both
               : short_hit          ? EdgeKind::ShortOnly
                                    : EdgeKind::LongOnly;
      net.edges.push_back(std::move(e));
    }
  }
  return net;
}

std::vector<Eigen::MatrixXd> impulse_responses(const SpvarModel& model, int J) {
  return vma_coeffs(model, J);
}

Eigen::MatrixXd sigma_eps_estimate(const SpvarModel& model, const SeriesPanel& Y,
                                   double lambda_eps) {
  if (lambda_eps < 0.0) throw std::invalid_argument("lambda_eps must be >= 0");
  const Eigen::MatrixXd R = residuals(model, Y);
  const double T = static_cast<double>(R.rows());
  Eigen::MatrixXd S = (R.transpose() * R) / T;
  S = 0.5 * (S + S.transpose()).eval();  // exact symmetry
  for (int i = 0; i < S.rows(); ++i)
    for (int j = 0; j < S.cols(); ++j)
      if (i != j && std::abs(S(i, j)) <= lambda_eps) S(i, j) = 0.0;
  return S;
}

double lambda_eps_rule(const Eigen::MatrixXd& sigma_raw, int T) {
  if (sigma_raw.rows() != sigma_raw.cols() || sigma_raw.rows() < 1)
    throw std::invalid_argument("sigma_raw must be square and nonempty");
  if (T < 2) throw std::invalid_argument("T must be >= 2");
  const double N = static_cast<double>(sigma_raw.rows());
  return 2.0 * std::sqrt(std::log(N) / T) * sigma_raw.diagonal().maxCoeff();
}

std::string to_dot(const GrangerNetwork& net, const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != net.N)
    throw std::invalid_argument("to_dot: names must have one entry per series");
  std::ostringstream os;
  os << "digraph granger {\n";
  for (int i = 0; i < net.N; ++i)
    os << "  n" << i << " [label=\"" << names[static_cast<size_t>(i)] << "\"];\n";
  for (const auto& e : net.edges) {
    os << "  n" << e.from << " -> n" << e.to << " [kind=" << to_string(e.kind);
    switch (e.kind) {
      case EdgeKind::ShortOnly: os << ", style=solid"; break;
      case EdgeKind::LongOnly: os << ", style=dashed"; break;
      case EdgeKind::Both: os << ", style=bold"; break;
    }
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace spvarinf
