#pragma once

#include "spvarinf/loss.hpp"

namespace spvarinf {

enum class EdgeKind { ShortOnly, LongOnly, Both };

std::string to_string(EdgeKind kind);

struct GrangerEdge {
  int from = 0;  // j (source series), 0-based
  int to = 0;    // i (affected series), 0-based
  EdgeKind kind = EdgeKind::ShortOnly;
  double magnitude = 0.0;          // max_k |g_{i,j,k}|
  std::vector<int> support;       // k indices (1-based) above threshold
};

struct GrangerNetwork {
  int N = 0;
  double threshold = 0.0;
  std::vector<GrangerEdge> edges;  // ordered by (to, from)
};

// Edge j->i when |g_{i,j,k}| > zero_tol for some k, i != j. ShortOnly if the
// support lies in k <= p, LongOnly if in k > p, Both otherwise.
GrangerNetwork granger_network(const SpvarModel& model, double zero_tol = 1e-8);

// Impulse responses = VMA coefficients Psi_1..Psi_J.
std::vector<Eigen::MatrixXd> impulse_responses(const SpvarModel& model, int J);

// Hard-thresholded residual covariance: off-diagonal entries of
// (1/T) sum eps_t eps_t' set to zero when |.| <= lambda_eps.
Eigen::MatrixXd sigma_eps_estimate(const SpvarModel& model, const SeriesPanel& Y,
                                   double lambda_eps);

// Rule-of-thumb threshold 2 sqrt(log(N)/T) * max diagonal entry.
double lambda_eps_rule(const Eigen::MatrixXd& sigma_raw, int T);

// DOT digraph with edge style by kind (short=solid, long=dashed, both=bold).
std::string to_dot(const GrangerNetwork& net, const std::vector<std::string>& names);

}  // namespace spvarinf
