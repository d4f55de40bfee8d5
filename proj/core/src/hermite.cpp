#include "wchaos/hermite.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace wchaos {

double hermite_eval(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_eval: n must be >= 0");
  double hm = 1.0;  // H_0
  if (n == 0) return hm;
  double h = x;  // H_1
  for (int k = 1; k < n; ++k) {
    double next = x * h - k * hm;
    hm = h;
    h = next;
  }
  return h;
}

double hermite_derivative(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_derivative: n must be >= 0");
  if (n == 0) return 0.0;
  return n * hermite_eval(n - 1, x);
}

GaussHermiteRule::GaussHermiteRule(int q) {
  if (q < 1) throw std::invalid_argument("GaussHermiteRule: order must be >= 1");
  // Golub-Welsch for the weight exp(-t^2): symmetric tridiagonal Jacobi
  // matrix with off-diagonals sqrt(k/2). Nodes/weights are then mapped to
  // the N(0,1) weight via x = sqrt(2) t, w = w_phys / sqrt(pi).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(q, q);
  for (int k = 1; k < q; ++k) {
    double b = std::sqrt(k / 2.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  nodes.resize(q);
  weights.resize(q);
  const double sqrt2 = std::sqrt(2.0);
  for (int j = 0; j < q; ++j) {
    nodes[j] = sqrt2 * es.eigenvalues()(j);
    double v0 = es.eigenvectors()(0, j);
    weights[j] = v0 * v0;  // physicists' weight / sqrt(pi)
  }
}

HermiteSeries hermite_expand(const std::function<double(double)>& phi, int max_order,
                             int quadrature_order) {
  if (max_order < 0) throw std::invalid_argument("hermite_expand: max_order must be >= 0");
  int q = quadrature_order > 0 ? quadrature_order : 2 * max_order + 8;
  if (q < max_order + 1)
    throw std::invalid_argument("hermite_expand: quadrature order must be >= N+1");
  GaussHermiteRule rule(q);

  std::vector<double> fx(rule.nodes.size());
  for (size_t j = 0; j < rule.nodes.size(); ++j) {
    fx[j] = phi(rule.nodes[j]);
    if (!std::isfinite(fx[j]))
      throw std::domain_error("hermite_expand: non-finite value at quadrature node");
  }

  HermiteSeries s;
  s.coeffs.assign(max_order + 1, 0.0);
  double fact = 1.0;
  for (int i = 0; i <= max_order; ++i) {
    if (i > 0) fact *= i;
    double acc = 0.0;
    for (size_t j = 0; j < rule.nodes.size(); ++j)
      acc += rule.weights[j] * fx[j] * hermite_eval(i, rule.nodes[j]);
    s.coeffs[i] = acc / fact;
  }
  return s;
}

double HermiteSeries::default_rank_tol() const {
  double maxc = 0.0;
  for (double c : coeffs) maxc = std::max(maxc, std::abs(c));
  return 1e-10 * maxc;
}

int hermite_rank(const HermiteSeries& s, double tol) {
  for (int d = 1; d <= s.max_order(); ++d)
    if (std::abs(s.coeffs[d]) > tol) return d;
  throw std::domain_error("hermite_rank: all coefficients of index >= 1 below tolerance");
}

int hermite_rank(const HermiteSeries& s) { return hermite_rank(s, s.default_rank_tol()); }

}  // namespace wchaos
