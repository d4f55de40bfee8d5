#pragma once

#include <functional>
#include <vector>

// Probabilists' Hermite polynomials: H_0 = 1, H_1 = x,
// H_{n+1}(x) = x H_n(x) - n H_{n-1}(x). This normalization is used
// throughout the library; the physicists' convention never appears.

namespace wchaos {

/// Coefficients c_0..c_N of an expansion sum_i c_i H_i in L^2 of the
/// standard Gaussian measure.
struct HermiteSeries {
  std::vector<double> coeffs;  // exactly max_order()+1 entries

  int max_order() const { return static_cast<int>(coeffs.size()) - 1; }

  /// Default rank tolerance: 1e-10 relative to the largest coefficient.
  double default_rank_tol() const;
};

/// H_n(x), probabilists' normalization.
double hermite_eval(int n, double x);

/// d/dx H_n(x) = n H_{n-1}(x); 0 for n = 0.
double hermite_derivative(int n, double x);

/// Gauss-Hermite quadrature adapted to the standard Gaussian weight:
/// nodes x_j and weights w_j with sum_j w_j f(x_j) ~ E f(X), X ~ N(0,1).
/// Exact for polynomials of degree <= 2Q-1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussHermiteRule(int q);
};

/// Expand phi into sum c_i H_i, c_i = E[phi(X) H_i(X)] / i!, by
/// Gauss-Hermite quadrature of order q (default 2N+8, exact for the
/// polynomial test cases). Throws std::domain_error if phi evaluates
/// non-finite at a quadrature node.
HermiteSeries hermite_expand(const std::function<double(double)>& phi, int max_order,
                             int quadrature_order = -1);

/// Smallest index d >= 1 with |c_d| > tol. Throws std::domain_error when
/// every coefficient of positive index is below tolerance (rank undefined).
int hermite_rank(const HermiteSeries& s, double tol);
int hermite_rank(const HermiteSeries& s);

}  // namespace wchaos
