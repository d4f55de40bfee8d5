#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "wchaos/chaos.hpp"

// Discretized value space K = L^2([0,1]) on a uniform midpoint grid:
// covariance operators, trace / Hilbert-Schmidt norms and a reference
// Gaussian sampler. The inner product is <u,v> = (1/m) sum u_i v_i on
// node values.

namespace wchaos {

struct GridK {
  int m = 1;

  explicit GridK(int cells) : m(cells) {
    if (m < 1) throw std::invalid_argument("GridK: m must be >= 1");
  }
  double node(int i) const { return (i + 0.5) / m; }
  double weight() const { return 1.0 / m; }
};

/// Integral operator with kernel matrix C_ij = c(s_i, s_j).
struct CovOperator {
  GridK grid;
  Eigen::MatrixXd kernel;

  CovOperator(GridK g, Eigen::MatrixXd c);

  static CovOperator zero(GridK g) {
    return CovOperator(g, Eigen::MatrixXd::Zero(g.m, g.m));
  }
  static CovOperator from_kernel(GridK g, const std::function<double(double, double)>& c);
  /// Brownian motion covariance min(s, t).
  static CovOperator brownian(GridK g);
};

/// tr S = (1/m) sum_i C_ii.
double op_trace(const CovOperator& s);

/// ||S||_HS = sqrt((1/m^2) sum_ij C_ij^2).
double op_hs_norm(const CovOperator& s);

/// Largest / smallest eigenvalue of the operator (via the weighted matrix
/// C/m); used for operator norms and the Wasserstein constant.
Eigen::VectorXd op_eigenvalues(const CovOperator& s);

/// Trace norm ||S||_S1 = sum |lambda_i|.
double op_trace_norm(const CovOperator& s);

/// E ||Z||^4 = (tr S)^2 + 2 ||S||_HS^2 for Gaussian Z with covariance S.
double gaussian_fourth_moment(const CovOperator& s);

CovOperator operator-(const CovOperator& a, const CovOperator& b);
CovOperator operator*(double c, const CovOperator& a);

/// Factored sampler for centered Gaussians with a given covariance
/// operator. Eigendecomposition square root with clipping at 0; throws
/// when an eigenvalue falls below -1e-10 tr S.
class GaussianSampler {
 public:
  explicit GaussianSampler(const CovOperator& s);

  /// Node values of one draw; consumes 'm' standard normals from `normals`.
  std::vector<double> sample(const std::vector<double>& normals) const;
  int dim() const { return static_cast<int>(sqrt_factor_.rows()); }

 private:
  Eigen::MatrixXd sqrt_factor_;
};

/// Covariance operator of a K-valued chaos expansion:
/// C(s_i, s_j) = sum_p p! <f~_p(., s_i), f~_p(., s_j)>_H. Kernel K
/// coordinates are coefficients over the orthonormalized cell basis
/// sqrt(m) 1_cell, so node values carry an extra factor sqrt(m).
CovOperator chaos_cov_operator(const ChaosExpansion& f, GridK grid);

}  // namespace wchaos
