#include "wchaos/hilbert.hpp"

#include <cmath>
#include <stdexcept>

namespace wchaos {

CovOperator::CovOperator(GridK g, Eigen::MatrixXd c) : grid(g), kernel(std::move(c)) {
  if (kernel.rows() != grid.m || kernel.cols() != grid.m)
    throw std::invalid_argument("CovOperator: kernel matrix does not match grid");
  double scale = std::max(1.0, kernel.cwiseAbs().maxCoeff());
  if ((kernel - kernel.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw std::invalid_argument("CovOperator: kernel matrix must be symmetric");
}

CovOperator CovOperator::from_kernel(GridK g, const std::function<double(double, double)>& c) {
  Eigen::MatrixXd m(g.m, g.m);
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j <= i; ++j) {
      m(i, j) = c(g.node(i), g.node(j));
      m(j, i) = m(i, j);
    }
  return CovOperator(g, std::move(m));
}

CovOperator CovOperator::brownian(GridK g) {
  return from_kernel(g, [](double s, double t) { return std::min(s, t); });
}

double op_trace(const CovOperator& s) { return s.kernel.trace() / s.grid.m; }

double op_hs_norm(const CovOperator& s) { return s.kernel.norm() / s.grid.m; }

Eigen::VectorXd op_eigenvalues(const CovOperator& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.kernel / s.grid.m,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double op_trace_norm(const CovOperator& s) { return op_eigenvalues(s).cwiseAbs().sum(); }

double gaussian_fourth_moment(const CovOperator& s) {
  double tr = op_trace(s);
  double hs = op_hs_norm(s);
  return tr * tr + 2.0 * hs * hs;
}

CovOperator operator-(const CovOperator& a, const CovOperator& b) {
  if (a.grid.m != b.grid.m) throw std::invalid_argument("CovOperator: grid mismatch");
  return CovOperator(a.grid, a.kernel - b.kernel);
}

CovOperator operator*(double c, const CovOperator& a) {
  return CovOperator(a.grid, c * a.kernel);
}

GaussianSampler::GaussianSampler(const CovOperator& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.kernel / s.grid.m);
  Eigen::VectorXd lam = es.eigenvalues();
  double band = 1e-10 * std::max(lam.cwiseAbs().sum(), 1.0);
  for (int i = 0; i < lam.size(); ++i) {
    if (lam(i) < -band)
      throw std::domain_error("GaussianSampler: covariance operator is indefinite");
    lam(i) = std::max(lam(i), 0.0);
  }
  // Map from iid standard normals to node values; the sqrt(m) converts
  // orthonormal-basis coefficients to midpoint values.
  sqrt_factor_ = std::sqrt(static_cast<double>(s.grid.m)) * es.eigenvectors() *
                 lam.cwiseSqrt().asDiagonal();
}

std::vector<double> GaussianSampler::sample(const std::vector<double>& normals) const {
  if (static_cast<int>(normals.size()) != dim())
    throw std::invalid_argument("GaussianSampler: wrong number of normals");
  Eigen::Map<const Eigen::VectorXd> z(normals.data(), normals.size());
  Eigen::VectorXd v = sqrt_factor_ * z;
  return std::vector<double>(v.data(), v.data() + v.size());
}

CovOperator chaos_cov_operator(const ChaosExpansion& f, GridK grid) {
  f.validate();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(grid.m, grid.m);
  double fact = 1.0;
  for (const auto& [p, kern] : f.terms) {
    if (p == 0) continue;
    if (kern.k_count() != 1 || kern.k_dim() != grid.m)
      throw std::invalid_argument("chaos_cov_operator: kernel K dimension does not match grid");
    fact = 1.0;
    for (int k = 2; k <= p; ++k) fact *= k;
    Kernel s = symmetrize(kern);
    std::int64_t hsize = s.size() / grid.m;
    for (std::int64_t a = 0; a < hsize; ++a) {
      const double* row = s.coords().data() + a * grid.m;
      for (int i = 0; i < grid.m; ++i)
        for (int j = 0; j <= i; ++j) c(i, j) += fact * row[i] * row[j];
    }
  }
  // Coefficient-to-value conversion contributes a factor m.
  c *= grid.m;
  for (int i = 0; i < grid.m; ++i)
    for (int j = i + 1; j < grid.m; ++j) c(i, j) = c(j, i);
  return CovOperator(grid, std::move(c));
}

}  // namespace wchaos
