#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

// Dense coordinate representation of symmetric tensor kernels over a
// finite basis of the underlying Hilbert space H, optionally carrying
// one or two value-space (K) indices. Desk scale: h_dim <= 16, order <= 4.

namespace wchaos {

/// Gram matrix G_ij = <b_i, b_j> of a finite H-basis, together with a
/// symmetric factor L (G = L L^T) used to whiten coordinates.
struct GramBasis {
  int dim = 0;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd factor;
};

/// G_ij = rho(i - j). Factorized by symmetric eigendecomposition;
/// eigenvalues in [-1e-10 tr(G)/dim, 0) are clipped to 0, anything below
/// that band throws (rho is not positive semidefinite at this size).
GramBasis gram_from_cov(const std::function<double(int)>& rho, int dim);

enum class BasisMode { raw, whitened };

/// Element of H^{(x)order} (x) K^{(x)k_count}. Coordinates are stored
/// row-major, H indices first, K indices trailing. K coordinates are
/// coefficients over the orthonormalized value-space basis, so the plain
/// Euclidean inner product of whitened kernels is the full tensor inner
/// product.
class Kernel {
 public:
  Kernel(int order, int h_dim, int k_count, int k_dim, BasisMode mode);

  static Kernel zero(int order, int h_dim, BasisMode mode = BasisMode::whitened) {
    return Kernel(order, h_dim, 0, 0, mode);
  }
  /// Order-1 basis kernel e_i.
  static Kernel basis_vector(int h_dim, int i, BasisMode mode = BasisMode::whitened);

  int order() const { return order_; }
  int h_dim() const { return h_dim_; }
  int k_count() const { return k_count_; }
  int k_dim() const { return k_dim_; }
  BasisMode mode() const { return mode_; }

  std::vector<double>& coords() { return coords_; }
  const std::vector<double>& coords() const { return coords_; }
  std::int64_t size() const { return static_cast<std::int64_t>(coords_.size()); }

  /// Flat index from explicit H and K multi-indices.
  std::int64_t flat(const std::vector<int>& h_idx, const std::vector<int>& k_idx = {}) const;
  double& at(const std::vector<int>& h_idx, const std::vector<int>& k_idx = {});
  double at(const std::vector<int>& h_idx, const std::vector<int>& k_idx = {}) const;

  bool same_shape(const Kernel& other) const;
  /// Max deviation from H-index permutation symmetry over all transpositions.
  double symmetry_defect() const;

 private:
  int order_, h_dim_, k_count_, k_dim_;
  BasisMode mode_;
  std::vector<double> coords_;
};

/// Apply L^T along every H index; turns Gram-weighted norms and
/// contractions into Euclidean ones.
Kernel whiten(const Kernel& f, const GramBasis& basis);

/// Average over all permutations of the H indices (K indices untouched).
Kernel symmetrize(const Kernel& f);

/// r-th contraction: sums the last r H indices of f against the first r
/// of g. Result order is p+q-2r; K indices of f precede those of g.
/// Both operands must be whitened (or both raw with an identity Gram,
/// which is the same thing coordinate-wise).
Kernel contract(const Kernel& f, const Kernel& g, int r);

/// Euclidean sum of coordinate products; shapes must match exactly.
double kernel_inner(const Kernel& f, const Kernel& g);
double kernel_norm(const Kernel& f);

/// Gram-weighted inner product of raw kernels (oracle-facing; O(size^2)).
double gram_weighted_inner(const Kernel& f, const Kernel& g, const GramBasis& basis);

Kernel operator+(const Kernel& a, const Kernel& b);
Kernel operator*(double s, const Kernel& f);

}  // namespace wchaos
