#pragma once

#include <map>
#include <vector>

#include "wchaos/tensor.hpp"

// Exact moment algebra of multiple Wiener integrals I_p(f) over a finite
// H-basis: isometry, multiplication formula, fourth-moment identity and
// carre-du-champ variance, plus Hermite-product pathwise samplers used by
// the Monte-Carlo cross checks.

namespace wchaos {

/// F = sum_p I_p(f_p); kernels are whitened, symmetric, share h_dim and
/// are either all scalar or all K-valued with a common k_dim.
struct ChaosExpansion {
  std::map<int, Kernel> terms;

  /// Throws unless every stored kernel is symmetric and shapes agree.
  void validate(double sym_tol = 1e-9) const;
};

/// E ||I_p(f)||^2 = p! ||sym(f)||^2. Throws for p = 0.
double second_moment(const Kernel& f, int p);

/// I_p(f) I_q(g) as a chaos expansion: term of order p+q-2r equals
/// r! C(p,r) C(q,r) sym(f (x)_r g). Scalar kernels only.
ChaosExpansion product_formula(const Kernel& f, int p, const Kernel& g, int q);

/// E(I_p(f_u)^2 I_p(f_v)^2) - E(I_p(f_u)^2) E(I_p(f_v)^2)
///   - 2 E(I_p(f_u) I_p(f_v))^2, evaluated through the contraction
/// identity; always >= 0.
double fourth_moment_gap(const Kernel& f_u, const Kernel& f_v, int p);

/// Var <D I_p(f), -D L^{-1} I_q(g)> for the larger order p (arguments are
/// swapped internally when p < q):
///   p^2 sum_{r=1}^{R} ((r-1)! C(p-1,r-1) C(q-1,r-1))^2 (p+q-2r)!
///       ||f (~x)_r g||^2,
/// with R = min(p,q) for p != q and R = p-1 for p = q.
double gamma_variance(const Kernel& f, int p, const Kernel& g, int q);

/// Pathwise value of I_p(f) at a draw W of the dH underlying standard
/// Gaussians, via the Hermite product representation. K-valued kernels
/// yield one value per K coordinate.
double sample_multiple_integral(const Kernel& f, int p, const std::vector<double>& w);
std::vector<double> sample_multiple_integral_k(const Kernel& f, int p,
                                               const std::vector<double>& w);

/// Pathwise <D I_p(f), -D L^{-1} I_q(g)> = (1/q) <grad P_f, grad P_g>(W),
/// where P is the Hermite product polynomial of the integral.
double sample_gamma_pair(const Kernel& f, int p, const Kernel& g, int q,
                         const std::vector<double>& w);

}  // namespace wchaos
