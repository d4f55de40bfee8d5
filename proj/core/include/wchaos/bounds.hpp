#pragma once

#include <map>
#include <utility>
#include <vector>

#include "wchaos/hilbert.hpp"

// Distance-to-Gaussian bound calculators: Gaussian pair gap, contraction
// bound, fourth-moment and mixed-chaos moment bounds, truncation tails and
// the finite-dimensional Wasserstein constant.

namespace wchaos {

/// Assembled components of a d2 bound; total = (m_tilde + c_tilde +
/// hs_cov_gap) / 2.
struct BoundReport {
  double m_tilde = 0.0;
  double c_tilde = 0.0;
  double hs_cov_gap = 0.0;
  double total = 0.0;
};

/// d2(Z1, Z2) <= ||S1 - S2||_HS / 2 for centered Gaussians.
double d2_gaussian_gap(const CovOperator& s1, const CovOperator& s2);

/// Gamma-variance coefficient for contraction norms: the per-r weight
/// p^2 ((r-1)! C(p-1,r-1) C(q-1,r-1))^2 (p+q-2r)!, p the larger order.
double contraction_coefficient(int p, int q, int r);

/// Own-order term m~ = sum_p sqrt(sum_{r=1}^{p-1} v_pp(r) ||f_p (x)_r f_p||^2)
/// and cross-order term c~ over pairs p != q, with unsymmetrized
/// contraction norms (K indices included).
std::pair<double, double> contraction_bound(const ChaosExpansion& f);

/// Full d2 bound of a K-valued expansion against a target Gaussian:
/// (m~ + c~ + ||S_target - cov(F)||_HS) / 2.
BoundReport d2_bound_total(const ChaosExpansion& f, const CovOperator& s_target);

/// ((1+sqrt(3))/sqrt(3)) sqrt(m4 (m4 - m2^2 - 2 s_hs^2)) for a single
/// chaotic eigenfunction; small negative gaps (>= -1e-9) clip to 0,
/// larger ones throw.
double fourth_moment_bound(double m4, double m2, double s_hs);

/// Per-order moment inputs for the mixed-chaos bound.
struct OrderMoments {
  double m4 = 0.0;    // E ||F_p||^4
  double m2 = 0.0;    // E ||F_p||^2
  double s_hs = 0.0;  // ||S_p||_HS
};

/// sqrt(M(F) + C(F)) with M = (1/sqrt3) sum_pq c_pq sqrt(m4_p (m4_q -
/// m2_q^2 - 2 s_hs_q^2)), C = sum_{p!=q} a_pq Cov(||F_p||^2, ||F_q||^2),
/// a_pq = (lambda_p + lambda_q) / (2 lambda_q), c_pp = 1 + sqrt3,
/// c_pq = a_pq otherwise. Default eigenvalues lambda_p = p.
double mixed_moment_bound(const std::map<int, OrderMoments>& stats,
                          const std::map<std::pair<int, int>, double>& cross_cov,
                          const std::map<int, double>& eigenvalues = {});

/// sqrt(sum_{p > N} tr S_p); indices in `traces` start at order 1.
double truncation_tail(const std::vector<double>& traces, int cutoff);

/// C_{S,d} = sqrt(d lambda_max) / lambda_min; throws for singular S.
double wasserstein_constant(const CovOperator& s, int d);

}  // namespace wchaos
