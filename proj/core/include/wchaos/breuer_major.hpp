#pragma once

#include <optional>

#include "wchaos/bounds.hpp"
#include "wchaos/hilbert.hpp"

// Functional Breuer-Major machinery: stationary covariance models, the
// partial-sum process covariance T_n, sigma^2 / sigma_n^2, the deviation
// kernel k_n, closed-form Toeplitz contraction norms and the assembled
// rate bound.

namespace wchaos {

enum class SlowVariation { constant, log };

/// Stationary covariance rho with rho(0) = 1: iid, power-law
/// |k|^alpha l(|k|) with alpha < 0, or fractional-Brownian-motion
/// increments with Hurst index H.
struct CovModel {
  enum class Variant { iid, power_law, fbm_increment } variant = Variant::iid;
  double alpha = 0.0;                                  // power-law exponent, < 0
  SlowVariation slow = SlowVariation::constant;        // l(k) = 1 or log(e + k)
  double hurst = 0.5;                                  // fbm H in (0,1)

  static CovModel iid() { return {}; }
  static CovModel power_law(double alpha, SlowVariation l = SlowVariation::constant);
  static CovModel fbm(double hurst);

  /// Effective power-law exponent (2H-2 for fbm, -inf for iid).
  double effective_alpha() const;
};

double rho(const CovModel& cov, long k);

/// Partial-sum process specification: U_n(t) = n^{-1/2}
/// sum_{i=1}^{floor(nt)} H_p(X_i) on the given value-space grid.
struct BmSpec {
  int p = 1;
  long n = 1;
  CovModel cov;
  GridK grid{8};

  /// True when alpha p < -1, so the limiting variance exists.
  bool summable() const;
};

/// Limiting variance sigma^2 = p! sum_k rho(k)^p truncated at `cutoff`
/// lags, with an integral-comparison estimate of the dropped tail.
struct SigmaSq {
  double value = 0.0;
  double tail_bound = 0.0;
};
SigmaSq sigma_sq(int p, const CovModel& cov, long cutoff = 1000000);

/// sigma_n^2 = p! sum_{|k| < n} rho(k)^p (1 - |k|/n), exact finite sum.
double sigma_n_sq(int p, const CovModel& cov, long n);

/// Covariance operator of U_n on the grid:
/// C(s,t) = (p!/n) sum_{i <= floor(ns)} sum_{j <= floor(nt)} rho(i-j)^p.
CovOperator t_n_operator(const BmSpec& spec);

/// Deviation kernel k_n(s,t) = E(U_n(s) U_n(t)) - (s^t) sigma_n^2.
double kn_kernel(const BmSpec& spec, double s, double t);

/// How tr((AB)^2) is evaluated in bm_contraction_norm: dense Toeplitz
/// products, circulant-FFT matvecs, or a size-based automatic choice.
enum class ToeplitzPath { automatic, dense, fft };

/// Closed form of ||f_{n,1} (x)_r f_{n,1}||: sqrt(tr((AB)^2)) / n with
/// A_ij = rho(i-j)^r, B_ij = rho(i-j)^{p-r}.
double bm_contraction_norm(int p, int r, long n, const CovModel& cov,
                           ToeplitzPath path = ToeplitzPath::automatic);

/// Theorem rate r_alpha(n) for the power-law model; boundary alphas take
/// the slower adjacent rate.
double rate_function(double alpha, int p, long n, SlowVariation l = SlowVariation::constant);

/// Rate for fbm increments with Hurst index H < (2p-1)/(2p).
double fbm_rate(double hurst, int p, long n);

/// Assembled d2 rate bound with the sigma-gap term split out:
/// total = (m_tilde + hs_cov_gap + sigma_gap) / 2.
struct BmBoundReport {
  double m_tilde = 0.0;
  double hs_cov_gap = 0.0;
  double sigma_gap = 0.0;  // |sigma_n^2 - sigma^2| ||S||_HS
  double total = 0.0;

  BoundReport as_bound_report() const {
    return {m_tilde, 0.0, hs_cov_gap + sigma_gap, total};
  }
};

BmBoundReport theorem13_bound(const BmSpec& spec, long sigma_cutoff = 1000000,
                              ToeplitzPath path = ToeplitzPath::automatic);

}  // namespace wchaos
