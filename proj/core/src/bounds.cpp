#include "wchaos/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wchaos {

namespace {

double fact(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

constexpr double kGapSlack = 1e-9;

double clip_radicand(double g, const char* who) {
  if (g < -kGapSlack)
    throw std::domain_error(std::string(who) + ": negative radicand beyond tolerance");
  return std::max(g, 0.0);
}

}  // namespace

double d2_gaussian_gap(const CovOperator& s1, const CovOperator& s2) {
  return 0.5 * op_hs_norm(s1 - s2);
}

double contraction_coefficient(int p, int q, int r) {
  int big = std::max(p, q);
  double c = fact(r - 1) * binom(p - 1, r - 1) * binom(q - 1, r - 1);
  return static_cast<double>(big) * big * c * c * fact(p + q - 2 * r);
}

std::pair<double, double> contraction_bound(const ChaosExpansion& f) {
  f.validate();
  double m_tilde = 0.0, c_tilde = 0.0;
  for (const auto& [p, fp] : f.terms) {
    if (p < 1) continue;
    double acc = 0.0;
    for (int r = 1; r <= p - 1; ++r) {
      Kernel c = contract(fp, fp, r);
      acc += contraction_coefficient(p, p, r) * kernel_inner(c, c);
    }
    m_tilde += std::sqrt(acc);
    for (const auto& [q, fq] : f.terms) {
      if (q < 1 || q == p) continue;
      double cacc = 0.0;
      for (int r = 1; r <= std::min(p, q); ++r) {
        Kernel c = contract(fp, fq, r);
        cacc += contraction_coefficient(p, q, r) * kernel_inner(c, c);
      }
      c_tilde += std::sqrt(cacc);
    }
  }
  return {m_tilde, c_tilde};
}

BoundReport d2_bound_total(const ChaosExpansion& f, const CovOperator& s_target) {
  auto [m_tilde, c_tilde] = contraction_bound(f);
  CovOperator t = chaos_cov_operator(f, s_target.grid);
  BoundReport rep;
  rep.m_tilde = m_tilde;
  rep.c_tilde = c_tilde;
  rep.hs_cov_gap = op_hs_norm(s_target - t);
  rep.total = 0.5 * (rep.m_tilde + rep.c_tilde + rep.hs_cov_gap);
  return rep;
}

double fourth_moment_bound(double m4, double m2, double s_hs) {
  if (m4 < 0.0) throw std::invalid_argument("fourth_moment_bound: m4 must be >= 0");
  double gap = clip_radicand(m4 - m2 * m2 - 2.0 * s_hs * s_hs, "fourth_moment_bound");
  return (1.0 + std::sqrt(3.0)) / std::sqrt(3.0) * std::sqrt(m4 * gap);
}

double mixed_moment_bound(const std::map<int, OrderMoments>& stats,
                          const std::map<std::pair<int, int>, double>& cross_cov,
                          const std::map<int, double>& eigenvalues) {
  auto lambda = [&](int p) {
    auto it = eigenvalues.find(p);
    return it != eigenvalues.end() ? it->second : static_cast<double>(p);
  };
  const double sqrt3 = std::sqrt(3.0);
  double m = 0.0;
  for (const auto& [p, mp] : stats)
    for (const auto& [q, mq] : stats) {
      double c_pq = (p == q) ? 1.0 + sqrt3 : (lambda(p) + lambda(q)) / (2.0 * lambda(q));
      double gap = clip_radicand(mq.m4 - mq.m2 * mq.m2 - 2.0 * mq.s_hs * mq.s_hs,
                                 "mixed_moment_bound");
      m += c_pq * std::sqrt(mp.m4 * gap);
    }
  m /= sqrt3;
  double c = 0.0;
  for (const auto& [pq, cov] : cross_cov) {
    if (pq.first == pq.second) continue;
    double a_pq = (lambda(pq.first) + lambda(pq.second)) / (2.0 * lambda(pq.second));
    c += a_pq * cov;
  }
  return std::sqrt(clip_radicand(m + c, "mixed_moment_bound"));
}

double truncation_tail(const std::vector<double>& traces, int cutoff) {
  double acc = 0.0;
  for (size_t i = 0; i < traces.size(); ++i) {
    if (traces[i] < 0.0) throw std::invalid_argument("truncation_tail: traces must be >= 0");
    int order = static_cast<int>(i) + 1;
    if (order > cutoff) acc += traces[i];
  }
  return std::sqrt(acc);
}

double wasserstein_constant(const CovOperator& s, int d) {
  if (d < 1) throw std::invalid_argument("wasserstein_constant: d must be >= 1");
  Eigen::VectorXd lam = op_eigenvalues(s);
  double lmin = lam.minCoeff(), lmax = lam.maxCoeff();
  double tr = lam.sum();
  if (lmin <= 1e-12 * std::max(tr, 1e-300))
    throw std::domain_error("wasserstein_constant: covariance operator is singular");
  return std::sqrt(d * lmax) / lmin;
}

}  // namespace wchaos
