#include "wchaos/breuer_major.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace wchaos {

namespace {

double fact(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

double slow_l(SlowVariation l, double x) {
  return l == SlowVariation::log ? std::log(std::exp(1.0) + x) : 1.0;
}

long next_pow2(long n) {
  long m = 1;
  while (m < n) m *= 2;
  return m;
}

}  // namespace

CovModel CovModel::power_law(double alpha, SlowVariation l) {
  if (alpha >= 0.0) throw std::invalid_argument("CovModel: power-law alpha must be < 0");
  CovModel c;
  c.variant = Variant::power_law;
  c.alpha = alpha;
  c.slow = l;
  return c;
}

CovModel CovModel::fbm(double hurst) {
  if (hurst <= 0.0 || hurst >= 1.0)
    throw std::invalid_argument("CovModel: Hurst index must lie in (0,1)");
  CovModel c;
  c.variant = Variant::fbm_increment;
  c.hurst = hurst;
  return c;
}

double CovModel::effective_alpha() const {
  switch (variant) {
    case Variant::iid:
      return -std::numeric_limits<double>::infinity();
    case Variant::power_law:
      return alpha;
    case Variant::fbm_increment:
      return 2.0 * hurst - 2.0;
  }
  return 0.0;
}

double rho(const CovModel& cov, long k) {
  k = std::labs(k);
  if (k == 0) return 1.0;
  switch (cov.variant) {
    case CovModel::Variant::iid:
      return 0.0;
    case CovModel::Variant::power_law:
      return std::pow(static_cast<double>(k), cov.alpha) * slow_l(cov.slow, static_cast<double>(k));
    case CovModel::Variant::fbm_increment: {
      double h2 = 2.0 * cov.hurst;
      double kk = static_cast<double>(k);
      return 0.5 * (std::pow(kk + 1.0, h2) + std::pow(kk - 1.0, h2) - 2.0 * std::pow(kk, h2));
    }
  }
  return 0.0;
}

bool BmSpec::summable() const { return cov.effective_alpha() * p < -1.0; }

SigmaSq sigma_sq(int p, const CovModel& cov, long cutoff) {
  if (p < 1) throw std::invalid_argument("sigma_sq: p must be >= 1");
  if (cutoff < 1) throw std::invalid_argument("sigma_sq: cutoff must be >= 1");
  double ap = cov.effective_alpha() * p;
  if (ap >= -1.0)
    throw std::domain_error("sigma_sq: sum rho(k)^p diverges (alpha * p >= -1)");
  SigmaSq out;
  if (cov.variant == CovModel::Variant::iid) {
    out.value = fact(p);
    return out;
  }
  double s = 1.0;
  for (long k = 1; k <= cutoff; ++k) s += 2.0 * std::pow(rho(cov, k), p);
  out.value = fact(p) * s;
  // Integral comparison on the power-law envelope of the dropped tail.
  double last = std::abs(std::pow(rho(cov, cutoff), p));
  out.tail_bound = 2.0 * fact(p) * last * static_cast<double>(cutoff) / (-ap - 1.0);
  return out;
}

double sigma_n_sq(int p, const CovModel& cov, long n) {
  if (p < 1 || n < 1) throw std::invalid_argument("sigma_n_sq: p and n must be >= 1");
  double s = 1.0;
  for (long k = 1; k < n; ++k)
    s += 2.0 * std::pow(rho(cov, k), p) * (1.0 - static_cast<double>(k) / n);
  return fact(p) * s;
}

namespace {

// #{(i, i') : i <= fs, i' <= ft, i' - i = j, i, i' >= 1}
long pair_count(long fs, long ft, long j) {
  long lo = std::max<long>(1, 1 - j);
  long hi = std::min(fs, ft - j);
  return std::max<long>(0, hi - lo + 1);
}

// E(U_n(s) U_n(t)) through the lag decomposition of the double sum.
double un_covariance(const BmSpec& spec, double s, double t) {
  long n = spec.n;
  long fs = static_cast<long>(std::floor(n * s));
  long ft = static_cast<long>(std::floor(n * t));
  double acc = 0.0;
  for (long j = -(n - 1); j <= n - 1; ++j) {
    long cnt = pair_count(fs, ft, j);
    if (cnt > 0) acc += cnt * std::pow(rho(spec.cov, j), spec.p);
  }
  return fact(spec.p) * acc / n;
}

}  // namespace

CovOperator t_n_operator(const BmSpec& spec) {
  GridK g = spec.grid;
  Eigen::MatrixXd c(g.m, g.m);
  std::vector<double> rp(spec.n);
  for (long k = 0; k < spec.n; ++k) rp[k] = std::pow(rho(spec.cov, k), spec.p);
  double fp = fact(spec.p);
  for (int i = 0; i < g.m; ++i) {
    long fs = static_cast<long>(std::floor(spec.n * g.node(i)));
    for (int j = 0; j <= i; ++j) {
      long ft = static_cast<long>(std::floor(spec.n * g.node(j)));
      double acc = 0.0;
      for (long d = -(ft - 1); d <= fs - 1; ++d) {
        long cnt = pair_count(fs, ft, -d);  // d = i - i'
        if (cnt > 0) acc += cnt * rp[std::labs(d)];
      }
      c(i, j) = fp * acc / spec.n;
      c(j, i) = c(i, j);
    }
  }
  return CovOperator(g, std::move(c));
}

double kn_kernel(const BmSpec& spec, double s, double t) {
  if (s < 0.0 || s > 1.0 || t < 0.0 || t > 1.0)
    throw std::invalid_argument("kn_kernel: s, t must lie in [0,1]");
  return un_covariance(spec, s, t) - std::min(s, t) * sigma_n_sq(spec.p, spec.cov, spec.n);
}

namespace {

double toeplitz_trace_dense(const std::vector<double>& a, const std::vector<double>& b, long n) {
  Eigen::MatrixXd ma(n, n), mb(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      ma(i, j) = a[std::labs(i - j)];
      mb(i, j) = b[std::labs(i - j)];
    }
  Eigen::MatrixXd m = ma * mb;
  return (m.array() * m.transpose().array()).sum();
}

// Symmetric Toeplitz matvec machinery via circulant embedding.
class ToeplitzMatvec {
 public:
  ToeplitzMatvec(const std::vector<double>& first_col, long n)
      : n_(n), len_(next_pow2(2 * n)) {
    std::vector<double> circ(len_, 0.0);
    for (long k = 0; k < n; ++k) circ[k] = first_col[k];
    for (long k = 1; k < n; ++k) circ[len_ - k] = first_col[k];
    spectrum_.resize(len_ / 2 + 1);
    std::vector<std::complex<double>> freq(len_ / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(len_), circ.data(),
                                          reinterpret_cast<fftw_complex*>(freq.data()),
                                          FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    for (long k = 0; k <= len_ / 2; ++k) spectrum_[k] = freq[k].real();  // real by symmetry
    in_.assign(len_, 0.0);
    freq_.resize(len_ / 2 + 1);
    auto* fc = reinterpret_cast<fftw_complex*>(freq_.data());
    fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(len_), in_.data(), fc, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(len_), fc, in_.data(), FFTW_ESTIMATE);
  }

  ~ToeplitzMatvec() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  ToeplitzMatvec(const ToeplitzMatvec&) = delete;
  ToeplitzMatvec& operator=(const ToeplitzMatvec&) = delete;

  void apply(const double* x, double* y) {
    std::fill(in_.begin(), in_.end(), 0.0);
    std::copy(x, x + n_, in_.begin());
    fftw_execute(fwd_);
    for (long k = 0; k <= len_ / 2; ++k) freq_[k] *= spectrum_[k] / len_;
    fftw_execute(bwd_);
    std::copy(in_.begin(), in_.begin() + n_, y);
  }

 private:
  long n_, len_;
  std::vector<double> spectrum_;
  std::vector<double> in_;
  std::vector<std::complex<double>> freq_;
  fftw_plan fwd_, bwd_;
};

// tr((AB)^2) = sum_j (A b_j) . (B a_j), with b_j, a_j the j-th columns.
double toeplitz_trace_fft(const std::vector<double>& a, const std::vector<double>& b, long n) {
  ToeplitzMatvec ta(a, n), tb(b, n);
  std::vector<double> col(n), ab(n), ba(n);
  double acc = 0.0;
  for (long j = 0; j < n; ++j) {
    for (long i = 0; i < n; ++i) col[i] = b[std::labs(i - j)];
    ta.apply(col.data(), ab.data());
    for (long i = 0; i < n; ++i) col[i] = a[std::labs(i - j)];
    tb.apply(col.data(), ba.data());
    double dot = 0.0;
    for (long i = 0; i < n; ++i) dot += ab[i] * ba[i];
    acc += dot;
  }
  return acc;
}

constexpr long kDenseToeplitzLimit = 1024;

}  // namespace

double bm_contraction_norm(int p, int r, long n, const CovModel& cov, ToeplitzPath path) {
  if (r < 1 || r > p - 1) throw std::invalid_argument("bm_contraction_norm: r out of range");
  if (n < 1) throw std::invalid_argument("bm_contraction_norm: n must be >= 1");
  std::vector<double> a(n), b(n);
  for (long k = 0; k < n; ++k) {
    double rk = rho(cov, k);
    a[k] = std::pow(rk, r);
    b[k] = std::pow(rk, p - r);
  }
  bool dense = path == ToeplitzPath::dense || (path == ToeplitzPath::automatic && n <= kDenseToeplitzLimit);
  double tr = dense ? toeplitz_trace_dense(a, b, n) : toeplitz_trace_fft(a, b, n);
  return std::sqrt(std::max(tr, 0.0)) / n;
}

double rate_function(double alpha, int p, long n, SlowVariation l) {
  if (p < 1) throw std::invalid_argument("rate_function: p must be >= 1");
  if (!(alpha < -1.0 / p))
    throw std::domain_error("rate_function: requires alpha < -1/p");
  double ln = slow_l(l, static_cast<double>(n));
  auto first = [&] { return std::pow(n, -0.5); };
  auto middle = [&] { return std::pow(n, alpha / 2.0) * ln; };
  auto third = [&] { return std::pow(n, (alpha * p + 1.0) / 2.0) * ln * ln; };
  double inner = p > 1 ? -1.0 / (p - 1) : -1.0;
  if (alpha < -1.0) return first();
  if (alpha == -1.0) return std::max(first(), middle());
  if (alpha < inner) return middle();
  if (alpha == inner) return std::max(middle(), third());
  return third();
}

double fbm_rate(double hurst, int p, long n) {
  if (p < 1) throw std::invalid_argument("fbm_rate: p must be >= 1");
  double hmax = (2.0 * p - 1.0) / (2.0 * p);
  if (hurst <= 0.0 || hurst >= hmax)
    throw std::domain_error("fbm_rate: requires 0 < H < (2p-1)/(2p)");
  double knee = p > 1 ? (2.0 * p - 3.0) / (2.0 * p - 2.0) : 0.5;
  if (hurst < 0.5) return std::pow(n, -0.5);
  if (hurst <= knee) return std::pow(n, hurst - 1.0);
  return std::pow(n, (2.0 * p * hurst - 2.0 * p + 1.0) / 2.0);
}

BmBoundReport theorem13_bound(const BmSpec& spec, long sigma_cutoff, ToeplitzPath path) {
  if (!spec.summable())
    throw std::domain_error("theorem13_bound: alpha * p must be < -1 for sigma^2 to exist");
  BmBoundReport rep;
  for (int r = 1; r <= spec.p - 1; ++r)
    rep.m_tilde += std::sqrt(contraction_coefficient(spec.p, spec.p, r)) *
                   bm_contraction_norm(spec.p, r, spec.n, spec.cov, path);

  CovOperator brownian = CovOperator::brownian(spec.grid);
  double sn2 = sigma_n_sq(spec.p, spec.cov, spec.n);
  rep.hs_cov_gap = op_hs_norm(t_n_operator(spec) - sn2 * brownian);
  rep.sigma_gap = std::abs(sn2 - sigma_sq(spec.p, spec.cov, sigma_cutoff).value) *
                  op_hs_norm(brownian);
  rep.total = 0.5 * (rep.m_tilde + rep.hs_cov_gap + rep.sigma_gap);
  return rep;
}

}  // namespace wchaos
