#include "wchaos/gaussim.hpp"

#include <fftw3.h>

#include <cmath>
#include <algorithm>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "wchaos/hermite.hpp"

namespace wchaos {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

PhiloxStream::PhiloxStream(std::uint64_t master_seed, std::uint64_t replica) {
  std::uint64_t key = splitmix64(master_seed) ^ replica;
  key_[0] = static_cast<std::uint32_t>(key);
  key_[1] = static_cast<std::uint32_t>(key >> 32);
}

void PhiloxStream::refill() {
  std::uint32_t c[4] = {static_cast<std::uint32_t>(counter_),
                        static_cast<std::uint32_t>(counter_ >> 32), 0, 0};
  std::uint32_t k0 = key_[0], k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = 0xD2511F53ULL * c[0];
    std::uint64_t p1 = 0xCD9E8D57ULL * c[2];
    std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0;
    std::uint32_t n1 = static_cast<std::uint32_t>(p1);
    std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1;
    std::uint32_t n3 = static_cast<std::uint32_t>(p0);
    c[0] = n0;
    c[1] = n1;
    c[2] = n2;
    c[3] = n3;
    k0 += 0x9E3779B9u;
    k1 += 0xBB67AE85u;
  }
  block_[0] = c[0];
  block_[1] = c[1];
  block_[2] = c[2];
  block_[3] = c[3];
  block_pos_ = 0;
  ++counter_;
}

std::uint32_t PhiloxStream::next_u32() {
  if (block_pos_ == 4) refill();
  return block_[block_pos_++];
}

double PhiloxStream::next_uniform() {
  std::uint64_t hi = next_u32(), lo = next_u32();
  std::uint64_t bits = ((hi << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double PhiloxStream::next_normal() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_normal_;
  }
  double u1 = next_uniform(), u2 = next_uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  have_cached_ = true;
  return r * std::cos(theta);
}

namespace {

int next_pow2(int n) {
  int m = 1;
  while (m < n) m *= 2;
  return m;
}

constexpr double kSpectrumSlack = 1e-8;

}  // namespace

CirculantEmbedding::CirculantEmbedding(const CovModel& cov, int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("CirculantEmbedding: n must be >= 1");
  m_ = next_pow2(2 * n);
  std::vector<double> first_row(m_);
  for (int j = 0; j < m_; ++j) first_row[j] = rho(cov, std::min(j, m_ - j));
  std::vector<std::complex<double>> freq(m_ / 2 + 1);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(m_, first_row.data(),
                                       reinterpret_cast<fftw_complex*>(freq.data()),
                                       FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);
  spectrum_sqrt_.resize(m_);
  for (int k = 0; k < m_; ++k) {
    double lam = freq[k <= m_ / 2 ? k : m_ - k].real();  // spectrum is real and even
    if (lam < -kSpectrumSlack)
      throw std::domain_error(
          "CirculantEmbedding: embedding is not nonnegative definite; increase n padding");
    spectrum_sqrt_[k] = std::sqrt(std::max(lam, 0.0));
  }
  work_.resize(2 * m_);
  plan_ = fftw_plan_dft_1d(m_, reinterpret_cast<fftw_complex*>(work_.data()),
                           reinterpret_cast<fftw_complex*>(work_.data()), FFTW_BACKWARD,
                           FFTW_ESTIMATE);
}

CirculantEmbedding::~CirculantEmbedding() {
  if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

std::vector<double> CirculantEmbedding::sample(PhiloxStream& rng) const {
  for (int k = 0; k < m_; ++k) {
    double a = rng.next_normal(), b = rng.next_normal();
    work_[2 * k] = spectrum_sqrt_[k] * a;
    work_[2 * k + 1] = spectrum_sqrt_[k] * b;
  }
  fftw_execute(static_cast<fftw_plan>(plan_));
  double scale = 1.0 / std::sqrt(static_cast<double>(m_));
  std::vector<double> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = work_[2 * i] * scale;
  return out;
}

std::vector<double> circulant_sample(const CovModel& cov, int n, PhiloxStream& rng) {
  return CirculantEmbedding(cov, n).sample(rng);
}

std::vector<double> simulate_U_n(const BmSpec& spec, const std::vector<double>& path,
                                 GridK grid) {
  if (static_cast<long>(path.size()) < spec.n)
    throw std::invalid_argument("simulate_U_n: path shorter than n");
  std::vector<double> prefix(spec.n + 1, 0.0);
  for (long i = 0; i < spec.n; ++i)
    prefix[i + 1] = prefix[i] + hermite_eval(spec.p, path[i]);
  double scale = 1.0 / std::sqrt(static_cast<double>(spec.n));
  std::vector<double> out(grid.m);
  for (int j = 0; j < grid.m; ++j) {
    long cut = static_cast<long>(std::floor(spec.n * grid.node(j)));
    out[j] = scale * prefix[std::min<long>(cut, spec.n)];
  }
  return out;
}

double pairwise_sum(const std::vector<double>& v) {
  // Fixed-order binary tree: independent of any evaluation schedule.
  std::function<double(size_t, size_t)> rec = [&](size_t lo, size_t hi) -> double {
    if (hi - lo == 0) return 0.0;
    if (hi - lo == 1) return v[lo];
    size_t mid = lo + (hi - lo) / 2;
    return rec(lo, mid) + rec(mid, hi);
  };
  return rec(0, v.size());
}

McEstimate mc_estimate(const std::function<double(PhiloxStream&)>& stat, int replicas,
                       std::uint64_t master_seed) {
  if (replicas < 1) throw std::invalid_argument("mc_estimate: replicas must be >= 1");
  std::vector<double> vals(replicas);
  for (int r = 0; r < replicas; ++r) {
    PhiloxStream rng(master_seed, static_cast<std::uint64_t>(r));
    vals[r] = stat(rng);
  }
  McEstimate est;
  est.replicas = replicas;
  est.mean = pairwise_sum(vals) / replicas;
  if (replicas > 1) {
    std::vector<double> dev(replicas);
    for (int r = 0; r < replicas; ++r) {
      double d = vals[r] - est.mean;
      dev[r] = d * d;
    }
    double var = pairwise_sum(dev) / (replicas - 1);
    est.std_error = std::sqrt(var / replicas);
  }
  return est;
}

double empirical_discrepancy(const std::vector<std::vector<double>>& samples_f,
                             const std::vector<std::vector<double>>& samples_z,
                             const std::vector<std::vector<double>>& directions, GridK grid) {
  if (samples_f.empty() || samples_z.empty())
    throw std::invalid_argument("empirical_discrepancy: empty sample set");
  auto inner = [&](const std::vector<double>& x, const std::vector<double>& u) {
    double s = 0.0;
    for (int i = 0; i < grid.m; ++i) s += x[i] * u[i];
    return s * grid.weight();
  };
  double best = 0.0;
  for (const auto& u : directions) {
    if (static_cast<int>(u.size()) != grid.m)
      throw std::invalid_argument("empirical_discrepancy: direction dimension mismatch");
    double nrm = std::sqrt(inner(u, u));
    double scale = std::max({1.0, nrm, nrm * nrm});
    double cf = 0.0, sf = 0.0, cz = 0.0, sz = 0.0;
    for (const auto& x : samples_f) {
      double t = inner(x, u);
      cf += std::cos(t);
      sf += std::sin(t);
    }
    for (const auto& x : samples_z) {
      double t = inner(x, u);
      cz += std::cos(t);
      sz += std::sin(t);
    }
    cf /= samples_f.size();
    sf /= samples_f.size();
    cz /= samples_z.size();
    sz /= samples_z.size();
    best = std::max(best, std::abs(cf - cz) / scale);
    best = std::max(best, std::abs(sf - sz) / scale);
  }
  return best;
}

std::vector<std::vector<double>> default_directions(GridK grid, std::uint64_t seed) {
  const double norms[] = {0.5, 1.0, 2.0};
  std::vector<std::vector<double>> base;
  for (int k = 0; k < 8; ++k) {
    std::vector<double> u(grid.m);
    for (int i = 0; i < grid.m; ++i)
      u[i] = std::cos(std::numbers::pi * k * (i + 0.5) / grid.m);
    base.push_back(std::move(u));
  }
  PhiloxStream rng(seed, 0);
  for (int k = 0; k < 8; ++k) {
    std::vector<double> u(grid.m);
    for (int i = 0; i < grid.m; ++i) u[i] = rng.next_normal();
    base.push_back(std::move(u));
  }
  std::vector<std::vector<double>> out;
  for (const auto& u : base) {
    double nrm2 = 0.0;
    for (double v : u) nrm2 += v * v;
    double nrm = std::sqrt(nrm2 * grid.weight());
    if (nrm <= 0.0) continue;
    for (double target : norms) {
      std::vector<double> w(u);
      for (double& v : w) v *= target / nrm;
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace wchaos
