#pragma once

#include <functional>
#include <vector>

#include "wchaos/breuer_major.hpp"
#include "wchaos/hilbert.hpp"
#include "wchaos/rng.hpp"

// Stationary Gaussian sequence simulation by circulant embedding,
// deterministic Monte-Carlo estimation with per-replica substreams, and
// the empirical C^2_b test-family discrepancy.

namespace wchaos {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int replicas = 0;
};

/// Circulant embedding of the covariance sequence, precomputed for
/// repeated draws of length n. Embedding size is the smallest power of
/// two >= 2n; spectral values in [-1e-8, 0) clip to 0, anything lower
/// throws (a larger embedding is needed).
class CirculantEmbedding {
 public:
  CirculantEmbedding(const CovModel& cov, int n);
  ~CirculantEmbedding();
  CirculantEmbedding(const CirculantEmbedding&) = delete;
  CirculantEmbedding& operator=(const CirculantEmbedding&) = delete;

  /// One stationary Gaussian path of length n with E(X_0 X_k) = rho(k).
  std::vector<double> sample(PhiloxStream& rng) const;
  int path_length() const { return n_; }
  int embedding_size() const { return m_; }

 private:
  int n_, m_;
  std::vector<double> spectrum_sqrt_;
  void* plan_ = nullptr;        // fftw_plan
  mutable std::vector<double> work_;  // interleaved complex buffer
};

/// Convenience wrapper: one draw through a fresh embedding.
std::vector<double> circulant_sample(const CovModel& cov, int n, PhiloxStream& rng);

/// U_n(s_j) = n^{-1/2} sum_{i=1}^{floor(n s_j)} H_p(X_i) as node values.
std::vector<double> simulate_U_n(const BmSpec& spec, const std::vector<double>& path,
                                 GridK grid);

/// Mean and standard error over replicas 0..r-1, each evaluated on its
/// own substream of the master seed. The reduction is a fixed-order
/// pairwise tree, so the result is bit-identical under any parallel
/// schedule.
McEstimate mc_estimate(const std::function<double(PhiloxStream&)>& stat, int replicas,
                       std::uint64_t master_seed);

/// Deterministic pairwise-tree sum of a value vector.
double pairwise_sum(const std::vector<double>& v);

/// Empirical lower proxy of the d2 distance over the bounded test family
/// h_u(x) = cos(<x,u>_K) / max(1, ||u||, ||u||^2) and its sine
/// counterpart: max over directions of |mean h(F) - mean h(Z)|.
double empirical_discrepancy(const std::vector<std::vector<double>>& samples_f,
                             const std::vector<std::vector<double>>& samples_z,
                             const std::vector<std::vector<double>>& directions, GridK grid);

/// Default direction set: first 8 discrete cosine modes plus 8 seeded
/// Gaussian directions, each scaled to K-norms 1/2, 1 and 2.
std::vector<std::vector<double>> default_directions(GridK grid, std::uint64_t seed);

}  // namespace wchaos
