#include "wchaos/chaos.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wchaos/hermite.hpp"

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

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_scalar_symmetric(const Kernel& f, int p, const char* who) {
  if (f.order() != p) throw std::invalid_argument(std::string(who) + ": order mismatch");
  if (f.k_count() != 0) throw std::invalid_argument(std::string(who) + ": scalar kernels only");
  if (f.mode() != BasisMode::whitened)
    throw std::invalid_argument(std::string(who) + ": whitened kernels only");
}

constexpr std::int64_t kSamplerCap = 1000000;  // dH^p cap for the pathwise samplers

}  // namespace

void ChaosExpansion::validate(double sym_tol) const {
  int h_dim = -1, k_dim = -1, k_count = -1;
  for (const auto& [p, f] : terms) {
    if (p < 0) throw std::invalid_argument("ChaosExpansion: negative order");
    if (f.order() != p) throw std::invalid_argument("ChaosExpansion: stored order mismatch");
    if (f.symmetry_defect() > sym_tol)
      throw std::invalid_argument("ChaosExpansion: kernel fails the symmetry check");
    if (p == 0) continue;
    if (h_dim < 0) {
      h_dim = f.h_dim();
      k_dim = f.k_dim();
      k_count = f.k_count();
    } else if (f.h_dim() != h_dim || f.k_dim() != k_dim || f.k_count() != k_count) {
      throw std::invalid_argument("ChaosExpansion: mixed kernel shapes");
    }
  }
}

double second_moment(const Kernel& f, int p) {
  if (p < 1 || f.order() != p) throw std::invalid_argument("second_moment: order must be >= 1");
  Kernel s = symmetrize(f);
  return fact(p) * kernel_inner(s, s);
}

ChaosExpansion product_formula(const Kernel& f, int p, const Kernel& g, int q) {
  check_scalar_symmetric(f, p, "product_formula");
  check_scalar_symmetric(g, q, "product_formula");
  if (f.h_dim() != g.h_dim()) throw std::invalid_argument("product_formula: h_dim mismatch");
  ChaosExpansion out;
  for (int r = 0; r <= std::min(p, q); ++r) {
    double coef = fact(r) * binom(p, r) * binom(q, r);
    Kernel term = symmetrize(contract(f, g, r));
    out.terms.emplace(p + q - 2 * r, coef * term);
  }
  return out;
}

double fourth_moment_gap(const Kernel& f_u, const Kernel& f_v, int p) {
  check_scalar_symmetric(f_u, p, "fourth_moment_gap");
  check_scalar_symmetric(f_v, p, "fourth_moment_gap");
  if (f_u.h_dim() != f_v.h_dim()) throw std::invalid_argument("fourth_moment_gap: h_dim mismatch");
  double gap = 0.0;
  for (int r = 1; r <= p - 1; ++r) {
    Kernel c = contract(f_u, f_v, r);
    Kernel cs = symmetrize(c);
    double a = fact(r) * binom(p, r) * binom(p, r);
    gap += a * a * fact(2 * p - 2 * r) * kernel_inner(cs, cs);
    gap += fact(p) * fact(p) * binom(p, r) * binom(p, r) * kernel_inner(c, c);
  }
  return gap;
}

double gamma_variance(const Kernel& f_in, int p, const Kernel& g_in, int q) {
  const Kernel* f = &f_in;
  const Kernel* g = &g_in;
  if (p < q) {
    std::swap(p, q);
    std::swap(f, g);
  }
  check_scalar_symmetric(*f, p, "gamma_variance");
  check_scalar_symmetric(*g, q, "gamma_variance");
  if (f->h_dim() != g->h_dim()) throw std::invalid_argument("gamma_variance: h_dim mismatch");
  int rmax = (p == q) ? p - 1 : std::min(p, q);
  double var = 0.0;
  for (int r = 1; r <= rmax; ++r) {
    double c = fact(r - 1) * binom(p - 1, r - 1) * binom(q - 1, r - 1);
    Kernel ct = symmetrize(contract(*f, *g, r));
    var += c * c * fact(p + q - 2 * r) * kernel_inner(ct, ct);
  }
  return static_cast<double>(p) * p * var;
}

namespace {

// Shared tuple walk: calls visit(h_flat, multiplicities) for every ordered
// H multi-index of length p over [0, dH).
template <typename Visit>
void for_each_tuple(int p, int dh, Visit&& visit) {
  if (ipow(dh, p) > kSamplerCap)
    throw std::invalid_argument("sampler: dH^p exceeds the desk-scale cap of 10^6");
  std::vector<int> tuple(p, 0);
  std::vector<int> mult(dh, 0);
  std::int64_t hsize = ipow(dh, p);
  for (std::int64_t h = 0; h < hsize; ++h) {
    std::int64_t rem = h;
    std::fill(mult.begin(), mult.end(), 0);
    for (int d = p - 1; d >= 0; --d) {
      tuple[d] = static_cast<int>(rem % dh);
      ++mult[tuple[d]];
      rem /= dh;
    }
    visit(h, mult);
  }
}

}  // namespace

std::vector<double> sample_multiple_integral_k(const Kernel& f, int p,
                                               const std::vector<double>& w) {
  if (f.order() != p) throw std::invalid_argument("sample_multiple_integral: order mismatch");
  if (f.mode() != BasisMode::whitened)
    throw std::invalid_argument("sample_multiple_integral: whitened kernels only");
  if (static_cast<int>(w.size()) != f.h_dim())
    throw std::invalid_argument("sample_multiple_integral: W length != h_dim");
  int dh = f.h_dim();
  std::int64_t ksize = f.k_count() > 0 ? ipow(f.k_dim(), f.k_count()) : 1;
  std::vector<double> out(ksize, 0.0);
  if (p == 0) {
    for (std::int64_t k = 0; k < ksize; ++k) out[k] = f.coords()[k];
    return out;
  }
  for_each_tuple(p, dh, [&](std::int64_t h, const std::vector<int>& mult) {
    double prod = 1.0;
    for (int i = 0; i < dh; ++i)
      if (mult[i] > 0) prod *= hermite_eval(mult[i], w[i]);
    if (prod == 0.0) return;
    for (std::int64_t k = 0; k < ksize; ++k) out[k] += f.coords()[h * ksize + k] * prod;
  });
  return out;
}

double sample_multiple_integral(const Kernel& f, int p, const std::vector<double>& w) {
  if (f.k_count() != 0)
    throw std::invalid_argument("sample_multiple_integral: use the K-valued overload");
  return sample_multiple_integral_k(f, p, w)[0];
}

namespace {

// Gradient of the Hermite product polynomial of I_p(f) at w.
std::vector<double> hermite_poly_gradient(const Kernel& f, int p, const std::vector<double>& w) {
  int dh = f.h_dim();
  std::vector<double> grad(dh, 0.0);
  if (p == 0) return grad;
  for_each_tuple(p, dh, [&](std::int64_t h, const std::vector<int>& mult) {
    double c = f.coords()[h];
    if (c == 0.0) return;
    for (int k = 0; k < dh; ++k) {
      if (mult[k] == 0) continue;
      double term = mult[k] * hermite_eval(mult[k] - 1, w[k]);
      for (int i = 0; i < dh; ++i)
        if (i != k && mult[i] > 0) term *= hermite_eval(mult[i], w[i]);
      grad[k] += c * term;
    }
  });
  return grad;
}

}  // namespace

double sample_gamma_pair(const Kernel& f, int p, const Kernel& g, int q,
                         const std::vector<double>& w) {
  check_scalar_symmetric(f, p, "sample_gamma_pair");
  check_scalar_symmetric(g, q, "sample_gamma_pair");
  if (f.h_dim() != g.h_dim()) throw std::invalid_argument("sample_gamma_pair: h_dim mismatch");
  if (static_cast<int>(w.size()) != f.h_dim())
    throw std::invalid_argument("sample_gamma_pair: W length != h_dim");
  if (q < 1) throw std::invalid_argument("sample_gamma_pair: q must be >= 1");
  std::vector<double> gf = hermite_poly_gradient(f, p, w);
  std::vector<double> gg = hermite_poly_gradient(g, q, w);
  double acc = 0.0;
  for (size_t k = 0; k < gf.size(); ++k) acc += gf[k] * gg[k];
  return acc / q;
}

}  // namespace wchaos
