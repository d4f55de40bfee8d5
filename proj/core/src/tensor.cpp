#include "wchaos/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wchaos {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

GramBasis gram_from_cov(const std::function<double(int)>& rho, int dim) {
  if (dim < 1) throw std::invalid_argument("gram_from_cov: dim must be >= 1");
  if (rho(0) <= 0.0) throw std::invalid_argument("gram_from_cov: rho(0) must be positive");
  GramBasis b;
  b.dim = dim;
  b.gram.resize(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) b.gram(i, j) = rho(i - j);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.gram);
  double band = 1e-10 * b.gram.trace() / dim;
  Eigen::VectorXd lam = es.eigenvalues();
  for (int i = 0; i < dim; ++i) {
    if (lam(i) < -band)
      throw std::domain_error("gram_from_cov: covariance sequence not PSD at this size");
    lam(i) = std::max(lam(i), 0.0);
  }
  b.factor = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  return b;
}

Kernel::Kernel(int order, int h_dim, int k_count, int k_dim, BasisMode mode)
    : order_(order), h_dim_(h_dim), k_count_(k_count), k_dim_(k_dim), mode_(mode) {
  if (order < 0) throw std::invalid_argument("Kernel: order must be >= 0");
  if (h_dim < 1 && order > 0) throw std::invalid_argument("Kernel: h_dim must be >= 1");
  if (k_count < 0 || k_count > 2) throw std::invalid_argument("Kernel: k_count must be 0, 1 or 2");
  if (k_count > 0 && k_dim < 1) throw std::invalid_argument("Kernel: k_dim must be >= 1");
  if (k_count == 0) k_dim_ = 0;
  std::int64_t n = ipow(std::max(h_dim, 1), order) * ipow(std::max(k_dim_, 1), k_count);
  coords_.assign(n, 0.0);
}

Kernel Kernel::basis_vector(int h_dim, int i, BasisMode mode) {
  Kernel k(1, h_dim, 0, 0, mode);
  k.at({i}) = 1.0;
  return k;
}

std::int64_t Kernel::flat(const std::vector<int>& h_idx, const std::vector<int>& k_idx) const {
  if (static_cast<int>(h_idx.size()) != order_ || static_cast<int>(k_idx.size()) != k_count_)
    throw std::invalid_argument("Kernel::flat: index arity mismatch");
  std::int64_t f = 0;
  for (int d : h_idx) f = f * h_dim_ + d;
  for (int d : k_idx) f = f * k_dim_ + d;
  return f;
}

double& Kernel::at(const std::vector<int>& h_idx, const std::vector<int>& k_idx) {
  return coords_[flat(h_idx, k_idx)];
}
double Kernel::at(const std::vector<int>& h_idx, const std::vector<int>& k_idx) const {
  return coords_[flat(h_idx, k_idx)];
}

bool Kernel::same_shape(const Kernel& other) const {
  return order_ == other.order_ && h_dim_ == other.h_dim_ && k_count_ == other.k_count_ &&
         k_dim_ == other.k_dim_ && mode_ == other.mode_;
}

double Kernel::symmetry_defect() const {
  // Adjacent transpositions generate the full symmetric group, so
  // checking them is exhaustive.
  if (order_ < 2) return 0.0;
  std::int64_t ksize = ipow(std::max(k_dim_, 1), k_count_);
  std::int64_t hsize = ipow(h_dim_, order_);
  double defect = 0.0;
  std::vector<int> digits(order_);
  for (std::int64_t h = 0; h < hsize; ++h) {
    std::int64_t rem = h;
    for (int d = order_ - 1; d >= 0; --d) {
      digits[d] = static_cast<int>(rem % h_dim_);
      rem /= h_dim_;
    }
    for (int t = 0; t + 1 < order_; ++t) {
      if (digits[t] == digits[t + 1]) continue;
      std::int64_t swapped = 0;
      for (int d = 0; d < order_; ++d) {
        int dig = digits[d];
        if (d == t) dig = digits[t + 1];
        if (d == t + 1) dig = digits[t];
        swapped = swapped * h_dim_ + dig;
      }
      for (std::int64_t k = 0; k < ksize; ++k)
        defect = std::max(defect, std::abs(coords_[h * ksize + k] - coords_[swapped * ksize + k]));
    }
  }
  return defect;
}

namespace {

// out[..., c, ...] = sum_a M(a, c) in[..., a, ...] along H index `pos`.
Kernel apply_along_h_index(const Kernel& f, const Eigen::MatrixXd& m, int pos) {
  Kernel out = f;
  std::fill(out.coords().begin(), out.coords().end(), 0.0);
  int dh = f.h_dim();
  std::int64_t ksize = f.k_count() > 0 ? ipow(f.k_dim(), f.k_count()) : 1;
  std::int64_t stride = ipow(dh, f.order() - 1 - pos) * ksize;
  std::int64_t block = stride * dh;
  for (std::int64_t base = 0; base < f.size(); base += block)
    for (std::int64_t off = 0; off < stride; ++off)
      for (int c = 0; c < dh; ++c) {
        double acc = 0.0;
        for (int a = 0; a < dh; ++a) acc += m(a, c) * f.coords()[base + a * stride + off];
        out.coords()[base + c * stride + off] = acc;
      }
  return out;
}

}  // namespace

Kernel whiten(const Kernel& f, const GramBasis& basis) {
  if (f.order() > 0 && f.h_dim() != basis.dim)
    throw std::invalid_argument("whiten: h_dim does not match Gram basis");
  if (f.mode() != BasisMode::raw) throw std::invalid_argument("whiten: kernel already whitened");
  Kernel out = f;
  for (int pos = 0; pos < f.order(); ++pos) out = apply_along_h_index(out, basis.factor, pos);
  Kernel w(out.order(), out.h_dim(), out.k_count(), out.k_dim(), BasisMode::whitened);
  w.coords() = out.coords();
  return w;
}

Kernel symmetrize(const Kernel& f) {
  if (f.order() < 1) return f;
  int p = f.order();
  int dh = f.h_dim();
  std::int64_t ksize = f.k_count() > 0 ? ipow(f.k_dim(), f.k_count()) : 1;
  std::int64_t hsize = ipow(dh, p);

  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  Kernel out = f;
  std::fill(out.coords().begin(), out.coords().end(), 0.0);
  std::vector<int> digits(p);
  double inv = 1.0 / static_cast<double>(perms.size());
  for (std::int64_t h = 0; h < hsize; ++h) {
    std::int64_t rem = h;
    for (int d = p - 1; d >= 0; --d) {
      digits[d] = static_cast<int>(rem % dh);
      rem /= dh;
    }
    for (const auto& pi : perms) {
      std::int64_t src = 0;
      for (int d = 0; d < p; ++d) src = src * dh + digits[pi[d]];
      for (std::int64_t k = 0; k < ksize; ++k)
        out.coords()[h * ksize + k] += inv * f.coords()[src * ksize + k];
    }
  }
  return out;
}

Kernel contract(const Kernel& f, const Kernel& g, int r) {
  if (f.h_dim() != g.h_dim()) throw std::invalid_argument("contract: h_dim mismatch");
  if (f.mode() != g.mode()) throw std::invalid_argument("contract: basis_mode mismatch");
  if (r < 0 || r > std::min(f.order(), g.order()))
    throw std::invalid_argument("contract: r out of range");
  int kf = f.k_count(), kg = g.k_count();
  if (kf + kg > 2) throw std::invalid_argument("contract: result would carry more than two K indices");
  if (kf > 0 && kg > 0 && f.k_dim() != g.k_dim())
    throw std::invalid_argument("contract: k_dim mismatch");
  int dh = f.h_dim();
  int kdim = std::max(f.k_dim(), g.k_dim());

  Kernel out(f.order() + g.order() - 2 * r, dh, kf + kg, kdim, f.mode());
  std::int64_t nfront = ipow(dh, f.order() - r);
  std::int64_t nr = ipow(dh, r);
  std::int64_t nrest = ipow(dh, g.order() - r);
  std::int64_t nkf = kf > 0 ? ipow(kdim, kf) : 1;
  std::int64_t nkg = kg > 0 ? ipow(kdim, kg) : 1;

  for (std::int64_t fr = 0; fr < nfront; ++fr)
    for (std::int64_t re = 0; re < nrest; ++re)
      for (std::int64_t a = 0; a < nkf; ++a)
        for (std::int64_t b = 0; b < nkg; ++b) {
          double acc = 0.0;
          for (std::int64_t rb = 0; rb < nr; ++rb)
            acc += f.coords()[(fr * nr + rb) * nkf + a] * g.coords()[(rb * nrest + re) * nkg + b];
          out.coords()[((fr * nrest + re) * nkf + a) * nkg + b] = acc;
        }
  return out;
}

double kernel_inner(const Kernel& f, const Kernel& g) {
  if (!f.same_shape(g)) throw std::invalid_argument("kernel_inner: shape or basis_mode mismatch");
  double acc = 0.0;
  for (std::int64_t i = 0; i < f.size(); ++i) acc += f.coords()[i] * g.coords()[i];
  return acc;
}

double kernel_norm(const Kernel& f) { return std::sqrt(kernel_inner(f, f)); }

double gram_weighted_inner(const Kernel& f, const Kernel& g, const GramBasis& basis) {
  if (f.order() != g.order() || f.h_dim() != g.h_dim() || f.k_count() != g.k_count() ||
      f.k_dim() != g.k_dim())
    throw std::invalid_argument("gram_weighted_inner: shape mismatch");
  int p = f.order();
  int dh = f.h_dim();
  std::int64_t ksize = f.k_count() > 0 ? ipow(f.k_dim(), f.k_count()) : 1;
  std::int64_t hsize = ipow(dh, p);
  std::vector<int> da(p), db(p);
  double acc = 0.0;
  for (std::int64_t a = 0; a < hsize; ++a) {
    std::int64_t rem = a;
    for (int d = p - 1; d >= 0; --d) {
      da[d] = static_cast<int>(rem % dh);
      rem /= dh;
    }
    for (std::int64_t b = 0; b < hsize; ++b) {
      rem = b;
      for (int d = p - 1; d >= 0; --d) {
        db[d] = static_cast<int>(rem % dh);
        rem /= dh;
      }
      double w = 1.0;
      for (int d = 0; d < p; ++d) w *= basis.gram(da[d], db[d]);
      if (w == 0.0) continue;
      double dot = 0.0;
      for (std::int64_t k = 0; k < ksize; ++k)
        dot += f.coords()[a * ksize + k] * g.coords()[b * ksize + k];
      acc += w * dot;
    }
  }
  return acc;
}

Kernel operator+(const Kernel& a, const Kernel& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("Kernel operator+: shape mismatch");
  Kernel out = a;
  for (std::int64_t i = 0; i < a.size(); ++i) out.coords()[i] += b.coords()[i];
  return out;
}

Kernel operator*(double s, const Kernel& f) {
  Kernel out = f;
  for (double& c : out.coords()) c *= s;
  return out;
}

}  // namespace wchaos
