#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "wchaos/rng.hpp"
#include "wchaos/tensor.hpp"

using namespace wchaos;

namespace {

Kernel random_kernel(int order, int h_dim, BasisMode mode, std::uint64_t seed) {
  Kernel f(order, h_dim, 0, 0, mode);
  PhiloxStream rng(seed, 7);
  for (double& c : f.coords()) c = rng.next_normal();
  return f;
}

}  // namespace

TEST_CASE("gram_from_cov basics") {
  GramBasis id = gram_from_cov([](int k) { return k == 0 ? 1.0 : 0.0; }, 3);
  CHECK((id.gram - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  CHECK((id.factor - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);

  GramBasis g = gram_from_cov([](int k) { return std::pow(2.0, -std::abs(k)); }, 2);
  CHECK(g.gram(0, 1) == doctest::Approx(0.5));
  CHECK((g.factor * g.factor.transpose() - g.gram).norm() < 1e-12);

  // rho == 1: all-ones Gram, spectrum {3, 0, 0}, rank-1 factor
  GramBasis ones = gram_from_cov([](int) { return 1.0; }, 3);
  CHECK((ones.factor * ones.factor.transpose() - ones.gram).norm() < 1e-10);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ones.factor);
  CHECK(svd.singularValues()(0) == doctest::Approx(std::sqrt(3.0)));
  CHECK(svd.singularValues()(1) < 1e-7);

  auto bad = [](int k) { return k == 0 ? 1.0 : 2.0; };  // not PSD
  CHECK_THROWS_AS(gram_from_cov(bad, 3), std::domain_error);
}

TEST_CASE("whiten: coordinate examples and Gram isometry") {
  GramBasis id = gram_from_cov([](int k) { return k == 0 ? 1.0 : 0.0; }, 2);
  Kernel f = random_kernel(2, 2, BasisMode::raw, 11);
  Kernel w = whiten(f, id);
  for (std::int64_t i = 0; i < f.size(); ++i)
    CHECK(w.coords()[i] == doctest::Approx(f.coords()[i]).epsilon(1e-13));

  GramBasis four = gram_from_cov([](int k) { return k == 0 ? 4.0 : 0.0; }, 1);
  Kernel c(1, 1, 0, 0, BasisMode::raw);
  c.coords()[0] = 3.0;
  CHECK(whiten(c, four).coords()[0] == doctest::Approx(6.0));

  GramBasis g = gram_from_cov([](int k) { return std::pow(0.6, std::abs(k)); }, 3);
  for (int order = 1; order <= 3; ++order) {
    Kernel r = random_kernel(order, 3, BasisMode::raw, 100 + order);
    double want = gram_weighted_inner(r, r, g);
    Kernel w2 = whiten(r, g);
    CHECK(kernel_inner(w2, w2) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("symmetrize") {
  Kernel f(2, 2, 0, 0, BasisMode::whitened);
  f.at({0, 1}) = 1.0;
  Kernel s = symmetrize(f);
  CHECK(s.at({0, 1}) == doctest::Approx(0.5));
  CHECK(s.at({1, 0}) == doctest::Approx(0.5));

  Kernel r = random_kernel(3, 2, BasisMode::whitened, 5);
  Kernel s1 = symmetrize(r), s2 = symmetrize(s1);
  CHECK(s1.symmetry_defect() < 1e-12);
  for (std::int64_t i = 0; i < s1.size(); ++i)
    CHECK(std::abs(s1.coords()[i] - s2.coords()[i]) < 1e-12);
}

TEST_CASE("contract: examples and brute-force oracle") {
  Kernel e1 = Kernel::basis_vector(2, 0), e2 = Kernel::basis_vector(2, 1);
  CHECK(contract(e1, e1, 1).coords()[0] == doctest::Approx(1.0));

  // r = 0 is the plain tensor product
  Kernel tp = contract(e1, e2, 0);
  CHECK(tp.order() == 2);
  CHECK(tp.at({0, 1}) == doctest::Approx(1.0));
  CHECK(std::abs(tp.at({1, 0})) < 1e-15);

  Kernel e11(2, 2, 0, 0, BasisMode::whitened);
  e11.at({0, 0}) = 1.0;
  Kernel e12(2, 2, 0, 0, BasisMode::whitened);
  e12.at({0, 1}) = 1.0;
  Kernel c = contract(e11, e12, 1);
  CHECK(c.at({0, 1}) == doctest::Approx(1.0));
  CHECK(std::abs(c.at({0, 0})) + std::abs(c.at({1, 0})) + std::abs(c.at({1, 1})) < 1e-15);

  // quadruple-loop oracle on random order-2 kernels, r = 1
  Kernel f = random_kernel(2, 3, BasisMode::whitened, 21);
  Kernel g = random_kernel(2, 3, BasisMode::whitened, 22);
  Kernel got = contract(f, g, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double want = 0.0;
      for (int a = 0; a < 3; ++a) want += f.at({i, a}) * g.at({a, j});
      CHECK(got.at({i, j}) == doctest::Approx(want).epsilon(1e-12));
    }

  CHECK_THROWS_AS(contract(f, g, 3), std::invalid_argument);
}

TEST_CASE("kernel_inner is the Euclidean coordinate pairing") {
  Kernel a(2, 2, 0, 0, BasisMode::whitened), b(2, 2, 0, 0, BasisMode::whitened);
  a.at({0, 1}) = 1.0;
  b.at({0, 1}) = 1.0;
  CHECK(kernel_inner(a, b) == doctest::Approx(1.0));
  Kernel bt(2, 2, 0, 0, BasisMode::whitened);
  bt.at({1, 0}) = 1.0;
  CHECK(kernel_inner(a, bt) == doctest::Approx(0.0));

  Kernel r = random_kernel(3, 2, BasisMode::whitened, 33);
  double ss = 0.0;
  for (double c : r.coords()) ss += c * c;
  CHECK(kernel_inner(r, r) == doctest::Approx(ss).epsilon(1e-12));
  CHECK(kernel_norm(r) == doctest::Approx(std::sqrt(ss)).epsilon(1e-12));
}

TEST_CASE("symmetrized contraction never exceeds the raw contraction norm") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Kernel f = random_kernel(3, 2, BasisMode::whitened, 40 + s);
    for (int r = 1; r <= 2; ++r) {
      Kernel c = contract(f, f, r);
      CHECK(kernel_norm(symmetrize(c)) <= kernel_norm(c) + 1e-12);
    }
  }
}
