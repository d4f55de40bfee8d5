#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "wchaos/gaussim.hpp"
#include "wchaos/hilbert.hpp"
#include "wchaos/rng.hpp"

using namespace wchaos;

TEST_CASE("op_trace") {
  GridK g2(2);
  CHECK(op_trace(CovOperator::zero(g2)) == 0.0);
  CHECK(op_trace(CovOperator::brownian(g2)) == doctest::Approx(0.5));
  GridK g4(4);
  CovOperator ident(g4, 4.0 * Eigen::MatrixXd::Identity(4, 4));  // discrete identity C_ii = m
  CHECK(op_trace(ident) == doctest::Approx(4.0));
}

TEST_CASE("op_hs_norm") {
  GridK g(256);
  CHECK(op_hs_norm(CovOperator::zero(g)) == 0.0);
  CHECK(std::abs(op_hs_norm(CovOperator::brownian(g)) - std::sqrt(1.0 / 6.0)) < 2.0 / g.m);
  CovOperator c(GridK(3), Eigen::MatrixXd::Constant(3, 3, -2.5));
  CHECK(op_hs_norm(c) == doctest::Approx(2.5));
}

TEST_CASE("norm chain op <= HS <= trace-norm") {
  PhiloxStream rng(31, 0);
  for (int trial = 0; trial < 5; ++trial) {
    int m = 6;
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) = rng.next_normal();
    Eigen::MatrixXd psd = a * a.transpose();
    CovOperator s(GridK(m), psd);
    Eigen::VectorXd lam = op_eigenvalues(s);
    double opn = lam.cwiseAbs().maxCoeff();
    CHECK(opn <= op_hs_norm(s) + 1e-9);
    CHECK(op_hs_norm(s) <= op_trace_norm(s) + 1e-9);
  }
}

TEST_CASE("gaussian_fourth_moment") {
  CovOperator s1(GridK(1), Eigen::MatrixXd::Constant(1, 1, 2.0));  // 1-dim, sigma^2 = 2
  CHECK(gaussian_fourth_moment(s1) == doctest::Approx(12.0));      // 3 sigma^4
  CovOperator pair(GridK(2), 2.0 * Eigen::MatrixXd::Identity(2, 2));  // iid standard pair
  CHECK(gaussian_fourth_moment(pair) == doctest::Approx(8.0));
  GridK g(256);
  CHECK(std::abs(gaussian_fourth_moment(CovOperator::brownian(g)) - 7.0 / 12.0) < 5.0 / g.m);
}

TEST_CASE("GaussianSampler covariance and fourth moment, MC oracle") {
  GridK g(3);
  Eigen::MatrixXd c(3, 3);
  c << 2.0, 0.5, 0.1, 0.5, 1.0, -0.2, 0.1, -0.2, 1.5;
  CovOperator s(g, c);
  GaussianSampler sampler(s);
  int reps = 40000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(3, 3);
  double m4 = 0.0, m4sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    PhiloxStream rng(909, r);
    std::vector<double> w(3);
    for (double& x : w) x = rng.next_normal();
    std::vector<double> z = sampler.sample(w);
    double n2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      n2 += z[i] * z[i] * g.weight();
      for (int j = 0; j < 3; ++j) acc(i, j) += z[i] * z[j];
    }
    m4 += n2 * n2;
    m4sq += n2 * n2 * n2 * n2;
  }
  acc /= reps;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      // entry variance for a Gaussian product: c_ii c_jj + c_ij^2
      double se = std::sqrt((c(i, i) * c(j, j) + c(i, j) * c(i, j)) / reps);
      CHECK(std::abs(acc(i, j) - c(i, j)) <= 4.0 * se);
    }
  m4 /= reps;
  double se4 = std::sqrt((m4sq / reps - m4 * m4) / reps);
  CHECK(std::abs(m4 - gaussian_fourth_moment(s)) <= 3.0 * se4);
}

TEST_CASE("GaussianSampler rejects indefinite operators") {
  Eigen::MatrixXd c(2, 2);
  c << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  CHECK_THROWS_AS(GaussianSampler(CovOperator(GridK(2), c)), std::domain_error);
}

TEST_CASE("chaos_cov_operator") {
  GridK g(4);
  SUBCASE("empty expansion") {
    ChaosExpansion f;
    CHECK(op_hs_norm(chaos_cov_operator(f, g)) == 0.0);
  }
  SUBCASE("single order-1 term concentrated in one cell") {
    Kernel k(1, 1, 1, g.m, BasisMode::whitened);
    k.at({0}, {0}) = 1.0;
    ChaosExpansion f;
    f.terms.emplace(1, k);
    CovOperator c = chaos_cov_operator(f, g);
    CHECK(c.kernel(0, 0) == doctest::Approx(static_cast<double>(g.m)));
    CHECK(std::abs(c.kernel(1, 1)) < 1e-14);
    CHECK(std::abs(c.kernel(0, 1)) < 1e-14);
  }
  SUBCASE("trace equals the sum of second moments") {
    PhiloxStream rng(77, 0);
    ChaosExpansion f;
    double want = 0.0;
    for (int p = 1; p <= 2; ++p) {
      Kernel k(p, 2, 1, g.m, BasisMode::whitened);
      for (double& c : k.coords()) c = rng.next_normal();
      k = symmetrize(k);
      ChaosExpansion single;
      single.terms.emplace(p, k);
      f.terms.emplace(p, k);
      want += op_trace(chaos_cov_operator(single, g));
    }
    CHECK(op_trace(chaos_cov_operator(f, g)) == doctest::Approx(want).epsilon(1e-10));
  }
  SUBCASE("MC covariance of sampled chaos paths matches") {
    PhiloxStream init(177, 0);
    Kernel k(2, 2, 1, g.m, BasisMode::whitened);
    for (double& c : k.coords()) c = init.next_normal();
    k = symmetrize(k);
    ChaosExpansion f;
    f.terms.emplace(2, k);
    CovOperator c = chaos_cov_operator(f, g);
    int reps = 40000;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(g.m, g.m);
    double scale = std::sqrt(static_cast<double>(g.m));  // coeff -> node value
    for (int r = 0; r < reps; ++r) {
      PhiloxStream rng(178, r);
      std::vector<double> w(2);
      for (double& x : w) x = rng.next_normal();
      std::vector<double> v = sample_multiple_integral_k(k, 2, w);
      for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j) acc(i, j) += scale * v[i] * scale * v[j];
    }
    acc /= reps;
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.m; ++j) {
        double se = std::sqrt((c.kernel(i, i) * c.kernel(j, j) + 2 * c.kernel(i, j) * c.kernel(i, j)) / reps);
        CHECK(std::abs(acc(i, j) - c.kernel(i, j)) <= 4.0 * std::max(se, 1e-10));
      }
  }
}
