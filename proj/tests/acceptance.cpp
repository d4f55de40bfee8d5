// Acceptance gate: each criterion prints one PASS/FAIL line and the
// process exits nonzero on failure. Run a single criterion by number:
//   acceptance <1..7>

#include <sys/wait.h>

#include <cmath>
#include <stdexcept>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wchaos/bounds.hpp"
#include "wchaos/breuer_major.hpp"
#include "wchaos/gaussim.hpp"

using namespace wchaos;

namespace {

struct Criterion {
  std::string label;
  std::function<bool(std::ostream&)> check;
};

Kernel random_sym(int order, int h_dim, std::uint64_t seed) {
  Kernel f(order, h_dim, 0, 0, BasisMode::whitened);
  PhiloxStream rng(seed, 1);
  for (double& c : f.coords()) c = rng.next_normal();
  return symmetrize(f);
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

// ------------------------------------------------------------ criterion 1

bool exact_identities(std::ostream& log) {
  bool ok = true;
  Kernel e11(2, 1, 0, 0, BasisMode::whitened);
  e11.coords()[0] = 1.0;
  double gap = fourth_moment_gap(e11, e11, 2);
  ok = ok && std::abs(gap - 48.0) <= 1e-9;
  log << "  fourth_moment_gap = " << gap << " (want 48)\n";

  CovOperator s1(GridK(1), Eigen::MatrixXd::Constant(1, 1, 2.0));
  ok = ok && std::abs(gaussian_fourth_moment(s1) - 12.0) <= 1e-9;
  CovOperator pair(GridK(2), 2.0 * Eigen::MatrixXd::Identity(2, 2));
  ok = ok && std::abs(gaussian_fourth_moment(pair) - 8.0) <= 1e-9;
  GridK g(256);
  double b4 = gaussian_fourth_moment(CovOperator::brownian(g));
  ok = ok && std::abs(b4 - 7.0 / 12.0) <= 5.0 / g.m;
  log << "  gaussian_fourth_moment: 1-dim ok, iid-pair ok, brownian = " << b4 << "\n";

  Kernel e1 = Kernel::basis_vector(1, 0);
  ChaosExpansion p11 = product_formula(e1, 1, e1, 1);
  ok = ok && std::abs(p11.terms.at(2).coords()[0] - 1.0) <= 1e-12 &&
       std::abs(p11.terms.at(0).coords()[0] - 1.0) <= 1e-12;
  ChaosExpansion p21 = product_formula(e11, 2, e1, 1);
  ok = ok && std::abs(p21.terms.at(3).coords()[0] - 1.0) <= 1e-12 &&
       std::abs(p21.terms.at(1).coords()[0] - 2.0) <= 1e-12;
  log << "  product_formula H1^2 and H2 H1 coordinate-exact\n";
  return ok;
}

// ------------------------------------------------------------ criterion 2

bool oracle_equivalence(std::ostream& log) {
  bool ok = true;
  struct Leg {
    const char* name;
    CovModel cov;
  } legs[] = {{"iid", CovModel::iid()},
              {"power_law(-2)", CovModel::power_law(-2.0)},
              {"fbm(0.7)", CovModel::fbm(0.7)}};
  for (const Leg& leg : legs) {
    try {
      double worst = 0.0;
      for (int n = 1; n <= 8; ++n)
        for (int p = 2; p <= 3; ++p)
          for (int r = 1; r <= p - 1; ++r) {
            GramBasis basis = gram_from_cov([&](int k) { return rho(leg.cov, k); }, n);
            Kernel f(p, n, 0, 0, BasisMode::raw);
            std::vector<int> idx(p);
            for (int i = 0; i < n; ++i) {
              std::fill(idx.begin(), idx.end(), i);
              f.at(idx) = 1.0 / std::sqrt(static_cast<double>(n));
            }
            Kernel w = whiten(f, basis);
            double oracle = kernel_norm(contract(w, w, r));
            worst = std::max(worst, std::abs(oracle - bm_contraction_norm(p, r, n, leg.cov)));
          }
      bool this_ok = worst <= 1e-10;
      ok = ok && this_ok;
      log << "  bm_contraction_norm vs generic pipeline [" << leg.name
          << "], worst gap = " << worst << (this_ok ? "" : "  <-- out") << "\n";
    } catch (const std::exception& e) {
      ok = false;
      log << "  bm_contraction_norm vs generic pipeline [" << leg.name
          << "]: " << e.what() << "  <-- out\n";
    }
  }

  struct Pair {
    int p, q;
  } pairs[] = {{1, 1}, {2, 1}, {2, 2}, {3, 2}};
  int reps = 100000;
  for (auto [p, q] : pairs) {
    Kernel f = random_sym(p, 3, 900 + p), gk = random_sym(q, 3, 950 + q);
    double want = gamma_variance(f, p, gk, q);
    double s = 0, ss = 0, s3 = 0, s4 = 0;
    for (int r = 0; r < reps; ++r) {
      PhiloxStream rng(606, r);
      std::vector<double> w(3);
      for (double& x : w) x = rng.next_normal();
      double v = sample_gamma_pair(f, p, gk, q, w);
      s += v;
      ss += v * v;
      s3 += v * v * v;
      s4 += v * v * v * v;
    }
    double m1 = s / reps, m2 = ss / reps;
    double var = m2 - m1 * m1;
    // delta-method SE of the variance estimator
    double mu4 = s4 / reps - 4 * m1 * s3 / reps + 6 * m1 * m1 * m2 - 3 * m1 * m1 * m1 * m1;
    double se = std::sqrt(std::max(mu4 - var * var, 0.0) / reps);
    bool this_ok = std::abs(var - want) <= 3.0 * std::max(se, 1e-12);
    ok = ok && this_ok;
    log << "  gamma_variance (p=" << p << ",q=" << q << "): exact = " << want
        << ", MC = " << var << ", 3se = " << 3.0 * se << (this_ok ? "" : "  <-- out") << "\n";
  }
  return ok;
}

// ------------------------------------------------------------ criterion 3

bool isometry_suite(std::ostream& log) {
  bool ok = true;
  int reps = 100000;
  for (int p = 1; p <= 3; ++p) {
    Kernel f = random_sym(p, 3, 700 + p);
    double want = second_moment(f, p);
    double s = 0, ss = 0;
    for (int r = 0; r < reps; ++r) {
      PhiloxStream rng(505, r);
      std::vector<double> w(3);
      for (double& x : w) x = rng.next_normal();
      double v = sample_multiple_integral(f, p, w);
      s += v * v;
      ss += v * v * v * v;
    }
    double mean = s / reps;
    double se = std::sqrt((ss / reps - mean * mean) / reps);
    bool this_ok = std::abs(mean - want) <= 3.0 * se;
    ok = ok && this_ok;
    log << "  isometry p=" << p << ": exact = " << want << ", MC = " << mean
        << ", 3se = " << 3.0 * se << (this_ok ? "" : "  <-- out") << "\n";
  }
  for (auto [p, q] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 3}}) {
    Kernel f = random_sym(p, 3, 720 + p), g = random_sym(q, 3, 730 + q);
    double s = 0, ss = 0;
    for (int r = 0; r < reps; ++r) {
      PhiloxStream rng(510, r);
      std::vector<double> w(3);
      for (double& x : w) x = rng.next_normal();
      double v = sample_multiple_integral(f, p, w) * sample_multiple_integral(g, q, w);
      s += v;
      ss += v * v;
    }
    double mean = s / reps;
    double se = std::sqrt((ss / reps - mean * mean) / reps);
    bool this_ok = std::abs(mean) <= 3.0 * se;
    ok = ok && this_ok;
    log << "  cross-order (" << p << "," << q << "): MC = " << mean << ", 3se = " << 3.0 * se
        << (this_ok ? "" : "  <-- out") << "\n";
  }
  double min_gap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Kernel u = random_sym(2, 3, 1000 + trial), v = random_sym(2, 3, 2000 + trial);
    min_gap = std::min(min_gap, fourth_moment_gap(u, v, 2));
  }
  ok = ok && min_gap >= -1e-9;
  log << "  fourth_moment_gap over 100 random pairs, min = " << min_gap << "\n";
  return ok;
}

// ------------------------------------------------------------ criterion 4

bool slope_reproduction(std::ostream& log) {
  struct Config {
    const char* name;
    BmSpec base;
    double target;
  };
  std::vector<Config> configs = {
      {"alpha=-2 p=2", {2, 0, CovModel::power_law(-2.0), GridK(8)}, -0.5},
      {"fbm H=0.6 p=2", {2, 0, CovModel::fbm(0.6), GridK(8)}, -0.3},
      {"alpha=-0.75 p=3", {3, 0, CovModel::power_law(-0.75), GridK(8)}, -0.375},
  };
  bool ok = true;
  for (auto& cfg : configs) {
    std::vector<double> lx, ly;
    for (long n = 256; n <= 8192; n *= 2) {
      BmSpec spec = cfg.base;
      spec.n = n;
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(theorem13_bound(spec).total));
    }
    double slope = lsq_slope(lx, ly);
    bool this_ok = std::abs(slope - cfg.target) <= 0.15;
    ok = ok && this_ok;
    log << "  " << cfg.name << ": slope = " << slope << ", target = " << cfg.target
        << " +- 0.15" << (this_ok ? "" : "  <-- out of band") << "\n";
  }
  return ok;
}

// ------------------------------------------------------------ criterion 5

bool lemma6_check(std::ostream& log) {
  bool ok = true;
  GridK g(64);
  for (long n : {16L, 64L, 256L}) {
    BmSpec spec{1, n, CovModel::iid(), g};
    double sup = 0.0;
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.m; ++j)
        sup = std::max(sup, std::abs(kn_kernel(spec, g.node(i), g.node(j))));
    bool this_ok = sup <= 1.0 / n + 1e-15;
    ok = ok && this_ok;
    log << "  iid p=1 n=" << n << ": sup|k_n| = " << sup << " vs 1/n = " << 1.0 / n
        << (this_ok ? "" : "  <-- exceeds") << "\n";
  }
  std::vector<double> lx, ly;
  for (long n = 256; n <= 4096; n *= 2) {
    BmSpec spec{2, n, CovModel::power_law(-2.0), g};
    double sup = 0.0;
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j <= i; ++j)
        sup = std::max(sup, std::abs(kn_kernel(spec, g.node(i), g.node(j))));
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(sup));
  }
  double slope = lsq_slope(lx, ly);
  bool decays = slope <= -0.8;
  ok = ok && decays;
  log << "  alpha=-2 p=2 sup|k_n| slope = " << slope << " (need <= -0.8)\n";
  return ok;
}

// ------------------------------------------------------------ criterion 6

bool empirical_sandwich(std::ostream& log) {
  int replicas = 10000;
  BmSpec spec{2, 1024, CovModel::power_law(-2.0), GridK(32)};
  BmBoundReport rep = theorem13_bound(spec);
  double sigma2 = sigma_sq(spec.p, spec.cov).value;

  CirculantEmbedding emb(spec.cov, static_cast<int>(spec.n));
  std::vector<std::vector<double>> sf, sz;
  for (int r = 0; r < replicas; ++r) {
    PhiloxStream rng(40406, r);
    sf.push_back(simulate_U_n(spec, emb.sample(rng), spec.grid));
  }
  GaussianSampler gauss(sigma2 * CovOperator::brownian(spec.grid));
  for (int r = 0; r < replicas; ++r) {
    PhiloxStream rng(40406, replicas + r);
    std::vector<double> w(spec.grid.m);
    for (double& x : w) x = rng.next_normal();
    sz.push_back(gauss.sample(w));
  }
  auto dirs = default_directions(spec.grid, splitmix64(40406));
  double emp = empirical_discrepancy(sf, sz, dirs, spec.grid);
  // test statistics are bounded by 1, so per-family variance <= 1
  double se = std::sqrt(1.0 / sf.size() + 1.0 / sz.size());
  bool ok = emp <= rep.total + 4.0 * se;
  log << "  empirical = " << emp << ", bound = " << rep.total << ", 4se = " << 4.0 * se
      << (ok ? "" : "  <-- sandwich violated") << "\n";
  return ok;
}

// ------------------------------------------------------------ criterion 7

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool determinism(std::ostream& log) {
  std::string base = std::string(BMRATE_PATH) +
                     " fbm --hurst 0.7 --p 2 --n-list 64,128 --replicas 16 --seed 31 --out ";
  std::string f1 = "/tmp/bmrate_det_1.csv", f2 = "/tmp/bmrate_det_2.csv";
  int rc1 = std::system((base + f1).c_str());
  int rc2 = std::system((base + f2).c_str());
  if (WEXITSTATUS(rc1) != 0 || WEXITSTATUS(rc2) != 0) {
    log << "  bmrate run failed\n";
    return false;
  }
  std::string a = slurp(f1), b = slurp(f2);
  bool ok = !a.empty() && a == b;
  log << "  " << (ok ? "byte-identical CSV across reruns" : "CSV bytes differ") << "\n";
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> criteria = {
      {"exact-identity suite", exact_identities},
      {"oracle-equivalence suite", oracle_equivalence},
      {"isometry/orthogonality suite", isometry_suite},
      {"rate-bound slope reproduction", slope_reproduction},
      {"deviation-kernel decay", lemma6_check},
      {"empirical sandwich", empirical_sandwich},
      {"CSV determinism", determinism},
  };
  int lo = 1, hi = static_cast<int>(criteria.size());
  if (argc > 1) {
    int k = std::atoi(argv[1]);
    if (k < 1 || k > hi) {
      std::cerr << "usage: acceptance [1-" << hi << "]\n";
      return 2;
    }
    lo = hi = k;
  }
  bool all_ok = true;
  for (int k = lo; k <= hi; ++k) {
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = criteria[k - 1].check(detail);
    } catch (const std::exception& e) {
      detail << "  exception: " << e.what() << "\n";
    }
    std::cout << "CRITERION " << k << " (" << criteria[k - 1].label << "): "
              << (ok ? "PASS" : "FAIL") << "\n"
              << detail.str();
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
