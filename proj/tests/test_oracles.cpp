#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "smd/lowerbound.hpp"
#include "smd/oracles.hpp"

using namespace smd;
using testing::median_of_means;
using testing::random_vec;

namespace {

Eigen::VectorXi make_alpha(std::initializer_list<int> entries) {
  Eigen::VectorXi a(static_cast<int>(entries.size()));
  int i = 0;
  for (const int e : entries) a[i++] = e;
  return a;
}

}  // namespace

TEST_CASE("synthetic oracle: values, Lipschitz bound, subgradient norm") {
  SeededRng rng(301);
  for (const double q : {1.0, 1.5, 2.0, 4.0}) {
    const Exponent qe(q);
    const Vec x_star = random_vec(rng, 6, 0.5);
    const SyntheticOracle oracle(x_star, 2.0, qe, std::nullopt);
    CHECK(oracle.value(x_star) == 0.0);
    CHECK(oracle.sigma() == 2.0);  // noiseless: sigma = L

    for (int rep = 0; rep < 200; ++rep) {
      const Vec a = random_vec(rng, 6);
      const Vec b = random_vec(rng, 6);
      // |f(a) - f(b)| <= L ||a-b||_{q*}
      CHECK(std::abs(oracle.value(a) - oracle.value(b)) <=
            2.0 * p_norm(a - b, qe.dual()) * (1 + 1e-12) + 1e-12);
      // subgradient inequality and norm bound
      const Vec g = oracle.subgradient(a);
      CHECK(p_norm(g, qe) <= 2.0 * (1 + 1e-9));
      CHECK(oracle.value(b) >= oracle.value(a) + g.dot(b - a) - 1e-9);
    }
  }
}

TEST_CASE("synthetic oracle: noiseless query at the optimum is (0, 0)") {
  const Vec x_star = Vec::Constant(3, 0.25);
  const SyntheticOracle oracle(x_star, 1.0, 2.0, std::nullopt);
  SeededRng rng(303);
  const OracleResponse resp = oracle.sample(x_star, rng);
  CHECK(resp.f_hat == 0.0);
  CHECK(resp.g_hat.v.isZero());
}

TEST_CASE("synthetic oracle: unbiased gradient under heavy noise") {
  const NoiseSpec noise(1.9, 0.5, 0.1);
  const Vec x_star = Vec::Constant(4, -0.25);
  const SyntheticOracle oracle(x_star, 1.0, 1.5, noise);
  SeededRng rng(307);
  const Vec x = random_vec(rng, 4, 0.8);
  const Vec want = oracle.subgradient(x);

  const int n = 400000;
  std::vector<std::vector<double>> gs(4, std::vector<double>(n));
  std::vector<double> fs(n);
  for (int i = 0; i < n; ++i) {
    const OracleResponse resp = oracle.sample(x, rng);
    fs[i] = resp.f_hat;
    for (int j = 0; j < 4; ++j) gs[j][i] = resp.g_hat.v[j];
  }
  CHECK(median_of_means(fs) == doctest::Approx(oracle.value(x)).epsilon(0.02));
  for (int j = 0; j < 4; ++j)
    CHECK(median_of_means(gs[j]) == doctest::Approx(want[j]).epsilon(0.03));
}

TEST_CASE("hard small: deterministic values") {
  // d = 1, alpha = +1: g(x) = L (3/4) delta 2 |x + R|
  const auto inst = make_hard_small(make_alpha({1}), 0.1, 2.0, 1.0, 0.5);
  Vec x(1);
  x << -1.0;
  CHECK(g_alpha_value_small(inst, x) == 0.0);  // minimum at -R alpha
  x << 1.0;
  CHECK(g_alpha_value_small(inst, x) ==
        doctest::Approx(3.0 * 2.0 * 0.1 * 1.0));  // 3 L delta R
  CHECK(hard_min_value(inst) == 0.0);
  CHECK(hard_minimizer(inst)[0] == -1.0);

  // The (2+alpha_i)/4 weights are deliberately asymmetric (they create the
  // (3/4)p vs (1/4)p Bernoulli pair), so flipping alpha and x together does
  // NOT preserve the value; permuting coordinates and alpha together does.
  SeededRng rng(311);
  const auto a = make_alpha({1, -1, 1, 1, -1});
  Eigen::VectorXi perm_a(5);
  const int perm[5] = {3, 0, 4, 1, 2};
  for (int i = 0; i < 5; ++i) perm_a[i] = a[perm[i]];
  const auto inst_a = make_hard_small(a, 0.05, 1.5, 0.8, 0.7);
  const auto inst_p = make_hard_small(perm_a, 0.05, 1.5, 0.8, 0.7);
  const auto inst_f = make_hard_small(-a, 0.05, 1.5, 0.8, 0.7);
  bool flip_symmetric = true;
  for (int rep = 0; rep < 100; ++rep) {
    const Vec z = random_vec(rng, 5, 0.8);
    Vec pz(5);
    for (int i = 0; i < 5; ++i) pz[i] = z[perm[i]];
    CHECK(g_alpha_value_small(inst_a, z) ==
          doctest::Approx(g_alpha_value_small(inst_p, pz)).epsilon(1e-12));
    if (std::abs(g_alpha_value_small(inst_a, z) - g_alpha_value_small(inst_f, -z)) >
        1e-9)
      flip_symmetric = false;
  }
  CHECK_FALSE(flip_symmetric);

  // derived parameters: bern_p Lambda = 2 delta
  CHECK(inst.bern_p() == doctest::Approx(std::pow(0.4, 3.0)));
  CHECK(inst.bern_p() * inst.lambda() == doctest::Approx(2.0 * 0.1));
  CHECK_THROWS_AS(make_hard_small(make_alpha({1}), 0.2, 1.0, 1.0, 0.5),
                  std::invalid_argument);  // delta > 1/8
}

TEST_CASE("hard small: oracle unbiasedness, zero branch, moment bound") {
  const auto alpha = make_alpha({1, -1, -1, 1});
  const double delta = 0.1, L = 1.5, R = 1.0, kappa = 0.5;
  const auto inst = make_hard_small(alpha, delta, L, R, kappa);
  SeededRng rng(313);
  const Vec x = random_vec(rng, 4, 0.9);

  const int n = 600000;
  std::vector<double> fs(n);
  std::vector<std::vector<double>> gs(4, std::vector<double>(n));
  long zero_count = 0;
  double moment_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const OracleResponse resp = oracle_small(inst, x, rng);
    fs[i] = resp.f_hat;
    for (int j = 0; j < 4; ++j) gs[j][i] = resp.g_hat.v[j];
    if (resp.g_hat.v.isZero() && resp.f_hat == 0.0) ++zero_count;
    moment_sum += norm_power(resp.g_hat.v, 1.0, 1.0 + kappa);
  }
  // the suppressed branch fires with probability >= 1 - (3/4) bern_p
  CHECK(zero_count > n / 2);
  CHECK(median_of_means(fs) == doctest::Approx(g_alpha_value_small(inst, x)).epsilon(0.01));

  // E[g_hat] is the subgradient of g_alpha (away from kinks)
  for (int j = 0; j < 4; ++j) {
    const double w = (2.0 + alpha[j]) / 4.0 * delta;
    const double slope = L / 4.0 * w *
                         ((1 + alpha[j]) * (x[j] > -R ? 1 : -1) +
                          (1 - alpha[j]) * (x[j] > R ? 1 : -1));
    CHECK(median_of_means(gs[j]) == doctest::Approx(slope).epsilon(0.02));
  }

  // certified moment: E ||g_hat||_q^{1+kappa} <= L^{1+kappa} for q <= 1+kappa
  CHECK(moment_sum / n <= std::pow(L, 1.0 + kappa) * 1.02);
}

TEST_CASE("hard large: deterministic values") {
  const auto inst =
      make_hard_large(make_alpha({1}), 0.01, 1.0, 1.0, 0.5, Exponent(2.0), 100);
  const double pref = 1.0 / std::pow(100.0, 0.5 / 1.5);  // L T^{-k/(1+k)} d^{-1/q}
  Vec x(1);
  x << -1.0;
  CHECK(g_alpha_value_large(inst, x) ==
        doctest::Approx(pref * (0.5 - 0.01) * 2.0));  // prefactor (1/2 - delta) 2R
  CHECK(hard_min_value(inst) == doctest::Approx(g_alpha_value_large(inst, x)));

  // delta -> 0: the weights collapse to 1/2 and alpha no longer matters
  const auto a = make_alpha({1, -1, 1});
  const auto tiny_a = make_hard_large(a, 1e-9, 1.0, 1.0, 0.5, Exponent(2.0), 50);
  const auto tiny_b = make_hard_large(-a, 1e-9, 1.0, 1.0, 0.5, Exponent(2.0), 50);
  SeededRng rng(317);
  for (int rep = 0; rep < 50; ++rep) {
    const Vec z = random_vec(rng, 3, 0.9);
    CHECK(g_alpha_value_large(tiny_a, z) ==
          doctest::Approx(g_alpha_value_large(tiny_b, z)).epsilon(1e-6));
  }

  // sign-flip symmetry
  const auto inst_a = make_hard_large(a, 0.01, 2.0, 0.7, 0.3, Exponent(3.0), 64);
  const auto inst_b = make_hard_large(-a, 0.01, 2.0, 0.7, 0.3, Exponent(3.0), 64);
  for (int rep = 0; rep < 50; ++rep) {
    const Vec z = random_vec(rng, 3, 0.7);
    CHECK(g_alpha_value_large(inst_a, z) ==
          doctest::Approx(g_alpha_value_large(inst_b, -z)).epsilon(1e-12));
  }
}

TEST_CASE("hard large: gate branch, unbiasedness, moment bound") {
  const auto alpha = make_alpha({1, -1, 1});
  const double delta = 0.01, L = 1.0, R = 1.0, kappa = 0.5;
  const long T = 50;
  const auto inst = make_hard_large(alpha, delta, L, R, kappa, Exponent(2.0), T);
  SeededRng rng(331);
  const Vec x = random_vec(rng, 3, 0.9);

  const int n = 2000000;
  std::vector<double> fs(n);
  std::vector<std::vector<double>> gs(3, std::vector<double>(n));
  long zeros = 0;
  double moment_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const OracleResponse resp = oracle_large(inst, x, rng);
    fs[i] = resp.f_hat;
    for (int j = 0; j < 3; ++j) gs[j][i] = resp.g_hat.v[j];
    if (resp.f_hat == 0.0 && resp.g_hat.v.isZero()) ++zeros;
    moment_sum += norm_power(resp.g_hat.v, 2.0, 1.0 + kappa);
  }
  // gate: roughly (1 - 1/T) of responses are the zero pair
  CHECK(static_cast<double>(zeros) / n == doctest::Approx(1.0 - 1.0 / T).epsilon(0.01));
  CHECK(median_of_means(fs) == doctest::Approx(g_alpha_value_large(inst, x)).epsilon(0.02));
  // subgradient: coordinate j slope = pref [ (1/2 + a_j d) sgn(x_j+R) + (1/2 - a_j d) sgn(x_j-R) ]
  const double pref = inst.large_payout_scale() / T;
  for (int j = 0; j < 3; ++j) {
    const double want = pref * ((0.5 + alpha[j] * delta) - (0.5 - alpha[j] * delta));
    CHECK(median_of_means(gs[j]) == doctest::Approx(want).epsilon(0.05));
  }
  CHECK(moment_sum / n <= std::pow(L, 1.0 + kappa) * 1.02);
}

TEST_CASE("hard objectives are L-Lipschitz in the dual norm") {
  SeededRng rng(349);
  const double L = 1.3, R = 1.0;
  const auto alpha = make_alpha({1, -1, 1, -1, -1, 1});
  // small family: gradient q-norm <= L for q in [1, 1+kappa]; check the
  // matching q* Lipschitz bound on random pairs
  const auto small = make_hard_small(alpha, 0.1, L, R, 0.5);
  const auto large = make_hard_large(alpha, 0.01, L, R, 0.5, Exponent(2.0), 128);
  for (int rep = 0; rep < 300; ++rep) {
    const Vec a = random_vec(rng, 6, R);
    const Vec b = random_vec(rng, 6, R);
    CHECK(std::abs(g_alpha_value_small(small, a) - g_alpha_value_small(small, b)) <=
          L * p_norm(a - b, Exponent(1.0).dual()) * (1 + 1e-12) + 1e-12);
    CHECK(std::abs(g_alpha_value_large(large, a) - g_alpha_value_large(large, b)) <=
          L * p_norm(a - b, Exponent(2.0).dual()) * (1 + 1e-12) + 1e-12);
  }
}

TEST_CASE("discrepancy: identical objectives give zero") {
  const auto a = make_alpha({1, -1});
  const auto inst = make_hard_small(a, 0.1, 1.0, 1.0, 0.5);
  CHECK(discrepancy_exact(inst, inst) == doctest::Approx(0.0));

  const Box box(1.0, 2);
  const auto f = [&](const Vec& x) { return g_alpha_value_small(inst, x); };
  CHECK(discrepancy_rho(f, f, box, 201) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("discrepancy: exact Hamming identity for the small family") {
  SeededRng rng(337);
  const double delta = 0.08, L = 1.7, R = 0.9, kappa = 0.4;
  for (int d = 1; d <= 8; ++d) {
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::VectorXi a(d), b(d);
      for (int i = 0; i < d; ++i) {
        a[i] = rng.bernoulli(0.5) ? 1 : -1;
        b[i] = rng.bernoulli(0.5) ? 1 : -1;
      }
      const auto ia = make_hard_small(a, delta, L, R, kappa);
      const auto ib = make_hard_small(b, delta, L, R, kappa);
      const double want = R * L * delta / d * hamming(a, b);
      CHECK(discrepancy_exact(ia, ib) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("discrepancy: grid and exact agree at d = 2") {
  const auto a = make_alpha({1, -1});
  const auto b = make_alpha({-1, -1});
  const auto ia = make_hard_small(a, 0.1, 1.0, 1.0, 0.5);
  const auto ib = make_hard_small(b, 0.1, 1.0, 1.0, 0.5);
  const Box box(1.0, 2);
  const double grid = discrepancy_rho(
      [&](const Vec& x) { return g_alpha_value_small(ia, x); },
      [&](const Vec& x) { return g_alpha_value_small(ib, x); }, box, 401);
  CHECK(discrepancy_exact(ia, ib) == doctest::Approx(grid).epsilon(1e-6));
}

TEST_CASE("discrepancy: large-family separation bound") {
  SeededRng rng(347);
  const double delta = 0.01, L = 1.0, R = 1.0, kappa = 0.5;
  const long T = 1000;
  for (const double q : {2.0, 4.0}) {
    for (int d = 2; d <= 8; ++d) {
      // vertices at Hamming distance >= d/4 (flip the first ceil(d/4))
      Eigen::VectorXi a = Eigen::VectorXi::Constant(d, 1);
      Eigen::VectorXi b = a;
      for (int i = 0; i < (d + 3) / 4; ++i) b[i] = -1;
      const auto ia = make_hard_large(a, delta, L, R, kappa, q, T);
      const auto ib = make_hard_large(b, delta, L, R, kappa, q, T);
      const double bound = 0.5 * R * delta * L *
                           std::pow(static_cast<double>(T), -kappa / (1 + kappa)) *
                           std::pow(static_cast<double>(d), 1.0 - 1.0 / q);
      CHECK(discrepancy_exact(ia, ib) >= bound * (1.0 - 1e-12));
    }
  }
}
