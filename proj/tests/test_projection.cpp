#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "smd/projection.hpp"

using namespace smd;
using testing::random_vec;

TEST_CASE("interior points are their own projection") {
  const MirrorMap m(1.5, 0.5);
  const Box box(1.0, 4);
  SeededRng rng(211);
  for (int rep = 0; rep < 50; ++rep) {
    const Vec y = random_vec(rng, 4, 1.0);
    const Vec yhat = bregman_project(m, y, box);
    CHECK(yhat == y);  // bitwise: the interior fast path returns y itself
  }
}

TEST_CASE("p=2 kappa=1 projection is the coordinate clamp") {
  const MirrorMap m(2.0, 1.0);
  const Box box(1.0, 6);
  SeededRng rng(223);
  for (int rep = 0; rep < 200; ++rep) {
    const Vec y = random_vec(rng, 6, 3.0);
    const Vec yhat = bregman_project(m, y, box);
    CHECK((yhat - clamp_to(y, box)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("d=2 grid oracle") {
  const MirrorMap m(1.5, 0.5);
  const Box box(1.0, 2);
  Vec y(2);
  y << 3.0, 0.2;
  const Vec yhat = bregman_project(m, y, box);

  const int n = 2001;
  Vec best(2);
  double best_val = std::numeric_limits<double>::infinity();
  Vec x(2);
  for (int i = 0; i < n; ++i) {
    x[0] = -1.0 + 2.0 * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      x[1] = -1.0 + 2.0 * j / (n - 1);
      const double val = m.bregman(x, y);
      if (val < best_val) {
        best_val = val;
        best = x;
      }
    }
  }
  CHECK(std::abs(yhat[0] - best[0]) <= 2e-3);
  CHECK(std::abs(yhat[1] - best[1]) <= 2e-3);
  CHECK(m.bregman(yhat, y) <= best_val + 1e-10 * (1.0 + best_val));
}

TEST_CASE("output feasibility, idempotence, first-order optimality") {
  SeededRng rng(227);
  for (const double kappa : {0.3, 0.5, 1.0}) {
    for (const double p : {1.0 + kappa, 2.0, 4.0}) {
      const MirrorMap m(p, kappa);
      const Box box(1.0, 5);
      for (int rep = 0; rep < 60; ++rep) {
        const Vec y = random_vec(rng, 5, 4.0);
        const Vec yhat = bregman_project(m, y, box);
        CHECK(yhat.cwiseAbs().maxCoeff() <= box.radius + 1e-12);

        const Vec again = bregman_project(m, yhat, box);
        CHECK((again - yhat).cwiseAbs().maxCoeff() <= 1e-9);

        // <grad Psi(yhat) - grad Psi(y), yhat - x> <= 0 for feasible x
        const Vec diff = m.grad(yhat).v - m.grad(y).v;
        for (int k = 0; k < 5; ++k) {
          const Vec x = random_vec(rng, 5, 1.0);
          CHECK(diff.dot(yhat - x) <= 1e-8 * (1.0 + diff.cwiseAbs().maxCoeff()));
        }
      }
    }
  }
}

TEST_CASE("generalized Pythagorean inequality") {
  SeededRng rng(229);
  for (const double kappa : {0.3, 0.5, 1.0}) {
    for (const double p : {1.0 + kappa, 2.0, 4.0}) {
      const MirrorMap m(p, kappa);
      const Box box(1.0, 4);
      for (int rep = 0; rep < 100; ++rep) {
        const Vec x = random_vec(rng, 4, 1.0);
        const Vec y = random_vec(rng, 4, 3.0);
        CHECK(pythagorean_check(m, x, y, box));
      }
    }
  }

  // y interior: yhat = y and both sides equal D(x, y)
  const MirrorMap m(1.5, 0.5);
  const Box box(1.0, 3);
  SeededRng rng2(233);
  const Vec x = random_vec(rng2, 3, 1.0);
  const Vec y = random_vec(rng2, 3, 0.9);
  const Vec yhat = bregman_project(m, y, box);
  CHECK(yhat == y);
  CHECK(pythagorean_check(m, x, y, box));
  // x = yhat reduces to D(yhat,y) <= D(yhat,y)
  CHECK(pythagorean_check(m, yhat, y, box));
}

TEST_CASE("infeasible x is rejected") {
  const MirrorMap m(2.0, 1.0);
  const Box box(1.0, 2);
  Vec x(2), y(2);
  x << 2.0, 0.0;
  y << 0.5, 0.5;
  CHECK_THROWS_AS(pythagorean_check(m, x, y, box), std::invalid_argument);
}
