#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oscpic/core.hpp"
#include "oscpic/duffing.hpp"
#include "oscpic/sampling.hpp"
#include "test_oracles.hpp"

using namespace oscpic;

TEST_CASE("hamiltonian: values and symmetry") {
  CHECK(hamiltonian({0.0, 0.0, 0.01}) == 0.0);
  CHECK(hamiltonian({0.5, 0.0, 0.01}) == doctest::Approx(1251.5625).epsilon(1e-13));

  for (int k = 0; k < 50; ++k) {
    const double r = 2.0 * uniform01(11, 2 * k) - 1.0;
    const double v = 2.0 * uniform01(11, 2 * k + 1) - 1.0;
    const double h = hamiltonian({r, v, 0.01});
    CHECK(hamiltonian({-r, v, 0.01}) == h);
    CHECK(hamiltonian({r, -v, 0.01}) == h);
  }
}

TEST_CASE("amplitude_b: axis crossings and degenerate orbit") {
  // starting on the R axis, the start is the crossing
  CHECK(amplitude_b({0.5, 0.0, 0.01}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(amplitude_b({-0.5, 0.0, 0.01}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(amplitude_b({0.75, 0.0, 1e-4}) == doctest::Approx(0.75).epsilon(1e-13));

  // r0 = 0 reduces to b = sqrt((sqrt(1 + 2 eps v0^2) - 1)/eps)
  const double eps = 0.01, v0 = 0.1;
  const double direct = std::sqrt((std::sqrt(1.0 + 2.0 * eps * v0 * v0) - 1.0) / eps);
  CHECK(amplitude_b({0.0, v0, eps}) == doctest::Approx(direct).epsilon(1e-10));

  // eps -> 0 limit: b -> sqrt(r0^2 + v0^2)
  CHECK(amplitude_b({0.3, 0.4, 1e-8}) == doctest::Approx(0.5).epsilon(1e-7));

  CHECK_THROWS_AS(amplitude_b({0.0, 0.0, 0.01}), std::invalid_argument);
  CHECK_THROWS_AS(period_quadrature({0.0, 0.0, 0.01}), std::invalid_argument);
}

TEST_CASE("amplitude_b: orbit energy closes, h = G(b)") {
  for (int k = 0; k < 50; ++k) {
    const double r0 = 1.5 * uniform01(13, 2 * k) - 0.75;
    const double v0 = 0.4 * (uniform01(13, 2 * k + 1) - 0.5);
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const DuffingIc ic{r0, v0, eps};
      if (r0 == 0.0 && v0 == 0.0) continue;
      const double b = amplitude_b(ic);
      const double g_of_b = b * b / (2.0 * eps * eps) + b * b * b * b / (4.0 * eps);
      CHECK(g_of_b == doctest::Approx(hamiltonian(ic)).epsilon(1e-11));
    }
  }
}

TEST_CASE("period_quadrature: frozen values and the Carlson oracle") {
  // harmonic limit: tiny amplitude gives T -> 2 pi eps
  CHECK(period_quadrature({1e-12, 0.0, 0.01}) ==
        doctest::Approx(kTwoPi * 0.01).epsilon(1e-12));

  CHECK(period_quadrature({0.5, 0.0, 0.01}) ==
        doctest::Approx(0.062773035495728278).epsilon(1e-12));
  CHECK(period_quadrature({0.75, 0.2, 0.01}) ==
        doctest::Approx(0.062690452274612893).epsilon(1e-12));
  CHECK(period_quadrature({0.5, 0.0, 0.001}) ==
        doctest::Approx(0.0062825963459788460).epsilon(1e-12));
  CHECK(period_quadrature({0.0, 0.1, 0.01}) ==
        doctest::Approx(0.062829497134979015).epsilon(1e-12));

  for (int k = 0; k < 40; ++k) {
    const double r0 = 1.5 * uniform01(17, 2 * k) - 0.75;
    const double v0 = 0.4 * (uniform01(17, 2 * k + 1) - 0.5);
    for (double eps : {1e-2, 1e-3}) {
      const double mine = period_quadrature({r0, v0, eps});
      const double rf = oracle::duffing_period_rf(r0, v0, eps);
      CHECK(mine == doctest::Approx(rf).epsilon(1e-12));
    }
  }
}

TEST_CASE("period_quadrature: strictly decreasing in amplitude (hard spring)") {
  double previous = period_quadrature({1e-3, 0.0, 0.01});
  for (double b = 0.05; b <= 2.0; b += 0.05) {
    const double t = period_quadrature({b, 0.0, 0.01});
    CHECK(t < previous);
    previous = t;
  }
}

TEST_CASE("period_taylor: frozen values and the eps window") {
  CHECK(period_taylor({0.0, 0.0, 0.01}) == doctest::Approx(kTwoPi * 0.01).epsilon(1e-15));
  CHECK(period_taylor({0.5, 0.0, 0.01}) ==
        doctest::Approx(0.062773035646445966).epsilon(1e-12));

  // beam-support ICs stay inside (2 pi eps - 1.5 eps^2, 2 pi eps)
  const double eps = 0.01;
  const double floor = kTwoPi * eps - 1.5 * eps * eps;
  for (int k = 0; k < 300; ++k) {
    const double r0 = 1.5 * uniform01(19, 2 * k) - 0.75;
    const double v0 = 0.0727518214392 * normal_quantile(uniform01_open(19, 2 * k + 1));
    const double t = period_taylor({r0, v0, eps});
    CHECK(t > floor);
    CHECK(t < kTwoPi * eps);
  }
}

TEST_CASE("period_taylor vs period_quadrature: O(eps^4) remainder") {
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const double bound = 10.0 * eps * eps * eps * eps;
    for (int k = 0; k < 60; ++k) {
      const double r0 = 1.5 * uniform01(23, 2 * k) - 0.75;
      const double v0 = 0.4 * (uniform01(23, 2 * k + 1) - 0.5);
      if (r0 == 0.0 && v0 == 0.0) continue;
      const double diff = std::fabs(period_taylor({r0, v0, eps}) -
                                    period_quadrature({r0, v0, eps}));
      CHECK(diff <= bound);
    }
  }
}
