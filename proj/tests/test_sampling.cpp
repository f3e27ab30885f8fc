#include <doctest.h>

#include <cmath>

#include "oscpic/sampling.hpp"

using namespace oscpic;

TEST_CASE("normal_quantile: reference values") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.975) == doctest::Approx(1.9599639845400545).epsilon(1e-12));
  CHECK(normal_quantile(0.841344746068543) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(normal_quantile(0.3) == doctest::Approx(-0.5244005127080407).epsilon(1e-12));
  // intermediate and far tails
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.3613409024040562).epsilon(1e-12));
  CHECK(normal_quantile(1e-12) == doctest::Approx(-7.0344838253011319).epsilon(1e-12));
  for (int k = 1; k < 40; ++k) {
    const double p = k / 40.0;
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-10));
  }
  CHECK_THROWS(normal_quantile(0.0));
  CHECK_THROWS(normal_quantile(1.0));
}

TEST_CASE("uniform01: range and determinism") {
  for (int k = 0; k < 1000; ++k) {
    const double u = uniform01(123, k);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = uniform01_open(123, k);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(uniform01(123, k) == u);
  }
  CHECK(uniform01(1, 0) != uniform01(2, 0));
}

TEST_CASE("sample_initial: support, weights, determinism") {
  const int n = 20000;
  Ensemble e = sample_initial(n, 42);
  CHECK(e.size() == static_cast<std::size_t>(n));
  CHECK(e.time == 0.0);

  double sum_r = 0.0, sum_v = 0.0, sum_v2 = 0.0;
  for (const Particle& p : e.particles) {
    CHECK(p.state.r >= -0.75);
    CHECK(p.state.r <= 0.75);
    CHECK(p.weight == 1.0 / n);
    sum_r += p.state.r;
    sum_v += p.state.v;
    sum_v2 += p.state.v * p.state.v;
  }
  CHECK(e.total_weight() == doctest::Approx(1.0).epsilon(1e-12));

  // moments: v_th^2 = 5.2928275227212408e-3; 4 sigma statistical windows
  const double v_th = 0.0727518214392;
  const double mean_r = sum_r / n;
  const double mean_v = sum_v / n;
  const double var_v = sum_v2 / n - mean_v * mean_v;
  CHECK(std::fabs(mean_r) < 4.0 * (1.5 / std::sqrt(12.0)) / std::sqrt(double(n)));
  CHECK(std::fabs(mean_v) < 4.0 * v_th / std::sqrt(double(n)));
  CHECK(var_v == doctest::Approx(v_th * v_th).epsilon(0.05));

  // bit-identical reproducibility
  Ensemble again = sample_initial(n, 42);
  for (int i = 0; i < n; ++i) {
    CHECK(again.particles[i].state.r == e.particles[i].state.r);
    CHECK(again.particles[i].state.v == e.particles[i].state.v);
  }
  Ensemble other = sample_initial(n, 43);
  CHECK(other.particles[0].state.r != e.particles[0].state.r);
}

TEST_CASE("sample_initial: quiet start strata") {
  const int n = 1024;
  Ensemble e = sample_initial(n, 1, true);
  for (int i = 0; i < n; ++i) {
    CHECK(e.particles[i].state.r ==
          doctest::Approx(-0.75 + 1.5 * (i + 0.5) / n).epsilon(1e-14));
  }
  // v strata cover the Gaussian quantiles without duplication
  double sum_v = 0.0, sum_v2 = 0.0;
  for (const Particle& p : e.particles) {
    sum_v += p.state.v;
    sum_v2 += p.state.v * p.state.v;
  }
  const double v_th = 0.0727518214392;
  CHECK(std::fabs(sum_v / n) < 1e-10);  // quantile strata are symmetric
  CHECK(sum_v2 / n == doctest::Approx(v_th * v_th).epsilon(0.02));
}
