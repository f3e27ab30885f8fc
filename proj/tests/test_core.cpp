#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oscpic/core.hpp"
#include "oscpic/sampling.hpp"

using namespace oscpic;

TEST_CASE("decompose_step: frozen examples") {
  // dt = 0.5 against one tour at eps = 0.01
  auto d = decompose_step(0.5, kTwoPi * 0.01);
  CHECK(d.n_tours == 7);
  CHECK(d.offset == doctest::Approx(0.060177028497428947).epsilon(1e-12));

  // exact multiple snaps to a whole tour
  const double period = kTwoPi * 0.01;
  d = decompose_step(period, period);
  CHECK(d.n_tours == 1);
  CHECK(d.offset == 0.0);
  d = decompose_step(7.0 * period, period);
  CHECK(d.n_tours == 7);
  CHECK(d.offset == 0.0);

  // eps = 1e-4: about 800 tours per half unit of time
  d = decompose_step(0.5, kTwoPi * 1e-4);
  CHECK(d.n_tours == 795);
  CHECK(d.offset == doctest::Approx(4.8676807922287508e-4).epsilon(1e-9));
}

TEST_CASE("decompose_step: recompose and domain errors") {
  for (int k = 0; k < 200; ++k) {
    const double dt = 0.05 + 0.6 * uniform01(42, 2 * k);
    const double period = 1e-3 * (0.5 + uniform01(42, 2 * k + 1));
    const auto d = decompose_step(dt, period);
    CHECK(d.offset >= 0.0);
    CHECK(d.offset < period);
    const double recomposed = static_cast<double>(d.n_tours) * period + d.offset;
    CHECK(recomposed == doctest::Approx(dt).epsilon(1e-12));
  }
  CHECK_THROWS_AS(decompose_step(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(decompose_step(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(decompose_step(1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(decompose_step(std::nan(""), 1.0), std::invalid_argument);
}

TEST_CASE("decompose_step: dt below one period gives N = 0") {
  const auto d = decompose_step(0.3 * kTwoPi * 0.01, kTwoPi * 0.01);
  CHECK(d.n_tours == 0);
  CHECK(d.offset == doctest::Approx(0.3 * kTwoPi * 0.01).epsilon(1e-14));
}

TEST_CASE("rotation_apply: quarter and full turns") {
  const PhaseState s{0.4, -0.2};
  const double period = kTwoPi * 0.01;

  auto id = rotation_apply(0.0, period, s);
  CHECK(id.r == s.r);
  CHECK(id.v == s.v);

  auto quarter = rotation_apply(period / 4.0, period, s);
  CHECK(quarter.r == doctest::Approx(s.v).epsilon(1e-12));
  CHECK(quarter.v == doctest::Approx(-s.r).epsilon(1e-12));

  auto full = rotation_apply(period, period, s);
  CHECK(full.r == doctest::Approx(s.r).epsilon(1e-12));
  CHECK(full.v == doctest::Approx(s.v).epsilon(1e-12));
}

TEST_CASE("rotation_apply: norm preservation and group property") {
  const double period = 0.03;
  for (int k = 0; k < 100; ++k) {
    const PhaseState s{2.0 * uniform01(7, 3 * k) - 1.0, 2.0 * uniform01(7, 3 * k + 1) - 1.0};
    const double tau1 = 0.2 * (uniform01(7, 3 * k + 2) - 0.5);
    const double tau2 = 0.11 * k / 100.0;

    const auto rotated = rotation_apply(tau1, period, s);
    CHECK(rotated.modulus() == doctest::Approx(s.modulus()).epsilon(1e-12));

    const auto once = rotation_apply(tau1 + tau2, period, s);
    const auto twice = rotation_apply(tau1, period, rotation_apply(tau2, period, s));
    CHECK(once.r == doctest::Approx(twice.r).epsilon(1e-12));
    CHECK(once.v == doctest::Approx(twice.v).epsilon(1e-12));
  }
}

TEST_CASE("SimConfig validation") {
  SimConfig config;
  config.epsilon = 0.01;
  CHECK(config.validate().empty());
  CHECK(config.fine_substep() == doctest::Approx(kTwoPi * 0.01 / 100.0));

  config.macro_step = kTwoPi * 0.01;  // below two tours
  CHECK(config.validate().size() == 1);

  SimConfig bad = config;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = config;
  bad.fine_substep_divisor = 3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = config;
  bad.n_particles = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = config;
  bad.grid_cells = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("total weight is exact under copies") {
  Ensemble e;
  e.particles.resize(100, Particle{{0.1, 0.2}, 0.25});
  CHECK(e.total_weight() == 25.0);
  Ensemble copy = e;
  CHECK(copy.total_weight() == e.total_weight());
}
