#include "oscpic/duffing.hpp"

#include <cmath>
#include <stdexcept>

#include "oscpic/core.hpp"

namespace oscpic {

namespace {

void check_epsilon(const DuffingIc& ic) {
  if (!(ic.epsilon > 0.0) || !std::isfinite(ic.epsilon))
    throw std::invalid_argument("duffing: epsilon must be finite and > 0");
}

void check_orbit(const DuffingIc& ic) {
  check_epsilon(ic);
  if (ic.r0 == 0.0 && ic.v0 == 0.0)
    throw std::invalid_argument("duffing: degenerate orbit at the origin");
}

// Nodes and weights of 16-point Gauss-Legendre on [-1, 1] (upper half;
// the rule is symmetric).
constexpr int kGlPoints = 16;
constexpr double kGlNode[kGlPoints / 2] = {
    0.0950125098376374402, 0.2816035507792589132, 0.4580167776572273863,
    0.6178762444026437484, 0.7554044083550030339, 0.8656312023878317439,
    0.9445750230732325761, 0.9894009349916499326};
constexpr double kGlWeight[kGlPoints / 2] = {
    0.1894506104550684963, 0.1826034150449235889, 0.1691565193950025382,
    0.1495959888165767320, 0.1246289712555338720, 0.0951585116824927848,
    0.0622535239386478929, 0.0271524594117540949};
constexpr int kPanels = 8;

}  // namespace

double hamiltonian(const DuffingIc& ic) {
  check_epsilon(ic);
  const double e = ic.epsilon;
  const double r2 = ic.r0 * ic.r0;
  return (r2 + ic.v0 * ic.v0) / (2.0 * e * e) + r2 * r2 / (4.0 * e);
}

double amplitude_b(const DuffingIc& ic) {
  check_orbit(ic);
  const double e = ic.epsilon;
  const double m = ic.r0 * ic.r0 + ic.v0 * ic.v0;
  const double r4 = ic.r0 * ic.r0 * ic.r0 * ic.r0;
  const double u = 2.0 * e * m + e * e * r4;
  // (sqrt(1+u) - 1)/eps rewritten as (2m + eps r0^4)/(sqrt(1+u) + 1)
  const double b2 = (2.0 * m + e * r4) / (std::sqrt(1.0 + u) + 1.0);
  return std::sqrt(b2);
}

OrbitInvariants orbit_invariants(const DuffingIc& ic) {
  const double b = amplitude_b(ic);
  return OrbitInvariants{hamiltonian(ic), b, b * b * ic.epsilon / 2.0};
}

double period_quadrature(const DuffingIc& ic) {
  const double alpha = orbit_invariants(ic).alpha;
  const double half_pi = kTwoPi / 4.0;
  const double panel = half_pi / kPanels;
  double sum = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = (p + 0.5) * panel;
    const double half = 0.5 * panel;
    for (int q = 0; q < kGlPoints / 2; ++q) {
      for (int sign = -1; sign <= 1; sign += 2) {
        const double theta = mid + sign * half * kGlNode[q];
        const double s = std::sin(theta);
        sum += kGlWeight[q] / std::sqrt(1.0 + alpha * (1.0 + s * s));
      }
    }
  }
  return 4.0 * ic.epsilon * sum * half_pi / (2.0 * kPanels);
}

double period_taylor(const DuffingIc& ic) {
  check_epsilon(ic);
  const double pi = kTwoPi / 2.0;
  const double e = ic.epsilon;
  const double m = ic.r0 * ic.r0 + ic.v0 * ic.v0;
  const double r4 = ic.r0 * ic.r0 * ic.r0 * ic.r0;
  return kTwoPi * e - (3.0 * pi / 4.0) * m * e * e +
         ((105.0 * pi / 128.0) * m * m - (3.0 * pi / 8.0) * r4) * e * e * e;
}

}  // namespace oscpic
