#pragma once

namespace oscpic {

/// Initial condition of the undamped, undriven Duffing oscillator
/// R'' + R/eps^2 + R^3/eps = 0, R(0) = r0, R'(0) = v0/eps. (r0, v0) are the
/// characteristic phase-space coordinates, so v0 is eps times the oscillator
/// velocity R'.
struct DuffingIc {
  double r0 = 0.0;
  double v0 = 0.0;
  double epsilon = 0.0;
};

/// Conserved quantities of one orbit. The amplitude b is the positive
/// R-axis crossing of the orbit; alpha = b^2 * eps / 2 is the hard-spring
/// perturbation parameter of the period integral.
struct OrbitInvariants {
  double hamiltonian = 0.0;
  double amplitude = 0.0;
  double alpha = 0.0;
};

/// Conserved energy in characteristic coordinates:
///   H(r, v) = (r^2 + v^2) / (2 eps^2) + r^4 / (4 eps),
/// the oscillator Hamiltonian (R^2 + eps^2 R'^2)/(2 eps^2) + R^4/(4 eps)
/// evaluated at R' = v/eps.
double hamiltonian(const DuffingIc& ic);

/// Positive R-axis crossing of the orbit through (r0, v0). Evaluated in a
/// cancellation-safe form: the textbook expression
///   b = sqrt((sqrt(1 + 2 eps (r0^2+v0^2) + eps^2 r0^4) - 1) / eps)
/// subtracts 1 from 1 + O(eps) and loses ~8 digits at eps = 1e-4, so the
/// inner difference is rewritten with the conjugate. Throws on the (0,0)
/// degenerate orbit.
double amplitude_b(const DuffingIc& ic);

OrbitInvariants orbit_invariants(const DuffingIc& ic);

/// Exact period by quadrature of
///   T = 4 eps * int_0^1 dR / sqrt(1 - R^2 + alpha (1 - R^4)),
/// after the substitution R = sin(theta) which removes the endpoint
/// singularity:
///   T = 4 eps * int_0^{pi/2} dtheta / sqrt(1 + alpha (1 + sin^2 theta)).
/// Composite 16-point Gauss-Legendre on 8 equal panels; the transformed
/// integrand is analytic, so the rule is far below 1e-12 relative error for
/// every alpha this model produces.
double period_quadrature(const DuffingIc& ic);

/// Third-order expansion of the period in eps:
///   T = 2 pi eps - (3 pi / 4) (r0^2 + v0^2) eps^2
///       + ((105 pi / 128) (r0^2 + v0^2)^2 - (3 pi / 8) r0^4) eps^3.
double period_taylor(const DuffingIc& ic);

}  // namespace oscpic
