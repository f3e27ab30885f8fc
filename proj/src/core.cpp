#include "oscpic/core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oscpic {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::reference: return "reference";
    case Scheme::classic_etd: return "classic";
    case Scheme::modified_etd: return "modified";
    case Scheme::improved_etd: return "improved";
  }
  return "?";
}

const char* to_string(FieldKind f) {
  switch (f) {
    case FieldKind::zero: return "zero";
    case FieldKind::cubic: return "cubic";
    case FieldKind::poisson: return "poisson";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "reference") return Scheme::reference;
  if (name == "classic") return Scheme::classic_etd;
  if (name == "modified") return Scheme::modified_etd;
  if (name == "improved") return Scheme::improved_etd;
  throw std::invalid_argument("unknown scheme: " + name);
}

FieldKind field_from_string(const std::string& name) {
  if (name == "zero") return FieldKind::zero;
  if (name == "cubic") return FieldKind::cubic;
  if (name == "poisson") return FieldKind::poisson;
  throw std::invalid_argument("unknown field: " + name);
}

bool PhaseState::finite() const { return std::isfinite(r) && std::isfinite(v); }

double PhaseState::modulus() const { return std::hypot(r, v); }

double Ensemble::total_weight() const {
  double sum = 0.0;
  for (const Particle& p : particles) sum += p.weight;
  return sum;
}

double SimConfig::fine_substep() const { return kTwoPi * epsilon / fine_substep_divisor; }

std::vector<std::string> SimConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("epsilon must be > 0");
  if (!(macro_step > 0.0) || !std::isfinite(macro_step))
    throw std::invalid_argument("macro_step must be > 0");
  if (final_time < 0.0 || !std::isfinite(final_time))
    throw std::invalid_argument("final_time must be >= 0");
  if (n_particles < 1) throw std::invalid_argument("n_particles must be >= 1");
  if (fine_substep_divisor < 4)
    throw std::invalid_argument("fine_substep_divisor must be >= 4");
  if (grid_cells < 2) throw std::invalid_argument("grid_cells must be >= 2");
  if (!(grid_extent > 0.0)) throw std::invalid_argument("grid_extent must be > 0");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");

  std::vector<std::string> warnings;
  if (macro_step < 2.0 * kTwoPi * epsilon)
    warnings.push_back("macro_step is below 2 tours (2*2*pi*epsilon); the ETD schemes "
                       "degenerate toward plain fine integration");
  return warnings;
}

TourDecomposition decompose_step(double dt, double period) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("decompose_step: dt must be finite and > 0");
  if (!(period > 0.0) || !std::isfinite(period))
    throw std::invalid_argument("decompose_step: period must be finite and > 0");

  long long n = static_cast<long long>(std::floor(dt / period));
  double o = dt - static_cast<double>(n) * period;
  // floor instability: o may land just below 0 or at/above period
  if (o < 0.0) {
    n -= 1;
    o = dt - static_cast<double>(n) * period;
  }
  const double snap = 2.0 * std::numeric_limits<double>::epsilon() * period;
  if (period - o <= snap) {
    n += 1;
    o = 0.0;
  }
  return TourDecomposition{n, o, period};
}

PhaseState rotation_apply(double tau, double period, const PhaseState& s) {
  if (!(period > 0.0) || !std::isfinite(period))
    throw std::invalid_argument("rotation_apply: period must be finite and > 0");
  const double theta = kTwoPi * tau / period;
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  return PhaseState{c * s.r + sn * s.v, -sn * s.r + c * s.v};
}

}  // namespace oscpic
