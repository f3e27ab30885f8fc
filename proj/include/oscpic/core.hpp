#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oscpic {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class Scheme { reference, classic_etd, modified_etd, improved_etd };
enum class FieldKind { zero, cubic, poisson };
enum class Deposition { cloud_in_cell, nearest_grid_point };

const char* to_string(Scheme s);
const char* to_string(FieldKind f);
Scheme scheme_from_string(const std::string& name);
FieldKind field_from_string(const std::string& name);

/// One particle's (position, velocity) point in phase space.
struct PhaseState {
  double r = 0.0;
  double v = 0.0;

  bool finite() const;
  /// Euclidean modulus sqrt(r^2 + v^2).
  double modulus() const;
};

struct Particle {
  PhaseState state;
  double weight = 1.0;
};

/// The macroparticle cloud. Particle order is fixed for the whole run:
/// index i is the particle's identity, used by matched-pair error metrics.
/// Weights are never mutated after initialization.
struct Ensemble {
  std::vector<Particle> particles;
  double time = 0.0;

  std::size_t size() const { return particles.size(); }
  double total_weight() const;
};

struct SimConfig {
  double epsilon = 0.0;            // no default; must be set explicitly
  double macro_step = 0.5;         // Delta t
  double final_time = 10.0;
  int n_particles = 20000;
  int fine_substep_divisor = 100;  // substeps per 2*pi*epsilon
  std::uint64_t rng_seed = 1;
  Scheme scheme = Scheme::improved_etd;
  FieldKind field = FieldKind::cubic;
  int grid_cells = 256;
  double grid_extent = 2.0;        // field grid is [-extent, extent]
  int threads = 1;
  bool quiet_start = false;
  bool frozen_field = false;       // field refreshed once per substep, not per RK4 stage
  Deposition deposition = Deposition::cloud_in_cell;

  /// Fine substep h = 2*pi*epsilon / fine_substep_divisor.
  double fine_substep() const;

  /// Throws std::invalid_argument on a violated invariant; returns
  /// human-readable warnings for legal-but-suspicious settings
  /// (e.g. macro_step < 2 * 2*pi*epsilon).
  std::vector<std::string> validate() const;
};

/// Splitting of a macro step against a period: dt = n_tours * period + offset,
/// 0 <= offset < period.
struct TourDecomposition {
  long long n_tours = 0;
  double offset = 0.0;
  double period = 0.0;
};

/// Splits dt into whole tours of `period` plus an offset. floor(dt/period)
/// with a snap guard: when the remainder lands within 2 roundoff units of
/// period, the tour count is incremented and the offset snapped to zero,
/// so N never jitters by one between runs.
TourDecomposition decompose_step(double dt, double period);

/// Applies the phase-space rotation matrix r(tau) with angle 2*pi*tau/period:
/// rows (cos, sin) and (-sin, cos). Norm preserving.
PhaseState rotation_apply(double tau, double period, const PhaseState& s);

}  // namespace oscpic
