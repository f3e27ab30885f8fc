#pragma once

#include <cstdint>

#include "oscpic/core.hpp"

namespace oscpic {

/// Parameters of the initial beam distribution: r uniform on the support,
/// v centered Gaussian with standard deviation v_th. The amplitude n0 = 2/3
/// is fixed by normalization: with equal weights summing to 1, the integral
/// of the density over its 1.5-wide support must also be 1.
struct InitialCondition {
  double v_th = 0.0727518214392;
  double r_min = -0.75;
  double r_max = 0.75;
  double n0 = 2.0 / 3.0;
};

/// Counter-based uniform draw on [0, 1): splitmix64 output scaled by 2^-53.
/// Pure function of (seed, counter), bit-stable across platforms and thread
/// counts.
double uniform01(std::uint64_t seed, std::uint64_t counter);

/// Same stream mapped into the open interval (0, 1), safe to feed to the
/// normal quantile.
double uniform01_open(std::uint64_t seed, std::uint64_t counter);

/// Inverse CDF of the standard normal (Wichura's AS241 rational
/// approximation, accurate to ~1e-15). p must be in (0, 1).
double normal_quantile(double p);

/// Builds the initial macroparticle ensemble: n equal-weight particles with
/// r uniform on [-0.75, 0.75] and v Gaussian (sigma = v_th), deterministic
/// for a given seed. quiet_start replaces the pseudo-random draws with
/// midpoint r strata crossed with Gaussian quantile v strata (decorrelated
/// by a fixed coprime index permutation) for low-noise Poisson runs.
Ensemble sample_initial(int n_particles, std::uint64_t seed, bool quiet_start = false,
                        const InitialCondition& ic = {});

}  // namespace oscpic
