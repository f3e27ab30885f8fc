#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "oscpic/core.hpp"
#include "oscpic/etd.hpp"
#include "oscpic/fine_solver.hpp"

namespace oscpic {

/// Matched-particle phase-space distance between two clouds with the same
/// identities.
struct CloudError {
  double rms = 0.0;
  double max = 0.0;
};

CloudError cloud_error(const Ensemble& a, const Ensemble& b);

struct DistributionEntry {
  double initial_period = 0.0;
  double current_period = 0.0;
  bool initial_detected = false;
  bool current_detected = false;
  double initial_modulus = 0.0;
  double current_modulus = 0.0;
};

/// Per-particle period and modulus paired with their initial values (the
/// scatter data behind the period/modulus distribution figures), plus a
/// fixed-bin histogram of the current values.
struct DistributionReport {
  std::vector<DistributionEntry> entries;
  std::vector<std::size_t> period_histogram;
  std::vector<std::size_t> modulus_histogram;
  double period_bin_low = 0.0, period_bin_width = 0.0;
  double modulus_bin_low = 0.0, modulus_bin_width = 0.0;
};

/// Runs a fresh detection pass over both clouds (scratch copies; neither
/// input is advanced). Undetectable particles are flagged, not fatal.
DistributionReport distribution_report(const Ensemble& current, const Ensemble& initial,
                                       double h, const CharacteristicOde& ode,
                                       int histogram_bins = 32, ThreadPool* pool = nullptr);

/// Max relative Hamiltonian drift along one particle's recorded samples.
/// Zero-field trajectories use the harmonic energy (quartic term dropped).
/// Returns nullopt for a particle starting at zero energy.
std::optional<double> energy_drift(const TrajectoryRecord& record, std::size_t particle,
                                   double epsilon, bool cubic_field);

/// Defect of the one-tour extrapolation for one particle:
///   || y_direct(t_n + o + N T) - [y(t_n+o) + N (y(t_n+o+T) - y(t_n+o))] ||_2
/// with y_direct a full fine integration over o + N T. In the Poisson case
/// both routes run in the field grid frozen at t_n, so the probe isolates
/// the time-extrapolation defect from field evolution.
double approximation_residual(std::size_t particle, const Ensemble& at_tn,
                              const MacroStepPlan& plan, double h,
                              const CharacteristicOde& ode);

}  // namespace oscpic
