#pragma once

#include <cstddef>
#include <vector>

#include "oscpic/core.hpp"
#include "oscpic/fields.hpp"
#include "oscpic/parallel.hpp"

namespace oscpic {

/// The characteristic system R' = V/eps, V' = -R/eps + E(R); the stiff
/// rotation part is implicit in this right-hand side. time_sign = -1
/// integrates the time-reversed system (used by reversibility checks).
struct CharacteristicOde {
  double epsilon = 0.0;
  FieldModel field = FieldModel::zero();
  double time_sign = 1.0;
  Deposition deposition = Deposition::cloud_in_cell;
  bool frozen_field = false;  // Poisson: refresh the field once per substep
};

/// Fine-solver counters and phase timers, accumulated when requested.
struct FineStats {
  long long particle_substeps = 0;
  double fine_seconds = 0.0;
  double field_seconds = 0.0;
};

/// Synchronized sample history of the whole ensemble at fine-substep
/// resolution. Time-major storage so a record can be extended in place when
/// the detection horizon doubles.
class TrajectoryRecord {
 public:
  void reset(double start_time, std::size_t n_particles);
  void append(double time, const std::vector<Particle>& particles);

  bool empty() const { return times_.empty(); }
  std::size_t n_samples() const { return times_.size(); }
  std::size_t n_particles() const { return n_particles_; }
  double start_time() const { return times_.empty() ? 0.0 : times_.front(); }
  double end_time() const { return times_.empty() ? 0.0 : times_.back(); }
  double time(std::size_t k) const { return times_[k]; }
  const std::vector<double>& times() const { return times_; }
  const PhaseState& state(std::size_t particle, std::size_t k) const {
    return states_[k * n_particles_ + particle];
  }

 private:
  std::size_t n_particles_ = 0;
  std::vector<double> times_;
  std::vector<PhaseState> states_;
};

/// Detected tour time of one particle: the interval between the first and
/// third velocity sign change, each refined by linear interpolation of the
/// zero crossing.
struct PeriodEstimate {
  double period = 0.0;
  double first_extremum = 0.0;
  double third_extremum = 0.0;
};

/// One classical RK4 substep of the whole ensemble. In the Poisson case the
/// field is re-deposited and re-solved at each of the four stages from the
/// full ensemble's stage states, so all particles advance in lockstep; with
/// a given field every particle advances independently. Throws
/// IntegrationFailure if any state goes non-finite.
void rk4_substep(Ensemble& ensemble, double h, const CharacteristicOde& ode,
                 ThreadPool* pool = nullptr, FineStats* stats = nullptr);

/// Integrates the ensemble over `horizon` in substeps of h, the last substep
/// shortened so the total is exactly horizon. With `record`, every sample
/// (including the initial state) is appended; a non-empty record is extended,
/// which requires it to end at the ensemble's current time.
void advance_fine(Ensemble& ensemble, double horizon, double h,
                  const CharacteristicOde& ode, TrajectoryRecord* record = nullptr,
                  ThreadPool* pool = nullptr, FineStats* stats = nullptr);

/// Scans one particle's record for velocity sign changes (each marks an
/// extremum of R) and returns the first-to-third-extremum interval. Throws
/// NoPeriodDetected if fewer than three sign changes were recorded.
/// min_separation ignores crossings closer than that to the last accepted
/// one: in the self-consistent case the breathing core field can wiggle a
/// small-amplitude particle's velocity through zero several times per tour,
/// and those sub-tour crossings are not tour extrema. The default keeps the
/// plain scan.
PeriodEstimate detect_period(const TrajectoryRecord& record, std::size_t particle,
                             double min_separation = 0.0);

/// detect_period with the tour policy the schemes rely on: crossings are
/// debounced by a quarter of 2*pi*eps, and a detected tour outside
/// [0.8, 1.3] x 2*pi*eps (the stiff rotation pins the tour scale to within
/// O(eps)) counts as a failed detection. Small-amplitude particles carried
/// by the breathing self-consistent core otherwise report sub-tour artifacts
/// that the extrapolation would amplify N-fold.
PeriodEstimate detect_tour(const TrajectoryRecord& record, std::size_t particle,
                           double epsilon);

/// Quadratic Lagrange interpolation through the three recorded samples
/// nearest t_star (the bracketing pair plus its nearer neighbor), applied
/// componentwise. Throws std::out_of_range when t_star is outside the
/// recorded window.
PhaseState interpolate_state(const TrajectoryRecord& record, std::size_t particle,
                             double t_star);

}  // namespace oscpic
