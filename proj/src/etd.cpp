#include "oscpic/etd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "oscpic/errors.hpp"
#include "oscpic/sampling.hpp"

namespace oscpic {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Whole number of substeps covering `horizon` from above, so recorded
// samples stay uniformly spaced.
double round_up_to_substeps(double horizon, double h) {
  const double n = std::ceil(horizon / h - 1e-12);
  return std::max(1.0, n) * h;
}

}  // namespace

double mean_period(const std::vector<PeriodEstimate>& periods) {
  if (periods.empty()) throw std::invalid_argument("mean_period: empty list");
  double sum = 0.0;
  for (const PeriodEstimate& p : periods) sum += p.period;
  return sum / static_cast<double>(periods.size());
}

MacroStepPlan plan_macro_step(const Ensemble& ensemble, double dt, double h,
                              const CharacteristicOde& ode, double prev_max_period,
                              ThreadPool* pool, FineStats* stats) {
  if (!(dt > 0.0)) throw std::invalid_argument("plan_macro_step: dt must be > 0");
  const std::size_t n = ensemble.size();
  const double base = prev_max_period > 0.0 ? prev_max_period : kTwoPi * ode.epsilon;
  const double horizon = round_up_to_substeps(1.6 * base, h);

  Ensemble scratch = ensemble;
  TrajectoryRecord record;
  advance_fine(scratch, horizon, h, ode, &record, pool, stats);

  MacroStepPlan plan;
  plan.dt = dt;
  plan.entries.resize(n);
  std::vector<std::size_t> undetected;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      plan.entries[i].period = detect_tour(record, i, ode.epsilon);
    } catch (const NoPeriodDetected&) {
      undetected.push_back(i);
    }
  }
  if (!undetected.empty()) {
    // one horizon doubling before giving up on a particle
    advance_fine(scratch, horizon, h, ode, &record, pool, stats);
    for (std::size_t i : undetected) {
      try {
        plan.entries[i].period = detect_tour(record, i, ode.epsilon);
      } catch (const NoPeriodDetected&) {
        plan.entries[i].fallback = true;
        plan.fallback_indices.push_back(i);
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    ParticlePlan& entry = plan.entries[i];
    if (entry.fallback) {
      entry.tours = TourDecomposition{0, dt, 0.0};
      plan.shared_horizon = std::max(plan.shared_horizon, dt);
    } else {
      entry.tours = decompose_step(dt, entry.period.period);
      plan.shared_horizon =
          std::max(plan.shared_horizon, entry.tours.offset + entry.period.period);
      plan.max_period = std::max(plan.max_period, entry.period.period);
    }
  }
  return plan;
}

void classic_etd_step(Ensemble& ensemble, double dt, double fast_time, double h,
                      const CharacteristicOde& ode, ThreadPool* pool, FineStats* stats,
                      double* extrapolation_seconds) {
  if (!(fast_time > 0.0))
    throw std::invalid_argument("classic_etd_step: fast_time must be > 0");
  const TourDecomposition split = decompose_step(dt, fast_time);
  const double t_n = ensemble.time;

  std::vector<PhaseState> start(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) start[i] = ensemble.particles[i].state;

  advance_fine(ensemble, fast_time, h, ode, nullptr, pool, stats);

  if (split.n_tours != 1) {  // N = 1 is the identity rearrangement; keep it exact
    const auto t0 = extrapolation_seconds ? Clock::now() : Clock::time_point{};
    const double n_tours = static_cast<double>(split.n_tours);
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
      PhaseState& y = ensemble.particles[i].state;
      y.r = start[i].r + n_tours * (y.r - start[i].r);
      y.v = start[i].v + n_tours * (y.v - start[i].v);
    }
    if (extrapolation_seconds) *extrapolation_seconds += seconds_since(t0);
  }

  if (split.offset > 0.0) advance_fine(ensemble, split.offset, h, ode, nullptr, pool, stats);
  ensemble.time = t_n + dt;
}

void improved_etd_step(Ensemble& ensemble, const MacroStepPlan& plan, double h,
                       const CharacteristicOde& ode, ThreadPool* pool, FineStats* stats,
                       double* extrapolation_seconds) {
  const std::size_t n = ensemble.size();
  if (plan.entries.size() != n)
    throw std::invalid_argument("improved_etd_step: plan does not match the ensemble");
  const double t_n = ensemble.time;
  const double horizon = round_up_to_substeps(plan.shared_horizon, h);

  Ensemble scratch = ensemble;
  TrajectoryRecord record;
  advance_fine(scratch, horizon, h, ode, &record, pool, stats);

  const auto t0 = extrapolation_seconds ? Clock::now() : Clock::time_point{};
  for (std::size_t i = 0; i < n; ++i) {
    const ParticlePlan& entry = plan.entries[i];
    PhaseState& y = ensemble.particles[i].state;
    if (entry.fallback) {
      y = interpolate_state(record, i, t_n + plan.dt);
      continue;
    }
    const PhaseState ya = interpolate_state(record, i, t_n + entry.tours.offset);
    if (entry.tours.n_tours == 0) {
      y = ya;
      continue;
    }
    const PhaseState yb =
        interpolate_state(record, i, t_n + entry.tours.offset + entry.period.period);
    if (entry.tours.n_tours == 1) {
      y = yb;
      continue;
    }
    const double n_tours = static_cast<double>(entry.tours.n_tours);
    y.r = ya.r + n_tours * (yb.r - ya.r);
    y.v = ya.v + n_tours * (yb.v - ya.v);
  }
  if (extrapolation_seconds) *extrapolation_seconds += seconds_since(t0);
  ensemble.time = t_n + plan.dt;
}

SimulationResult run_simulation(const SimConfig& config) {
  config.validate();
  const auto wall0 = Clock::now();
  const double h = config.fine_substep();
  CharacteristicOde ode;
  ode.epsilon = config.epsilon;
  ode.field = FieldModel::from_kind(config.field, GridSpec{config.grid_extent, config.grid_cells});
  ode.deposition = config.deposition;
  ode.frozen_field = config.frozen_field;

  std::unique_ptr<ThreadPool> pool;
  if (config.threads > 1) pool = std::make_unique<ThreadPool>(config.threads);

  SimulationResult result;
  RunStats& stats = result.stats;

  Ensemble ensemble = sample_initial(config.n_particles, config.rng_seed, config.quiet_start);
  result.snapshots.push_back(ensemble);

  if (config.scheme == Scheme::modified_etd) {
    // fast time of the modified scheme: ensemble mean of the first-tour times,
    // measured once at t = 0
    const MacroStepPlan initial =
        plan_macro_step(ensemble, config.macro_step, h, ode, 0.0, pool.get(), &stats.fine);
    std::vector<PeriodEstimate> detected;
    for (const ParticlePlan& entry : initial.entries)
      if (!entry.fallback) detected.push_back(entry.period);
    if (detected.empty())
      throw std::runtime_error("modified ETD: no particle has a detectable period");
    stats.mean_period_used = mean_period(detected);
  }

  double prev_max_period = 0.0;
  while (true) {
    const double remaining = config.final_time - ensemble.time;
    if (remaining <= 1e-12 * std::max(1.0, config.final_time)) break;
    const double dt = std::min(config.macro_step, remaining);

    switch (config.scheme) {
      case Scheme::reference:
        advance_fine(ensemble, dt, h, ode, nullptr, pool.get(), &stats.fine);
        break;
      case Scheme::classic_etd:
        classic_etd_step(ensemble, dt, kTwoPi * config.epsilon, h, ode, pool.get(),
                         &stats.fine, &stats.extrapolation_seconds);
        break;
      case Scheme::modified_etd:
        classic_etd_step(ensemble, dt, stats.mean_period_used, h, ode, pool.get(),
                         &stats.fine, &stats.extrapolation_seconds);
        break;
      case Scheme::improved_etd: {
        const MacroStepPlan plan = plan_macro_step(ensemble, dt, h, ode, prev_max_period,
                                                   pool.get(), &stats.fine);
        improved_etd_step(ensemble, plan, h, ode, pool.get(), &stats.fine,
                          &stats.extrapolation_seconds);
        if (plan.max_period > 0.0) prev_max_period = plan.max_period;
        break;
      }
    }
    ++stats.macro_steps;
    result.snapshots.push_back(ensemble);
  }

  stats.wall_seconds = seconds_since(wall0);
  return result;
}

}  // namespace oscpic
