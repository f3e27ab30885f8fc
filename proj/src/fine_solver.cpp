#include "oscpic/fine_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "oscpic/errors.hpp"

namespace oscpic {

void TrajectoryRecord::reset(double start_time, std::size_t n_particles) {
  (void)start_time;
  n_particles_ = n_particles;
  times_.clear();
  states_.clear();
}

void TrajectoryRecord::append(double time, const std::vector<Particle>& particles) {
  if (particles.size() != n_particles_)
    throw std::invalid_argument("TrajectoryRecord::append: particle count mismatch");
  if (!times_.empty() && !(time > times_.back()))
    throw std::invalid_argument("TrajectoryRecord::append: times must increase");
  times_.push_back(time);
  const std::size_t base = states_.size();
  states_.resize(base + n_particles_);
  for (std::size_t i = 0; i < n_particles_; ++i) states_[base + i] = particles[i].state;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Derivative {
  double dr, dv;
};

// Right-hand side for the non-self-consistent cases (zero, cubic, frozen
// grid snapshot).
inline Derivative rhs_given(const PhaseState& y, const CharacteristicOde& ode,
                            const FieldGrid* frozen, std::size_t particle) {
  double e_field = 0.0;
  if (frozen)
    e_field = interp_field(*frozen, y.r, particle);
  else if (ode.field.kind() == FieldKind::cubic)
    e_field = eval_cubic(y.r);
  const double inv_eps = 1.0 / ode.epsilon;
  return {ode.time_sign * y.v * inv_eps,
          ode.time_sign * (-y.r * inv_eps + e_field)};
}

void substep_given_field(Ensemble& ensemble, double h, const CharacteristicOde& ode,
                         ThreadPool* pool) {
  const FieldGrid* frozen =
      (ode.field.kind() == FieldKind::poisson) ? &ode.field.frozen() : nullptr;
  std::vector<Particle>& particles = ensemble.particles;
  std::exception_ptr error;
  std::mutex error_mutex;
  ThreadPool::for_range(pool, particles.size(), [&](std::size_t begin, std::size_t end, int) {
    try {
      for (std::size_t i = begin; i < end; ++i) {
        PhaseState& y = particles[i].state;
        const Derivative k1 = rhs_given(y, ode, frozen, i);
        const Derivative k2 = rhs_given({y.r + 0.5 * h * k1.dr, y.v + 0.5 * h * k1.dv},
                                        ode, frozen, i);
        const Derivative k3 = rhs_given({y.r + 0.5 * h * k2.dr, y.v + 0.5 * h * k2.dv},
                                        ode, frozen, i);
        const Derivative k4 = rhs_given({y.r + h * k3.dr, y.v + h * k3.dv}, ode, frozen, i);
        y.r += h / 6.0 * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr);
        y.v += h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
        if (!y.finite()) throw IntegrationFailure(i, ensemble.time);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  });
  if (error) std::rethrow_exception(error);
}

void substep_poisson(Ensemble& ensemble, double h, const CharacteristicOde& ode,
                     ThreadPool* pool, FineStats* stats) {
  const std::size_t n = ensemble.size();
  const GridSpec grid = ode.field.grid();
  const double inv_eps = 1.0 / ode.epsilon;

  std::vector<double> weights(n);
  std::vector<PhaseState> stage(n);
  for (std::size_t i = 0; i < n; ++i) {
    stage[i] = ensemble.particles[i].state;
    weights[i] = ensemble.particles[i].weight;
  }

  FieldGrid field;
  auto refresh_field = [&](const std::vector<PhaseState>& states) {
    const auto t0 = stats ? Clock::now() : Clock::time_point{};
    field = solve_poisson(deposit(states, weights, grid, ode.deposition, pool));
    if (stats) stats->field_seconds += seconds_since(t0);
  };

  std::vector<Derivative> k1(n), k2(n), k3(n), k4(n);
  std::exception_ptr error;
  std::mutex error_mutex;
  auto eval_stage = [&](const std::vector<PhaseState>& states, std::vector<Derivative>& k,
                        bool reuse_field) {
    if (!reuse_field) refresh_field(states);
    ThreadPool::for_range(pool, n, [&](std::size_t begin, std::size_t end, int) {
      try {
        for (std::size_t i = begin; i < end; ++i) {
          const double e_field = interp_field(field, states[i].r, i);
          k[i] = {ode.time_sign * states[i].v * inv_eps,
                  ode.time_sign * (-states[i].r * inv_eps + e_field)};
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
    if (error) std::rethrow_exception(error);
  };

  eval_stage(stage, k1, false);
  std::vector<PhaseState> stage2(n);
  for (std::size_t i = 0; i < n; ++i)
    stage2[i] = {stage[i].r + 0.5 * h * k1[i].dr, stage[i].v + 0.5 * h * k1[i].dv};
  eval_stage(stage2, k2, ode.frozen_field);
  for (std::size_t i = 0; i < n; ++i)
    stage2[i] = {stage[i].r + 0.5 * h * k2[i].dr, stage[i].v + 0.5 * h * k2[i].dv};
  eval_stage(stage2, k3, ode.frozen_field);
  for (std::size_t i = 0; i < n; ++i)
    stage2[i] = {stage[i].r + h * k3[i].dr, stage[i].v + h * k3[i].dv};
  eval_stage(stage2, k4, ode.frozen_field);

  for (std::size_t i = 0; i < n; ++i) {
    PhaseState& y = ensemble.particles[i].state;
    y.r += h / 6.0 * (k1[i].dr + 2.0 * k2[i].dr + 2.0 * k3[i].dr + k4[i].dr);
    y.v += h / 6.0 * (k1[i].dv + 2.0 * k2[i].dv + 2.0 * k3[i].dv + k4[i].dv);
    if (!y.finite()) throw IntegrationFailure(i, ensemble.time);
  }
}

}  // namespace

void rk4_substep(Ensemble& ensemble, double h, const CharacteristicOde& ode,
                 ThreadPool* pool, FineStats* stats) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("rk4_substep: h must be finite and > 0");
  const auto t0 = stats ? Clock::now() : Clock::time_point{};
  if (ode.field.self_consistent() && !ode.field.has_frozen())
    substep_poisson(ensemble, h, ode, pool, stats);
  else
    substep_given_field(ensemble, h, ode, pool);
  if (stats) {
    stats->particle_substeps += static_cast<long long>(ensemble.size());
    stats->fine_seconds += seconds_since(t0);
  }
}

void advance_fine(Ensemble& ensemble, double horizon, double h,
                  const CharacteristicOde& ode, TrajectoryRecord* record,
                  ThreadPool* pool, FineStats* stats) {
  if (horizon < 0.0 || !std::isfinite(horizon))
    throw std::invalid_argument("advance_fine: horizon must be finite and >= 0");
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("advance_fine: h must be finite and > 0");

  const double t0 = ensemble.time;
  if (record) {
    if (record->empty()) {
      record->reset(t0, ensemble.size());
      record->append(t0, ensemble.particles);
    } else if (record->n_particles() != ensemble.size() ||
               std::fabs(record->end_time() - t0) > 1e-9 * std::max(1.0, std::fabs(t0))) {
      throw std::invalid_argument("advance_fine: record does not continue this ensemble");
    }
  }
  if (horizon == 0.0) return;

  const double x = horizon / h;
  long long n_full = static_cast<long long>(std::floor(x + 1e-12));
  double remainder = horizon - static_cast<double>(n_full) * h;
  if (remainder <= 1e-12 * h) remainder = 0.0;

  for (long long k = 0; k < n_full; ++k) {
    rk4_substep(ensemble, h, ode, pool, stats);
    ensemble.time = t0 + static_cast<double>(k + 1) * h;
    if (record) record->append(ensemble.time, ensemble.particles);
  }
  if (remainder > 0.0) {
    rk4_substep(ensemble, remainder, ode, pool, stats);
    ensemble.time = t0 + horizon;
    if (record) record->append(ensemble.time, ensemble.particles);
  } else {
    ensemble.time = t0 + horizon;
  }
}

PeriodEstimate detect_period(const TrajectoryRecord& record, std::size_t particle,
                             double min_separation) {
  const std::size_t n = record.n_samples();
  double crossings[3];
  int found = 0;
  for (std::size_t k = 0; k + 1 < n && found < 3; ++k) {
    const double a = record.state(particle, k).v;
    const double b = record.state(particle, k + 1).v;
    const double ta = record.time(k);
    const double tb = record.time(k + 1);
    double crossing;
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0))
      crossing = ta + (tb - ta) * a / (a - b);
    else if (b == 0.0 && a != 0.0)
      crossing = tb;
    else
      continue;
    if (found > 0 && crossing - crossings[found - 1] < min_separation) continue;
    crossings[found++] = crossing;
  }
  if (found < 3) throw NoPeriodDetected(particle);
  return PeriodEstimate{crossings[2] - crossings[0], crossings[0], crossings[2]};
}

PeriodEstimate detect_tour(const TrajectoryRecord& record, std::size_t particle,
                           double epsilon) {
  const double tour_scale = kTwoPi * epsilon;
  const PeriodEstimate estimate = detect_period(record, particle, 0.25 * tour_scale);
  // Genuine tours sit within O(eps) of 2*pi*eps (the beam regimes here stay
  // above 0.98x); breathing-core artifacts land at ~0.6x and below.
  if (estimate.period < 0.8 * tour_scale || estimate.period > 1.3 * tour_scale)
    throw NoPeriodDetected(particle);
  return estimate;
}

PhaseState interpolate_state(const TrajectoryRecord& record, std::size_t particle,
                             double t_star) {
  const std::size_t n = record.n_samples();
  if (n < 3) throw std::out_of_range("interpolate_state: record too short");
  const std::vector<double>& times = record.times();
  const double slack = 1e-9 * (times.back() - times.front());
  if (t_star < times.front() - slack || t_star > times.back() + slack)
    throw std::out_of_range("interpolate_state: t_star outside the recorded window");
  const double t = std::clamp(t_star, times.front(), times.back());

  // bracketing interval [k, k+1]
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(times.begin(), times.end(), t) - times.begin());
  k = (k == 0) ? 0 : k - 1;
  if (k > n - 2) k = n - 2;

  // stencil: the bracketing pair plus its nearer neighbor
  std::size_t lo;
  if (k == 0)
    lo = 0;
  else if (k + 2 >= n)
    lo = n - 3;
  else
    lo = (t - times[k] <= times[k + 1] - t) ? k - 1 : k;

  const double t0 = times[lo], t1 = times[lo + 1], t2 = times[lo + 2];
  const double w0 = (t - t1) * (t - t2) / ((t0 - t1) * (t0 - t2));
  const double w1 = (t - t0) * (t - t2) / ((t1 - t0) * (t1 - t2));
  const double w2 = (t - t0) * (t - t1) / ((t2 - t0) * (t2 - t1));
  const PhaseState& y0 = record.state(particle, lo);
  const PhaseState& y1 = record.state(particle, lo + 1);
  const PhaseState& y2 = record.state(particle, lo + 2);
  return PhaseState{w0 * y0.r + w1 * y1.r + w2 * y2.r,
                    w0 * y0.v + w1 * y1.v + w2 * y2.v};
}

}  // namespace oscpic
