#include "oscpic/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oscpic/errors.hpp"
#include "oscpic/fields.hpp"

namespace oscpic {

CloudError cloud_error(const Ensemble& a, const Ensemble& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cloud_error: particle counts differ");
  if (a.size() == 0) return {};
  double sum_sq = 0.0;
  double max_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dr = a.particles[i].state.r - b.particles[i].state.r;
    const double dv = a.particles[i].state.v - b.particles[i].state.v;
    const double d2 = dr * dr + dv * dv;
    sum_sq += d2;
    max_sq = std::max(max_sq, d2);
  }
  return CloudError{std::sqrt(sum_sq / static_cast<double>(a.size())), std::sqrt(max_sq)};
}

namespace {

struct DetectedPeriods {
  std::vector<double> period;
  std::vector<bool> detected;
};

DetectedPeriods detect_all(const Ensemble& ensemble, double h, const CharacteristicOde& ode,
                           ThreadPool* pool) {
  const double base = 1.6 * kTwoPi * ode.epsilon;
  Ensemble scratch = ensemble;
  TrajectoryRecord record;
  advance_fine(scratch, base, h, ode, &record, pool);
  bool doubled = false;
  DetectedPeriods out;
  out.period.assign(ensemble.size(), 0.0);
  out.detected.assign(ensemble.size(), false);
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    for (;;) {
      try {
        out.period[i] = detect_tour(record, i, ode.epsilon).period;
        out.detected[i] = true;
        break;
      } catch (const NoPeriodDetected&) {
        if (doubled) break;
        advance_fine(scratch, base, h, ode, &record, pool);
        doubled = true;
      }
    }
  }
  return out;
}

std::vector<std::size_t> histogram(const std::vector<double>& values,
                                   const std::vector<bool>& mask, int bins, double& low,
                                   double& width) {
  low = 0.0;
  width = 0.0;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mask.empty() && !mask[i]) continue;
    if (!any || values[i] < lo) lo = any ? std::min(lo, values[i]) : values[i];
    hi = any ? std::max(hi, values[i]) : values[i];
    any = true;
  }
  if (!any) return counts;
  low = lo;
  width = (hi > lo) ? (hi - lo) / bins : 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mask.empty() && !mask[i]) continue;
    auto b = static_cast<std::size_t>((values[i] - lo) / width);
    if (b >= counts.size()) b = counts.size() - 1;
    ++counts[b];
  }
  return counts;
}

}  // namespace

DistributionReport distribution_report(const Ensemble& current, const Ensemble& initial,
                                       double h, const CharacteristicOde& ode,
                                       int histogram_bins, ThreadPool* pool) {
  if (current.size() != initial.size())
    throw std::invalid_argument("distribution_report: particle counts differ");
  const DetectedPeriods now = detect_all(current, h, ode, pool);
  const DetectedPeriods before = detect_all(initial, h, ode, pool);

  DistributionReport report;
  report.entries.resize(current.size());
  std::vector<double> moduli(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    DistributionEntry& e = report.entries[i];
    e.initial_period = before.period[i];
    e.initial_detected = before.detected[i];
    e.current_period = now.period[i];
    e.current_detected = now.detected[i];
    e.initial_modulus = initial.particles[i].state.modulus();
    e.current_modulus = current.particles[i].state.modulus();
    moduli[i] = e.current_modulus;
  }
  report.period_histogram = histogram(now.period, now.detected, histogram_bins,
                                      report.period_bin_low, report.period_bin_width);
  report.modulus_histogram = histogram(moduli, {}, histogram_bins, report.modulus_bin_low,
                                       report.modulus_bin_width);
  return report;
}

std::optional<double> energy_drift(const TrajectoryRecord& record, std::size_t particle,
                                   double epsilon, bool cubic_field) {
  if (record.n_samples() == 0)
    throw std::invalid_argument("energy_drift: empty record");
  const double e2 = 2.0 * epsilon * epsilon;
  auto energy = [&](const PhaseState& y) {
    const double r2 = y.r * y.r;
    double value = (r2 + y.v * y.v) / e2;
    if (cubic_field) value += r2 * r2 / (4.0 * epsilon);
    return value;
  };
  const double h0 = energy(record.state(particle, 0));
  if (h0 == 0.0) return std::nullopt;
  double worst = 0.0;
  for (std::size_t k = 1; k < record.n_samples(); ++k)
    worst = std::max(worst, std::fabs(energy(record.state(particle, k)) - h0));
  return worst / h0;
}

double approximation_residual(std::size_t particle, const Ensemble& at_tn,
                              const MacroStepPlan& plan, double h,
                              const CharacteristicOde& ode) {
  if (particle >= at_tn.size() || plan.entries.size() != at_tn.size())
    throw std::invalid_argument("approximation_residual: bad particle index or plan");
  const ParticlePlan& entry = plan.entries[particle];
  const double offset = entry.tours.offset;
  const double period = entry.fallback ? 0.0 : entry.period.period;
  const double n_tours = static_cast<double>(entry.tours.n_tours);

  CharacteristicOde probe_ode = ode;
  if (ode.field.self_consistent() && !ode.field.has_frozen()) {
    // freeze the full ensemble's field at t_n; the lone probe cannot carry
    // the self-consistent coupling
    probe_ode.field = FieldModel::frozen_grid(
        solve_poisson(deposit(at_tn, ode.field.grid(), ode.deposition)));
  }

  Ensemble probe;
  probe.time = at_tn.time;
  probe.particles.push_back(at_tn.particles[particle]);

  // short pass for the extrapolation inputs
  Ensemble short_run = probe;
  TrajectoryRecord record;
  const double short_horizon =
      std::max(h, std::ceil((offset + period) / h - 1e-12) * h);
  advance_fine(short_run, short_horizon, h, probe_ode, &record);
  const PhaseState ya = interpolate_state(record, 0, at_tn.time + offset);
  PhaseState extrapolated = ya;
  if (n_tours > 0.0) {
    const PhaseState yb = interpolate_state(record, 0, at_tn.time + offset + period);
    extrapolated.r = ya.r + n_tours * (yb.r - ya.r);
    extrapolated.v = ya.v + n_tours * (yb.v - ya.v);
  }

  // direct fine integration across the whole span
  Ensemble direct = probe;
  advance_fine(direct, offset + n_tours * period, h, probe_ode);
  const PhaseState yd = direct.particles[0].state;

  return std::hypot(yd.r - extrapolated.r, yd.v - extrapolated.v);
}

}  // namespace oscpic
