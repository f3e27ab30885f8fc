#include "oscpic/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "oscpic/errors.hpp"

namespace oscpic {

FieldModel FieldModel::frozen_grid(FieldGrid grid) {
  GridSpec spec;
  spec.extent = grid.extent;
  spec.cells = static_cast<int>(grid.values.size()) - 1;
  return FieldModel(FieldKind::poisson, spec,
                    std::make_shared<const FieldGrid>(std::move(grid)));
}

FieldModel FieldModel::from_kind(FieldKind kind, GridSpec grid) {
  switch (kind) {
    case FieldKind::zero: return zero();
    case FieldKind::cubic: return cubic();
    case FieldKind::poisson: return poisson(grid);
  }
  throw std::invalid_argument("bad field kind");
}

namespace {

// Cell index and fractional offset for a position, clamping the r == extent
// edge into the last cell.
inline void locate(double r, double extent, double dr, int cells, std::size_t particle,
                   int& cell, double& frac) {
  if (!(r >= -extent && r <= extent)) throw OutOfDomainError(particle, r, extent);
  double x = (r + extent) / dr;
  cell = static_cast<int>(x);
  if (cell >= cells) cell = cells - 1;
  frac = x - cell;
}

}  // namespace

ChargeDensityGrid deposit(const std::vector<PhaseState>& states,
                          const std::vector<double>& weights, GridSpec grid,
                          Deposition mode, ThreadPool* pool) {
  if (states.size() != weights.size())
    throw std::invalid_argument("deposit: states/weights size mismatch");
  const double dr = grid.spacing();
  const int nodes = grid.nodes();

  ChargeDensityGrid rho;
  rho.extent = grid.extent;
  rho.spacing = dr;
  rho.values.assign(nodes, 0.0);

  const int n_threads = pool ? pool->size() : 1;
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < states.size(); ++i) {
      int cell;
      double frac;
      locate(states[i].r, grid.extent, dr, grid.cells, i, cell, frac);
      const double w = weights[i] / dr;
      if (mode == Deposition::cloud_in_cell) {
        rho.values[cell] += w * (1.0 - frac);
        rho.values[cell + 1] += w * frac;
      } else {
        rho.values[frac < 0.5 ? cell : cell + 1] += w;
      }
    }
    return rho;
  }

  // Reduction: per-thread partial grids, merged in thread order. The merge
  // order is fixed for a given thread count but differs from the serial sum.
  std::vector<std::vector<double>> partial(n_threads);
  std::exception_ptr error;
  std::mutex error_mutex;
  pool->for_range(states.size(), [&](std::size_t begin, std::size_t end, int t) {
    partial[t].assign(nodes, 0.0);
    try {
      for (std::size_t i = begin; i < end; ++i) {
        int cell;
        double frac;
        locate(states[i].r, grid.extent, dr, grid.cells, i, cell, frac);
        const double w = weights[i] / dr;
        if (mode == Deposition::cloud_in_cell) {
          partial[t][cell] += w * (1.0 - frac);
          partial[t][cell + 1] += w * frac;
        } else {
          partial[t][frac < 0.5 ? cell : cell + 1] += w;
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  });
  if (error) std::rethrow_exception(error);
  for (int t = 0; t < n_threads; ++t)
    for (int j = 0; j < nodes; ++j) rho.values[j] += partial[t][j];
  return rho;
}

ChargeDensityGrid deposit(const Ensemble& ensemble, GridSpec grid, Deposition mode,
                          ThreadPool* pool) {
  std::vector<PhaseState> states(ensemble.size());
  std::vector<double> weights(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    states[i] = ensemble.particles[i].state;
    weights[i] = ensemble.particles[i].weight;
  }
  return deposit(states, weights, grid, mode, pool);
}

FieldGrid solve_poisson(const ChargeDensityGrid& rho) {
  const int nodes = static_cast<int>(rho.values.size());
  const double dr = rho.spacing;
  for (int j = 0; j < nodes; ++j)
    if (!std::isfinite(rho.values[j]))
      throw std::invalid_argument("solve_poisson: non-finite density at node " +
                                  std::to_string(j));

  // Cumulative trapezoid from the left end, then shift so G(0) = 0.
  std::vector<double> cumulative(nodes, 0.0);
  for (int j = 1; j < nodes; ++j)
    cumulative[j] = cumulative[j - 1] + 0.5 * dr * (rho.values[j - 1] + rho.values[j]);

  // Value of the cumulative integral at r = 0. With an even cell count this
  // is a node; otherwise integrate the partial trapezoid with rho linearly
  // interpolated at the origin.
  const double x0 = rho.extent / dr;
  const int j0 = std::min(static_cast<int>(x0), nodes - 2);
  const double f0 = x0 - j0;
  double c_at_zero;
  if (f0 == 0.0) {
    c_at_zero = cumulative[j0];
  } else {
    const double rho0 = (1.0 - f0) * rho.values[j0] + f0 * rho.values[j0 + 1];
    c_at_zero = cumulative[j0] + 0.5 * f0 * dr * (rho.values[j0] + rho0);
  }

  FieldGrid field;
  field.extent = rho.extent;
  field.spacing = dr;
  field.values.resize(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double r = rho.node(j);
    const double g = cumulative[j] - c_at_zero;
    field.values[j] = (r == 0.0) ? rho.values[j] : g / r;
  }
  return field;
}

double interp_field(const FieldGrid& field, double r, std::size_t particle) {
  const int cells = static_cast<int>(field.values.size()) - 1;
  int cell;
  double frac;
  locate(r, field.extent, field.spacing, cells, particle, cell, frac);
  return (1.0 - frac) * field.values[cell] + frac * field.values[cell + 1];
}

}  // namespace oscpic
