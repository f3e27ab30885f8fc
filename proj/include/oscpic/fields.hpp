#pragma once

#include <memory>
#include <vector>

#include "oscpic/core.hpp"
#include "oscpic/parallel.hpp"

namespace oscpic {

/// Uniform node grid on [-extent, extent]: `cells` cells, cells+1 nodes.
struct GridSpec {
  double extent = 2.0;
  int cells = 256;

  double spacing() const { return 2.0 * extent / cells; }
  int nodes() const { return cells + 1; }
  double node(int j) const { return -extent + j * spacing(); }
};

struct ChargeDensityGrid {
  std::vector<double> values;  // rho at each node
  double extent = 0.0;
  double spacing = 0.0;

  double node(int j) const { return -extent + j * spacing; }
};

struct FieldGrid {
  std::vector<double> values;  // E at each node
  double extent = 0.0;
  double spacing = 0.0;

  double node(int j) const { return -extent + j * spacing; }
};

/// The electric field abstraction: zero, the analytic cubic field -r^3, the
/// self-consistent Poisson field on a grid, or a fixed grid snapshot (used by
/// the approximation-residual probe).
class FieldModel {
 public:
  static FieldModel zero() { return FieldModel(FieldKind::zero, {}, nullptr); }
  static FieldModel cubic() { return FieldModel(FieldKind::cubic, {}, nullptr); }
  static FieldModel poisson(GridSpec grid) { return FieldModel(FieldKind::poisson, grid, nullptr); }
  static FieldModel frozen_grid(FieldGrid grid);
  static FieldModel from_kind(FieldKind kind, GridSpec grid = {});

  FieldKind kind() const { return kind_; }
  const GridSpec& grid() const { return grid_; }
  bool self_consistent() const { return kind_ == FieldKind::poisson; }
  bool has_frozen() const { return frozen_ != nullptr; }
  const FieldGrid& frozen() const { return *frozen_; }

 private:
  FieldModel(FieldKind kind, GridSpec grid, std::shared_ptr<const FieldGrid> frozen)
      : kind_(kind), grid_(grid), frozen_(std::move(frozen)) {}

  FieldKind kind_;
  GridSpec grid_;
  std::shared_ptr<const FieldGrid> frozen_;
};

/// E(r) = -r^3.
inline double eval_cubic(double r) { return -r * r * r; }

/// Linear (cloud-in-cell) charge deposition of the particle weights onto the
/// grid nodes, as charge per unit length. A particle sitting exactly on a
/// node puts w/spacing on that node; in between, the weight splits linearly.
/// Throws OutOfDomainError (with the particle index) if any position is
/// outside [-extent, extent].
ChargeDensityGrid deposit(const std::vector<PhaseState>& states,
                          const std::vector<double>& weights, GridSpec grid,
                          Deposition mode = Deposition::cloud_in_cell,
                          ThreadPool* pool = nullptr);
ChargeDensityGrid deposit(const Ensemble& ensemble, GridSpec grid,
                          Deposition mode = Deposition::cloud_in_cell,
                          ThreadPool* pool = nullptr);

/// Solves d(rE)/dr = rho by the trapezoidal rule: G(r) = integral of rho from
/// 0 to r, then E = G/r off the origin and E(0) = rho(0) (the analytic limit).
FieldGrid solve_poisson(const ChargeDensityGrid& rho);

/// Linear interpolation of the node field at an off-grid position; exact at
/// nodes. Same out-of-domain error contract as deposit; `particle` only
/// labels the error.
double interp_field(const FieldGrid& field, double r, std::size_t particle = 0);

}  // namespace oscpic
