#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oscpic/core.hpp"
#include "oscpic/diagnostics.hpp"
#include "oscpic/etd.hpp"
#include "oscpic/fields.hpp"

namespace oscpic {

/// All CSV output is ASCII: header row, ',' separator, '.' decimal point,
/// floats at 17 significant digits so values round-trip bit-exactly.
std::string format_double(double value);

/// `snap_t{time:.4}.csv`
std::string snapshot_filename(double time);

void write_snapshot_csv(const std::string& path, const Ensemble& ensemble);
void write_density_csv(const std::string& path, const ChargeDensityGrid& rho);
void write_field_csv(const std::string& path, const FieldGrid& field);

struct PeriodTableRow {
  double r0, v0, epsilon, taylor, quadrature, detected;
};
void write_period_table_csv(const std::string& path, const std::vector<PeriodTableRow>& rows);

struct ErrorVsTimeRow {
  double time, rms, max;
};
void write_error_vs_time_csv(const std::string& path, const std::vector<ErrorVsTimeRow>& rows);

void write_periods_csv(const std::string& path, const DistributionReport& report);
void write_modulus_csv(const std::string& path, const DistributionReport& report);

struct ResidualRow {
  std::size_t particle;
  double residual;
};
void write_residuals_csv(const std::string& path, const std::vector<ResidualRow>& rows);

/// Debug dump of one particle's recorded fine trajectory (columns t, r, v).
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& record,
                          std::size_t particle);

struct ManifestFile {
  std::string name;
  std::uint64_t bytes = 0;
};

/// Everything a finished run leaves behind: the resolved configuration, the
/// emitted files, phase timings, and the fine-substep accounting that backs
/// the speedup bookkeeping.
struct RunManifest {
  SimConfig config;
  std::vector<ManifestFile> files;
  long long macro_steps = 0;
  long long particle_substeps = 0;
  double fine_seconds = 0.0;
  double field_seconds = 0.0;
  double extrapolation_seconds = 0.0;
  double wall_seconds = 0.0;
  double mean_period_used = 0.0;
};

void write_manifest_json(const std::string& path, const RunManifest& manifest);

struct EmitOptions {
  bool reports = false;     // periods_t{...}.csv / modulus_t{...}.csv per snapshot
  bool residuals = false;   // residuals_t{...}.csv per snapshot
  int residual_subsample = 16;
};

/// Runs the configured simulation and writes one snapshot CSV per macro
/// boundary plus `manifest.json` into out_dir (created if missing). Optional
/// distribution and approximation-residual reports are written per snapshot
/// and listed in the manifest.
RunManifest emit_run(const SimConfig& config, const std::string& out_dir,
                     const EmitOptions& options = {});

}  // namespace oscpic
