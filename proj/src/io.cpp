#include "oscpic/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace oscpic {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::uint64_t file_bytes(const std::string& path) {
  return static_cast<std::uint64_t>(std::filesystem::file_size(path));
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string snapshot_filename(double time) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "snap_t%.4f.csv", time);
  return buffer;
}

void write_snapshot_csv(const std::string& path, const Ensemble& ensemble) {
  std::ofstream out = open_out(path);
  out << "index,r,v,weight\n";
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const Particle& p = ensemble.particles[i];
    out << i << ',' << format_double(p.state.r) << ',' << format_double(p.state.v) << ','
        << format_double(p.weight) << '\n';
  }
}

namespace {

template <typename Grid>
void write_grid(const std::string& path, const Grid& grid) {
  std::ofstream out = open_out(path);
  out << "r,value\n";
  for (std::size_t j = 0; j < grid.values.size(); ++j)
    out << format_double(grid.node(static_cast<int>(j))) << ','
        << format_double(grid.values[j]) << '\n';
}

}  // namespace

void write_density_csv(const std::string& path, const ChargeDensityGrid& rho) {
  write_grid(path, rho);
}

void write_field_csv(const std::string& path, const FieldGrid& field) {
  write_grid(path, field);
}

void write_period_table_csv(const std::string& path,
                            const std::vector<PeriodTableRow>& rows) {
  std::ofstream out = open_out(path);
  out << "r0,v0,epsilon,T_taylor,T_quadrature,T_detected\n";
  for (const PeriodTableRow& row : rows)
    out << format_double(row.r0) << ',' << format_double(row.v0) << ','
        << format_double(row.epsilon) << ',' << format_double(row.taylor) << ','
        << format_double(row.quadrature) << ',' << format_double(row.detected) << '\n';
}

void write_error_vs_time_csv(const std::string& path,
                             const std::vector<ErrorVsTimeRow>& rows) {
  std::ofstream out = open_out(path);
  out << "time,rms,max\n";
  for (const ErrorVsTimeRow& row : rows)
    out << format_double(row.time) << ',' << format_double(row.rms) << ','
        << format_double(row.max) << '\n';
}

void write_periods_csv(const std::string& path, const DistributionReport& report) {
  std::ofstream out = open_out(path);
  out << "index,initial_period,current_period,initial_detected,current_detected\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const DistributionEntry& e = report.entries[i];
    out << i << ',' << format_double(e.initial_period) << ','
        << format_double(e.current_period) << ',' << (e.initial_detected ? 1 : 0) << ','
        << (e.current_detected ? 1 : 0) << '\n';
  }
}

void write_modulus_csv(const std::string& path, const DistributionReport& report) {
  std::ofstream out = open_out(path);
  out << "index,initial_modulus,current_modulus\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const DistributionEntry& e = report.entries[i];
    out << i << ',' << format_double(e.initial_modulus) << ','
        << format_double(e.current_modulus) << '\n';
  }
}

void write_residuals_csv(const std::string& path, const std::vector<ResidualRow>& rows) {
  std::ofstream out = open_out(path);
  out << "index,residual\n";
  for (const ResidualRow& row : rows)
    out << row.particle << ',' << format_double(row.residual) << '\n';
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& record,
                          std::size_t particle) {
  std::ofstream out = open_out(path);
  out << "t,r,v\n";
  for (std::size_t k = 0; k < record.n_samples(); ++k) {
    const PhaseState& y = record.state(particle, k);
    out << format_double(record.time(k)) << ',' << format_double(y.r) << ','
        << format_double(y.v) << '\n';
  }
}

void write_manifest_json(const std::string& path, const RunManifest& manifest) {
  nlohmann::json j;
  const SimConfig& c = manifest.config;
  j["config"] = {{"epsilon", c.epsilon},
                 {"macro_step", c.macro_step},
                 {"final_time", c.final_time},
                 {"n_particles", c.n_particles},
                 {"fine_substep_divisor", c.fine_substep_divisor},
                 {"rng_seed", c.rng_seed},
                 {"scheme", to_string(c.scheme)},
                 {"field", to_string(c.field)},
                 {"grid_cells", c.grid_cells},
                 {"grid_extent", c.grid_extent},
                 {"threads", c.threads},
                 {"quiet_start", c.quiet_start},
                 {"frozen_field", c.frozen_field},
                 {"deposition", c.deposition == Deposition::cloud_in_cell ? "cic" : "ngp"}};
  j["files"] = nlohmann::json::array();
  for (const ManifestFile& f : manifest.files)
    j["files"].push_back({{"name", f.name}, {"bytes", f.bytes}});
  j["macro_steps"] = manifest.macro_steps;
  j["particle_substeps"] = manifest.particle_substeps;
  j["timings"] = {{"fine_seconds", manifest.fine_seconds},
                  {"field_seconds", manifest.field_seconds},
                  {"extrapolation_seconds", manifest.extrapolation_seconds},
                  {"wall_seconds", manifest.wall_seconds}};
  if (manifest.mean_period_used > 0.0) j["mean_period_used"] = manifest.mean_period_used;

  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

namespace {

std::string time_tag(double time) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "t%.4f", time);
  return buffer;
}

}  // namespace

RunManifest emit_run(const SimConfig& config, const std::string& out_dir,
                     const EmitOptions& options) {
  std::filesystem::create_directories(out_dir);
  const SimulationResult result = run_simulation(config);

  RunManifest manifest;
  manifest.config = config;
  manifest.macro_steps = result.stats.macro_steps;
  manifest.particle_substeps = result.stats.fine.particle_substeps;
  manifest.fine_seconds = result.stats.fine.fine_seconds;
  manifest.field_seconds = result.stats.fine.field_seconds;
  manifest.extrapolation_seconds = result.stats.extrapolation_seconds;
  manifest.wall_seconds = result.stats.wall_seconds;
  manifest.mean_period_used = result.stats.mean_period_used;

  auto emit = [&](const std::string& name, auto&& writer) {
    const std::string path = out_dir + "/" + name;
    writer(path);
    manifest.files.push_back({name, file_bytes(path)});
  };

  for (const Ensemble& snapshot : result.snapshots)
    emit(snapshot_filename(snapshot.time),
         [&](const std::string& path) { write_snapshot_csv(path, snapshot); });

  if (options.reports || options.residuals) {
    const double h = config.fine_substep();
    CharacteristicOde ode{config.epsilon,
                          FieldModel::from_kind(config.field,
                                                GridSpec{config.grid_extent, config.grid_cells}),
                          1.0, config.deposition, config.frozen_field};
    const Ensemble& initial = result.snapshots.front();
    for (const Ensemble& snapshot : result.snapshots) {
      const std::string tag = time_tag(snapshot.time);
      if (options.reports) {
        const DistributionReport report = distribution_report(snapshot, initial, h, ode);
        emit("periods_" + tag + ".csv",
             [&](const std::string& path) { write_periods_csv(path, report); });
        emit("modulus_" + tag + ".csv",
             [&](const std::string& path) { write_modulus_csv(path, report); });
      }
      if (options.residuals) {
        const MacroStepPlan plan =
            plan_macro_step(snapshot, config.macro_step, h, ode);
        std::vector<ResidualRow> rows;
        const std::size_t count =
            std::min<std::size_t>(snapshot.size(),
                                  static_cast<std::size_t>(options.residual_subsample));
        for (std::size_t i = 0; i < count; ++i)
          rows.push_back({i, approximation_residual(i, snapshot, plan, h, ode)});
        emit("residuals_" + tag + ".csv",
             [&](const std::string& path) { write_residuals_csv(path, rows); });
      }
    }
  }

  write_manifest_json(out_dir + "/manifest.json", manifest);
  return manifest;
}

}  // namespace oscpic
