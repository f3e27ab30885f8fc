// Command-line front end: `run` a simulation, emit a Duffing `period-table`,
// or `compare` two schemes on the same seed.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oscpic/diagnostics.hpp"
#include "oscpic/duffing.hpp"
#include "oscpic/errors.hpp"
#include "oscpic/etd.hpp"
#include "oscpic/io.hpp"
#include "oscpic/sampling.hpp"

namespace {

using namespace oscpic;

struct CliOptions {
  SimConfig config;
  std::string scheme = "improved";
  std::string field = "cubic";
  std::string deposition = "cic";
  std::string out_dir = "out";
  bool reports = false;
  bool residuals = false;
  bool epsilon_set = false;
};

bool parse_bool(const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw CLI::ValidationError("expected a boolean, got '" + value + "'");
}

// Flat key=value configuration file; keys are the long flag names. Values
// loaded here become the defaults, so command-line flags win.
void apply_config_file(const std::string& path, CliOptions& options) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot read config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("config line is not key=value: '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "epsilon") {
        options.config.epsilon = std::stod(value);
        options.epsilon_set = true;
      } else if (key == "dt")
        options.config.macro_step = std::stod(value);
      else if (key == "t-end")
        options.config.final_time = std::stod(value);
      else if (key == "particles")
        options.config.n_particles = std::stoi(value);
      else if (key == "cells")
        options.config.grid_cells = std::stoi(value);
      else if (key == "extent")
        options.config.grid_extent = std::stod(value);
      else if (key == "substep-divisor")
        options.config.fine_substep_divisor = std::stoi(value);
      else if (key == "seed")
        options.config.rng_seed = std::stoull(value);
      else if (key == "threads")
        options.config.threads = std::stoi(value);
      else if (key == "out-dir")
        options.out_dir = value;
      else if (key == "quiet-start")
        options.config.quiet_start = parse_bool(value);
      else if (key == "frozen-field")
        options.config.frozen_field = parse_bool(value);
      else if (key == "deposition")
        options.deposition = value;
      else if (key == "scheme")
        options.scheme = value;
      else if (key == "field")
        options.field = value;
      else
        throw CLI::ValidationError("unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw CLI::ValidationError("unparsable value for config key '" + key + "'");
    } catch (const std::out_of_range&) {
      throw CLI::ValidationError("out-of-range value for config key '" + key + "'");
    }
  }
}

void add_common_options(CLI::App* cmd, CliOptions& options, bool wants_scheme) {
  cmd->add_option("--epsilon", options.config.epsilon,
                  "small parameter epsilon (> 0); no default, the regime must be explicit");
  cmd->add_option("--dt", options.config.macro_step, "macro time step")->capture_default_str();
  cmd->add_option("--t-end", options.config.final_time, "final simulation time")->capture_default_str();
  cmd->add_option("--particles", options.config.n_particles, "macroparticle count")->capture_default_str();
  cmd->add_option("--cells", options.config.grid_cells, "Poisson grid cells")->capture_default_str();
  cmd->add_option("--extent", options.config.grid_extent, "field grid half-width")->capture_default_str();
  cmd->add_option("--substep-divisor", options.config.fine_substep_divisor,
                  "fine substeps per 2*pi*epsilon")->capture_default_str();
  cmd->add_option("--seed", options.config.rng_seed, "sampling seed")->capture_default_str();
  cmd->add_option("--threads", options.config.threads,
                  "worker threads (1 = fully deterministic)")->capture_default_str();
  cmd->add_option("--out-dir", options.out_dir, "output directory")
      ->envname("OSC_PIC_OUT");
  cmd->add_flag("--quiet-start", options.config.quiet_start,
                "stratified low-noise initialization");
  cmd->add_flag("--frozen-field", options.config.frozen_field,
                "refresh the Poisson field once per substep instead of per RK4 stage");
  cmd->add_option("--deposition", options.deposition, "charge deposition: cic or ngp")
      ->check(CLI::IsMember({"cic", "ngp"}));
  if (wants_scheme) {
    cmd->add_option("--scheme", options.scheme, "reference|classic|modified|improved")
        ->check(CLI::IsMember({"reference", "classic", "modified", "improved"}));
    cmd->add_option("--field", options.field, "zero|cubic|poisson")
        ->check(CLI::IsMember({"zero", "cubic", "poisson"}));
  }
  static std::string config_path;  // consumed by the pre-pass in main
  cmd->add_option("--config", config_path,
                  "flat key=value configuration file (flags override file values)");
}

SimConfig resolve(CliOptions& options, bool wants_scheme) {
  if (wants_scheme) {
    options.config.scheme = scheme_from_string(options.scheme);
    options.config.field = field_from_string(options.field);
  }
  options.config.deposition = options.deposition == "ngp"
                                  ? Deposition::nearest_grid_point
                                  : Deposition::cloud_in_cell;
  for (const std::string& warning : options.config.validate())
    std::cerr << "warning: " << warning << "\n";
  return options.config;
}

int cmd_run(CliOptions& options) {
  const SimConfig config = resolve(options, true);
  EmitOptions emit_options;
  emit_options.reports = options.reports;
  emit_options.residuals = options.residuals;
  const RunManifest manifest = emit_run(config, options.out_dir, emit_options);
  std::cout << "wrote " << manifest.files.size() << " files to " << options.out_dir
            << " (" << manifest.macro_steps << " macro steps, "
            << manifest.particle_substeps << " particle-substeps, wall "
            << manifest.wall_seconds << " s)\n";
  return 0;
}

int cmd_period_table(CliOptions& options) {
  options.field = "cubic";  // the oracle columns are Duffing-specific
  const SimConfig config = resolve(options, true);
  const double h = config.fine_substep();
  CharacteristicOde ode{config.epsilon, FieldModel::cubic(), 1.0, config.deposition, false};

  Ensemble ensemble = sample_initial(config.n_particles, config.rng_seed, config.quiet_start);
  Ensemble scratch = ensemble;
  TrajectoryRecord record;
  advance_fine(scratch, 1.6 * kTwoPi * config.epsilon, h, ode, &record);

  std::vector<PeriodTableRow> rows;
  bool doubled = false;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const PhaseState& y = ensemble.particles[i].state;
    const DuffingIc ic{y.r, y.v, config.epsilon};
    PeriodTableRow row{y.r, y.v, config.epsilon, 0.0, 0.0,
                       std::numeric_limits<double>::quiet_NaN()};
    row.taylor = period_taylor(ic);
    if (y.r != 0.0 || y.v != 0.0) row.quadrature = period_quadrature(ic);
    for (;;) {
      try {
        row.detected = detect_period(record, i).period;
        break;
      } catch (const NoPeriodDetected&) {
        if (doubled) break;
        advance_fine(scratch, 1.6 * kTwoPi * config.epsilon, h, ode, &record);
        doubled = true;
      }
    }
    rows.push_back(row);
  }
  std::filesystem::create_directories(options.out_dir);
  const std::string path = options.out_dir + "/period_table.csv";
  write_period_table_csv(path, rows);
  std::cout << "wrote " << path << " (" << rows.size() << " rows)\n";
  return 0;
}

int cmd_compare(CliOptions& options, const std::string& scheme_a,
                const std::string& scheme_b) {
  SimConfig config = resolve(options, true);

  config.scheme = scheme_from_string(scheme_a);
  const SimulationResult a = run_simulation(config);
  config.scheme = scheme_from_string(scheme_b);
  const SimulationResult b = run_simulation(config);

  if (a.snapshots.size() != b.snapshots.size())
    throw std::runtime_error("compare: snapshot counts differ between schemes");
  std::vector<ErrorVsTimeRow> rows;
  for (std::size_t s = 0; s < a.snapshots.size(); ++s) {
    const CloudError err = cloud_error(a.snapshots[s], b.snapshots[s]);
    rows.push_back({a.snapshots[s].time, err.rms, err.max});
  }
  std::filesystem::create_directories(options.out_dir);
  const std::string path = options.out_dir + "/error_vs_time.csv";
  write_error_vs_time_csv(path, rows);
  std::cout << "wrote " << path << "\n"
            << "final t=" << rows.back().time << " rms=" << rows.back().rms
            << " max=" << rows.back().max << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"particle-in-cell simulator for a highly oscillatory 1Dx1D Vlasov "
               "equation with exponential characteristic integrators"};
  app.require_subcommand(1);

  CliOptions run_options;
  CLI::App* run = app.add_subcommand("run", "run one simulation and write snapshots");
  add_common_options(run, run_options, true);
  run->add_flag("--reports", run_options.reports,
                "emit period/modulus distribution CSVs per snapshot");
  run->add_flag("--residuals", run_options.residuals,
                "emit approximation-residual CSVs per snapshot (16-particle subsample)");

  CliOptions table_options;
  CLI::App* table = app.add_subcommand(
      "period-table", "emit (r0, v0, eps, T_taylor, T_quadrature, T_detected) rows");
  table_options.config.n_particles = 2000;
  add_common_options(table, table_options, false);

  CliOptions compare_options;
  std::string scheme_a = "reference";
  std::string scheme_b = "improved";
  CLI::App* compare =
      app.add_subcommand("compare", "run two schemes on the same seed, write error_vs_time");
  add_common_options(compare, compare_options, true);
  compare->add_option("--a", scheme_a, "first scheme")
      ->capture_default_str()
      ->check(CLI::IsMember({"reference", "classic", "modified", "improved"}));
  compare->add_option("--b", scheme_b, "second scheme")
      ->capture_default_str()
      ->check(CLI::IsMember({"reference", "classic", "modified", "improved"}));

  // Config pre-pass: file values become the defaults, so flags parsed below
  // override them.
  try {
    std::string config_file;
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc)
        config_file = argv[i + 1];
      else if (arg.rfind("--config=", 0) == 0)
        config_file = arg.substr(9);
    }
    if (!config_file.empty()) {
      apply_config_file(config_file, run_options);
      apply_config_file(config_file, table_options);
      apply_config_file(config_file, compare_options);
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_options);
    if (table->parsed()) return cmd_period_table(table_options);
    if (compare->parsed()) return cmd_compare(compare_options, scheme_a, scheme_b);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 1;
}
