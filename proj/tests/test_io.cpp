#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oscpic/io.hpp"
#include "oscpic/sampling.hpp"

using namespace oscpic;

namespace {

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path temp_dir(const std::string& leaf) {
  auto dir = std::filesystem::temp_directory_path() / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("format_double round-trips bit-exactly") {
  for (double value : {0.1, 1.0 / 3.0, 6.283185307179586e-4, -1.5e-13, 0.0}) {
    const std::string text = format_double(value);
    CHECK(std::strtod(text.c_str(), nullptr) == value);
    CHECK(text.find(',') == std::string::npos);
  }
}

TEST_CASE("snapshot_filename uses four decimals") {
  CHECK(snapshot_filename(0.0) == "snap_t0.0000.csv");
  CHECK(snapshot_filename(0.5) == "snap_t0.5000.csv");
  CHECK(snapshot_filename(10.0) == "snap_t10.0000.csv");
  CHECK(snapshot_filename(1.25) == "snap_t1.2500.csv");
}

TEST_CASE("snapshot csv round-trips states bit-exactly") {
  const auto dir = temp_dir("oscpic_io_snapshot");
  Ensemble e = sample_initial(50, 3);
  e.time = 0.5;
  const std::string path = (dir / "snap.csv").string();
  write_snapshot_csv(path, e);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,r,v,weight");
  for (std::size_t i = 0; i < e.size(); ++i) {
    REQUIRE(std::getline(in, line));
    std::size_t a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
    CHECK(std::stoull(line.substr(0, a)) == i);
    CHECK(std::strtod(line.substr(a + 1, b - a - 1).c_str(), nullptr) ==
          e.particles[i].state.r);
    CHECK(std::strtod(line.substr(b + 1, c - b - 1).c_str(), nullptr) ==
          e.particles[i].state.v);
    CHECK(std::strtod(line.substr(c + 1).c_str(), nullptr) == e.particles[i].weight);
  }
}

TEST_CASE("trajectory dump carries t,r,v samples") {
  const auto dir = temp_dir("oscpic_io_traj");
  TrajectoryRecord record;
  record.reset(0.0, 2);
  std::vector<Particle> two(2);
  for (int k = 0; k < 4; ++k) {
    two[0].state = {0.1 * k, -0.1 * k};
    two[1].state = {1.0, 2.0};
    record.append(0.25 * k, two);
  }
  const std::string path = (dir / "traj.csv").string();
  write_trajectory_csv(path, record, 0);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,r,v");
  std::getline(in, line);
  CHECK(line == "0,0,-0");
  std::getline(in, line);
  CHECK(line == "0.25,0.10000000000000001,-0.10000000000000001");
}

TEST_CASE("grid csv carries the r,value header") {
  const auto dir = temp_dir("oscpic_io_grid");
  FieldGrid grid;
  grid.extent = 1.0;
  grid.spacing = 0.5;
  grid.values = {1.0, 2.0, 3.0, 2.0, 1.0};
  const std::string path = (dir / "field.csv").string();
  write_field_csv(path, grid);
  const std::string content = read_all(path);
  CHECK(content.substr(0, 8) == "r,value\n");
  CHECK(content.find("-1,1\n") != std::string::npos);
}

TEST_CASE("emit_run writes snapshots and a consistent manifest") {
  const auto dir = temp_dir("oscpic_io_run");
  SimConfig config;
  config.epsilon = 0.01;
  config.final_time = 1.0;
  config.macro_step = 0.5;
  config.n_particles = 64;
  config.field = FieldKind::cubic;
  config.scheme = Scheme::improved_etd;

  const RunManifest manifest = emit_run(config, dir.string());
  CHECK(manifest.macro_steps == 2);
  CHECK(manifest.files.size() == 3);  // t = 0, 0.5, 1.0
  for (const ManifestFile& f : manifest.files) {
    const auto path = dir / f.name;
    REQUIRE(std::filesystem::exists(path));
    CHECK(std::filesystem::file_size(path) == f.bytes);
  }
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  CHECK(manifest.particle_substeps > 0);
  CHECK(manifest.fine_seconds >= 0.0);
}

TEST_CASE("emit_run is byte-deterministic at threads = 1") {
  const auto dir_a = temp_dir("oscpic_io_det_a");
  const auto dir_b = temp_dir("oscpic_io_det_b");
  SimConfig config;
  config.epsilon = 0.01;
  config.final_time = 1.0;
  config.n_particles = 100;
  config.field = FieldKind::poisson;
  config.grid_cells = 32;
  config.scheme = Scheme::improved_etd;
  config.threads = 1;

  const RunManifest a = emit_run(config, dir_a.string());
  const RunManifest b = emit_run(config, dir_b.string());
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    CHECK(a.files[i].name == b.files[i].name);
    CHECK(read_all((dir_a / a.files[i].name).string()) ==
          read_all((dir_b / b.files[i].name).string()));
  }
}

TEST_CASE("emit_run report files land in the manifest") {
  const auto dir = temp_dir("oscpic_io_reports");
  SimConfig config;
  config.epsilon = 0.01;
  config.final_time = 0.5;
  config.n_particles = 32;
  config.field = FieldKind::cubic;
  config.scheme = Scheme::improved_etd;

  EmitOptions options;
  options.reports = true;
  options.residuals = true;
  options.residual_subsample = 4;
  const RunManifest manifest = emit_run(config, dir.string(), options);

  bool saw_periods = false, saw_modulus = false, saw_residuals = false;
  for (const ManifestFile& f : manifest.files) {
    REQUIRE(std::filesystem::exists(dir / f.name));
    saw_periods |= f.name.rfind("periods_", 0) == 0;
    saw_modulus |= f.name.rfind("modulus_", 0) == 0;
    saw_residuals |= f.name.rfind("residuals_", 0) == 0;
  }
  CHECK(saw_periods);
  CHECK(saw_modulus);
  CHECK(saw_residuals);
}
