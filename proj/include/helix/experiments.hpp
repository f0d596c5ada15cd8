#pragma once

#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "helix/diagnostics.hpp"
#include "helix/euler.hpp"

namespace helix {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// INI sections: [grid] [time] [sweep] [initial] [tolerance] [run]
struct ExperimentConfig {
  std::string experiment;
  int n_r = 64;
  int n_theta = 128;
  int n_z = 32;
  double dt = 1e-3;
  double t_star = 0.5;  ///< comparison time
  double t_end = 1.0;   ///< horizon of euler drift and energy audits
  double nu = 1.0;
  std::vector<double> sigmas{2, 4, 8, 16, 32, 64};  ///< +inf marks the planar case
  std::string family = "default-generic";
  double amplitude = 1.0;
  double center_x = 0.3;
  double center_y = 0.0;
  double width = 0.05;
  std::string field_file;
  double projection_tol = 1e-8;
  double error_floor = 1e-8;
  double slope_slack = 0.0;
  double energy_threshold = 1e-3;
  double drift_tol = 1e-2;
  unsigned seed = 0;
};

/// "2,4,8" or "2 4 8"; "inf" or "planar" for the planar limit
std::vector<double> parse_sigma_list(const std::string& text);
std::string format_sigma_list(const std::vector<double>& sigmas);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

extern const char* const version_tag;

using RunManifest = std::map<std::string, std::string>;
RunManifest make_manifest(const ExperimentConfig& cfg);
/// flat key=value lines, sorted by key
void write_manifest(const std::string& path, const RunManifest& m);
RunManifest read_manifest(const std::string& path);

/// %.16e
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
void write_csv(const std::string& path, const CsvTable& table);
std::string to_csv(const CsvTable& table);
CsvTable read_csv(const std::string& path);
/// numeric column by name
std::vector<double> csv_column(const CsvTable& table, const std::string& name);

/// "HLXF", int32 n_r, int32 n_theta, int32 ncomp, then float64 [comp][j][k], little endian
void write_field_dump(const std::string& path, const std::vector<ScalarField>& comps);
std::vector<ScalarField> read_field_dump(const std::string& path, const GridPtr& grid);

/// radial-swirl, default-generic, bessel-swirl, file; horizontal part projected to planar div-free
VectorField3 initial_velocity(const ExperimentConfig& cfg, const GridPtr& grid);
/// gaussian-blob, radial-blob, file
ScalarField initial_vorticity(const ExperimentConfig& cfg, const GridPtr& grid);

/// flag > 0 wins, then HELIX_JOBS, then 1
int resolve_jobs(int flag);

struct CheckLine {
  std::string name;
  double sigma = 0.0;  ///< 0 when not sigma specific
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct CommandResult {
  int exit_code = 0;
  ConvergenceReport report;
  CsvTable csv;
  std::vector<CheckLine> checks;
  std::vector<std::string> notes;
};

/// writes <out>/<name>.csv and <out>/<name>.manifest when out_dir is not empty
CommandResult cmd_ns_converge(const ExperimentConfig& cfg, const std::string& out_dir = "", int jobs = 1);
CommandResult cmd_euler_converge(const ExperimentConfig& cfg, const std::string& out_dir = "", int jobs = 1);
CommandResult cmd_energy_audit(const ExperimentConfig& cfg, const std::string& out_dir = "", int jobs = 1);
CommandResult cmd_operator_check(const ExperimentConfig& cfg, const std::string& out_dir = "");
CommandResult cmd_lift_check(const ExperimentConfig& cfg, const std::string& out_dir = "");

}  // namespace helix
