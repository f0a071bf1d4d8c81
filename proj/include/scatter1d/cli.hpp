#pragma once

// Config-driven front end: JSON job files in, CSV/JSON results out.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scatter1d/spectra.hpp"
#include "scatter1d/verify.hpp"

namespace scatter1d::cli {

enum class Command { Sweep, Spectra, Laser, Symmetry, Verify, Profile, Invisibility };

const char* to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

enum class ExitCode { Ok = 0, Validation = 1, NotConverged = 2, VerifyFailed = 3 };

struct GridSpec {
  double min = 0.1;
  double max = 10.0;
  int count = 100;
  bool log = true;

  std::vector<double> points() const;
};

/// "min,max,count,log|lin".
GridSpec parse_grid_flag(const std::string& text);

struct Tolerances {
  double check = kDefaultCheckTol;
  double symmetry = kDefaultSymmetryTol;
  double root = 1e-10;
  double separation = 1e-8;
  double invisibility = 1e-9;
};

enum class Format { Csv, Json };

struct JobConfig {
  std::optional<PotentialModel> model;
  std::string model_tag;
  std::optional<GridSpec> grid;
  std::optional<Region> region;
  int region_nx = 400;
  int region_ny = 400;
  Tolerances tol;
  std::optional<std::string> out_path;
  std::optional<Format> format;
  std::optional<LaserQuery> laser;
  double profile_k = 1.0;
  CoefficientPair profile_left{0.0, 1.0};
  std::optional<double> invisibility_min;
  std::optional<double> invisibility_max;
  int invisibility_samples = 2000;
  std::optional<double> symmetry_about;
  std::optional<Complex> fault_m11_scale;
};

/// Complex literal: a number, [re, im], or a string such as "-1+2i", "3i", "2".
Complex parse_complex(const nlohmann::json& j, const std::string& field);
Complex parse_complex_string(const std::string& text, const std::string& field);

/// Validates against schema 1. Throws Error(Validation) naming the field.
JobConfig parse_config(const nlohmann::json& j);
JobConfig load_config(const std::string& path);

/// JSON text with 17 significant digits for floats and insertion key order.
/// Throws on non-finite numbers.
std::string dump_json(const nlohmann::ordered_json& j);

/// %.17g; throws on non-finite input.
std::string format_number(double x);

/// Writes via a sibling temporary file and rename.
void write_atomically(const std::string& path, const std::string& content);

struct Overrides {
  std::optional<std::string> out;
  std::optional<double> tol;
  std::optional<GridSpec> grid;
  bool ci = false;
};

struct CommandResult {
  std::string content;
  Format format = Format::Json;
  ExitCode code = ExitCode::Ok;
  std::vector<std::string> events;  // singular points etc., reported on stderr
};

/// Runs one command against an already parsed config.
CommandResult execute(Command command, JobConfig config, const Overrides& overrides);

/// Entry point used by the executable. Returns the process exit code.
int run(int argc, char** argv);

}  // namespace scatter1d::cli
