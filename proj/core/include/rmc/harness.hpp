#pragma once

// Phase-transition experiments: a two-axis grid over (p, r, alpha), a
// number of seeded trials per cell and one or more algorithms. Every trial
// is an independent task; results are merged by key so the output does not
// depend on the number of worker threads.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rmc/linalg.hpp"
#include "rmc/solver.hpp"

namespace rmc {

enum class Axis { P, R, Alpha };

const char* to_string(Axis a);
Axis parse_axis(std::string_view name);

struct AxisSpec {
  Axis axis = Axis::P;
  std::vector<double> values;  // strictly increasing
};

struct ExperimentGrid {
  Index n1 = 0;
  Index n2 = 0;
  AxisSpec axis1;
  AxisSpec axis2;
  double fixed_p = 0.0;
  Index fixed_r = 0;
  double fixed_alpha = 0.0;
  int trials = 0;
  /// Canonical names: "soft", "scad", "rrmc".
  std::vector<std::string> algorithms;
  double success_threshold = 1e-3;
  std::uint64_t base_seed = 1;
  double gamma = 0.9;
  double beta_factor = 1.1;
  double scad_a = 3.0;
  int max_iters = 500;
  double stop_tol = 1e-9;
  bool record_timing = true;

  /// Throws ParameterError / DimensionError naming the violated rule.
  void validate() const;
};

/// Flat "key = value" format, '#' starts a comment. Lists are comma
/// separated. Throws ParseError (with line number) for syntax problems and
/// unknown or duplicate keys, and the validate() errors otherwise.
ExperimentGrid parse_config(std::istream& in, std::string_view source = "<stream>");
ExperimentGrid parse_config(const std::string& path);

struct CellParams {
  double p = 0.0;
  Index r = 0;
  double alpha = 0.0;
};

CellParams cell_params(const ExperimentGrid& grid, std::size_t i1, std::size_t i2);

/// Seed of one trial; distinct for distinct (algorithm, cell, trial) keys.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t algorithm, std::size_t i1,
                         std::size_t i2, std::size_t trial);

struct TrialRecord {
  std::size_t algorithm = 0;
  std::size_t i1 = 0;
  std::size_t i2 = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool success = false;
  double rel_inf_error = 0.0;
  int iterations = 0;
  std::int64_t wall_ms = 0;
  Termination termination = Termination::Failed;
  std::string failure;
};

struct CellResult {
  std::string algorithm;
  std::string axis1_name;
  double axis1 = 0.0;
  std::string axis2_name;
  double axis2 = 0.0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_iters = 0.0;
  double mean_wall_ms = 0.0;
};

struct GridResult {
  /// Cells of algorithm a are cells[a], ordered by (axis1, axis2).
  std::vector<std::vector<CellResult>> cells;
  std::vector<TrialRecord> trials;  // task order: algorithm, i1, i2, trial
  std::vector<std::string> log;     // failed trials, in task order
};

struct RunOptions {
  unsigned threads = 1;
};

/// Solver configuration used for one algorithm of the grid.
SolverConfig solver_config_for(const ExperimentGrid& grid, const std::string& algorithm, Index rank);

/// Runs one trial; never throws (failures are reported in the record).
TrialRecord run_trial(const ExperimentGrid& grid, std::size_t algorithm, std::size_t i1,
                      std::size_t i2, std::size_t trial);

GridResult run_grid(const ExperimentGrid& grid, const RunOptions& options = {});

/// CSV: algorithm,axis1_name,axis1,axis2_name,axis2,trials,successes,success_rate,mean_iters,mean_wall_ms
/// sorted by (algorithm, axis1, axis2), rates with 6 decimals.
void write_csv(std::ostream& out, std::span<const CellResult> results);
void emit_csv(std::span<const CellResult> results, const std::filesystem::path& path);

/// Binary greymap: one pixel per cell, round-half-up(255 * success_rate),
/// axis1 ascending left to right, axis2 ascending top to bottom.
/// Throws DimensionError if the cells do not form a full rectangular grid.
void write_pgm(std::ostream& out, std::span<const CellResult> results);
void emit_pgm(std::span<const CellResult> results, const std::filesystem::path& path);

/// 64-bit FNV-1a of a file's bytes, as 16 lowercase hex digits.
std::string file_checksum(const std::filesystem::path& path);

/// Writes <algo>.csv, <algo>.pgm and manifest.txt into out_dir.
void write_phase_outputs(const ExperimentGrid& grid, const std::string& config_text,
                         const GridResult& result, const std::filesystem::path& out_dir);

}  // namespace rmc
