#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mvce/datagen.hpp"
#include "mvce/leverage.hpp"
#include "mvce/sampling.hpp"

namespace mvce {

/// Parameters of one sample-then-solve run.
struct PipelineConfig {
  std::optional<std::filesystem::path> input;
  bool input_header = false;
  std::optional<DatasetSpec> dataset;

  SampleMethod method = SampleMethod::det;
  /// Threshold for det / det-approx. When unset, s_fraction drives the size.
  std::optional<double> epsilon;
  std::optional<double> s_fraction;
  double delta = 1e-9;
  LeverageMode leverage = LeverageMode::exact;
  double alpha = 0.25;
  std::uint64_t seed = 0;

  /// Solve the full problem for g_full unless g_full is supplied.
  bool compute_full = true;
  std::optional<double> g_full;
  std::optional<std::filesystem::path> output_dir;

  /// Throws InvalidArgument on out-of-range values.
  void validate() const;
};

/// One row of the experiment table. Times are wall-clock milliseconds.
struct BenchRecord {
  std::string dataset;
  std::string method;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t s = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double g_full = 0.0;
  double g_sampled = 0.0;
  /// g_s at uniform weights 1/s on the sample.
  double g_init = 0.0;
  double gap = 0.0;
  double initial_gap = 0.0;
  double bound_thm2 = 0.0;
  double bound_thm3 = 0.0;
  /// max over all n rows of x^T Q x / d - 1 for the sampled ellipsoid.
  double max_violation = 0.0;
  bool containment_warning = false;
  std::size_t iterations = 0;
  double time_lev_ms = 0.0;
  double time_sample_ms = 0.0;
  double time_solve_ms = 0.0;
  double time_total_ms = 0.0;
  double time_full_ms = 0.0;
  std::string error;
};

struct FullSolve {
  double g = 0.0;
  double time_ms = 0.0;
  std::size_t iterations = 0;
};

/// Wolfe-Atwood from Kumar-Yildirim on every row, timed end to end.
FullSolve solve_full(const DataMatrix& x, double delta, std::uint64_t seed = 0);

/// Loads or generates the configured matrix.
DataMatrix load_pipeline_input(const PipelineConfig& cfg);
std::string dataset_label(const PipelineConfig& cfg);

/// Leverage, selection, sampled solve and containment check on all rows.
///
/// `exact_reference` may carry precomputed exact scores of x; they are used
/// only for reporting epsilon of size-driven runs, never inside timed stages.
BenchRecord run_pipeline(const DataMatrix& x, const PipelineConfig& cfg,
                         const std::string& label = "",
                         const LeverageProfile* exact_reference = nullptr);
BenchRecord run_pipeline(const PipelineConfig& cfg);

/// Grid of pipeline runs over datasets x methods x sizes x seeds.
struct SweepConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<std::filesystem::path> inputs;
  bool input_header = false;
  std::vector<SampleMethod> methods;
  std::vector<double> s_fractions;
  /// Threshold-driven cells, generated for det and det-approx only.
  std::vector<double> epsilons;
  std::vector<std::uint64_t> seeds{0};
  double delta = 1e-9;
  LeverageMode leverage = LeverageMode::exact;
  double alpha = 0.25;
  /// 0 means MVCE_THREADS or 1.
  std::size_t threads = 0;
};

/// Parses the INI-style sweep file. Throws FormatError with the line number.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Runs every cell, appending rows to `out_csv` in cell order as they finish.
/// A failing cell is recorded with its error message and the sweep continues.
std::vector<BenchRecord> run_sweep(const SweepConfig& cfg, const std::filesystem::path& out_csv);

std::vector<std::string> bench_csv_columns();
void write_bench_header(std::ostream& out);
void write_bench_row(std::ostream& out, const BenchRecord& r);
std::vector<BenchRecord> read_bench_csv(const std::filesystem::path& path);

/// key=value report of a single record.
void write_report(std::ostream& out, const BenchRecord& r);

struct BoundCheck {
  std::size_t index = 0;
  std::string dataset;
  std::string method;
  bool checked = false;
  bool thm2_ok = true;
  bool thm3_ok = true;
  /// g_sampled <= g_full + d log(1 + delta) + 1e-8.
  bool consistent = true;
  std::string note;

  bool ok() const { return thm2_ok && thm3_ok && consistent; }
};

struct BoundsReport {
  std::vector<BoundCheck> checks;
  std::size_t violations() const;
  void print(std::ostream& out) const;
};

/// Checks the gap bounds on deterministic-method records; other rows are
/// only checked for g_sampled <= g_full + slack.
BoundsReport verify_bounds(const std::vector<BenchRecord>& records);

/// Throws BoundViolation naming each offending record.
void require_bounds(const BoundsReport& report);

/// Gaps with |gap| <= 1e-9 max(1, |g_full|) count as zero.
double signed_gap(double g_full, double g_other);

}  // namespace mvce
