#ifndef SMD_HARNESS_HPP
#define SMD_HARNESS_HPP

#include <string>
#include <vector>

#include "smd/lowerbound.hpp"
#include "smd/solvers.hpp"

namespace smd {

extern const char* kCodeVersion;

/// A full experiment grid over algorithm x kappa x q x d x T x trial, run
/// against the synthetic oracle. q entries may be infinite. When
/// noise_normalized is set the per-coordinate Pareto scale is multiplied by
/// d^{-1/q}, which keeps the certified sigma essentially dimension-free so
/// dimension sweeps isolate the geometric factor.
struct SweepConfig {
  std::string experiment = "sweep";
  std::vector<Algo> algos = {Algo::smd};
  std::vector<double> kappas = {0.5};
  std::vector<double> qs = {1.5};
  std::vector<int> ds = {10};
  std::vector<long> horizons = {1000};
  long trials = 1;
  std::uint64_t root_seed = 1;
  double radius = 1.0;
  double noise_beta = 1.6;
  double noise_scale = 1.0;
  bool noise_normalized = true;
  std::string eta = "auto";
  std::string clip = "auto";
  std::string out_dir;  // empty: $HTSMD_OUT_DIR, else "."
  int threads = 1;

  void validate() const;
};

/// One trial's outcome. run_id is a deterministic hash of the cell
/// coordinates and trial index, so reruns and added cells never collide or
/// shift. checkpoints serializes the error trajectory as "t:err;t:err;...".
struct ResultRow {
  std::string run_id;
  std::string experiment;
  std::string algo;
  double kappa = 0.0;
  double q = 0.0;  // +inf allowed
  double p = 0.0;
  int d = 0;
  long horizon = 0;
  double radius = 0.0;
  double sigma = 0.0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  long trial = 0;
  double final_error = 0.0;
  std::string checkpoints;
  double wall_ms = 0.0;
};

/// Mirror-map choice as a function of the oracle geometry:
/// p = 1+kappa for q <= 1+kappa; p = min(q, 1+ln d) when q > ln d (the
/// log-dimension map dominates there); otherwise p = q; q = inf forces
/// p = 1 + ln d. The result is clamped to p >= 1+kappa.
MirrorMap resolve_map(const Exponent& q, double kappa, int d);

/// Flat key=value config file; '#' starts a comment, lists are
/// comma-separated. Unknown keys are rejected.
SweepConfig parse_config_file(const std::string& path);
void apply_override(SweepConfig& cfg, const std::string& assignment);
std::string write_config(const SweepConfig& cfg);

extern const char* kResultHeader;
std::string to_csv_row(const ResultRow& row);
std::vector<ResultRow> read_result_csv(const std::string& path);

/// Executes every cell of the grid, writing results.csv incrementally (a
/// crash preserves completed rows) and manifest.txt (config echo, seed, row
/// count, code version) into out_dir. Per-cell failures become rows with a
/// NaN final error and the sweep continues. Returns the rows in grid order
/// regardless of thread count.
std::vector<ResultRow> run_sweep(const SweepConfig& cfg);

/// Same grid without touching the filesystem.
std::vector<ResultRow> run_sweep_in_memory(const SweepConfig& cfg);

enum class FitAxis { horizon, dimension };

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Ordinary least squares of log(mean final error) on log(x), where x is T
/// or d and the mean is over all rows sharing that x. Requires >= 4 distinct
/// x values and positive means.
RateFit fit_rate(const std::vector<ResultRow>& rows, FitAxis axis);

/// Self-contained SVG log-log plot: per-algorithm mean-error series (one
/// polyline each, plus markers), the fitted line, and a reference line with
/// the given slope (defaults to -kappa/(1+kappa) resp. kappa/(1+kappa) from
/// the first row).
void emit_plot(const std::vector<ResultRow>& rows, FitAxis axis, const std::string& path);
void emit_plot(const std::vector<ResultRow>& rows, FitAxis axis, const std::string& path,
               double reference_slope);

}  // namespace smd

#endif  // SMD_HARNESS_HPP
