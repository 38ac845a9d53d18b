#pragma once

#include <functional>
#include <string>
#include <vector>

#include "depstat/benchgen.hpp"
#include "depstat/null_test.hpp"

namespace depstat {

/// A test to run at each grid point: which statistic, under which null.
struct TestSpec {
    StatKind stat = StatKind::HsicBiased;
    NullModel null_model = NullModel::Permutation;

    bool operator==(const TestSpec&) const = default;
};

/// Canonical id, e.g. "hsic-permutation", "dcov-permutation", "hsic-gamma".
std::string test_spec_name(const TestSpec& spec);

/// Parses "hsic", "hsic-gamma", "dcov-permutation", ... A bare statistic
/// token defaults to the permutation null.
TestSpec parse_test_spec(std::string_view token);

/// The (theta, n, d, test) lattice with its repetition/permutation budget.
struct ExperimentGrid {
    std::vector<double> thetas = {0.0};
    std::vector<int> ns = {128};
    std::vector<int> ds = {1};
    std::vector<TestSpec> tests = {{StatKind::HsicBiased, NullModel::Permutation}};
    int repetitions = 300;   // R
    int permutations = 200;  // B per test
    double alpha = 0.05;
    std::uint64_t base_seed = 0;
    SourceDensity density_x = SourceDensity::TwoGaussianMix;
    SourceDensity density_y = SourceDensity::TwoGaussianMix;
    /// Draw the source densities uniformly from the catalog afresh per
    /// repetition (the benchmark's sampling protocol) instead of using
    /// density_x/density_y.
    bool fresh_density_per_rep = true;
    /// Execution knob only; never serialized into reports.
    int workers = 1;

    void validate() const;
};

/// H0 acceptance outcome at one grid point for one test.
struct PowerCell {
    std::string test;  // TestSpec id
    double theta = 0.0;
    int n = 0;
    int d = 0;
    int repetitions = 0;
    int accept_count = 0;
    double accept_rate = 0.0;
    std::uint64_t seed = 0;  // per-cell seed (derived from base_seed)
};

/// All cells of a grid run plus the grid echo and total runtime. The
/// runtime is informational only and deliberately kept out of the
/// serialized outputs so that reruns are byte-identical.
struct PowerReport {
    ExperimentGrid grid;
    std::vector<PowerCell> cells;
    double runtime_seconds = 0.0;
};

/// One cell failure: the coordinates plus the first failing repetition's
/// diagnostics.
struct CellFailure {
    std::string test;
    double theta = 0.0;
    int n = 0;
    int d = 0;
    int repetition = 0;
    std::string message;
};

/// Raised by run_cell when a repetition fails; carries the failing
/// repetition index.
class CellRunError : public Error {
  public:
    CellRunError(int repetition, const std::string& what);
    int repetition() const { return repetition_; }

  private:
    int repetition_ = 0;
};

/// Raised by run_grid when at least one cell failed; carries the completed
/// cells so callers can persist partial results.
class GridError : public Error {
  public:
    GridError(std::vector<CellFailure> failures, PowerReport partial);
    const std::vector<CellFailure>& failures() const { return failures_; }
    const PowerReport& partial_report() const { return partial_; }

  private:
    std::vector<CellFailure> failures_;
    PowerReport partial_;
};

/// Runs R repetitions of one (theta, n, d, test) grid point: generates a
/// dataset on the substream (base_seed, data label, repetition), runs the
/// test on the substream (base_seed, test label, repetition), counts H0
/// acceptances. Datasets depend only on the grid point and repetition (not
/// the test), so tests at the same point consume identical data. Any
/// repetition failure aborts the cell with diagnostics.
PowerCell run_cell(const ExperimentGrid& grid, int theta_idx, int n_idx, int d_idx,
                   int test_idx);

using ProgressFn = std::function<void(int cells_done, int cells_total)>;

/// Runs every cell of the grid. Deterministic for any worker count. Cell
/// failures are aggregated into a GridError carrying the partial report.
PowerReport run_grid(const ExperimentGrid& grid, const ProgressFn& progress = {});

/// CSV with the exact column set
/// test,theta,n,d,repetitions,accept_count,accept_rate,seed
/// (theta/seed round-trip exact, accept_rate with 6 decimals).
std::string emit_report_csv(const PowerReport& report);

/// JSON mirror of the report structure (grid echo + cells).
std::string emit_report_json(const PowerReport& report);

/// Inverse of emit_report_csv; only cells are recoverable from CSV.
/// Throws ParseError with the offending line on malformed input.
PowerReport parse_report_csv(const std::string& text);

/// Inverse of emit_report_json.
PowerReport parse_report_json(const std::string& text);

/// Parses a grid configuration JSON object (the "grid" block of the report
/// schema). Missing keys keep their ExperimentGrid defaults.
ExperimentGrid parse_grid_json(const std::string& text);

}  // namespace depstat
