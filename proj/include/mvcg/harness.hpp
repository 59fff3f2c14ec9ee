#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvcg/env.hpp"
#include "mvcg/mechanism.hpp"
#include "mvcg/oracle.hpp"

namespace mvcg {

/// Expected-value regret accounting for one run. All per-round utilities are
/// oracle-evaluated under the true reward means (regardless of what agents
/// reported), which makes the decomposition identities below exact algebra:
///
///   Reg_sharp = n * Reg_W + T * Z,   Reg_0 = -(n-1) * Reg_W - T * Z.
struct RegretReport {
    int T = 0, K = 0, n = 0;
    double v_star = 0.0;

    // Per-round series, index t-1.
    std::vector<double> reg_w;              // instantaneous welfare regret
    std::vector<double> reg0;               // instantaneous seller regret
    std::vector<std::vector<double>> regi;  // [t][agent-1]
    std::vector<std::vector<double>> price; // [t][agent-1], echoed from the log
    std::vector<double> u0;                 // per-round seller utility
    std::vector<std::vector<double>> ui;    // [t][agent-1]
    std::vector<double> v_pi_R;             // V_1^{pi_t}(x1; R)
    std::vector<double> z_running;          // running estimate of Z

    // Cumulative totals.
    double Reg_W = 0.0, Reg_0 = 0.0, Reg_sharp = 0.0;
    std::vector<double> Reg_i;
    double Y = 0.0, Z = 0.0;

    double max_identity_residual() const;
};

/// Scores a run log against the exact benchmark. The benchmark must have been
/// built on the same instance with the true reward means; a cheap consistency
/// recomputation rejects mismatched pairs.
RegretReport compute_regrets(const RunLog& log, const VcgBenchmark& bench,
                             const LinearMdpInstance& inst);

/// Least-squares slope of log(regret) against log(T). Nonpositive regret
/// points are dropped with a warning; fewer than 3 survivors is an error.
double fit_exponent(const std::vector<std::pair<double, double>>& points,
                    std::vector<std::string>* warnings = nullptr);

struct ExperimentConfig {
    InstanceSpec instance;
    std::vector<ReportingStrategy> strategies; // resized to n agents if empty
    std::vector<int> T_grid;
    int seeds = 1;
    std::uint64_t base_seed = 1;
    MechanismConfig mech; // T, K and seed are filled per cell
    int threads = 1;      // 1 = serial reference path, 0 = all cores
    bool keep_series = false;
    std::string log_dir;  // when nonempty, each cell's run log is written here

    void validate() const;
};

struct SeriesRow {
    int t = 0;
    int phase = 0; // 0 explore, 1 exploit
    double reg_w = 0.0, reg0 = 0.0;
    std::vector<double> regi, price;
    double z_running = 0.0;
};

struct CellResult {
    int T = 0;
    int seed_index = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;

    double Reg_W = 0.0, Reg_0 = 0.0, Reg_sharp = 0.0;
    std::vector<double> Reg_i;
    std::vector<double> Ui_over_T; // mean per-round agent utility
    double u0_over_T = 0.0;
    double mean_price = 0.0; // over all rounds and agents
    double Z = 0.0;
    std::vector<SeriesRow> series; // populated only when keep_series
};

struct TAggregate {
    int T = 0;
    int surviving = 0;
    double mean_reg_w = 0.0, half_reg_w = 0.0;
    double mean_reg_w_over_T = 0.0;
    double mean_reg0 = 0.0;
    std::vector<double> mean_reg_i;
    std::vector<double> mean_ui_over_T;
    double mean_price = 0.0;
};

struct ExperimentSummary {
    ExperimentConfig config;
    std::vector<CellResult> cells;       // ordered by (T index, seed index)
    std::vector<TAggregate> aggregates;  // one per T
    std::optional<double> slope;         // fitted welfare-regret exponent
    std::vector<std::string> warnings;
};

/// Runs the full (T, seed) grid, scores each run against the oracle
/// benchmark, aggregates per T, and fits the regret exponent. Cells run in
/// parallel when threads != 1; results are identical to the serial path
/// because every cell owns a seed derived from its grid position and the
/// aggregation is a fixed-order reduce.
ExperimentSummary run_experiment(const ExperimentConfig& config);

/// CSV projection of the per-round series: one row per (seed, round).
std::string series_csv(const ExperimentSummary& summary);

/// Compact per-round CSV for a single report (same columns as series_csv).
std::string report_csv(const RegretReport& report);

} // namespace mvcg
