#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rso/queueing_net.hpp"
#include "rso/regression.hpp"
#include "rso/trace_metrics.hpp"

namespace rso {

// Occupancy grid; defaults to 0.20..0.93 step 0.01 (74 points).
struct GridSpec {
    double lo = 0.20;
    double hi = 0.93;
    double step = 0.01;

    std::vector<double> points() const;
};

struct CalibrationRow {
    double rho = 0.0;
    // Stage 1: mean instructions per arrival
    double theta_2s = 0.0;
    double theta_1s = 0.0;
    double theta_ss = 0.0;
    double theta_ms = 0.0;  // theta_1s + 2, structurally
    double sd_2s = 0.0;
    double sd_1s = 0.0;
    // Stage 2: mean arrivals and mean wall runtime (seconds) per model kind
    double n_2s = 0.0;
    double n_ms = 0.0;
    double t_2s = 0.0;
    double t_ms = 0.0;
};

struct CalibrationDataset {
    QueueClass queue_class = QueueClass::MM;
    GridSpec grid;
    int replications = 10;
    std::vector<CalibrationRow> rows;
};

struct ClassModels {
    RegressionModel theta_2s;
    RegressionModel theta_1s;
    RegressionModel theta_ss;
    RegressionModel theta_ms;  // theta_1s with the intercept raised by 2
    RegressionModel rs;        // phi (seconds) vs reduction in instructions (x1e4)
};

struct MachineFingerprint {
    std::string hostname;
    std::string timestamp;  // ISO-8601, recorded at fit time
    std::string engine_version;
};

struct CalibrationProfile {
    int schema_version = 1;
    MachineFingerprint fingerprint;
    GridSpec grid;
    int replications = 10;
    std::map<QueueClass, ClassModels> classes;

    bool has_class(QueueClass c) const { return classes.count(c) > 0; }
    const ClassModels& models_for(QueueClass c) const;
    std::string fingerprint_line() const;
};

struct CalibrationOptions {
    int replications = 10;
    std::uint64_t seed = 1;
    SimTime warmup_minutes = 200.0 * 1440.0;
    SimTime run_minutes = 10.0 * 1440.0;
    int n_sample = 100;
    int trim = 10;
    // Replication coefficient of variation of wall runtimes above this bound
    // aborts a timed collection (contaminated measurements). Overridable via
    // the RS_ORACLE_TIMING_CV_MAX environment variable.
    double timing_cv_max = 0.10;
    bool parallel_traced = true;
};

// The RS_ORACLE_TIMING_CV_MAX environment variable, or `fallback` when unset.
double timing_cv_env_override(double fallback);

double effective_timing_cv_max(const CalibrationOptions& options);

// Stage 1: traced, untimed runs across the grid; fills the theta columns.
CalibrationDataset collect_stage1(QueueClass cls, const GridSpec& grid,
                                  const CalibrationOptions& options = {});

// Ordinary least squares fits of the theta columns. Degrees per class:
// mm -> (2s:1, 1s:1, ss:1), mg -> (2s:2, 1s:1, ss:2), gg -> (2s:2, 1s:2, ss:2);
// G/G rows at rho <= 0.50 are dropped before fitting and the fit domain
// starts at 0.50.
ClassModels fit_theta_models(const CalibrationDataset& dataset);

// Stage 2: timed, untraced 2s and ms runs (serial); fills n and t columns.
// Throws TimingUnstable when a grid point's runtime CV exceeds the bound.
void collect_stage2(CalibrationDataset& dataset, const CalibrationOptions& options = {});

// (reduction in instructions, runtime savings seconds) pairs per Stage 2,
// with theta taken from the fitted Stage 1 models.
std::vector<std::pair<double, double>> stage2_pairs(const CalibrationDataset& dataset,
                                                    const ClassModels& models);

// Fits phi = g(I-bar) with x in units of 1e4 instructions. Degree: mm 1,
// mg 2, gg 1. Needs at least 10 pairs.
RegressionModel fit_rs_model(const std::vector<std::pair<double, double>>& pairs,
                             QueueClass cls);

// Full Stage 1 + Stage 2 calibration of one class.
ClassModels calibrate_class(QueueClass cls, const GridSpec& grid,
                            const CalibrationOptions& options, CalibrationDataset* dataset_out);

CalibrationProfile make_profile(const GridSpec& grid, int replications);

void save_profile(const CalibrationProfile& profile, const std::string& path);
CalibrationProfile load_profile(const std::string& path);

}  // namespace rso
