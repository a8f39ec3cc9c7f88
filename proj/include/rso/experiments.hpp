#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rso/calibration.hpp"
#include "rso/predict.hpp"

namespace rso {

struct ExperimentConfig {
    int draw_count = 20;  // occupancy values drawn per experiment
    double rho_lo = 0.20;
    double rho_hi = 0.93;
    int replications = 30;  // 30 for the two-stage experiment, 10 for the three-stage one
    std::uint64_t seed = 1;
    SimTime warmup_minutes = 200.0 * 1440.0;
    SimTime run_minutes = 10.0 * 1440.0;
    double timing_cv_max = 0.10;
};

struct ValidationRow {
    std::vector<std::string> subsystem_ids;
    std::vector<double> rho;       // measured occupancy per subsystem
    std::vector<double> arrivals;  // measured arrivals per subsystem
    double parent_runtime = 0.0;
    double simplified_runtime = 0.0;
    double predicted_rs = 0.0;
    double actual_rs = 0.0;
    double error = 0.0;  // actual - predicted
    double pe = 0.0;     // percent
    double ape = 0.0;    // percent
};

struct ValidationOutcome {
    std::vector<ValidationRow> rows;
    MetricsReport metrics;
};

// Two-stage abstraction experiment: for each drawn occupancy, time the
// parent, predict the savings for O = ({s2},{},{}), build and time the
// simplified model, and compare.
ValidationOutcome run_validation1(const CalibrationProfile& profile, QueueClass cls,
                                  const ExperimentConfig& config);

// Three-stage network with a 40/60 parallel split in the third stage.
// Scenario 1: O = ({s3,s4},{},{}); scenario 2: O = ({},{s2,s3,s4},{}).
ValidationOutcome run_validation2(const CalibrationProfile& profile, QueueClass cls, int scenario,
                                  const ExperimentConfig& config);

// The three-stage parent network of the second validation experiment.
NetworkSpec validation2_parent(QueueClass cls, double bottleneck_rho);
// Highest stage-3 occupancy that keeps every subsystem at or below rho_hi.
double validation2_rho3_cap(QueueClass cls, double rho_hi);

struct ScalingRow {
    int n_servers = 0;
    double mean_runtime = 0.0;
    double sd_runtime = 0.0;
};

struct ScalingConfig {
    std::vector<int> server_counts = {25, 50, 100, 200, 500, 1000};
    int replications = 30;
    std::uint64_t seed = 1;
    double occupancy = 0.7;
    SimTime warmup_minutes = 1440.0;
    SimTime run_minutes = 10.0 * 1440.0;
    double timing_cv_max = 0.10;
};

// Single-stage M/M/n or M/G/n timed runs at constant occupancy; per-server
// service rates scale with n so the offered load stays fixed.
std::vector<ScalingRow> run_scaling(QueueClass cls, const ScalingConfig& config);

struct WaitCurvePoint {
    QueueClass queue_class;
    double rho = 0.0;
    double mean_wait = 0.0;  // minutes in queue
};

std::vector<WaitCurvePoint> run_waiting_curve(const std::vector<QueueClass>& classes,
                                              const GridSpec& grid, std::uint64_t seed,
                                              SimTime warmup_minutes, SimTime run_minutes);

}  // namespace rso
