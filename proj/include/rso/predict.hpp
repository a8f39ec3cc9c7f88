#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rso/calibration.hpp"
#include "rso/simplify.hpp"

namespace rso {

struct SubsystemObservation {
    QueueClass queue_class = QueueClass::MM;
    double rho = 0.0;       // occupancy fraction in (0,1)
    double arrivals = 0.0;  // entity arrivals over the observed run
};

// What one run of the parent model tells us, as consumed by the deployment
// algorithm.
struct ParentObservation {
    std::map<std::string, SubsystemObservation> subsystems;
    double n_sim2 = 0.0;  // total arrivals through the K2 group
    double n_sim3 = 0.0;  // total arrivals through the K3 group
    // Projected occupancy and class of the K3 replacement subsystem; supplied
    // by the caller (estimate_replacement_occupancy helps).
    std::optional<double> rho_sim;
    std::optional<QueueClass> sim_class;
    double run_minutes = 0.0;
    int replications = 0;
};

struct GroupPrediction {
    double rie = 0.0;      // reduction in instructions executed (raw count)
    double phi = 0.0;      // predicted runtime savings, seconds
    bool near_zero = false;
};

struct PredictionReport {
    GroupPrediction g1, g2, g3;
    double total_phi = 0.0;
    std::map<std::string, double> theta_ss_used;
    std::string profile_fingerprint;
    bool occupancy_clamped = false;  // some rho fell outside the fit domain
    bool near_zero_reduction = false;
};

// Offered-load estimate of the replacement subsystem's occupancy:
// (n_sim3 / run_minutes) * mean service time / n_servers. An estimate, not a
// measurement; callers can override.
double estimate_replacement_occupancy(double n_sim3, double run_minutes,
                                      const SubsystemSpec& replacement);

// Deployment of the calibrated framework for one simplification operation.
// Pure and deterministic given (profile, obs, op).
PredictionReport predict_rs(const CalibrationProfile& profile, const ParentObservation& obs,
                            const SimplificationOp& op);

// --- prediction-quality metrics -------------------------------------------
// The published formulas omit the 1/N factor; the reported values are means,
// so the mean forms are primary and the literal root-sum RMSE is kept under
// its own name.

double mape(const std::vector<double>& observed, const std::vector<double>& predicted);
double mpe(const std::vector<double>& observed, const std::vector<double>& predicted);
double rmse(const std::vector<double>& observed, const std::vector<double>& predicted);
double rmse_root_sum(const std::vector<double>& observed, const std::vector<double>& predicted);
double r_squared(const std::vector<double>& observed, const std::vector<double>& predicted);

struct MetricsReport {
    double mape = 0.0;           // percent
    double mpe = 0.0;            // percent
    double rmse = 0.0;           // seconds, mean form
    double rmse_root_sum = 0.0;  // seconds, literal no-1/N form
    double r_squared = 0.0;
    int n = 0;
};

MetricsReport compute_metrics(const std::vector<double>& observed,
                              const std::vector<double>& predicted);

}  // namespace rso
