#pragma once

#include <cstdint>
#include <vector>

#include "rso/queueing_net.hpp"
#include "rso/rng.hpp"
#include "rso/sim_kernel.hpp"

namespace rso {

// Mean instructions per arrival, estimated from a trace.
struct ThetaEstimate {
    double theta = 0.0;
    double rho = 0.0;   // target occupancy the runs were parameterised for
    double sd = 0.0;    // across replications
    int n_sampled = 100;
    int r = 0;          // replication count
};

// Instruction counts of entities created inside the measurement window, in
// arrival order. All such entities have complete sequences (traced runs let
// in-flight entities finish), so the counts are whole.
std::vector<std::int32_t> completed_window_counts(const Trace& trace);

// Same, restricted to instructions attributed to one node (subsystem ordinal
// within the network); used to calibrate the stand-alone second stage.
std::vector<std::int32_t> completed_window_counts(const Trace& trace, int node);

// Drops the first and last `trim` entities, samples `n_sample` of the
// remainder without replacement, and returns the mean count. Throws
// InsufficientTrace when fewer than 2*trim + n_sample entities are available.
double count_instructions(const std::vector<std::int32_t>& counts, int n_sample, int trim,
                          RngStream& rng);
double count_instructions(const Trace& trace, int n_sample, int trim, RngStream& rng);

struct ThetaOptions {
    int r = 10;
    std::uint64_t seed = 1;
    SimTime warmup_minutes = 200.0 * 1440.0;
    SimTime run_minutes = 10.0 * 1440.0;
    int n_sample = 100;
    int trim = 10;
    bool parallel = true;  // traced runs are untimed and may run concurrently
};

// Runs r traced, untimed replications of the archetype and averages
// count_instructions over them. Replication k of two calls with the same
// options shares every random stream, so theta of an ms run exceeds theta of
// the matching 1s run by exactly the two hold instructions per arrival.
ThetaEstimate theta_replicated(Archetype kind, QueueClass cls, double rho,
                               const ThetaOptions& options = {});

// Second-stage estimate from the same 2s traces (node-attributed counts).
ThetaEstimate theta_ss_replicated(QueueClass cls, double rho, const ThetaOptions& options = {});

// theta_2s - theta_1s. Throws MismatchedOccupancy when the two estimates are
// more than 0.005 apart in occupancy.
double theta_ss(const ThetaEstimate& theta_2s, const ThetaEstimate& theta_1s);

}  // namespace rso
