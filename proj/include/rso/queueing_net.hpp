#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rso/distributions.hpp"
#include "rso/sim_kernel.hpp"

namespace rso {

enum class QueueClass { MM, MG, GG };

const char* queue_class_name(QueueClass c);
QueueClass queue_class_from_name(const std::string& name);

enum class Archetype { TwoStage, SingleStage, SecondStageOnly, Simplified };

const char* archetype_name(Archetype k);
Archetype archetype_from_name(const std::string& name);

// One queue plus one or several FIFO servers.
struct SubsystemSpec {
    std::string id;
    int n_servers = 1;
    DistributionSpec service;
};

struct HoldSpec {
    std::string id;
    DistributionSpec los;
    std::vector<std::string> replaced_group;  // subsystem ids this hold stands in for
};

struct RouteEdge {
    std::string from;  // "gen", a subsystem id, or a hold id
    std::string to;    // a subsystem id, a hold id, or "sink"
    double probability = 1.0;
};

inline constexpr const char* kGeneratorId = "gen";
inline constexpr const char* kSinkId = "sink";
// los_samples key for the whole-system (creation to departure) length of stay.
inline constexpr const char* kSystemLosKey = "system";

// Declarative queueing network: one generator, live subsystems, optional LOS
// holds (for simplified models), probabilistic routing.
struct NetworkSpec {
    DistributionSpec interarrival;
    std::vector<SubsystemSpec> subsystems;
    std::vector<HoldSpec> holds;
    std::vector<RouteEdge> routing;

    // Throws ConfigError on dangling endpoints, bad probabilities, duplicate
    // ids, or holds overlapping live subsystems.
    void validate() const;

    const SubsystemSpec* find_subsystem(const std::string& id) const;
};

struct RunOptions {
    SimTime warmup_minutes = 200.0 * 1440.0;
    SimTime run_minutes = 10.0 * 1440.0;
    std::uint64_t seed = 1;
    bool trace_on = false;
    bool timed = false;
    // Subsystem groups whose joint LOS (entry to first member through exit of
    // last member) should be sampled, keyed by the returned map key.
    std::map<std::string, std::vector<std::string>> los_groups;
    bool collect_los = true;  // per-subsystem and whole-system LOS samples
};

struct SimulationResult {
    std::map<std::string, double> occupancy;          // busy-time fraction per subsystem
    std::map<std::string, std::int64_t> arrivals;     // queue entries per subsystem
    std::int64_t total_arrivals = 0;                  // entities created in the window
    std::int64_t total_instructions = 0;              // engine instructions over the whole run
    std::map<std::string, std::vector<double>> los_samples;
    std::map<std::string, double> mean_queue_wait;
    std::map<std::string, double> mean_num_in_system;
    std::map<std::string, std::int64_t> completions;
    // conservation accounting over the whole run
    std::int64_t created_total = 0;
    std::int64_t departed_total = 0;
    std::map<std::string, std::int64_t> in_flight;
    double wall_runtime_seconds = 0.0;  // post-warm-up execution only; timed runs
    std::optional<Trace> trace;

    double occupancy_of(const std::string& id) const;
};

// Runs the network for warmup + run_length simulated minutes. Statistics are
// collected over the post-warm-up window only. `timed` wall-clocks the
// post-warm-up execution under a process-wide lock; `trace_on` records the
// instruction trace (the two are mutually exclusive). Traced or LOS-group
// runs complete all in-window entities before returning so their instruction
// sequences and group LOS values are whole.
SimulationResult run_simulation(const NetworkSpec& spec, const RunOptions& options);

SimulationResult run_simulation(const NetworkSpec& spec, SimTime warmup, SimTime run_length,
                                std::uint64_t seed, bool trace_on, bool timed);

// rho * service_rate * run_length, rounded to the nearest integer.
std::int64_t expected_arrivals(double rho, double service_rate_per_min, double run_minutes);

// Table-style archetype networks ("2s", "1s", "ms") for a queue class, with
// the interarrival tuned so the second-stage (or sole) server sits at rho.
// The "ss" archetype is analysis-only and is rejected with
// UnsupportedArchetype.
NetworkSpec build_archetype(Archetype kind, QueueClass cls, double rho);

// Mean service time of the class's (second-stage) subsystem, per the standard
// parameterisation used by build_archetype.
double archetype_service_mean(QueueClass cls);

}  // namespace rso
