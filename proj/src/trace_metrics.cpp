#include "rso/trace_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "rso/errors.hpp"

namespace rso {

namespace {

constexpr std::uint64_t kSamplingStream = 9001;

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double replicate_theta(Archetype kind, QueueClass cls, double rho, const ThetaOptions& opt,
                       bool second_stage_only, int rep) {
    const std::uint64_t rep_seed = opt.seed + 0x10001ULL * static_cast<std::uint64_t>(rep);
    NetworkSpec net = build_archetype(kind, cls, rho);
    RunOptions run_opt;
    run_opt.warmup_minutes = opt.warmup_minutes;
    run_opt.run_minutes = opt.run_minutes;
    run_opt.seed = rep_seed;
    run_opt.trace_on = true;
    run_opt.collect_los = false;
    const SimulationResult result = run_simulation(net, run_opt);
    const std::vector<std::int32_t> counts =
        second_stage_only ? completed_window_counts(*result.trace, 1)
                          : completed_window_counts(*result.trace);
    RngStream sampling(rep_seed, second_stage_only ? kSamplingStream + 1 : kSamplingStream);
    return count_instructions(counts, opt.n_sample, opt.trim, sampling);
}

ThetaEstimate run_replications(Archetype kind, QueueClass cls, double rho,
                               const ThetaOptions& opt, bool second_stage_only) {
    if (opt.r < 1) throw ConfigError("replication count must be >= 1");
    std::vector<double> thetas(static_cast<std::size_t>(opt.r));
    if (opt.parallel && opt.r > 1) {
        std::vector<std::future<double>> jobs;
        jobs.reserve(static_cast<std::size_t>(opt.r));
        for (int rep = 0; rep < opt.r; ++rep)
            jobs.push_back(std::async(std::launch::async, replicate_theta, kind, cls, rho, opt,
                                      second_stage_only, rep));
        for (int rep = 0; rep < opt.r; ++rep)
            thetas[static_cast<std::size_t>(rep)] = jobs[static_cast<std::size_t>(rep)].get();
    } else {
        for (int rep = 0; rep < opt.r; ++rep)
            thetas[static_cast<std::size_t>(rep)] =
                replicate_theta(kind, cls, rho, opt, second_stage_only, rep);
    }
    ThetaEstimate est;
    est.theta = mean_of(thetas);
    est.sd = sd_of(thetas, est.theta);
    est.rho = rho;
    est.n_sampled = opt.n_sample;
    est.r = opt.r;
    return est;
}

}  // namespace

std::vector<std::int32_t> completed_window_counts(const Trace& trace) {
    std::vector<std::int32_t> counts;
    counts.reserve(trace.window_entities.size());
    for (std::uint64_t id : trace.window_entities) {
        const EntityRecord& e = trace.entities[id];
        if (e.departed()) counts.push_back(e.instruction_count);
    }
    return counts;
}

std::vector<std::int32_t> completed_window_counts(const Trace& trace, int node) {
    std::vector<std::int32_t> per_entity(trace.entities.size(), 0);
    for (const TraceRecord& r : trace.records)
        if (r.node == node) ++per_entity[r.entity_id];
    std::vector<std::int32_t> counts;
    counts.reserve(trace.window_entities.size());
    for (std::uint64_t id : trace.window_entities)
        if (trace.entities[id].departed()) counts.push_back(per_entity[id]);
    return counts;
}

double count_instructions(const std::vector<std::int32_t>& counts, int n_sample, int trim,
                          RngStream& rng) {
    if (n_sample < 1 || trim < 0) throw ConfigError("need n_sample >= 1 and trim >= 0");
    const std::size_t need = static_cast<std::size_t>(2 * trim + n_sample);
    if (counts.size() < need)
        throw InsufficientTrace("trace has " + std::to_string(counts.size()) +
                                " completed entities, need at least " + std::to_string(need));
    // Pool after dropping the first and last `trim` arrivals.
    std::vector<std::int32_t> pool(counts.begin() + trim, counts.end() - trim);
    // Partial Fisher-Yates: the first n_sample slots become the sample.
    const std::size_t n = static_cast<std::size_t>(n_sample);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += pool[i];
    return static_cast<double>(sum) / static_cast<double>(n);
}

double count_instructions(const Trace& trace, int n_sample, int trim, RngStream& rng) {
    return count_instructions(completed_window_counts(trace), n_sample, trim, rng);
}

ThetaEstimate theta_replicated(Archetype kind, QueueClass cls, double rho,
                               const ThetaOptions& options) {
    if (kind == Archetype::SecondStageOnly)
        throw UnsupportedArchetype("use theta_ss_replicated for the second-stage estimate");
    return run_replications(kind, cls, rho, options, false);
}

ThetaEstimate theta_ss_replicated(QueueClass cls, double rho, const ThetaOptions& options) {
    return run_replications(Archetype::TwoStage, cls, rho, options, true);
}

double theta_ss(const ThetaEstimate& theta_2s, const ThetaEstimate& theta_1s) {
    if (std::abs(theta_2s.rho - theta_1s.rho) > 0.005)
        throw MismatchedOccupancy("theta_2s at rho=" + std::to_string(theta_2s.rho) +
                                  " vs theta_1s at rho=" + std::to_string(theta_1s.rho));
    return theta_2s.theta - theta_1s.theta;
}

}  // namespace rso
