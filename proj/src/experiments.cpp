#include "rso/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rso/errors.hpp"
#include "rso/simplify.hpp"

namespace rso {

namespace {

constexpr std::uint64_t kDrawStream = 7001;
constexpr std::uint64_t kLosStream = 7002;

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void guard_cv(const std::vector<double>& times, double cv_max, const std::string& what) {
    const double m = mean_of(times);
    if (!(m > 0.0)) throw TimingUnstable("zero mean runtime for " + what);
    if (sd_of(times, m) / m > cv_max)
        throw TimingUnstable("runtime CV above " + std::to_string(cv_max) + " for " + what);
}

std::vector<double> sorted_uniform_draws(int count, double lo, double hi, std::uint64_t seed) {
    RngStream rng(seed, kDrawStream);
    std::vector<double> draws(static_cast<std::size_t>(count));
    for (double& d : draws) d = rng.uniform(lo, hi);
    std::sort(draws.begin(), draws.end());
    return draws;
}

struct TimedBatch {
    double mean_runtime = 0.0;
    SimulationResult last;  // occupancies/arrivals of the final replication
    std::vector<SimulationResult> all;
};

// r timed replications (after one discarded warm-up measurement), serial.
TimedBatch timed_batch(const NetworkSpec& net, const ExperimentConfig& cfg,
                       std::uint64_t point_seed, const std::string& what) {
    TimedBatch batch;
    std::vector<double> times;
    for (int rep = -1; rep < cfg.replications; ++rep) {
        RunOptions opt;
        opt.warmup_minutes = cfg.warmup_minutes;
        opt.run_minutes = cfg.run_minutes;
        opt.seed = point_seed + static_cast<std::uint64_t>(std::max(rep, 0));
        opt.timed = true;
        opt.collect_los = false;
        SimulationResult res = run_simulation(net, opt);
        if (rep < 0) continue;
        times.push_back(res.wall_runtime_seconds);
        batch.all.push_back(std::move(res));
    }
    guard_cv(times, cfg.timing_cv_max, what);
    batch.mean_runtime = mean_of(times);
    batch.last = batch.all.back();
    return batch;
}

double mean_over_reps(const TimedBatch& batch, const std::string& id, bool occupancy) {
    double sum = 0.0;
    for (const SimulationResult& r : batch.all)
        sum += occupancy ? r.occupancy.at(id) : static_cast<double>(r.arrivals.at(id));
    return sum / static_cast<double>(batch.all.size());
}

// Validation experiment 1 parent: the two-stage tandem system with the
// second stage (the one abstracted out) in the named class.
NetworkSpec validation1_parent(QueueClass cls, double rho2) {
    NetworkSpec net;
    switch (cls) {
        case QueueClass::MM:
            net.interarrival = DistributionSpec::exponential(1.0 / rho2);
            net.subsystems.push_back({"s1", 1, DistributionSpec::exponential(1.0)});
            net.subsystems.push_back({"s2", 1, DistributionSpec::exponential(1.0)});
            break;
        case QueueClass::MG:
            // second stage uniform on [3, 9] minutes, mean 6
            net.interarrival = DistributionSpec::exponential(6.0 / rho2);
            net.subsystems.push_back({"s1", 1, DistributionSpec::exponential(1.0)});
            net.subsystems.push_back({"s2", 1, DistributionSpec::uniform(3.0, 9.0)});
            break;
        case QueueClass::GG:
            // uniform interarrivals spanning +/-50% of the tuned mean
            net.interarrival = DistributionSpec::uniform(0.5 * (2.0 / rho2), 1.5 * (2.0 / rho2));
            net.subsystems.push_back({"s1", 1, DistributionSpec::exponential(2.0)});
            net.subsystems.push_back({"s2", 1, DistributionSpec::normal(2.0, 0.2, 0.01)});
            break;
    }
    net.routing = {{kGeneratorId, "s1", 1.0}, {"s1", "s2", 1.0}, {"s2", kSinkId, 1.0}};
    return net;
}

}  // namespace

ValidationOutcome run_validation1(const CalibrationProfile& profile, QueueClass cls,
                                  const ExperimentConfig& config) {
    const std::vector<double> draws =
        sorted_uniform_draws(config.draw_count, config.rho_lo, config.rho_hi, config.seed);
    ValidationOutcome outcome;
    std::vector<double> observed, predicted;

    for (std::size_t k = 0; k < draws.size(); ++k) {
        const double rho_target = draws[k];
        const NetworkSpec parent = validation1_parent(cls, rho_target);
        const std::uint64_t point_seed = config.seed + 1000003ULL * (k + 1);

        TimedBatch parent_batch =
            timed_batch(parent, config, point_seed, "validation-1 parent rho=" +
                                                        std::to_string(rho_target));
        const double rho_hat = mean_over_reps(parent_batch, "s2", true);
        const double n_hat = mean_over_reps(parent_batch, "s2", false);

        ParentObservation obs;
        obs.subsystems["s1"] = {cls, mean_over_reps(parent_batch, "s1", true),
                                mean_over_reps(parent_batch, "s1", false)};
        obs.subsystems["s2"] = {cls, rho_hat, n_hat};
        obs.run_minutes = config.run_minutes;
        obs.replications = config.replications;
        SimplificationOp op;
        op.k1 = {"s2"};
        const PredictionReport prediction = predict_rs(profile, obs, op);

        // Build the simplified model from the parent's second-stage LOS.
        const auto los_sets = collect_los(parent, {{"s2"}}, config.warmup_minutes,
                                          config.run_minutes, point_seed + kLosStream);
        std::map<std::string, FittedLos> los;
        los["s2"] = fit_los(los_sets.at("s2").samples);
        const NetworkSpec simplified = apply_simplification(parent, op, los);

        TimedBatch simplified_batch =
            timed_batch(simplified, config, point_seed, "validation-1 simplified rho=" +
                                                            std::to_string(rho_target));

        ValidationRow row;
        row.subsystem_ids = {"s1", "s2"};
        row.rho = {obs.subsystems["s1"].rho, rho_hat};
        row.arrivals = {obs.subsystems["s1"].arrivals, n_hat};
        row.parent_runtime = parent_batch.mean_runtime;
        row.simplified_runtime = simplified_batch.mean_runtime;
        row.predicted_rs = prediction.total_phi;
        row.actual_rs = parent_batch.mean_runtime - simplified_batch.mean_runtime;
        row.error = row.actual_rs - row.predicted_rs;
        row.pe = row.actual_rs != 0.0 ? (row.actual_rs - row.predicted_rs) / row.actual_rs * 100.0
                                      : 0.0;
        row.ape = std::abs(row.pe);
        outcome.rows.push_back(std::move(row));
        observed.push_back(outcome.rows.back().actual_rs);
        predicted.push_back(outcome.rows.back().predicted_rs);
    }
    outcome.metrics = compute_metrics(observed, predicted);
    return outcome;
}

namespace {

struct Stage3Loads {
    double load_s1, load_s2, load_s3, load_s4;  // mean service demand per arrival, minutes
};

Stage3Loads validation2_loads(QueueClass cls) {
    switch (cls) {
        case QueueClass::MM: return {2.0, 3.0, 0.4 * 7.0, 0.6 * 5.0};
        case QueueClass::MG: return {2.0, 2.0, 0.4 * 6.0, 0.6 * 6.0};
        case QueueClass::GG: return {3.0, 7.0 / 3.0, 0.4 * 5.0, 0.6 * 6.0};
    }
    throw ConfigError("bad class");
}

}  // namespace

double validation2_rho3_cap(QueueClass cls, double rho_hi) {
    const Stage3Loads loads = validation2_loads(cls);
    const double max_load =
        std::max({loads.load_s1, loads.load_s2, loads.load_s3, loads.load_s4});
    return rho_hi * loads.load_s3 / max_load;
}

NetworkSpec validation2_parent(QueueClass cls, double rho3) {
    const Stage3Loads loads = validation2_loads(cls);
    const double arrival_rate = rho3 / loads.load_s3;
    const double mean_ia = 1.0 / arrival_rate;

    NetworkSpec net;
    switch (cls) {
        case QueueClass::MM:
            net.interarrival = DistributionSpec::exponential(mean_ia);
            net.subsystems.push_back({"s1", 1, DistributionSpec::exponential(2.0)});
            net.subsystems.push_back({"s2", 1, DistributionSpec::exponential(3.0)});
            net.subsystems.push_back({"s3", 1, DistributionSpec::exponential(7.0)});
            net.subsystems.push_back({"s4", 1, DistributionSpec::exponential(5.0)});
            break;
        case QueueClass::MG:
            net.interarrival = DistributionSpec::exponential(mean_ia);
            net.subsystems.push_back({"s1", 1, DistributionSpec::exponential(2.0)});
            net.subsystems.push_back({"s2", 1, DistributionSpec::exponential(2.0)});
            net.subsystems.push_back({"s3", 1, DistributionSpec::normal(6.0, 2.0, 0.01)});
            // mean 6, sd 2
            net.subsystems.push_back({"s4", 1, DistributionSpec::gamma(9.0, 2.0 / 3.0)});
            break;
        case QueueClass::GG:
            net.interarrival = DistributionSpec::normal(mean_ia, 1.5, 0.01);
            net.subsystems.push_back({"s1", 1, DistributionSpec::gamma(9.0, 1.0 / 3.0)});
            net.subsystems.push_back({"s2", 1, DistributionSpec::gamma(11.11, 0.21)});
            net.subsystems.push_back({"s3", 1, DistributionSpec::normal(5.0, 1.5, 0.01)});
            net.subsystems.push_back({"s4", 1, DistributionSpec::gamma(9.0, 2.0 / 3.0)});
            break;
    }
    net.routing = {{kGeneratorId, "s1", 1.0}, {"s1", "s2", 1.0},   {"s2", "s3", 0.4},
                   {"s2", "s4", 0.6},         {"s3", kSinkId, 1.0}, {"s4", kSinkId, 1.0}};
    return net;
}

ValidationOutcome run_validation2(const CalibrationProfile& profile, QueueClass cls, int scenario,
                                  const ExperimentConfig& config) {
    if (scenario != 1 && scenario != 2) throw ConfigError("scenario must be 1 or 2");
    const double cap = std::min(config.rho_hi, validation2_rho3_cap(cls, config.rho_hi));
    const std::vector<double> draws =
        sorted_uniform_draws(config.draw_count, config.rho_lo, cap, config.seed);

    ValidationOutcome outcome;
    std::vector<double> observed, predicted;
    const std::vector<std::string> all_ids = {"s1", "s2", "s3", "s4"};

    for (std::size_t k = 0; k < draws.size(); ++k) {
        const double rho3_target = draws[k];
        const NetworkSpec parent = validation2_parent(cls, rho3_target);
        const std::uint64_t point_seed = config.seed + 2000003ULL * (k + 1);

        TimedBatch parent_batch =
            timed_batch(parent, config, point_seed, "validation-2 parent rho3=" +
                                                        std::to_string(rho3_target));

        ParentObservation obs;
        for (const std::string& id : all_ids)
            obs.subsystems[id] = {cls, mean_over_reps(parent_batch, id, true),
                                  mean_over_reps(parent_batch, id, false)};
        obs.run_minutes = config.run_minutes;
        obs.replications = config.replications;

        SimplificationOp op;
        std::map<std::string, FittedLos> los;
        if (scenario == 1) {
            op.k1 = {"s3", "s4"};
            const auto los_sets = collect_los(parent, {{"s3"}, {"s4"}}, config.warmup_minutes,
                                              config.run_minutes, point_seed + kLosStream);
            los["s3"] = fit_los(los_sets.at("s3").samples);
            los["s4"] = fit_los(los_sets.at("s4").samples);
        } else {
            op.k2 = {"s2", "s3", "s4"};
            obs.n_sim2 = obs.subsystems["s2"].arrivals;  // every entity enters the group via s2
            const std::vector<std::string> group = {"s2", "s3", "s4"};
            const auto los_sets = collect_los(parent, {group}, config.warmup_minutes,
                                              config.run_minutes, point_seed + kLosStream);
            los[group_key(group)] = fit_los(los_sets.at(group_key(group)).samples);
        }
        const PredictionReport prediction = predict_rs(profile, obs, op);
        const NetworkSpec simplified = apply_simplification(parent, op, los);

        TimedBatch simplified_batch =
            timed_batch(simplified, config, point_seed, "validation-2 simplified rho3=" +
                                                            std::to_string(rho3_target));

        ValidationRow row;
        row.subsystem_ids = all_ids;
        for (const std::string& id : all_ids) {
            row.rho.push_back(obs.subsystems[id].rho);
            row.arrivals.push_back(obs.subsystems[id].arrivals);
        }
        row.parent_runtime = parent_batch.mean_runtime;
        row.simplified_runtime = simplified_batch.mean_runtime;
        row.predicted_rs = prediction.total_phi;
        row.actual_rs = parent_batch.mean_runtime - simplified_batch.mean_runtime;
        row.error = row.actual_rs - row.predicted_rs;
        row.pe = row.actual_rs != 0.0 ? (row.actual_rs - row.predicted_rs) / row.actual_rs * 100.0
                                      : 0.0;
        row.ape = std::abs(row.pe);
        outcome.rows.push_back(std::move(row));
        observed.push_back(outcome.rows.back().actual_rs);
        predicted.push_back(outcome.rows.back().predicted_rs);
    }
    outcome.metrics = compute_metrics(observed, predicted);
    return outcome;
}

std::vector<ScalingRow> run_scaling(QueueClass cls, const ScalingConfig& config) {
    if (cls == QueueClass::GG) throw ConfigError("the scaling study covers mm and mg systems");
    std::vector<ScalingRow> rows;
    for (std::size_t idx = 0; idx < config.server_counts.size(); ++idx) {
        const int n = config.server_counts[idx];
        if (n < 1) throw ConfigError("server count must be >= 1");
        // Per-server mean service time scales with n, so capacity and
        // occupancy stay fixed while the idle-server scan grows.
        const double base_mean = 0.1;  // minutes
        const double per_server_mean = base_mean * static_cast<double>(n);
        DistributionSpec service =
            cls == QueueClass::MM
                ? DistributionSpec::exponential(per_server_mean)
                : DistributionSpec::gamma(4.0, per_server_mean / 4.0);
        NetworkSpec net;
        net.interarrival = DistributionSpec::exponential(base_mean / config.occupancy);
        net.subsystems.push_back({"s1", n, service});
        net.routing = {{kGeneratorId, "s1", 1.0}, {"s1", kSinkId, 1.0}};

        std::vector<double> times;
        for (int rep = -1; rep < config.replications; ++rep) {
            RunOptions opt;
            opt.warmup_minutes = config.warmup_minutes;
            opt.run_minutes = config.run_minutes;
            opt.seed = config.seed + 4000037ULL * (idx + 1) +
                       static_cast<std::uint64_t>(std::max(rep, 0));
            opt.timed = true;
            opt.collect_los = false;
            const SimulationResult res = run_simulation(net, opt);
            if (rep < 0) continue;
            times.push_back(res.wall_runtime_seconds);
        }
        guard_cv(times, config.timing_cv_max, "scaling n=" + std::to_string(n));
        ScalingRow row;
        row.n_servers = n;
        row.mean_runtime = mean_of(times);
        row.sd_runtime = sd_of(times, row.mean_runtime);
        rows.push_back(row);
    }
    return rows;
}

std::vector<WaitCurvePoint> run_waiting_curve(const std::vector<QueueClass>& classes,
                                              const GridSpec& grid, std::uint64_t seed,
                                              SimTime warmup_minutes, SimTime run_minutes) {
    std::vector<WaitCurvePoint> points;
    for (QueueClass cls : classes) {
        const std::vector<double> rhos = grid.points();
        for (std::size_t i = 0; i < rhos.size(); ++i) {
            // Single queue-server system of the class-defining (second) stage.
            NetworkSpec net;
            const double mean_service = archetype_service_mean(cls);
            const double mean_ia = interarrival_for_occupancy(rhos[i], mean_service, 1);
            switch (cls) {
                case QueueClass::MM:
                    net.interarrival = DistributionSpec::exponential(mean_ia);
                    net.subsystems.push_back({"s1", 1, DistributionSpec::exponential(1.0)});
                    break;
                case QueueClass::MG:
                    net.interarrival = DistributionSpec::exponential(mean_ia);
                    net.subsystems.push_back({"s1", 1, DistributionSpec::normal(2.0, 0.2, 0.01)});
                    break;
                case QueueClass::GG:
                    net.interarrival = DistributionSpec::normal(mean_ia, 1.5, 0.01);
                    net.subsystems.push_back({"s1", 1, DistributionSpec::gamma(11.11, 0.45)});
                    break;
            }
            net.routing = {{kGeneratorId, "s1", 1.0}, {"s1", kSinkId, 1.0}};
            RunOptions opt;
            opt.warmup_minutes = warmup_minutes;
            opt.run_minutes = run_minutes;
            opt.seed = seed + 5000011ULL * (i + 1) + static_cast<std::uint64_t>(cls);
            opt.collect_los = false;
            const SimulationResult res = run_simulation(net, opt);
            points.push_back({cls, rhos[i], res.mean_queue_wait.at("s1")});
        }
    }
    return points;
}

}  // namespace rso
