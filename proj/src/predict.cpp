#include "rso/predict.hpp"

#include <cmath>

#include "rso/errors.hpp"

namespace rso {

namespace {

const SubsystemObservation& observation_for(const ParentObservation& obs, const std::string& id) {
    auto it = obs.subsystems.find(id);
    if (it == obs.subsystems.end())
        throw InvalidOperation("operation names subsystem " + id + " absent from the observation");
    const SubsystemObservation& s = it->second;
    if (!(s.rho > 0.0) || !(s.rho < 1.0))
        throw InvalidOperation("observed occupancy of " + id + " must lie in (0,1)");
    if (s.arrivals < 0.0) throw InvalidOperation("negative arrivals for " + id);
    return s;
}

struct GroupAccumulator {
    // Instructions accumulated per queue class; phi is evaluated with each
    // class's own g and summed.
    std::map<QueueClass, double> instructions;
    double total = 0.0;

    void add(QueueClass cls, double value) {
        instructions[cls] += value;
        total += value;
    }
};

double theta_ss_at(const CalibrationProfile& profile, QueueClass cls, double rho,
                   bool* clamped) {
    const RegressionModel& model = profile.models_for(cls).theta_ss;
    if (rho < model.fit_lo || rho > model.fit_hi) *clamped = true;
    return model.evaluate_clamped(rho);
}

GroupPrediction finish_group(const CalibrationProfile& profile, GroupAccumulator acc,
                             double shared_adjustment) {
    // The adjustment (hold instructions added, or the replacement subsystem's
    // instructions) applies to the group as a whole; spread it over the
    // classes in proportion to their share of the accumulated instructions.
    GroupPrediction g;
    g.rie = acc.total - shared_adjustment;
    double phi = 0.0;
    for (const auto& [cls, value] : acc.instructions) {
        const double share = acc.total != 0.0 ? value / acc.total : 1.0;
        const double rie_cls = value - shared_adjustment * share;
        phi += profile.models_for(cls).rs.evaluate(rie_cls / 1e4);
    }
    g.phi = phi;
    if (std::abs(g.rie) < 1.0 || g.phi < 0.0) g.near_zero = true;
    if (g.phi < 0.0) g.phi = 0.0;  // a negative intercept at tiny RIE is an artifact
    return g;
}

}  // namespace

double estimate_replacement_occupancy(double n_sim3, double run_minutes,
                                      const SubsystemSpec& replacement) {
    if (!(run_minutes > 0.0)) throw InvalidOperation("run_minutes must be positive");
    const double arrival_rate = n_sim3 / run_minutes;
    return arrival_rate * replacement.service.mean() / static_cast<double>(replacement.n_servers);
}

PredictionReport predict_rs(const CalibrationProfile& profile, const ParentObservation& obs,
                            const SimplificationOp& op) {
    op.validate(obs.subsystems.size());

    PredictionReport report;
    report.profile_fingerprint = profile.fingerprint_line();
    bool clamped = false;

    if (!op.k1.empty()) {
        GroupAccumulator acc;
        for (const std::string& id : op.k1) {
            const SubsystemObservation& s = observation_for(obs, id);
            const double theta = theta_ss_at(profile, s.queue_class, s.rho, &clamped);
            report.theta_ss_used[id] = theta;
            // Each K1 member gets its own hold, so the two hold instructions
            // per arrival stay with the member's class.
            acc.add(s.queue_class, (theta - 2.0) * s.arrivals);
        }
        report.g1 = finish_group(profile, std::move(acc), 0.0);
    }

    if (!op.k2.empty()) {
        if (!(obs.n_sim2 > 0.0))
            throw InvalidOperation("K2 requires n_sim2, the arrivals through the group");
        GroupAccumulator acc;
        for (const std::string& id : op.k2) {
            const SubsystemObservation& s = observation_for(obs, id);
            const double theta = theta_ss_at(profile, s.queue_class, s.rho, &clamped);
            report.theta_ss_used[id] = theta;
            acc.add(s.queue_class, theta * s.arrivals);
        }
        // One hold replaces the whole group: two instructions per group entry.
        report.g2 = finish_group(profile, std::move(acc), 2.0 * obs.n_sim2);
    }

    if (!op.k3.empty()) {
        if (!(obs.n_sim3 > 0.0))
            throw InvalidOperation("K3 requires n_sim3, the arrivals through the group");
        if (!obs.rho_sim || !obs.sim_class)
            throw InvalidOperation("K3 requires rho_sim and sim_class for the replacement");
        GroupAccumulator acc;
        for (const std::string& id : op.k3) {
            const SubsystemObservation& s = observation_for(obs, id);
            const double theta = theta_ss_at(profile, s.queue_class, s.rho, &clamped);
            report.theta_ss_used[id] = theta;
            acc.add(s.queue_class, theta * s.arrivals);
        }
        const double theta_sim = theta_ss_at(profile, *obs.sim_class, *obs.rho_sim, &clamped);
        report.theta_ss_used["sim"] = theta_sim;
        report.g3 = finish_group(profile, std::move(acc), theta_sim * obs.n_sim3);
    }

    report.total_phi = report.g1.phi + report.g2.phi + report.g3.phi;
    report.occupancy_clamped = clamped;
    report.near_zero_reduction =
        (!op.k1.empty() && report.g1.near_zero) || (!op.k2.empty() && report.g2.near_zero) ||
        (!op.k3.empty() && report.g3.near_zero);
    return report;
}

namespace {

void check_lengths(const std::vector<double>& observed, const std::vector<double>& predicted,
                   std::size_t min_n) {
    if (observed.size() != predicted.size())
        throw ZeroObservation("observed and predicted lengths differ");
    if (observed.size() < min_n)
        throw ZeroObservation("need at least " + std::to_string(min_n) + " pairs");
}

}  // namespace

double mape(const std::vector<double>& observed, const std::vector<double>& predicted) {
    check_lengths(observed, predicted, 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (observed[i] == 0.0) throw ZeroObservation("observed value is zero");
        sum += std::abs(observed[i] - predicted[i]) / std::abs(observed[i]);
    }
    return sum / static_cast<double>(observed.size()) * 100.0;
}

double mpe(const std::vector<double>& observed, const std::vector<double>& predicted) {
    check_lengths(observed, predicted, 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (observed[i] == 0.0) throw ZeroObservation("observed value is zero");
        sum += (observed[i] - predicted[i]) / observed[i];
    }
    return sum / static_cast<double>(observed.size()) * 100.0;
}

double rmse(const std::vector<double>& observed, const std::vector<double>& predicted) {
    check_lengths(observed, predicted, 1);
    double ss = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double d = observed[i] - predicted[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(observed.size()));
}

double rmse_root_sum(const std::vector<double>& observed, const std::vector<double>& predicted) {
    check_lengths(observed, predicted, 1);
    double ss = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double d = observed[i] - predicted[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

double r_squared(const std::vector<double>& observed, const std::vector<double>& predicted) {
    check_lengths(observed, predicted, 2);
    double mean = 0.0;
    for (double o : observed) mean += o;
    mean /= static_cast<double>(observed.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
        ss_tot += (observed[i] - mean) * (observed[i] - mean);
    }
    if (!(ss_tot > 0.0)) throw DegenerateVariance("all observed values are equal");
    return 1.0 - ss_res / ss_tot;
}

MetricsReport compute_metrics(const std::vector<double>& observed,
                              const std::vector<double>& predicted) {
    MetricsReport m;
    m.mape = mape(observed, predicted);
    m.mpe = mpe(observed, predicted);
    m.rmse = rmse(observed, predicted);
    m.rmse_root_sum = rmse_root_sum(observed, predicted);
    m.r_squared = r_squared(observed, predicted);
    m.n = static_cast<int>(observed.size());
    return m;
}

}  // namespace rso
