#include "rso/calibration.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <numeric>

#include "json.hpp"
#include "rso/errors.hpp"

namespace rso {

namespace {

using nlohmann::json;

constexpr const char* kProfileSchema = "rs-oracle-profile";
constexpr const char* kEngineVersion = "rs-oracle 1.0";
constexpr std::uint64_t kSamplingStreamTotal = 9001;
constexpr std::uint64_t kSamplingStreamStage2 = 9002;

std::uint64_t point_seed(std::uint64_t base, QueueClass cls, std::size_t rho_index, int rep) {
    std::uint64_t h = base;
    h = h * 0x100000001b3ULL + static_cast<std::uint64_t>(cls) + 1;
    h = h * 0x100000001b3ULL + rho_index + 1;
    h = h * 0x100000001b3ULL + static_cast<std::uint64_t>(rep) + 1;
    return h;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct Stage1Rep {
    double theta_2s;
    double theta_ss;
    double theta_1s;
};

Stage1Rep stage1_replicate(QueueClass cls, double rho, const CalibrationOptions& opt,
                           std::uint64_t rep_seed) {
    RunOptions run_opt;
    run_opt.warmup_minutes = opt.warmup_minutes;
    run_opt.run_minutes = opt.run_minutes;
    run_opt.seed = rep_seed;
    run_opt.trace_on = true;
    run_opt.collect_los = false;

    Stage1Rep rep{};
    {
        const NetworkSpec net = build_archetype(Archetype::TwoStage, cls, rho);
        const SimulationResult res = run_simulation(net, run_opt);
        RngStream total_rng(rep_seed, kSamplingStreamTotal);
        rep.theta_2s = count_instructions(completed_window_counts(*res.trace), opt.n_sample,
                                          opt.trim, total_rng);
        // Stand-alone second stage: instructions attributed to node 1 of the
        // same traces, sampled with the same stream so the 100 entities match.
        RngStream ss_rng(rep_seed, kSamplingStreamTotal);
        rep.theta_ss = count_instructions(completed_window_counts(*res.trace, 1), opt.n_sample,
                                          opt.trim, ss_rng);
    }
    {
        const NetworkSpec net = build_archetype(Archetype::SingleStage, cls, rho);
        const SimulationResult res = run_simulation(net, run_opt);
        RngStream total_rng(rep_seed, kSamplingStreamTotal);
        rep.theta_1s = count_instructions(completed_window_counts(*res.trace), opt.n_sample,
                                          opt.trim, total_rng);
    }
    return rep;
}

void check_timing_cv(const std::vector<double>& times, double rho, const char* kind,
                     double cv_max) {
    const double mean = mean_of(times);
    if (!(mean > 0.0)) throw TimingUnstable("zero mean runtime measured");
    const double cv = sd_of(times, mean) / mean;
    if (cv > cv_max)
        throw TimingUnstable("runtime CV " + std::to_string(cv) + " above bound " +
                             std::to_string(cv_max) + " for " + kind + " at rho=" +
                             std::to_string(rho) + "; re-run on an idle machine or relax "
                             "RS_ORACLE_TIMING_CV_MAX");
}

json model_to_json(const RegressionModel& m) {
    return json{{"degree", m.degree},
                {"coeffs", m.coeffs},
                {"fit_domain", {m.fit_lo, m.fit_hi}},
                {"r_squared", m.r_squared},
                {"residual_sd", m.residual_sd},
                {"x_units", m.x_units},
                {"y_units", m.y_units}};
}

RegressionModel model_from_json(const json& j, const std::string& where) {
    RegressionModel m;
    try {
        m.degree = j.at("degree").get<int>();
        m.coeffs = j.at("coeffs").get<std::vector<double>>();
        m.fit_lo = j.at("fit_domain").at(0).get<double>();
        m.fit_hi = j.at("fit_domain").at(1).get<double>();
        m.r_squared = j.at("r_squared").get<double>();
        m.residual_sd = j.at("residual_sd").get<double>();
        m.x_units = j.value("x_units", "");
        m.y_units = j.value("y_units", "");
    } catch (const json::exception& e) {
        throw ProfileSchemaError("bad model at " + where + ": " + e.what());
    }
    if (m.coeffs.size() != static_cast<std::size_t>(m.degree) + 1)
        throw ProfileSchemaError("coefficient count does not match degree at " + where);
    return m;
}

}  // namespace

std::vector<double> GridSpec::points() const {
    if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("bad occupancy grid");
    std::vector<double> pts;
    for (int i = 0;; ++i) {
        const double x = lo + step * i;
        if (x > hi + step * 0.5) break;
        pts.push_back(std::min(x, hi));
    }
    return pts;
}

const ClassModels& CalibrationProfile::models_for(QueueClass c) const {
    auto it = classes.find(c);
    if (it == classes.end())
        throw MissingClass(std::string("profile has no models for class ") + queue_class_name(c));
    return it->second;
}

std::string CalibrationProfile::fingerprint_line() const {
    return fingerprint.hostname + " " + fingerprint.timestamp + " " + fingerprint.engine_version;
}

double timing_cv_env_override(double fallback) {
    if (const char* env = std::getenv("RS_ORACLE_TIMING_CV_MAX")) {
        try {
            return std::stod(env);
        } catch (...) {
            throw ConfigError("RS_ORACLE_TIMING_CV_MAX is not a number");
        }
    }
    return fallback;
}

double effective_timing_cv_max(const CalibrationOptions& options) {
    return timing_cv_env_override(options.timing_cv_max);
}

CalibrationDataset collect_stage1(QueueClass cls, const GridSpec& grid,
                                  const CalibrationOptions& options) {
    if (!(grid.lo >= 0.20 - 1e-12) || !(grid.hi <= 0.93 + 1e-12))
        throw OccupancyOutOfRange("calibration grid must lie within [0.20, 0.93]");
    CalibrationDataset ds;
    ds.queue_class = cls;
    ds.grid = grid;
    ds.replications = options.replications;
    const std::vector<double> rhos = grid.points();
    ds.rows.resize(rhos.size());

    for (std::size_t i = 0; i < rhos.size(); ++i) {
        const double rho = rhos[i];
        std::vector<double> v2s, v1s, vss;
        if (options.parallel_traced && options.replications > 1) {
            std::vector<std::future<Stage1Rep>> jobs;
            for (int rep = 0; rep < options.replications; ++rep)
                jobs.push_back(std::async(std::launch::async, stage1_replicate, cls, rho,
                                          options, point_seed(options.seed, cls, i, rep)));
            for (auto& job : jobs) {
                const Stage1Rep r = job.get();
                v2s.push_back(r.theta_2s);
                v1s.push_back(r.theta_1s);
                vss.push_back(r.theta_ss);
            }
        } else {
            for (int rep = 0; rep < options.replications; ++rep) {
                const Stage1Rep r =
                    stage1_replicate(cls, rho, options, point_seed(options.seed, cls, i, rep));
                v2s.push_back(r.theta_2s);
                v1s.push_back(r.theta_1s);
                vss.push_back(r.theta_ss);
            }
        }
        CalibrationRow& row = ds.rows[i];
        row.rho = rho;
        row.theta_2s = mean_of(v2s);
        row.theta_1s = mean_of(v1s);
        row.theta_ss = mean_of(vss);
        row.theta_ms = row.theta_1s + 2.0;  // the hold costs exactly two instructions
        row.sd_2s = sd_of(v2s, row.theta_2s);
        row.sd_1s = sd_of(v1s, row.theta_1s);
    }
    return ds;
}

ClassModels fit_theta_models(const CalibrationDataset& dataset) {
    int deg_2s = 1, deg_1s = 1, deg_ss = 1;
    switch (dataset.queue_class) {
        case QueueClass::MM: break;
        case QueueClass::MG:
            deg_2s = 2;
            deg_ss = 2;
            break;
        case QueueClass::GG:
            deg_2s = 2;
            deg_1s = 2;
            deg_ss = 2;
            break;
    }

    std::vector<double> x, y2s, y1s, yss;
    for (const CalibrationRow& row : dataset.rows) {
        // The G/G theta curves sit on a plateau up to 50% occupancy; those
        // rows are excluded and the fit domain starts at 0.50.
        if (dataset.queue_class == QueueClass::GG && row.rho <= 0.50) continue;
        x.push_back(row.rho);
        y2s.push_back(row.theta_2s);
        y1s.push_back(row.theta_1s);
        yss.push_back(row.theta_ss);
    }

    ClassModels m;
    m.theta_2s = fit_polynomial(x, y2s, deg_2s);
    m.theta_1s = fit_polynomial(x, y1s, deg_1s);
    m.theta_ss = fit_polynomial(x, yss, deg_ss);
    for (RegressionModel* model : {&m.theta_2s, &m.theta_1s, &m.theta_ss}) {
        model->x_units = kUnitsOccupancy;
        model->y_units = kUnitsInstructionsPerArrival;
        if (dataset.queue_class == QueueClass::GG) model->fit_lo = 0.50;
    }
    m.theta_ms = m.theta_1s;
    m.theta_ms.coeffs[0] += 2.0;
    return m;
}

void collect_stage2(CalibrationDataset& dataset, const CalibrationOptions& options) {
    const double cv_max = effective_timing_cv_max(options);
    for (std::size_t i = 0; i < dataset.rows.size(); ++i) {
        CalibrationRow& row = dataset.rows[i];
        for (const Archetype kind : {Archetype::TwoStage, Archetype::Simplified}) {
            const NetworkSpec net = build_archetype(kind, dataset.queue_class, row.rho);
            std::vector<double> times;
            std::vector<double> arrivals;
            for (int rep = -1; rep < options.replications; ++rep) {
                RunOptions run_opt;
                run_opt.warmup_minutes = options.warmup_minutes;
                run_opt.run_minutes = options.run_minutes;
                // rep -1 is a discarded cache/branch warm-up measurement
                run_opt.seed = point_seed(options.seed, dataset.queue_class, i,
                                          std::max(rep, 0));
                run_opt.timed = true;
                run_opt.collect_los = false;
                const SimulationResult res = run_simulation(net, run_opt);
                if (rep < 0) continue;
                times.push_back(res.wall_runtime_seconds);
                arrivals.push_back(static_cast<double>(res.total_arrivals));
            }
            check_timing_cv(times, row.rho, archetype_name(kind), cv_max);
            if (kind == Archetype::TwoStage) {
                row.t_2s = mean_of(times);
                row.n_2s = mean_of(arrivals);
            } else {
                row.t_ms = mean_of(times);
                row.n_ms = mean_of(arrivals);
            }
        }
    }
}

std::vector<std::pair<double, double>> stage2_pairs(const CalibrationDataset& dataset,
                                                    const ClassModels& models) {
    std::vector<std::pair<double, double>> pairs;
    for (const CalibrationRow& row : dataset.rows) {
        const double theta_2s = models.theta_2s.evaluate_clamped(row.rho);
        const double theta_ms = models.theta_ms.evaluate_clamped(row.rho);
        const double rie = theta_2s * row.n_2s - theta_ms * row.n_ms;  // raw instruction count
        const double phi = row.t_2s - row.t_ms;
        pairs.emplace_back(rie, phi);
    }
    return pairs;
}

RegressionModel fit_rs_model(const std::vector<std::pair<double, double>>& pairs,
                             QueueClass cls) {
    if (pairs.size() < 10) throw SingularFit("RS fit needs at least 10 (RIE, RS) pairs");
    std::vector<double> x, y;
    for (const auto& [rie, phi] : pairs) {
        x.push_back(rie / 1e4);
        y.push_back(phi);
    }
    const int degree = cls == QueueClass::MG ? 2 : 1;
    RegressionModel m = fit_polynomial(x, y, degree);
    m.x_units = kUnitsInstructions1e4;
    m.y_units = kUnitsSeconds;
    return m;
}

ClassModels calibrate_class(QueueClass cls, const GridSpec& grid,
                            const CalibrationOptions& options, CalibrationDataset* dataset_out) {
    CalibrationDataset ds = collect_stage1(cls, grid, options);
    ClassModels models = fit_theta_models(ds);
    collect_stage2(ds, options);
    models.rs = fit_rs_model(stage2_pairs(ds, models), cls);
    if (dataset_out) *dataset_out = std::move(ds);
    return models;
}

CalibrationProfile make_profile(const GridSpec& grid, int replications) {
    CalibrationProfile p;
    p.grid = grid;
    p.replications = replications;
    char host[256] = "unknown";
    gethostname(host, sizeof(host) - 1);
    p.fingerprint.hostname = host;
    const std::time_t now = std::time(nullptr);
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    p.fingerprint.timestamp = stamp;
    p.fingerprint.engine_version = kEngineVersion;
    return p;
}

void save_profile(const CalibrationProfile& profile, const std::string& path) {
    json j;
    j["schema"] = kProfileSchema;
    j["schema_version"] = profile.schema_version;
    j["fingerprint"] = {{"hostname", profile.fingerprint.hostname},
                        {"timestamp", profile.fingerprint.timestamp},
                        {"engine_version", profile.fingerprint.engine_version}};
    j["grid"] = {{"lo", profile.grid.lo}, {"hi", profile.grid.hi}, {"step", profile.grid.step}};
    j["replications"] = profile.replications;
    json classes = json::object();
    for (const auto& [cls, models] : profile.classes) {
        classes[queue_class_name(cls)] = {{"theta_2s", model_to_json(models.theta_2s)},
                                          {"theta_1s", model_to_json(models.theta_1s)},
                                          {"theta_ss", model_to_json(models.theta_ss)},
                                          {"theta_ms", model_to_json(models.theta_ms)},
                                          {"rs", model_to_json(models.rs)}};
    }
    j["classes"] = classes;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write profile file: " + path);
    out << j.dump(2) << "\n";
}

CalibrationProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open profile file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ProfileSchemaError(std::string("profile is not valid JSON: ") + e.what());
    }
    if (j.value("schema", "") != kProfileSchema)
        throw ProfileSchemaError("missing or wrong 'schema' field");
    CalibrationProfile p;
    try {
        p.schema_version = j.at("schema_version").get<int>();
        p.fingerprint.hostname = j.at("fingerprint").at("hostname").get<std::string>();
        p.fingerprint.timestamp = j.at("fingerprint").at("timestamp").get<std::string>();
        p.fingerprint.engine_version = j.at("fingerprint").at("engine_version").get<std::string>();
        p.grid.lo = j.at("grid").at("lo").get<double>();
        p.grid.hi = j.at("grid").at("hi").get<double>();
        p.grid.step = j.at("grid").at("step").get<double>();
        p.replications = j.at("replications").get<int>();
        for (const auto& [name, jm] : j.at("classes").items()) {
            ClassModels models;
            models.theta_2s = model_from_json(jm.at("theta_2s"), name + ".theta_2s");
            models.theta_1s = model_from_json(jm.at("theta_1s"), name + ".theta_1s");
            models.theta_ss = model_from_json(jm.at("theta_ss"), name + ".theta_ss");
            models.theta_ms = model_from_json(jm.at("theta_ms"), name + ".theta_ms");
            models.rs = model_from_json(jm.at("rs"), name + ".rs");
            p.classes[queue_class_from_name(name)] = std::move(models);
        }
    } catch (const json::exception& e) {
        throw ProfileSchemaError(std::string("profile field missing or mistyped: ") + e.what());
    }
    // Structural identity of the simplified system: theta_ms is theta_1s with
    // two more instructions per arrival, nothing else.
    for (const auto& [cls, models] : p.classes) {
        const auto& a = models.theta_1s.coeffs;
        const auto& b = models.theta_ms.coeffs;
        bool ok = a.size() == b.size() && !a.empty() &&
                  std::abs(b[0] - a[0] - 2.0) < 1e-9;
        for (std::size_t i = 1; ok && i < a.size(); ++i) ok = std::abs(b[i] - a[i]) < 1e-9;
        if (!ok)
            throw ProfileCorrupt(std::string("theta_ms != theta_1s + 2 for class ") +
                                 queue_class_name(cls));
    }
    return p;
}

}  // namespace rso
