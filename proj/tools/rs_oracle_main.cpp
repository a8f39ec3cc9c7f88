#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rso/calibration.hpp"
#include "rso/errors.hpp"
#include "rso/experiments.hpp"
#include "rso/io.hpp"
#include "rso/predict.hpp"
#include "rso/simplify.hpp"

namespace {

using namespace rso;

std::vector<QueueClass> parse_classes(const std::string& csv) {
    std::vector<QueueClass> classes;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) classes.push_back(queue_class_from_name(token));
    if (classes.empty()) throw ConfigError("no classes given");
    return classes;
}

void dump_dataset_csv(const CalibrationDataset& ds, const std::string& path,
                      std::uint64_t seed, const std::string& fingerprint) {
    CsvWriter csv(path, {"rho", "theta_2s", "theta_1s", "theta_ss", "theta_ms", "sd_2s", "sd_1s",
                         "n_2s", "n_ms", "t_2s_seconds", "t_ms_seconds"});
    std::ofstream meta(path + ".meta", std::ios::binary);
    meta << "seed=" << seed << "\nprofile=" << fingerprint << "\n";
    for (const CalibrationRow& r : ds.rows)
        csv.row(std::vector<double>{r.rho, r.theta_2s, r.theta_1s, r.theta_ss, r.theta_ms, r.sd_2s,
                                    r.sd_1s, r.n_2s, r.n_ms, r.t_2s, r.t_ms});
}

void write_validation_csv(const ValidationOutcome& outcome, const std::string& path,
                          std::uint64_t seed, const std::string& fingerprint) {
    std::vector<std::string> cols;
    if (!outcome.rows.empty())
        for (const std::string& id : outcome.rows.front().subsystem_ids) cols.push_back("rho_" + id);
    if (!outcome.rows.empty())
        for (const std::string& id : outcome.rows.front().subsystem_ids) cols.push_back("n_" + id);
    cols.insert(cols.end(), {"parent_runtime_s", "simplified_runtime_s", "predicted_rs_s",
                             "actual_rs_s", "error_s", "pe_pct", "ape_pct"});
    CsvWriter csv(path, cols);
    for (const ValidationRow& r : outcome.rows) {
        std::vector<double> cells;
        cells.insert(cells.end(), r.rho.begin(), r.rho.end());
        cells.insert(cells.end(), r.arrivals.begin(), r.arrivals.end());
        cells.insert(cells.end(), {r.parent_runtime, r.simplified_runtime, r.predicted_rs,
                                   r.actual_rs, r.error, r.pe, r.ape});
        csv.row(cells);
    }
    std::ofstream meta(path + ".meta", std::ios::binary);
    meta << "seed=" << seed << "\nprofile=" << fingerprint << "\n";
}

void print_metrics(const MetricsReport& m) {
    std::printf("MAPE %.2f%%  MPE %.2f%%  RMSE %.4f s (root-sum %.4f s)  R^2 %.4f  (n=%d)\n",
                m.mape, m.mpe, m.rmse, m.rmse_root_sum, m.r_squared, m.n);
}

int cmd_calibrate(const std::string& cls_name, GridSpec grid, int reps, std::uint64_t seed,
                  double warmup_days, double run_days, const std::string& out_profile,
                  const std::string& audit_dir) {
    const QueueClass cls = queue_class_from_name(cls_name);
    CalibrationOptions opt;
    opt.replications = reps;
    opt.seed = seed;
    opt.warmup_minutes = warmup_days * 1440.0;
    opt.run_minutes = run_days * 1440.0;

    CalibrationProfile profile = make_profile(grid, reps);
    CalibrationDataset dataset;
    std::printf("calibrating class %s on grid [%.2f, %.2f] step %.3f, r=%d ...\n", cls_name.c_str(),
                grid.lo, grid.hi, grid.step, reps);
    profile.classes[cls] = calibrate_class(cls, grid, opt, &dataset);

    const ClassModels& m = profile.classes.at(cls);
    std::printf("theta_2s: R^2 %.4f  (degree %d, domain [%.2f, %.2f])\n", m.theta_2s.r_squared,
                m.theta_2s.degree, m.theta_2s.fit_lo, m.theta_2s.fit_hi);
    std::printf("theta_1s: R^2 %.4f\n", m.theta_1s.r_squared);
    std::printf("theta_ss: R^2 %.4f\n", m.theta_ss.r_squared);
    std::printf("theta_ms: structurally theta_1s + 2\n");
    std::printf("rs model: R^2 %.4f\n", m.rs.r_squared);

    save_profile(profile, out_profile);
    std::printf("profile written to %s\n", out_profile.c_str());
    if (!audit_dir.empty()) {
        const std::string path = audit_dir + "/calibration_" + cls_name + ".csv";
        dump_dataset_csv(dataset, path, seed, profile.fingerprint_line());
        std::printf("audit dataset written to %s\n", path.c_str());
    }
    return 0;
}

int cmd_predict(const std::string& profile_path, const std::string& obs_path,
                const std::string& op_path, const std::string& out_path) {
    const CalibrationProfile profile = load_profile(profile_path);
    const ParentObservation obs = load_observation(obs_path);
    const SimplificationOp op = load_operation(op_path);
    const PredictionReport report = predict_rs(profile, obs, op);
    const std::string text = report_to_json(report);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write report to " + out_path);
        out << text << "\n";
    }
    std::printf("predicted runtime savings: %.4f s (S1 %.4f + S2 %.4f + S3 %.4f)\n",
                report.total_phi, report.g1.phi, report.g2.phi, report.g3.phi);
    if (report.occupancy_clamped)
        std::printf("note: some occupancies fell outside the calibrated domain and were clamped\n");
    if (report.near_zero_reduction)
        std::printf("note: near-zero instruction reduction; the prediction is intercept-dominated\n");
    return 0;
}

int cmd_simplify(const std::string& network_path, const std::string& op_path,
                 const std::string& out_path, double warmup_days, double run_days,
                 std::uint64_t seed, const std::string& los_dir) {
    const NetworkSpec parent = load_network(network_path);
    const SimplificationOp op = load_operation(op_path);
    op.validate(parent.subsystems.size());

    std::vector<std::vector<std::string>> groups;
    for (const std::string& id : op.k1) groups.push_back({id});
    if (!op.k2.empty()) groups.push_back(op.k2);
    std::map<std::string, FittedLos> los;
    if (!groups.empty()) {
        const auto sets =
            collect_los(parent, groups, warmup_days * 1440.0, run_days * 1440.0, seed);
        for (const auto& [key, set] : sets) {
            los[key] = fit_los(set.samples);
            const FittedLos& fit = los.at(key);
            if (fit.parametric())
                std::printf("%s: parametric %s, KS p=%.3f on %zu samples\n", key.c_str(),
                            family_name(fit.dist.family), fit.ks_p_value, set.samples.size());
            else
                std::printf("%s: no parametric fit accepted; Gaussian KDE bandwidth %.3f\n",
                            key.c_str(), fit.bandwidth);
            if (!los_dir.empty()) export_los_csv(set.samples, los_dir + "/los_" + key + ".csv");
        }
    }
    const NetworkSpec simplified = apply_simplification(parent, op, los);
    save_network(simplified, out_path);
    std::printf("simplified network written to %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"runtime-savings prediction toolkit for DES model simplification"};
    app.require_subcommand(1);

    std::string cls_name = "mm", classes_csv = "mm,mg,gg";
    GridSpec grid;
    int reps = 10;
    std::uint64_t seed = 1;
    double warmup_days = 200.0, run_days = 10.0;
    std::string profile_path, obs_path, op_path, network_path, out_path, audit_dir, los_dir;
    int draws = 20, scenario = 1;
    std::vector<int> servers = {25, 50, 100, 200, 500, 1000};
    double rho_lo = 0.20, rho_hi = 0.93;

    auto* calibrate = app.add_subcommand("calibrate", "fit theta and RS models on this machine");
    calibrate->add_option("--class", cls_name, "queue class: mm, mg, gg")->required();
    calibrate->add_option("--grid-lo", grid.lo, "grid lower occupancy");
    calibrate->add_option("--grid-hi", grid.hi, "grid upper occupancy");
    calibrate->add_option("--grid-step", grid.step, "grid step");
    calibrate->add_option("--reps", reps, "replications per grid point");
    calibrate->add_option("--seed", seed, "base seed");
    calibrate->add_option("--warmup-days", warmup_days, "simulated warm-up, days");
    calibrate->add_option("--run-days", run_days, "simulated measured span, days");
    calibrate->add_option("--out", out_path, "output profile JSON")->required();
    calibrate->add_option("--audit-dir", audit_dir, "directory for dataset CSV dumps");

    auto* predict = app.add_subcommand("predict", "predict runtime savings for an operation");
    predict->add_option("--profile", profile_path, "calibration profile JSON")->required();
    predict->add_option("--obs", obs_path, "parent observation JSON")->required();
    predict->add_option("--op", op_path, "simplification operation JSON")->required();
    predict->add_option("--out", out_path, "report JSON path (stdout when omitted)");

    auto* simplify = app.add_subcommand("simplify", "build a simplified network from a parent");
    simplify->add_option("--network", network_path, "parent network JSON")->required();
    simplify->add_option("--op", op_path, "simplification operation JSON")->required();
    simplify->add_option("--out", out_path, "simplified network JSON")->required();
    simplify->add_option("--warmup-days", warmup_days, "LOS collection warm-up, days");
    simplify->add_option("--run-days", run_days, "LOS collection span, days");
    simplify->add_option("--seed", seed, "seed for the LOS collection run");
    simplify->add_option("--los-dir", los_dir, "directory for LOS sample CSV exports");

    auto* validate1 = app.add_subcommand("validate1", "two-stage abstraction validation");
    validate1->add_option("--profile", profile_path, "calibration profile JSON")->required();
    validate1->add_option("--class", cls_name, "queue class")->required();
    validate1->add_option("--draws", draws, "occupancy draws");
    validate1->add_option("--reps", reps, "replications per draw")->default_val(30);
    validate1->add_option("--seed", seed, "base seed");
    validate1->add_option("--rho-lo", rho_lo, "draw range lower bound");
    validate1->add_option("--rho-hi", rho_hi, "draw range upper bound");
    validate1->add_option("--warmup-days", warmup_days, "warm-up, days");
    validate1->add_option("--run-days", run_days, "measured span, days");
    validate1->add_option("--out", out_path, "output CSV")->required();

    auto* validate2 = app.add_subcommand("validate2", "three-stage validation (parallel stage 3)");
    validate2->add_option("--profile", profile_path, "calibration profile JSON")->required();
    validate2->add_option("--class", cls_name, "queue class")->required();
    validate2->add_option("--scenario", scenario, "1: S1 on {s3,s4}; 2: S2 on {s2,s3,s4}")
        ->check(CLI::Range(1, 2));
    validate2->add_option("--draws", draws, "occupancy draws");
    validate2->add_option("--reps", reps, "replications per draw")->default_val(10);
    validate2->add_option("--seed", seed, "base seed");
    validate2->add_option("--warmup-days", warmup_days, "warm-up, days");
    validate2->add_option("--run-days", run_days, "measured span, days")->default_val(365.0);
    validate2->add_option("--out", out_path, "output CSV")->required();

    auto* scaling = app.add_subcommand("scaling", "server-count scaling study");
    scaling->add_option("--class", cls_name, "mm or mg")->required();
    scaling->add_option("--servers", servers, "server counts");
    scaling->add_option("--reps", reps, "timed replications per count")->default_val(30);
    scaling->add_option("--seed", seed, "base seed");
    scaling->add_option("--out", out_path, "output CSV")->required();

    auto* waitcurve = app.add_subcommand("waitcurve", "mean queue wait versus occupancy");
    waitcurve->add_option("--classes", classes_csv, "comma-separated classes");
    waitcurve->add_option("--grid-lo", grid.lo, "grid lower occupancy");
    waitcurve->add_option("--grid-hi", grid.hi, "grid upper occupancy");
    waitcurve->add_option("--grid-step", grid.step, "grid step")->default_val(0.05);
    waitcurve->add_option("--seed", seed, "base seed");
    waitcurve->add_option("--warmup-days", warmup_days, "warm-up, days")->default_val(20.0);
    waitcurve->add_option("--run-days", run_days, "measured span, days");
    waitcurve->add_option("--out", out_path, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (calibrate->parsed())
            return cmd_calibrate(cls_name, grid, reps, seed, warmup_days, run_days, out_path,
                                 audit_dir);
        if (predict->parsed()) return cmd_predict(profile_path, obs_path, op_path, out_path);
        if (simplify->parsed())
            return cmd_simplify(network_path, op_path, out_path, warmup_days, run_days, seed,
                                los_dir);
        if (validate1->parsed() || validate2->parsed()) {
            const CalibrationProfile profile = load_profile(profile_path);
            ExperimentConfig cfg;
            cfg.draw_count = draws;
            cfg.replications = reps;
            cfg.seed = seed;
            cfg.rho_lo = rho_lo;
            cfg.rho_hi = rho_hi;
            cfg.warmup_minutes = warmup_days * 1440.0;
            cfg.run_minutes = run_days * 1440.0;
            cfg.timing_cv_max = timing_cv_env_override(cfg.timing_cv_max);
            const QueueClass cls = queue_class_from_name(cls_name);
            const ValidationOutcome outcome =
                validate1->parsed() ? run_validation1(profile, cls, cfg)
                                    : run_validation2(profile, cls, scenario, cfg);
            write_validation_csv(outcome, out_path, seed, profile.fingerprint_line());
            print_metrics(outcome.metrics);
            std::printf("rows written to %s\n", out_path.c_str());
            return 0;
        }
        if (scaling->parsed()) {
            ScalingConfig cfg;
            cfg.server_counts = servers;
            cfg.replications = reps;
            cfg.seed = seed;
            cfg.timing_cv_max = timing_cv_env_override(cfg.timing_cv_max);
            const auto rows = run_scaling(queue_class_from_name(cls_name), cfg);
            CsvWriter csv(out_path, {"n_servers", "mean_runtime_s", "sd_runtime_s"});
            for (const ScalingRow& r : rows)
                csv.row(std::vector<double>{static_cast<double>(r.n_servers), r.mean_runtime,
                                            r.sd_runtime});
            std::ofstream meta(out_path + ".meta", std::ios::binary);
            meta << "seed=" << seed << "\n";
            std::printf("scaling rows written to %s\n", out_path.c_str());
            return 0;
        }
        if (waitcurve->parsed()) {
            const auto points = run_waiting_curve(parse_classes(classes_csv), grid, seed,
                                                  warmup_days * 1440.0, run_days * 1440.0);
            CsvWriter csv(out_path, {"class", "rho", "mean_queue_wait_min"});
            for (const WaitCurvePoint& p : points)
                csv.row({std::string(queue_class_name(p.queue_class)), CsvWriter::format(p.rho),
                         CsvWriter::format(p.mean_wait)});
            std::ofstream meta(out_path + ".meta", std::ios::binary);
            meta << "seed=" << seed << "\n";
            std::printf("wait-curve rows written to %s\n", out_path.c_str());
            return 0;
        }
    } catch (const TimingUnstable& e) {
        std::fprintf(stderr,
                     "error: %s\nwall-clock measurements were too noisy; close other workloads "
                     "or raise RS_ORACLE_TIMING_CV_MAX.\n",
                     e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
