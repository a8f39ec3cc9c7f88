#include <cmath>

#include "doctest.h"
#include "fixtures/paper_fixtures.hpp"
#include "rso/errors.hpp"
#include "rso/predict.hpp"

using namespace rso;

namespace {

const CalibrationProfile& published() {
    static const CalibrationProfile p = load_profile(fixtures::published_profile_path());
    return p;
}

ParentObservation three_stage_obs() {
    ParentObservation obs;
    obs.subsystems["s1"] = {QueueClass::MG, 0.17, 44927};
    obs.subsystems["s2"] = {QueueClass::MG, 0.17, 44927};
    obs.subsystems["s3"] = {QueueClass::MG, 0.21, 17998};
    obs.subsystems["s4"] = {QueueClass::MG, 0.31, 26928};
    obs.run_minutes = 365.0 * 1440.0;
    return obs;
}

}  // namespace

TEST_CASE("K1 prediction follows the published arithmetic end to end") {
    const ParentObservation obs = three_stage_obs();
    SimplificationOp op;
    op.k1 = {"s3", "s4"};
    const PredictionReport report = predict_rs(published(), obs, op);

    // independent arithmetic with the same published curves
    auto theta = [](double rho) { return -0.47 * rho * rho + 1.51 * rho + 9.87; };
    const double expected_rie =
        (theta(0.21) - 2.0) * 17998.0 + (theta(0.31) - 2.0) * 26928.0;
    CHECK(report.g1.rie == doctest::Approx(expected_rie).epsilon(1e-12));
    const double x = expected_rie / 1e4;
    CHECK(report.total_phi ==
          doctest::Approx(2.28e-5 * x * x + 0.03 * x + 0.091).epsilon(1e-12));
    CHECK(report.g2.phi == 0.0);
    CHECK(report.g3.phi == 0.0);
}

TEST_CASE("empty operation predicts zero savings") {
    const PredictionReport report = predict_rs(published(), three_stage_obs(), SimplificationOp{});
    CHECK(report.total_phi == 0.0);
    CHECK(report.g1.rie == 0.0);
}

TEST_CASE("self-replacement aggregation lands on the intercept and is flagged") {
    ParentObservation obs = three_stage_obs();
    obs.n_sim3 = obs.subsystems["s3"].arrivals;
    obs.rho_sim = obs.subsystems["s3"].rho;
    obs.sim_class = QueueClass::MG;
    SimplificationOp op;
    op.k3 = {"s3"};
    op.replacement = SubsystemSpec{"sim", 1, DistributionSpec::exponential(6.0)};
    const PredictionReport report = predict_rs(published(), obs, op);
    CHECK(report.g3.rie == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(report.g3.phi == doctest::Approx(0.091));  // the mg intercept
    CHECK(report.near_zero_reduction);
}

TEST_CASE("negative predictions are floored at zero with a flag") {
    // mm intercept is -0.05: a tiny reduction would go negative
    ParentObservation obs;
    obs.subsystems["a"] = {QueueClass::MM, 0.5, 3.0};
    obs.subsystems["b"] = {QueueClass::MM, 0.5, 3.0};
    SimplificationOp op;
    op.k1 = {"a"};
    const PredictionReport report = predict_rs(published(), obs, op);
    CHECK(report.g1.phi == 0.0);
    CHECK(report.near_zero_reduction);
}

TEST_CASE("missing class and malformed operations raise") {
    CalibrationProfile mm_only = published();
    mm_only.classes.erase(QueueClass::MG);
    mm_only.classes.erase(QueueClass::GG);
    SimplificationOp op;
    op.k1 = {"s3"};
    CHECK_THROWS_AS(predict_rs(mm_only, three_stage_obs(), op), MissingClass);

    SimplificationOp all;
    all.k1 = {"s1", "s2", "s3", "s4"};
    CHECK_THROWS_AS(predict_rs(published(), three_stage_obs(), all), InvalidOperation);

    SimplificationOp unknown;
    unknown.k1 = {"nope"};
    CHECK_THROWS_AS(predict_rs(published(), three_stage_obs(), unknown), InvalidOperation);

    SimplificationOp k2_without_n;
    k2_without_n.k2 = {"s2", "s3"};
    CHECK_THROWS_AS(predict_rs(published(), three_stage_obs(), k2_without_n), InvalidOperation);
}

TEST_CASE("occupancy outside the calibrated domain is clamped and flagged") {
    ParentObservation obs;
    obs.subsystems["s2"] = {QueueClass::GG, 0.30, 10000};  // gg domain starts at 0.50
    obs.subsystems["s1"] = {QueueClass::GG, 0.30, 10000};
    SimplificationOp op;
    op.k1 = {"s2"};
    const PredictionReport report = predict_rs(published(), obs, op);
    CHECK(report.occupancy_clamped);
    const double theta_at_half = 2.48 * 0.25 - 1.76 * 0.5 + 9.29;
    CHECK(report.theta_ss_used.at("s2") == doctest::Approx(theta_at_half).epsilon(1e-12));
}

TEST_CASE("increasing an abstracted occupancy never lowers the prediction") {
    for (QueueClass cls : {QueueClass::MM, QueueClass::MG, QueueClass::GG}) {
        double last = -1.0;
        for (double rho = 0.20; rho <= 0.93; rho += 0.01) {
            ParentObservation obs;
            obs.subsystems["s1"] = {cls, 0.5, 20000};
            obs.subsystems["s2"] = {cls, rho, 20000};
            SimplificationOp op;
            op.k1 = {"s2"};
            const double phi = predict_rs(published(), obs, op).total_phi;
            CHECK(phi >= last);
            last = phi;
        }
    }
}

TEST_CASE("the instruction reduction decomposes additively over K1 unions") {
    ParentObservation obs = three_stage_obs();
    SimplificationOp both, only3, only4;
    both.k1 = {"s3", "s4"};
    only3.k1 = {"s3"};
    only4.k1 = {"s4"};
    const auto r_both = predict_rs(published(), obs, both);
    const auto r3 = predict_rs(published(), obs, only3);
    const auto r4 = predict_rs(published(), obs, only4);
    CHECK(r_both.g1.rie == doctest::Approx(r3.g1.rie + r4.g1.rie).epsilon(1e-12));
}

TEST_CASE("for a linear rs curve the union prediction drops one duplicated intercept") {
    ParentObservation obs;
    obs.subsystems["s1"] = {QueueClass::MM, 0.4, 50000};
    obs.subsystems["a"] = {QueueClass::MM, 0.5, 40000};
    obs.subsystems["b"] = {QueueClass::MM, 0.7, 60000};
    SimplificationOp both, only_a, only_b;
    both.k1 = {"a", "b"};
    only_a.k1 = {"a"};
    only_b.k1 = {"b"};
    const double phi_union = predict_rs(published(), obs, both).total_phi;
    const double phi_a = predict_rs(published(), obs, only_a).total_phi;
    const double phi_b = predict_rs(published(), obs, only_b).total_phi;
    CHECK(phi_union == doctest::Approx(phi_a + phi_b - (-0.05)).epsilon(1e-9));
}

TEST_CASE("doubling the run length doubles every instruction reduction exactly") {
    ParentObservation obs = three_stage_obs();
    obs.n_sim2 = obs.subsystems["s2"].arrivals;
    SimplificationOp op;
    op.k2 = {"s2", "s3", "s4"};
    const auto base = predict_rs(published(), obs, op);
    ParentObservation doubled = obs;
    for (auto& [id, s] : doubled.subsystems) s.arrivals *= 2.0;
    doubled.n_sim2 *= 2.0;
    doubled.run_minutes *= 2.0;
    const auto twice = predict_rs(published(), doubled, op);
    CHECK(twice.g2.rie == doctest::Approx(2.0 * base.g2.rie).epsilon(1e-12));
}

TEST_CASE("replacement occupancy helper uses offered load over capacity") {
    const SubsystemSpec repl{"sim", 2, DistributionSpec::exponential(6.0)};
    // 12000 arrivals over 14400 minutes, mean service 6, two servers
    CHECK(estimate_replacement_occupancy(12000, 14400.0, repl) ==
          doctest::Approx(12000.0 / 14400.0 * 6.0 / 2.0));
}

TEST_CASE("metric fixtures: three-element hand checks") {
    const std::vector<double> o{2.0, 2.0}, p{1.0, 3.0};
    CHECK(mape(o, p) == doctest::Approx(50.0));
    CHECK(mpe(o, p) == doctest::Approx(0.0));
    CHECK(mpe({2.0, 2.0}, {1.0, 1.0}) == doctest::Approx(50.0));  // sign: (O-P)/O
    CHECK(mape({1.0, 2.0, 4.0}, {1.1, 1.8, 4.4}) ==
          doctest::Approx((0.1 / 1.0 + 0.2 / 2.0 + 0.4 / 4.0) / 3.0 * 100.0).epsilon(1e-12));
    CHECK(rmse({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == doctest::Approx(0.0));
    CHECK(r_squared({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == doctest::Approx(1.0));
    CHECK(rmse({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(rmse_root_sum({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}) == doctest::Approx(std::sqrt(3.0)));
    CHECK_THROWS_AS(mape({0.0}, {1.0}), ZeroObservation);
    CHECK_THROWS_AS(r_squared({2.0, 2.0}, {1.0, 3.0}), DegenerateVariance);
}

TEST_CASE("published validation-1 summary is reproduced from its printed columns") {
    std::vector<double> observed, predicted;
    for (const auto& row : fixtures::validation1_mm()) {
        observed.push_back(row.actual);
        predicted.push_back(row.predicted);
    }
    const MetricsReport m = compute_metrics(observed, predicted);
    // inputs are printed to two decimals; allow the quantisation through
    CHECK(std::abs(m.mape - fixtures::kValidation1MmMape) < 0.05);
    CHECK(std::abs(m.mpe - fixtures::kValidation1MmMpe) < 0.05);
    CHECK(std::abs(m.rmse - fixtures::kValidation1MmRmse) < 0.01);
    CHECK(std::abs(m.r_squared - fixtures::kValidation1MmR2) < 0.005);
}
