#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "rso/queueing_net.hpp"
#include "rso/errors.hpp"

using namespace rso;

namespace {

NetworkSpec mm1(double rho, double service_mean = 1.0) {
    NetworkSpec net;
    net.interarrival = DistributionSpec::exponential(service_mean / rho);
    net.subsystems.push_back({"s1", 1, DistributionSpec::exponential(service_mean)});
    net.routing = {{kGeneratorId, "s1", 1.0}, {"s1", kSinkId, 1.0}};
    return net;
}

RunOptions quick(double warmup_days, double run_days, std::uint64_t seed) {
    RunOptions opt;
    opt.warmup_minutes = warmup_days * 1440.0;
    opt.run_minutes = run_days * 1440.0;
    opt.seed = seed;
    return opt;
}

}  // namespace

TEST_CASE("M/M/1 occupancy, queue wait and Little's law at rho 0.8") {
    // averaged over a few replications to tame autocorrelation
    double occ = 0.0, wait = 0.0, little_lhs = 0.0, little_rhs = 0.0;
    const int reps = 5;
    for (int rep = 0; rep < reps; ++rep) {
        const SimulationResult res = run_simulation(mm1(0.8), quick(5, 10, 100 + rep));
        occ += res.occupancy_of("s1");
        wait += res.mean_queue_wait.at("s1");
        little_lhs += res.mean_num_in_system.at("s1");
        const double throughput =
            static_cast<double>(res.completions.at("s1")) / (10.0 * 1440.0);
        double mean_los = 0.0;
        for (double x : res.los_samples.at("s1")) mean_los += x;
        mean_los /= static_cast<double>(res.los_samples.at("s1").size());
        little_rhs += throughput * mean_los;
    }
    occ /= reps;
    wait /= reps;
    little_lhs /= reps;
    little_rhs /= reps;
    CHECK(occ == doctest::Approx(0.8).epsilon(0.025));        // within 2 points
    CHECK(wait == doctest::Approx(4.0).epsilon(0.05));        // rho/(mu(1-rho)) = 4 min
    CHECK(little_lhs == doctest::Approx(little_rhs).epsilon(0.03));
}

TEST_CASE("M/M/1 mean system LOS matches 1/(mu(1-rho)) at rho 0.8") {
    double mean_los = 0.0;
    const int reps = 5;
    for (int rep = 0; rep < reps; ++rep) {
        const SimulationResult res = run_simulation(mm1(0.8), quick(5, 10, 300 + rep));
        double m = 0.0;
        for (double x : res.los_samples.at(kSystemLosKey)) m += x;
        mean_los += m / static_cast<double>(res.los_samples.at(kSystemLosKey).size());
    }
    mean_los /= reps;
    CHECK(mean_los == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("expected arrivals closed form and simulation agree") {
    CHECK(expected_arrivals(0.5, 1.0, 14400.0) == 7200);
    CHECK(expected_arrivals(0.9, 0.5, 14400.0) == 6480);
    const SimulationResult res = run_simulation(mm1(0.5), quick(5, 10, 42));
    const double gap = std::abs(static_cast<double>(res.total_arrivals) - 7200.0) / 7200.0;
    CHECK(gap < 0.02);
}

TEST_CASE("branch routing fractions converge to the spec probabilities") {
    NetworkSpec net;
    net.interarrival = DistributionSpec::exponential(0.1);
    net.subsystems.push_back({"a", 4, DistributionSpec::exponential(0.1)});
    net.subsystems.push_back({"b", 4, DistributionSpec::exponential(0.1)});
    net.routing = {{kGeneratorId, "a", 0.4}, {kGeneratorId, "b", 0.6},
                   {"a", kSinkId, 1.0},      {"b", kSinkId, 1.0}};
    const SimulationResult res = run_simulation(net, quick(1, 10, 7));  // ~144k entities
    const double total = static_cast<double>(res.arrivals.at("a") + res.arrivals.at("b"));
    CHECK(total > 100000);
    const double frac_a = static_cast<double>(res.arrivals.at("a")) / total;
    CHECK(frac_a == doctest::Approx(0.4).epsilon(0.025));  // +/- 1 point
}

TEST_CASE("three-stage branch conserves flow: arrivals(s3)+arrivals(s4) ~ arrivals(s2)") {
    NetworkSpec net;
    net.interarrival = DistributionSpec::exponential(10.0);
    net.subsystems.push_back({"s2", 1, DistributionSpec::exponential(2.0)});
    net.subsystems.push_back({"s3", 1, DistributionSpec::exponential(6.0)});
    net.subsystems.push_back({"s4", 1, DistributionSpec::exponential(6.0)});
    net.routing = {{kGeneratorId, "s2", 1.0}, {"s2", "s3", 0.4}, {"s2", "s4", 0.6},
                   {"s3", kSinkId, 1.0},      {"s4", kSinkId, 1.0}};
    const SimulationResult res = run_simulation(net, quick(5, 20, 9));
    const auto gap = std::abs(res.arrivals.at("s3") + res.arrivals.at("s4") - res.arrivals.at("s2"));
    CHECK(gap <= 5);  // entities in flight between the stages at the window edges
}

TEST_CASE("every created entity departs or sits in exactly one place") {
    const SimulationResult res = run_simulation(mm1(0.9), quick(2, 5, 55));
    std::int64_t in_flight = 0;
    for (const auto& [id, n] : res.in_flight) in_flight += n;
    CHECK(res.created_total == res.departed_total + in_flight);
    CHECK(in_flight >= 0);
}

TEST_CASE("same seed reproduces the trace byte for byte") {
    RunOptions opt = quick(1, 2, 77);
    opt.trace_on = true;
    const auto a = run_simulation(mm1(0.7), opt);
    const auto b = run_simulation(mm1(0.7), opt);
    REQUIRE(a.trace.has_value());
    REQUIRE(b.trace.has_value());
    const std::string pa = "/tmp/rso_trace_a.tsv", pb = "/tmp/rso_trace_b.tsv";
    a.trace->export_tsv(pa);
    b.trace->export_tsv(pb);
    std::ifstream fa(pa, std::ios::binary), fb(pb, std::ios::binary);
    const std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(ca == cb);
    CHECK(!ca.empty());
    std::filesystem::remove(pa);
    std::filesystem::remove(pb);
}

TEST_CASE("timed and traced runs are mutually exclusive") {
    RunOptions opt = quick(1, 1, 1);
    opt.trace_on = true;
    opt.timed = true;
    CHECK_THROWS_AS(run_simulation(mm1(0.5), opt), MutuallyExclusiveFlags);
}

TEST_CASE("tracing disabled leaves instruction counts at zero") {
    const SimulationResult res = run_simulation(mm1(0.5), quick(1, 2, 5));
    CHECK(!res.trace.has_value());
}

TEST_CASE("archetype construction follows the standard parameterisations") {
    const NetworkSpec mm = build_archetype(Archetype::TwoStage, QueueClass::MM, 0.5);
    CHECK(mm.subsystems.size() == 2);
    CHECK(mm.interarrival.family == DistFamily::Exponential);
    CHECK(mm.interarrival.mean() == doctest::Approx(2.0));
    CHECK(mm.subsystems[0].service.mean() == doctest::Approx(1.0));

    const NetworkSpec gg = build_archetype(Archetype::TwoStage, QueueClass::GG, 0.7);
    CHECK(gg.subsystems[0].service.family == DistFamily::Gamma);
    CHECK(gg.subsystems[0].service.mean() == doctest::Approx(11.11 * 0.45));  // mu = 5 up to rounding
    CHECK(gg.interarrival.family == DistFamily::Normal);
    CHECK(gg.interarrival.lower_bound == doctest::Approx(0.01));
    CHECK(gg.interarrival.mean() == doctest::Approx(5.0 / 0.7));

    CHECK_THROWS_AS(build_archetype(Archetype::SecondStageOnly, QueueClass::MM, 0.5),
                    UnsupportedArchetype);
}

TEST_CASE("simplified archetype counts exactly two instructions per arrival for the hold") {
    RunOptions opt = quick(1, 2, 33);
    opt.trace_on = true;
    const NetworkSpec ms = build_archetype(Archetype::Simplified, QueueClass::MM, 0.6);
    const NetworkSpec s1 = build_archetype(Archetype::SingleStage, QueueClass::MM, 0.6);
    const auto rms = run_simulation(ms, opt);
    const auto r1s = run_simulation(s1, opt);
    REQUIRE(rms.trace.has_value());
    REQUIRE(r1s.trace.has_value());
    // same generator and service streams: identical entity sets, each with
    // exactly two extra instructions in the simplified system
    REQUIRE(rms.trace->window_entities.size() == r1s.trace->window_entities.size());
    for (std::size_t i = 0; i < rms.trace->window_entities.size(); ++i) {
        const auto em = rms.trace->entities[rms.trace->window_entities[i]];
        const auto e1 = r1s.trace->entities[r1s.trace->window_entities[i]];
        CHECK(em.instruction_count == e1.instruction_count + 2);
    }
}

TEST_CASE("network validation rejects malformed specs") {
    NetworkSpec net = mm1(0.5);
    net.routing[1].probability = 0.7;  // outgoing sum != 1
    CHECK_THROWS_AS(net.validate(), ConfigError);

    NetworkSpec dangling = mm1(0.5);
    dangling.routing.push_back({"ghost", kSinkId, 1.0});
    CHECK_THROWS_AS(dangling.validate(), ConfigError);

    NetworkSpec overlap = mm1(0.5);
    HoldSpec h;
    h.id = "h1";
    h.los = DistributionSpec::exponential(1.0);
    h.replaced_group = {"s1"};  // replaces a live subsystem
    overlap.holds.push_back(h);
    overlap.routing = {{kGeneratorId, "s1", 1.0}, {"s1", "h1", 1.0}, {"h1", kSinkId, 1.0}};
    CHECK_THROWS_AS(overlap.validate(), ConfigError);
}
