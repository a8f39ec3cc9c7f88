#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "rso/io.hpp"
#include "rso/errors.hpp"

using namespace rso;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("network specs round-trip through JSON") {
    NetworkSpec net = build_archetype(Archetype::TwoStage, QueueClass::GG, 0.7);
    const std::string text = network_to_json(net);
    const NetworkSpec back = network_from_json(text);
    CHECK(back.subsystems.size() == net.subsystems.size());
    CHECK(back.interarrival.family == net.interarrival.family);
    CHECK(back.interarrival.mean() == doctest::Approx(net.interarrival.mean()));
    CHECK(back.subsystems[1].service.p0 == doctest::Approx(net.subsystems[1].service.p0));
    CHECK(network_to_json(back) == text);  // canonical form is stable
}

TEST_CASE("kde holds embed their training samples") {
    NetworkSpec net = build_archetype(Archetype::Simplified, QueueClass::MM, 0.5);
    net.holds[0].los = DistributionSpec::empirical_kde({1.0, 2.0, 3.0, 4.0}, 0.1);
    const NetworkSpec back = network_from_json(network_to_json(net));
    REQUIRE(back.holds.size() == 1);
    CHECK(back.holds[0].los.family == DistFamily::EmpiricalKde);
    CHECK(back.holds[0].los.samples->size() == 4);
}

TEST_CASE("schema violations name the offending field") {
    CHECK_THROWS_WITH_AS(network_from_json("{\"schema\":\"rs-oracle-network\"}"),
                         doctest::Contains("interarrival"), ConfigError);
    CHECK_THROWS_WITH_AS(
        network_from_json(
            "{\"schema\":\"rs-oracle-network\",\"interarrival\":{\"family\":\"exponential\"}}"),
        doctest::Contains("mean"), ConfigError);
    CHECK_THROWS_AS(network_from_json("not json"), ConfigError);
    CHECK_THROWS_AS(observation_from_json("{\"schema\":\"wrong\"}"), ConfigError);
}

TEST_CASE("observations and operations round-trip") {
    ParentObservation obs;
    obs.subsystems["s2"] = {QueueClass::MG, 0.31, 26928};
    obs.n_sim2 = 1000;
    obs.rho_sim = 0.4;
    obs.sim_class = QueueClass::GG;
    obs.run_minutes = 14400;
    obs.replications = 10;
    const ParentObservation back = observation_from_json(observation_to_json(obs));
    CHECK(back.subsystems.at("s2").rho == doctest::Approx(0.31));
    CHECK(back.subsystems.at("s2").queue_class == QueueClass::MG);
    CHECK(back.n_sim2 == doctest::Approx(1000));
    CHECK(back.rho_sim.has_value());
    CHECK(*back.sim_class == QueueClass::GG);

    SimplificationOp op;
    op.k1 = {"s3", "s4"};
    op.replacement = SubsystemSpec{"sim", 2, DistributionSpec::exponential(6.0)};
    const SimplificationOp op_back = operation_from_json(operation_to_json(op));
    CHECK(op_back.k1 == op.k1);
    REQUIRE(op_back.replacement.has_value());
    CHECK(op_back.replacement->n_servers == 2);
}

TEST_CASE("csv files start with the schema header row") {
    const std::string path = "/tmp/rso_csv_test.csv";
    {
        CsvWriter csv(path, {"a", "b"});
        csv.row(std::vector<double>{1.0, 2.5});
    }
    const std::string content = slurp(path);
    CHECK(content.rfind(kCsvSchemaHeader, 0) == 0);
    CHECK(content.find("a,b\n") != std::string::npos);
    CHECK(content.find("1,2.5\n") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("result export writes one row per subsystem plus a sidecar") {
    const NetworkSpec net = build_archetype(Archetype::TwoStage, QueueClass::MM, 0.5);
    RunOptions opt;
    opt.warmup_minutes = 1440;
    opt.run_minutes = 1440;
    opt.seed = 9;
    const SimulationResult res = run_simulation(net, opt);
    const std::string csv = "/tmp/rso_result.csv", side = "/tmp/rso_result.json";
    export_result_csv(res, csv, side, opt.seed);
    const std::string content = slurp(csv);
    CHECK(content.find("\ns1,") != std::string::npos);
    CHECK(content.find("\ns2,") != std::string::npos);
    CHECK(slurp(side).find("total_arrivals") != std::string::npos);
    std::filesystem::remove(csv);
    std::filesystem::remove(side);
}
