#include "rso/io.hpp"

#include <cstdio>

#include "json.hpp"
#include "rso/errors.hpp"

namespace rso {

namespace {

using nlohmann::json;

json dist_to_json(const DistributionSpec& d) {
    json j;
    j["family"] = family_name(d.family);
    switch (d.family) {
        case DistFamily::Exponential: j["mean"] = d.p0; break;
        case DistFamily::Normal:
            j["mean"] = d.p0;
            j["sd"] = d.p1;
            j["lower_bound"] = d.lower_bound;
            break;
        case DistFamily::Gamma:
            j["shape"] = d.p0;
            j["scale"] = d.p1;
            break;
        case DistFamily::Uniform:
            j["lo"] = d.p0;
            j["hi"] = d.p1;
            break;
        case DistFamily::Triangular:
            j["lo"] = d.p0;
            j["mode"] = d.p1;
            j["hi"] = d.p2;
            break;
        case DistFamily::Beta:
        case DistFamily::BetaPrime:
            j["a"] = d.p0;
            j["b"] = d.p1;
            j["loc"] = d.p2;
            j["scale"] = d.p3;
            break;
        case DistFamily::GenLogistic:
            j["c"] = d.p0;
            j["loc"] = d.p1;
            j["scale"] = d.p2;
            break;
        case DistFamily::EmpiricalKde:
            j["bandwidth"] = d.p0;
            j["samples"] = *d.samples;
            break;
    }
    return j;
}

double need_num(const json& j, const char* field, const std::string& where) {
    if (!j.contains(field) || !j.at(field).is_number())
        throw ConfigError("missing or non-numeric field '" + std::string(field) + "' in " + where);
    return j.at(field).get<double>();
}

DistributionSpec dist_from_json(const json& j, const std::string& where) {
    if (!j.contains("family"))
        throw ConfigError("missing field 'family' in " + where);
    const DistFamily family = family_from_name(j.at("family").get<std::string>());
    switch (family) {
        case DistFamily::Exponential:
            return DistributionSpec::exponential(need_num(j, "mean", where));
        case DistFamily::Normal:
            return DistributionSpec::normal(need_num(j, "mean", where), need_num(j, "sd", where),
                                            j.value("lower_bound", 0.01));
        case DistFamily::Gamma:
            return DistributionSpec::gamma(need_num(j, "shape", where),
                                           need_num(j, "scale", where));
        case DistFamily::Uniform:
            return DistributionSpec::uniform(need_num(j, "lo", where), need_num(j, "hi", where));
        case DistFamily::Triangular:
            return DistributionSpec::triangular(need_num(j, "lo", where),
                                                need_num(j, "mode", where),
                                                need_num(j, "hi", where));
        case DistFamily::Beta:
            return DistributionSpec::beta(need_num(j, "a", where), need_num(j, "b", where),
                                          need_num(j, "loc", where), need_num(j, "scale", where));
        case DistFamily::BetaPrime:
            return DistributionSpec::beta_prime(need_num(j, "a", where), need_num(j, "b", where),
                                                need_num(j, "loc", where),
                                                need_num(j, "scale", where));
        case DistFamily::GenLogistic:
            return DistributionSpec::gen_logistic(need_num(j, "c", where),
                                                  need_num(j, "loc", where),
                                                  need_num(j, "scale", where));
        case DistFamily::EmpiricalKde: {
            if (j.contains("samples"))
                return DistributionSpec::empirical_kde(j.at("samples").get<std::vector<double>>(),
                                                       need_num(j, "bandwidth", where));
            if (j.contains("samples_path")) {
                std::ifstream in(j.at("samples_path").get<std::string>());
                if (!in) throw ConfigError("cannot open samples_path in " + where);
                std::vector<double> samples;
                double x;
                while (in >> x) samples.push_back(x);
                return DistributionSpec::empirical_kde(std::move(samples),
                                                       need_num(j, "bandwidth", where));
            }
            throw ConfigError("empirical_kde needs 'samples' or 'samples_path' in " + where);
        }
    }
    throw ConfigError("unknown family in " + where);
}

json subsystem_to_json(const SubsystemSpec& s) {
    return json{{"id", s.id}, {"n_servers", s.n_servers}, {"service", dist_to_json(s.service)}};
}

SubsystemSpec subsystem_from_json(const json& j, const std::string& where) {
    SubsystemSpec s;
    if (!j.contains("id")) throw ConfigError("missing field 'id' in " + where);
    s.id = j.at("id").get<std::string>();
    s.n_servers = j.value("n_servers", 1);
    if (!j.contains("service")) throw ConfigError("missing field 'service' in " + where);
    s.service = dist_from_json(j.at("service"), where + ".service");
    return s;
}

json parse_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw ConfigError(std::string("cannot open ") + what + " file: " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string(what) + " file is not valid JSON: " + e.what());
    }
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), columns_(columns.size()) {
    if (!out_) throw ConfigError("cannot open CSV for writing: " + path);
    out_ << kCsvSchemaHeader << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw ConfigError("CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& cells) {
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (double v : cells) text.push_back(format(v));
    row(text);
}

std::string CsvWriter::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string network_to_json(const NetworkSpec& spec) {
    json j;
    j["schema"] = "rs-oracle-network";
    j["schema_version"] = 1;
    j["interarrival"] = dist_to_json(spec.interarrival);
    j["subsystems"] = json::array();
    for (const SubsystemSpec& s : spec.subsystems) j["subsystems"].push_back(subsystem_to_json(s));
    j["holds"] = json::array();
    for (const HoldSpec& h : spec.holds)
        j["holds"].push_back(json{{"id", h.id},
                                  {"los", dist_to_json(h.los)},
                                  {"replaced_group", h.replaced_group}});
    j["routing"] = json::array();
    for (const RouteEdge& e : spec.routing)
        j["routing"].push_back(json{{"from", e.from}, {"to", e.to}, {"probability", e.probability}});
    return j.dump(2);
}

NetworkSpec network_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("network spec is not valid JSON: ") + e.what());
    }
    if (j.value("schema", "") != "rs-oracle-network")
        throw ConfigError("missing or wrong 'schema' field in network spec");
    NetworkSpec spec;
    if (!j.contains("interarrival")) throw ConfigError("missing field 'interarrival'");
    spec.interarrival = dist_from_json(j.at("interarrival"), "interarrival");
    for (const json& js : j.value("subsystems", json::array()))
        spec.subsystems.push_back(subsystem_from_json(js, "subsystems[]"));
    for (const json& jh : j.value("holds", json::array())) {
        HoldSpec h;
        if (!jh.contains("id")) throw ConfigError("missing field 'id' in holds[]");
        h.id = jh.at("id").get<std::string>();
        h.los = dist_from_json(jh.at("los"), "holds[].los");
        h.replaced_group = jh.value("replaced_group", std::vector<std::string>{});
        spec.holds.push_back(std::move(h));
    }
    for (const json& je : j.value("routing", json::array())) {
        RouteEdge e;
        if (!je.contains("from") || !je.contains("to"))
            throw ConfigError("routing edge needs 'from' and 'to'");
        e.from = je.at("from").get<std::string>();
        e.to = je.at("to").get<std::string>();
        e.probability = je.value("probability", 1.0);
        spec.routing.push_back(std::move(e));
    }
    spec.validate();
    return spec;
}

void save_network(const NetworkSpec& spec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write network file: " + path);
    out << network_to_json(spec) << "\n";
}

NetworkSpec load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open network file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return network_from_json(text);
}

void export_result_csv(const SimulationResult& result, const std::string& csv_path,
                       const std::string& sidecar_path, std::uint64_t seed) {
    CsvWriter csv(csv_path, {"subsystem", "occupancy", "arrivals", "completions",
                             "mean_queue_wait_min", "mean_num_in_system"});
    for (const auto& [id, occ] : result.occupancy) {
        csv.row({id, CsvWriter::format(occ),
                 std::to_string(result.arrivals.at(id)),
                 std::to_string(result.completions.count(id) ? result.completions.at(id) : 0),
                 CsvWriter::format(result.mean_queue_wait.at(id)),
                 CsvWriter::format(result.mean_num_in_system.at(id))});
    }
    json side;
    side["schema"] = "rs-oracle-result";
    side["seed"] = seed;
    side["total_arrivals"] = result.total_arrivals;
    side["created_total"] = result.created_total;
    side["departed_total"] = result.departed_total;
    side["wall_runtime_seconds"] = result.wall_runtime_seconds;
    std::ofstream out(sidecar_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write sidecar file: " + sidecar_path);
    out << side.dump(2) << "\n";
}

std::string observation_to_json(const ParentObservation& obs) {
    json j;
    j["schema"] = "rs-oracle-observation";
    json subs = json::object();
    for (const auto& [id, s] : obs.subsystems)
        subs[id] = json{{"class", queue_class_name(s.queue_class)},
                        {"rho", s.rho},
                        {"arrivals", s.arrivals}};
    j["subsystems"] = subs;
    j["n_sim2"] = obs.n_sim2;
    j["n_sim3"] = obs.n_sim3;
    if (obs.rho_sim) j["rho_sim"] = *obs.rho_sim;
    if (obs.sim_class) j["sim_class"] = queue_class_name(*obs.sim_class);
    j["run_minutes"] = obs.run_minutes;
    j["replications"] = obs.replications;
    return j.dump(2);
}

ParentObservation observation_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("observation is not valid JSON: ") + e.what());
    }
    if (j.value("schema", "") != "rs-oracle-observation")
        throw ConfigError("missing or wrong 'schema' field in observation");
    ParentObservation obs;
    if (!j.contains("subsystems") || !j.at("subsystems").is_object())
        throw ConfigError("missing object field 'subsystems' in observation");
    for (const auto& [id, js] : j.at("subsystems").items()) {
        SubsystemObservation s;
        if (!js.contains("class"))
            throw ConfigError("missing field 'class' in observation subsystem " + id);
        s.queue_class = queue_class_from_name(js.at("class").get<std::string>());
        s.rho = need_num(js, "rho", "observation subsystem " + id);
        s.arrivals = need_num(js, "arrivals", "observation subsystem " + id);
        obs.subsystems[id] = s;
    }
    obs.n_sim2 = j.value("n_sim2", 0.0);
    obs.n_sim3 = j.value("n_sim3", 0.0);
    if (j.contains("rho_sim")) obs.rho_sim = j.at("rho_sim").get<double>();
    if (j.contains("sim_class"))
        obs.sim_class = queue_class_from_name(j.at("sim_class").get<std::string>());
    obs.run_minutes = j.value("run_minutes", 0.0);
    obs.replications = j.value("replications", 0);
    return obs;
}

ParentObservation load_observation(const std::string& path) {
    return observation_from_json(parse_file(path, "observation").dump());
}

std::string operation_to_json(const SimplificationOp& op) {
    json j;
    j["schema"] = "rs-oracle-operation";
    j["k1"] = op.k1;
    j["k2"] = op.k2;
    j["k3"] = op.k3;
    if (op.replacement) j["replacement"] = subsystem_to_json(*op.replacement);
    return j.dump(2);
}

SimplificationOp operation_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("operation is not valid JSON: ") + e.what());
    }
    if (j.value("schema", "") != "rs-oracle-operation")
        throw ConfigError("missing or wrong 'schema' field in operation");
    SimplificationOp op;
    op.k1 = j.value("k1", std::vector<std::string>{});
    op.k2 = j.value("k2", std::vector<std::string>{});
    op.k3 = j.value("k3", std::vector<std::string>{});
    if (j.contains("replacement"))
        op.replacement = subsystem_from_json(j.at("replacement"), "replacement");
    return op;
}

SimplificationOp load_operation(const std::string& path) {
    return operation_from_json(parse_file(path, "operation").dump());
}

std::string report_to_json(const PredictionReport& report) {
    json j;
    j["schema"] = "rs-oracle-prediction";
    j["profile_fingerprint"] = report.profile_fingerprint;
    auto group = [](const GroupPrediction& g) {
        return json{{"rie", g.rie}, {"phi_seconds", g.phi}, {"near_zero", g.near_zero}};
    };
    j["s1"] = group(report.g1);
    j["s2"] = group(report.g2);
    j["s3"] = group(report.g3);
    j["total_phi_seconds"] = report.total_phi;
    j["theta_ss_used"] = report.theta_ss_used;
    j["occupancy_clamped"] = report.occupancy_clamped;
    j["near_zero_reduction"] = report.near_zero_reduction;
    return j.dump(2);
}

void export_los_csv(const std::vector<double>& samples, const std::string& path) {
    CsvWriter csv(path, {"los_minutes"});
    for (double s : samples) csv.row(std::vector<double>{s});
}

}  // namespace rso
