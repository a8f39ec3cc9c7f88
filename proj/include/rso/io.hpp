#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "rso/predict.hpp"
#include "rso/queueing_net.hpp"
#include "rso/simplify.hpp"

namespace rso {

inline constexpr const char* kCsvSchemaHeader = "# rs-oracle-csv v1";

// CSV with a schema version header row, deterministic number formatting.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& cells);
    void row(const std::vector<double>& cells);

    static std::string format(double v);

private:
    std::ofstream out_;
    std::size_t columns_;
};

// --- NetworkSpec JSON -------------------------------------------------------
std::string network_to_json(const NetworkSpec& spec);
NetworkSpec network_from_json(const std::string& text);
void save_network(const NetworkSpec& spec, const std::string& path);
NetworkSpec load_network(const std::string& path);

// --- SimulationResult export ------------------------------------------------
// One CSV row per subsystem plus a scalar sidecar (JSON) next to it.
void export_result_csv(const SimulationResult& result, const std::string& csv_path,
                       const std::string& sidecar_path, std::uint64_t seed);

// --- observation / operation / report ---------------------------------------
std::string observation_to_json(const ParentObservation& obs);
ParentObservation observation_from_json(const std::string& text);
ParentObservation load_observation(const std::string& path);

std::string operation_to_json(const SimplificationOp& op);
SimplificationOp operation_from_json(const std::string& text);
SimplificationOp load_operation(const std::string& path);

std::string report_to_json(const PredictionReport& report);

// Single-column CSV of LOS samples.
void export_los_csv(const std::vector<double>& samples, const std::string& path);

}  // namespace rso
