#include "rso/sim_kernel.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rso {

namespace {

const char* const kLabelNames[kInstructionLabelCount] = {
    "create",          "activate",   "current",      "enter-queue",
    "request",         "wait-passive", "request-honoured", "leave-queue",
    "claim-and-hold",  "release",    "schedule-hold", "end",
};

}  // namespace

const char* label_name(InstructionLabel label) {
    return kLabelNames[static_cast<int>(label)];
}

InstructionLabel label_from_name(const std::string& name) {
    for (int i = 0; i < kInstructionLabelCount; ++i) {
        if (name == kLabelNames[i]) return static_cast<InstructionLabel>(i);
    }
    throw Error("unknown instruction label: " + name);
}

void Trace::export_tsv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open trace file for writing: " + path);
    char line[128];
    for (const TraceRecord& r : records) {
        const int n = std::snprintf(line, sizeof(line), "%.6f\t%" PRIu64 "\t%s\n",
                                    r.time, r.entity_id, label_name(r.label));
        out.write(line, n);
    }
}

Trace parse_trace_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace file: " + path);
    Trace trace;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos)
            throw Error("malformed trace line: " + line);
        TraceRecord r;
        r.time = std::stod(line.substr(0, tab1));
        r.entity_id = std::stoull(line.substr(tab1 + 1, tab2 - tab1 - 1));
        r.label = label_from_name(line.substr(tab2 + 1));
        r.node = -1;
        if (r.entity_id >= trace.entities.size()) trace.entities.resize(r.entity_id + 1);
        EntityRecord& e = trace.entities[r.entity_id];
        e.instruction_count += 1;
        if (r.label == InstructionLabel::Create) e.created_at = r.time;
        if (r.label == InstructionLabel::End) e.departed_at = r.time;
        trace.records.push_back(r);
    }
    // Reconstruct node ordinals per entity: the k-th enter-queue..release span
    // of an entity belongs to node k (valid for tandem paths, which is all the
    // exported-format consumers need).
    std::vector<std::int16_t> stage(trace.entities.size(), -1);
    std::vector<std::int16_t> open(trace.entities.size(), 0);
    for (TraceRecord& r : trace.records) {
        if (r.label == InstructionLabel::EnterQueue) {
            r.node = stage[r.entity_id] = open[r.entity_id]++;
        } else if (r.label == InstructionLabel::Request || r.label == InstructionLabel::WaitPassive ||
                   r.label == InstructionLabel::RequestHonoured ||
                   r.label == InstructionLabel::LeaveQueue ||
                   r.label == InstructionLabel::ClaimAndHold ||
                   r.label == InstructionLabel::Current) {
            r.node = stage[r.entity_id];  // -1 outside any enter-queue..release span
        } else if (r.label == InstructionLabel::Release) {
            r.node = stage[r.entity_id];
            stage[r.entity_id] = -1;
        }
    }
    for (std::uint64_t id = 0; id < trace.entities.size(); ++id) {
        if (trace.entities[id].instruction_count > 0 && trace.entities[id].departed())
            trace.window_entities.push_back(id);
    }
    return trace;
}

}  // namespace rso
