#include "rso/queueing_net.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <deque>
#include <mutex>
#include <set>
#include <unordered_map>

#include "rso/errors.hpp"

namespace rso {

namespace {

// Timed runs execute serially, process-wide, so concurrent untimed work can
// never contaminate a wall-clock measurement.
std::mutex g_timed_run_mutex;

constexpr std::uint64_t kGeneratorStream = 0;
constexpr std::uint64_t kRoutingStream = 1;
constexpr std::uint64_t kServiceStreamBase = 16;
constexpr std::uint64_t kHoldStreamBase = 4096;

enum class NodeKind { Subsystem, Hold, Sink };

struct ServerSlot {
    bool busy = false;
    SimTime claim_time = 0.0;
};

struct Node {
    NodeKind kind;
    std::string id;
    int n_servers = 0;
    DistributionSpec dist;  // service for subsystems, LOS for holds
    std::vector<std::pair<double, int>> routes;  // cumulative probability, destination
    std::vector<int> groups;  // LOS group indices this node belongs to

    // runtime state
    std::vector<ServerSlot> slots;
    std::deque<std::pair<std::uint64_t, SimTime>> queue;  // entity, enqueue time
    RngStream rng;

    // instruction monitor: executed instructions per label at this node
    std::array<std::int64_t, kInstructionLabelCount> tally{};

    // window statistics
    double busy_time = 0.0;
    std::int64_t arrivals = 0;
    std::int64_t completions = 0;
    double wait_sum = 0.0;
    std::int64_t wait_count = 0;
    double area_in_system = 0.0;
    SimTime last_area_update = 0.0;
    std::int64_t n_in_system = 0;
};

struct EntityState {
    SimTime created_at = 0.0;
    SimTime departed_at = -1.0;
    SimTime node_entry = 0.0;
    std::int32_t instructions = 0;
    InstructionLabel last_instruction = InstructionLabel::End;
    bool in_window = false;
};

// Legal follow-ups per instruction, as a bitmask over InstructionLabel. The
// engine refuses to run an out-of-order lifecycle step.
constexpr std::uint16_t bit(InstructionLabel l) { return static_cast<std::uint16_t>(1u << static_cast<int>(l)); }

constexpr std::array<std::uint16_t, kInstructionLabelCount> legal_next() {
    std::array<std::uint16_t, kInstructionLabelCount> t{};
    using L = InstructionLabel;
    t[static_cast<int>(L::Current)] = bit(L::ScheduleHold) | bit(L::EnterQueue) | bit(L::Release) | bit(L::End);
    t[static_cast<int>(L::ScheduleHold)] = bit(L::Create) | bit(L::Current);
    t[static_cast<int>(L::Create)] = bit(L::Activate);
    t[static_cast<int>(L::Activate)] = bit(L::Current);
    t[static_cast<int>(L::EnterQueue)] = bit(L::Request);
    t[static_cast<int>(L::Request)] = bit(L::LeaveQueue) | bit(L::WaitPassive);
    t[static_cast<int>(L::WaitPassive)] = bit(L::RequestHonoured);
    t[static_cast<int>(L::RequestHonoured)] = bit(L::LeaveQueue);
    t[static_cast<int>(L::LeaveQueue)] = bit(L::ClaimAndHold);
    t[static_cast<int>(L::ClaimAndHold)] = bit(L::Current);
    t[static_cast<int>(L::Release)] = bit(L::EnterQueue) | bit(L::ScheduleHold) | bit(L::End);
    t[static_cast<int>(L::End)] = bit(L::Current);  // the next entity's generator wake
    return t;
}

constexpr std::array<std::uint16_t, kInstructionLabelCount> kLegalNext = legal_next();

class Simulator {
public:
    Simulator(const NetworkSpec& spec, const RunOptions& options)
        : spec_(spec), options_(options) {
        if (options.trace_on && options.timed)
            throw MutuallyExclusiveFlags("a run cannot be both traced and timed");
        if (!(options.warmup_minutes > 0.0) || !(options.run_minutes > 0.0))
            throw ConfigError("warmup and run length must be positive");
        spec.validate();
        tracing_ = options.trace_on;
        window_start_ = options.warmup_minutes;
        window_end_ = options.warmup_minutes + options.run_minutes;
        compile();
    }

    SimulationResult run() {
        const bool drain = options_.trace_on || !options_.los_groups.empty();
        gen_rng_ = RngStream(options_.seed, kGeneratorStream);
        route_rng_ = RngStream(options_.seed, kRoutingStream);
        // Size the entity table (and trace buffer) upfront: growth
        // reallocations inside the timed window would contaminate the
        // wall-clock measurement.
        const double expected_entities =
            (options_.warmup_minutes + options_.run_minutes) / spec_.interarrival.mean();
        entities_.reserve(static_cast<std::size_t>(expected_entities * 1.3) + 1024);
        if (tracing_) {
            const double window_entities = options_.run_minutes / spec_.interarrival.mean();
            window_entities_.reserve(static_cast<std::size_t>(window_entities * 1.3) + 256);
            records_.reserve(static_cast<std::size_t>(window_entities * 30.0) + 4096);
        }
        schedule_next_arrival(sample(spec_.interarrival, gen_rng_));

        if (options_.timed) {
            std::lock_guard<std::mutex> lock(g_timed_run_mutex);
            run_until(window_start_);
            const auto t0 = std::chrono::steady_clock::now();
            run_until(window_end_);
            const auto t1 = std::chrono::steady_clock::now();
            wall_seconds_ = std::chrono::duration<double>(t1 - t0).count();
        } else {
            run_until(window_start_);
            run_until(window_end_);
        }
        finalize_window_stats();
        if (drain) drain_in_flight();
        return collect_result();
    }

private:
    void compile() {
        std::size_t reserve = spec_.subsystems.size() + spec_.holds.size() + 1;
        nodes_.reserve(reserve);
        for (const SubsystemSpec& s : spec_.subsystems) {
            Node n;
            n.kind = NodeKind::Subsystem;
            n.id = s.id;
            n.n_servers = s.n_servers;
            n.dist = s.service;
            n.slots.resize(static_cast<std::size_t>(s.n_servers));
            n.rng = RngStream(options_.seed, kServiceStreamBase + nodes_.size());
            node_index_[s.id] = static_cast<int>(nodes_.size());
            nodes_.push_back(std::move(n));
        }
        for (const HoldSpec& h : spec_.holds) {
            Node n;
            n.kind = NodeKind::Hold;
            n.id = h.id;
            n.dist = h.los;
            n.rng = RngStream(options_.seed, kHoldStreamBase + nodes_.size());
            node_index_[h.id] = static_cast<int>(nodes_.size());
            nodes_.push_back(std::move(n));
        }
        {
            Node sink;
            sink.kind = NodeKind::Sink;
            sink.id = kSinkId;
            sink_index_ = static_cast<int>(nodes_.size());
            node_index_[kSinkId] = sink_index_;
            nodes_.push_back(std::move(sink));
        }

        std::map<std::string, std::vector<RouteEdge>> outgoing;
        for (const RouteEdge& e : spec_.routing) outgoing[e.from].push_back(e);
        auto compile_routes = [&](const std::string& from) {
            std::vector<std::pair<double, int>> routes;
            double cum = 0.0;
            for (const RouteEdge& e : outgoing[from]) {
                cum += e.probability;
                routes.emplace_back(cum, node_index_.at(e.to));
            }
            return routes;
        };
        generator_routes_ = compile_routes(kGeneratorId);
        if (generator_routes_.empty()) throw ConfigError("generator has no outgoing route");
        for (Node& n : nodes_)
            if (n.kind != NodeKind::Sink) n.routes = compile_routes(n.id);

        int group_idx = 0;
        for (const auto& [key, members] : options_.los_groups) {
            for (const std::string& id : members) {
                auto it = node_index_.find(id);
                if (it == node_index_.end())
                    throw ConfigError("LOS group member does not exist: " + id);
                nodes_[static_cast<std::size_t>(it->second)].groups.push_back(group_idx);
            }
            group_keys_.push_back(key);
            ++group_idx;
        }
        group_entry_.resize(group_keys_.size());
        group_samples_.resize(group_keys_.size());
    }

    void schedule_next_arrival(SimTime at) {
        events_.schedule(clock_, at, EventKind::NextArrival, -1, -1, 0);
    }

    void run_until(SimTime t_end) {
        while (!events_.empty() && events_.peek().fire_time <= t_end) {
            const Event ev = events_.pop();
            clock_.advance_to(ev.fire_time);
            dispatch(ev);
        }
        clock_.advance_to(t_end);
    }

    void drain_in_flight() {
        draining_ = true;
        while (!events_.empty()) {
            const Event ev = events_.pop();
            clock_.advance_to(ev.fire_time);
            dispatch(ev);
        }
    }

    void dispatch(const Event& ev) {
        switch (ev.kind) {
            case EventKind::NextArrival: on_arrival(); break;
            case EventKind::ServiceComplete: on_service_complete(ev); break;
            case EventKind::HoldComplete: on_hold_complete(ev); break;
        }
    }

    // Every lifecycle step of every entity funnels through here: the entity
    // state machine advances, the engine and node monitors tick, and (when
    // tracing) the step is buffered. One call = one instruction.
    void instruction(std::uint64_t entity, InstructionLabel label, int node) {
        EntityState& e = entities_[entity];
        const auto prev = static_cast<int>(e.last_instruction);
        if ((kLegalNext[prev] & bit(label)) == 0 && label != InstructionLabel::Current)
            throw Error(std::string("illegal lifecycle step: ") + label_name(e.last_instruction) +
                        " -> " + label_name(label));
        e.last_instruction = label;
        ++instructions_executed_;
        if (node >= 0)
            ++nodes_[static_cast<std::size_t>(node)].tally[static_cast<int>(label)];
        else
            ++engine_tally_[static_cast<int>(label)];
        if (tracing_ && e.in_window) {
            e.instructions += 1;
            records_.push_back(TraceRecord{clock_.now(), entity, label,
                                           static_cast<std::int16_t>(node)});
        }
    }

    void on_arrival() {
        if (draining_) return;  // generator stops once the measured span is over
        const SimTime now = clock_.now();
        const std::uint64_t id = entities_.size();
        EntityState e;
        e.created_at = now;
        e.in_window = now >= window_start_ && now < window_end_;
        entities_.push_back(e);
        if (e.in_window) {
            ++total_arrivals_;
            if (tracing_) window_entities_.push_back(id);
        }
        // Generator wake and reschedule, attributed to the entity it creates.
        instruction(id, InstructionLabel::Current, -1);
        instruction(id, InstructionLabel::ScheduleHold, -1);
        schedule_next_arrival(now + sample(spec_.interarrival, gen_rng_));
        instruction(id, InstructionLabel::Create, -1);
        instruction(id, InstructionLabel::Activate, -1);
        instruction(id, InstructionLabel::Current, -1);
        enter_node(id, route_from(generator_routes_), -1);
    }

    int route_from(const std::vector<std::pair<double, int>>& routes) {
        if (routes.size() == 1) return routes.front().second;
        const double u = route_rng_.uniform01();
        for (const auto& [cum, dest] : routes)
            if (u <= cum) return dest;
        return routes.back().second;
    }

    void update_area(Node& n, SimTime now) {
        const SimTime lo = std::max(n.last_area_update, window_start_);
        const SimTime hi = std::min(now, window_end_);
        if (hi > lo) n.area_in_system += static_cast<double>(n.n_in_system) * (hi - lo);
        n.last_area_update = now;
    }

    void enter_node(std::uint64_t entity, int node_idx, int from_idx) {
        Node& n = nodes_[static_cast<std::size_t>(node_idx)];
        EntityState& e = entities_[entity];
        const SimTime now = clock_.now();

        // Group LOS bookkeeping: entering a member from outside starts the span.
        for (int g : n.groups)
            if (from_idx < 0 || !node_in_group(from_idx, g))
                group_entry_[static_cast<std::size_t>(g)][entity] = now;

        switch (n.kind) {
            case NodeKind::Subsystem: {
                instruction(entity, InstructionLabel::EnterQueue, node_idx);
                instruction(entity, InstructionLabel::Request, node_idx);
                if (now >= window_start_ && now < window_end_) ++n.arrivals;
                update_area(n, now);
                ++n.n_in_system;
                e.node_entry = now;
                // first idle server, scanned in slot order
                int free_slot = -1;
                for (int s = 0; s < n.n_servers; ++s) {
                    if (!n.slots[static_cast<std::size_t>(s)].busy) {
                        free_slot = s;
                        break;
                    }
                }
                if (free_slot >= 0) {
                    instruction(entity, InstructionLabel::LeaveQueue, node_idx);
                    instruction(entity, InstructionLabel::ClaimAndHold, node_idx);
                    start_service(n, node_idx, free_slot, entity, now, now);
                } else {
                    instruction(entity, InstructionLabel::WaitPassive, node_idx);
                    n.queue.emplace_back(entity, now);
                }
                break;
            }
            case NodeKind::Hold: {
                instruction(entity, InstructionLabel::ScheduleHold, node_idx);
                ++n.n_in_system;
                e.node_entry = now;
                const SimTime los = sample(n.dist, n.rng);
                events_.schedule(clock_, now + los, EventKind::HoldComplete, node_idx, -1, entity);
                break;
            }
            case NodeKind::Sink: {
                instruction(entity, InstructionLabel::End, -1);
                e.departed_at = now;
                ++departed_;
                if (options_.collect_los && e.in_window)
                    system_los_.push_back(now - e.created_at);
                break;
            }
        }
    }

    void start_service(Node& n, int node_idx, int slot, std::uint64_t entity,
                       SimTime enqueue_time, SimTime now) {
        ServerSlot& s = n.slots[static_cast<std::size_t>(slot)];
        s.busy = true;
        s.claim_time = now;
        if (enqueue_time >= window_start_ && enqueue_time < window_end_) {
            n.wait_sum += now - enqueue_time;
            ++n.wait_count;
        }
        const SimTime service = sample(n.dist, n.rng);
        events_.schedule(clock_, now + service, EventKind::ServiceComplete, node_idx, slot, entity);
    }

    void on_service_complete(const Event& ev) {
        Node& n = nodes_[static_cast<std::size_t>(ev.node)];
        EntityState& e = entities_[ev.entity];
        const SimTime now = clock_.now();

        instruction(ev.entity, InstructionLabel::Current, ev.node);
        instruction(ev.entity, InstructionLabel::Release, ev.node);

        ServerSlot& slot = n.slots[static_cast<std::size_t>(ev.slot)];
        const SimTime busy_lo = std::max(slot.claim_time, window_start_);
        const SimTime busy_hi = std::min(now, window_end_);
        if (busy_hi > busy_lo) n.busy_time += busy_hi - busy_lo;
        slot.busy = false;

        update_area(n, now);
        --n.n_in_system;
        if (e.node_entry >= window_start_ && e.node_entry < window_end_) {
            ++n.completions;
            if (options_.collect_los)
                subsystem_los_[n.id].push_back(now - e.node_entry);
        }

        if (!n.queue.empty()) {
            const auto [next_entity, enqueue_time] = n.queue.front();
            n.queue.pop_front();
            instruction(next_entity, InstructionLabel::RequestHonoured, ev.node);
            instruction(next_entity, InstructionLabel::LeaveQueue, ev.node);
            instruction(next_entity, InstructionLabel::ClaimAndHold, ev.node);
            start_service(n, ev.node, ev.slot, next_entity, enqueue_time, now);
        }

        route_onward(ev.entity, ev.node);
    }

    void on_hold_complete(const Event& ev) {
        Node& n = nodes_[static_cast<std::size_t>(ev.node)];
        EntityState& e = entities_[ev.entity];
        const SimTime now = clock_.now();
        instruction(ev.entity, InstructionLabel::Current, ev.node);
        --n.n_in_system;
        if (e.node_entry >= window_start_ && e.node_entry < window_end_) {
            ++n.completions;
            if (options_.collect_los)
                subsystem_los_[n.id].push_back(now - e.node_entry);
        }
        route_onward(ev.entity, ev.node);
    }

    bool node_in_group(int node_idx, int g) const {
        const auto& groups = nodes_[static_cast<std::size_t>(node_idx)].groups;
        return std::find(groups.begin(), groups.end(), g) != groups.end();
    }

    void route_onward(std::uint64_t entity, int from_idx) {
        Node& from = nodes_[static_cast<std::size_t>(from_idx)];
        const int dest = route_from(from.routes);
        // Leaving a group through a non-member destination closes the span.
        for (int g : from.groups) {
            if (node_in_group(dest, g)) continue;
            auto& entry = group_entry_[static_cast<std::size_t>(g)];
            auto it = entry.find(entity);
            if (it != entry.end()) {
                if (it->second >= window_start_ && it->second < window_end_)
                    group_samples_[static_cast<std::size_t>(g)].push_back(clock_.now() -
                                                                          it->second);
                entry.erase(it);
            }
        }
        enter_node(entity, dest, from_idx);
    }

    void finalize_window_stats() {
        for (Node& n : nodes_) {
            if (n.kind != NodeKind::Subsystem) continue;
            update_area(n, window_end_);
            for (ServerSlot& s : n.slots) {
                if (!s.busy) continue;
                const SimTime lo = std::max(s.claim_time, window_start_);
                if (window_end_ > lo) {
                    n.busy_time += window_end_ - lo;
                    // Remaining busy span is already booked; the eventual
                    // release (drain) must not book it again.
                    s.claim_time = window_end_;
                }
            }
        }
    }

    SimulationResult collect_result() {
        SimulationResult r;
        const double span = options_.run_minutes;
        for (Node& n : nodes_) {
            if (n.kind == NodeKind::Sink) continue;
            if (n.kind == NodeKind::Subsystem) {
                r.occupancy[n.id] = n.busy_time / (static_cast<double>(n.n_servers) * span);
                r.arrivals[n.id] = n.arrivals;
                r.mean_queue_wait[n.id] =
                    n.wait_count > 0 ? n.wait_sum / static_cast<double>(n.wait_count) : 0.0;
                r.mean_num_in_system[n.id] = n.area_in_system / span;
            }
            r.completions[n.id] = n.completions;
        }
        r.total_arrivals = total_arrivals_;
        r.total_instructions = static_cast<std::int64_t>(instructions_executed_);
        r.created_total = static_cast<std::int64_t>(entities_.size());
        r.departed_total = departed_;
        for (Node& n : nodes_)
            if (n.kind != NodeKind::Sink) r.in_flight[n.id] = n.n_in_system;
        r.wall_runtime_seconds = wall_seconds_;
        if (options_.collect_los) {
            for (auto& [id, samples] : subsystem_los_) r.los_samples[id] = std::move(samples);
            r.los_samples[kSystemLosKey] = std::move(system_los_);
        }
        for (std::size_t g = 0; g < group_keys_.size(); ++g)
            r.los_samples[group_keys_[g]] = std::move(group_samples_[g]);
        if (tracing_) {
            Trace t;
            t.records = std::move(records_);
            t.entities.reserve(entities_.size());
            for (const EntityState& e : entities_)
                t.entities.push_back(EntityRecord{e.created_at, e.departed_at, e.instructions});
            t.window_entities = std::move(window_entities_);
            r.trace = std::move(t);
        }
        return r;
    }

    const NetworkSpec& spec_;
    RunOptions options_;
    SimTime window_start_;
    SimTime window_end_;
    bool tracing_ = false;
    bool draining_ = false;

    SimClock clock_;
    EventList events_;
    std::vector<Node> nodes_;
    std::unordered_map<std::string, int> node_index_;
    std::vector<std::pair<double, int>> generator_routes_;
    int sink_index_ = -1;
    RngStream gen_rng_;
    RngStream route_rng_;

    std::vector<EntityState> entities_;
    std::uint64_t instructions_executed_ = 0;
    std::array<std::int64_t, kInstructionLabelCount> engine_tally_{};
    std::vector<TraceRecord> records_;
    std::vector<std::uint64_t> window_entities_;
    std::int64_t total_arrivals_ = 0;
    std::int64_t departed_ = 0;
    double wall_seconds_ = 0.0;

    std::map<std::string, std::vector<double>> subsystem_los_;
    std::vector<double> system_los_;
    std::vector<std::string> group_keys_;
    std::vector<std::unordered_map<std::uint64_t, SimTime>> group_entry_;
    std::vector<std::vector<double>> group_samples_;
};

}  // namespace

const char* queue_class_name(QueueClass c) {
    switch (c) {
        case QueueClass::MM: return "mm";
        case QueueClass::MG: return "mg";
        case QueueClass::GG: return "gg";
    }
    return "?";
}

QueueClass queue_class_from_name(const std::string& name) {
    if (name == "mm") return QueueClass::MM;
    if (name == "mg") return QueueClass::MG;
    if (name == "gg") return QueueClass::GG;
    throw ConfigError("unknown queue class: " + name + " (expected mm, mg, or gg)");
}

const char* archetype_name(Archetype k) {
    switch (k) {
        case Archetype::TwoStage: return "2s";
        case Archetype::SingleStage: return "1s";
        case Archetype::SecondStageOnly: return "ss";
        case Archetype::Simplified: return "ms";
    }
    return "?";
}

Archetype archetype_from_name(const std::string& name) {
    if (name == "2s") return Archetype::TwoStage;
    if (name == "1s") return Archetype::SingleStage;
    if (name == "ss") return Archetype::SecondStageOnly;
    if (name == "ms") return Archetype::Simplified;
    throw ConfigError("unknown archetype: " + name);
}

void NetworkSpec::validate() const {
    interarrival.validate();
    std::set<std::string> ids;
    std::set<std::string> live;
    for (const SubsystemSpec& s : subsystems) {
        if (s.id == kGeneratorId || s.id == kSinkId)
            throw ConfigError("subsystem id is reserved: " + s.id);
        if (!ids.insert(s.id).second) throw ConfigError("duplicate node id: " + s.id);
        if (s.n_servers < 1) throw ConfigError("subsystem " + s.id + " needs n_servers >= 1");
        s.service.validate();
        live.insert(s.id);
    }
    for (const HoldSpec& h : holds) {
        if (h.id == kGeneratorId || h.id == kSinkId)
            throw ConfigError("hold id is reserved: " + h.id);
        if (!ids.insert(h.id).second) throw ConfigError("duplicate node id: " + h.id);
        h.los.validate();
        for (const std::string& g : h.replaced_group)
            if (live.count(g))
                throw ConfigError("hold " + h.id + " replaces live subsystem " + g);
    }
    std::map<std::string, double> out_prob;
    bool generator_routed = false;
    for (const RouteEdge& e : routing) {
        if (e.from != kGeneratorId && !ids.count(e.from))
            throw ConfigError("routing edge from unknown node: " + e.from);
        if (e.to != kSinkId && !ids.count(e.to))
            throw ConfigError("routing edge to unknown node: " + e.to);
        if (e.to == e.from) throw ConfigError("self-loop routing not supported: " + e.from);
        if (!(e.probability >= 0.0 && e.probability <= 1.0))
            throw ConfigError("routing probability out of [0,1] from " + e.from);
        out_prob[e.from] += e.probability;
        if (e.from == kGeneratorId) generator_routed = true;
    }
    if (!generator_routed) throw ConfigError("no routing from the generator");
    for (const auto& [from, p] : out_prob)
        if (std::abs(p - 1.0) > 1e-9)
            throw ConfigError("outgoing probabilities from " + from + " sum to " +
                              std::to_string(p) + ", expected 1");
    for (const std::string& id : ids)
        if (!out_prob.count(id))
            throw ConfigError("node has no outgoing route: " + id);
}

const SubsystemSpec* NetworkSpec::find_subsystem(const std::string& id) const {
    for (const SubsystemSpec& s : subsystems)
        if (s.id == id) return &s;
    return nullptr;
}

double SimulationResult::occupancy_of(const std::string& id) const {
    auto it = occupancy.find(id);
    if (it == occupancy.end()) throw ConfigError("no occupancy recorded for subsystem " + id);
    return it->second;
}

SimulationResult run_simulation(const NetworkSpec& spec, const RunOptions& options) {
    Simulator sim(spec, options);
    return sim.run();
}

SimulationResult run_simulation(const NetworkSpec& spec, SimTime warmup, SimTime run_length,
                                std::uint64_t seed, bool trace_on, bool timed) {
    RunOptions opt;
    opt.warmup_minutes = warmup;
    opt.run_minutes = run_length;
    opt.seed = seed;
    opt.trace_on = trace_on;
    opt.timed = timed;
    return run_simulation(spec, opt);
}

std::int64_t expected_arrivals(double rho, double service_rate_per_min, double run_minutes) {
    if (!(rho > 0.0) || !(service_rate_per_min > 0.0) || !(run_minutes > 0.0))
        throw ConfigError("expected_arrivals needs positive inputs");
    return std::llround(rho * service_rate_per_min * run_minutes);
}

double archetype_service_mean(QueueClass cls) {
    switch (cls) {
        case QueueClass::MM: return 1.0;
        case QueueClass::MG: return 2.0;
        case QueueClass::GG: return 5.0;
    }
    return 0.0;
}

namespace {

DistributionSpec archetype_interarrival(QueueClass cls, double rho) {
    const double mean = interarrival_for_occupancy(rho, archetype_service_mean(cls), 1);
    if (cls == QueueClass::GG) return DistributionSpec::normal(mean, 1.5, 0.01);
    return DistributionSpec::exponential(mean);
}

DistributionSpec archetype_stage1_service(QueueClass cls) {
    switch (cls) {
        case QueueClass::MM: return DistributionSpec::exponential(1.0);
        case QueueClass::MG: return DistributionSpec::exponential(2.0);
        case QueueClass::GG: return DistributionSpec::gamma(11.11, 0.45);  // mean 5, sd 1.5
    }
    throw ConfigError("bad class");
}

DistributionSpec archetype_stage2_service(QueueClass cls) {
    switch (cls) {
        case QueueClass::MM: return DistributionSpec::exponential(1.0);
        case QueueClass::MG: return DistributionSpec::normal(2.0, 0.2, 0.01);
        case QueueClass::GG: return DistributionSpec::gamma(11.11, 0.45);
    }
    throw ConfigError("bad class");
}

}  // namespace

NetworkSpec build_archetype(Archetype kind, QueueClass cls, double rho) {
    if (kind == Archetype::SecondStageOnly)
        throw UnsupportedArchetype(
            "ss has no generator and cannot run standalone; derive it from 2s minus 1s");
    if (!(rho > 0.0) || !(rho < 1.0)) throw OccupancyOutOfRange("rho must be in (0,1)");

    NetworkSpec net;
    net.interarrival = archetype_interarrival(cls, rho);
    net.subsystems.push_back({"s1", 1, archetype_stage1_service(cls)});
    switch (kind) {
        case Archetype::TwoStage:
            net.subsystems.push_back({"s2", 1, archetype_stage2_service(cls)});
            net.routing = {{kGeneratorId, "s1", 1.0}, {"s1", "s2", 1.0}, {"s2", kSinkId, 1.0}};
            break;
        case Archetype::SingleStage:
            net.routing = {{kGeneratorId, "s1", 1.0}, {"s1", kSinkId, 1.0}};
            break;
        case Archetype::Simplified: {
            // Stand-in LOS for the abstracted second stage. The engine cost of
            // a hold does not depend on the sampled value, so a mean-matched
            // exponential is enough until a fitted LOS is available.
            const double mean_los = archetype_service_mean(cls) / (1.0 - rho);
            HoldSpec hold;
            hold.id = "h2";
            hold.los = DistributionSpec::exponential(mean_los);
            hold.replaced_group = {"s2"};
            net.holds.push_back(std::move(hold));
            net.routing = {{kGeneratorId, "s1", 1.0}, {"s1", "h2", 1.0}, {"h2", kSinkId, 1.0}};
            break;
        }
        case Archetype::SecondStageOnly: break;  // unreachable
    }
    net.validate();
    return net;
}

}  // namespace rso
