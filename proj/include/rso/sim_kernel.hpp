#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rso/errors.hpp"

namespace rso {

// Simulated time, in minutes.
using SimTime = double;

// Closed instruction vocabulary. One trace record = one instruction executed
// by the engine on behalf of an entity.
enum class InstructionLabel : std::uint8_t {
    Create,
    Activate,
    Current,
    EnterQueue,
    Request,
    WaitPassive,
    RequestHonoured,
    LeaveQueue,
    ClaimAndHold,
    Release,
    ScheduleHold,
    End,
};

inline constexpr int kInstructionLabelCount = 12;

const char* label_name(InstructionLabel label);
InstructionLabel label_from_name(const std::string& name);

struct TraceRecord {
    SimTime time;
    std::uint64_t entity_id;
    InstructionLabel label;
    // Node ordinal the instruction belongs to (subsystem/hold index within the
    // network; -1 for lifecycle instructions outside any node). Kept in memory
    // for per-subsystem attribution; the exported format carries only
    // (time, entity, label).
    std::int16_t node;
};

struct EntityRecord {
    SimTime created_at = 0.0;
    SimTime departed_at = -1.0;
    std::int32_t instruction_count = 0;

    bool departed() const { return departed_at >= created_at; }
};

enum class EventKind : std::uint8_t {
    NextArrival,
    ServiceComplete,
    HoldComplete,
};

struct Event {
    SimTime fire_time;
    std::uint64_t seq;  // insertion counter; ties on fire_time resolve FIFO
    EventKind kind;
    std::int32_t node;
    std::int32_t slot;
    std::uint64_t entity;
};

class SimClock {
public:
    SimTime now() const { return now_; }

    void advance_to(SimTime t) {
        if (t >= now_) now_ = t;  // time is non-decreasing across executed events
    }

private:
    SimTime now_ = 0.0;
};

// Pending events ordered by (fire_time, seq). pop() returns the minimum;
// equal fire times come back in insertion order.
//
// Calendar-queue layout: short sorted buckets indexed by fire time modulo one
// "year". Scheduling and popping stay O(1) amortized however many events are
// pending, so a model's cost tracks the instructions it executes rather than
// how many timers happen to be outstanding.
class EventList {
public:
    EventList() { reset_calendar(16, 1.0, 0.0); }

    void schedule(const SimClock& clock, SimTime fire_time, EventKind kind,
                  std::int32_t node, std::int32_t slot, std::uint64_t entity) {
        if (fire_time < clock.now())
            throw SchedulingInPast("event at t=" + std::to_string(fire_time) +
                                   " scheduled while clock is at t=" +
                                   std::to_string(clock.now()));
        insert(Event{fire_time, next_seq_++, kind, node, slot, entity});
        if (count_ > 2 * buckets_.size() && buckets_.size() < (1u << 20)) resize(2 * buckets_.size());
    }

    bool empty() const { return count_ == 0; }
    std::size_t size() const { return count_; }

    const Event& peek() const { return buckets_[find_min_bucket()].front(); }

    Event pop() {
        const std::size_t idx = find_min_bucket();
        auto& bucket = buckets_[idx];
        Event e = bucket.front();
        bucket.erase(bucket.begin());
        --count_;
        // advance the scan position to the popped event's bucket window
        cursor_ = idx;
        cursor_top_ = window_top(e.fire_time);
        if (count_ >= 16 && count_ < buckets_.size() / 4 && buckets_.size() > 16)
            resize(buckets_.size() / 2);
        return e;
    }

private:
    static bool earlier(const Event& a, const Event& b) {
        if (a.fire_time != b.fire_time) return a.fire_time < b.fire_time;
        return a.seq < b.seq;
    }

    std::size_t bucket_of(SimTime t) const {
        return static_cast<std::size_t>(t / width_) & (buckets_.size() - 1);
    }

    double window_top(SimTime t) const {
        return (std::floor(t / width_) + 1.0) * width_;
    }

    void insert(const Event& e) {
        auto& bucket = buckets_[bucket_of(e.fire_time)];
        auto pos = bucket.begin();
        while (pos != bucket.end() && earlier(*pos, e)) ++pos;
        bucket.insert(pos, e);
        ++count_;
        if (count_ == 1) {
            cursor_ = bucket_of(e.fire_time);
            cursor_top_ = window_top(e.fire_time);
        }
    }

    // The soonest event lives either in the current year's window scan or, if
    // a full year of buckets is empty, at the global minimum.
    std::size_t find_min_bucket() const {
        const std::size_t n = buckets_.size();
        std::size_t idx = cursor_;
        double top = cursor_top_;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& bucket = buckets_[idx];
            if (!bucket.empty() && bucket.front().fire_time < top) {
                cursor_ = idx;
                cursor_top_ = top;
                return idx;
            }
            idx = (idx + 1) & (n - 1);
            top += width_;
        }
        // sparse far future: jump straight to the global minimum
        std::size_t best = n;
        for (std::size_t b = 0; b < n; ++b) {
            if (buckets_[b].empty()) continue;
            if (best == n || earlier(buckets_[b].front(), buckets_[best].front())) best = b;
        }
        cursor_ = best;
        cursor_top_ = window_top(buckets_[best].front().fire_time);
        return best;
    }

    void reset_calendar(std::size_t nbuckets, double width, double start) {
        buckets_.assign(nbuckets, {});
        width_ = width;
        count_ = 0;
        cursor_ = bucket_of(start);
        cursor_top_ = window_top(start);
    }

    void resize(std::size_t nbuckets) {
        std::vector<Event> pending;
        pending.reserve(count_);
        for (auto& bucket : buckets_)
            pending.insert(pending.end(), bucket.begin(), bucket.end());
        std::sort(pending.begin(), pending.end(), earlier);
        // bucket width from the mean gap of the soonest events, so each
        // bucket holds only a couple of entries
        double width = 1.0;
        const std::size_t probe = std::min<std::size_t>(pending.size(), 32);
        if (probe >= 2) {
            const double span = pending[probe - 1].fire_time - pending[0].fire_time;
            width = std::max(span / static_cast<double>(probe - 1) * 2.0, 1e-9);
        }
        const double start = pending.empty() ? 0.0 : pending.front().fire_time;
        reset_calendar(nbuckets, width, start);
        for (const Event& e : pending) insert(e);
    }

    std::vector<std::vector<Event>> buckets_;
    double width_ = 1.0;
    std::size_t count_ = 0;
    mutable std::size_t cursor_ = 0;
    mutable double cursor_top_ = 1.0;
    std::uint64_t next_seq_ = 0;
};

// In-memory trace buffer. Filled during the run, flushed (exported) only
// afterwards so file I/O never contaminates wall-clock measurements.
struct Trace {
    std::vector<TraceRecord> records;
    std::vector<EntityRecord> entities;  // indexed by entity id
    // Entity ids created inside the measurement window, in arrival order.
    std::vector<std::uint64_t> window_entities;

    // Tab-separated export: sim_time, entity_id, label. Deterministic ordering.
    void export_tsv(const std::string& path) const;
};

// Parses the exported tab-separated format back into a Trace (entity records
// are reconstructed from create/end instructions).
Trace parse_trace_tsv(const std::string& path);

}  // namespace rso
