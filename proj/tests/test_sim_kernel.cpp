#include "doctest.h"
#include "rso/sim_kernel.hpp"

using namespace rso;

TEST_CASE("event list pops in (fire_time, seq) order") {
    SimClock clock;
    EventList list;
    list.schedule(clock, 5.0, EventKind::NextArrival, 0, 0, 0);
    list.schedule(clock, 5.0, EventKind::ServiceComplete, 1, 0, 1);
    list.schedule(clock, 4.9, EventKind::HoldComplete, 2, 0, 2);

    Event first = list.pop();
    CHECK(first.fire_time == 4.9);
    // equal fire times execute in insertion order
    Event second = list.pop();
    CHECK(second.kind == EventKind::NextArrival);
    Event third = list.pop();
    CHECK(third.kind == EventKind::ServiceComplete);
    CHECK(second.seq < third.seq);
    CHECK(list.empty());
}

TEST_CASE("an event scheduled at the current time runs before later events") {
    SimClock clock;
    clock.advance_to(10.0);
    EventList list;
    list.schedule(clock, 10.1, EventKind::NextArrival, 0, 0, 0);
    list.schedule(clock, 10.0, EventKind::NextArrival, 0, 0, 1);
    CHECK(list.pop().entity == 1);
    CHECK(list.pop().entity == 0);
}

TEST_CASE("scheduling in the past is rejected") {
    SimClock clock;
    clock.advance_to(3.0);
    EventList list;
    CHECK_THROWS_AS(list.schedule(clock, 2.0, EventKind::NextArrival, 0, 0, 0), SchedulingInPast);
}

TEST_CASE("clock never moves backwards") {
    SimClock clock;
    clock.advance_to(7.0);
    clock.advance_to(5.0);
    CHECK(clock.now() == 7.0);
}

TEST_CASE("sequence numbers are unique and monotone") {
    SimClock clock;
    EventList list;
    for (int i = 0; i < 100; ++i)
        list.schedule(clock, 1.0 + (i % 7), EventKind::NextArrival, 0, 0, i);
    std::uint64_t seen = 0;
    double last_time = 0.0;
    std::uint64_t last_seq_at_time = 0;
    bool first = true;
    while (!list.empty()) {
        Event e = list.pop();
        CHECK(e.fire_time >= last_time);
        if (!first && e.fire_time == last_time) CHECK(e.seq > last_seq_at_time);
        last_time = e.fire_time;
        last_seq_at_time = e.seq;
        first = false;
        ++seen;
    }
    CHECK(seen == 100);
}

TEST_CASE("instruction labels round-trip through their names") {
    for (int i = 0; i < kInstructionLabelCount; ++i) {
        const auto label = static_cast<InstructionLabel>(i);
        CHECK(label_from_name(label_name(label)) == label);
    }
    CHECK_THROWS(label_from_name("no-such-label"));
}
