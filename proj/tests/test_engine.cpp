#include <doctest.h>

#include <algorithm>
#include <vector>

#include "satsim/engine.hpp"

using namespace satsim;

TEST_CASE("empty queue run_until advances clock with zero dispatches") {
    Engine eng;
    CHECK(eng.now() == 0);
    CHECK(eng.run_until(1000) == 0);
    CHECK(eng.now() == 1000);
}

TEST_CASE("events dispatch in timestamp order") {
    Engine eng;
    std::vector<int> order;
    eng.schedule(30, [&] { order.push_back(3); });
    eng.schedule(10, [&] { order.push_back(1); });
    eng.schedule(20, [&] { order.push_back(2); });
    CHECK(eng.run_until(100) == 3);
    CHECK(order == std::vector<int>{1, 2, 3});
}

TEST_CASE("equal timestamps dispatch in scheduling order") {
    Engine eng;
    std::vector<char> order;
    eng.schedule(50, [&] { order.push_back('A'); });
    eng.schedule(50, [&] { order.push_back('B'); });
    eng.schedule(50, [&] { order.push_back('C'); });
    eng.run_until(50);
    CHECK(order == std::vector<char>{'A', 'B', 'C'});
}

TEST_CASE("event scheduled at now() from a handler runs before later events") {
    Engine eng;
    std::vector<int> order;
    eng.schedule(10, [&] {
        order.push_back(1);
        eng.schedule(eng.now(), [&] { order.push_back(2); });
    });
    eng.schedule(11, [&] { order.push_back(3); });
    eng.run_until(100);
    CHECK(order == std::vector<int>{1, 2, 3});
}

TEST_CASE("scheduling in the past is fatal") {
    Engine eng;
    eng.run_until(100);
    CHECK_THROWS_AS(eng.schedule(99, [] {}), SchedulingError);
    CHECK_NOTHROW(eng.schedule(100, [] {}));
}

TEST_CASE("event beyond t_end stays queued") {
    Engine eng;
    int fired = 0;
    eng.schedule(101, [&] { ++fired; });
    CHECK(eng.run_until(100) == 0);
    CHECK(fired == 0);
    CHECK(eng.pending() == 1);
    eng.run_until(101);
    CHECK(fired == 1);
}

TEST_CASE("now() inside a handler equals the event timestamp") {
    Engine eng;
    SimTicks seen = 0;
    eng.schedule(42, [&] { seen = eng.now(); });
    eng.run_until(1000);
    CHECK(seen == 42);
    CHECK(eng.now() == 1000);
}

TEST_CASE("property: random schedules dispatch as a (fire_at, seqno) total order") {
    // deterministic LCG; no platform-dependent distributions
    std::uint64_t state = 12345;
    auto next = [&] {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state >> 33;
    };

    for (int trial = 0; trial < 20; ++trial) {
        Engine eng;
        std::vector<std::pair<SimTicks, int>> expected;  // (fire_at, insertion idx)
        std::vector<int> got;
        for (int i = 0; i < 200; ++i) {
            SimTicks t = next() % 50;  // many collisions
            expected.emplace_back(t, i);
            eng.schedule(t, [&got, i] { got.push_back(i); });
        }
        std::stable_sort(expected.begin(), expected.end(),
                         [](auto& a, auto& b) { return a.first < b.first; });
        eng.run_until(1000);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expected[i].second);
    }
}
