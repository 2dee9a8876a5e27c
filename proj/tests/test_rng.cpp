#include "tracereg/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace tracereg;

TEST_CASE("CounterRng is a pure function of seed, stream and position") {
    CounterRng a(42), b(42);
    for (int i = 0; i < 100; ++i)
        CHECK(a.next_u64() == b.next_u64());
    CHECK(a.position() == 100);
    CounterRng c(43);
    CounterRng d(42);
    CHECK(c.next_u64() != d.next_u64());
    CounterRng s0(42, 0), s1(42, 1);
    CHECK(s0.next_u64() != s1.next_u64());
}

TEST_CASE("uniform draws stay in [0, 1) with the right mean") {
    CounterRng g(7, 3);
    double sum = 0.0, lo = 1.0, hi = 0.0;
    const int count = 1'000'000;
    for (int i = 0; i < count; ++i) {
        const double u = g.uniform();
        sum += u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(sum / count - 0.5) <= 0.01);
}

TEST_CASE("split streams do not repeat their parent") {
    CounterRng parent(11);
    CounterRng child = parent.split(5);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        seen.insert(parent.next_u64());
        seen.insert(child.next_u64());
    }
    CHECK(seen.size() == 2000);
}
