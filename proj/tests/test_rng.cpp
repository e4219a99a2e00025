#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "gqlc/rng.hpp"

using gqlc::Rng;

TEST_CASE("equal seeds give equal sequences") {
    Rng a(12345), b(12345);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams differ from each other and the parent") {
    Rng parent(7);
    Rng s0(Rng::substream(7, 0)), s1(Rng::substream(7, 1));
    int equal01 = 0, equal0p = 0;
    for (int i = 0; i < 64; ++i) {
        const auto x0 = s0.next_u64(), x1 = s1.next_u64(), xp = parent.next_u64();
        equal01 += (x0 == x1);
        equal0p += (x0 == xp);
    }
    CHECK(equal01 == 0);
    CHECK(equal0p == 0);
}

TEST_CASE("unit draws live in [0,1) with mean near 1/2") {
    Rng rng(99);
    const int draws = 200000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double u = rng.next_unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    const double mean = sum / draws;
    const double sigma = std::sqrt(1.0 / 12.0 / draws);
    CHECK(std::fabs(mean - 0.5) < 4.0 * sigma);
}

TEST_CASE("next_below stays in range and covers it") {
    Rng rng(3);
    std::vector<int> seen(13, 0);
    for (int i = 0; i < 20000; ++i) {
        const auto x = rng.next_below(13);
        REQUIRE(x < 13);
        ++seen[std::size_t(x)];
    }
    for (int c : seen) CHECK(c > 0);
}

TEST_CASE("normal draws have standard moments") {
    Rng rng(17);
    const int draws = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double g = rng.next_normal();
        sum += g;
        sumsq += g * g;
    }
    const double mean = sum / draws;
    const double var = sumsq / draws - mean * mean;
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(double(draws)));
    CHECK(std::fabs(var - 1.0) < 0.02);
}
