#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gamband/rng.hpp"

using gamband::CounterRng;

TEST_CASE("identical (seed, step) pairs produce identical draws") {
    CounterRng a(42, 7);
    CounterRng b(42, 7);
    for (std::uint64_t step : {0ULL, 1ULL, 63ULL, 1000000ULL}) {
        REQUIRE(a.uniform01(step) == b.uniform01(step));
        REQUIRE(a.gaussian(step) == b.gaussian(step));
    }
}

TEST_CASE("draws do not depend on evaluation order") {
    CounterRng rng(9, 1);
    std::vector<std::uint64_t> steps(256);
    for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = i;
    std::vector<double> in_order;
    for (auto s : steps) in_order.push_back(rng.gaussian(s));

    std::mt19937 shuffler(123);
    std::shuffle(steps.begin(), steps.end(), shuffler);
    for (auto s : steps) REQUIRE(rng.gaussian(s) == in_order[s]);
}

TEST_CASE("seeds and streams separate") {
    CounterRng a(1, 0), b(2, 0), c(1, 1);
    int diff_seed = 0, diff_stream = 0;
    for (std::uint64_t s = 0; s < 64; ++s) {
        if (a.uniform01(s) != b.uniform01(s)) ++diff_seed;
        if (a.uniform01(s) != c.uniform01(s)) ++diff_stream;
    }
    REQUIRE(diff_seed == 64);
    REQUIRE(diff_stream == 64);
}

TEST_CASE("uniform draws stay in range") {
    CounterRng rng(5, 5);
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const double u = rng.uniform01(s);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double v = rng.uniform(s, -2.0, 3.0);
        REQUIRE(v >= -2.0);
        REQUIRE(v < 3.0);
    }
}

TEST_CASE("gaussian sample statistics over 1e6 draws") {
    CounterRng rng(2024, 0);
    const std::size_t n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const double g = rng.gaussian(s);
        sum += g;
        sum2 += g * g;
    }
    const double mean = sum / n;
    const double stddev = std::sqrt(sum2 / n - mean * mean);
    REQUIRE(std::abs(mean) <= 4e-3);
    REQUIRE(std::abs(stddev - 1.0) <= 0.01);
}
