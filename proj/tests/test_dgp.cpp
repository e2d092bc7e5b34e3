#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fodgmm/dgp.hpp"
#include "fodgmm/errors.hpp"
#include "fodgmm/rng.hpp"

using namespace fodgmm;

TEST_CASE("zero forcing gives an all-zero panel") {
    DgpConfig c;
    c.eta_sd = 0.0;
    c.v_sd = 0.0;
    c.seed = 123;
    const auto p = simulate(c);
    for (double v : p.values()) CHECK(v == 0.0);
}

TEST_CASE("without shocks y_i0 sits at the unit mean eta_i / (1 - delta)") {
    DgpConfig c;
    c.v_sd = 0.0;
    c.units = 50;
    c.seed = 5;
    const auto p = simulate(c);
    for (std::size_t i = 0; i < c.units; ++i) {
        // eta_i is the first draw of unit i's stream.
        CounterStream stream(substream_key(c.seed, i));
        const double eta = stream.next_normal();
        // Direct iteration of y <- 0.5 y + eta from 0, fifty times.
        double y = 0.0;
        for (int k = 0; k < 50; ++k) y = 0.5 * y + eta;
        CHECK(p(i, 0) == doctest::Approx(y).epsilon(1e-15));
        CHECK(std::abs(p(i, 0) - 2.0 * eta) <= 1e-14 * std::max(1.0, std::abs(eta)));
        for (std::size_t t = 1; t <= c.periods; ++t) {
            CHECK(std::abs(p(i, t) - 2.0 * eta) <= 1e-14 * std::max(1.0, std::abs(eta)));
        }
    }
}

TEST_CASE("determinism and unit substreams") {
    DgpConfig c;
    c.units = 30;
    c.seed = 42;
    const auto a = simulate(c);
    const auto b = simulate(c);
    CHECK(a == b);

    DgpConfig bigger = c;
    bigger.units = 60;
    const auto big = simulate(bigger);
    for (std::size_t i = 0; i < c.units; ++i) {
        for (std::size_t t = 0; t <= c.periods; ++t) CHECK(big(i, t) == a(i, t));
    }

    DgpConfig other = c;
    other.seed = 43;
    CHECK(!(simulate(other) == a));
}

TEST_CASE("stationary variance of y_i0") {
    DgpConfig c;
    c.units = 100000;
    c.periods = 2;
    c.seed = 2024;
    const auto p = simulate(c);
    double mean = 0.0;
    for (std::size_t i = 0; i < c.units; ++i) mean += p(i, 0);
    mean /= static_cast<double>(c.units);
    double var = 0.0;
    for (std::size_t i = 0; i < c.units; ++i) var += (p(i, 0) - mean) * (p(i, 0) - mean);
    var /= static_cast<double>(c.units - 1);
    const double target = 1.0 / 0.25 + 1.0 / 0.75;  // 16/3
    const double se = target * std::sqrt(2.0 / static_cast<double>(c.units - 1));
    CHECK(std::abs(var - target) <= 3.0 * se);
}

TEST_CASE("normal draws") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
    CounterStream s(1);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double u = s.next_uniform();
        CHECK_MESSAGE((u > 0.0 && u < 1.0), u);
        const double z = normal_quantile(u);
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.015);
    CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("config validation") {
    DgpConfig c;
    c.periods = 1;
    CHECK_THROWS_AS(simulate(c), DimensionError);
    c = {};
    c.units = 0;
    CHECK_THROWS_AS(simulate(c), DimensionError);
    c = {};
    c.delta = 1.0;
    CHECK_THROWS_AS(simulate(c), std::invalid_argument);
    c.burn_in = 0;
    CHECK_NOTHROW(simulate(c));
    c = {};
    c.v_sd = -1.0;
    CHECK_THROWS_AS(simulate(c), std::invalid_argument);
}
