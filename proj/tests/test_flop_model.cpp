#include <cmath>

#include "doctest.h"
#include "fodgmm/errors.hpp"
#include "fodgmm/estimator.hpp"
#include "fodgmm/flop_model.hpp"
#include "oracles.hpp"

using namespace fodgmm;

namespace {

std::uint64_t as_u64(const FlopCount& x) { return x.convert_to<std::uint64_t>(); }

}  // namespace

TEST_CASE("FD closed forms, hand-evaluated") {
    const auto r = fd_flops(2, 1);
    CHECK(as_u64(r.stage(stage::fd_transform)) == 3);
    CHECK(as_u64(r.stage(stage::fd_g)) == 3);
    CHECK(as_u64(r.stage(stage::fd_invert)) == 1);
    CHECK(as_u64(r.stage(stage::fd_s)) == 1);
    CHECK(as_u64(r.stage(stage::fd_s_lag)) == 4);
    CHECK(as_u64(r.stage(stage::fd_sum)) == 0);
    CHECK(r.stages.size() == 10);

    CHECK(as_u64(fd_flops(5, 100).stage(stage::fd_gz)) == 28000);
    CHECK_THROWS_AS(fd_flops(5, 100).stage("nope"), std::out_of_range);
}

TEST_CASE("FOD closed forms, hand-evaluated") {
    const auto r = fod_flops(3, 2);
    CHECK(as_u64(r.stage(stage::fod_s)) == 29);
    CHECK(as_u64(r.stage(stage::fod_s_lag)) == 29);
    CHECK(as_u64(r.stage(stage::fod_weight)) == 15);
    CHECK(as_u64(r.stage(stage::fod_invert)) == 9);
    CHECK(r.stages.size() == 7);

    const auto small = fod_flops(2, 1);
    CHECK(as_u64(small.stage(stage::fod_dots)) == 1);
    CHECK(as_u64(small.stage(stage::fod_sum)) == 0);

    CHECK(as_u64(fod_flops(50, 100).stage(stage::fod_invert)) == 1500625);
}

TEST_CASE("closed forms agree with brute-force sums") {
    for (std::uint64_t t = 2; t <= 40; ++t) {
        for (std::uint64_t n : {1u, 7u, 100u}) {
            const auto fod = fod_flops(t, n);
            const std::uint64_t transform = n * (t - 1) * (2 * t - 1);
            std::uint64_t f5 = 0, f6 = 0;
            for (std::uint64_t k = 1; k < t; ++k) {
                f5 += k * (2 * k - 1);
                f6 += 2 * k - 1;
            }
            CHECK(as_u64(fod.stage(stage::fod_s)) == transform + (2 * n - 1) * oracle::sum_powers(t - 1, 1));
            CHECK(as_u64(fod.stage(stage::fod_weight)) == (2 * n - 1) * oracle::sum_powers(t - 1, 2));
            CHECK(as_u64(fod.stage(stage::fod_invert)) == oracle::sum_powers(t - 1, 3));
            CHECK(as_u64(fod.stage(stage::fod_a)) == f5);
            CHECK(as_u64(fod.stage(stage::fod_dots)) == f6);

            const auto fd = fd_flops(t, n);
            const std::uint64_t m = oracle::sum_powers(t - 1, 1);
            CHECK(as_u64(fd.stage(stage::fd_invert)) == m * m * m);
            FlopCount sum = 0;
            for (const auto& s : fd.stages) sum += s.flops;
            CHECK(sum == fd.total);
        }
    }
}

TEST_CASE("instrumented pipelines match every exact stage") {
    for (std::size_t periods = 2; periods <= 5; ++periods) {
        for (std::size_t units = 1; units <= 3; ++units) {
            const auto panel = oracle::random_panel(units, periods, 100 + periods * 10 + units);
            for (Method method : {Method::FD, Method::FOD}) {
                const auto counted = count_ops(panel, method);
                const auto model = flop_report(method, periods, units);
                for (const auto& s : model.stages) {
                    if (FlopReport::is_inversion(s.name)) continue;
                    CHECK_MESSAGE(counted.count(s.name) == as_u64(s.flops),
                                  to_string(method) << " T=" << periods << " N=" << units
                                                    << " stage " << s.name);
                }
                CHECK(counted.count("unstaged") == 0);
                CHECK(counted.count(stage::ratio) == 1);
            }
        }
    }
}

TEST_CASE("counted and plain pipelines compute the same estimate") {
    const auto panel = oracle::random_panel(12, 4, 3);
    OpTally tally;
    {
        TallyScope scope(tally);
        CountedReal a = 2.0, b = 3.0;
        a = a * b + a / b - b;
        CHECK(a.value() == doctest::Approx(6.0 + 2.0 / 3.0 - 3.0));
    }
    CHECK(tally.total() == 4);
    CHECK(count_ops(panel, Method::FD).total() > count_ops(panel, Method::FOD).total());
}

TEST_CASE("dominant FD term") {
    // Stage 6 ~ N T^5 / 2 leads while T is small against N; the m^3
    // inversion ~ T^6 / 8 takes over as T grows.
    const auto moderate = fd_flops(50, 100);
    CHECK(moderate.stage(stage::fd_zgz) > moderate.stage(stage::fd_invert));
    const auto large = fd_flops(10000, 100);
    CHECK(large.stage(stage::fd_invert) > large.stage(stage::fd_zgz));
}

TEST_CASE("growth exponents approach their asymptotic rates") {
    const double fd_t = growth_exponent(Method::FD, 100000, 100, GrowthAxis::T);
    const double fod_t = growth_exponent(Method::FOD, 100000, 100, GrowthAxis::T);
    CHECK(fd_t >= 5.95);
    CHECK(fd_t <= 6.0);
    CHECK(std::abs(fod_t - 4.0) <= 0.05);
    for (Method m : {Method::FD, Method::FOD}) {
        CHECK(std::abs(growth_exponent(m, 5, 1000000, GrowthAxis::N) - 1.0) <= 0.01);
    }
}

TEST_CASE("flop ratio") {
    const auto fd = fd_flops(2, 1);
    const auto fod = fod_flops(2, 1);
    // FD: 3 + 1 + 4 + 3 + 1 + 1 + 0 + 1 + 1 + 2 = 17; FOD: 4 + 4 + 1 + 1 + 1 + 1 + 0 = 12.
    CHECK(as_u64(fd.total) == 17);
    CHECK(as_u64(fod.total) == 12);
    CHECK(flop_ratio(2, 1) == doctest::Approx(17.0 / 12.0));

    for (std::uint64_t n : {100u, 300u, 500u}) {
        double previous = 0.0;
        for (std::uint64_t t = 5; t <= 50; ++t) {
            const double r = flop_ratio(t, n);
            CHECK(r > previous);
            previous = r;
        }
    }
    CHECK(flop_ratio(1000, 100) > 1000 * flop_ratio(5, 100));
}

TEST_CASE("no overflow at the largest sizes") {
    const auto r = fd_flops(1000000, 1000000);
    CHECK(r.total > FlopCount(std::numeric_limits<std::uint64_t>::max()));
    CHECK(r.stage(stage::fd_invert) == FlopCount(499999500000ULL) * 499999500000ULL * 499999500000ULL);
}

TEST_CASE("report JSON round-trips") {
    const auto r = fd_flops(1000000, 3);
    const auto j = to_json(r);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("method") == "fd");
    const auto back = flop_report_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.total == r.total);
    REQUIRE(back.stages.size() == r.stages.size());
    for (std::size_t k = 0; k < r.stages.size(); ++k) {
        CHECK(back.stages[k].name == r.stages[k].name);
        CHECK(back.stages[k].flops == r.stages[k].flops);
    }
}

TEST_CASE("invalid dimensions") {
    CHECK_THROWS_AS(fd_flops(1, 5), DimensionError);
    CHECK_THROWS_AS(fod_flops(5, 0), DimensionError);
}
