#include <cmath>

#include "doctest.h"
#include "fodgmm/dgp.hpp"
#include "fodgmm/errors.hpp"
#include "fodgmm/estimator.hpp"
#include "oracles.hpp"

using namespace fodgmm;

namespace {

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * (1.0 + std::abs(a)); }

PanelData seeded_panel(std::size_t periods, std::size_t units, std::uint64_t seed, double delta = 0.5) {
    DgpConfig c;
    c.delta = delta;
    c.periods = periods;
    c.units = units;
    c.seed = seed;
    return simulate(c);
}

}  // namespace

TEST_CASE("N = 1, T = 2 reduces to a ratio of differences") {
    const PanelData panel(1, 2, {0.3, 1.7, -0.4});
    const auto e = fd_estimate(panel);
    CHECK(e.delta_hat == doctest::Approx((-0.4 - 1.7) / (1.7 - 0.3)).epsilon(1e-14));
    CHECK(e.moments == 1);
    CHECK(e.method == Method::FD);
}

TEST_CASE("N = 3, T = 2 FOD by hand") {
    const PanelData panel(3, 2, {0.5, 1.0, -2.0, 1.5, -0.7, 0.2, -1.1, 0.4, 2.5});
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double dev = (panel(i, 1) - panel(i, 2)) / std::sqrt(2.0);
        const double dev_lag = (panel(i, 0) - panel(i, 1)) / std::sqrt(2.0);
        num += panel(i, 0) * dev;
        den += panel(i, 0) * dev_lag;
    }
    const auto e = fod_estimate(panel);
    CHECK(e.delta_hat == doctest::Approx(num / den).epsilon(1e-13));
    CHECK(e.method == Method::FOD);
    CHECK(fd_estimate(panel).delta_hat == doctest::Approx(num / den).epsilon(1e-12));
}

TEST_CASE("seeded stochastic panel: FD equals FOD and an independent solver") {
    const auto panel = seeded_panel(5, 100, 42);
    const auto fd = fd_estimate(panel);
    const auto fod = fod_estimate(panel);
    CHECK(close(fd.delta_hat, fod.delta_hat, 1e-8));
    CHECK(close(fd.delta_hat, oracle::fd_gmm(panel), 1e-10));
    CHECK(fd.diagnostics.numerator / fd.diagnostics.denominator == fd.delta_hat);
    CHECK(fod.diagnostics.numerator / fod.diagnostics.denominator == fod.delta_hat);
    CHECK(fd.diagnostics.min_pivot_ratio > 0.0);
    CHECK(fod.diagnostics.min_pivot_ratio > 0.0);
}

TEST_CASE("equivalence over random panels") {
    for (std::uint32_t seed = 0; seed < 40; ++seed) {
        const std::size_t periods = 2 + seed % 9;
        const std::size_t units = periods + 5 + seed % 13;
        const auto panel = seeded_panel(periods, units, seed, -0.8 + 0.04 * seed);
        const double fd = fd_estimate(panel).delta_hat;
        const double fod = fod_estimate(panel).delta_hat;
        CHECK_MESSAGE(close(fd, fod, 1e-8), "T=" << periods << " N=" << units);
        const auto raw = oracle::random_panel(units, periods, seed);
        CHECK(close(fd_estimate(raw).delta_hat, fod_estimate(raw).delta_hat, 1e-8));
    }
}

TEST_CASE("noise-free panels") {
    // Instruments are collinear (z_it = y_i0 * (1, delta, ...)), so the weight
    // matrices are singular for T >= 3 and the LU path refuses them.
    const auto panel = oracle::noiseless_panel(20, 5, 0.5, 3);
    CHECK_THROWS_AS(fd_estimate(panel), SingularMatrixError);
    CHECK_THROWS_AS(fod_estimate(panel), SingularMatrixError);

    const EstimateOptions pinv{InverseKind::Generalized, 1e-10};
    CHECK(std::abs(fd_estimate(panel, pinv).delta_hat - 0.5) <= 1e-10);
    CHECK(std::abs(fod_estimate(panel, pinv).delta_hat - 0.5) <= 1e-10);

    // With T = 2 there is a single moment and LU is enough.
    const auto short_panel = oracle::noiseless_panel(20, 2, 0.5, 3);
    CHECK(std::abs(fd_estimate(short_panel).delta_hat - 0.5) <= 1e-10);
    CHECK(std::abs(fod_estimate(short_panel).delta_hat - 0.5) <= 1e-10);
}

TEST_CASE("estimate dispatches and times") {
    const auto panel = seeded_panel(4, 30, 1);
    const auto fd = estimate(panel, Method::FD);
    const auto fod = estimate(panel, Method::FOD);
    CHECK(fd.method == Method::FD);
    CHECK(fod.method == Method::FOD);
    CHECK(fd.moments == 6);
    CHECK(fd.diagnostics.seconds > 0.0);
    CHECK(close(fd.delta_hat, fod.delta_hat, 1e-8));
}

TEST_CASE("N < T-1 makes S_t singular for t = N+1") {
    const auto panel = oracle::random_panel(2, 5, 17);
    try {
        (void)estimate(panel, Method::FOD);
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.label() == "S_t");
        CHECK(e.index() == 3);
        CHECK(std::string(e.what()).find("t = 3") != std::string::npos);
    }
    try {
        (void)estimate(panel, Method::FD);
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.label() == "A_N");
        CHECK(e.index() == 10);
        CHECK(std::string(e.what()).find("m = 10") != std::string::npos);
    }
}

TEST_CASE("degenerate denominator") {
    const PanelData flat(1, 2, {1.0, 1.0, 1.0});
    CHECK_THROWS_AS(fd_estimate(flat), DegenerateEstimateError);
    CHECK_THROWS_AS(fod_estimate(flat), DegenerateEstimateError);
}

TEST_CASE("scale equivariance and determinism") {
    const auto panel = seeded_panel(6, 40, 99);
    const double base_fd = fd_estimate(panel).delta_hat;
    const double base_fod = fod_estimate(panel).delta_hat;
    for (double lambda : {-3.0, 1e-3, 7.5, 1e4}) {
        std::vector<double> scaled = panel.values();
        for (auto& v : scaled) v *= lambda;
        const PanelData sp(panel.units(), panel.periods(), std::move(scaled));
        CHECK(close(fd_estimate(sp).delta_hat, base_fd, 1e-10));
        CHECK(close(fod_estimate(sp).delta_hat, base_fod, 1e-10));
    }
    CHECK(fd_estimate(panel).delta_hat == base_fd);
    CHECK(fod_estimate(panel).delta_hat == base_fod);
}

TEST_CASE("moment structures") {
    const auto panel = seeded_panel(5, 25, 8);
    MomentVectorsFD fd;
    (void)fd_estimate(panel, {}, &fd);
    CHECK(fd.s.size() == 10);
    CHECK(fd.s_lag.size() == 10);
    CHECK(fd.a.size() == 10);
    REQUIRE(fd.weight.rows() == 10);
    double scale = 0.0;
    for (double v : fd.weight.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t r = 0; r < 10; ++r) {
        for (std::size_t c = 0; c < 10; ++c) {
            CHECK(std::abs(fd.weight(r, c) - fd.weight(c, r)) <= 1e-10 * scale);
        }
    }

    MomentVectorsFOD fod;
    (void)fod_estimate(panel, {}, &fod);
    REQUIRE(fod.weight.size() == 4);
    for (std::size_t t = 1; t <= 4; ++t) {
        const auto& s = fod.weight[t - 1];
        CHECK(s.rows() == t);
        CHECK(fod.s[t - 1].size() == t);
        Eigen::MatrixXd e(t, t);
        for (std::size_t r = 0; r < t; ++r) {
            for (std::size_t c = 0; c < t; ++c) e(r, c) = s(r, c);
        }
        CHECK((e - e.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(e).eigenvalues().minCoeff() > 0.0);
    }
}
