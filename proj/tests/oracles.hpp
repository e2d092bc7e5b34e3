#pragma once

// Test-only reference computations that share no code with the library's
// pipelines: Eigen linear algebra, explicit differencing loops and brute-force
// sums.

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "fodgmm/panel.hpp"

namespace oracle {

/// One-step FD GMM from scratch: differences by subtraction, instruments
/// placed by index arithmetic, weight solved by full-pivot LU (no inverse).
inline double fd_gmm(const fodgmm::PanelData& panel) {
    const auto n = static_cast<int>(panel.units());
    const auto periods = static_cast<int>(panel.periods());
    const int m = periods * (periods - 1) / 2;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(periods - 1, periods - 1);
    for (int r = 0; r < periods - 1; ++r) {
        g(r, r) = 2.0;
        if (r + 1 < periods - 1) g(r, r + 1) = g(r + 1, r) = -1.0;
    }
    Eigen::VectorXd s = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd s_lag = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd z = Eigen::MatrixXd::Zero(periods - 1, m);
        Eigen::VectorXd dy(periods - 1);
        Eigen::VectorXd dy_lag(periods - 1);
        for (int t = 1; t < periods; ++t) {
            for (int k = 0; k < t; ++k) z(t - 1, t * (t - 1) / 2 + k) = panel(i, k);
            dy(t - 1) = panel(i, t + 1) - panel(i, t);
            dy_lag(t - 1) = panel(i, t) - panel(i, t - 1);
        }
        s += z.transpose() * dy;
        s_lag += z.transpose() * dy_lag;
        a += z.transpose() * g * z;
    }
    const Eigen::VectorXd w = a.fullPivLu().solve(s_lag);
    return w.dot(s) / w.dot(s_lag);
}

/// Forward orthogonal deviation of (x_1..x_T) at 1-based t, from its
/// definition: c_t (x_t - mean(x_{t+1..T})).
inline double forward_deviation(const std::vector<double>& x, std::size_t t) {
    const std::size_t periods = x.size();
    double mean = 0.0;
    for (std::size_t k = t; k < periods; ++k) mean += x[k];
    mean /= static_cast<double>(periods - t);
    const double c = std::sqrt(static_cast<double>(periods - t) / static_cast<double>(periods - t + 1));
    return c * (x[t - 1] - mean);
}

inline std::uint64_t sum_powers(std::uint64_t upto, int power) {
    std::uint64_t total = 0;
    for (std::uint64_t t = 1; t <= upto; ++t) {
        std::uint64_t term = 1;
        for (int p = 0; p < power; ++p) term *= t;
        total += term;
    }
    return total;
}

/// Panel with i.i.d. standard normal entries.
inline fodgmm::PanelData random_panel(std::size_t n, std::size_t periods, std::uint32_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    std::vector<double> v(n * (periods + 1));
    for (auto& x : v) x = normal(gen);
    return fodgmm::PanelData(n, periods, std::move(v));
}

/// y_it = delta * y_{i,t-1} with random y_i0 and no shocks or effects.
inline fodgmm::PanelData noiseless_panel(std::size_t n, std::size_t periods, double delta,
                                         std::uint32_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    std::vector<double> v(n * (periods + 1));
    for (std::size_t i = 0; i < n; ++i) {
        double y = normal(gen);
        for (std::size_t t = 0; t <= periods; ++t) {
            v[i * (periods + 1) + t] = y;
            y *= delta;
        }
    }
    return fodgmm::PanelData(n, periods, std::move(v));
}

}  // namespace oracle
