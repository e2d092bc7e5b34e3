#include "fodgmm/estimator.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "fodgmm/errors.hpp"
#include "fodgmm/flop_model.hpp"
#include "fodgmm/instruments.hpp"

namespace fodgmm {

namespace {

constexpr double kDegenerateDenominator = 1e-300;

template <class Real>
std::vector<Real> to_real(std::span<const double> v) {
    return std::vector<Real>(v.begin(), v.end());
}

template <class Real>
std::vector<double> to_doubles(std::span<const Real> v) {
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = to_double(v[k]);
    return out;
}

// Moore-Penrose inverse of a symmetric matrix.
std::optional<Inverse<double>> invert_generalized(const Matrix<double>& a, double threshold) {
    const auto n = static_cast<Eigen::Index>(a.rows());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
        a.data().data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(view);
    if (eig.info() != Eigen::Success) return std::nullopt;
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double top = values.cwiseAbs().maxCoeff();
    if (!(top > 0.0)) return std::nullopt;
    Eigen::VectorXd inv_values = Eigen::VectorXd::Zero(n);
    double smallest_kept = top;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (std::abs(values[k]) > threshold * top) {
            inv_values[k] = 1.0 / values[k];
            smallest_kept = std::min(smallest_kept, std::abs(values[k]));
        }
    }
    const Eigen::MatrixXd pinv =
        eig.eigenvectors() * inv_values.asDiagonal() * eig.eigenvectors().transpose();
    Matrix<double> out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            out(r, c) = pinv(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    return Inverse<double>{std::move(out), smallest_kept / top};
}

// Operation counting must walk every stage even when the data make a weight
// matrix singular; the work after an inversion does not depend on its value.
struct RunMode {
    bool count_only = false;
};

template <class Real>
Inverse<Real> invert_or_throw(const Matrix<Real>& a, const EstimateOptions& options,
                              const char* label, std::size_t index, RunMode mode) {
    std::optional<Inverse<Real>> inv;
    if (options.inverse == InverseKind::Generalized) {
        if constexpr (std::is_same_v<Real, double>) {
            inv = invert_generalized(a, options.singular_threshold);
        } else {
            throw std::logic_error("instrumented pipelines support LU inversion only");
        }
    } else {
        inv = invert_lu(a, options.singular_threshold);
    }
    if (!inv && mode.count_only) return Inverse<Real>{Matrix<Real>::identity(a.rows()), 0.0};
    if (!inv) {
        const std::string what = std::string(label) == "A_N" ? "m = " : "t = ";
        throw SingularMatrixError(label, index,
                                  std::string("singular weight matrix ") + label + " (" + what +
                                      std::to_string(index) + ", " + std::to_string(a.rows()) +
                                      "x" + std::to_string(a.cols()) + ")");
    }
    return std::move(*inv);
}

void check_denominator(double denominator, RunMode mode) {
    if (!mode.count_only && !(std::abs(denominator) >= kDegenerateDenominator)) {
        throw DegenerateEstimateError("degenerate estimate: denominator " +
                                      std::to_string(denominator));
    }
}

template <class Real>
Estimate run_fd(const PanelData& panel, const EstimateOptions& options, MomentVectorsFD* sink,
                RunMode mode = {}) {
    const std::size_t n = panel.units();
    const std::size_t periods = panel.periods();
    const InstrumentBlocks blocks(panel);
    const std::size_t m = blocks.moments();

    const auto d = build_fd(periods).entries().template cast<Real>();

    enter_stage<Real>(stage::fd_transform);
    std::vector<std::vector<Real>> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = multiply<Real>(d, to_real<Real>(panel.current(i)));
    enter_stage<Real>(stage::fd_s_lag);
    std::vector<std::vector<Real>> diff_lag(n);
    for (std::size_t i = 0; i < n; ++i) diff_lag[i] = multiply<Real>(d, to_real<Real>(panel.lagged(i)));

    enter_stage<Real>(stage::fd_g);
    const Matrix<Real> g = multiply_a_bt(d, d);

    std::vector<Real> s;
    std::vector<Real> s_lag;
    Matrix<Real> weight;
    for (std::size_t i = 0; i < n; ++i) {
        const Matrix<Real> z = blocks.block_diag<Real>(i);

        enter_stage<Real>(stage::fd_s);
        auto si = multiply_at<Real>(z, diff[i]);
        if (i == 0) s = std::move(si); else add_in_place<Real>(s, si);

        enter_stage<Real>(stage::fd_s_lag);
        auto sli = multiply_at<Real>(z, diff_lag[i]);
        if (i == 0) s_lag = std::move(sli); else add_in_place<Real>(s_lag, sli);

        enter_stage<Real>(stage::fd_gz);
        const Matrix<Real> gz = multiply(g, z);
        enter_stage<Real>(stage::fd_zgz);
        Matrix<Real> zgz = multiply_at_b(z, gz);
        enter_stage<Real>(stage::fd_sum);
        if (i == 0) weight = std::move(zgz); else add_in_place(weight, zgz);
    }

    enter_stage<Real>(stage::fd_invert);
    const auto inv = invert_or_throw(weight, options, "A_N", m, mode);

    enter_stage<Real>(stage::fd_a);
    const std::vector<Real> a = multiply_at<Real>(inv.value, s_lag);

    enter_stage<Real>(stage::fd_dots);
    const Real numerator = dot<Real>(a, s);
    const Real denominator = dot<Real>(a, s_lag);
    check_denominator(to_double(denominator), mode);

    enter_stage<Real>(stage::ratio);
    const Real delta = numerator / denominator;

    if (sink) {
        sink->s = to_doubles<Real>(s);
        sink->s_lag = to_doubles<Real>(s_lag);
        sink->weight = weight.template cast<double>();
        sink->a = to_doubles<Real>(a);
    }
    return Estimate{to_double(delta), Method::FD, m,
                    Diagnostics{inv.pivot_ratio, to_double(numerator), to_double(denominator), 0.0}};
}

template <class Real>
Estimate run_fod(const PanelData& panel, const EstimateOptions& options, MomentVectorsFOD* sink,
                 RunMode mode = {}) {
    const std::size_t n = panel.units();
    const std::size_t periods = panel.periods();
    const InstrumentBlocks blocks(panel);

    const auto f = build_fod(periods).entries().template cast<Real>();

    enter_stage<Real>(stage::fod_s);
    std::vector<std::vector<Real>> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = multiply<Real>(f, to_real<Real>(panel.current(i)));
    enter_stage<Real>(stage::fod_s_lag);
    std::vector<std::vector<Real>> dev_lag(n);
    for (std::size_t i = 0; i < n; ++i) dev_lag[i] = multiply<Real>(f, to_real<Real>(panel.lagged(i)));

    if (sink) *sink = MomentVectorsFOD{};
    Real numerator{};
    Real denominator{};
    double min_ratio = 1.0;
    std::vector<Real> dev_t(n);
    std::vector<Real> dev_lag_t(n);
    for (std::size_t t = 1; t < periods; ++t) {
        // (z_1t, ..., z_Nt) as a t x N matrix.
        Matrix<Real> zt(t, n);
        for (std::size_t i = 0; i < n; ++i) {
            auto zi = blocks.z(i, t);
            for (std::size_t k = 0; k < t; ++k) zt(k, i) = Real(zi[k]);
            dev_t[i] = dev[i][t - 1];
            dev_lag_t[i] = dev_lag[i][t - 1];
        }

        enter_stage<Real>(stage::fod_s);
        const std::vector<Real> s = multiply<Real>(zt, dev_t);
        enter_stage<Real>(stage::fod_s_lag);
        const std::vector<Real> s_lag = multiply<Real>(zt, dev_lag_t);
        enter_stage<Real>(stage::fod_weight);
        Matrix<Real> weight = multiply_a_bt(zt, zt);
        enter_stage<Real>(stage::fod_invert);
        const auto inv = invert_or_throw(weight, options, "S_t", t, mode);
        min_ratio = std::min(min_ratio, inv.pivot_ratio);
        enter_stage<Real>(stage::fod_a);
        std::vector<Real> a = multiply_at<Real>(inv.value, s_lag);
        enter_stage<Real>(stage::fod_dots);
        const Real num_t = dot<Real>(a, s);
        enter_stage<Real>(stage::fod_sum);
        if (t == 1) numerator = num_t; else numerator += num_t;
        enter_stage<Real>(stage::fod_denominator);
        const Real den_t = dot<Real>(a, s_lag);
        if (t == 1) denominator = den_t; else denominator += den_t;

        if (sink) {
            sink->s.push_back(to_doubles<Real>(s));
            sink->s_lag.push_back(to_doubles<Real>(s_lag));
            sink->weight.push_back(weight.template cast<double>());
            sink->a.push_back(to_doubles<Real>(a));
        }
    }
    check_denominator(to_double(denominator), mode);

    enter_stage<Real>(stage::ratio);
    const Real delta = numerator / denominator;
    return Estimate{to_double(delta), Method::FOD, moment_count(periods),
                    Diagnostics{min_ratio, to_double(numerator), to_double(denominator), 0.0}};
}

}  // namespace

Estimate fd_estimate(const PanelData& panel, const EstimateOptions& options,
                     MomentVectorsFD* moments) {
    return run_fd<double>(panel, options, moments);
}

Estimate fod_estimate(const PanelData& panel, const EstimateOptions& options,
                      MomentVectorsFOD* moments) {
    return run_fod<double>(panel, options, moments);
}

Estimate estimate(const PanelData& panel, Method method, const EstimateOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    Estimate e = method == Method::FD ? fd_estimate(panel, options) : fod_estimate(panel, options);
    e.diagnostics.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return e;
}

OpTally count_ops(const PanelData& panel, Method method) {
    OpTally tally;
    TallyScope scope(tally);
    if (method == Method::FD) {
        run_fd<CountedReal>(panel, {}, nullptr, RunMode{true});
    } else {
        run_fod<CountedReal>(panel, {}, nullptr, RunMode{true});
    }
    return tally;
}

}  // namespace fodgmm
