#pragma once

// One-step GMM for the AR(1) panel model y_it = delta*y_{i,t-1} + eta_i + v_it,
// computed two ways: through first differences with the stacked weight matrix
// A_N, and through forward orthogonal deviations with the per-period matrices
// S_t. With instruments z_it = (y_i0, ..., y_{i,t-1}) both give the same
// estimate; they differ only in the amount of work.
//
// Both pipelines follow the textbook recipe literally: dense transforms,
// dense block-diagonal Z_i, explicit LU inverses. That is what the flop model
// in flop_model.hpp counts, and what the benchmark times.

#include <cstddef>
#include <vector>

#include "fodgmm/counted.hpp"
#include "fodgmm/dense.hpp"
#include "fodgmm/panel.hpp"
#include "fodgmm/transform.hpp"

namespace fodgmm {

enum class InverseKind {
    /// Explicit inverse via LU with partial pivoting; raises on a small pivot.
    Lu,
    /// Moore-Penrose inverse from a symmetric eigendecomposition. Accepts
    /// rank-deficient weight matrices (e.g. noise-free panels); never used by
    /// the benchmark.
    Generalized,
};

struct EstimateOptions {
    InverseKind inverse = InverseKind::Lu;
    /// A pivot below threshold * max|entry| is treated as singular. In
    /// Generalized mode, eigenvalues below threshold * max|eigenvalue| are dropped.
    double singular_threshold = 1e-12;
};

struct Diagnostics {
    /// Smallest pivot (or eigenvalue) ratio over every inverted matrix; a
    /// reciprocal condition proxy.
    double min_pivot_ratio = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    /// Wall-clock seconds of the pipeline; set by estimate().
    double seconds = 0.0;
};

struct Estimate {
    double delta_hat = 0.0;
    Method method = Method::FD;
    std::size_t moments = 0;
    Diagnostics diagnostics;
};

/// Moment quantities of the FD pipeline.
struct MomentVectorsFD {
    std::vector<double> s;      // sum_i Z_i' D y_i
    std::vector<double> s_lag;  // sum_i Z_i' D y_{i,-1}
    Matrix<double> weight;      // A_N = sum_i Z_i' D D' Z_i
    std::vector<double> a;      // s_lag' A_N^{-1}
};

/// Moment quantities of the FOD pipeline; entry t-1 holds period t.
struct MomentVectorsFOD {
    std::vector<std::vector<double>> s;      // sum_i z_it * (F y_i)_t
    std::vector<std::vector<double>> s_lag;  // sum_i z_it * (F y_{i,-1})_t
    std::vector<Matrix<double>> weight;      // S_t = sum_i z_it z_it'
    std::vector<std::vector<double>> a;      // s_lag_t' S_t^{-1}
};

/// One-step FD GMM. Throws SingularMatrixError (label "A_N", index m) when
/// A_N fails the pivot test and DegenerateEstimateError when
/// |a . s_lag| < 1e-300.
Estimate fd_estimate(const PanelData& panel, const EstimateOptions& options = {},
                     MomentVectorsFD* moments = nullptr);

/// One-step FOD GMM. Throws SingularMatrixError (label "S_t", index t) for
/// the first singular S_t; this always happens for some t > N.
Estimate fod_estimate(const PanelData& panel, const EstimateOptions& options = {},
                      MomentVectorsFOD* moments = nullptr);

/// Dispatches to the chosen pipeline and records its wall-clock time.
Estimate estimate(const PanelData& panel, Method method, const EstimateOptions& options = {});

/// Runs a pipeline on instrumented arithmetic and returns the flops spent in
/// each stage. Stage names match the flop model, plus "ratio" (the final
/// division) and, for FOD, "denominator" (the a_t . s_lag_t terms), which the
/// closed forms leave out. LU inversion only.
OpTally count_ops(const PanelData& panel, Method method);

}  // namespace fodgmm
