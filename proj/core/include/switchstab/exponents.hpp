#pragma once

#include <functional>
#include <vector>

#include "switchstab/flow.hpp"

namespace swst {

/// Orthonormal moving frame plus per-coordinate accumulated log growth.
struct FrameState {
    Mat q;            ///< orthonormal frame, column k is the k-th frame vector
    Vec logs;         ///< accumulated per-coordinate logs (integrals of Omega_k)
    double time = 0.0;

    static FrameState identity(int n);
    static FrameState random_orthonormal(int n, std::uint64_t seed);
};

/// Per switching interval: the log of each R diagonal entry, i.e. the exact
/// integral of the k-th diagonal growth rate over the interval.
struct IntervalLog {
    Vec logs;
    double length = 0.0;
};

/// One QR re-orthonormalization step: frame <- Ort(M * frame), per-coordinate
/// logs advance by log diag(R).
std::pair<FrameState, IntervalLog> frame_step(const FrameState& state,
                                              const Mat& interval_propagator,
                                              double interval_length);

struct QrExponents {
    double chi_plus = 0.0;            ///< max_k (accumulated log_k) / T
    std::vector<double> chi_k;        ///< per-coordinate averages
    std::vector<IntervalLog> series;  ///< retained for Liao windows
    double bound_c = 0.0;             ///< max per-interval |log|/length observed
};

/// Lyapunov exponents via per-interval QR over [0, T].
QrExponents lyapunov_qr(const Propagator& prop, double T,
                        const FrameState* initial_frame = nullptr);

/// Same moving-frame method for a time-varying (non-switched) coefficient
/// matrix C(t), substepped with frozen coefficients at step dt.
QrExponents lyapunov_qr_time_varying(const std::function<Mat(double)>& c,
                                     int n, double T, double dt = 1e-3);

/// A piecewise-constant upper-triangular coefficient segment.
struct TriangularPiece {
    double length = 0.0;
    CMat coeff;
};

/// theta_i = (1/T) integral Re c^{ii}(t) dt, exact for piecewise-constant
/// input. Throws NotTriangular when sub-diagonal mass exceeds tolerance.
std::vector<double> theta_upper_triangular(const std::vector<TriangularPiece>& pieces,
                                           double tol = 1e-10);

/// Numeric variant for continuous C(t) (Simpson rule on each substep).
std::vector<double> theta_upper_triangular(const std::function<CMat(double)>& c,
                                           int n, double T, double dt = 1e-2);

/// Windowed Liao-type exponent: windows of 2^ell switching intervals,
/// per-window coordinate max, averaged over m windows of the T_k schedule
/// T_0 = 0, T_k = k - tau.
double liao_type_exponent(const std::vector<IntervalLog>& series, double tau,
                          int ell, int m);

/// Per-coordinate Birkhoff time averages (accumulated log_k / T).
std::vector<double> birkhoff_coordinate_averages(const std::vector<IntervalLog>& series);

struct ExponentReport {
    double chi_plus = 0.0;
    double chi_plus_suffix_max = 0.0;  ///< running max of window-suffix averages
    std::vector<double> theta;            ///< per-coordinate averages
    std::vector<std::pair<int, double>> chi_star;  ///< (ell, Liao-type estimate)
    double horizon = 0.0;
    double bound_c = 0.0;
    int windows_m = 0;
};

/// Full report: QR exponents plus Liao-type exponents for each ell.
ExponentReport exponent_report(const Propagator& prop, double T,
                               const std::vector<int>& ells);

}  // namespace swst
