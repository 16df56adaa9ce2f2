#include "switchstab/exponents.hpp"

#include <algorithm>
#include <cmath>

namespace swst {

FrameState FrameState::identity(int n) {
    return FrameState{Mat::Identity(n, n), Vec::Zero(n), 0.0};
}

FrameState FrameState::random_orthonormal(int n, std::uint64_t seed) {
    Rng rng(seed);
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    return FrameState{qr(g).q, Vec::Zero(n), 0.0};
}

std::pair<FrameState, IntervalLog> frame_step(const FrameState& state,
                                              const Mat& interval_propagator,
                                              double interval_length) {
    QrPairReal fac = qr(Mat(interval_propagator * state.q));
    IntervalLog log;
    log.length = interval_length;
    log.logs = fac.r.diagonal().array().log();
    FrameState next;
    next.q = std::move(fac.q);
    next.logs = state.logs + log.logs;
    next.time = state.time + interval_length;
    return {std::move(next), std::move(log)};
}

namespace {

QrExponents finalize(FrameState state, std::vector<IntervalLog> series, double T) {
    QrExponents out;
    out.series = std::move(series);
    out.chi_k.resize(static_cast<size_t>(state.logs.size()));
    for (Eigen::Index i = 0; i < state.logs.size(); ++i)
        out.chi_k[static_cast<size_t>(i)] = state.logs(i) / T;
    out.chi_plus = *std::max_element(out.chi_k.begin(), out.chi_k.end());
    for (const auto& il : out.series)
        out.bound_c = std::max(out.bound_c,
                               il.logs.cwiseAbs().maxCoeff() / il.length);
    return out;
}

}  // namespace

QrExponents lyapunov_qr(const Propagator& prop, double T,
                        const FrameState* initial_frame) {
    if (T <= 0.0) throw ScenarioError("horizon must be positive");
    FrameState state =
        initial_frame ? *initial_frame : FrameState::identity(prop.dim());
    std::vector<IntervalLog> series;
    int k = 1;
    double t = 0.0;
    while (t < T - 1e-12) {
        const double t_end = std::min(prop.boundary(k), T);
        const double len = t_end - t;
        if (len > 1e-14) {
            const Mat m = (t_end == prop.boundary(k) && t == prop.boundary(k - 1))
                              ? prop.interval_exp(k)
                              : prop.partial_exp(k, len);
            auto [next, log] = frame_step(state, m, len);
            state = std::move(next);
            series.push_back(std::move(log));
        }
        t = t_end;
        ++k;
    }
    return finalize(std::move(state), std::move(series), T);
}

QrExponents lyapunov_qr_time_varying(const std::function<Mat(double)>& c, int n,
                                     double T, double dt) {
    FrameState state = FrameState::identity(n);
    std::vector<IntervalLog> series;
    double t = 0.0;
    // frozen-coefficient substeps at dt, logs aggregated per unit interval
    Vec unit_logs = Vec::Zero(n);
    double unit_len = 0.0;
    while (t < T - 1e-12) {
        const double h = std::min(dt, T - t);
        const Mat m = expm(Mat(h * c(t + 0.5 * h)));
        auto [next, log] = frame_step(state, m, h);
        state = std::move(next);
        unit_logs += log.logs;
        unit_len += h;
        if (unit_len >= 1.0 - 1e-12 || t + h >= T - 1e-12) {
            series.push_back(IntervalLog{unit_logs, unit_len});
            unit_logs.setZero();
            unit_len = 0.0;
        }
        t += h;
    }
    return finalize(std::move(state), std::move(series), T);
}

namespace {

void require_triangular(const CMat& m, double tol) {
    const double scale = std::max(m.norm(), 1.0);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            if (std::abs(m(i, j)) > tol * scale)
                throw NotTriangular("coefficient matrix has sub-diagonal mass");
}

}  // namespace

std::vector<double> theta_upper_triangular(const std::vector<TriangularPiece>& pieces,
                                           double tol) {
    if (pieces.empty()) throw ScenarioError("empty coefficient series");
    const auto n = pieces.front().coeff.rows();
    Vec acc = Vec::Zero(n);
    double total = 0.0;
    for (const auto& p : pieces) {
        require_triangular(p.coeff, tol);
        acc += p.length * p.coeff.diagonal().real();
        total += p.length;
    }
    acc /= total;
    return {acc.data(), acc.data() + n};
}

std::vector<double> theta_upper_triangular(const std::function<CMat(double)>& c,
                                           int n, double T, double dt) {
    Vec acc = Vec::Zero(n);
    double t = 0.0;
    while (t < T - 1e-12) {
        const double h = std::min(dt, T - t);
        const CMat a = c(t), b = c(t + 0.5 * h), d = c(t + h);
        require_triangular(a, 1e-10);
        acc += (h / 6.0) *
               (a.diagonal().real() + 4.0 * b.diagonal().real() + d.diagonal().real());
        t += h;
    }
    acc /= T;
    return {acc.data(), acc.data() + n};
}

double liao_type_exponent(const std::vector<IntervalLog>& series, double tau,
                          int ell, int m) {
    if (ell < 0 || m < 1) throw ScenarioError("liao window parameters invalid");
    const long delta = 1L << ell;
    const long needed = delta * m;
    if (static_cast<long>(series.size()) < needed)
        throw InsufficientSeries("series covers " + std::to_string(series.size()) +
                                 " intervals, need " + std::to_string(needed));
    (void)tau;  // T_{m*2^ell} equals the summed interval lengths of the schedule
    double total_time = 0.0;
    double sum = 0.0;
    for (long i = 0; i < m; ++i) {
        Vec window = Vec::Zero(series.front().logs.size());
        for (long k = i * delta; k < (i + 1) * delta; ++k) {
            window += series[static_cast<size_t>(k)].logs;
            total_time += series[static_cast<size_t>(k)].length;
        }
        sum += window.maxCoeff();
    }
    return sum / total_time;
}

std::vector<double> birkhoff_coordinate_averages(const std::vector<IntervalLog>& series) {
    if (series.empty()) throw ScenarioError("empty interval series");
    Vec acc = Vec::Zero(series.front().logs.size());
    double total = 0.0;
    for (const auto& il : series) {
        acc += il.logs;
        total += il.length;
    }
    acc /= total;
    return {acc.data(), acc.data() + acc.size()};
}

ExponentReport exponent_report(const Propagator& prop, double T,
                               const std::vector<int>& ells) {
    QrExponents qe = lyapunov_qr(prop, T);
    ExponentReport rep;
    rep.chi_plus = qe.chi_plus;
    rep.theta = qe.chi_k;
    rep.horizon = T;
    rep.bound_c = qe.bound_c;

    // limsup proxy: max over suffix averages covering at least half the horizon
    {
        const auto n = qe.series.empty() ? 0 : qe.series.front().logs.size();
        Vec total = Vec::Zero(n);
        for (const auto& il : qe.series) total += il.logs;
        Vec prefix = Vec::Zero(n);
        double t0 = 0.0;
        rep.chi_plus_suffix_max = qe.chi_plus;
        for (const auto& il : qe.series) {
            if (T - t0 >= 0.5 * T && t0 > 0.0) {
                const double v = ((total - prefix) / (T - t0)).maxCoeff();
                rep.chi_plus_suffix_max = std::max(rep.chi_plus_suffix_max, v);
            }
            prefix += il.logs;
            t0 += il.length;
        }
    }

    // intervals belonging to the unit schedule (drop a trailing partial one)
    std::vector<IntervalLog> sched = qe.series;
    if (sched.size() > 1 && std::abs(sched.back().length - 1.0) > 1e-9)
        sched.pop_back();
    for (int ell : ells) {
        const long delta = 1L << ell;
        const int m = static_cast<int>(static_cast<long>(sched.size()) / delta);
        if (m < 1) continue;
        rep.chi_star.emplace_back(ell, liao_type_exponent(sched, prop.point().tau, ell, m));
        rep.windows_m = std::max(rep.windows_m, m);
    }
    return rep;
}

}  // namespace swst
