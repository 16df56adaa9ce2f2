#pragma once

#include <functional>
#include <vector>

#include "switchstab/matkit.hpp"
#include "switchstab/symdyn.hpp"

namespace swst {

/// Exact propagation of the linear switched system driven by [iota, tau]:
/// per-interval matrix exponentials composed left to right. Switching times
/// sit at t = k - tau, k >= 1; unit-interval exponentials are cached.
class Propagator {
public:
    Propagator(MatrixFamily family, SwitchPoint point);

    const MatrixFamily& family() const { return family_; }
    const SwitchPoint& point() const { return point_; }
    int dim() const { return family_.n; }

    /// Boundary time T_k = k - tau (T_0 = 0).
    double boundary(int k) const { return k == 0 ? 0.0 : k - point_.tau; }
    /// Length of the k-th switching interval (1-based); first is 1 - tau.
    double interval_length(int k) const;
    /// Symbol active on the k-th interval (1-based).
    int interval_symbol(int k) const { return point_.seq.at(k); }
    /// Cached exponential over the whole k-th interval.
    const Mat& interval_exp(int k) const;
    /// exp(s * A_symbol(k)) for a partial interval.
    Mat partial_exp(int k, double s) const;

    /// Phi_{[iota,tau]}(t), the principal matrix at time t.
    Mat propagate_linear(double t) const;

    /// || Phi(t1+t2) - Phi_shifted(t2) * Phi(t1) ||, the cocycle defect.
    double cocycle_check(double t1, double t2) const;

private:
    MatrixFamily family_;
    SwitchPoint point_;
    std::vector<Mat> unit_exp_;  ///< exp(A_i), one per subsystem
    Mat first_exp_;              ///< exp((1 - tau) A_{iota_1})
};

enum class PerturbationKind {
    None,
    LinearCoupling,   ///< f = L x
    Rotation,         ///< f = L R(t) x, R(t) a time-varying rotation
    RandomDirection,  ///< f = L ||x|| e(t), per-step random unit direction
    ControlProduct,   ///< f = B(x) u(t), ||B(x)|| <= beta ||x||, ||u|| <= delta
};

struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::None;
    double magnitude = 0.0;  ///< L; linear growth bound ||f(x,t)|| <= L ||x||
    double beta = 1.0;       ///< control-product: bound on ||B(x)||/||x||
    double delta_u = 0.0;    ///< control-product: input bound; L = beta * delta_u
    std::uint64_t seed = 0;  ///< stream for random-direction / control inputs

    double growth_bound() const {
        return kind == PerturbationKind::ControlProduct ? beta * delta_u : magnitude;
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> log_norms;  ///< log ||x(t)||, rescale-corrected
    int rescale_count = 0;
    Vec terminal_direction;
};

/// Fixed-step RK4 integration of the perturbed switched system, with steps
/// aligned to the switching times k - tau. The state is renormalized when
/// ||x|| leaves [1e-150, 1e150]; the log is carried in log_norms.
Trajectory integrate_perturbed(const Propagator& prop, const PerturbationSpec& pert,
                               const Vec& x0, double T, double dt);

/// CSV export of (t, log||x||) rows.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace swst
