#include "switchstab/flow.hpp"

#include <cmath>
#include <sstream>

namespace swst {

Propagator::Propagator(MatrixFamily family, SwitchPoint point)
    : family_(std::move(family)), point_(std::move(point)) {
    if (point_.tau < 0.0 || point_.tau >= 1.0)
        throw ScenarioError("switch point tau must lie in [0, 1)");
    unit_exp_.reserve(family_.mats.size());
    for (const auto& a : family_.mats) unit_exp_.push_back(expm(a));
    const int s1 = point_.seq.at(1);
    first_exp_ = expm(Mat((1.0 - point_.tau) * family_.mats[static_cast<size_t>(s1 - 1)]));
}

double Propagator::interval_length(int k) const {
    return k == 1 ? 1.0 - point_.tau : 1.0;
}

const Mat& Propagator::interval_exp(int k) const {
    if (k == 1) return first_exp_;
    return unit_exp_[static_cast<size_t>(interval_symbol(k) - 1)];
}

Mat Propagator::partial_exp(int k, double s) const {
    return expm(Mat(s * family_.mats[static_cast<size_t>(interval_symbol(k) - 1)]));
}

Mat Propagator::propagate_linear(double t) const {
    const int n = dim();
    Mat phi = Mat::Identity(n, n);
    if (t <= 0.0) return phi;
    // smallest j with boundary(j) >= t; intervals 1..j-1 are complete
    const int j = static_cast<int>(std::ceil(t + point_.tau - 1e-12));
    for (int k = 1; k < j; ++k) phi = interval_exp(k) * phi;
    const double s = t - boundary(j - 1);
    if (std::abs(s - interval_length(j)) < 1e-15) {
        phi = interval_exp(j) * phi;
    } else if (s > 0.0) {
        phi = partial_exp(j, s) * phi;
    }
    return phi;
}

double Propagator::cocycle_check(double t1, double t2) const {
    const Mat whole = propagate_linear(t1 + t2);
    Propagator shifted(family_, suspension_advance(point_, t1));
    const Mat composed = shifted.propagate_linear(t2) * propagate_linear(t1);
    return (whole - composed).norm();
}

namespace {

// Perturbation evaluated with a direction frozen for the current step.
class PerturbationEval {
public:
    PerturbationEval(const PerturbationSpec& spec, int n)
        : spec_(spec), n_(n), rng_(Rng::stream(spec.seed, 0x70657274ULL)) {
        if (spec_.kind == PerturbationKind::ControlProduct) {
            // fixed random orthogonal direction matrix, spectral norm 1
            Mat g(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) g(i, j) = rng_.normal();
            direction_matrix_ = qr(g).q;
        }
    }

    /// Draw the per-step random data (no-op for deterministic kinds).
    void new_step() {
        if (spec_.kind == PerturbationKind::RandomDirection ||
            spec_.kind == PerturbationKind::ControlProduct) {
            Vec e(n_);
            for (int i = 0; i < n_; ++i) e(i) = rng_.normal();
            const double nrm = e.norm();
            step_dir_ = nrm > 0.0 ? Vec(e / nrm) : Vec(Vec::Unit(n_, 0));
        }
    }

    Vec operator()(const Vec& x, double t) const {
        switch (spec_.kind) {
            case PerturbationKind::None:
                return Vec::Zero(n_);
            case PerturbationKind::LinearCoupling:
                return spec_.magnitude * x;
            case PerturbationKind::Rotation: {
                if (n_ < 2) return spec_.magnitude * x;
                Vec y = x;
                const double c = std::cos(t), s = std::sin(t);
                y(0) = c * x(0) - s * x(1);
                y(1) = s * x(0) + c * x(1);
                return spec_.magnitude * y;
            }
            case PerturbationKind::RandomDirection:
                return spec_.magnitude * x.norm() * step_dir_;
            case PerturbationKind::ControlProduct:
                // B(x) u with B(x) = beta ||x|| Q, u = delta_u * e(t)
                return spec_.beta * x.norm() * spec_.delta_u *
                       (direction_matrix_ * step_dir_);
        }
        return Vec::Zero(n_);
    }

private:
    PerturbationSpec spec_;
    int n_;
    Rng rng_;
    Mat direction_matrix_;
    Vec step_dir_;
};

}  // namespace

Trajectory integrate_perturbed(const Propagator& prop, const PerturbationSpec& pert,
                               const Vec& x0, double T, double dt) {
    if (dt > 0.01 + 1e-15 || dt <= 0.0)
        throw ScenarioError("integration step must satisfy 0 < dt <= 0.01");
    if (T <= 0.0) throw ScenarioError("horizon must be positive");

    const int n = prop.dim();
    PerturbationEval f(pert, n);

    Trajectory traj;
    Vec x = x0;
    double logscale = 0.0;
    const auto record = [&](double t) {
        traj.times.push_back(t);
        traj.log_norms.push_back(logscale + std::log(x.norm()));
    };
    record(0.0);

    double t = 0.0;
    int k = 1;
    Vec k1(n), k2(n), k3(n), k4(n), xm(n);
    while (t < T - 1e-12) {
        const double t_end = std::min(prop.boundary(k), T);
        const double len = t_end - t;
        if (len <= 1e-14) {
            ++k;
            continue;
        }
        const Mat& a = prop.family().mats[static_cast<size_t>(prop.interval_symbol(k) - 1)];
        const int nsteps = static_cast<int>(std::ceil(len / dt - 1e-12));
        const double h = len / nsteps;
        for (int s = 0; s < nsteps; ++s) {
            f.new_step();
            const double ts = t + s * h;
            k1 = a * x + f(x, ts);
            xm = x + 0.5 * h * k1;
            k2 = a * xm + f(xm, ts + 0.5 * h);
            xm = x + 0.5 * h * k2;
            k3 = a * xm + f(xm, ts + 0.5 * h);
            xm = x + h * k3;
            k4 = a * xm + f(xm, ts + h);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!x.allFinite()) throw NonFinite("integration produced NaN/Inf");
            const double nrm = x.norm();
            if (nrm > 1e150 || nrm < 1e-150) {
                logscale += std::log(nrm);
                x /= nrm;
                ++traj.rescale_count;
            }
        }
        t = t_end;
        record(t);
        ++k;
    }

    traj.terminal_direction = x / x.norm();
    return traj;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    os.precision(17);
    os << "t,log_norm\n";
    for (size_t i = 0; i < traj.times.size(); ++i)
        os << traj.times[i] << "," << traj.log_norms[i] << "\n";
    return os.str();
}

}  // namespace swst
