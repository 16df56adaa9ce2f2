#include "switchstab/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace swst {

const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::Stable: return "Stable";
        case StabilityClass::Unstable: return "Unstable";
        case StabilityClass::Indeterminate: return "Indeterminate";
    }
    return "?";
}

const char* to_string(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::None: return "none";
        case PerturbationKind::LinearCoupling: return "linear-coupling";
        case PerturbationKind::Rotation: return "rotation";
        case PerturbationKind::RandomDirection: return "random-direction";
        case PerturbationKind::ControlProduct: return "control-product";
    }
    return "?";
}

PerturbationKind perturbation_kind_from(const std::string& name) {
    if (name == "none") return PerturbationKind::None;
    if (name == "linear-coupling") return PerturbationKind::LinearCoupling;
    if (name == "rotation") return PerturbationKind::Rotation;
    if (name == "random-direction") return PerturbationKind::RandomDirection;
    if (name == "control-product") return PerturbationKind::ControlProduct;
    throw ScenarioError("unknown perturbation kind: " + name);
}

namespace {

// Runs f(i) for i in [0, count); results must be written to per-index slots
// so the reduction order never depends on scheduling.
template <typename F>
void parallel_for(int count, int threads, F&& f) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::pair<double, double> wilson_interval(int successes, int trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 95%
    const double p = static_cast<double>(successes) / trials;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / trials;
    const double center = (p + z2 / (2.0 * trials)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::uint64_t trial_point_seed(std::uint64_t master, int trial) {
    return Rng::stream(master, static_cast<std::uint64_t>(trial)).next_u64();
}

}  // namespace

Verdict classify_exponent(double chi, double band) {
    Verdict v;
    v.slope = chi;
    v.band = band;
    if (chi <= -band)
        v.cls = StabilityClass::Stable;
    else if (chi >= band)
        v.cls = StabilityClass::Unstable;
    return v;
}

Verdict classify(const Trajectory& traj, double band) {
    if (traj.times.empty() || traj.times.back() < 50.0)
        throw HorizonTooShort("classify needs a horizon of at least 50");
    const double t_mid = 0.5 * traj.times.back();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] < t_mid) continue;
        sx += traj.times[i];
        sy += traj.log_norms[i];
        sxx += traj.times[i] * traj.times[i];
        sxy += traj.times[i] * traj.log_norms[i];
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return classify_exponent(slope, band);
}

McStabilityResult mc_stability(const MatrixFamily& fam, const ProbabilityVector& alpha,
                               int trials, double T, std::uint64_t seed, int threads) {
    if (trials < 1) throw ScenarioError("trial count must be >= 1");
    McStabilityResult res;
    res.exponents.assign(static_cast<size_t>(trials), 0.0);
    const int horizon = static_cast<int>(std::ceil(T));
    parallel_for(trials, threads, [&](int i) {
        SwitchPoint p = sample_switch_point(alpha, horizon, trial_point_seed(seed, i));
        Propagator prop(fam, std::move(p));
        res.exponents[static_cast<size_t>(i)] = lyapunov_qr(prop, T).chi_plus;
    });
    int stable = 0;
    double sum = 0.0;
    for (double chi : res.exponents) {
        if (classify_exponent(chi).cls == StabilityClass::Stable) ++stable;
        sum += chi;
    }
    res.stable_fraction = static_cast<double>(stable) / trials;
    res.mean_exponent = sum / trials;
    std::tie(res.wilson_low, res.wilson_high) = wilson_interval(stable, trials);

    SolvabilityResult sv = is_solvable(fam);
    if (sv.solvable) {
        res.closed_form =
            closed_form_exponents(simultaneous_triangularize(fam), alpha);
    }
    return res;
}

Theorem42Report theorem42_check(const MatrixFamily& fam, const ProbabilityVector& alpha,
                                int trials, double T, std::uint64_t seed, int threads) {
    if (!is_solvable(fam).solvable)
        throw NotSolvable("theorem42_check requires a solvable family");
    Theorem42Report rep;
    rep.star = star_condition(fam, alpha);
    rep.mc = mc_stability(fam, alpha, trials, T, seed, threads);
    rep.stable_fraction = rep.mc.stable_fraction;
    rep.max_theta = rep.mc.closed_form->chi;
    if (std::abs(rep.max_theta) < 0.1) {
        rep.outcome = Theorem42Outcome::Marginal;
    } else if (rep.star) {
        rep.outcome = rep.stable_fraction >= 0.95 ? Theorem42Outcome::Pass
                                                  : Theorem42Outcome::Fail;
    } else {
        rep.outcome = rep.stable_fraction <= 0.05 ? Theorem42Outcome::Pass
                                                  : Theorem42Outcome::Fail;
    }
    return rep;
}

double SweepResult::fraction(int grid_idx, int kind_idx) const {
    return cells[static_cast<size_t>(grid_idx) * kinds.size() +
                 static_cast<size_t>(kind_idx)]
        .stable_fraction;
}

namespace {

std::vector<Vec> initial_states(int n, int count, std::uint64_t seed) {
    std::vector<Vec> states;
    for (int i = 0; i < n && static_cast<int>(states.size()) < count; ++i) {
        states.push_back(Vec::Unit(n, i));
        if (static_cast<int>(states.size()) < count)
            states.push_back(-Vec::Unit(n, i));
    }
    Rng rng(seed);
    while (static_cast<int>(states.size()) < count) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = rng.normal();
        states.push_back(v / v.norm());
    }
    return states;
}

SweepResult run_sweep(const MatrixFamily& fam, const ProbabilityVector& alpha,
                      const std::vector<PerturbationKind>& kinds,
                      const std::vector<double>& grid, double beta,
                      bool grid_is_delta_u, std::uint64_t seed,
                      const SweepOptions& opt) {
    if (!star_condition(fam, alpha))
        throw StarConditionFails("sweep refused: averaged matrix is not Hurwitz");
    for (size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw ScenarioError("perturbation grid must be strictly increasing");

    SweepResult sweep;
    sweep.grid = grid;
    sweep.kinds = kinds;
    sweep.threshold = opt.threshold;
    sweep.cells.resize(grid.size() * kinds.size());
    const int horizon = static_cast<int>(std::ceil(opt.T));

    for (size_t gi = 0; gi < grid.size(); ++gi) {
        for (size_t ki = 0; ki < kinds.size(); ++ki) {
            PerturbationSpec pert;
            pert.kind = kinds[ki];
            if (grid_is_delta_u) {
                pert.beta = beta;
                pert.delta_u = grid[gi];
            } else {
                pert.magnitude = grid[gi];
            }
            const double level = pert.growth_bound();

            std::vector<int> stable(static_cast<size_t>(opt.trials), 0);
            parallel_for(opt.trials, opt.threads, [&](int t) {
                // point seed depends only on the trial, so the L = 0 column
                // reproduces mc_stability and cells share common random numbers
                SwitchPoint p =
                    sample_switch_point(alpha, horizon, trial_point_seed(seed, t));
                Propagator prop(fam, std::move(p));
                if (level == 0.0) {
                    const double chi = lyapunov_qr(prop, opt.T).chi_plus;
                    stable[static_cast<size_t>(t)] =
                        classify_exponent(chi).cls == StabilityClass::Stable;
                    return;
                }
                PerturbationSpec trial_pert = pert;
                trial_pert.seed = Rng::stream(
                    seed, 0x9e00ULL + gi * 1009 + ki * 131 +
                              static_cast<std::uint64_t>(t)).next_u64();
                bool all_stable = true;
                const auto x0s = initial_states(fam.n, opt.initial_states,
                                                trial_point_seed(seed ^ 0x5a5aULL, t));
                for (const auto& x0 : x0s) {
                    Trajectory traj =
                        integrate_perturbed(prop, trial_pert, x0, opt.T, opt.dt);
                    if (classify(traj).cls != StabilityClass::Stable) {
                        all_stable = false;
                        break;
                    }
                }
                stable[static_cast<size_t>(t)] = all_stable;
            });

            int count = 0;
            for (int s : stable) count += s;
            SweepCell cell;
            cell.kind = kinds[ki];
            cell.magnitude = level;
            cell.stable_fraction = static_cast<double>(count) / opt.trials;
            sweep.cells[gi * kinds.size() + ki] = cell;
        }
    }

    sweep.delta_emp = 0.0;
    for (size_t gi = 0; gi < grid.size(); ++gi) {
        bool all = true;
        for (size_t ki = 0; ki < kinds.size(); ++ki)
            all = all && sweep.fraction(static_cast<int>(gi), static_cast<int>(ki)) >=
                             opt.threshold;
        if (all) sweep.delta_emp = std::max(sweep.delta_emp, grid[gi]);
    }
    return sweep;
}

}  // namespace

SweepResult perturbation_sweep(const MatrixFamily& fam, const ProbabilityVector& alpha,
                               const std::vector<PerturbationKind>& kinds,
                               const std::vector<double>& grid, std::uint64_t seed,
                               const SweepOptions& opt) {
    return run_sweep(fam, alpha, kinds, grid, 1.0, false, seed, opt);
}

SweepResult control_product_experiment(const MatrixFamily& fam,
                                       const ProbabilityVector& alpha, double beta,
                                       const std::vector<double>& delta_grid,
                                       std::uint64_t seed, const SweepOptions& opt) {
    if (!(beta > 0.0)) throw GrowthBoundViolated("beta must be positive");
    return run_sweep(fam, alpha, {PerturbationKind::ControlProduct}, delta_grid, beta,
                     true, seed, opt);
}

std::string sweep_csv(const SweepResult& sweep) {
    std::ostringstream os;
    os.precision(17);
    os << "L";
    for (auto k : sweep.kinds) os << "," << to_string(k);
    os << "\n";
    for (size_t gi = 0; gi < sweep.grid.size(); ++gi) {
        os << sweep.grid[gi];
        for (size_t ki = 0; ki < sweep.kinds.size(); ++ki)
            os << "," << sweep.fraction(static_cast<int>(gi), static_cast<int>(ki));
        os << "\n";
    }
    return os.str();
}

}  // namespace swst
