#pragma once

#include <optional>
#include <vector>

#include "switchstab/exponents.hpp"

namespace swst {

enum class StabilityClass { Stable, Unstable, Indeterminate };

const char* to_string(StabilityClass c);

struct Verdict {
    StabilityClass cls = StabilityClass::Indeterminate;
    double slope = 0.0;       ///< fitted exponent
    double band = 0.01;       ///< decision band around zero
};

/// Least-squares slope of log||x(t)|| over the final half of the horizon.
Verdict classify(const Trajectory& traj, double band = 0.01);

/// Verdict straight from a computed Lyapunov exponent.
Verdict classify_exponent(double chi, double band = 0.01);

struct McStabilityResult {
    double stable_fraction = 0.0;
    std::vector<double> exponents;      ///< one per trial, trial-index order
    double mean_exponent = 0.0;
    std::optional<ClosedFormExponents> closed_form;  ///< attached when solvable
    double wilson_low = 0.0;            ///< 95% Wilson interval for the fraction
    double wilson_high = 0.0;
};

/// Monte-Carlo stability of the linear switched system: sampled switch
/// points, QR exponents, verdict fractions.
McStabilityResult mc_stability(const MatrixFamily& fam, const ProbabilityVector& alpha,
                               int trials, double T, std::uint64_t seed,
                               int threads = 0);

enum class Theorem42Outcome { Pass, Fail, Marginal };

struct Theorem42Report {
    bool star = false;
    double stable_fraction = 0.0;
    double max_theta = 0.0;
    Theorem42Outcome outcome = Theorem42Outcome::Marginal;
    McStabilityResult mc;
};

/// Checks the dichotomy: star condition true must coincide with stable
/// fraction >= 0.95, false with <= 0.05. |max theta| < 0.1 is Marginal.
Theorem42Report theorem42_check(const MatrixFamily& fam, const ProbabilityVector& alpha,
                                int trials, double T, std::uint64_t seed,
                                int threads = 0);

struct SweepCell {
    PerturbationKind kind;
    double magnitude = 0.0;  ///< L (for control-product, beta * delta_u)
    double stable_fraction = 0.0;
};

struct SweepResult {
    std::vector<double> grid;
    std::vector<PerturbationKind> kinds;
    std::vector<SweepCell> cells;          ///< row-major: grid x kinds
    double delta_emp = 0.0;                ///< largest L stable across all kinds
    double threshold = 0.9;

    double fraction(int grid_idx, int kind_idx) const;
};

struct SweepOptions {
    int trials = 100;
    double T = 500.0;
    double dt = 0.01;
    int initial_states = 8;   ///< includes +-basis vectors first
    double threshold = 0.9;
    int threads = 0;          ///< 0 = hardware concurrency
};

/// Perturbation-threshold sweep. Refuses (StarConditionFails) when the
/// star condition does not hold, since the sweep would be vacuous.
SweepResult perturbation_sweep(const MatrixFamily& fam, const ProbabilityVector& alpha,
                               const std::vector<PerturbationKind>& kinds,
                               const std::vector<double>& grid, std::uint64_t seed,
                               const SweepOptions& opt = {});

/// Control-form experiment f_i(x,t) = B_i(x) u(t): sweeps the input bound
/// delta_u at fixed growth bound beta, so L = beta * delta_u.
SweepResult control_product_experiment(const MatrixFamily& fam,
                                       const ProbabilityVector& alpha, double beta,
                                       const std::vector<double>& delta_grid,
                                       std::uint64_t seed,
                                       const SweepOptions& opt = {});

/// CSV of a sweep matrix: rows = L, columns = perturbation kind.
std::string sweep_csv(const SweepResult& sweep);

const char* to_string(PerturbationKind k);
PerturbationKind perturbation_kind_from(const std::string& name);

}  // namespace swst
