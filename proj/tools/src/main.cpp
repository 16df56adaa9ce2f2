#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "switchstab/scenario.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace swst;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitRefused = 4;

struct CommonOpts {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--scenario", opts.scenario,
                    "scenario file path or built-in name")
        ->required();
    cmd->add_option("--seed", opts.seed, "override the scenario seed");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = all cores)");
    cmd->add_option("--out", opts.out, "directory for report files");
    cmd->add_option("--format", opts.format, "report format")
        ->check(CLI::IsMember({"json", "csv", "both"}));
}

Scenario resolve_scenario(const CommonOpts& opts) {
    const auto names = builtin_scenario_names();
    Scenario s = std::find(names.begin(), names.end(), opts.scenario) != names.end()
                     ? builtin_scenario(opts.scenario)
                     : load_scenario(opts.scenario);
    if (opts.seed) s.seed = *opts.seed;
    return s;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
    fs::create_directories(dir);
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot write " + path.string());
    out << content;
}

void emit(const CommonOpts& opts, const std::string& stem, const json& report,
          const std::string& csv = {}) {
    if (opts.out.empty()) return;
    if (opts.format == "json" || opts.format == "both")
        write_file(opts.out, stem + ".json", report.dump(2) + "\n");
    if (!csv.empty() && (opts.format == "csv" || opts.format == "both"))
        write_file(opts.out, stem + ".csv", csv);
}

json report_header(const Scenario& s) {
    json doc = json::object();
    doc["version"] = kVersion;
    doc["scenario"] = s.name.empty() ? "(unnamed)" : s.name;
    doc["seed"] = s.seed;
    return doc;
}

void require_family(const Scenario& s, const char* cmd) {
    if (s.is_time_varying())
        throw ScenarioError(std::string(cmd) +
                            " needs a switched family scenario");
}

int cmd_check_solvable(const CommonOpts& opts) {
    Scenario s = resolve_scenario(opts);
    require_family(s, "check-solvable");
    LieBasis basis = generate_lie_algebra(s.family);
    std::vector<int> dims = derived_series(basis);
    SolvabilityResult sv = is_solvable(s.family);

    std::cout << "lie algebra dimension: " << basis.dim() << "\n";
    std::cout << "derived series dims:";
    for (int d : dims) std::cout << " " << d;
    std::cout << "\n";
    if (sv.solvable)
        std::cout << "solvable: true, ell=" << *sv.ell << "\n";
    else
        std::cout << "solvable: false\n";

    json doc = report_header(s);
    doc["lie_dim"] = basis.dim();
    doc["derived_series"] = dims;
    doc["solvable"] = sv.solvable;
    if (sv.ell) doc["ell"] = *sv.ell;

    if (sv.solvable) {
        Triangularization tri = simultaneous_triangularize(s.family);
        double residual = 0.0;
        for (const auto& m : tri.triangulars)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index j = 0; j < i; ++j)
                    residual = std::max(residual, std::abs(m(i, j)));
        std::cout << "triangularization residual: " << residual << "\n";
        doc["triangularization_residual"] = residual;
    }
    emit(opts, "check_solvable", doc);
    return kExitOk;
}

json complex_matrix_json(const CMat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_triangularize(const CommonOpts& opts) {
    Scenario s = resolve_scenario(opts);
    require_family(s, "triangularize");
    if (!is_solvable(s.family).solvable) {
        std::cerr << "refused: family is not solvable over C\n";
        return kExitRefused;
    }
    Triangularization tri = simultaneous_triangularize(s.family);
    std::cout << "basis change found (unitary), diag entries per matrix:\n";
    json doc = report_header(s);
    doc["t"] = complex_matrix_json(tri.t);
    json diags = json::array();
    for (int i = 0; i < static_cast<int>(tri.diag.size()); ++i) {
        std::cout << "  " << s.family.labels[static_cast<size_t>(i)] << ":";
        json entries = json::array();
        for (Eigen::Index k = 0; k < tri.diag[static_cast<size_t>(i)].size(); ++k) {
            const Complex d = tri.diag[static_cast<size_t>(i)](k);
            std::cout << " " << d.real() << (d.imag() >= 0 ? "+" : "")
                      << d.imag() << "i";
            entries.push_back(json::array({d.real(), d.imag()}));
        }
        std::cout << "\n";
        diags.push_back(std::move(entries));
    }
    doc["diagonals"] = std::move(diags);
    emit(opts, "triangularize", doc);
    return kExitOk;
}

int cmd_exponents(const CommonOpts& opts) {
    Scenario s = resolve_scenario(opts);
    json doc = report_header(s);

    if (s.is_time_varying()) {
        const std::string sys = s.time_varying;
        QrExponents qe = lyapunov_qr_time_varying(
            [&](double t) { return time_varying_coeff(sys, t); },
            time_varying_coeff(sys, 0.0).rows(), s.horizon, s.dt);
        std::cout << "chi_plus: " << qe.chi_plus << "\n";
        doc["system"] = sys;
        doc["chi_plus"] = qe.chi_plus;
        doc["chi_k"] = qe.chi_k;
        emit(opts, "exponents", doc);
        return kExitOk;
    }

    SwitchPoint p = sample_switch_point(
        s.alpha, static_cast<int>(std::ceil(s.horizon)), s.seed);
    Propagator prop(s.family, std::move(p));
    ExponentReport rep = exponent_report(prop, s.horizon, s.ells);

    std::cout << "chi_plus: " << rep.chi_plus << "\n";
    std::cout << "theta:";
    for (double th : rep.theta) std::cout << " " << th;
    std::cout << "\n";
    for (const auto& [ell, v] : rep.chi_star)
        std::cout << "chi_star(ell=" << ell << "): " << v << "\n";

    doc["chi_plus"] = rep.chi_plus;
    doc["chi_plus_suffix_max"] = rep.chi_plus_suffix_max;
    doc["theta"] = rep.theta;
    json stars = json::array();
    for (const auto& [ell, v] : rep.chi_star)
        stars.push_back(json{{"ell", ell}, {"chi_star", v}});
    doc["chi_star"] = std::move(stars);
    doc["horizon"] = rep.horizon;
    doc["bound_c"] = rep.bound_c;

    SolvabilityResult sv = is_solvable(s.family);
    if (sv.solvable) {
        ClosedFormExponents cf =
            closed_form_exponents(simultaneous_triangularize(s.family), s.alpha);
        std::cout << "closed-form theta:";
        for (double th : cf.theta) std::cout << " " << th;
        std::cout << "\nclosed-form chi: " << cf.chi << "\n";
        doc["closed_form_theta"] = cf.theta;
        doc["closed_form_chi"] = cf.chi;
    }

    // window series for plotting
    std::ostringstream csv;
    csv.precision(17);
    csv << "ell,chi_star\n";
    for (const auto& [ell, v] : rep.chi_star) csv << ell << "," << v << "\n";
    emit(opts, "exponents", doc, csv.str());
    return kExitOk;
}

int cmd_mc(const CommonOpts& opts) {
    Scenario s = resolve_scenario(opts);
    require_family(s, "mc");
    McStabilityResult mc = mc_stability(s.family, s.alpha, s.trials, s.horizon,
                                        s.seed, opts.threads);
    std::cout << "stable fraction: " << mc.stable_fraction << " (95% CI ["
              << mc.wilson_low << ", " << mc.wilson_high << "])\n";
    std::cout << "mean exponent: " << mc.mean_exponent << "\n";
    json doc = report_header(s);
    doc["trials"] = s.trials;
    doc["horizon"] = s.horizon;
    doc["stable_fraction"] = mc.stable_fraction;
    doc["wilson_low"] = mc.wilson_low;
    doc["wilson_high"] = mc.wilson_high;
    doc["mean_exponent"] = mc.mean_exponent;
    doc["exponents"] = mc.exponents;
    if (mc.closed_form) {
        std::cout << "closed-form chi: " << mc.closed_form->chi << "\n";
        doc["closed_form_theta"] = mc.closed_form->theta;
        doc["closed_form_chi"] = mc.closed_form->chi;
    }
    std::ostringstream csv;
    csv.precision(17);
    csv << "trial,chi_plus\n";
    for (size_t i = 0; i < mc.exponents.size(); ++i)
        csv << i << "," << mc.exponents[i] << "\n";
    emit(opts, "mc", doc, csv.str());
    return kExitOk;
}

json sweep_to_json(const Scenario& s, const SweepResult& res) {
    json doc = report_header(s);
    doc["threshold"] = res.threshold;
    doc["delta_emp"] = res.delta_emp;
    json kinds = json::array();
    for (auto k : res.kinds) kinds.push_back(to_string(k));
    doc["kinds"] = std::move(kinds);
    doc["grid"] = res.grid;
    json cells = json::array();
    for (const auto& c : res.cells)
        cells.push_back(json{{"kind", to_string(c.kind)},
                             {"L", c.magnitude},
                             {"stable_fraction", c.stable_fraction}});
    doc["cells"] = std::move(cells);
    return doc;
}

int cmd_sweep(const CommonOpts& opts, bool control) {
    Scenario s = resolve_scenario(opts);
    require_family(s, control ? "control-sweep" : "sweep");
    if (s.grid.empty())
        throw ScenarioError("scenario has no perturbation grid");
    SweepOptions so;
    so.trials = s.trials;
    so.T = s.horizon;
    so.dt = s.dt;
    so.threads = opts.threads;
    SweepResult res;
    if (control) {
        res = control_product_experiment(s.family, s.alpha, s.beta, s.grid,
                                         s.seed, so);
    } else {
        std::vector<PerturbationKind> kinds = s.kinds;
        if (kinds.empty())
            kinds = {PerturbationKind::LinearCoupling, PerturbationKind::Rotation,
                     PerturbationKind::RandomDirection};
        res = perturbation_sweep(s.family, s.alpha, kinds, s.grid, s.seed, so);
    }
    std::cout << "delta_emp: " << res.delta_emp << "\n";
    for (size_t gi = 0; gi < res.grid.size(); ++gi)
        for (size_t ki = 0; ki < res.kinds.size(); ++ki)
            std::cout << "  L=" << res.grid[gi] << " "
                      << to_string(res.kinds[ki]) << ": "
                      << res.fraction(static_cast<int>(gi),
                                      static_cast<int>(ki))
                      << "\n";
    emit(opts, control ? "control_sweep" : "sweep", sweep_to_json(s, res),
         sweep_csv(res));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"switched-system stability analysis"};
    app.set_version_flag("--version", std::string("switchstab ") + kVersion);
    app.require_subcommand(1);

    CommonOpts opts;
    auto* check = app.add_subcommand("check-solvable",
                                     "derived series and solvability verdict");
    auto* tri = app.add_subcommand("triangularize",
                                   "simultaneous triangularization");
    auto* expn = app.add_subcommand("exponents",
                                    "Lyapunov and windowed exponents");
    auto* mc = app.add_subcommand("mc", "Monte-Carlo stability over signals");
    auto* sweep = app.add_subcommand("sweep", "perturbation-threshold sweep");
    auto* csweep = app.add_subcommand("control-sweep",
                                      "control-form perturbation sweep");
    for (auto* cmd : {check, tri, expn, mc, sweep, csweep}) add_common(cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (check->parsed()) return cmd_check_solvable(opts);
        if (tri->parsed()) return cmd_triangularize(opts);
        if (expn->parsed()) return cmd_exponents(opts);
        if (mc->parsed()) return cmd_mc(opts);
        if (sweep->parsed()) return cmd_sweep(opts, false);
        if (csweep->parsed()) return cmd_sweep(opts, true);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const StarConditionFails& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitRefused;
    } catch (const NotSolvable& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitRefused;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitBadInput;
}
