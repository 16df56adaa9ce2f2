#pragma once

#include <string>
#include <vector>

#include "switchstab/stability.hpp"

namespace swst {

/// Declarative experiment description. Either a switched family (the usual
/// case) or one of the named time-varying systems used by the exponents
/// command; the two are mutually exclusive.
struct Scenario {
    std::string name;
    std::string time_varying;  ///< "", "marcus-yamabe" or "triangular-decay"
    MatrixFamily family;
    ProbabilityVector alpha;
    double horizon = 100.0;
    int trials = 50;
    std::uint64_t seed = 1;
    std::vector<int> ells = {0, 1, 2, 3};
    std::vector<PerturbationKind> kinds;
    std::vector<double> grid;
    double beta = 1.0;
    double dt = 0.01;

    bool is_time_varying() const { return !time_varying.empty(); }
};

/// Parses and validates a scenario JSON document. Unknown keys are
/// rejected; family/alpha invariants are enforced on load.
Scenario parse_scenario(const std::string& json_text);

/// Reads the file and parses it. Throws ScenarioError on I/O failure.
Scenario load_scenario(const std::string& path);

/// Canonical JSON serialization; parse(dump(s)) round-trips and
/// dump(parse(dump(s))) == dump(s).
std::string dump_scenario(const Scenario& s);

/// Built-in scenarios so experiments need no fixture files.
std::vector<std::string> builtin_scenario_names();
Scenario builtin_scenario(const std::string& name);

/// Coefficient matrix of the named time-varying system at time t.
Mat time_varying_coeff(const std::string& system, double t);

}  // namespace swst
