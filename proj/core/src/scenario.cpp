#include "switchstab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace swst {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.count(key))
            throw ScenarioError("unknown key \"" + key + "\" in " + where);
    }
}

Mat matrix_from_json(const json& rows, const std::string& where) {
    if (!rows.is_array() || rows.empty())
        throw ScenarioError(where + ": matrix must be a non-empty array of rows");
    const auto n = rows.size();
    Mat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || row.size() != n)
            throw ScenarioError(where + ": matrix rows must all have length " +
                                std::to_string(n));
        for (size_t j = 0; j < n; ++j) {
            if (!row[j].is_number())
                throw ScenarioError(where + ": matrix entries must be numbers");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                row[j].get<double>();
        }
    }
    return m;
}

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename T>
T require(const json& obj, const char* key, const char* type_name) {
    if (!obj.contains(key))
        throw ScenarioError(std::string("missing required key \"") + key + "\"");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ScenarioError(std::string("key \"") + key + "\" must be " + type_name);
    }
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
    reject_unknown_keys(doc,
                        {"name", "time_varying", "family", "labels", "alpha",
                         "horizon", "trials", "seed", "ells", "perturbation"},
                        "scenario");

    Scenario s;
    if (doc.contains("name")) s.name = require<std::string>(doc, "name", "a string");
    if (doc.contains("horizon")) {
        s.horizon = require<double>(doc, "horizon", "a number");
        if (!(s.horizon > 0.0)) throw ScenarioError("horizon must be positive");
    }
    if (doc.contains("trials")) {
        s.trials = require<int>(doc, "trials", "an integer");
        if (s.trials < 1) throw ScenarioError("trials must be >= 1");
    }
    if (doc.contains("seed"))
        s.seed = require<std::uint64_t>(doc, "seed", "an unsigned integer");
    if (doc.contains("ells")) {
        s.ells = require<std::vector<int>>(doc, "ells", "an array of integers");
        for (int ell : s.ells)
            if (ell < 0 || ell > 30)
                throw ScenarioError("ells entries must lie in [0, 30]");
    }

    if (doc.contains("time_varying")) {
        s.time_varying = require<std::string>(doc, "time_varying", "a string");
        if (s.time_varying != "marcus-yamabe" && s.time_varying != "triangular-decay")
            throw ScenarioError("unknown time_varying system: " + s.time_varying);
        if (doc.contains("family") || doc.contains("alpha"))
            throw ScenarioError("time_varying excludes family/alpha");
        return s;
    }

    if (!doc.contains("family"))
        throw ScenarioError("missing required key \"family\"");
    const json& fam = doc.at("family");
    if (!fam.is_array() || fam.empty())
        throw ScenarioError("family must be a non-empty array of matrices");
    std::vector<Mat> mats;
    for (size_t k = 0; k < fam.size(); ++k)
        mats.push_back(matrix_from_json(fam[k], "family[" + std::to_string(k) + "]"));
    std::vector<std::string> labels;
    if (doc.contains("labels")) {
        labels = require<std::vector<std::string>>(doc, "labels",
                                                   "an array of strings");
        if (labels.size() != mats.size())
            throw ScenarioError("labels length must match family length");
    }
    s.family = MatrixFamily::from(std::move(mats), std::move(labels));

    std::vector<double> a;
    if (doc.contains("alpha")) {
        a = require<std::vector<double>>(doc, "alpha", "an array of numbers");
    } else {
        a.assign(static_cast<size_t>(s.family.size()),
                 1.0 / s.family.size());
    }
    if (static_cast<int>(a.size()) != s.family.size())
        throw ScenarioError("alpha length must match family length");
    s.alpha = ProbabilityVector::from(std::move(a));

    if (doc.contains("perturbation")) {
        const json& pert = doc.at("perturbation");
        if (!pert.is_object()) throw ScenarioError("perturbation must be an object");
        reject_unknown_keys(pert, {"kinds", "grid", "beta", "dt"}, "perturbation");
        if (pert.contains("kinds")) {
            for (const auto& name : require<std::vector<std::string>>(
                     pert, "kinds", "an array of strings"))
                s.kinds.push_back(perturbation_kind_from(name));
        }
        s.grid = require<std::vector<double>>(pert, "grid", "an array of numbers");
        for (size_t i = 0; i < s.grid.size(); ++i) {
            if (s.grid[i] < 0.0)
                throw ScenarioError("perturbation grid entries must be >= 0");
            if (i > 0 && s.grid[i] <= s.grid[i - 1])
                throw ScenarioError("perturbation grid must be strictly increasing");
        }
        if (pert.contains("beta")) {
            s.beta = require<double>(pert, "beta", "a number");
            if (!(s.beta > 0.0)) throw ScenarioError("beta must be positive");
        }
        if (pert.contains("dt")) {
            s.dt = require<double>(pert, "dt", "a number");
            if (!(s.dt > 0.0 && s.dt <= 0.01))
                throw ScenarioError("dt must lie in (0, 0.01]");
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string dump_scenario(const Scenario& s) {
    json doc = json::object();
    doc["name"] = s.name;
    if (s.is_time_varying()) {
        doc["time_varying"] = s.time_varying;
    } else {
        json fam = json::array();
        for (const auto& m : s.family.mats) fam.push_back(matrix_to_json(m));
        doc["family"] = std::move(fam);
        doc["labels"] = s.family.labels;
        doc["alpha"] = s.alpha.alpha;
    }
    doc["horizon"] = s.horizon;
    doc["trials"] = s.trials;
    doc["seed"] = s.seed;
    doc["ells"] = s.ells;
    if (!s.grid.empty()) {
        json pert = json::object();
        std::vector<std::string> names;
        for (auto k : s.kinds) names.emplace_back(to_string(k));
        pert["kinds"] = names;
        pert["grid"] = s.grid;
        pert["beta"] = s.beta;
        pert["dt"] = s.dt;
        doc["perturbation"] = std::move(pert);
    }
    return doc.dump(2) + "\n";
}

std::vector<std::string> builtin_scenario_names() {
    return {"marcus-yamabe", "triangular-decay", "diag-unstable-pair", "sl2"};
}

Scenario builtin_scenario(const std::string& name) {
    Scenario s;
    s.name = name;
    if (name == "marcus-yamabe") {
        s.time_varying = "marcus-yamabe";
        s.horizon = 100.0;
        return s;
    }
    if (name == "triangular-decay") {
        s.time_varying = "triangular-decay";
        s.horizon = 1e4;
        return s;
    }
    if (name == "diag-unstable-pair") {
        Mat a1(2, 2), a2(2, 2);
        a1 << -2, 0, 0, 1;
        a2 << 1, 0, 0, -2;
        s.family = MatrixFamily::from({a1, a2}, {"A1", "A2"});
        s.alpha = ProbabilityVector::from({0.5, 0.5});
        s.horizon = 500.0;
        s.trials = 100;
        s.kinds = {PerturbationKind::LinearCoupling, PerturbationKind::Rotation,
                   PerturbationKind::RandomDirection};
        s.grid = {0.0, 0.05, 0.1, 0.2, 0.4};
        return s;
    }
    if (name == "sl2") {
        Mat e(2, 2), f(2, 2), h(2, 2);
        e << 0, 1, 0, 0;
        f << 0, 0, 1, 0;
        h << 1, 0, 0, -1;
        s.family = MatrixFamily::from({e, f, h}, {"E", "F", "H"});
        s.alpha = ProbabilityVector::from({1.0 / 3, 1.0 / 3, 1.0 / 3});
        s.horizon = 100.0;
        return s;
    }
    throw ScenarioError("unknown built-in scenario: " + name);
}

Mat time_varying_coeff(const std::string& system, double t) {
    if (system == "marcus-yamabe") {
        // time-rescaled classical example: frozen eigenvalues are the
        // constant Hurwitz pair (-1 +- i sqrt 7)/2, yet x(t) =
        // e^t (-cos 2t, sin 2t) solves the equation, so chi_plus = 1
        const double c = std::cos(2 * t), sn = std::sin(2 * t);
        Mat m(2, 2);
        m << -2 + 3 * c * c, 2 - 3 * sn * c, -2 - 3 * sn * c, -2 + 3 * sn * sn;
        return m;
    }
    if (system == "triangular-decay") {
        Mat m(2, 2);
        m << -1.0 / (1.0 + t), 1.0, 0.0, -1.0 / (1.0 + t);
        return m;
    }
    throw ScenarioError("unknown time-varying system: " + system);
}

}  // namespace swst
