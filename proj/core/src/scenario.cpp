#include "robustpower/scenario.hpp"

#include "robustpower/error.hpp"
#include "robustpower/radius.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace robustpower {

namespace {

int line_of(const YAML::Node& node) {
    const auto mark = node.Mark();
    return mark.line >= 0 ? mark.line + 1 : -1;
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar()) throw ScenarioError(key + ": expected a scalar", line_of(node));
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ScenarioError(key + ": cannot convert '" + node.Scalar() + "'", line_of(node));
    }
}

template <typename T>
void read(const YAML::Node& map, const std::string& key, T& out) {
    if (const auto node = map[key]) out = scalar<T>(node, key);
}

std::vector<double> read_list(const YAML::Node& node, const std::string& key) {
    if (!node.IsSequence()) throw ScenarioError(key + ": expected a list", line_of(node));
    std::vector<double> values;
    for (const auto& item : node) values.push_back(scalar<double>(item, key));
    if (values.empty()) throw ScenarioError(key + ": empty list", line_of(node));
    return values;
}

void reject_unknown(const YAML::Node& map, std::initializer_list<std::string_view> known,
                    const std::string& where) {
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ScenarioError(where + ": unknown key '" + key + "'", line_of(kv.first));
    }
}

void expect_map(const YAML::Node& node, const std::string& where) {
    if (!node.IsMap()) throw ScenarioError(where + ": expected a mapping", line_of(node));
}

void parse_solver(const YAML::Node& node, SolverConfig& cfg) {
    expect_map(node, "solver");
    reject_unknown(node,
                   {"p0", "step_dual", "step_z", "iterations", "seed", "mode", "utility",
                    "schedule", "z_resolve_period", "z_resolve_tolerance", "mc_samples"},
                   "solver");
    read(node, "p0", cfg.p0);
    read(node, "step_dual", cfg.step_dual);
    read(node, "step_z", cfg.step_z);
    read(node, "iterations", cfg.iterations);
    read(node, "seed", cfg.seed);
    read(node, "z_resolve_period", cfg.z_resolve_period);
    read(node, "z_resolve_tolerance", cfg.z_resolve_tolerance);
    read(node, "mc_samples", cfg.mc_samples);
    if (const auto m = node["mode"]) {
        const auto v = scalar<std::string>(m, "mode");
        if (v == "model-based") cfg.mode = VarLevelMode::ModelBased;
        else if (v == "model-free") cfg.mode = VarLevelMode::ModelFree;
        else throw ScenarioError("mode: expected model-based or model-free", line_of(m));
    }
    if (const auto u = node["utility"]) {
        const auto v = scalar<std::string>(u, "utility");
        if (v == "sumrate") cfg.utility = UtilityType::Sumrate;
        else if (v == "pf") cfg.utility = UtilityType::ProportionalFairness;
        else throw ScenarioError("utility: expected sumrate or pf", line_of(u));
    }
    if (const auto s = node["schedule"]) {
        const auto v = scalar<std::string>(s, "schedule");
        if (v == "constant") cfg.schedule = StepSchedule::Constant;
        else if (v == "inverse-sqrt") cfg.schedule = StepSchedule::InverseSqrt;
        else throw ScenarioError("schedule: expected constant or inverse-sqrt", line_of(s));
    }
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ScenarioError(std::string("solver: ") + e.what(), line_of(node));
    }
}

void parse_terminal(const YAML::Node& node, Scenario& sc) {
    expect_map(node, "terminal");
    reject_unknown(node, {"noise_var", "phi", "radius", "weight", "count", "group", "fading"},
                   "terminal");
    TerminalConfig t;
    read(node, "noise_var", t.noise_var);
    read(node, "weight", t.weight);
    if (node["phi"] && node["radius"])
        throw ScenarioError("terminal: give phi or radius, not both", line_of(node));
    if (const auto r = node["radius"]) {
        try {
            const auto c = confidence_from_radius({scalar<double>(r, "radius")});
            if (c.essential_supremum)
                throw ScenarioError("radius: infinite radius is not a valid solver input",
                                    line_of(r));
            t.phi = c.phi;
        } catch (const DomainError& e) {
            throw ScenarioError(std::string("radius: ") + e.what(), line_of(r));
        }
    }
    read(node, "phi", t.phi);
    try {
        t.validate();
    } catch (const DomainError& e) {
        throw ScenarioError(std::string("terminal: ") + e.what(), line_of(node));
    }

    double mean_square = 1.0;
    if (const auto f = node["fading"]) {
        expect_map(f, "fading");
        reject_unknown(f, {"kind", "mean_square"}, "fading");
        if (const auto k = f["kind"]; k && scalar<std::string>(k, "kind") != "rayleigh")
            throw ScenarioError("fading: only rayleigh is supported", line_of(k));
        read(f, "mean_square", mean_square);
        if (!(mean_square > 0.0))
            throw ScenarioError("fading: mean_square must be positive", line_of(f));
    }

    TerminalGroup group = TerminalGroup::None;
    if (const auto g = node["group"]) {
        const auto v = scalar<std::string>(g, "group");
        if (v == "low") group = TerminalGroup::Low;
        else if (v == "high") group = TerminalGroup::High;
        else throw ScenarioError("group: expected low or high", line_of(g));
    }

    long count = 1;
    read(node, "count", count);
    if (count < 1) throw ScenarioError("count: must be at least 1", line_of(node["count"]));
    for (long k = 0; k < count; ++k) {
        sc.terminals.push_back(t);
        sc.fading.push_back(FadingModel::rayleigh(mean_square));
        sc.groups.push_back(group);
    }
}

Scenario parse_root(const YAML::Node& root) {
    expect_map(root, "scenario");
    reject_unknown(root, {"name", "solver", "output", "terminals", "sweep"}, "scenario");
    Scenario sc;
    read(root, "name", sc.name);
    if (const auto s = root["solver"]) parse_solver(s, sc.solver);
    if (const auto o = root["output"]) {
        expect_map(o, "output");
        reject_unknown(o, {"window", "instances", "learning_steps"}, "output");
        read(o, "window", sc.window);
        read(o, "instances", sc.instances);
        read(o, "learning_steps", sc.learning_steps);
        if (sc.window == 0) throw ScenarioError("output: window must be positive", line_of(o));
    }
    const auto terms = root["terminals"];
    if (!terms) throw ScenarioError("scenario: missing terminals", line_of(root));
    if (!terms.IsSequence() || terms.size() == 0)
        throw ScenarioError("terminals: expected a nonempty list", line_of(terms));
    for (const auto& t : terms) parse_terminal(t, sc);
    if (const auto s = root["sweep"]) {
        expect_map(s, "sweep");
        reject_unknown(s, {"phi_low", "phi_high"}, "sweep");
        if (!s["phi_low"] || !s["phi_high"])
            throw ScenarioError("sweep: needs phi_low and phi_high", line_of(s));
        SweepGrid grid{read_list(s["phi_low"], "phi_low"), read_list(s["phi_high"], "phi_high")};
        for (double v : grid.phi_low)
            if (!(v > 0.0 && v <= 1.0))
                throw ScenarioError("phi_low: values must lie in (0, 1]", line_of(s["phi_low"]));
        for (double v : grid.phi_high)
            if (!(v > 0.0 && v <= 1.0))
                throw ScenarioError("phi_high: values must lie in (0, 1]",
                                    line_of(s["phi_high"]));
        sc.sweep = std::move(grid);
    }
    sc.validate();
    return sc;
}

constexpr std::string_view kTable1 = R"(name: table1-3term
solver:
  p0: 15
  step_dual: 3.0e-5
  step_z: 0.05
  iterations: 200000
  seed: 1
  utility: sumrate
  z_resolve_period: 0
terminals:
  - {noise_var: 1.0, phi: 0.90, weight: 0.3333333333333333}
  - {noise_var: 2.0, phi: 0.85, weight: 0.3333333333333333}
  - {noise_var: 3.0, phi: 0.80, weight: 0.3333333333333333}
)";

constexpr std::string_view kToy8 = R"(name: table2-toy8
solver:
  p0: 40
  step_dual: 3.0e-5
  iterations: 200000
  seed: 1
  utility: pf
  z_resolve_period: 0
output:
  window: 200
terminals:
  - {noise_var: 1.0, phi: 0.8, weight: 0.125}
  - {noise_var: 2.0, phi: 0.8, weight: 0.125}
  - {noise_var: 3.0, phi: 0.8, weight: 0.125}
  - {noise_var: 4.0, phi: 0.8, weight: 0.125}
  - {noise_var: 5.0, phi: 0.8, weight: 0.125}
  - {noise_var: 6.0, phi: 0.8, weight: 0.125}
  - {noise_var: 7.0, phi: 0.8, weight: 0.125}
  - {noise_var: 8.0, phi: 0.8, weight: 0.125}
)";

constexpr std::string_view kRealistic8 = R"(name: table2-realistic8
solver:
  p0: 40
  step_dual: 3.0e-5
  iterations: 200000
  seed: 1
  utility: pf
  z_resolve_period: 0
output:
  window: 200
terminals:
  - {count: 6, noise_var: 1.0, phi: 0.40, weight: 0.125, group: low}
  - {count: 2, noise_var: 10.0, phi: 0.80, weight: 0.125, group: high}
sweep:
  phi_low: [0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 1.00]
  phi_high: [0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 1.00]
)";

} // namespace

void Scenario::validate() const {
    if (terminals.empty()) throw ScenarioError("scenario: no terminals");
    if (fading.size() != terminals.size() || groups.size() != terminals.size())
        throw ScenarioError("scenario: fading and group lists must match the terminals");
    try {
        for (const auto& t : terminals) t.validate();
        solver.validate();
    } catch (const DomainError& e) {
        throw ScenarioError(e.what());
    }
    if (window == 0) throw ScenarioError("output: window must be positive");
    if (solver.iterations == 0) throw ScenarioError("solver: iterations must be at least 1");
    if (sweep && (sweep->phi_low.empty() || sweep->phi_high.empty()))
        throw ScenarioError("sweep: grids must be nonempty");
}

Scenario Scenario::with_group_phi(double phi_low, double phi_high) const {
    Scenario out = *this;
    for (std::size_t i = 0; i < out.terminals.size(); ++i) {
        if (groups[i] == TerminalGroup::Low) out.terminals[i].phi = phi_low;
        else if (groups[i] == TerminalGroup::High) out.terminals[i].phi = phi_high;
    }
    out.validate();
    return out;
}

Scenario Scenario::with_phi(double phi) const {
    Scenario out = *this;
    for (auto& t : out.terminals) t.phi = phi;
    out.validate();
    return out;
}

Scenario parse_scenario(std::string_view yaml) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml));
    } catch (const YAML::ParserException& e) {
        throw ScenarioError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
    }
    return parse_root(root);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    Scenario sc = parse_scenario(text.str());
    if (sc.name.empty()) sc.name = path.stem().string();
    return sc;
}

std::vector<std::string> preset_names() {
    return {"table1-3term", "table2-toy8", "table2-realistic8"};
}

Scenario preset(std::string_view name) {
    if (name == "table1-3term") return parse_scenario(kTable1);
    if (name == "table2-toy8") return parse_scenario(kToy8);
    if (name == "table2-realistic8") return parse_scenario(kRealistic8);
    throw ScenarioError("unknown preset '" + std::string(name) + "'");
}

Scenario resolve_scenario(const std::string& name_or_path) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end())
        return preset(name_or_path);
    return load_scenario(name_or_path);
}

} // namespace robustpower
