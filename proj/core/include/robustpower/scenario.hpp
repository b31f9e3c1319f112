#pragma once

#include "robustpower/fading.hpp"
#include "robustpower/policy.hpp"
#include "robustpower/solver.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace robustpower {

/// Sweep groups: terminals tagged low take phi_low, high take phi_high.
enum class TerminalGroup { None, Low, High };

struct SweepGrid {
    std::vector<double> phi_low;
    std::vector<double> phi_high;
};

struct Scenario {
    std::string name;
    std::vector<TerminalConfig> terminals;
    std::vector<FadingModel> fading; ///< one per terminal
    std::vector<TerminalGroup> groups;
    SolverConfig solver;
    std::size_t window = 200;        ///< moving-average length for rate_instances
    std::size_t instances = 100;     ///< trailing iterations written to p_instances
    std::size_t learning_steps = 500;
    std::optional<SweepGrid> sweep;

    std::size_t size() const noexcept { return terminals.size(); }

    /// Throws ScenarioError describing the first invalid field.
    void validate() const;

    /// Copy with phi replaced per group.
    Scenario with_group_phi(double phi_low, double phi_high) const;
    /// Copy with every terminal at the same phi.
    Scenario with_phi(double phi) const;
};

/**
 * Reads a YAML scenario. Errors carry the 1-based line of the offending node.
 *
 *   name: text
 *   solver: {p0, step_dual, step_z, iterations, seed, mode, utility,
 *            schedule, z_resolve_period, z_resolve_tolerance, mc_samples}
 *   output: {window, instances, learning_steps}
 *   terminals:
 *     - {noise_var, phi | radius, weight, count, group, fading: {kind, mean_square}}
 *   sweep: {phi_low: [..], phi_high: [..]}
 */
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(std::string_view yaml);

std::vector<std::string> preset_names();
/// Throws ScenarioError for an unknown name.
Scenario preset(std::string_view name);

/// A preset name or a path to a scenario file.
Scenario resolve_scenario(const std::string& name_or_path);

} // namespace robustpower
