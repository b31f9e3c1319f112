#include "robustpower/error.hpp"
#include "robustpower/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace robustpower;

namespace {

int error_line(std::string_view yaml) {
    try {
        parse_scenario(yaml);
    } catch (const ScenarioError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST_SUITE("scenario") {

TEST_CASE("table1-3term preset") {
    const auto sc = preset("table1-3term");
    CHECK(sc.solver.p0 == 15.0);
    CHECK(sc.solver.step_dual == 3e-5);
    CHECK(sc.solver.utility == UtilityType::Sumrate);
    REQUIRE(sc.size() == 3);
    const double s2[] = {1.0, 2.0, 3.0};
    const double phi[] = {0.9, 0.85, 0.8};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(sc.terminals[i].noise_var == s2[i]);
        CHECK(sc.terminals[i].phi == phi[i]);
        CHECK(sc.terminals[i].weight == doctest::Approx(1.0 / 3));
        CHECK(sc.fading[i].mean_square() == 1.0);
    }
    CHECK_FALSE(sc.sweep.has_value());
}

TEST_CASE("toy8 preset") {
    const auto sc = preset("table2-toy8");
    CHECK(sc.solver.p0 == 40.0);
    REQUIRE(sc.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(sc.terminals[i].noise_var == double(i + 1));
        CHECK(sc.terminals[i].phi == 0.8);
        CHECK(sc.terminals[i].weight == 0.125);
    }
    CHECK(sc.window == 200);
}

TEST_CASE("realistic8 preset") {
    const auto sc = preset("table2-realistic8");
    CHECK(sc.solver.p0 == 40.0);
    CHECK(sc.solver.step_dual == 3e-5);
    REQUIRE(sc.size() == 8);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(sc.terminals[i].noise_var == 1.0);
        CHECK(sc.terminals[i].phi == 0.4);
        CHECK(sc.groups[i] == TerminalGroup::Low);
    }
    for (std::size_t i = 6; i < 8; ++i) {
        CHECK(sc.terminals[i].noise_var == 10.0);
        CHECK(sc.terminals[i].phi == 0.8);
        CHECK(sc.groups[i] == TerminalGroup::High);
    }
    REQUIRE(sc.sweep.has_value());
    CHECK(sc.sweep->phi_low.back() == 1.0);
    const auto moved = sc.with_group_phi(0.7, 0.9);
    CHECK(moved.terminals[0].phi == 0.7);
    CHECK(moved.terminals[7].phi == 0.9);
}

TEST_CASE("preset names resolve") {
    for (const auto& n : preset_names()) CHECK(preset(n).name == n);
    CHECK_THROWS_AS(preset("nope"), ScenarioError);
}

TEST_CASE("full grammar") {
    const auto sc = parse_scenario(R"(name: custom
solver:
  p0: 12
  step_dual: 1e-4
  step_z: 0.5
  iterations: 5000
  seed: 17
  mode: model-free
  utility: pf
  schedule: inverse-sqrt
  z_resolve_period: 3
  z_resolve_tolerance: 0.02
  mc_samples: 1000
output: {window: 50, instances: 20, learning_steps: 100}
terminals:
  - {noise_var: 2, radius: 0.6931471805599453, fading: {kind: rayleigh, mean_square: 2}}
  - {count: 2, noise_var: 4, phi: 0.7, weight: 0.5, group: high}
sweep: {phi_low: [0.5], phi_high: [0.6, 1.0]}
)");
    CHECK(sc.name == "custom");
    CHECK(sc.solver.mode == VarLevelMode::ModelFree);
    CHECK(sc.solver.utility == UtilityType::ProportionalFairness);
    CHECK(sc.solver.schedule == StepSchedule::InverseSqrt);
    CHECK(sc.solver.seed == 17);
    CHECK(sc.solver.mc_samples == 1000);
    CHECK(sc.window == 50);
    CHECK(sc.instances == 20);
    REQUIRE(sc.size() == 3);
    CHECK(sc.terminals[0].phi == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sc.fading[0].mean_square() == 2.0);
    CHECK(sc.terminals[2].weight == 0.5);
    CHECK(sc.groups[1] == TerminalGroup::High);
    CHECK(sc.sweep->phi_high.size() == 2);
}

TEST_CASE("errors name the line") {
    CHECK(error_line("terminals:\n  - {noise_var: 1\n") > 0);
    CHECK(error_line("terminals:\n  - noise_var: 1\n  - noise_var: -2\n") == 3);
    CHECK(error_line("terminals:\n  - noise_var: 1\n    phi: 1.5\n") == 2);
    CHECK(error_line("solver:\n  p0: abc\nterminals:\n  - noise_var: 1\n") == 2);
    CHECK(error_line("solver:\n  bogus: 1\nterminals:\n  - noise_var: 1\n") == 2);
    CHECK(error_line("name: x\n") == 1);
    CHECK(error_line("terminals:\n  - {noise_var: 1}\nsweep:\n  phi_low: []\n  phi_high: [1]\n") ==
          4);
    CHECK(error_line("terminals:\n  - {noise_var: 1, phi: 0.5, radius: 0.1}\n") == 2);
    CHECK(error_line("terminals:\n  - {noise_var: 1, radius: .inf}\n") == 2);
    CHECK(error_line("solver: {mode: sideways}\nterminals:\n  - {noise_var: 1}\n") == 1);
}

TEST_CASE("load from file") {
    const auto path = std::filesystem::temp_directory_path() / "rp_scenario_test.yaml";
    {
        std::ofstream out(path);
        out << "terminals:\n  - {noise_var: 1.5, phi: 0.6}\n";
    }
    const auto sc = load_scenario(path);
    CHECK(sc.name == "rp_scenario_test");
    CHECK(sc.terminals[0].noise_var == 1.5);
    CHECK(resolve_scenario(path.string()).size() == 1);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_scenario(path), ScenarioError);
}

}
