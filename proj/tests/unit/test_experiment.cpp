#include "robustpower/cvar.hpp"
#include "robustpower/error.hpp"
#include "robustpower/experiment.hpp"
#include "robustpower/tables.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace robustpower;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("rp_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Scenario small_table1(std::size_t iterations = 20000) {
    auto sc = preset("table1-3term");
    sc.solver.iterations = iterations;
    sc.solver.step_dual = 3e-4;
    return sc;
}

double variance(const std::vector<double>& x) {
    const double m = sample_mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / double(x.size() - 1);
}

} // namespace

TEST_SUITE("experiment") {

TEST_CASE("tables round trip") {
    const auto dir = fresh_dir("tables");
    fs::create_directories(dir);
    TextTable t({"a", "b"});
    t.add_row({1.5, -2.0});
    t.add_row("x", {0.125});
    t.add_blank_line();
    t.add_row({1e-30, std::nan("")});
    t.write(dir / "t.txt");
    const auto r = read_table(dir / "t.txt");
    CHECK(r.header == std::vector<std::string>{"a", "b"});
    REQUIRE(r.cells.size() == 3);
    CHECK(r.number(0, 1) == -2.0);
    CHECK(std::isnan(r.number(1, 0)));
    CHECK(r.number(2, 0) == 1e-30);
    CHECK(std::isnan(r.number(2, 1)));
    CHECK(format_number(0.1) == "0.1");
    CHECK_THROWS(t.add_row({1.0}));
    CHECK_THROWS(read_table(dir / "missing.txt"));
}

TEST_CASE("run writes every table with the expected columns") {
    const auto dir = fresh_dir("run");
    const auto sc = small_table1();
    const auto stats = run_scenario(sc, dir);

    const auto inst = read_table(dir / "p_instances.txt");
    CHECK(inst.header == std::vector<std::string>{"time", "p1", "p2", "p3", "sum_p"});
    CHECK(inst.cells.size() == sc.instances);
    CHECK(inst.number(inst.cells.size() - 1, 0) == double(sc.solver.iterations));

    for (const auto& [file, x, stem] :
         {std::tuple{"p_CDF.txt", "power", "cdf_p"}, std::tuple{"rate_CDF.txt", "rate", "cdf_rate"}}) {
        const auto t = read_table(dir / file);
        CHECK(t.header[0] == x);
        for (int i = 1; i <= 3; ++i) {
            const auto y = t.numbers(std::string(stem) + std::to_string(i));
            for (std::size_t k = 1; k < y.size(); ++k) REQUIRE(y[k] >= y[k - 1]);
            CHECK(y.front() >= 0.0);
            CHECK(y.back() == 1.0);
        }
    }

    const auto learn = read_table(dir / "rate_instances.txt");
    CHECK(learn.header[0] == "time_r");
    CHECK(learn.column("cum_r3") == 3);
    CHECK(learn.column("sum_cum_r") == 4);
    CHECK(learn.cells.size() == sc.learning_steps);

    const auto summary = read_table(dir / "summary.txt");
    REQUIRE(summary.cells.size() == 4);
    CHECK(summary.cells[3][0] == "total");
    CHECK(summary.number(3, summary.column("cvar_p")) ==
          doctest::Approx(stats.sum_cvar_p).epsilon(1e-10));
    CHECK(summary.number(0, summary.column("z")) ==
          doctest::Approx(stats.mean_z[0]).epsilon(1e-10));
}

TEST_CASE("moving average follows the window recurrence") {
    const auto dir = fresh_dir("window");
    auto sc = small_table1(3000);
    sc.window = 25;
    sc.learning_steps = 3000;
    sc.solver.step_dual = 3e-3; // move off the all-zero start quickly
    run_scenario(sc, dir);
    const auto t = read_table(dir / "rate_instances.txt");
    const auto w = t.numbers("window");
    for (int i = 1; i <= 3; ++i) {
        const auto cum = t.numbers("cum_r" + std::to_string(i));
        const auto raw = t.numbers("r" + std::to_string(i));
        for (std::size_t k = 0; k < cum.size(); ++k) {
            CHECK(w[k] == double(std::min<std::size_t>(k + 1, 25)));
            double s = 0.0;
            for (std::size_t j = k + 1 - std::size_t(w[k]); j <= k; ++j) s += raw[j];
            REQUIRE(cum[k] == doctest::Approx(s / w[k]).epsilon(1e-9));
        }
    }
}

TEST_CASE("outputs are byte-identical for the same scenario and seed") {
    const auto a = fresh_dir("same_a"), b = fresh_dir("same_b");
    run_scenario(small_table1(5000), a);
    run_scenario(small_table1(5000), b);
    for (const auto* f :
         {"p_instances.txt", "p_CDF.txt", "rate_CDF.txt", "rate_instances.txt", "summary.txt"})
        CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("robust sum_p column varies less than the risk-neutral one") {
    const auto robust = fresh_dir("robust"), neutral = fresh_dir("neutral");
    auto sc = small_table1(40000);
    sc.instances = 2000;
    run_scenario(sc.with_phi(0.8), robust);
    run_scenario(sc.with_phi(1.0), neutral);
    const auto vr = variance(read_table(robust / "p_instances.txt").numbers("sum_p"));
    const auto vn = variance(read_table(neutral / "p_instances.txt").numbers("sum_p"));
    CHECK(vr < vn);
}

TEST_CASE("budget is active on the three-terminal preset") {
    const auto stats = simulate(small_table1(60000));
    CHECK(stats.sum_cvar_p / 15.0 == doctest::Approx(1.0).epsilon(0.03));
    CHECK(stats.utility > 0.0);
    CHECK(stats.utility_se > 0.0);
}

TEST_CASE("degenerate sweep equals the single run") {
    auto sc = preset("table2-realistic8");
    sc.solver.iterations = 5000;
    sc.solver.step_dual = 3e-4;
    sc.sweep = SweepGrid{{0.7}, {0.9}};
    const auto dir = fresh_dir("sweep1");
    const auto points = sweep_surface(sc, dir, 2);
    REQUIRE(points.size() == 1);
    const auto single = simulate(sc.with_group_phi(0.7, 0.9));
    CHECK(points[0].rate == single.average_rate);
    const auto t = read_table(dir / "surface.txt");
    CHECK(t.header == std::vector<std::string>{"x", "y", "z"});
    CHECK(t.number(0, 2) == doctest::Approx(single.average_rate).epsilon(1e-11));
}

TEST_CASE("sweep grid is phi_low-major and thread count does not matter") {
    auto sc = preset("table2-realistic8");
    sc.solver.iterations = 2000;
    sc.solver.step_dual = 3e-4;
    sc.sweep = SweepGrid{{0.8, 1.0}, {0.6, 0.9, 1.0}};
    const auto one = compute_surface(sc, 1);
    const auto many = compute_surface(sc, 4);
    REQUIRE(one.size() == 6);
    CHECK(one[1].phi_low == 0.8);
    CHECK(one[1].phi_high == 0.9);
    for (std::size_t k = 0; k < one.size(); ++k) CHECK(one[k].rate == many[k].rate);
}

TEST_CASE("sweep errors carry the grid point") {
    auto sc = preset("table2-realistic8");
    sc.solver.iterations = 2000;
    sc.solver.divergence_mu = 1e-3; // every run trips the detector
    sc.sweep = SweepGrid{{0.8}, {0.9}};
    try {
        compute_surface(sc, 1);
        FAIL("expected SweepError");
    } catch (const SweepError& e) {
        CHECK(e.phi_low() == 0.8);
        CHECK(e.phi_high() == 0.9);
        CHECK(std::string(e.what()).find("phi_low = 0.8") != std::string::npos);
    }
    auto none = preset("table1-3term");
    CHECK_THROWS_AS(compute_surface(none), ScenarioError);
}

}
