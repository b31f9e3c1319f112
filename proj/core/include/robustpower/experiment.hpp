#pragma once

#include "robustpower/scenario.hpp"
#include "robustpower/solver.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace robustpower {

/// Converged statistics over the tail window (final 20% of iterations).
struct RunStats {
    std::vector<double> mean_p;
    std::vector<double> mean_rate;
    std::vector<double> mean_z;
    std::vector<double> cvar_p;   ///< empirical CVaR of the tail powers at each phi_i
    double sum_cvar_p = 0.0;
    double sum_mean_p = 0.0;
    double var_sum_p = 0.0;       ///< sample variance of sum_i p_i
    double average_rate = 0.0;    ///< mean over terminals of mean_rate
    double utility = 0.0;         ///< network utility at mean_rate
    double utility_se = 0.0;      ///< batch-means standard error of the utility estimate
    std::size_t tail_samples = 0;
    RunOutcome outcome;
};

/// Runs the scenario without writing anything.
RunStats simulate(const Scenario& scenario, const RunHooks& hooks = {});

/**
 * Runs the scenario and writes p_instances.txt, p_CDF.txt, rate_CDF.txt,
 * rate_instances.txt and summary.txt into out_dir (created if needed).
 */
RunStats run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

struct SurfacePoint {
    double phi_low = 1.0;
    double phi_high = 1.0;
    double rate = 0.0; ///< tail-average rate per terminal
};

/// A grid point failed; carries its coordinates.
class SweepError : public std::runtime_error {
public:
    SweepError(double phi_low, double phi_high, const std::string& what);
    double phi_low() const noexcept { return phi_low_; }
    double phi_high() const noexcept { return phi_high_; }

private:
    double phi_low_;
    double phi_high_;
};

/**
 * One run per (phi_low, phi_high) grid point, phi_low-major. Every point uses
 * the scenario seed, so grid points share their fading draws. threads = 0
 * uses the hardware concurrency.
 */
std::vector<SurfacePoint> compute_surface(const Scenario& scenario, unsigned threads = 0);

/// compute_surface plus surface.txt (columns x = phi_low, y = phi_high, z = rate).
std::vector<SurfacePoint> sweep_surface(const Scenario& scenario,
                                        const std::filesystem::path& out_dir,
                                        unsigned threads = 0);

} // namespace robustpower
