#pragma once

// Brute-force reference computations. They share no code path with the
// closed-form policy solver, the value-at-risk bisection or the dual descent
// they are used to check.

#include "robustpower/policy.hpp"
#include "robustpower/var_levels.hpp"

#include <functional>
#include <span>
#include <vector>

namespace robustpower::oracle {

struct Maximum {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
Maximum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                           double tol = 1e-12);

/// Maximum of the per-terminal power objective over p in [0, p_max] by golden section.
/// Requires lambda, mu > 0. p_max defaults to 10*lambda*phi/mu + (z)_+ + 1.
Maximum power_objective_max(double h, double lambda, double mu, double phi, double noise_var,
                            double z, double p_max = -1.0);

/**
 * Sample average of the z-subproblem objective
 *   -mu z + mean_j[ lambda r(p*_j) - (mu/phi)(p*_j - z)_+ ],  p*_j = p*(h_j; z),
 * over fixed fading draws `h`.
 */
double z_objective(double z, const VarLevelParams& params, std::span<const double> h);

/// Central finite difference of z_objective.
double z_objective_slope(double z, const VarLevelParams& params, std::span<const double> h,
                         double delta);

/**
 * Maximizer of z_objective over the grid {k * step : k >= 0}. The sampled
 * objective is concave in z, so its grid values form a concave sequence: an
 * integer golden search locates the best grid point, and a scan of the
 * neighbouring points confirms it.
 */
double z_grid_argmax(const VarLevelParams& params, std::span<const double> h, double step);

struct WaterfillingReference {
    double mu = 0.0;                 ///< water level is weight_i / mu
    std::vector<double> mean_power;  ///< E[p_i] under the reference policy
};

/**
 * Classical ergodic waterfilling p_i = (w_i/mu - sigma_i^2/h^2)_+ with mu
 * found by bisection so that sum_i E[p_i] = p0. h_draws[i] are the fading
 * samples of terminal i.
 */
WaterfillingReference waterfilling_reference(std::span<const TerminalConfig> terminals,
                                             double p0,
                                             const std::vector<std::vector<double>>& h_draws);

} // namespace robustpower::oracle
