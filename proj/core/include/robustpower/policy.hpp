#pragma once

#include <vector>

namespace robustpower {

/// Static description of one point-to-point link.
struct TerminalConfig {
    double noise_var = 1.0; ///< sigma^2 > 0
    double phi = 1.0;       ///< CVaR confidence in (0, 1]
    double weight = 1.0;    ///< utility weight > 0

    /// Throws DomainError naming the offending field.
    void validate() const;
};

/// Lagrange multipliers: one per rate constraint plus the shared power multiplier.
struct DualState {
    std::vector<double> lambda;
    double mu = 1.0;
};

/// log(1 + p h^2 / sigma^2), natural log.
double rate(double power, double h, double noise_var);

/// Per-terminal power subproblem value lambda*rate(p) - (mu/phi)(p - z)_+.
double power_objective(double power, double h, double lambda, double mu, double phi,
                       double noise_var, double z);

/**
 * Closed-form maximizer of power_objective over p >= 0:
 *
 *   p* = max{ (lambda*phi/mu - sigma^2/h^2)_+, (z)_+ }
 *
 * lambda = mu = 0 gives 0, lambda = 0 < mu gives (z)_+. h = 0 drops the
 * waterfilling term. Throws UnboundedError when lambda > 0 and mu = 0.
 */
double optimal_power(double h, double lambda, double mu, double phi, double noise_var, double z);

/// Waterfilling part (lambda*phi/mu - sigma^2/h^2)_+ alone; 0 when h = 0.
double waterfilling_power(double h, double lambda, double mu, double phi, double noise_var);

/**
 * Heaviside selection at the kink p* = z:
 * C = (lambda*phi/mu) h^2 / (sigma^2 + p* h^2). Lies in [0, 1] whenever p* is
 * at or above the waterfilling term. Throws DomainError for mu = 0.
 */
double c_parameter(double p_star, double h, double lambda, double mu, double phi,
                   double noise_var);

} // namespace robustpower
