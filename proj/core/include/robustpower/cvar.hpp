#pragma once

#include <span>

namespace robustpower {

// Empirical Conditional Value-at-Risk of a cost sample. phi is the tail mass:
// phi = 1 is the mean, phi -> 0 approaches the maximum. All functions throw
// DomainError on an empty batch or phi outside (0, 1].

/// z + (1/phi) * mean((x - z)_+), the Rockafellar-Uryasev objective.
double cvar_objective(double z, std::span<const double> batch, double phi);

/// Minimum of cvar_objective over z, via the order-statistic formula with a
/// fractional weight on the boundary sample.
double empirical_cvar(std::span<const double> batch, double phi);

/// Largest sample value v with at least a phi fraction of the batch >= v.
double value_at_risk(std::span<const double> batch, double phi);

double sample_mean(std::span<const double> batch);

} // namespace robustpower
