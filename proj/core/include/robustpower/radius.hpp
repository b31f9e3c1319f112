#pragma once

namespace robustpower {

/// Log-likelihood-ratio radius of the density-ratio ambiguity ball, in nats.
struct AmbiguityRadius {
    double epsilon = 0.0;
};

struct Confidence {
    double phi = 1.0;
    /// Set for epsilon = +inf: the ball covers every distribution and the
    /// risk measure degenerates to the essential supremum (phi = 0). Not a
    /// valid solver input.
    bool essential_supremum = false;
};

/// phi = exp(-epsilon). Throws DomainError for negative or NaN epsilon.
Confidence confidence_from_radius(AmbiguityRadius radius);

/// epsilon = log(1/phi). Throws DomainError for phi outside (0, 1].
AmbiguityRadius radius_from_confidence(double phi);

} // namespace robustpower
