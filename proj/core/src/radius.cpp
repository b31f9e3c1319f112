#include "robustpower/radius.hpp"

#include "robustpower/error.hpp"

#include <cmath>

namespace robustpower {

Confidence confidence_from_radius(AmbiguityRadius radius) {
    if (!(radius.epsilon >= 0.0)) throw DomainError("ambiguity radius must be >= 0");
    if (std::isinf(radius.epsilon)) return {0.0, true};
    return {std::exp(-radius.epsilon), false};
}

AmbiguityRadius radius_from_confidence(double phi) {
    if (!(phi > 0.0 && phi <= 1.0)) throw DomainError("confidence phi must lie in (0, 1]");
    return {-std::log(phi)};
}

} // namespace robustpower
