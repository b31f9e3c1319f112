#include "robustpower/fading.hpp"

#include "robustpower/error.hpp"

#include <cmath>

namespace robustpower {

double uniform01(RandomStream& stream) {
    return static_cast<double>(stream() >> 11) * 0x1.0p-53;
}

FadingModel FadingModel::rayleigh(double mean_square) {
    if (!(mean_square > 0.0) || !std::isfinite(mean_square))
        throw DomainError("fading mean_square must be positive and finite");
    return FadingModel(FadingKind::Rayleigh, mean_square);
}

double FadingModel::sample(RandomStream& stream) const {
    // h^2 ~ Exp(mean_square); 1 - u lies in (0, 1] so the log is finite.
    const double u = uniform01(stream);
    return std::sqrt(-mean_square_ * std::log1p(-u));
}

std::vector<double> FadingModel::sample(RandomStream& stream, std::size_t n) const {
    std::vector<double> out(n);
    for (auto& h : out) h = sample(stream);
    return out;
}

double FadingModel::cdf(double h) const {
    if (!(h >= 0.0)) throw DomainError("fading cdf requires h >= 0");
    return gain_cdf(h * h);
}

double FadingModel::gain_cdf(double g) const {
    if (!(g >= 0.0)) throw DomainError("fading gain cdf requires h^2 >= 0");
    return -std::expm1(-g / mean_square_);
}

} // namespace robustpower
