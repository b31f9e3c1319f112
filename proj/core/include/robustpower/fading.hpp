#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace robustpower {

/// Deterministic pseudo-random stream. One per run, never shared across runs.
using RandomStream = std::mt19937_64;

/// Uniform draw on [0, 1) built from the top 53 bits of the stream; platform independent.
double uniform01(RandomStream& stream);

enum class FadingKind { Rayleigh };

/**
 * Distribution of a fading magnitude h >= 0.
 *
 * Parameterized by the mean-square gain E[h^2]. Rayleigh fading gives h^2 an
 * exponential law with that mean, so F(h) = 1 - exp(-h^2 / mean_square).
 */
class FadingModel {
public:
    static FadingModel rayleigh(double mean_square = 1.0);

    FadingKind kind() const noexcept { return kind_; }
    double mean_square() const noexcept { return mean_square_; }

    double sample(RandomStream& stream) const;
    std::vector<double> sample(RandomStream& stream, std::size_t n) const;

    /// Exact CDF. Throws DomainError for h < 0. Accepts h = +inf.
    double cdf(double h) const;

    /// Distribution of the power gain h^2 evaluated at g >= 0.
    double gain_cdf(double g) const;

    friend bool operator==(const FadingModel&, const FadingModel&) = default;

private:
    FadingModel(FadingKind kind, double mean_square) : kind_(kind), mean_square_(mean_square) {}

    FadingKind kind_;
    double mean_square_;
};

} // namespace robustpower
