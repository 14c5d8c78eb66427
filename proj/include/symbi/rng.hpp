#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "symbi/types.hpp"

namespace symbi {

/// Small deterministic generator (splitmix64) so results are reproducible
/// across platforms and standard-library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Independent stream derived from a base seed and a stream index.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
        mix.next();
        return Rng(mix.next());
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Complex unit_circle() {
        double th = uniform(0.0, 2.0 * std::numbers::pi);
        return Complex(std::cos(th), std::sin(th));
    }

    /// Uniform on the closed disc of the given radius.
    Complex disc(double radius = 1.0) { return radius * std::sqrt(uniform()) * unit_circle(); }

    Complex gaussian() { return Complex(normal(), normal()); }

    CMat matrix_disc(Eigen::Index rows, Eigen::Index cols, double radius = 1.0) {
        CMat A(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = disc(radius);
        return A;
    }

    CMat matrix_gaussian(Eigen::Index rows, Eigen::Index cols) {
        CMat A(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = gaussian();
        return A;
    }

  private:
    std::uint64_t state_;
};

}  // namespace symbi
