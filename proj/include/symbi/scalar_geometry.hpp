#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "symbi/types.hpp"

namespace symbi {

/// A point (s, p) in C^2, the scalar carrier for membership tests against the
/// symmetrized bidisc and its boundary pieces.
struct PointPair {
    Complex s{0.0, 0.0};
    Complex p{0.0, 0.0};
};

enum class Region { OPEN_G, DIST_BOUNDARY, GAMMA_NOT_B, OUTSIDE };

inline const char* to_string(Region r) {
    switch (r) {
        case Region::OPEN_G: return "OPEN_G";
        case Region::DIST_BOUNDARY: return "DIST_BOUNDARY";
        case Region::GAMMA_NOT_B: return "GAMMA_NOT_B";
        case Region::OUTSIDE: return "OUTSIDE";
    }
    return "?";
}

/// The four equivalent membership characterizations of the closed symmetrized
/// bidisc Gamma, tested independently and cross-checked in the suite.
enum class GammaMethod { ROOTS, MOEBIUS_II, SUM_III, BETA_IV };
enum class BGammaMethod { MODULUS, NEW_LEMMA };

struct MembershipReport {
    Region region = Region::OUTSIDE;
    std::optional<Complex> beta_witness;
    std::pair<double, double> root_moduli{0.0, 0.0};
    std::map<std::string, bool> per_method_verdicts;
};

namespace scalar {

/// Every inequality |expr| <= c is tested as <= c + kBand and every equality
/// as |difference| <= kBand, so points constructed from unimodular fibers
/// classify onto the distinguished boundary despite rounding.
inline constexpr double kBand = 1e-9;

}  // namespace scalar

/// pi(z1, z2) = (z1 + z2, z1 z2).
inline PointPair symmetrize_point(Complex z1, Complex z2) { return {z1 + z2, z1 * z2}; }

/// The two ordered preimages of (s, p) under the symmetrization map: the roots
/// of z^2 - s z + p = 0, computed with the cancellation-free quadratic form.
inline std::pair<std::pair<Complex, Complex>, std::pair<Complex, Complex>> fibers(
    const PointPair& pt) {
    Complex s = pt.s, p = pt.p;
    Complex sq = std::sqrt(s * s - 4.0 * p);
    Complex q = (std::abs(s + sq) >= std::abs(s - sq)) ? 0.5 * (s + sq) : 0.5 * (s - sq);
    Complex z1 = q;
    Complex z2 = (q == Complex(0.0, 0.0)) ? Complex(0.0, 0.0) : p / q;
    return {{z1, z2}, {z2, z1}};
}

namespace detail {

inline std::pair<double, double> root_moduli(const PointPair& pt) {
    auto [fw, bw] = fibers(pt);
    (void)bw;
    return {std::abs(fw.first), std::abs(fw.second)};
}

}  // namespace detail

/// Witness for the beta characterization: the unique beta with
/// s = beta + conj(beta) p when |p| < 1. (The conjugate-convention witness has
/// the same modulus, so one value serves both formulations.)
inline std::optional<Complex> gamma_beta_witness(const PointPair& pt) {
    double ap = std::abs(pt.p);
    if (ap >= 1.0 - scalar::kBand) return std::nullopt;
    return (pt.s - std::conj(pt.s) * pt.p) / (1.0 - ap * ap);
}

/// Membership of (s, p) in the closed symmetrized bidisc, by the selected
/// characterization.
inline bool in_gamma(const PointPair& pt, GammaMethod method) {
    const Complex s = pt.s, p = pt.p;
    const double band = scalar::kBand;
    switch (method) {
        case GammaMethod::ROOTS: {
            auto [m1, m2] = detail::root_moduli(pt);
            return std::max(m1, m2) <= 1.0 + band;
        }
        case GammaMethod::MOEBIUS_II:
            return std::abs(s - std::conj(s) * p) + std::norm(p) <= 1.0 + band &&
                   std::abs(s) <= 2.0 + band;
        case GammaMethod::SUM_III:
            return 2.0 * std::abs(s - std::conj(s) * p) + std::abs(s * s - 4.0 * p) +
                       std::norm(s) <=
                   4.0 + band;
        case GammaMethod::BETA_IV: {
            double ap = std::abs(p);
            if (ap > 1.0 + band) return false;
            if (ap >= 1.0 - band)  // limiting case: s = conj(s) p and |s| <= 2
                return std::abs(s - std::conj(s) * p) <= band && std::abs(s) <= 2.0 + band;
            Complex beta = (s - std::conj(s) * p) / (1.0 - ap * ap);
            return std::abs(beta) <= 1.0 + band;
        }
    }
    return false;
}

/// Membership in the distinguished boundary bGamma.
inline bool in_b_gamma(const PointPair& pt, BGammaMethod method) {
    const Complex s = pt.s, p = pt.p;
    const double band = scalar::kBand;
    switch (method) {
        case BGammaMethod::MODULUS:
            return in_gamma(pt, GammaMethod::ROOTS) && std::abs(std::abs(p) - 1.0) <= band;
        case BGammaMethod::NEW_LEMMA:
            return std::abs(s - std::conj(s) * p) <= band &&
                   std::abs(std::abs(s * s - 4.0 * p) + std::norm(s) - 4.0) <= band;
    }
    return false;
}

/// Membership in Gamma minus its distinguished boundary.
inline bool in_gamma_minus_b(const PointPair& pt) {
    const double band = scalar::kBand;
    return std::abs(std::abs(pt.p) - 1.0) > band &&
           std::abs(pt.s - std::conj(pt.s) * pt.p) + std::norm(pt.p) <= 1.0 + band;
}

/// Membership in the closed symmetrized half-bidisc: (s, p) scaled by (2, 4)
/// must land in Gamma.
inline bool in_half_gamma(const PointPair& pt) {
    return in_gamma({2.0 * pt.s, 4.0 * pt.p}, GammaMethod::ROOTS);
}

/// Full region classification with every per-method verdict recorded.
inline MembershipReport classify(const PointPair& pt) {
    MembershipReport rep;
    rep.root_moduli = detail::root_moduli(pt);
    bool roots = in_gamma(pt, GammaMethod::ROOTS);
    rep.per_method_verdicts["roots"] = roots;
    rep.per_method_verdicts["moebius_ii"] = in_gamma(pt, GammaMethod::MOEBIUS_II);
    rep.per_method_verdicts["sum_iii"] = in_gamma(pt, GammaMethod::SUM_III);
    rep.per_method_verdicts["beta_iv"] = in_gamma(pt, GammaMethod::BETA_IV);
    rep.per_method_verdicts["b_gamma_modulus"] = in_b_gamma(pt, BGammaMethod::MODULUS);
    rep.per_method_verdicts["b_gamma_new_lemma"] = in_b_gamma(pt, BGammaMethod::NEW_LEMMA);
    rep.per_method_verdicts["gamma_minus_b"] = in_gamma_minus_b(pt);
    rep.per_method_verdicts["half_gamma"] = in_half_gamma(pt);

    double mx = std::max(rep.root_moduli.first, rep.root_moduli.second);
    if (!roots) {
        rep.region = Region::OUTSIDE;
    } else if (std::abs(std::abs(pt.p) - 1.0) <= scalar::kBand) {
        rep.region = Region::DIST_BOUNDARY;
    } else if (mx < 1.0 - scalar::kBand) {
        rep.region = Region::OPEN_G;
    } else {
        rep.region = Region::GAMMA_NOT_B;
    }
    if (roots) {
        if (auto beta = gamma_beta_witness(pt); beta && std::abs(*beta) <= 1.0 + scalar::kBand)
            rep.beta_witness = beta;
    }
    return rep;
}

}  // namespace symbi
