#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "symbi/rng.hpp"
#include "symbi/types.hpp"

namespace symbi {

/// Largest singular value of a (possibly rectangular) matrix.
inline double op_norm(const CMat& A) {
    require_finite(A, "op_norm");
    if (A.size() == 0) return 0.0;
    if (A.rows() == 1 && A.cols() == 1) return std::abs(A(0, 0));
    if (A.rows() == 1 || A.cols() == 1) return A.norm();
    Eigen::JacobiSVD<CMat> svd(A);
    return svd.singularValues()(0);
}

/// Max |lambda| over the eigenvalues of a square matrix.
inline double spectral_radius(const CMat& A) {
    require_square(A, "spectral_radius");
    require_finite(A, "spectral_radius");
    if (A.rows() == 1) return std::abs(A(0, 0));
    Eigen::ComplexEigenSolver<CMat> es(A, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace detail {

/// Extremal eigenvalues of a Hermitian matrix; closed forms for n <= 2.
inline std::pair<double, double> hermitian_extremes(const CMat& H) {
    const Eigen::Index n = H.rows();
    if (n == 1) {
        double v = H(0, 0).real();
        return {v, v};
    }
    if (n == 2) {
        double a = H(0, 0).real(), d = H(1, 1).real();
        double mid = 0.5 * (a + d);
        double rad = std::hypot(0.5 * (a - d), std::abs(H(0, 1)));
        return {mid - rad, mid + rad};
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(H, Eigen::EigenvaluesOnly);
    const auto& w = es.eigenvalues();
    return {w(0), w(n - 1)};
}

inline double lambda_max(const CMat& H) { return hermitian_extremes(H).second; }
inline double lambda_min(const CMat& H) { return hermitian_extremes(H).first; }

}  // namespace detail

/// Numerical radius w(A) = sup over unit vectors of |<Av, v>|.
///
/// Evaluates lambda_max((e^{i th} A + e^{-i th} A*)/2) on a 1024-point grid,
/// then golden-section refines every grid local maximum within a curvature-safe
/// band of the best to bracket width 1e-12. The theta-function is Lipschitz
/// with constant <= ||A||, so the result is accurate to well within 1e-8.
inline double numerical_radius(const CMat& A) {
    require_square(A, "numerical_radius");
    require_finite(A, "numerical_radius");
    const Eigen::Index n = A.rows();
    if (n == 1) return std::abs(A(0, 0));

    const CMat Astar = A.adjoint();
    auto eval = [&](double th) {
        Complex c(std::cos(th), std::sin(th));
        CMat H = 0.5 * (c * A + std::conj(c) * Astar);
        return detail::lambda_max(H);
    };

    constexpr int kGrid = 1024;
    const double h = 2.0 * std::numbers::pi / kGrid;
    std::vector<double> g(kGrid);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        g[i] = eval(i * h);
        best = std::max(best, g[i]);
    }

    const double norm_a = op_norm(A);
    const double band = std::max(1e-6, norm_a * h * h);

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 0; i < kGrid; ++i) {
        double prev = g[(i + kGrid - 1) % kGrid];
        double next = g[(i + 1) % kGrid];
        if (g[i] < prev || g[i] < next || g[i] < best - band) continue;
        // golden-section maximization on the lobe around grid point i
        double lo = i * h - h, hi = i * h + h;
        double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
        double f1 = eval(x1), f2 = eval(x2);
        while (hi - lo > 1e-12) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = eval(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = eval(x1);
            }
            best = std::max(best, std::max(f1, f2));
        }
    }
    return best;
}

/// Unique PSD square root of a Hermitian PSD matrix. Eigenvalues in
/// [-assert_tol, 0) are clamped to zero.
inline CMat psd_sqrt(const CMat& A, const Tolerances& tol = {}) {
    tol.validate();
    require_square(A, "psd_sqrt");
    require_finite(A, "psd_sqrt");
    const double scale = 1.0 + op_norm(A);
    if (op_norm(A - A.adjoint()) > tol.assert_tol * scale)
        throw NotHermitian("psd_sqrt: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (A + A.adjoint()));
    RVec w = es.eigenvalues();
    if (w.minCoeff() < -tol.assert_tol)
        throw NotPSD("psd_sqrt: eigenvalue " + std::to_string(w.minCoeff()) +
                     " below -assert_tol");
    RVec ws(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) ws(i) = std::sqrt(std::max(0.0, w(i)));
    return es.eigenvectors() * ws.asDiagonal() * es.eigenvectors().adjoint();
}

namespace detail {

/// Cluster complex values whose relative distance is below rel; returns
/// per-value cluster ids, numbered by lexicographic (re, im) order of the
/// cluster representatives for a deterministic branch-sign convention.
inline std::vector<int> cluster_values(const CVec& vals, double rel = 1e-8) {
    const Eigen::Index n = vals.size();
    std::vector<int> parent(n);
    for (Eigen::Index i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double sep = std::abs(vals(i) - vals(j));
            double sc = 1.0 + std::max(std::abs(vals(i)), std::abs(vals(j)));
            if (sep <= rel * sc) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
        }
    // representative of each cluster = lexicographically smallest member
    std::vector<Complex> rep(n, Complex(0, 0));
    std::vector<bool> seen(n, false);
    auto lex_less = [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        int r = find(static_cast<int>(i));
        if (!seen[r] || lex_less(vals(i), rep[r])) rep[r] = vals(i);
        seen[r] = true;
    }
    std::vector<int> roots;
    for (Eigen::Index i = 0; i < n; ++i)
        if (find(static_cast<int>(i)) == static_cast<int>(i)) roots.push_back(static_cast<int>(i));
    std::sort(roots.begin(), roots.end(),
              [&](int a, int b) { return lex_less(rep[a], rep[b]); });
    std::vector<int> root_id(n, -1);
    for (std::size_t k = 0; k < roots.size(); ++k) root_id[roots[k]] = static_cast<int>(k);
    std::vector<int> out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = root_id[find(static_cast<int>(i))];
    return out;
}

}  // namespace detail

/// Representatives of the distinct eigenvalues of M (clustered at relative
/// distance 1e-8), sorted lexicographically by (re, im). Branch-sign vectors
/// for primary_sqrt index against this ordering.
inline std::vector<Complex> distinct_eigenvalues(const CMat& M, double rel = 1e-8) {
    require_square(M, "distinct_eigenvalues");
    Eigen::ComplexEigenSolver<CMat> es(M, false);
    CVec vals = es.eigenvalues();
    std::vector<int> ids = detail::cluster_values(vals, rel);
    int k = *std::max_element(ids.begin(), ids.end()) + 1;
    std::vector<Complex> rep(k);
    std::vector<bool> have(k, false);
    auto lex_less = [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        int c = ids[i];
        if (!have[c] || lex_less(vals(i), rep[c])) rep[c] = vals(i);
        have[c] = true;
    }
    return rep;
}

using SignVector = std::vector<int>;

/// Primary matrix square root via complex Schur form and the Parlett
/// recurrence. branch_signs selects the sqrt branch per distinct eigenvalue
/// (ordering of distinct_eigenvalues); empty means all principal. Being a
/// primary function, the result commutes with everything that commutes with M.
///
/// Throws NoPrimarySqrt when the recurrence divides by a quantity below
/// rank_cutoff with a nonzero numerator (defective singular M, e.g. a nonzero
/// nilpotent) or when the computed root fails the verification Delta^2 = M.
inline CMat primary_sqrt(const CMat& M, const SignVector& branch_signs = {},
                         const Tolerances& tol = {}) {
    tol.validate();
    require_square(M, "primary_sqrt");
    require_finite(M, "primary_sqrt");
    const Eigen::Index n = M.rows();

    Eigen::ComplexSchur<CMat> schur(M, /*computeU=*/true);
    if (schur.info() != Eigen::Success)
        throw NoPrimarySqrt("primary_sqrt: Schur decomposition failed");
    const CMat& T = schur.matrixT();
    const CMat& Q = schur.matrixU();

    std::vector<int> cluster = detail::cluster_values(T.diagonal());
    int k = *std::max_element(cluster.begin(), cluster.end()) + 1;
    if (!branch_signs.empty() && static_cast<int>(branch_signs.size()) != k)
        throw std::invalid_argument("primary_sqrt: branch_signs must have one sign per distinct eigenvalue (" +
                                    std::to_string(k) + ")");

    CMat U = CMat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double sgn = branch_signs.empty() ? 1.0 : static_cast<double>(branch_signs[cluster[i]]);
        U(i, i) = sgn * std::sqrt(T(i, i));
    }
    for (Eigen::Index d = 1; d < n; ++d) {
        for (Eigen::Index i = 0; i + d < n; ++i) {
            Eigen::Index j = i + d;
            Complex num = T(i, j);
            for (Eigen::Index m = i + 1; m < j; ++m) num -= U(i, m) * U(m, j);
            Complex den = U(i, i) + U(j, j);
            if (std::abs(den) < tol.rank_cutoff) {
                if (std::abs(num) <= tol.rank_cutoff) {
                    U(i, j) = 0.0;
                } else {
                    throw NoPrimarySqrt("primary_sqrt: Parlett recurrence division by " +
                                        std::to_string(std::abs(den)) + " below rank_cutoff");
                }
            } else {
                U(i, j) = num / den;
            }
        }
    }
    CMat delta = Q * U * Q.adjoint();
    if (op_norm(delta * delta - M) > tol.assert_tol * (1.0 + op_norm(M)))
        throw NoPrimarySqrt("primary_sqrt: verification Delta^2 = M failed");
    return delta;
}

namespace detail {

inline double strict_lower_mass(const CMat& A) {
    double m = 0.0;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = j + 1; i < A.rows(); ++i) m = std::max(m, std::abs(A(i, j)));
    return m;
}

/// Try to simultaneously triangularize with the unitary Schur basis of a
/// generic combination S + tP. Returns false when either rotated matrix has
/// off-triangular mass above tolerance.
inline bool try_generic_combination(const CMat& S, const CMat& P, Complex t,
                                    const Tolerances& tol,
                                    std::vector<std::pair<Complex, Complex>>& out) {
    CMat C = S + t * P;
    Eigen::ComplexSchur<CMat> schur(C, true);
    if (schur.info() != Eigen::Success) return false;
    const CMat& Q = schur.matrixU();
    CMat Sr = Q.adjoint() * S * Q;
    CMat Pr = Q.adjoint() * P * Q;
    double cap_s = tol.assert_tol * (1.0 + op_norm(S));
    double cap_p = tol.assert_tol * (1.0 + op_norm(P));
    if (strict_lower_mass(Sr) > cap_s || strict_lower_mass(Pr) > cap_p) return false;
    out.clear();
    for (Eigen::Index i = 0; i < S.rows(); ++i) out.emplace_back(Sr(i, i), Pr(i, i));
    return true;
}

/// Recursive common-invariant-subspace splitting for clustered spectra.
inline std::vector<std::pair<Complex, Complex>> joint_spectrum_split(const CMat& S, const CMat& P,
                                                                     const Tolerances& tol) {
    const Eigen::Index n = S.rows();
    if (n == 1) return {{S(0, 0), P(0, 0)}};

    auto split_by = [&](const CMat& lead, const CMat& other,
                        bool lead_is_s) -> std::optional<std::vector<std::pair<Complex, Complex>>> {
        Eigen::ComplexEigenSolver<CMat> es(lead, false);
        CVec vals = es.eigenvalues();
        std::vector<int> ids = cluster_values(vals);
        int k = *std::max_element(ids.begin(), ids.end()) + 1;
        if (k < 2) return std::nullopt;
        // annihilate every other cluster; the range of the product is the
        // generalized eigenspace of cluster 0, invariant for both matrices
        CMat K = CMat::Identity(n, n);
        double norm_lead = op_norm(lead);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (ids[i] == 0) continue;
            K = (lead - vals(i) * CMat::Identity(n, n)) * K / (1.0 + std::abs(vals(i)) + norm_lead);
        }
        Eigen::ColPivHouseholderQR<CMat> qr(K);
        qr.setThreshold(1e-7);
        Eigen::Index m = qr.rank();
        if (m == 0 || m == n) return std::nullopt;
        CMat Q = qr.householderQ();
        CMat Sr = Q.adjoint() * (lead_is_s ? lead : other) * Q;
        CMat Pr = Q.adjoint() * (lead_is_s ? other : lead) * Q;
        double cap_s = tol.assert_tol * (1.0 + op_norm(Sr));
        double cap_p = tol.assert_tol * (1.0 + op_norm(Pr));
        if (Sr.bottomLeftCorner(n - m, m).cwiseAbs().maxCoeff() > cap_s ||
            Pr.bottomLeftCorner(n - m, m).cwiseAbs().maxCoeff() > cap_p)
            return std::nullopt;
        auto head = joint_spectrum_split(Sr.topLeftCorner(m, m), Pr.topLeftCorner(m, m), tol);
        auto tail = joint_spectrum_split(Sr.bottomRightCorner(n - m, n - m),
                                         Pr.bottomRightCorner(n - m, n - m), tol);
        head.insert(head.end(), tail.begin(), tail.end());
        return head;
    };

    if (auto r = split_by(S, P, true)) return *r;
    if (auto r = split_by(P, S, false)) return *r;

    // single eigenvalue cluster in both matrices: pair the individually
    // computed eigenvalues (all within cluster width, pairing immaterial)
    Eigen::ComplexEigenSolver<CMat> es_s(S, false), es_p(P, false);
    CVec ls = es_s.eigenvalues(), lp = es_p.eigenvalues();
    auto lex_less = [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(ls.data(), ls.data() + n, lex_less);
    std::sort(lp.data(), lp.data() + n, lex_less);
    std::vector<std::pair<Complex, Complex>> out;
    for (Eigen::Index i = 0; i < n; ++i) out.emplace_back(ls(i), lp(i));
    return out;
}

}  // namespace detail

/// Joint (Taylor) spectrum of a commuting pair: the n diagonal pairs of a
/// simultaneous triangularization. Schur-triangularizes a generic combination
/// S + tP (seeded unit-circle t, 4 retries), falling back to recursive
/// common-invariant-subspace splitting for clustered spectra.
inline std::vector<std::pair<Complex, Complex>> joint_spectrum(const CMat& S, const CMat& P,
                                                               const Tolerances& tol = {}) {
    tol.validate();
    require_square(S, "joint_spectrum");
    require_square(P, "joint_spectrum");
    require_finite(S, "joint_spectrum");
    require_finite(P, "joint_spectrum");
    if (S.rows() != P.rows()) throw Error("joint_spectrum: dimension mismatch");
    if (op_norm(commutator(S, P)) > tol.comm_tol * (1.0 + op_norm(S) * op_norm(P)))
        throw NotCommuting("joint_spectrum: matrices do not commute");

    std::vector<std::pair<Complex, Complex>> out;
    Rng rng(0xC0FFEE5EEDULL);
    for (int attempt = 0; attempt < 5; ++attempt) {
        if (detail::try_generic_combination(S, P, rng.unit_circle(), tol, out)) return out;
    }
    out = detail::joint_spectrum_split(S, P, tol);
    if (static_cast<Eigen::Index>(out.size()) != S.rows())
        throw TriangularizationFailed("joint_spectrum: fallback split failed");
    return out;
}

}  // namespace symbi
