#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symbi/linalg.hpp"
#include "symbi/scalar_geometry.hpp"
#include "symbi/types.hpp"

namespace symbi {

/// A commuting pair of equal-size square matrices plus the tolerance context
/// used by every certification routine. Construction validates commutation.
struct OperatorPair {
    CMat S;
    CMat P;
    Tolerances tol;

    OperatorPair(CMat S_, CMat P_, Tolerances tol_ = {})
        : S(std::move(S_)), P(std::move(P_)), tol(tol_) {
        tol.validate();
        require_square(S, "OperatorPair");
        require_square(P, "OperatorPair");
        require_finite(S, "OperatorPair");
        require_finite(P, "OperatorPair");
        if (S.rows() != P.rows()) throw Error("OperatorPair: dimension mismatch");
        double cap = tol.comm_tol * (1.0 + op_norm(S) * op_norm(P));
        double c = op_norm(commutator(S, P));
        if (c > cap)
            throw NotCommuting("OperatorPair: ||SP-PS|| = " + std::to_string(c) +
                               " exceeds commutation tolerance");
    }

    Eigen::Index dim() const { return S.rows(); }

    OperatorPair adjoint() const { return OperatorPair(S.adjoint(), P.adjoint(), tol); }
};

/// Solution of S - S*P = D_P X D_P on the defect space of P, in the
/// orthonormal defect basis, with its residual and numerical radius.
struct FundamentalOp {
    CMat F;             // dim(defect) x dim(defect), defect-basis coordinates
    CMat defect_basis;  // n x dim(defect), orthonormal columns spanning D_P
    double residual = 0.0;
    double omega = 0.0;
    double solver_gap = 0.0;  // agreement between the two independent solve paths

    Eigen::Index defect_dim() const { return defect_basis.cols(); }

    /// F conjugated back to the full space (zero on the defect complement).
    CMat full() const { return defect_basis * F * defect_basis.adjoint(); }
};

/// rho(S, P) = 2(I - P*P) - (S - S*P) - (S* - P*S); Hermitian by construction.
inline CMat rho(const OperatorPair& pair) {
    const CMat& S = pair.S;
    const CMat& P = pair.P;
    CMat I = CMat::Identity(S.rows(), S.cols());
    CMat r = 2.0 * (I - P.adjoint() * P) - (S - S.adjoint() * P) - (S.adjoint() - P.adjoint() * S);
    if (op_norm(r - r.adjoint()) > 1e-12 * (1.0 + op_norm(r)))
        throw Error("rho: result unexpectedly non-Hermitian");
    return 0.5 * (r + r.adjoint());
}

/// Minimum over a polar grid of alpha in the open unit disc of the smallest
/// eigenvalue of rho(alpha S, alpha^2 P). A value below -assert_tol certifies
/// the pair is not a Gamma-contraction; a nonnegative scan is supporting
/// evidence only (the underlying condition quantifies over the whole disc).
inline double rho_scan(const OperatorPair& pair, int radial_steps = 32, int angular_steps = 64) {
    if (radial_steps < 1 || angular_steps < 1)
        throw std::invalid_argument("rho_scan: steps must be positive");
    const CMat& S = pair.S;
    const CMat& P = pair.P;
    const Eigen::Index n = S.rows();
    const CMat I = CMat::Identity(n, n);
    double min_eig = std::numeric_limits<double>::infinity();
    for (int ir = 0; ir < radial_steps; ++ir) {
        double r = (radial_steps == 1)
                       ? 0.999
                       : 0.05 + (0.999 - 0.05) * static_cast<double>(ir) / (radial_steps - 1);
        for (int ia = 0; ia < angular_steps; ++ia) {
            double th = 2.0 * std::numbers::pi * ia / angular_steps;
            Complex a = r * Complex(std::cos(th), std::sin(th));
            CMat Sa = a * S;
            CMat Pa = (a * a) * P;
            CMat rm = 2.0 * (I - Pa.adjoint() * Pa) - (Sa - Sa.adjoint() * Pa) -
                      (Sa.adjoint() - Pa.adjoint() * Sa);
            min_eig = std::min(min_eig, detail::lambda_min(0.5 * (rm + rm.adjoint())));
        }
    }
    return min_eig;
}

namespace detail {

/// Core solver for the fundamental-operator equation. Always returns the
/// best-effort solution with its residual; callers decide how to treat
/// residuals beyond tolerance.
inline FundamentalOp solve_fundamental(const OperatorPair& pair) {
    const CMat& S = pair.S;
    const CMat& P = pair.P;
    const Eigen::Index n = S.rows();
    const Tolerances& tol = pair.tol;

    CMat dp2 = CMat::Identity(n, n) - P.adjoint() * P;
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (dp2 + dp2.adjoint()));
    RVec w = es.eigenvalues();
    RVec d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = std::sqrt(std::max(0.0, w(i)));

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i)
        if (d(i) > tol.rank_cutoff) keep.push_back(i);
    const Eigen::Index k = static_cast<Eigen::Index>(keep.size());

    FundamentalOp out;
    out.defect_basis = CMat(n, k);
    RVec dk(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        out.defect_basis.col(j) = es.eigenvectors().col(keep[j]);
        dk(j) = d(keep[j]);
    }

    CMat rhs = S - S.adjoint() * P;
    CMat dp = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();

    if (k == 0) {
        out.F = CMat(0, 0);
        out.residual = op_norm(rhs);
        out.omega = 0.0;
        out.solver_gap = 0.0;
        return out;
    }

    // path 1: pseudoinverse scaling in the defect eigenbasis
    CMat mid = out.defect_basis.adjoint() * rhs * out.defect_basis;
    out.F = CMat(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) out.F(i, j) = mid(i, j) / (dk(i) * dk(j));

    out.residual = op_norm(dp * out.full() * dp - rhs);
    out.omega = numerical_radius(out.F);

    // path 2: least squares on the vectorized equation restricted to the
    // defect subspace, as an independent uniqueness corroboration
    CMat B = dp * out.defect_basis;  // n x k
    CMat J(n * n, k * k);
    for (Eigen::Index c = 0; c < k; ++c)
        for (Eigen::Index rr = 0; rr < k; ++rr) {
            CMat E = B.col(rr) * B.col(c).adjoint();  // = B e_r e_c^* B^*
            J.col(c * k + rr) = Eigen::Map<const CVec>(E.data(), n * n);
        }
    CVec rhs_vec = Eigen::Map<const CVec>(rhs.data(), n * n);
    CVec x = J.completeOrthogonalDecomposition().solve(rhs_vec);
    CMat F2 = Eigen::Map<const CMat>(x.data(), k, k);
    out.solver_gap = op_norm(F2 - out.F);
    return out;
}

}  // namespace detail

/// The fundamental operator of the pair: the unique solution of
/// S - S*P = D_P X D_P on the defect space with its residual and omega.
///
/// Throws NotContraction when ||P|| > 1 + assert_tol and NotSolvable when the
/// equation has residual mass outside D_P (.) D_P (which certifies the pair is
/// not a Gamma-contraction).
inline FundamentalOp fundamental_operator(const OperatorPair& pair) {
    if (op_norm(pair.P) > 1.0 + pair.tol.assert_tol)
        throw NotContraction("fundamental_operator: ||P|| exceeds 1");
    FundamentalOp f = detail::solve_fundamental(pair);
    if (f.residual > pair.tol.assert_tol)
        throw NotSolvable("fundamental_operator: residual " + std::to_string(f.residual) +
                              " exceeds assert_tol",
                          f.residual);
    return f;
}

enum class Overall { CERTIFIED_CONTRACTION, CERTIFIED_NOT, INCONCLUSIVE };

inline const char* to_string(Overall o) {
    switch (o) {
        case Overall::CERTIFIED_CONTRACTION: return "CERTIFIED_CONTRACTION";
        case Overall::CERTIFIED_NOT: return "CERTIFIED_NOT";
        case Overall::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

/// Aggregated verdicts of the Gamma-contraction criteria.
struct GammaReport {
    double s_norm = 0.0;
    double p_norm = 0.0;
    std::vector<std::pair<Complex, Complex>> joint_spec;
    double rho_min = std::numeric_limits<double>::quiet_NaN();
    std::optional<FundamentalOp> fundamental;
    std::optional<bool> strict_verdict;  // present when the strict criterion applies
    std::map<std::string, bool> verdicts;
    Overall overall = Overall::INCONCLUSIVE;
    std::string violated;  // named violated necessary condition when CERTIFIED_NOT
};

/// Exact criterion for pairs with ||P|| < 1 and spectral radius of S below 2:
/// omega of (I-P*P)^{-1/2} (S-S*P) (I-P*P)^{-1/2} at most 1.
inline bool is_gamma_contraction_strict(const OperatorPair& pair) {
    const Tolerances& tol = pair.tol;
    if (!(op_norm(pair.P) < 1.0 - tol.assert_tol))
        throw StrictPreconditionFailed("strict criterion requires ||P|| < 1");
    if (!(spectral_radius(pair.S) < 2.0 - tol.assert_tol))
        throw StrictPreconditionFailed("strict criterion requires spectral radius of S below 2");
    const Eigen::Index n = pair.dim();
    CMat dp2 = CMat::Identity(n, n) - pair.P.adjoint() * pair.P;
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (dp2 + dp2.adjoint()));
    RVec w = es.eigenvalues();
    RVec inv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(w(i));
    CMat dinv = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
    double omega = numerical_radius(dinv * (pair.S - pair.S.adjoint() * pair.P) * dinv);
    return omega <= 1.0 + tol.assert_tol;
}

/// Runs the Gamma-contraction criteria in order: norm bounds, joint spectrum
/// membership, the fundamental-operator criterion (the certifying one), and
/// the rho scan as corroboration. Borderline fundamental-operator results
/// (residual or omega within a factor 10 of tolerance) yield INCONCLUSIVE.
inline GammaReport is_gamma_contraction(const OperatorPair& pair) {
    const Tolerances& tol = pair.tol;
    GammaReport rep;
    rep.verdicts["commuting"] = true;  // enforced by OperatorPair construction

    rep.s_norm = op_norm(pair.S);
    rep.verdicts["norm_s"] = rep.s_norm <= 2.0 + tol.assert_tol;
    if (!rep.verdicts["norm_s"]) {
        rep.overall = Overall::CERTIFIED_NOT;
        rep.violated = "||S|| <= 2";
        return rep;
    }
    rep.p_norm = op_norm(pair.P);
    rep.verdicts["norm_p"] = rep.p_norm <= 1.0 + tol.assert_tol;
    if (!rep.verdicts["norm_p"]) {
        rep.overall = Overall::CERTIFIED_NOT;
        rep.violated = "||P|| <= 1";
        return rep;
    }

    rep.joint_spec = joint_spectrum(pair.S, pair.P, tol);
    bool spec_ok = true;
    for (const auto& [lam, mu] : rep.joint_spec) {
        PointPair pt{lam, mu};
        auto [m1, m2] = detail::root_moduli(pt);
        if (std::max(m1, m2) > 1.0 + tol.assert_tol) spec_ok = false;
    }
    rep.verdicts["spectrum_in_gamma"] = spec_ok;
    if (!spec_ok) {
        rep.overall = Overall::CERTIFIED_NOT;
        rep.violated = "sigma(S,P) in Gamma";
        return rep;
    }

    FundamentalOp f = detail::solve_fundamental(pair);
    rep.fundamental = f;
    bool solvable = f.residual <= tol.assert_tol;
    rep.verdicts["fundamental_solvable"] = solvable;
    if (f.residual > 10.0 * tol.assert_tol) {
        rep.overall = Overall::CERTIFIED_NOT;
        rep.violated = "S-S*P = D_P X D_P solvable on the defect space";
        return rep;
    }
    bool omega_ok = f.omega <= 1.0 + tol.assert_tol;
    rep.verdicts["omega_f"] = omega_ok;
    if (f.omega > 1.0 + 10.0 * tol.assert_tol) {
        rep.overall = Overall::CERTIFIED_NOT;
        rep.violated = "omega(F) <= 1";
        return rep;
    }

    rep.rho_min = rho_scan(pair);
    rep.verdicts["rho_scan"] = rep.rho_min >= -tol.assert_tol;
    if (!rep.verdicts["rho_scan"]) {
        rep.overall = Overall::CERTIFIED_NOT;
        rep.violated = "rho(alpha S, alpha^2 P) >= 0 on the disc";
        return rep;
    }

    if (rep.p_norm < 1.0 - tol.assert_tol && spectral_radius(pair.S) < 2.0 - tol.assert_tol) {
        rep.strict_verdict = is_gamma_contraction_strict(pair);
        rep.verdicts["strict"] = *rep.strict_verdict;
    }

    if (!solvable || !omega_ok) {
        rep.overall = Overall::INCONCLUSIVE;
        return rep;
    }
    rep.overall = Overall::CERTIFIED_CONTRACTION;
    return rep;
}

enum class UnitaryMethod { ALGEBRAIC, NEW_CHAR };

/// Gamma-unitary test. ALGEBRAIC: P unitary, P*S = S*, ||S|| <= 2.
/// NEW_CHAR: P normal, S = S*P, and sqrt((S^2-4P)*(S^2-4P)) + S*S = 4I.
inline bool is_gamma_unitary(const OperatorPair& pair, UnitaryMethod method) {
    const CMat& S = pair.S;
    const CMat& P = pair.P;
    const Eigen::Index n = pair.dim();
    const CMat I = CMat::Identity(n, n);
    const double t = pair.tol.assert_tol;
    switch (method) {
        case UnitaryMethod::ALGEBRAIC:
            return op_norm(P.adjoint() * P - I) <= t && op_norm(P * P.adjoint() - I) <= t &&
                   op_norm(P.adjoint() * S - S.adjoint()) <= t && op_norm(S) <= 2.0 + t;
        case UnitaryMethod::NEW_CHAR: {
            if (op_norm(P.adjoint() * P - P * P.adjoint()) > t) return false;
            if (op_norm(S - S.adjoint() * P) > t) return false;
            CMat M = S * S - 4.0 * P;
            CMat absM = psd_sqrt(M.adjoint() * M, pair.tol);
            return op_norm(absM + S.adjoint() * S - 4.0 * I) <= t;
        }
    }
    return false;
}

/// Gamma-isometry test: P*P = I, P*S = S*, ||S|| <= 2. On matrices every
/// isometry is unitary, so this coincides with the Gamma-unitary class.
inline bool is_gamma_isometry(const OperatorPair& pair) {
    const CMat I = CMat::Identity(pair.dim(), pair.dim());
    const double t = pair.tol.assert_tol;
    return op_norm(pair.P.adjoint() * pair.P - I) <= t &&
           op_norm(pair.P.adjoint() * pair.S - pair.S.adjoint()) <= t &&
           op_norm(pair.S) <= 2.0 + t;
}

/// Structural self-test of the identity S*S - SS* = S*(P*P - PP*)S, valid for
/// commuting pairs with S = S*P. Returns the violation norm.
inline double hyponormal_transfer_check(const OperatorPair& pair) {
    const CMat& S = pair.S;
    const CMat& P = pair.P;
    if (op_norm(S - S.adjoint() * P) > pair.tol.assert_tol)
        throw PreconditionFailed("hyponormal_transfer_check requires S = S*P");
    CMat lhs = S.adjoint() * S - S * S.adjoint();
    CMat rhs = S.adjoint() * (P.adjoint() * P - P * P.adjoint()) * S;
    return op_norm(lhs - rhs);
}

}  // namespace symbi
