#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symbi/pair_analysis.hpp"

namespace symbi {

/// (T1, T2) -> (T1 + T2, T1 T2). The factors need not be contractions; only
/// commutation is required.
inline OperatorPair symmetrize_ops(const CMat& T1, const CMat& T2, Tolerances tol = {}) {
    tol.validate();
    require_square(T1, "symmetrize_ops");
    require_square(T2, "symmetrize_ops");
    if (T1.rows() != T2.rows()) throw Error("symmetrize_ops: dimension mismatch");
    if (op_norm(commutator(T1, T2)) > tol.comm_tol * (1.0 + op_norm(T1) * op_norm(T2)))
        throw NotCommuting("symmetrize_ops: factors do not commute");
    return OperatorPair(T1 + T2, T1 * T2, tol);
}

enum class DecompStatus { OK, NO_SQRT, COMMUTANT_FAIL, NORM_BOUND_FAIL };

inline const char* to_string(DecompStatus s) {
    switch (s) {
        case DecompStatus::OK: return "OK";
        case DecompStatus::NO_SQRT: return "NO_SQRT";
        case DecompStatus::COMMUTANT_FAIL: return "COMMUTANT_FAIL";
        case DecompStatus::NORM_BOUND_FAIL: return "NORM_BOUND_FAIL";
    }
    return "?";
}

struct DecompositionResult {
    DecompStatus status = DecompStatus::NO_SQRT;
    std::optional<CMat> T1, T2, delta;
    /// (||S+Delta||, ||S-Delta||) of the accepted branch, or of the best
    /// branch tried when the norm bound fails.
    std::optional<std::pair<double, double>> norms;
    int branches_tried = 0;
    bool principal_branch_only = false;
};

/// Split (S, P) into commuting factors T1 = (S+Delta)/2, T2 = (S-Delta)/2 with
/// Delta a primary square root of S^2 - 4P, searching sqrt branches until
/// max(||S+Delta||, ||S-Delta||) <= 2. Mathematical failure maps to a status
/// code, never an exception.
///
/// Only primary square roots are enumerated; when S^2 - 4P has repeated
/// eigenvalues with multidimensional eigenspaces, non-primary roots exist that
/// the search does not see, so a failed status means "not found", not a
/// disproof (except where uniqueness is known).
inline DecompositionResult decompose(const OperatorPair& pair, bool branch_search = true) {
    const Tolerances& tol = pair.tol;
    const CMat& S = pair.S;
    CMat M = S * S - 4.0 * pair.P;

    DecompositionResult res;
    int k = static_cast<int>(distinct_eigenvalues(M).size());
    long n_branches = 1;
    if (branch_search && k <= 12) {
        n_branches = 1L << k;
    } else if (branch_search) {
        res.principal_branch_only = true;
    }

    bool saw_sqrt = false;
    bool saw_commuting_sqrt = false;
    double best_max_norm = std::numeric_limits<double>::infinity();
    for (long mask = 0; mask < n_branches; ++mask) {
        SignVector signs(k, 1);
        for (int b = 0; b < k; ++b)
            if (mask & (1L << b)) signs[b] = -1;
        ++res.branches_tried;
        CMat delta;
        try {
            delta = primary_sqrt(M, signs, tol);
        } catch (const NoPrimarySqrt&) {
            continue;
        }
        saw_sqrt = true;
        if (op_norm(commutator(delta, S)) > tol.comm_tol * (1.0 + op_norm(delta) * op_norm(S)) ||
            op_norm(commutator(delta, pair.P)) >
                tol.comm_tol * (1.0 + op_norm(delta) * op_norm(pair.P)))
            continue;
        saw_commuting_sqrt = true;
        double np = op_norm(S + delta);
        double nm = op_norm(S - delta);
        double mx = std::max(np, nm);
        if (mx < best_max_norm) {
            best_max_norm = mx;
            res.norms = {np, nm};
            res.delta = delta;
        }
        if (mx <= 2.0 + tol.assert_tol) {
            CMat T1 = 0.5 * (S + delta);
            CMat T2 = 0.5 * (S - delta);
            if (op_norm(commutator(T1, T2)) > 1e-8 * (1.0 + op_norm(T1) * op_norm(T2))) continue;
            res.status = DecompStatus::OK;
            res.T1 = T1;
            res.T2 = T2;
            res.delta = delta;
            res.norms = {np, nm};
            return res;
        }
    }
    if (saw_commuting_sqrt)
        res.status = DecompStatus::NORM_BOUND_FAIL;
    else if (saw_sqrt)
        res.status = DecompStatus::COMMUTANT_FAIL;
    else
        res.status = DecompStatus::NO_SQRT;
    return res;
}

struct EmbeddingResult {
    CMat T1, T2;  // on the doubled space H (+) H
    std::string block_layout;
};

/// The always-available doubling construction: any certified Gamma-contraction
/// (S, P) is the compression to the first summand of the symmetrization of
///   T1 = [S/2, (S^2-4P)/4; I, S/2],  T2 = [S/2, -(S^2-4P)/4; -I, S/2]
/// on H (+) H, with T1 + T2 = S (+) S, T1 T2 = P (+) P and ||Ti|| <= 2.
inline EmbeddingResult embed_and_split(const OperatorPair& pair) {
    const Tolerances& tol = pair.tol;
    GammaReport rep = is_gamma_contraction(pair);
    if (rep.overall != Overall::CERTIFIED_CONTRACTION)
        throw NotGammaContraction("embed_and_split: input pair is not a certified Gamma-contraction (" +
                                  std::string(to_string(rep.overall)) + ")");

    const Eigen::Index n = pair.dim();
    const CMat& S = pair.S;
    const CMat& P = pair.P;
    CMat quarter = 0.25 * (S * S - 4.0 * P);
    CMat I = CMat::Identity(n, n);

    EmbeddingResult out;
    out.T1 = CMat(2 * n, 2 * n);
    out.T1 << 0.5 * S, quarter, I, 0.5 * S;
    out.T2 = CMat(2 * n, 2 * n);
    out.T2 << 0.5 * S, -quarter, -I, 0.5 * S;
    out.block_layout = "K = H (+) H with dim H = " + std::to_string(n) +
                       "; T1 = [S/2, (S^2-4P)/4; I, S/2], T2 = [S/2, -(S^2-4P)/4; -I, S/2]";

    CMat SS = CMat::Zero(2 * n, 2 * n);
    SS.topLeftCorner(n, n) = S;
    SS.bottomRightCorner(n, n) = S;
    CMat PP = CMat::Zero(2 * n, 2 * n);
    PP.topLeftCorner(n, n) = P;
    PP.bottomRightCorner(n, n) = P;

    if (op_norm(out.T1 + out.T2 - SS) > tol.assert_tol ||
        op_norm(out.T1 * out.T2 - PP) > tol.assert_tol ||
        op_norm(out.T2 * out.T1 - PP) > tol.assert_tol)
        throw Error("embed_and_split: block identities failed");
    double n1 = op_norm(out.T1), n2 = op_norm(out.T2);
    if (std::max(n1, n2) > 2.0 + tol.assert_tol)
        throw NormBoundViolated("embed_and_split: ||Ti|| = " + std::to_string(std::max(n1, n2)) +
                                " exceeds 2");
    GammaReport rep2 = is_gamma_contraction(OperatorPair(SS, PP, tol));
    if (rep2.overall != Overall::CERTIFIED_CONTRACTION)
        throw NotGammaContraction("embed_and_split: embedded pair failed recertification");
    return out;
}

enum class HalfScale { TO_HALF, FROM_HALF };

/// Biholomorphic scaling between Gamma and the symmetrized half-bidisc:
/// TO_HALF gives (S/2, P/4), FROM_HALF gives (2S, 4P).
inline OperatorPair half_scale(const OperatorPair& pair, HalfScale direction) {
    if (direction == HalfScale::TO_HALF)
        return OperatorPair(0.5 * pair.S, 0.25 * pair.P, pair.tol);
    return OperatorPair(2.0 * pair.S, 4.0 * pair.P, pair.tol);
}

namespace detail {

/// One damped Gauss-Newton run on the residual map
/// T1 -> (T1^2 - T1 S + P, [T1, S]); returns the final iterate and residual.
inline std::pair<CMat, double> factor_newton(const CMat& S, const CMat& P, CMat T1, double scale,
                                             int max_iters) {
    const Eigen::Index n = S.rows();
    auto residual = [&](const CMat& X) {
        CMat r1 = X * X - X * S + P;
        CMat r2 = X * S - S * X;
        CVec v(2 * n * n);
        v << Eigen::Map<const CVec>(r1.data(), n * n), Eigen::Map<const CVec>(r2.data(), n * n);
        return v;
    };
    CVec r = residual(T1);
    double rn = r.norm();
    for (int it = 0; it < max_iters && rn > 1e-14 * scale; ++it) {
        CMat J(2 * n * n, n * n);
        for (Eigen::Index c = 0; c < n; ++c)
            for (Eigen::Index rr = 0; rr < n; ++rr) {
                CMat E = CMat::Zero(n, n);
                E(rr, c) = 1.0;
                CMat d1 = E * T1 + T1 * E - E * S;
                CMat d2 = E * S - S * E;
                J.col(c * n + rr).head(n * n) = Eigen::Map<const CVec>(d1.data(), n * n);
                J.col(c * n + rr).tail(n * n) = Eigen::Map<const CVec>(d2.data(), n * n);
            }
        CVec step = J.completeOrthogonalDecomposition().solve(-r);
        CMat dT = Eigen::Map<const CMat>(step.data(), n, n);
        double alpha = 1.0;
        CMat next;
        CVec rnext;
        double rn_next = rn;
        for (int half = 0; half < 12; ++half) {
            next = T1 + alpha * dT;
            rnext = residual(next);
            rn_next = rnext.norm();
            if (rn_next < rn) break;
            alpha *= 0.5;
        }
        if (rn_next >= rn) break;  // stalled
        T1 = next;
        r = rnext;
        rn = rn_next;
    }
    return {T1, rn};
}

}  // namespace detail

/// Random-restart Gauss-Newton search for all factorizations S = T1 + T2,
/// P = T1 T2 = T2 T1. Returns the distinct converged solutions (deduplicated
/// at op-norm distance 1e-6), each verified against the defining identities.
/// Intended for small matrices (dimension at most 8).
inline std::vector<std::pair<CMat, CMat>> factorization_search(const OperatorPair& pair,
                                                               int trials = 500,
                                                               std::uint64_t seed = 0) {
    if (pair.dim() > 8)
        throw PreconditionFailed("factorization_search: dimension must be at most 8");
    const CMat& S = pair.S;
    const CMat& P = pair.P;
    const Eigen::Index n = pair.dim();
    const double scale = 1.0 + op_norm(S) + op_norm(P);
    const double radius = 1.0 + op_norm(S);

    std::vector<std::pair<CMat, CMat>> found;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(trial));
        CMat start = rng.matrix_disc(n, n, radius);
        auto [T1, rn] = detail::factor_newton(S, P, start, scale, 150);
        if (rn > 1e-12 * scale) continue;
        CMat T2 = S - T1;
        if (op_norm(T1 * T2 - P) > 1e-9 * scale || op_norm(T2 * T1 - P) > 1e-9 * scale) continue;
        bool fresh = true;
        for (const auto& [U1, U2] : found) {
            if (op_norm(U1 - T1) <= 1e-6) {
                fresh = false;
                break;
            }
        }
        if (fresh) found.emplace_back(T1, T2);
    }
    return found;
}

}  // namespace symbi
