#pragma once

#include <string>
#include <vector>

#include "symbi/pair_analysis.hpp"

namespace symbi {

/// Finite truncation of the minimal Gamma-unitary dilation (T0, U0) of a
/// certified pair, with N defect blocks of P on the left of H and N defect
/// blocks of P* on the right. Blocks are stored in the orthonormal defect
/// bases, so every block is dense of the reduced dimension.
///
/// Block indices run -N..-1 (defect of P), 0 (H), 1..N (defect of P*); both
/// matrices are block upper triangular with S and P as the H-diagonal of T0
/// and U0 respectively.
struct DilationTruncation {
    int N = 0;
    CMat T0, U0;
    Eigen::Index center_offset = 0;  // start of the H block
    Eigen::Index h_dim = 0;
    Eigen::Index dp_dim = 0;   // dim of the defect space of P
    Eigen::Index dps_dim = 0;  // dim of the defect space of P*
    FundamentalOp F;           // fundamental operator of (S, P)
    FundamentalOp Fstar;       // fundamental operator of (S*, P*)

    Eigen::Index total_dim() const { return T0.rows(); }

    /// Row/column range of a block index in -N..N.
    std::pair<Eigen::Index, Eigen::Index> block_range(int b) const {
        if (b < 0) return {(b + N) * dp_dim, dp_dim};
        if (b == 0) return {center_offset, h_dim};
        return {center_offset + h_dim + (b - 1) * dps_dim, dps_dim};
    }
};

/// Assemble the truncated dilation pair. The infinite tails are cut at N
/// blocks per side (entries outside the window dropped, no corner completion,
/// which keeps the compression property exact for word degree < N).
inline DilationTruncation build_dilation(const OperatorPair& pair, int N) {
    if (N < 1) throw std::invalid_argument("build_dilation: N must be at least 1");
    GammaReport rep = is_gamma_contraction(pair);
    if (rep.overall != Overall::CERTIFIED_CONTRACTION)
        throw NotGammaContraction("build_dilation: pair is not a certified Gamma-contraction");

    const CMat& S = pair.S;
    const CMat& P = pair.P;
    const Eigen::Index n = pair.dim();

    DilationTruncation d;
    d.N = N;
    d.h_dim = n;
    d.F = fundamental_operator(pair);
    d.Fstar = fundamental_operator(pair.adjoint());
    d.dp_dim = d.F.defect_dim();
    d.dps_dim = d.Fstar.defect_dim();
    d.center_offset = N * d.dp_dim;

    const CMat& V = d.F.defect_basis;      // n x k1
    const CMat& Vs = d.Fstar.defect_basis; // n x k2
    CMat dp = psd_sqrt(CMat::Identity(n, n) - P.adjoint() * P, pair.tol);
    CMat dps = psd_sqrt(CMat::Identity(n, n) - P * P.adjoint(), pair.tol);

    CMat dp_red = V.adjoint() * dp;              // H -> defect(P) coordinates
    CMat pstar_red = V.adjoint() * P.adjoint() * Vs;  // defect(P*) -> defect(P)
    CMat dps_vps = dps * Vs;                     // defect(P*) -> H

    Eigen::Index dim = N * d.dp_dim + n + N * d.dps_dim;
    d.T0 = CMat::Zero(dim, dim);
    d.U0 = CMat::Zero(dim, dim);

    auto put = [&](CMat& M, int br, int bc, const CMat& blk) {
        auto [r0, rn_] = d.block_range(br);
        auto [c0, cn_] = d.block_range(bc);
        M.block(r0, c0, rn_, cn_) = blk;
    };

    const CMat& F = d.F.F;
    const CMat& Fs = d.Fstar.F;
    CMat Ik1 = CMat::Identity(d.dp_dim, d.dp_dim);

    for (int k = -N; k <= -2; ++k) {
        put(d.T0, k, k, F);
        put(d.T0, k, k + 1, F.adjoint());
        put(d.U0, k, k + 1, Ik1);
    }
    put(d.T0, -1, -1, F);
    put(d.T0, -1, 0, F.adjoint() * dp_red);
    put(d.T0, -1, 1, -(F.adjoint() * pstar_red));
    put(d.T0, 0, 0, S);
    put(d.T0, 0, 1, dps_vps * Fs);
    put(d.U0, -1, 0, dp_red);
    put(d.U0, -1, 1, -pstar_red);
    put(d.U0, 0, 0, P);
    put(d.U0, 0, 1, dps_vps);
    for (int k = 1; k <= N; ++k) {
        put(d.T0, k, k, Fs.adjoint());
        if (k < N) {
            put(d.T0, k, k + 1, Fs);
            put(d.U0, k, k + 1, CMat::Identity(d.dps_dim, d.dps_dim));
        }
    }
    return d;
}

/// Max over all monomial words w in (T0, U0) of total degree at most
/// max_total_degree of || P_H w(T0, U0)|_H - w(S, P) ||. Block-banded support
/// propagation makes the truncation exact for degrees below N.
inline double verify_dilation(const OperatorPair& pair, int N, int max_total_degree) {
    if (max_total_degree >= N)
        throw DegreeTooHigh("verify_dilation: max_total_degree must be at most N - 1");
    if (max_total_degree < 0)
        throw std::invalid_argument("verify_dilation: degree must be nonnegative");
    DilationTruncation d = build_dilation(pair, N);
    const Eigen::Index n = pair.dim();
    CMat inj = CMat::Zero(d.total_dim(), n);
    inj.block(d.center_offset, 0, n, n) = CMat::Identity(n, n);

    double worst = 0.0;
    // words encoded by bits: 0 -> T0 (symbol s), 1 -> U0 (symbol p)
    for (int deg = 1; deg <= max_total_degree; ++deg) {
        for (long mask = 0; mask < (1L << deg); ++mask) {
            CMat acc = inj;
            int count_p = 0;
            for (int pos = deg - 1; pos >= 0; --pos) {
                bool is_p = (mask >> pos) & 1;
                count_p += is_p ? 1 : 0;
                acc = (is_p ? d.U0 : d.T0) * acc;
            }
            int count_s = deg - count_p;
            CMat want = CMat::Identity(n, n);
            for (int i = 0; i < count_s; ++i) want = pair.S * want;
            for (int i = 0; i < count_p; ++i) want = pair.P * want;
            worst = std::max(worst, op_norm(acc.block(d.center_offset, 0, n, n) - want));
        }
    }
    return worst;
}

struct CentralCheckReport {
    double unitarity_violation = 0.0;  // || (U0* U0 - I) central ||
    double symmetry_violation = 0.0;   // || (U0* T0 - T0*) central ||
    double max_violation = 0.0;
};

/// Evaluate the Gamma-unitary relations U0*U0 = I and U0*T0 = T0* on the
/// central sub-block (block distance >= 1 from the truncation edges, where
/// plain cutting cannot be felt). Requires N >= 3.
inline CentralCheckReport central_gamma_unitary_check(const DilationTruncation& d) {
    if (d.N < 3) throw PreconditionFailed("central_gamma_unitary_check requires N >= 3");
    const Eigen::Index dim = d.total_dim();
    CMat E1 = d.U0.adjoint() * d.U0 - CMat::Identity(dim, dim);
    CMat E2 = d.U0.adjoint() * d.T0 - d.T0.adjoint();
    const Eigen::Index lo = d.block_range(-d.N + 1).first;
    const auto hi = d.block_range(d.N - 1);
    const Eigen::Index len = hi.first + hi.second - lo;
    CentralCheckReport rep;
    rep.unitarity_violation = op_norm(E1.block(lo, lo, len, len));
    rep.symmetry_violation = op_norm(E2.block(lo, lo, len, len));
    rep.max_violation = std::max(rep.unitarity_violation, rep.symmetry_violation);
    return rep;
}

}  // namespace symbi
