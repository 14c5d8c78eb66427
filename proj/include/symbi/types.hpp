#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace symbi {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotHermitian : Error {
    explicit NotHermitian(const std::string& msg) : Error(msg) {}
};
struct NotPSD : Error {
    explicit NotPSD(const std::string& msg) : Error(msg) {}
};
struct NoPrimarySqrt : Error {
    explicit NoPrimarySqrt(const std::string& msg) : Error(msg) {}
};
struct NotCommuting : Error {
    explicit NotCommuting(const std::string& msg) : Error(msg) {}
};
struct TriangularizationFailed : Error {
    explicit TriangularizationFailed(const std::string& msg) : Error(msg) {}
};
struct NotSolvable : Error {
    double residual;
    NotSolvable(const std::string& msg, double res) : Error(msg), residual(res) {}
};
struct NotContraction : Error {
    explicit NotContraction(const std::string& msg) : Error(msg) {}
};
struct StrictPreconditionFailed : Error {
    explicit StrictPreconditionFailed(const std::string& msg) : Error(msg) {}
};
struct PreconditionFailed : Error {
    explicit PreconditionFailed(const std::string& msg) : Error(msg) {}
};
struct NotGammaContraction : Error {
    explicit NotGammaContraction(const std::string& msg) : Error(msg) {}
};
struct NormBoundViolated : Error {
    explicit NormBoundViolated(const std::string& msg) : Error(msg) {}
};
struct DegreeTooHigh : Error {
    explicit DegreeTooHigh(const std::string& msg) : Error(msg) {}
};

/// Numerical tolerance context shared by all operator-level routines.
///
/// rank_cutoff  - eigenvalues of a defect operator below this are treated as zero
/// assert_tol   - tolerance for identity checks (residuals, norm bounds, hermiticity)
/// comm_tol     - relative tolerance for commutator checks
struct Tolerances {
    double rank_cutoff = 1e-10;
    double assert_tol = 1e-8;
    double comm_tol = 1e-10;

    void validate() const {
        if (!(rank_cutoff > 0.0) || !(assert_tol > 0.0) || !(comm_tol > 0.0))
            throw std::invalid_argument("Tolerances: all fields must be strictly positive");
        if (rank_cutoff > assert_tol)
            throw std::invalid_argument("Tolerances: rank_cutoff must not exceed assert_tol");
    }
};

inline void require_finite(const CMat& A, const char* what) {
    if (!A.allFinite()) throw Error(std::string(what) + ": matrix has non-finite entries");
}

inline void require_square(const CMat& A, const char* what) {
    if (A.rows() != A.cols()) throw Error(std::string(what) + ": matrix must be square");
    if (A.rows() == 0) throw Error(std::string(what) + ": matrix must be non-empty");
}

inline CMat commutator(const CMat& A, const CMat& B) { return A * B - B * A; }

}  // namespace symbi
