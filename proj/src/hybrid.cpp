#include "hybridcorr/hybrid.hpp"

#include <cmath>
#include <sstream>

namespace hybridcorr {

void validate(const QubitParams& q) {
    if (!(q.excited_prob >= 0.0 && q.excited_prob <= 1.0))
        throw InvariantViolation("QubitParams: excited_prob outside [0, 1]");
    double cap = q.excited_prob * (1.0 - q.excited_prob);
    if (std::norm(q.coherence) > cap + 1e-12)
        throw InvariantViolation("QubitParams: |coherence|^2 > p(1-p)");
}

HybridState::HybridState(Matrix ee, Matrix eg, Matrix ge, Matrix gg,
                         const Tolerances& tol)
    : ee_(std::move(ee)), eg_(std::move(eg)), ge_(std::move(ge)),
      gg_(std::move(gg)), tol_(tol) {}

namespace {

void check_blocks(const Matrix& ee, const Matrix& eg, const Matrix& ge,
                  const Matrix& gg, const Tolerances& tol) {
    const auto n = ee.rows();
    if (n < 1 || ee.cols() != n || eg.rows() != n || eg.cols() != n ||
        ge.rows() != n || ge.cols() != n || gg.rows() != n || gg.cols() != n)
        throw InvariantViolation("HybridState: blocks must be square with equal dim");
    double herm = std::max((ee - ee.adjoint()).cwiseAbs().maxCoeff(),
                           (gg - gg.adjoint()).cwiseAbs().maxCoeff());
    herm = std::max(herm, (ge - eg.adjoint()).cwiseAbs().maxCoeff());
    if (herm > tol.hermiticity) {
        std::ostringstream os;
        os << "HybridState: hermiticity defect " << herm;
        throw InvariantViolation(os.str());
    }
    double tr = (ee.trace() + gg.trace()).real();
    if (tr < 1.0 - tol.trace || tr > 1.0 + tol.hermiticity) {
        std::ostringstream os;
        os << "HybridState: trace " << tr << " outside [1 - " << tol.trace << ", 1]";
        throw InvariantViolation(os.str());
    }
}

} // namespace

HybridState HybridState::from_blocks(Matrix ee, Matrix eg, Matrix ge, Matrix gg,
                                     const Tolerances& tol) {
    check_blocks(ee, eg, ge, gg, tol);
    HybridState st(std::move(ee), std::move(eg), std::move(ge), std::move(gg), tol);
    Eigen::SelfAdjointEigenSolver<Matrix> es(st.full_matrix(), Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    if (lmin < -tol.psd) {
        std::ostringstream os;
        os << "HybridState: eigenvalue " << lmin << " below -" << tol.psd;
        throw InvariantViolation(os.str());
    }
    return st;
}

HybridState HybridState::positive_by_construction(Matrix ee, Matrix eg,
                                                  Matrix ge, Matrix gg,
                                                  const Tolerances& tol) {
    check_blocks(ee, eg, ge, gg, tol);
    return HybridState(std::move(ee), std::move(eg), std::move(ge),
                       std::move(gg), tol);
}

Matrix HybridState::full_matrix() const {
    const int n = osc_dim();
    Matrix full(2 * n, 2 * n);
    full.topLeftCorner(n, n) = ee_;
    full.topRightCorner(n, n) = eg_;
    full.bottomLeftCorner(n, n) = ge_;
    full.bottomRightCorner(n, n) = gg_;
    return full;
}

HybridState build_resource_state(const QubitParams& qubit,
                                 const OscillatorState& osc, Complex beta,
                                 double containment_tol) {
    validate(qubit);
    TruncationReport rep = truncation_report(osc, {beta, -beta});
    if (rep.containment_margin > containment_tol) {
        std::ostringstream os;
        os << "build_resource_state: displaced state leaks "
           << rep.containment_margin << " into the top Fock decile (dim "
           << osc.dim() << ", |beta| " << std::abs(beta) << ")";
        throw TruncationError(os.str(), rep.containment_margin);
    }

    const double p = qubit.excited_prob;
    const Complex r = qubit.coherence;
    Matrix d = displacement_matrix(beta, osc.dim());
    Matrix dr = d * osc.matrix();            // D rho
    Matrix rd = osc.matrix() * d;            // rho D
    Matrix ee = p * (dr * d.adjoint());
    Matrix gg = (1.0 - p) * (d.adjoint() * rd);
    Matrix eg = r * (dr * d);
    Matrix ge = eg.adjoint().eval();

    Tolerances tol = osc.tolerances();
    return HybridState::positive_by_construction(std::move(ee), std::move(eg),
                                                 std::move(ge), std::move(gg), tol);
}

Matrix QubitPartialTranspose::full_matrix() const {
    const auto n = ee.rows();
    Matrix full(2 * n, 2 * n);
    full.topLeftCorner(n, n) = ee;
    full.topRightCorner(n, n) = eg;
    full.bottomLeftCorner(n, n) = ge;
    full.bottomRightCorner(n, n) = gg;
    return full;
}

QubitPartialTranspose partial_transpose_qubit(const HybridState& rho) {
    return QubitPartialTranspose{rho.ee(), rho.ge(), rho.eg(), rho.gg()};
}

OscillatorState partial_trace_qubit(const HybridState& rho) {
    Matrix m = rho.ee() + rho.gg();
    return OscillatorState::positive_by_construction(std::move(m),
                                                     rho.tolerances());
}

Eigen::Matrix2cd partial_trace_osc(const HybridState& rho) {
    Eigen::Matrix2cd m;
    m(0, 0) = rho.ee().trace();
    m(0, 1) = rho.eg().trace();
    m(1, 0) = rho.ge().trace();
    m(1, 1) = rho.gg().trace();
    return m;
}

FanoComponents fano_components(const HybridState& rho) {
    FanoComponents f;
    f.v0 = rho.ee() + rho.gg();
    f.v1 = rho.eg() + rho.ge();
    f.v2 = Complex(0, 1) * rho.eg() - Complex(0, 1) * rho.ge();
    f.v3 = rho.ee() - rho.gg();
    return f;
}

HybridState rotate_qubit_phase(const HybridState& rho, Complex phase) {
    if (std::abs(std::abs(phase) - 1.0) > 1e-12)
        throw std::invalid_argument("rotate_qubit_phase: |phase| != 1");
    // U = diag(phase, 1) on the qubit: eg -> phase eg, ge -> conj(phase) ge
    return HybridState::positive_by_construction(
        rho.ee(), phase * rho.eg(), std::conj(phase) * rho.ge(), rho.gg(),
        rho.tolerances());
}

} // namespace hybridcorr
