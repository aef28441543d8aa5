#include "hybridcorr/digitalize.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "hybridcorr/errors.hpp"

namespace hybridcorr {

namespace {

// Register-block contraction <x_j|B|y_j> summed over the family.
Complex contract(const Matrix& x, const Matrix& by) {
    return x.conjugate().cwiseProduct(by).sum();
}

double psd_floor(const Eigen::Matrix4cd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace

TwoQubitState TwoQubitState::from_matrix(const Eigen::Matrix4cd& m) {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw InvariantViolation("two-qubit state is not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > 1e-10 ||
        std::abs(m.trace().imag()) > 1e-10)
        throw InvariantViolation("two-qubit state trace differs from 1");
    const Eigen::Matrix4cd herm = 0.5 * (m + m.adjoint());
    if (psd_floor(herm) < -1e-10)
        throw InvariantViolation("two-qubit state has a negative eigenvalue");
    return TwoQubitState{herm};
}

TwoQubitState digitalized_target(const QubitParams& qubit) {
    validate(qubit);
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = qubit.excited_prob;
    m(0, 3) = qubit.coherence;
    m(3, 0) = std::conj(qubit.coherence);
    m(3, 3) = 1.0 - qubit.excited_prob;
    return TwoQubitState{m};
}

double spectral_tail(const OscillatorState& osc, int n_kept) {
    const Spectrum spec = spectral_decomposition(osc);
    double kept = 0.0;
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(n_kept, spec.values.size()); ++i)
        kept += spec.values(i);
    return std::max(0.0, 1.0 - kept);
}

DigitalizeResult digitalize_channel(const HybridState& rho,
                                    const Spectrum& osc_eigvecs,
                                    const DigitalizeConfig& cfg,
                                    double completeness_tol) {
    const Eigen::Index dim = rho.osc_dim();
    const int n = cfg.kraus_cutoff;
    if (n < 1 || n > osc_eigvecs.vectors.cols())
        throw ChannelConstructionError("kraus_cutoff outside [1, dim]");

    const Matrix d = displacement_matrix(cfg.beta, dim);
    const Matrix psi = osc_eigvecs.vectors.leftCols(n);
    Matrix u = d * psi;           // register-e branch
    Matrix w = d.adjoint() * psi; // register-g branch

    // Gap of the raw family against the projector onto its span, from the
    // singular values of [U W]: eigenvalues of sum O'O there are sigma^2.
    Matrix stacked(dim, 2 * n);
    stacked.leftCols(n) = u;
    stacked.rightCols(n) = w;
    Eigen::BDCSVD<Matrix> svd(stacked,
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double gap = 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double s2 = sv(i) * sv(i);
        gap = std::max(gap, std::abs(s2 - (sv(i) > 0.5 ? 1.0 : 0.0)));
        if (sv(i) > 1e-6) ++rank;
    }

    bool whitened = false;
    if (gap > completeness_tol) {
        // The two displaced families overlap too much for the raw operators
        // to stay trace-nonincreasing. Replace [U W] by its polar factor:
        // the closest orthonormal family, for which sum O'O is exactly the
        // span projector. Degenerate families (beta too small) cannot be
        // whitened meaningfully.
        if (2 * n - rank > n / 4) {
            std::ostringstream msg;
            msg << "displaced families are degenerate (rank " << rank
                << " of " << 2 * n << "); beta likely too small";
            throw ChannelConstructionError(msg.str());
        }
        const Matrix polar = svd.matrixU().leftCols(rank) *
                             svd.matrixV().leftCols(rank).adjoint();
        u = polar.leftCols(n);
        w = polar.rightCols(n);
        whitened = true;
    }

    // Register blocks: for each qubit block B, the 2x2 register block is
    // sum_j [[u'Bu, u'Bw], [w'Bu, w'Bw]]_j.
    Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
    Eigen::Matrix2cd fail = Eigen::Matrix2cd::Zero();

    // Fail-sector weight per qubit block: tr[B (1 - sum O'O)], clamped PSD.
    Matrix complement = -u * u.adjoint() - w * w.adjoint();
    complement.diagonal().array() += 1.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(complement);
    Matrix clamped = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        if (es.eigenvalues()(i) > 0.0)
            clamped.noalias() += es.eigenvalues()(i) *
                                 es.eigenvectors().col(i) *
                                 es.eigenvectors().col(i).adjoint();

    const Matrix* blocks[2][2] = {{&rho.ee(), &rho.eg()},
                                  {&rho.ge(), &rho.gg()}};
    for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) {
            const Matrix& b = *blocks[a][ap];
            const Matrix bu = b * u;
            const Matrix bw = b * w;
            out(2 * a + 0, 2 * ap + 0) = contract(u, bu);
            out(2 * a + 0, 2 * ap + 1) = contract(u, bw);
            out(2 * a + 1, 2 * ap + 0) = contract(w, bu);
            out(2 * a + 1, 2 * ap + 1) = contract(w, bw);
            fail(a, ap) = (b.transpose().cwiseProduct(clamped)).sum();
        }

    DigitalizeResult result;
    result.success_prob = out.trace().real();
    if (result.success_prob <= 0.0)
        throw ChannelConstructionError(
            "no state weight inside the displaced subspaces; beta mismatch");
    out = 0.5 * (out + out.adjoint().eval());
    result.two_qubit = TwoQubitState::from_matrix(out / result.success_prob);
    result.fail_block = 0.5 * (fail + fail.adjoint().eval());
    result.completeness_gap = gap;
    result.whitened = whitened;
    result.fail_policy = cfg.fail_policy;
    return result;
}

double fidelity_two_qubit(const TwoQubitState& a, const TwoQubitState& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(a.rho);
    Eigen::Vector4d lam = es.eigenvalues().cwiseMax(0.0);
    const Eigen::Matrix4cd sqrt_a = es.eigenvectors() *
                                    lam.cwiseSqrt().asDiagonal() *
                                    es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> inner(sqrt_a * b.rho *
                                                          sqrt_a);
    double root_sum = 0.0;
    for (int i = 0; i < 4; ++i)
        root_sum += std::sqrt(std::max(0.0, inner.eigenvalues()(i)));
    return std::min(1.0, root_sum * root_sum);
}

double channel_fidelity(const DigitalizeResult& result,
                        const TwoQubitState& target) {
    const double f = fidelity_two_qubit(result.two_qubit, target);
    if (result.fail_policy == FailPolicy::renormalize_success) return f;
    // Flag sector is orthogonal to any two-qubit target, so it contributes
    // zero fidelity and the success block enters with its own weight.
    return result.success_prob * f;
}

} // namespace hybridcorr
