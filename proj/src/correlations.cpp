#include "hybridcorr/correlations.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <limits>

namespace hybridcorr {

namespace {

constexpr double kLog2 = 0.6931471805599453094;

double log2_safe(double x) { return std::log(x) / kLog2; }

// Measures are nonnegative by construction; eigensolver noise can push a
// value a few ulp below zero. Anything worse than round-off is reported.
double clamp_measure(double value, const char* what) {
    if (value >= 0.0) return value;
    if (value < -1e-9)
        std::cerr << "hybridcorr: clamped " << what << " = " << value
                  << " to 0\n";
    return 0.0;
}

double binary_entropy(double p) {
    double h = 0.0;
    if (p > 0.0) h -= p * log2_safe(p);
    if (p < 1.0) h -= (1.0 - p) * log2_safe(1.0 - p);
    return h;
}

// Base-2 von Neumann entropy from a Hermitian matrix. Negative eigenvalues
// within tolerance are treated as zero.
double entropy_of(const Matrix& herm) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm,
                                             Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double lam = es.eigenvalues()(i);
        if (lam > 1e-15) s -= lam * log2_safe(lam);
    }
    return s;
}

double trace_product_real(const Matrix& a, const Matrix& b) {
    return a.transpose().cwiseProduct(b).sum().real();
}

} // namespace

double negativity(const HybridState& rho) {
    const Matrix pt = partial_transpose_qubit(rho).full_matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
    const double trace_norm = es.eigenvalues().array().abs().sum();
    return clamp_measure(trace_norm - 1.0, "negativity");
}

double negativity_asymptote(const QubitParams& qubit) {
    return 2.0 * std::abs(qubit.coherence);
}

double negativity_witness_bound(const HybridState& rho,
                                const Spectrum& osc_eigvecs, Complex beta) {
    const Matrix d = displacement_matrix(beta, rho.osc_dim());
    const QubitPartialTranspose pt = partial_transpose_qubit(rho);
    // The transpose swaps the coherence blocks, so its negative eigenvectors
    // pair |e> with the D^dag branch. Test vectors
    // (|e> D^dag psi_m - e^{i phi_m}|g> D psi_m)/sqrt2 are exactly orthonormal
    // (each displaced family is a unitary image of an orthonormal set), so the
    // summed expectations majorize the negative part of the spectrum.
    const Matrix u = d.adjoint() * osc_eigvecs.vectors;
    const Matrix w = d * osc_eigvecs.vectors;
    const Matrix ee_u = pt.ee * u;
    const Matrix gg_w = pt.gg * w;
    const Matrix eg_w = pt.eg * w;
    double total = 0.0;
    for (Eigen::Index m = 0; m < u.cols(); ++m) {
        const double diag = 0.5 * ((u.col(m).dot(ee_u.col(m))).real() +
                                   (w.col(m).dot(gg_w.col(m))).real());
        // Per-vector optimal phase; reduces to e^{i phi} = r/|r| on the
        // displaced-thermal family, and keeps the bound well defined at r=0.
        const double off = std::abs(u.col(m).dot(eg_w.col(m)));
        // Only negative expectations count: over a complete family the raw
        // sum telescopes to 1/2 - sum|off| and the bound would collapse.
        total += std::min(0.0, diag - off);
    }
    return 2.0 * std::max(0.0, -total);
}

Eigen::Matrix3d s_matrix(const HybridState& rho) {
    const FanoComponents f = fano_components(rho);
    const Matrix* v[3] = {&f.v1, &f.v2, &f.v3};
    Eigen::Matrix3d s;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            s(i, j) = trace_product_real(*v[i], *v[j]);
            s(j, i) = s(i, j);
        }
    return s;
}

double geometric_discord(const HybridState& rho) {
    const Eigen::Matrix3d s = s_matrix(rho);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(s,
                                                      Eigen::EigenvaluesOnly);
    const double lam_max = es.eigenvalues().maxCoeff();
    return clamp_measure(s.trace() - lam_max, "geometric discord");
}

double geometric_discord_bruteforce(const HybridState& rho,
                                    const SphereOptimizerConfig& cfg) {
    const Matrix& ee = rho.ee();
    const Matrix& eg = rho.eg();
    const Matrix& ge = rho.ge();
    const Matrix& gg = rho.gg();
    const auto objective = [&](const Eigen::Vector3d& n) {
        // P = (1/2)(I + n . sigma) acting on the qubit only, so
        // rho (P x 1) mixes blocks with scalar weights.
        const Complex p_ee(0.5 * (1.0 + n.z()), 0.0);
        const Complex p_gg(0.5 * (1.0 - n.z()), 0.0);
        const Complex p_eg(0.5 * n.x(), -0.5 * n.y());
        const Complex p_ge(0.5 * n.x(), 0.5 * n.y());
        const Matrix m_ee = p_ee * ee + p_ge * eg;
        const Matrix m_eg = p_eg * ee + p_gg * eg;
        const Matrix m_ge = p_ee * ge + p_ge * gg;
        const Matrix m_gg = p_eg * ge + p_gg * gg;
        const double tr_rho2p =
            trace_product_real(ee, m_ee) + trace_product_real(eg, m_ge) +
            trace_product_real(ge, m_eg) + trace_product_real(gg, m_gg);
        const double tr_mp2 =
            trace_product_real(m_ee, m_ee) + 2.0 * trace_product_real(m_eg, m_ge) +
            trace_product_real(m_gg, m_gg);
        return 4.0 * (tr_rho2p - tr_mp2);
    };
    const SphereMinimum best = minimize_over_sphere(objective, cfg);
    return clamp_measure(best.value, "geometric discord (direct)");
}

double geometric_discord_asymptote(const QubitParams& qubit, double purity_b0) {
    const double r = std::abs(qubit.coherence);
    return 4.0 * purity_b0 * r * r;
}

double entropic_discord_digitalized(const QubitParams& qubit) {
    validate(qubit);
    const double p = qubit.excited_prob;
    const double r2 = std::norm(qubit.coherence);
    const double eps = p * (1.0 - p) - r2;
    const double h2 = binary_entropy(p);
    // Maximal coherence: the joint state is pure, discord equals H2(p).
    if (eps <= 1e-14) return h2;
    const double zeta = std::sqrt((1.0 - 2.0 * p) * (1.0 - 2.0 * p) + 4.0 * r2);
    double bracket = log2_safe(eps);
    if (zeta > 1e-15) {
        if (zeta >= 1.0) return h2;  // only reachable with eps ~ 0
        bracket += zeta * log2_safe((1.0 + zeta) / (1.0 - zeta));
    }
    return clamp_measure(h2 + 0.5 * bracket, "entropic discord");
}

double entropic_discord_numeric(const HybridState& rho,
                                const SphereOptimizerConfig& cfg,
                                SphereMinimum* found) {
    const Eigen::Index dim = rho.osc_dim();
    const FanoComponents f = fano_components(rho);

    // Oscillator support basis: conditional states live inside the range of
    // the marginal v0/ tr v0, so compressing there is exact.
    Eigen::SelfAdjointEigenSolver<Matrix> es_marginal(f.v0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < dim; ++i)
        if (es_marginal.eigenvalues()(i) > 1e-13) keep.push_back(i);
    Matrix basis(dim, static_cast<Eigen::Index>(keep.size()));
    for (Eigen::Index c = 0; c < basis.cols(); ++c)
        basis.col(c) = es_marginal.eigenvectors().col(keep[static_cast<size_t>(c)]);

    const Matrix v0 = basis.adjoint() * (f.v0 * basis);
    const Matrix v1 = basis.adjoint() * (f.v1 * basis);
    const Matrix v2 = basis.adjoint() * (f.v2 * basis);
    const Matrix v3 = basis.adjoint() * (f.v3 * basis);
    const Eigen::Index k = v0.rows();

    const Eigen::Matrix2cd qubit_marginal = partial_trace_osc(rho);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es_a(
        qubit_marginal, Eigen::EigenvaluesOnly);
    double s_a = 0.0;
    for (int i = 0; i < 2; ++i) {
        double lam = es_a.eigenvalues()(i);
        if (lam > 1e-15) s_a -= lam * log2_safe(lam);
    }

    Matrix joint(2 * k, 2 * k);
    joint.topLeftCorner(k, k) = basis.adjoint() * (rho.ee() * basis);
    joint.topRightCorner(k, k) = basis.adjoint() * (rho.eg() * basis);
    joint.bottomLeftCorner(k, k) = basis.adjoint() * (rho.ge() * basis);
    joint.bottomRightCorner(k, k) = basis.adjoint() * (rho.gg() * basis);
    const double s_ab = entropy_of(joint);

    const auto conditional_entropy = [&](const Eigen::Vector3d& n) {
        const Matrix dir = n.x() * v1 + n.y() * v2 + n.z() * v3;
        double total = 0.0;
        for (int sign = -1; sign <= 1; sign += 2) {
            Matrix cond = 0.5 * (v0 + double(sign) * dir);
            const double prob = cond.trace().real();
            if (prob < 1e-14) continue;
            cond /= prob;
            total += prob * entropy_of(cond);
        }
        return total;
    };
    const SphereMinimum best = minimize_over_sphere(conditional_entropy, cfg);
    const double dz =
        clamp_measure(s_a - s_ab + best.value, "entropic discord (numeric)");
    if (found) {
        found->value = dz;
        found->direction = best.direction;
    }
    return dz;
}

CorrelationReport correlation_report(const QubitParams& qubit,
                                     const OscillatorState& osc, Complex beta,
                                     const CorrelationReportOptions& opts) {
    CorrelationReport rep;
    rep.purity_b0 = purity(osc);
    rep.truncation = truncation_report(osc, {beta, -beta});
    const HybridState rho =
        build_resource_state(qubit, osc, beta, opts.containment_tol);
    rep.negativity = negativity(rho);
    rep.negativity_asymptote = negativity_asymptote(qubit);
    rep.geometric_discord = geometric_discord(rho);
    rep.geometric_discord_asymptote =
        geometric_discord_asymptote(qubit, rep.purity_b0);
    rep.dz_digitalized = entropic_discord_digitalized(qubit);
    rep.dz_numeric = std::numeric_limits<double>::quiet_NaN();
    if (opts.with_dz_numeric)
        rep.dz_numeric = entropic_discord_numeric(rho, opts.optimizer);
    return rep;
}

} // namespace hybridcorr
