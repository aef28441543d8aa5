#include "hybridcorr/protocols.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "hybridcorr/errors.hpp"

namespace hybridcorr {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Unit icosahedron vertices: a spherical 5-design, far more than the
// degree-2 integrand needs.
std::array<Eigen::Vector3d, 12> icosahedron() {
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    const double n = std::sqrt(1.0 + g * g);
    std::array<Eigen::Vector3d, 12> v;
    int k = 0;
    for (double a : {1.0, -1.0})
        for (double b : {g, -g}) {
            v[k++] = Eigen::Vector3d(0, a, b) / n;
            v[k++] = Eigen::Vector3d(a, b, 0) / n;
            v[k++] = Eigen::Vector3d(b, 0, a) / n;
        }
    return v;
}

InputPureState bloch_to_input(const Eigen::Vector3d& n) {
    const double theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
    const double phi = std::atan2(n.y(), n.x());
    InputPureState in;
    in.eta = std::cos(theta / 2.0);
    in.gamma = std::exp(Complex(0.0, phi)) * std::sin(theta / 2.0);
    return in;
}

} // namespace

void InputPureState::validate() const {
    const double norm2 = std::norm(eta) + std::norm(gamma);
    if (std::abs(norm2 - 1.0) > 1e-12)
        throw InvariantViolation("input qubit state is not normalized");
}

namespace {

// Shared cap logic: the displaced families lose independence once the
// D(2 beta) diagonal element at the cutoff leaves the exponentially small
// regime, around index |2 beta|^2 / 4.
int capped_spectral_cover(const Spectrum& spec, double tail_tol, int cap) {
    double tail = 1.0;
    int n = 0;
    while (n < spec.values.size() && tail > tail_tol && n < cap)
        tail -= spec.values(n++);
    return std::max(1, n);
}

} // namespace

int auto_n_kept(const Spectrum& osc_eigvecs, Complex beta, double tail_tol) {
    const int cap =
        static_cast<int>(std::ceil(std::norm(2.0 * beta) / 4.0)) + 5;
    return capped_spectral_cover(osc_eigvecs, tail_tol, cap);
}

int auto_kraus_cutoff(const Spectrum& osc_eigvecs, Complex beta,
                      double tail_tol) {
    // The channel whitens heavy overlaps, so this cap can sit deeper than
    // the Bell-basis one.
    const int cap =
        static_cast<int>(std::ceil(std::norm(2.0 * beta) / 4.0)) + 14;
    return capped_spectral_cover(osc_eigvecs, tail_tol, cap);
}

HybridBellBasis hybrid_bell_basis(const Spectrum& osc_eigvecs, Complex beta,
                                  int n_kept) {
    const Eigen::Index dim = osc_eigvecs.vectors.rows();
    if (n_kept < 1 || 4 * static_cast<Eigen::Index>(n_kept) > 2 * dim)
        throw DegenerateBasisError("n_kept outside [1, dim/2]");
    const Matrix d = displacement_matrix(beta, dim);
    const Matrix u = d * osc_eigvecs.vectors.leftCols(n_kept);
    const Matrix w = d.adjoint() * osc_eigvecs.vectors.leftCols(n_kept);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Matrix raw = Matrix::Zero(2 * dim, 4 * n_kept);
    for (int m = 0; m < n_kept; ++m) {
        raw.block(0, 4 * m + 0, dim, 1) = inv_sqrt2 * u.col(m);
        raw.block(dim, 4 * m + 0, dim, 1) = inv_sqrt2 * w.col(m);
        raw.block(0, 4 * m + 1, dim, 1) = inv_sqrt2 * u.col(m);
        raw.block(dim, 4 * m + 1, dim, 1) = -inv_sqrt2 * w.col(m);
        raw.block(0, 4 * m + 2, dim, 1) = inv_sqrt2 * w.col(m);
        raw.block(dim, 4 * m + 2, dim, 1) = inv_sqrt2 * u.col(m);
        raw.block(0, 4 * m + 3, dim, 1) = inv_sqrt2 * w.col(m);
        raw.block(dim, 4 * m + 3, dim, 1) = -inv_sqrt2 * u.col(m);
    }

    const Matrix gram = raw.adjoint() * raw;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    const double lam_min = es.eigenvalues().minCoeff();
    if (lam_min < 1e-6)
        throw DegenerateBasisError(
            "hybrid Bell family is degenerate; beta too small for n_kept");
    HybridBellBasis basis;
    basis.n_kept = n_kept;
    basis.gram_deviation =
        std::max(std::abs(es.eigenvalues().maxCoeff() - 1.0),
                 std::abs(lam_min - 1.0));
    const Matrix inv_sqrt =
        es.eigenvectors() *
        es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
        es.eigenvectors().adjoint();
    basis.vectors = raw * inv_sqrt;
    return basis;
}

TeleportEngine::TeleportEngine(const HybridState& rho,
                               const Spectrum& osc_eigvecs, Complex beta,
                               int n_kept) {
    if (n_kept < 0) n_kept = auto_n_kept(osc_eigvecs, beta);
    const HybridBellBasis basis = hybrid_bell_basis(osc_eigvecs, beta, n_kept);
    gram_deviation_ = basis.gram_deviation;
    const Eigen::Index dim = rho.osc_dim();
    const Eigen::Index nb = basis.vectors.cols();
    const auto ve = basis.vectors.topRows(dim);
    const auto vg = basis.vectors.bottomRows(dim);

    contractions_.assign(nb, Eigen::Matrix4cd::Zero());
    const Matrix* blocks[2][2] = {{&rho.ee(), &rho.eg()},
                                  {&rho.ge(), &rho.gg()}};
    for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) {
            const Matrix bve = *blocks[a][ap] * ve;
            const Matrix bvg = *blocks[a][ap] * vg;
            for (Eigen::Index k = 0; k < nb; ++k) {
                auto& t = contractions_[k];
                t(0 + a, 0 + ap) = ve.col(k).dot(bve.col(k));
                t(0 + a, 2 + ap) = ve.col(k).dot(bvg.col(k));
                t(2 + a, 0 + ap) = vg.col(k).dot(bve.col(k));
                t(2 + a, 2 + ap) = vg.col(k).dot(bvg.col(k));
            }
        }

    // Coherence phase for Alice's rotation, read off the phi+ coherence
    // contractions (proportional to r times a positive weight).
    Complex z = 0.0;
    for (Eigen::Index k = 0; k < nb; k += 4) z += contractions_[k](0, 3);
    coherence_abs_ = 2.0 * std::abs(z);
    coherence_phase_ = std::abs(z) > 1e-14 ? std::conj(z) / std::abs(z)
                                           : Complex(1.0, 0.0);
}

TeleportResult TeleportEngine::simulate(const InputPureState& input) const {
    input.validate();
    TeleportResult res;
    for (auto& m : res.outcome_states) m.setZero();

    const Complex in[2] = {input.eta, input.gamma};
    Eigen::Matrix2cd phase = Eigen::Matrix2cd::Identity();
    phase(0, 0) = coherence_phase_;
    const Eigen::Matrix2cd sx = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    const Eigen::Matrix2cd sz =
        (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();

    Eigen::Matrix2cd total = Eigen::Matrix2cd::Zero();
    for (size_t k = 0; k < contractions_.size(); ++k) {
        const auto& t = contractions_[k];
        Eigen::Matrix2cd c;
        for (int a = 0; a < 2; ++a)
            for (int ap = 0; ap < 2; ++ap) {
                Complex s = 0.0;
                for (int q = 0; q < 2; ++q)
                    for (int qp = 0; qp < 2; ++qp)
                        s += in[q] * std::conj(in[qp]) * t(2 * q + a, 2 * qp + ap);
                c(a, ap) = s;
            }
        const int kind = static_cast<int>(k % 4);
        Eigen::Matrix2cd corr = phase;
        if (kind >= 2) corr = sx * corr;
        if (kind % 2 == 1) corr = sz * corr;
        const Eigen::Matrix2cd fixed = corr * c * corr.adjoint();
        res.outcome_states[static_cast<size_t>(kind)] += fixed;
        total += fixed;
    }

    Eigen::Vector2cd target(input.eta, input.gamma);
    res.per_input_fidelity = std::max(
        0.0, (target.adjoint() * total * target)(0, 0).real());
    res.success_prob = total.trace().real();
    res.average_fidelity = average_fidelity();
    res.payoff = payoff(res.average_fidelity, res.classical_threshold);
    return res;
}

double TeleportEngine::average_fidelity(int mc_samples,
                                        std::uint64_t seed) const {
    // Shares the contraction table; only the 2x2 work repeats per input.
    const auto fidelity_of = [this](const InputPureState& input) {
        const Complex in[2] = {input.eta, input.gamma};
        Eigen::Matrix2cd phase = Eigen::Matrix2cd::Identity();
        phase(0, 0) = coherence_phase_;
        Eigen::Matrix2cd total = Eigen::Matrix2cd::Zero();
        for (size_t k = 0; k < contractions_.size(); ++k) {
            const auto& t = contractions_[k];
            Eigen::Matrix2cd c;
            for (int a = 0; a < 2; ++a)
                for (int ap = 0; ap < 2; ++ap) {
                    Complex s = 0.0;
                    for (int q = 0; q < 2; ++q)
                        for (int qp = 0; qp < 2; ++qp)
                            s += in[q] * std::conj(in[qp]) *
                                 t(2 * q + a, 2 * qp + ap);
                    c(a, ap) = s;
                }
            const int kind = static_cast<int>(k % 4);
            // Conjugating by sigma_x / sigma_z permutes and flips entries;
            // cheaper done explicitly than with matrix products.
            Eigen::Matrix2cd fixed = phase * c * phase.adjoint();
            if (kind >= 2) {
                fixed = (Eigen::Matrix2cd() << fixed(1, 1), fixed(1, 0),
                         fixed(0, 1), fixed(0, 0))
                            .finished();
            }
            if (kind % 2 == 1) {
                fixed(0, 1) = -fixed(0, 1);
                fixed(1, 0) = -fixed(1, 0);
            }
            total += fixed;
        }
        Eigen::Vector2cd target(input.eta, input.gamma);
        return (target.adjoint() * total * target)(0, 0).real();
    };

    if (mc_samples <= 0) {
        double sum = 0.0;
        for (const auto& n : icosahedron()) sum += fidelity_of(bloch_to_input(n));
        return sum / 12.0;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double sum = 0.0;
    for (int i = 0; i < mc_samples; ++i) {
        Complex e(gauss(rng), gauss(rng));
        Complex g(gauss(rng), gauss(rng));
        const double norm = std::sqrt(std::norm(e) + std::norm(g));
        InputPureState in;
        in.eta = e / norm;
        in.gamma = g / norm;
        sum += fidelity_of(in);
    }
    return sum / mc_samples;
}

TeleportResult teleport_simulate(const HybridState& rho,
                                 const Spectrum& osc_eigvecs,
                                 const InputPureState& input, Complex beta,
                                 int n_kept) {
    return TeleportEngine(rho, osc_eigvecs, beta, n_kept).simulate(input);
}

double teleport_average_fidelity(const HybridState& rho,
                                 const Spectrum& osc_eigvecs, Complex beta,
                                 int n_kept, int mc_samples,
                                 std::uint64_t seed) {
    return TeleportEngine(rho, osc_eigvecs, beta, n_kept)
        .average_fidelity(mc_samples, seed);
}

double payoff(double avg_fidelity, double classical_threshold) {
    if (classical_threshold >= 1.0) return 0.0;
    return std::max(0.0, avg_fidelity - classical_threshold) /
           (1.0 - classical_threshold);
}

Vector rsp_goal_state(double phi, Complex beta, Eigen::Index dim) {
    const Matrix d = displacement_matrix(beta, dim);
    Vector g = d.col(0) + std::exp(Complex(0.0, -phi)) * d.adjoint().col(0);
    const double norm = g.norm();
    if (norm < 1e-12)
        throw DegenerateBasisError(
            "goal state vanishes (phi = pi with coincident branches)");
    return g / norm;
}

Matrix phase_shift_operator(Complex beta, const Spectrum& osc_eigvecs,
                            int n_kept, Eigen::Index dim) {
    if (n_kept < 1 || n_kept > osc_eigvecs.vectors.cols())
        throw DegenerateBasisError("n_kept outside [1, dim]");
    const Matrix d = displacement_matrix(beta, dim);
    // D(-beta) psi_m is a unitary image of an orthonormal set; the span
    // projector needs no orthogonalization step.
    const Matrix w = d.adjoint() * osc_eigvecs.vectors.leftCols(n_kept);
    Matrix op = -2.0 * (w * w.adjoint());
    op.diagonal().array() += 1.0;
    return op;
}

namespace {

struct RspPieces {
    Vector branch_plus;   // D(beta)|0>
    Vector branch_minus;  // D(-beta)|0>
    Matrix w;             // D(-beta) psi_m columns (unitary mode)
    Eigen::Matrix2cd reg[2][2];  // digitalized blocks, unnormalized
    double success = 1.0;
    bool digital = false;
};

RspPieces rsp_prepare(const HybridState& rho, const Spectrum& osc_eigvecs,
                      Complex beta, RspMode mode, int n_kept,
                      const DigitalizeConfig* dig_cfg) {
    RspPieces pieces;
    const Eigen::Index dim = rho.osc_dim();
    if (mode == RspMode::unitary_correction) {
        const Matrix d = displacement_matrix(beta, dim);
        pieces.branch_plus = d.col(0);
        pieces.branch_minus = d.adjoint().col(0);
        if (n_kept < 0) n_kept = auto_n_kept(osc_eigvecs, beta);
        pieces.w = d.adjoint() * osc_eigvecs.vectors.leftCols(n_kept);
        return pieces;
    }
    pieces.digital = true;
    DigitalizeConfig cfg;
    if (dig_cfg) {
        cfg = *dig_cfg;
    } else {
        cfg.beta = beta;
        cfg.kraus_cutoff = auto_kraus_cutoff(osc_eigvecs, beta);
    }
    // Large-overlap cutoffs are routine here; the channel whitens as needed.
    const DigitalizeResult dig =
        digitalize_channel(rho, osc_eigvecs, cfg, 1e-6);
    pieces.success = dig.success_prob;
    const Eigen::Matrix4cd scaled = dig.two_qubit.rho * dig.success_prob;
    for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
            pieces.reg[a][ap] = scaled.block<2, 2>(2 * a, 2 * ap);
    return pieces;
}

} // namespace

RspResult rsp_simulate(const HybridState& rho, const Spectrum& osc_eigvecs,
                       double phi, Complex beta, RspMode mode, int n_kept,
                       const DigitalizeConfig* dig_cfg, int quadrature_order) {
    const RspPieces pieces =
        rsp_prepare(rho, osc_eigvecs, beta, mode, n_kept, dig_cfg);
    RspResult res;
    res.phi = phi;
    res.mode = mode;
    res.success_prob = pieces.success;

    const Complex eip = std::exp(Complex(0.0, phi));
    const Eigen::Matrix2cd sz = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();

    const auto fidelity_at = [&](double angle) {
        const Complex ei = std::exp(Complex(0.0, angle));
        if (pieces.digital) {
            const Eigen::Matrix2cd v0 = pieces.reg[0][0] + pieces.reg[1][1];
            const Eigen::Matrix2cd coh =
                ei * pieces.reg[0][1] + std::conj(ei) * pieces.reg[1][0];
            const Eigen::Matrix2cd cp = 0.5 * (v0 + coh);
            const Eigen::Matrix2cd cm = sz * (0.5 * (v0 - coh)) * sz;
            Eigen::Vector2cd goal(1.0, std::conj(ei));
            goal /= std::sqrt(2.0);
            return std::max(
                0.0, (goal.adjoint() * (cp + cm) * goal)(0, 0).real());
        }
        Vector goal = pieces.branch_plus + std::conj(ei) * pieces.branch_minus;
        goal /= goal.norm();
        const Vector goal_minus =
            goal - 2.0 * (pieces.w * (pieces.w.adjoint() * goal));
        const Matrix coh =
            ei * rho.eg() + std::conj(ei) * rho.ge();
        // <g|rho+|g> + <g-|rho-|g-> with rho+- = (v0 +- coh)/2.
        const Complex p1 = goal.dot(rho.ee() * goal) + goal.dot(rho.gg() * goal);
        const Complex p2 = goal.dot(coh * goal);
        const Complex m1 = goal_minus.dot(rho.ee() * goal_minus) +
                           goal_minus.dot(rho.gg() * goal_minus);
        const Complex m2 = goal_minus.dot(coh * goal_minus);
        return std::max(0.0,
                        0.5 * ((p1 + p2).real() + (m1 - m2).real()));
    };

    res.fidelity_at_phi = fidelity_at(phi);

    double sum = 0.0;
    for (int k = 0; k < quadrature_order; ++k)
        sum += fidelity_at((k + 0.5) * 2.0 * kPi / quadrature_order);
    res.average_fidelity = sum / quadrature_order;

    if (pieces.digital) {
        const Eigen::Matrix2cd v0 = pieces.reg[0][0] + pieces.reg[1][1];
        const Eigen::Matrix2cd coh =
            eip * pieces.reg[0][1] + std::conj(eip) * pieces.reg[1][0];
        res.conditional_plus = 0.5 * (v0 + coh);
        res.conditional_minus = sz * (0.5 * (v0 - coh)) * sz;
        res.classical_threshold = 0.5;
    } else {
        const Matrix v0 = rho.ee() + rho.gg();
        const Matrix coh = eip * rho.eg() + std::conj(eip) * rho.ge();
        res.conditional_plus = 0.5 * (v0 + coh);
        Matrix phase_op = -2.0 * (pieces.w * pieces.w.adjoint());
        phase_op.diagonal().array() += 1.0;
        res.conditional_minus =
            phase_op * (0.5 * (v0 - coh)) * phase_op.adjoint();
        res.classical_threshold =
            rsp_classical_threshold(beta, rho.osc_dim(), quadrature_order);
    }
    res.prob_plus = res.conditional_plus.trace().real();
    res.prob_minus = res.conditional_minus.trace().real();
    res.payoff = payoff(res.average_fidelity, res.classical_threshold);
    return res;
}

double rsp_average_fidelity(const HybridState& rho,
                            const Spectrum& osc_eigvecs, Complex beta,
                            RspMode mode, int n_kept,
                            const DigitalizeConfig* dig_cfg,
                            int quadrature_order) {
    const RspPieces pieces =
        rsp_prepare(rho, osc_eigvecs, beta, mode, n_kept, dig_cfg);
    const Eigen::Matrix2cd sz = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
    double sum = 0.0;
    for (int k = 0; k < quadrature_order; ++k) {
        const double angle = (k + 0.5) * 2.0 * kPi / quadrature_order;
        const Complex ei = std::exp(Complex(0.0, angle));
        if (pieces.digital) {
            const Eigen::Matrix2cd v0 = pieces.reg[0][0] + pieces.reg[1][1];
            const Eigen::Matrix2cd coh =
                ei * pieces.reg[0][1] + std::conj(ei) * pieces.reg[1][0];
            Eigen::Vector2cd goal(1.0, std::conj(ei));
            goal /= std::sqrt(2.0);
            const Eigen::Matrix2cd cm = sz * (0.5 * (v0 - coh)) * sz;
            sum += std::max(
                0.0,
                (goal.adjoint() * (0.5 * (v0 + coh) + cm) * goal)(0, 0).real());
            continue;
        }
        Vector goal = pieces.branch_plus + std::conj(ei) * pieces.branch_minus;
        goal /= goal.norm();
        const Vector goal_minus =
            goal - 2.0 * (pieces.w * (pieces.w.adjoint() * goal));
        const Matrix coh = ei * rho.eg() + std::conj(ei) * rho.ge();
        const Complex p1 = goal.dot(rho.ee() * goal) + goal.dot(rho.gg() * goal);
        const Complex p2 = goal.dot(coh * goal);
        const Complex m1 = goal_minus.dot(rho.ee() * goal_minus) +
                           goal_minus.dot(rho.gg() * goal_minus);
        const Complex m2 = goal_minus.dot(coh * goal_minus);
        sum += std::max(0.0, 0.5 * ((p1 + p2).real() + (m1 - m2).real()));
    }
    return sum / quadrature_order;
}

double rsp_classical_threshold(Complex beta, Eigen::Index dim,
                               int quadrature_order) {
    if (dim <= 0) dim = recommended_dim(std::abs(beta), 0.0);
    const Matrix d = displacement_matrix(beta, dim);
    const Vector plus = d.col(0);
    const Vector minus = d.adjoint().col(0);
    double sum = 0.0;
    for (int k = 0; k < quadrature_order; ++k) {
        const double angle = (k + 0.5) * 2.0 * kPi / quadrature_order;
        Vector goal = plus + std::exp(Complex(0.0, -angle)) * minus;
        goal /= goal.norm();
        sum += 0.5 * (std::norm(plus.dot(goal)) + std::norm(minus.dot(goal)));
    }
    return sum / quadrature_order;
}

std::pair<double, double> rsp_payoff_bounds(double dg) {
    const double lower = std::max(0.0, (3.0 * dg - 1.0) / (1.0 + dg));
    return {lower, std::sqrt(std::max(0.0, dg))};
}

} // namespace hybridcorr
