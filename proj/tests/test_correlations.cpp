#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hybridcorr/correlations.hpp"

using namespace hybridcorr;

namespace {

QubitParams qubit(double p, Complex r) {
    QubitParams q;
    q.excited_prob = p;
    q.coherence = r;
    return q;
}

// Random bipartite 2 x d density matrix wrapped in HybridState blocks.
HybridState random_two_by_d(int d, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Matrix a(2 * d, 2 * d);
    for (int i = 0; i < 2 * d; ++i)
        for (int j = 0; j < 2 * d; ++j) a(i, j) = Complex(g(rng), g(rng));
    Matrix m = a * a.adjoint();
    m /= m.trace();
    return HybridState::positive_by_construction(
        m.block(0, 0, d, d), m.block(0, d, d, d), m.block(d, 0, d, d),
        m.block(d, d, d, d), Tolerances{});
}

} // namespace

TEST_CASE("negativity: product states and the large-displacement limit") {
    const OscillatorState osc = thermal_state(0.7, 40);
    const HybridState prod = build_resource_state(
        qubit(0.4, Complex(0.2, 0.1)), osc, Complex(0.0, 0.0));
    CHECK(negativity(prod) < 1e-12);

    const OscillatorState vac = thermal_state(0.0, 200);
    for (double r : {0.1, 0.25, 0.5}) {
        const HybridState rho =
            build_resource_state(qubit(0.5, r), vac, Complex(4.0, 0.0));
        CHECK(std::abs(negativity(rho) - 2.0 * r) < 1e-3);
    }
    CHECK(negativity_asymptote(qubit(0.3, Complex(0.0, 0.25))) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("negativity converges monotonically in beta") {
    const OscillatorState vac = thermal_state(0.0, 140);
    double prev_gap = 2.0;
    for (double b : {1.0, 2.0, 3.0, 4.0}) {
        const HybridState rho =
            build_resource_state(qubit(0.5, 0.5), vac, Complex(b, 0.0));
        const double gap = std::abs(negativity(rho) - 1.0);
        // strict decrease until the eigensolver round-off floor
        CHECK((gap < prev_gap || gap < 1e-12));
        prev_gap = gap;
    }
}

TEST_CASE("S matrix reaches its limit form") {
    // limit: mu * diag(2|r|^2, 2|r|^2, 1 - 2p(1-p)); the displaced branches
    // have orthogonal supports, so tr[(ee - gg)^2] -> (p^2 + (1-p)^2) mu
    const OscillatorState vac = thermal_state(0.0, 200);
    const Eigen::Matrix3d s1 =
        s_matrix(build_resource_state(qubit(0.5, 0.5), vac, Complex(4.0, 0.0)));
    Eigen::Matrix3d want;
    want << 0.5, 0, 0, 0, 0.5, 0, 0, 0, 0.5;
    CHECK((s1 - want).cwiseAbs().maxCoeff() < 1e-3);

    const OscillatorState th = thermal_state(0.5, 240);  // mu = 1/2
    const Eigen::Matrix3d s2 =
        s_matrix(build_resource_state(qubit(0.5, 0.5), th, Complex(4.0, 0.0)));
    CHECK((s2 - 0.5 * want).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("geometric discord equals its asymptote at large beta") {
    const OscillatorState th = thermal_state(0.5, 240);
    for (double r : {0.1, 0.3, 0.5}) {
        const HybridState rho =
            build_resource_state(qubit(0.5, r), th, Complex(4.0, 0.0));
        const double dg = geometric_discord(rho);
        CHECK(std::abs(dg - geometric_discord_asymptote(qubit(0.5, r), 0.5)) <
              5e-3);
        CHECK(dg <= purity(th) + 1e-6);
    }
}

TEST_CASE("geometric discord matches brute-force minimization") {
    for (unsigned seed = 0; seed < 8; ++seed) {
        const int d = 2 + static_cast<int>(seed % 5);
        const HybridState rho = random_two_by_d(d, 100 + seed);
        const double closed = geometric_discord(rho);
        const double brute = geometric_discord_bruteforce(rho);
        CAPTURE(seed);
        CHECK(std::abs(closed - brute) < 1e-6);
    }
}

TEST_CASE("digitalized entropic discord closed form") {
    // exact endpoint
    CHECK(entropic_discord_digitalized(qubit(0.5, 0.5)) == 1.0);
    CHECK(entropic_discord_digitalized(qubit(0.3, 0.0)) < 1e-12);

    // removable singularity along |r|^2 = p(1-p)
    const double p = 0.3;
    const double rmax = std::sqrt(p * (1 - p));
    const double at_edge = entropic_discord_digitalized(qubit(p, rmax));
    const double near_edge =
        entropic_discord_digitalized(qubit(p, rmax * (1 - 1e-9)));
    CHECK(std::abs(at_edge - near_edge) < 1e-6);
}

TEST_CASE("numeric entropic discord against the two-qubit closed form") {
    // Digitalized targets embedded as dim-2 oscillator blocks make the
    // closed form an oracle for the measurement minimization.
    for (double p : {0.2, 0.35, 0.5}) {
        for (double frac : {0.4, 0.9}) {
            const double r = frac * std::sqrt(p * (1 - p));
            Matrix ee = Matrix::Zero(2, 2), eg = Matrix::Zero(2, 2),
                   gg = Matrix::Zero(2, 2);
            ee(0, 0) = p;
            gg(1, 1) = 1 - p;
            eg(0, 1) = r;
            const HybridState two = HybridState::positive_by_construction(
                ee, eg, eg.adjoint(), gg, Tolerances{});
            const double numeric = entropic_discord_numeric(two);
            const double closed = entropic_discord_digitalized(qubit(p, r));
            CAPTURE(p);
            CAPTURE(frac);
            CHECK(std::abs(numeric - closed) < 1e-6);
        }
    }
}

TEST_CASE("numeric entropic discord on the resource family") {
    const OscillatorState vac = thermal_state(0.0, 200);
    const HybridState rho =
        build_resource_state(qubit(0.5, 0.5), vac, Complex(4.0, 0.0));
    SphereMinimum found;
    const double dz = entropic_discord_numeric(rho, {}, &found);
    CHECK(dz > 0.99);
    CHECK(dz < 1.0 + 1e-9);
    // at the symmetric point every measurement direction is optimal, so only
    // the reported minimum itself is pinned down
    CHECK(found.value == dz);
    CHECK(std::abs(found.direction.norm() - 1.0) < 1e-9);

    // bounded below by the digitalized value (finite-beta cushion)
    const HybridState rho2 =
        build_resource_state(qubit(0.5, 0.3), vac, Complex(4.0, 0.0));
    CHECK(entropic_discord_numeric(rho2) >
          entropic_discord_digitalized(qubit(0.5, 0.3)) - 5e-3);
}

TEST_CASE("all measures are invariant under qubit phase rotation") {
    const OscillatorState th = thermal_state(0.4, 120);
    const HybridState rho = build_resource_state(
        qubit(0.45, Complex(0.25, 0.2)), th, Complex(2.0, 0.0));
    const HybridState rot =
        rotate_qubit_phase(rho, std::exp(Complex(0.0, 0.83)));
    CHECK(std::abs(negativity(rho) - negativity(rot)) < 1e-9);
    CHECK(std::abs(geometric_discord(rho) - geometric_discord(rot)) < 1e-9);
    CHECK(std::abs(entropic_discord_numeric(rho) -
                   entropic_discord_numeric(rot)) < 1e-6);
}

TEST_CASE("witness lower-bounds the negativity and saturates it") {
    const OscillatorState vac = thermal_state(0.0, 200);
    const Spectrum sp = spectral_decomposition(vac);
    const HybridState rho =
        build_resource_state(qubit(0.5, 0.5), vac, Complex(4.0, 0.0));
    const double w = negativity_witness_bound(rho, sp, Complex(4.0, 0.0));
    CHECK(w >= 0.99);
    CHECK(w <= negativity(rho) + 1e-9);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        const double p = 0.2 + 0.6 * u(rng);
        const double r = u(rng) * std::sqrt(p * (1 - p));
        const double arg = 2 * M_PI * u(rng);
        const double nbar = 1.5 * u(rng);
        const Complex beta(2.5 + 1.5 * u(rng), 0.0);
        const int dim = recommended_dim(std::abs(beta), nbar);
        const OscillatorState osc = thermal_state(nbar, dim);
        const HybridState st = build_resource_state(
            qubit(p, r * std::exp(Complex(0.0, arg))), osc, beta);
        const double bound =
            negativity_witness_bound(st, spectral_decomposition(osc), beta);
        CAPTURE(k);
        CHECK(bound <= negativity(st) + 1e-9);
    }
}

TEST_CASE("correlation report carries every measure and diagnostics") {
    const OscillatorState vac = thermal_state(0.0, 160);
    CorrelationReportOptions opts;
    opts.with_dz_numeric = true;
    const CorrelationReport rep =
        correlation_report(qubit(0.5, 0.25), vac, Complex(3.0, 0.0), opts);
    CHECK(std::abs(rep.negativity - 0.5) < 1e-3);
    CHECK(rep.negativity_asymptote == 0.5);
    CHECK(std::abs(rep.geometric_discord - 0.25) < 1e-3);
    CHECK(rep.purity_b0 == doctest::Approx(1.0));
    CHECK(std::isfinite(rep.dz_numeric));
    CHECK(rep.truncation.containment_margin < 1e-6);

    CorrelationReportOptions no_dz;
    const CorrelationReport r2 =
        correlation_report(qubit(0.5, 0.25), vac, Complex(3.0, 0.0), no_dz);
    CHECK(std::isnan(r2.dz_numeric));
}
