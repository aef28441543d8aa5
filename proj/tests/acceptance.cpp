// End-to-end acceptance gate: every analytic limit the library promises,
// checked at finite truncation with frozen parameters and tolerances.
// Prints one PASS/FAIL line per criterion; exit code is the failure count.

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "hybridcorr/commands.hpp"
#include "hybridcorr/correlations.hpp"
#include "hybridcorr/digitalize.hpp"
#include "hybridcorr/protocols.hpp"
#include "hybridcorr/sweep.hpp"

using namespace hybridcorr;

namespace {

int g_failures = 0;

void report(bool ok, int idx, const char* label, const std::string& detail) {
    std::printf("%s criterion %02d: %s (%s)\n", ok ? "PASS" : "FAIL", idx,
                label, detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b);
    return buf;
}

QubitParams qp(double p, Complex r) {
    QubitParams q;
    q.excited_prob = p;
    q.coherence = r;
    return q;
}

HybridState embed_two_level(double p, double r) {
    Matrix ee = Matrix::Zero(2, 2), eg = Matrix::Zero(2, 2),
           gg = Matrix::Zero(2, 2);
    ee(0, 0) = p;
    gg(1, 1) = 1 - p;
    eg(0, 1) = r;
    return HybridState::positive_by_construction(ee, eg, eg.adjoint(), gg,
                                                 Tolerances{});
}

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

// 1. Negativity reaches 2|r| for well-separated displacements.
void criterion_negativity_limit() {
    const OscillatorState vac = thermal_state(0.0, 200);
    double worst = 0.0;
    for (double r : {0.1, 0.25, 0.5}) {
        const HybridState rho =
            build_resource_state(qp(0.5, r), vac, Complex(4.0, 0.0));
        worst = std::max(worst, std::abs(negativity(rho) - 2 * r));
    }
    report(worst <= 1e-3, 1, "negativity -> 2|r| at large displacement",
           fmt("worst gap %.2e, tol 1e-3", worst));
}

// 2. Geometric discord reaches 4 mu |r|^2, including thermal oscillators.
void criterion_geometric_discord_limit() {
    struct Case {
        double nbar;
        int dim;
        double beta;
        double tol;
    };
    const Case cases[] = {
        {0.0, 200, 4.0, 5e-3}, {0.5, 240, 4.0, 5e-3}, {4.5, 350, 6.0, 1e-2}};
    double worst = 0.0;
    bool ok = true;
    for (const Case& c : cases) {
        const OscillatorState osc = thermal_state(c.nbar, c.dim);
        const double mu = purity(osc);
        for (double r : {0.1, 0.25, 0.5}) {
            const HybridState rho =
                build_resource_state(qp(0.5, r), osc, Complex(c.beta, 0.0));
            const double gap =
                std::abs(geometric_discord(rho) - 4 * mu * r * r);
            worst = std::max(worst, gap);
            ok = ok && gap <= c.tol;
        }
    }
    report(ok, 2, "geometric discord -> 4 mu |r|^2",
           fmt("worst gap %.2e, tol 5e-3 (1e-2 deep thermal)", worst));
}

// 3. Entropic discord closed form equals direct minimization on the
//    two-level family it describes.
void criterion_entropic_closed_form() {
    double worst = 0.0;
    for (double p : {0.1, 0.2, 0.3, 0.4, 0.5}) {
        for (double frac : {0.2, 0.5, 0.8, 0.95}) {
            const double r = frac * std::sqrt(p * (1 - p));
            const double closed = entropic_discord_digitalized(qp(p, r));
            const double numeric = entropic_discord_numeric(embed_two_level(p, r));
            worst = std::max(worst, std::abs(closed - numeric));
        }
    }
    const bool endpoint = entropic_discord_digitalized(qp(0.5, 0.5)) == 1.0;
    report(worst <= 1e-6 && endpoint, 3,
           "entropic discord closed form vs minimization",
           fmt("worst gap %.2e, tol 1e-6; unit endpoint ", worst) +
               (endpoint ? "exact" : "MISSED"));
}

// 4. Teleportation average fidelity reaches (2/3)(1 + |r|).
void criterion_teleport_average() {
    struct Case {
        double nbar;
        int dim;
        int n_kept;
    };
    const Case cases[] = {{0.0, 200, 1}, {1.0, 260, 21}};
    double worst = 0.0;
    for (const Case& c : cases) {
        const OscillatorState osc = thermal_state(c.nbar, c.dim);
        const Spectrum spec = spectral_decomposition(osc);
        for (double r : {0.0, 0.25, 0.5}) {
            const HybridState rho =
                build_resource_state(qp(0.5, r), osc, Complex(4.0, 0.0));
            const double avg = teleport_average_fidelity(
                rho, spec, Complex(4.0, 0.0), c.n_kept);
            worst = std::max(worst,
                             std::abs(avg - (2.0 / 3.0) * (1.0 + r)));
        }
    }
    report(worst <= 5e-3, 4, "teleport average fidelity -> (2/3)(1+|r|)",
           fmt("worst gap %.2e, tol 5e-3", worst));
}

// 5. Per-input teleport fidelity |eta|^4 + |gamma|^4 + 4|r||eta|^2|gamma|^2.
void criterion_teleport_per_input() {
    const OscillatorState vac = thermal_state(0.0, 200);
    const Complex r = 0.35 * std::exp(Complex(0.0, 0.9));
    const HybridState rho =
        build_resource_state(qp(0.5, r), vac, Complex(4.0, 0.0));
    const TeleportEngine engine(rho, spectral_decomposition(vac),
                                Complex(4.0, 0.0), 1);
    std::mt19937 rng(2024);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        Complex eta(g(rng), g(rng)), gamma(g(rng), g(rng));
        const double norm = std::sqrt(std::norm(eta) + std::norm(gamma));
        InputPureState in;
        in.eta = eta / norm;
        in.gamma = gamma / norm;
        const double e2 = std::norm(in.eta), g2 = std::norm(in.gamma);
        const double want = e2 * e2 + g2 * g2 + 4 * std::abs(r) * e2 * g2;
        const double got = engine.simulate(in).per_input_fidelity;
        worst = std::max(worst, std::abs(got - want));
    }
    report(worst <= 1e-3, 5, "teleport per-input fidelity formula",
           fmt("worst gap %.2e over 20 inputs, tol 1e-3", worst));
}

// 6. Unitary-correction preparation reaches mu(1 + 2|r|)/(1 + mu).
void criterion_rsp_unitary_average() {
    struct Case {
        double nbar;
        int n_kept;
        int dim;
    };
    const Case cases[] = {{0.0, 1, 200}, {0.5, 15, 240}, {1.0, 21, 260}};
    double worst = 0.0;
    for (const Case& c : cases) {
        const OscillatorState osc = thermal_state(c.nbar, c.dim);
        const Spectrum spec = spectral_decomposition(osc);
        const double mu = purity(osc);
        for (double r : {0.0, 0.25, 0.5}) {
            const HybridState rho =
                build_resource_state(qp(0.5, r), osc, Complex(4.0, 0.0));
            const double avg = rsp_average_fidelity(
                rho, spec, Complex(4.0, 0.0), RspMode::unitary_correction,
                c.n_kept);
            worst = std::max(worst,
                             std::abs(avg - mu * (1 + 2 * r) / (1 + mu)));
        }
    }
    report(worst <= 5e-3, 6, "preparation fidelity -> mu(1+2|r|)/(1+mu)",
           fmt("worst gap %.2e, tol 5e-3", worst));
}

// 7. Digitalizing-correction preparation payoff reaches 2|r| even from deep
//    thermal states.
void criterion_rsp_digitalizing_payoff() {
    struct Case {
        double nbar;
        int cutoff;
        int dim;
        double beta;
        double r;
    };
    const Case cases[] = {{0.0, 1, 200, 4.0, 0.5},
                          {0.0, 1, 200, 4.0, 0.25},
                          {1.0, 20, 260, 4.0, 0.5},
                          {5.0, 50, 350, 6.0, 0.5}};
    double worst = 0.0;
    for (const Case& c : cases) {
        const OscillatorState osc = thermal_state(c.nbar, c.dim);
        const Spectrum spec = spectral_decomposition(osc);
        const HybridState rho =
            build_resource_state(qp(0.5, c.r), osc, Complex(c.beta, 0.0));
        DigitalizeConfig cfg;
        cfg.kraus_cutoff = c.cutoff;
        cfg.beta = Complex(c.beta, 0.0);
        const RspResult res =
            rsp_simulate(rho, spec, 0.0, Complex(c.beta, 0.0),
                         RspMode::digitalizing_correction, -1, &cfg);
        worst = std::max(worst, std::abs(res.payoff - 2 * c.r));
    }
    report(worst <= 1e-2, 7, "digitalizing preparation payoff -> 2|r|",
           fmt("worst gap %.2e, tol 1e-2", worst));
}

// 8. Preparation payoff sits inside the discord-derived bounds, saturating
//    the upper bound for pure oscillator states.
void criterion_rsp_payoff_bounds() {
    struct Case {
        double nbar;
        int dim;
    };
    const Case cases[] = {{0.0, 200}, {0.5, 240}, {1.0, 260}};
    bool ok = true;
    double worst_excess = 0.0, worst_saturation = 0.0;
    for (const Case& c : cases) {
        const OscillatorState osc = thermal_state(c.nbar, c.dim);
        const Spectrum spec = spectral_decomposition(osc);
        for (double p : {0.35, 0.5}) {
            for (double r : {0.1, 0.2, 0.3, 0.4, 0.45}) {
                const HybridState rho =
                    build_resource_state(qp(p, r), osc, Complex(4.0, 0.0));
                const double dg = geometric_discord(rho);
                const auto bounds = rsp_payoff_bounds(dg);
                const RspResult res =
                    rsp_simulate(rho, spec, 0.0, Complex(4.0, 0.0),
                                 RspMode::unitary_correction);
                const double excess =
                    std::max(bounds.first - res.payoff,
                             res.payoff - bounds.second);
                worst_excess = std::max(worst_excess, excess);
                ok = ok && excess <= 1e-2;
                if (c.nbar == 0.0) {
                    const double slack = bounds.second - res.payoff;
                    worst_saturation = std::max(worst_saturation, slack);
                    ok = ok && slack <= 1e-2;
                }
            }
        }
    }
    report(ok, 8, "preparation payoff within discord bounds",
           fmt("worst bound excess %.2e, worst pure-state slack %.2e",
               worst_excess, worst_saturation));
}

// 9. Deep thermal states keep near-maximal negativity while geometric
//    discord collapses with the purity.
void criterion_thermal_separation() {
    const OscillatorState osc = thermal_state(5.0, 350);
    const HybridState rho =
        build_resource_state(qp(0.5, 0.5), osc, Complex(6.0, 0.0));
    const double neg = negativity(rho);
    const double sqrt_dg = std::sqrt(geometric_discord(rho));
    report(neg >= 0.95 && sqrt_dg <= 0.32, 9,
           "thermal noise separates negativity from geometric discord",
           fmt("negativity %.5f (>= 0.95), sqrt discord %.5f (<= 0.32)", neg,
               sqrt_dg));
}

// 10. Digitalization keeps fidelity and success probability above
//     1 - spectral tail - 1e-3.
void criterion_digitalization_quality() {
    struct Case {
        double nbar;
        int cutoff;
        int dim;
    };
    const Case cases[] = {{0.0, 1, 200}, {1.0, 14, 260}};
    bool ok = true;
    double worst_fid = 1.0, worst_succ = 1.0;
    for (const Case& c : cases) {
        const OscillatorState osc = thermal_state(c.nbar, c.dim);
        const HybridState rho =
            build_resource_state(qp(0.5, 0.5), osc, Complex(4.0, 0.0));
        DigitalizeConfig cfg;
        cfg.kraus_cutoff = c.cutoff;
        cfg.beta = Complex(4.0, 0.0);
        const DigitalizeResult res =
            digitalize_channel(rho, spectral_decomposition(osc), cfg);
        const double eps = spectral_tail(osc, c.cutoff);
        const double fid =
            channel_fidelity(res, digitalized_target(qp(0.5, 0.5)));
        ok = ok && fid >= 1 - eps - 1e-3 && res.success_prob >= 1 - eps - 1e-3;
        worst_fid = std::min(worst_fid, fid + eps);
        worst_succ = std::min(worst_succ, res.success_prob + eps);
    }
    report(ok, 10, "digitalization fidelity and success track the tail",
           fmt("min fid+eps %.6f, min succ+eps %.6f, floor 1-1e-3", worst_fid,
               worst_succ));
}

// 11. Closed-form geometric discord equals brute-force minimization on
//     random states.
void criterion_geometric_discord_bruteforce() {
    double worst = 0.0;
    for (unsigned k = 0; k < 50; ++k) {
        const int d = 2 + static_cast<int>(k % 7);
        const HybridState rho = random_two_by_d(d, 5000 + k);
        worst = std::max(worst, std::abs(geometric_discord(rho) -
                                         geometric_discord_bruteforce(rho)));
    }
    report(worst <= 1e-4, 11, "geometric discord closed form vs brute force",
           fmt("worst gap %.2e over 50 states, tol 1e-4", worst));
}

// 12. The eigensolver-free witness never exceeds the negativity and is
//     tight at the symmetric point.
void criterion_negativity_witness() {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool sound = true;
    double worst_violation = -1.0;
    for (int k = 0; k < 50; ++k) {
        const double p = 0.15 + 0.7 * u(rng);
        const double r = u(rng) * std::sqrt(p * (1 - p));
        const double r_arg = 2 * M_PI * u(rng);
        const double nbar = 1.5 * u(rng);
        const Complex beta =
            (3.0 + 2.0 * u(rng)) * std::exp(Complex(0.0, 2 * M_PI * u(rng)));
        const OscillatorState osc =
            thermal_state(nbar, recommended_dim(std::abs(beta), nbar));
        const HybridState st = build_resource_state(
            qp(p, r * std::exp(Complex(0.0, r_arg))), osc, beta);
        const double bound =
            negativity_witness_bound(st, spectral_decomposition(osc), beta);
        const double violation = bound - negativity(st);
        worst_violation = std::max(worst_violation, violation);
        sound = sound && violation <= 1e-9;
    }
    const OscillatorState vac = thermal_state(0.0, 200);
    const HybridState sym =
        build_resource_state(qp(0.5, 0.5), vac, Complex(4.0, 0.0));
    const double tight_bound = negativity_witness_bound(
        sym, spectral_decomposition(vac), Complex(4.0, 0.0));
    report(sound && tight_bound >= 0.99, 12,
           "negativity witness is sound and tight",
           fmt("worst bound-negativity %.2e (<= 1e-9), symmetric bound %.4f",
               worst_violation, tight_bound));
}

// 13. Structural guarantees: state invariants, displacement composition,
//     local-unitary invariance, thresholds, deterministic sweeps.
void criterion_structural() {
    std::ostringstream why;
    bool ok = true;

    const int dim = recommended_dim(3.0, 0.7);
    const OscillatorState osc = thermal_state(0.7, dim);
    const HybridState st = build_resource_state(
        qp(0.45, 0.3 * std::exp(Complex(0.0, 0.4))), osc, Complex(3.0, 0.0));
    const Matrix full = st.full_matrix();
    const double herm = (full - full.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Matrix> es(full, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double tr = full.trace().real();
    if (herm > 1e-12 || lmin < -1e-10 || tr < 1 - 1e-6 || tr > 1 + 1e-9) {
        ok = false;
        why << "invariants broken; ";
    }

    const Complex a(1.1, 0.3), b(-0.4, 0.9);
    const Matrix da = displacement_matrix(a, 220);
    const Matrix db = displacement_matrix(b, 220);
    const Matrix dab = displacement_matrix(a + b, 220);
    const Complex weyl = std::exp(Complex(0.0, std::imag(a * std::conj(b))));
    const double comp_err = ((da * db - weyl * dab).block(0, 0, 48, 48))
                                .cwiseAbs()
                                .maxCoeff();
    if (comp_err > 1e-12) {
        ok = false;
        why << "composition err " << comp_err << "; ";
    }

    const HybridState rot = rotate_qubit_phase(st, std::exp(Complex(0.0, 1.1)));
    if (std::abs(negativity(st) - negativity(rot)) > 1e-9 ||
        std::abs(geometric_discord(st) - geometric_discord(rot)) > 1e-9 ||
        std::abs(entropic_discord_numeric(st) - entropic_discord_numeric(rot)) >
            1e-6) {
        ok = false;
        why << "local-unitary variance; ";
    }

    const OscillatorState vac = thermal_state(0.0, 120);
    const TeleportResult tres =
        teleport_simulate(build_resource_state(qp(0.5, 0.5), vac,
                                               Complex(3.0, 0.0)),
                          spectral_decomposition(vac), InputPureState{},
                          Complex(3.0, 0.0));
    if (tres.classical_threshold != 2.0 / 3.0) {
        ok = false;
        why << "teleport threshold; ";
    }
    if (std::abs(rsp_classical_threshold(Complex(2.0, 0.0)) - 0.5) > 1e-3) {
        ok = false;
        why << "preparation threshold; ";
    }

    SweepConfig cfg = SweepConfig::from_file("");
    cfg.apply_override("r_points=6");
    RunOptions serial, parallel;
    serial.jobs = 1;
    parallel.jobs = 4;
    std::ostringstream out1, out2;
    write_table(cmd_figure2(cfg, serial), out1, OutputFormat::csv);
    write_table(cmd_figure2(cfg, parallel), out2, OutputFormat::csv);
    if (out1.str() != out2.str() || out1.str().empty()) {
        ok = false;
        why << "sweep nondeterminism; ";
    }

    report(ok, 13, "invariants, composition, invariance, thresholds, determinism",
           ok ? "all structural checks hold" : why.str());
}

} // namespace

int main() {
    std::printf("acceptance: verifying analytic limits at finite truncation\n");
    criterion_negativity_limit();
    criterion_geometric_discord_limit();
    criterion_entropic_closed_form();
    criterion_teleport_average();
    criterion_teleport_per_input();
    criterion_rsp_unitary_average();
    criterion_rsp_digitalizing_payoff();
    criterion_rsp_payoff_bounds();
    criterion_thermal_separation();
    criterion_digitalization_quality();
    criterion_geometric_discord_bruteforce();
    criterion_negativity_witness();
    criterion_structural();
    if (g_failures == 0)
        std::printf("acceptance: all 13 criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures;
}
