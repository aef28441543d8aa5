#pragma once

#include "hybridcorr/hybrid.hpp"
#include "hybridcorr/optimize.hpp"

namespace hybridcorr {

// ||rho^{T_A}||_1 - 1, clamped to [0, 1]. One dense eigensolve of the
// 2 dim partial transpose.
double negativity(const HybridState& rho);

// Large-beta limit for resource states: 2|r|.
double negativity_asymptote(const QubitParams& qubit);

// Eigensolver-free lower bound from Bell-type test states
// (|e> D^dag psi_m - e^{i phi}|g> D psi_m)/sqrt2, each at its optimal
// coherence phase. Sums only the negative expectations; eigenvalues majorize
// orthonormal expectations, so this never exceeds the negative part of the
// spectrum. Valid for any state, tight as beta grows.
double negativity_witness_bound(const HybridState& rho,
                                const Spectrum& osc_eigvecs, Complex beta);

// S_ij = Re tr(v_i v_j) for the spatial Fano components, i,j in {1,2,3}.
Eigen::Matrix3d s_matrix(const HybridState& rho);

// tr S - lambda_max(S); equals the measurement-minimized Hilbert-Schmidt
// distance 2 min_Pi ||rho - Pi(rho)||^2 for qubit-side projective Pi.
double geometric_discord(const HybridState& rho);

// Direct minimization of 4 tr[rho^2 (P x 1)] - 4 tr[rho (P x 1) rho (P x 1)]
// over Bloch directions; independent of the S-matrix route. Oracle use.
double geometric_discord_bruteforce(const HybridState& rho,
                                    const SphereOptimizerConfig& cfg = {});

// 4 mu |r|^2 with mu the purity of the undisplaced oscillator state.
double geometric_discord_asymptote(const QubitParams& qubit, double purity_b0);

// Closed form for the digitalized two-qubit state, base-2 logs:
//   H2(p) + (1/2)[log2(p(1-p)-|r|^2) + zeta log2((1+zeta)/(1-zeta))],
//   zeta = sqrt((1-2p)^2 + 4|r|^2).
// The removable singularity at |r|^2 = p(1-p) evaluates to H2(p).
double entropic_discord_digitalized(const QubitParams& qubit);

// S(rho_A) - S(rho_AB) + min over qubit projective measurements of the
// conditional oscillator entropy. Minimization on the stated (theta, phi)
// grid with Nelder-Mead refinement, after compressing to the oscillator
// support basis (marginal eigenvalue > 1e-13).
// `found`, when given, receives the discord value and minimizing direction.
double entropic_discord_numeric(const HybridState& rho,
                                const SphereOptimizerConfig& cfg = {},
                                SphereMinimum* found = nullptr);

struct CorrelationReport {
    double negativity = 0.0;
    double negativity_asymptote = 0.0;
    double geometric_discord = 0.0;
    double geometric_discord_asymptote = 0.0;
    double dz_digitalized = 0.0;
    double dz_numeric = 0.0;  // NaN unless requested
    double purity_b0 = 0.0;
    TruncationReport truncation;
};

struct CorrelationReportOptions {
    bool with_dz_numeric = false;
    SphereOptimizerConfig optimizer;
    double containment_tol = 1e-6;
};

// Builds the resource state from the ingredients and evaluates every measure
// alongside its asymptote, so truncation quality ships with the numbers.
CorrelationReport correlation_report(const QubitParams& qubit,
                                     const OscillatorState& osc, Complex beta,
                                     const CorrelationReportOptions& opts = {});

} // namespace hybridcorr
