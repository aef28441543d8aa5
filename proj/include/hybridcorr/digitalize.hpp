#pragma once

#include "hybridcorr/hybrid.hpp"

namespace hybridcorr {

// What happens to the weight outside the retained displaced subspaces.
// track_fail_flag keeps it in an orthogonal flag sector so probabilities stay
// exact; renormalize_success models post-selection on the success outcome.
enum class FailPolicy { track_fail_flag, renormalize_success };

struct DigitalizeConfig {
    int kraus_cutoff = 1;  // number of oscillator eigenvectors retained
    Complex beta{0.0, 0.0};
    FailPolicy fail_policy = FailPolicy::track_fail_flag;
};

// 4x4 density matrix on qubit x two-level register, basis order
// {|e,re>, |e,rg>, |g,re>, |g,rg>}.
struct TwoQubitState {
    Eigen::Matrix4cd rho;

    static TwoQubitState from_matrix(const Eigen::Matrix4cd& m);
    double trace() const { return rho.trace().real(); }
};

// Ideal image of the channel: p|e re><e re| + r|e re><g rg| + h.c.
// + (1-p)|g rg><g rg|.
TwoQubitState digitalized_target(const QubitParams& qubit);

struct DigitalizeResult {
    TwoQubitState two_qubit;      // success block, normalized
    double success_prob = 0.0;    // weight mapped into the register
    Eigen::Matrix2cd fail_block;  // qubit state tensored with the flag level
    double completeness_gap = 0.0;  // raw-family ||sum O^dag O - P_12||_2
    bool whitened = false;          // family was polar-orthonormalized
    FailPolicy fail_policy = FailPolicy::track_fail_flag;
};

// Collapses the oscillator onto the two displaced branches:
//   O_j = |re><psi_j|D^dag(beta) + |rg><psi_j|D(beta),  j < kraus_cutoff,
// with psi_j the descending-order eigenvectors of the pre-displacement
// oscillator state. Quasi-completeness against the projector onto
// span{D(+-beta) psi_j} is checked; a gap above `completeness_tol` means the
// supplied beta does not match the state and raises
// ChannelConstructionError.
DigitalizeResult digitalize_channel(const HybridState& rho,
                                    const Spectrum& osc_eigvecs,
                                    const DigitalizeConfig& cfg,
                                    double completeness_tol = 1e-6);

// Fidelity of the channel output against a two-qubit target, honoring the
// fail policy: the flag sector is orthogonal to any target, so under
// track_fail_flag it contributes fidelity 0 and the result is
// success_prob * F(success block, target).
double channel_fidelity(const DigitalizeResult& result,
                        const TwoQubitState& target);

// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2 on 4x4 states.
double fidelity_two_qubit(const TwoQubitState& a, const TwoQubitState& b);

// Weight of the initial oscillator state outside its first n_kept
// eigenvectors; the channel's intrinsic failure probability.
double spectral_tail(const OscillatorState& osc, int n_kept);

} // namespace hybridcorr
