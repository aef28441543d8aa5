#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "hybridcorr/digitalize.hpp"
#include "hybridcorr/hybrid.hpp"

namespace hybridcorr {

// Qubit state eta|e> + gamma|g> to be teleported.
struct InputPureState {
    Complex eta{1.0, 0.0};
    Complex gamma{0.0, 0.0};
    void validate() const;
};

// Joint measurement basis on (input qubit) x (oscillator):
// (|e> D(b)psi_m +- |g> D^dag(b)psi_m)/sqrt2 and the displacement-swapped
// family, symmetrically orthonormalized. Column order: m-major, within m
// {phi+, phi-, xi+, xi-}.
struct HybridBellBasis {
    Matrix vectors;        // 2*dim x 4*n_kept, orthonormal
    double gram_deviation; // max |eig(Gram) - 1| before orthonormalization
    int n_kept;
};

HybridBellBasis hybrid_bell_basis(const Spectrum& osc_eigvecs, Complex beta,
                                  int n_kept);

enum class BellOutcome : int {
    phi_plus = 0,
    phi_minus = 1,
    xi_plus = 2,
    xi_minus = 3,
};

struct TeleportResult {
    // Corrected, unnormalized 2x2 outputs summed over m, indexed by
    // BellOutcome. Traces sum to success_prob.
    std::array<Eigen::Matrix2cd, 4> outcome_states;
    double per_input_fidelity = 0.0;
    double average_fidelity = 0.0;
    double classical_threshold = 2.0 / 3.0;
    double payoff = 0.0;
    double success_prob = 0.0;
};

// Precomputes the per-Bell-vector block contractions once, so repeated
// inputs (the Haar average) cost O(1) matrix work each.
class TeleportEngine {
  public:
    TeleportEngine(const HybridState& rho, const Spectrum& osc_eigvecs,
                   Complex beta, int n_kept);

    TeleportResult simulate(const InputPureState& input) const;
    // Exact Haar average (the per-input fidelity is quadratic in the input
    // Bloch vector; a 12-point icosahedral design integrates it exactly).
    // mc_samples > 0 switches to seeded Monte Carlo instead.
    double average_fidelity(int mc_samples = 0,
                            std::uint64_t seed = 0x9e3779b97f4a7c15ull) const;
    double gram_deviation() const { return gram_deviation_; }

  private:
    // contractions_[k](2q+a, 2q'+a') = <v^k_q | B_aa' | v^k_q'>
    std::vector<Eigen::Matrix4cd> contractions_;
    Complex coherence_phase_;
    double coherence_abs_;
    double gram_deviation_;
};

// One-call convenience wrappers over TeleportEngine. n_kept < 0 keeps
// eigenvectors until the spectral tail drops below 1e-7 (capped so the
// Bell Gram stays well conditioned).
TeleportResult teleport_simulate(const HybridState& rho,
                                 const Spectrum& osc_eigvecs,
                                 const InputPureState& input, Complex beta,
                                 int n_kept = -1);
double teleport_average_fidelity(const HybridState& rho,
                                 const Spectrum& osc_eigvecs, Complex beta,
                                 int n_kept = -1, int mc_samples = 0,
                                 std::uint64_t seed = 0x9e3779b97f4a7c15ull);

double payoff(double avg_fidelity, double classical_threshold);

int auto_n_kept(const Spectrum& osc_eigvecs, Complex beta, double tail_tol = 1e-7);

// Digitalizing-channel cutoff: covers the spectrum to tail_tol, stopping
// before the displaced eigenvector families turn numerically degenerate
// (deeper cutoffs are valid but force heavy whitening for no gain).
int auto_kraus_cutoff(const Spectrum& osc_eigvecs, Complex beta,
                      double tail_tol = 1e-7);

// --- remote state preparation ---

enum class RspMode { unitary_correction, digitalizing_correction };

struct RspResult {
    double phi = 0.0;
    RspMode mode = RspMode::unitary_correction;
    // Unnormalized conditional outputs for outcomes + and -, after Bob's
    // correction. Oscillator-sized in unitary mode, 2x2 register in
    // digitalizing mode.
    Matrix conditional_plus;
    Matrix conditional_minus;
    double prob_plus = 0.0;
    double prob_minus = 0.0;
    double fidelity_at_phi = 0.0;
    double average_fidelity = 0.0;
    double classical_threshold = 0.5;
    double payoff = 0.0;
    double success_prob = 1.0;
};

// Normalized (|beta> + e^{-i phi}|-beta>)/sqrt(2(1+cos phi e^{-2|beta|^2})).
Vector rsp_goal_state(double phi, Complex beta, Eigen::Index dim);

// Reflection 1 - 2 P_minus, where P_minus projects onto
// span{D(-beta)psi_m : m < n_kept}. Exactly unitary and Hermitian; acts as
// the identity on the orthogonal remainder.
Matrix phase_shift_operator(Complex beta, const Spectrum& osc_eigvecs,
                            int n_kept, Eigen::Index dim);

// Simulates preparation of the phi-superposition on B. Requires the state's
// coherence phase already rotated so r = |r| (apply rotate_qubit_phase
// first if needed). In digitalizing mode cfg carries the channel settings.
RspResult rsp_simulate(const HybridState& rho, const Spectrum& osc_eigvecs,
                       double phi, Complex beta, RspMode mode, int n_kept = -1,
                       const DigitalizeConfig* dig_cfg = nullptr,
                       int quadrature_order = 64);

double rsp_average_fidelity(const HybridState& rho,
                            const Spectrum& osc_eigvecs, Complex beta,
                            RspMode mode, int n_kept = -1,
                            const DigitalizeConfig* dig_cfg = nullptr,
                            int quadrature_order = 64);

// Fidelity of the best beta-agnostic guess (|beta><beta| + |-b><-b|)/2
// against the goal, phi-averaged; tends to 1/2 from above as beta grows.
double rsp_classical_threshold(Complex beta, Eigen::Index dim = 0,
                               int quadrature_order = 64);

// (max{0, (3 dg - 1)/(1 + dg)}, sqrt(dg)).
std::pair<double, double> rsp_payoff_bounds(double dg);

} // namespace hybridcorr
