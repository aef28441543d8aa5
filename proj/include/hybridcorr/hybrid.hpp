#pragma once

#include "hybridcorr/oscillator.hpp"

#include <Eigen/Dense>

namespace hybridcorr {

// Qubit block data: excited_prob = <e|rho|e>, coherence = <e|rho|g>.
// Physical iff |coherence|^2 <= excited_prob (1 - excited_prob).
struct QubitParams {
    double excited_prob = 0.5;
    Complex coherence = 0.0;
};
void validate(const QubitParams& q);

// Joint qubit-oscillator density matrix stored as four dim x dim blocks.
// Full-matrix ordering is qubit-major: rows 0..dim-1 are |e> x Fock,
// rows dim..2dim-1 are |g> x Fock.
// Invariants: ge = eg^dag, ee/gg hermitian, tr(ee)+tr(gg) in
// [1 - tol.trace, 1], full matrix PSD down to -tol.psd.
class HybridState {
public:
    static HybridState from_blocks(Matrix ee, Matrix eg, Matrix ge, Matrix gg,
                                   const Tolerances& tol = {});
    // Skips the 2dim eigensolve; for outputs positive by construction.
    static HybridState positive_by_construction(Matrix ee, Matrix eg,
                                                Matrix ge, Matrix gg,
                                                const Tolerances& tol = {});

    int osc_dim() const { return static_cast<int>(ee_.rows()); }
    const Matrix& ee() const { return ee_; }
    const Matrix& eg() const { return eg_; }
    const Matrix& ge() const { return ge_; }
    const Matrix& gg() const { return gg_; }
    Matrix full_matrix() const;
    double trace() const { return (ee_.trace() + gg_.trace()).real(); }
    const Tolerances& tolerances() const { return tol_; }

private:
    HybridState(Matrix ee, Matrix eg, Matrix ge, Matrix gg, const Tolerances& tol);
    Matrix ee_, eg_, ge_, gg_;
    Tolerances tol_;
};

// rho_AB = D(beta)|e><e| x rho D^dag ... : the state generated by a
// qubit-controlled displacement, blocks
//   ee = p D rho D^dag, gg = (1-p) D^dag rho D,
//   eg = r D rho D,     ge = conj(r) D^dag rho D^dag.
// Throws TruncationError when either displaced copy leaks more than
// containment_tol into the top decile of Fock levels.
HybridState build_resource_state(const QubitParams& qubit,
                                 const OscillatorState& osc, Complex beta,
                                 double containment_tol = 1e-6);

// Transpose on the qubit factor: swaps the eg and ge blocks.
// Result is hermitian but generally not positive; returned as raw blocks.
struct QubitPartialTranspose {
    Matrix ee, eg, ge, gg;
    Matrix full_matrix() const;
};
QubitPartialTranspose partial_transpose_qubit(const HybridState& rho);

OscillatorState partial_trace_qubit(const HybridState& rho);
Eigen::Matrix2cd partial_trace_osc(const HybridState& rho);

// v_mu = tr_A[rho (sigma_mu x 1)]: v0 = ee+gg, v1 = eg+ge,
// v2 = i eg - i ge, v3 = ee - gg. rho = (1/2) sum_mu sigma_mu x v_mu.
struct FanoComponents {
    Matrix v0, v1, v2, v3;
};
FanoComponents fano_components(const HybridState& rho);

// |e> -> phase |e> with |phase| = 1; used for coherence-phase corrections.
HybridState rotate_qubit_phase(const HybridState& rho, Complex phase);

} // namespace hybridcorr
