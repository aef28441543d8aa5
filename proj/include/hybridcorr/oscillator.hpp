#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "hybridcorr/errors.hpp"

namespace hybridcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Tolerances {
    double trace = 1e-6;       // allowed deficit below unit trace
    double hermiticity = 1e-12;
    double psd = 1e-10;        // allowed magnitude of negative eigenvalues
};

// Density matrix on a truncated Fock space, Fock basis |0>..|dim-1>.
// Invariants: hermitian within tol.hermiticity, trace in
// [1 - tol.trace, 1 + tol.hermiticity], eigenvalues >= -tol.psd.
class OscillatorState {
public:
    // Validates everything, including positivity (one dense eigensolve).
    static OscillatorState from_matrix(Matrix m, const Tolerances& tol = {});

    // For results that are positive by construction (unitary conjugation,
    // Kraus application, convex mixing). Hermiticity and trace are still
    // checked; the eigensolve is skipped.
    static OscillatorState positive_by_construction(Matrix m,
                                                    const Tolerances& tol = {});

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double trace_deficit() const;
    const Tolerances& tolerances() const { return tol_; }

private:
    OscillatorState(Matrix m, const Tolerances& tol)
        : m_(std::move(m)), tol_(tol) {}
    Matrix m_;
    Tolerances tol_;
};

// Thermal occupation tail: sum_{k>n} nbar^k/(1+nbar)^{k+1} = (nbar/(1+nbar))^{n+1}.
double thermal_tail(double nbar, int n);

// Diagonal thermal state, s_n = nbar^n/(1+nbar)^{n+1}. Throws TruncationError
// if the trace deficit (nbar/(1+nbar))^dim exceeds trace_tol.
OscillatorState thermal_state(double nbar, int dim, double trace_tol = 1e-6);

// <m|exp(beta b^dag - conj(beta) b)|n> for m,n < dim. Entries are exact
// infinite-dimensional matrix elements (associated-Laguerre closed form,
// evaluated by a per-diagonal recurrence seeded in log space), so the matrix
// is unitary only on the contained lower block.
Matrix displacement_matrix(Complex beta, int dim);

double purity(const OscillatorState& state);

// chi(alpha) = tr[rho D(alpha)]. |chi| <= 1 + 1e-12 enforced.
Complex char_fn(const OscillatorState& state, Complex alpha);

struct TruncationReport {
    double trace_deficit = 0.0;
    // Spectral weight beyond the kraus_cutoff largest eigenvalues, plus the
    // trace deficit itself. Equals (nbar/(1+nbar))^N for a thermal state
    // with N eigenvectors retained.
    double tail_eps = 0.0;
    // Worst probability weight inside the top 10% of Fock levels over the
    // state and each pending displaced copy D(b) rho D(b)^dag.
    double containment_margin = 0.0;
};

// kraus_cutoff < 0 means "no cutoff configured": tail_eps reduces to the
// trace deficit.
TruncationReport truncation_report(const OscillatorState& state,
                                   const std::vector<Complex>& pending_displacements,
                                   int kraus_cutoff = -1);

// Eigendecomposition sorted by descending eigenvalue. Diagonal matrices keep
// exact Fock eigenvectors with Fock-index tiebreak; tiny negative eigenvalues
// are clamped to zero.
struct Spectrum {
    Eigen::VectorXd values;  // descending
    Matrix vectors;          // columns match values
};
Spectrum spectral_decomposition(const OscillatorState& state);

// Rule of thumb: ceil((|total displacement| + 6)^2) plus the thermal tail
// length needed to push the occupation tail below 1e-8.
int recommended_dim(double max_total_displacement, double nbar);

} // namespace hybridcorr
