#include "hybridcorr/oscillator.hpp"

#include <cmath>
#include <sstream>

namespace hybridcorr {

namespace {

void check_hermitian_trace(const Matrix& m, const Tolerances& tol,
                           const char* who) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw InvariantViolation(std::string(who) + ": matrix must be square and nonempty");
    double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol.hermiticity) {
        std::ostringstream os;
        os << who << ": hermiticity defect " << herm << " exceeds " << tol.hermiticity;
        throw InvariantViolation(os.str());
    }
    double tr = m.trace().real();
    if (tr < 1.0 - tol.trace || tr > 1.0 + tol.hermiticity) {
        std::ostringstream os;
        os << who << ": trace " << tr << " outside [1 - " << tol.trace << ", 1]";
        throw InvariantViolation(os.str());
    }
}

} // namespace

OscillatorState OscillatorState::from_matrix(Matrix m, const Tolerances& tol) {
    check_hermitian_trace(m, tol, "OscillatorState");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    if (lmin < -tol.psd) {
        std::ostringstream os;
        os << "OscillatorState: eigenvalue " << lmin << " below -" << tol.psd;
        throw InvariantViolation(os.str());
    }
    return OscillatorState(std::move(m), tol);
}

OscillatorState OscillatorState::positive_by_construction(Matrix m,
                                                          const Tolerances& tol) {
    check_hermitian_trace(m, tol, "OscillatorState");
    return OscillatorState(std::move(m), tol);
}

double OscillatorState::trace_deficit() const {
    return std::max(0.0, 1.0 - m_.trace().real());
}

double thermal_tail(double nbar, int n) {
    if (nbar <= 0.0) return 0.0;
    return std::exp(double(n + 1) * std::log(nbar / (1.0 + nbar)));
}

OscillatorState thermal_state(double nbar, int dim, double trace_tol) {
    if (nbar < 0.0) throw std::invalid_argument("thermal_state: nbar < 0");
    if (dim < 1) throw std::invalid_argument("thermal_state: dim < 1");
    double deficit = thermal_tail(nbar, dim - 1);  // weight on levels >= dim
    if (deficit > trace_tol) {
        std::ostringstream os;
        os << "thermal_state: dim " << dim << " leaves trace deficit " << deficit
           << " > " << trace_tol << " at nbar " << nbar;
        throw TruncationError(os.str(), deficit);
    }
    Matrix m = Matrix::Zero(dim, dim);
    if (nbar == 0.0) {
        m(0, 0) = 1.0;
    } else {
        double log_q = std::log(nbar / (1.0 + nbar));
        double log_norm = -std::log1p(nbar);
        for (int n = 0; n < dim; ++n)
            m(n, n) = std::exp(log_norm + n * log_q);
    }
    Tolerances tol;
    tol.trace = std::max(trace_tol, deficit);
    return OscillatorState::positive_by_construction(std::move(m), tol);
}

// d_{n+k,n} = e^{-x/2} beta^k sqrt(n!/(n+k)!) L_n^{(k)}(x), x = |beta|^2.
// Along each diagonal the three-term Laguerre recurrence is rescaled so the
// iterates are the matrix elements themselves (all bounded by 1): the
// exponentially small seed is formed in log space and the forward recurrence
// then follows the dominant, physically growing solution.
Matrix displacement_matrix(Complex beta, int dim) {
    if (dim < 1) throw std::invalid_argument("displacement_matrix: dim < 1");
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
        throw std::invalid_argument("displacement_matrix: beta not finite");
    Matrix d = Matrix::Zero(dim, dim);
    const double x = std::norm(beta);
    if (x == 0.0) {
        d.setIdentity();
        return d;
    }
    const double ab = std::abs(beta);
    const Complex phase_low = beta / ab;                  // lower triangle, beta^k
    const Complex phase_up = -std::conj(beta) / ab;       // upper, (-conj beta)^k
    std::vector<double> g(dim);
    Complex pl = 1.0, pu = 1.0;
    for (int k = 0; k < dim; ++k) {
        const int len = dim - k;
        double l0 = k * std::log(ab) - 0.5 * x - 0.5 * std::lgamma(double(k + 1));
        g[0] = (l0 > -745.0) ? std::exp(l0) : 0.0;
        if (len > 1) g[1] = g[0] * (1.0 + k - x) / std::sqrt(1.0 + k);
        for (int n = 1; n + 1 < len; ++n) {
            double c1 = (2.0 * n + 1.0 + k - x) / std::sqrt((n + 1.0) * (n + 1.0 + k));
            double c2 = std::sqrt(n * (n + double(k)) / ((n + 1.0) * (n + 1.0 + k)));
            g[n + 1] = c1 * g[n] - c2 * g[n - 1];
        }
        for (int n = 0; n < len; ++n) {
            d(n + k, n) = g[n] * pl;
            if (k > 0) d(n, n + k) = g[n] * pu;
        }
        pl *= phase_low;
        pu *= phase_up;
    }
    return d;
}

double purity(const OscillatorState& state) {
    // tr(rho^2) = sum |rho_ij|^2 for hermitian rho
    return state.matrix().squaredNorm();
}

Complex char_fn(const OscillatorState& state, Complex alpha) {
    Matrix d = displacement_matrix(alpha, state.dim());
    Complex chi = (state.matrix() * d).trace();
    if (std::abs(chi) > 1.0 + 1e-12)
        throw InvariantViolation("char_fn: |chi| > 1, state outside containment");
    return chi;
}

TruncationReport truncation_report(const OscillatorState& state,
                                   const std::vector<Complex>& pending_displacements,
                                   int kraus_cutoff) {
    TruncationReport rep;
    rep.trace_deficit = state.trace_deficit();

    if (kraus_cutoff >= 0) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(state.matrix(), Eigen::EigenvaluesOnly);
        Eigen::VectorXd ev = es.eigenvalues();  // ascending
        double tail = rep.trace_deficit;
        // kraus_cutoff counts retained eigenvectors; everything beyond is tail
        int retained = std::max(1, kraus_cutoff);
        int drop = state.dim() - retained;
        for (int i = 0; i < drop; ++i) tail += std::max(0.0, ev(i));
        rep.tail_eps = tail;
    } else {
        rep.tail_eps = rep.trace_deficit;
    }

    const int dim = state.dim();
    const int top_start = dim - std::max(1, dim / 10);
    auto top_weight = [&](const Eigen::VectorXd& diag) {
        double w = 0.0;
        for (int n = top_start; n < dim; ++n) w += std::max(0.0, diag(n));
        return w;
    };
    rep.containment_margin = top_weight(state.matrix().diagonal().real());
    for (Complex b : pending_displacements) {
        Matrix d = displacement_matrix(b, dim);
        Matrix m = d * state.matrix();
        // diag(D rho D^dag)_n = sum_k (D rho)_{nk} conj(D_{nk})
        Eigen::VectorXd diag = (m.array() * d.array().conjugate()).rowwise().sum().real();
        rep.containment_margin = std::max(rep.containment_margin, top_weight(diag));
    }
    return rep;
}

Spectrum spectral_decomposition(const OscillatorState& state) {
    const Matrix& m = state.matrix();
    const int dim = state.dim();
    Spectrum sp;
    sp.values.resize(dim);
    sp.vectors.resize(dim, dim);

    bool diagonal = true;
    for (int i = 0; i < dim && diagonal; ++i)
        for (int j = 0; j < dim; ++j)
            if (i != j && std::abs(m(i, j)) > 0.0) { diagonal = false; break; }

    std::vector<int> order(dim);
    for (int i = 0; i < dim; ++i) order[i] = i;

    if (diagonal) {
        Eigen::VectorXd diag = m.diagonal().real();
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return diag(a) > diag(b);  // stable: Fock-index tiebreak
        });
        sp.vectors.setZero();
        for (int i = 0; i < dim; ++i) {
            sp.values(i) = std::max(0.0, diag(order[i]));
            sp.vectors(order[i], i) = 1.0;
        }
        return sp;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues();  // ascending
    for (int i = 0; i < dim; ++i) {
        sp.values(i) = std::max(0.0, ev(dim - 1 - i));
        sp.vectors.col(i) = es.eigenvectors().col(dim - 1 - i);
    }
    return sp;
}

int recommended_dim(double max_total_displacement, double nbar) {
    double base = std::ceil((std::abs(max_total_displacement) + 6.0) *
                            (std::abs(max_total_displacement) + 6.0));
    int tail_len = 0;
    if (nbar > 0.0) {
        double log_q = std::log(nbar / (1.0 + nbar));  // < 0
        tail_len = static_cast<int>(std::ceil(8.0 * std::log(10.0) / -log_q));
    }
    return static_cast<int>(base) + tail_len;
}

} // namespace hybridcorr
