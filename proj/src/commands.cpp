#include "hybridcorr/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>

#include "hybridcorr/correlations.hpp"
#include "hybridcorr/digitalize.hpp"
#include "hybridcorr/protocols.hpp"

namespace hybridcorr {

namespace {

struct RowTimer {
    explicit RowTimer(bool enabled) : enabled_(enabled) {
        if (enabled_) start_ = std::chrono::steady_clock::now();
    }
    double seconds() const {
        if (!enabled_) return 0.0;
        const auto dt = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double>(dt).count();
    }
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

QubitParams make_qubit(double p, double r_abs, double r_arg) {
    QubitParams q;
    q.excited_prob = p;
    q.coherence = r_abs * std::exp(Complex(0.0, r_arg));
    return q;
}

int resolve_dim(double dim, Complex beta, double nbar) {
    const int d = static_cast<int>(dim);
    return d > 0 ? d : recommended_dim(std::abs(beta), nbar);
}

// Axis order shared by the four sweep commands.
void add_state_axes(Grid& grid, const SweepConfig& cfg) {
    grid.add("p", cfg.get_grid("p", {0.5}));
    grid.add("r_abs", cfg.get_grid("r_abs", {0.5}));
    grid.add("r_arg", cfg.get_grid("r_arg", {0.0}));
    grid.add("beta_re", cfg.get_grid("beta_re", {4.0}));
    grid.add("beta_im", cfg.get_grid("beta_im", {0.0}));
    grid.add("nbar", cfg.get_grid("nbar", {0.0}));
    grid.add("dim", cfg.get_grid("dim", {0.0}));
}

struct StatePoint {
    QubitParams qubit;
    Complex beta;
    double nbar = 0.0;
    int dim = 0;
};

StatePoint state_point(const Grid& grid, std::size_t i) {
    StatePoint pt;
    pt.qubit = make_qubit(grid.value(i, 0), grid.value(i, 1), grid.value(i, 2));
    pt.beta = Complex(grid.value(i, 3), grid.value(i, 4));
    pt.nbar = grid.value(i, 5);
    pt.dim = resolve_dim(grid.value(i, 6), pt.beta, pt.nbar);
    return pt;
}

std::vector<double> state_columns(const StatePoint& pt) {
    return {pt.qubit.excited_prob, std::abs(pt.qubit.coherence),
            std::arg(pt.qubit.coherence), pt.beta.real(), pt.beta.imag(),
            pt.nbar, static_cast<double>(pt.dim)};
}

const std::vector<std::string> kStateColumns = {
    "p", "r_abs", "r_arg", "beta_re", "beta_im", "nbar", "dim"};

std::vector<std::string> with_state_columns(std::vector<std::string> rest) {
    std::vector<std::string> cols = kStateColumns;
    cols.insert(cols.end(), rest.begin(), rest.end());
    return cols;
}

void append(std::vector<double>& row, std::initializer_list<double> tail) {
    row.insert(row.end(), tail.begin(), tail.end());
}

} // namespace

Table cmd_correlations(const SweepConfig& cfg, const RunOptions& run) {
    cfg.restrict_keys({"p", "r_abs", "r_arg", "beta_re", "beta_im", "nbar",
                       "dim", "with_dz_numeric", "trace_tol",
                       "containment_tol"});
    Grid grid;
    add_state_axes(grid, cfg);
    const bool with_dz = cfg.get_int("with_dz_numeric", 0) != 0;
    const double trace_tol = cfg.get_double("trace_tol", 1e-6);
    const double containment_tol = cfg.get_double("containment_tol", 1e-6);

    Table t;
    std::vector<std::string> rest = {
        "purity_b0",      "negativity",   "negativity_asymptote",
        "geometric_discord", "geometric_discord_asymptote", "dz_digitalized"};
    if (with_dz) rest.push_back("dz_numeric");
    rest.insert(rest.end(), {"trace_deficit", "tail_eps",
                             "containment_margin", "wall_time"});
    t.columns = with_state_columns(rest);

    run_indexed(
        grid.size(), run.jobs,
        [&](std::size_t i) {
            const RowTimer timer(run.timing);
            const StatePoint pt = state_point(grid, i);
            const OscillatorState osc =
                thermal_state(pt.nbar, pt.dim, trace_tol);
            CorrelationReportOptions opts;
            opts.with_dz_numeric = with_dz;
            opts.containment_tol = containment_tol;
            const CorrelationReport rep =
                correlation_report(pt.qubit, osc, pt.beta, opts);
            std::vector<double> row = state_columns(pt);
            append(row, {rep.purity_b0, rep.negativity,
                         rep.negativity_asymptote, rep.geometric_discord,
                         rep.geometric_discord_asymptote, rep.dz_digitalized});
            if (with_dz) row.push_back(rep.dz_numeric);
            append(row, {rep.truncation.trace_deficit, rep.truncation.tail_eps,
                         rep.truncation.containment_margin, timer.seconds()});
            return row;
        },
        t.rows);
    return t;
}

Table cmd_teleport(const SweepConfig& cfg, const RunOptions& run) {
    cfg.restrict_keys({"p", "r_abs", "r_arg", "beta_re", "beta_im", "nbar",
                       "dim", "n_kept", "mc_samples", "trace_tol",
                       "containment_tol"});
    Grid grid;
    add_state_axes(grid, cfg);
    grid.add("n_kept", cfg.get_grid("n_kept", {-1.0}));
    const int mc_samples = cfg.get_int("mc_samples", 0);
    const double trace_tol = cfg.get_double("trace_tol", 1e-6);
    const double containment_tol = cfg.get_double("containment_tol", 1e-6);

    Table t;
    t.columns = with_state_columns({"n_kept", "gram_deviation",
                                    "average_fidelity", "classical_threshold",
                                    "payoff", "wall_time"});
    run_indexed(
        grid.size(), run.jobs,
        [&](std::size_t i) {
            const RowTimer timer(run.timing);
            const StatePoint pt = state_point(grid, i);
            const OscillatorState osc =
                thermal_state(pt.nbar, pt.dim, trace_tol);
            const Spectrum spec = spectral_decomposition(osc);
            const HybridState rho =
                build_resource_state(pt.qubit, osc, pt.beta, containment_tol);
            int n_kept = static_cast<int>(grid.value(i, 7));
            if (n_kept < 0) n_kept = auto_n_kept(spec, pt.beta);
            const TeleportEngine engine(rho, spec, pt.beta, n_kept);
            const double avg = engine.average_fidelity(mc_samples, run.seed);
            const double threshold = 2.0 / 3.0;
            std::vector<double> row = state_columns(pt);
            append(row, {static_cast<double>(n_kept), engine.gram_deviation(),
                         avg, threshold, payoff(avg, threshold),
                         timer.seconds()});
            return row;
        },
        t.rows);
    return t;
}

Table cmd_rsp(const SweepConfig& cfg, const RunOptions& run) {
    cfg.restrict_keys({"p", "r_abs", "r_arg", "beta_re", "beta_im", "nbar",
                       "dim", "n_kept", "kraus_cutoff", "mode", "phi",
                       "quadrature_order", "trace_tol", "containment_tol"});
    Grid grid;
    add_state_axes(grid, cfg);
    grid.add("n_kept", cfg.get_grid("n_kept", {-1.0}));
    grid.add("kraus_cutoff", cfg.get_grid("kraus_cutoff", {-1.0}));
    const std::string mode_name = cfg.get_string("mode", "unitary");
    RspMode mode;
    if (mode_name == "unitary") {
        mode = RspMode::unitary_correction;
    } else if (mode_name == "digitalizing") {
        mode = RspMode::digitalizing_correction;
    } else {
        throw UsageError("mode must be unitary or digitalizing, got '" +
                         mode_name + "'");
    }
    const double phi = cfg.get_double("phi", 0.0);
    const int quad = cfg.get_int("quadrature_order", 64);
    if (quad < 1) throw UsageError("quadrature_order must be positive");
    const double trace_tol = cfg.get_double("trace_tol", 1e-6);
    const double containment_tol = cfg.get_double("containment_tol", 1e-6);

    Table t;
    t.columns = with_state_columns(
        {"mode", "n_kept", "kraus_cutoff", "phi", "fidelity_at_phi",
         "average_fidelity", "classical_threshold", "payoff", "success_prob",
         "wall_time"});
    run_indexed(
        grid.size(), run.jobs,
        [&](std::size_t i) {
            const RowTimer timer(run.timing);
            const StatePoint pt = state_point(grid, i);
            const OscillatorState osc =
                thermal_state(pt.nbar, pt.dim, trace_tol);
            const Spectrum spec = spectral_decomposition(osc);
            const HybridState rho =
                build_resource_state(pt.qubit, osc, pt.beta, containment_tol);
            int n_kept = static_cast<int>(grid.value(i, 7));
            int kraus = static_cast<int>(grid.value(i, 8));
            RspResult res;
            if (mode == RspMode::unitary_correction) {
                if (n_kept < 0) n_kept = auto_n_kept(spec, pt.beta);
                kraus = 0;
                res = rsp_simulate(rho, spec, phi, pt.beta, mode, n_kept,
                                   nullptr, quad);
            } else {
                if (kraus < 1) kraus = auto_kraus_cutoff(spec, pt.beta);
                n_kept = 0;
                DigitalizeConfig dig;
                dig.kraus_cutoff = kraus;
                dig.beta = pt.beta;
                res = rsp_simulate(rho, spec, phi, pt.beta, mode, -1, &dig,
                                   quad);
            }
            std::vector<double> row = state_columns(pt);
            append(row,
                   {mode == RspMode::unitary_correction ? 0.0 : 1.0,
                    static_cast<double>(n_kept), static_cast<double>(kraus),
                    phi, res.fidelity_at_phi, res.average_fidelity,
                    res.classical_threshold, res.payoff, res.success_prob,
                    timer.seconds()});
            return row;
        },
        t.rows);
    return t;
}

Table cmd_digitalize(const SweepConfig& cfg, const RunOptions& run) {
    cfg.restrict_keys({"p", "r_abs", "r_arg", "beta_re", "beta_im", "nbar",
                       "dim", "kraus_cutoff", "fail_policy", "trace_tol",
                       "containment_tol", "completeness_tol"});
    Grid grid;
    add_state_axes(grid, cfg);
    grid.add("kraus_cutoff", cfg.get_grid("kraus_cutoff", {-1.0}));
    const std::string policy_name = cfg.get_string("fail_policy", "track");
    FailPolicy policy;
    if (policy_name == "track") {
        policy = FailPolicy::track_fail_flag;
    } else if (policy_name == "renormalize") {
        policy = FailPolicy::renormalize_success;
    } else {
        throw UsageError("fail_policy must be track or renormalize, got '" +
                         policy_name + "'");
    }
    const double trace_tol = cfg.get_double("trace_tol", 1e-6);
    const double containment_tol = cfg.get_double("containment_tol", 1e-6);
    const double completeness_tol = cfg.get_double("completeness_tol", 1e-6);

    Table t;
    t.columns = with_state_columns(
        {"kraus_cutoff", "fail_policy", "success_prob", "completeness_gap",
         "whitened", "channel_fidelity", "spectral_tail", "wall_time"});
    run_indexed(
        grid.size(), run.jobs,
        [&](std::size_t i) {
            const RowTimer timer(run.timing);
            const StatePoint pt = state_point(grid, i);
            const OscillatorState osc =
                thermal_state(pt.nbar, pt.dim, trace_tol);
            const Spectrum spec = spectral_decomposition(osc);
            const HybridState rho =
                build_resource_state(pt.qubit, osc, pt.beta, containment_tol);
            int kraus = static_cast<int>(grid.value(i, 7));
            if (kraus < 1) kraus = auto_kraus_cutoff(spec, pt.beta);
            DigitalizeConfig dig;
            dig.kraus_cutoff = kraus;
            dig.beta = pt.beta;
            dig.fail_policy = policy;
            const DigitalizeResult res =
                digitalize_channel(rho, spec, dig, completeness_tol);
            const double fid =
                channel_fidelity(res, digitalized_target(pt.qubit));
            std::vector<double> row = state_columns(pt);
            append(row, {static_cast<double>(kraus),
                         policy == FailPolicy::track_fail_flag ? 0.0 : 1.0,
                         res.success_prob, res.completeness_gap,
                         res.whitened ? 1.0 : 0.0, fid,
                         spectral_tail(osc, kraus), timer.seconds()});
            return row;
        },
        t.rows);
    return t;
}

Table cmd_figure2(const SweepConfig& cfg, const RunOptions& run) {
    cfg.restrict_keys({"r_points"});
    const int n = cfg.get_int("r_points", 26);
    if (n < 2) throw UsageError("r_points must be at least 2");
    // Finite-displacement validation points; dims sized so every curve sits
    // inside its asymptotic tolerance at beta = 4.
    const Complex beta(4.0, 0.0);
    const int dim_vacuum = 200;
    const int dim_mu05 = 240;   // nbar = 0.5
    const int dim_mu01 = 288;   // nbar = 4.5

    Table t;
    t.columns = {"r_abs",
                 "negativity_limit",
                 "dz_limit",
                 "dg_limit_mu05",
                 "dg_limit_mu01",
                 "negativity_beta4",
                 "dz_beta4",
                 "dg_beta4_mu05",
                 "dg_beta4_mu01",
                 "wall_time"};
    run_indexed(
        static_cast<std::size_t>(n), run.jobs,
        [&](std::size_t i) {
            const RowTimer timer(run.timing);
            const double r = 0.5 * static_cast<double>(i) / (n - 1);
            const QubitParams qubit = make_qubit(0.5, r, 0.0);

            const OscillatorState vac = thermal_state(0.0, dim_vacuum);
            const HybridState rho_vac = build_resource_state(qubit, vac, beta);
            const double neg = negativity(rho_vac);
            const double dz = entropic_discord_numeric(rho_vac);

            const OscillatorState osc05 = thermal_state(0.5, dim_mu05);
            const double dg05 =
                geometric_discord(build_resource_state(qubit, osc05, beta));
            const OscillatorState osc01 = thermal_state(4.5, dim_mu01);
            const double dg01 =
                geometric_discord(build_resource_state(qubit, osc01, beta));

            return std::vector<double>{
                r,
                negativity_asymptote(qubit),
                entropic_discord_digitalized(qubit),
                geometric_discord_asymptote(qubit, 0.5),
                geometric_discord_asymptote(qubit, 0.1),
                neg,
                dz,
                dg05,
                dg01,
                timer.seconds()};
        },
        t.rows);
    return t;
}

FigureThreeTables cmd_figure3(const SweepConfig& cfg, const RunOptions& run) {
    cfg.restrict_keys({"r_points", "b_r", "b_nbar"});
    const int n = cfg.get_int("r_points", 26);
    if (n < 2) throw UsageError("r_points must be at least 2");
    const std::vector<double> b_r =
        cfg.get_grid("b_r", {0.1, 0.2, 0.3, 0.4, 0.5});
    const std::vector<double> b_nbar =
        cfg.get_grid("b_nbar", {0.0, 0.25, 0.5, 1.0, 2.0, 4.5});
    const Complex beta(4.0, 0.0);
    const int dim_vacuum = 200;

    FigureThreeTables out;

    out.teleport_vs_negativity.columns = {"r_abs", "negativity",
                                          "payoff_teleport", "wall_time"};
    run_indexed(
        static_cast<std::size_t>(n), run.jobs,
        [&](std::size_t i) {
            const RowTimer timer(run.timing);
            const double r = 0.5 * static_cast<double>(i) / (n - 1);
            const QubitParams qubit = make_qubit(0.5, r, 0.0);
            const OscillatorState vac = thermal_state(0.0, dim_vacuum);
            const Spectrum spec = spectral_decomposition(vac);
            const HybridState rho = build_resource_state(qubit, vac, beta);
            const double avg =
                TeleportEngine(rho, spec, beta, 1).average_fidelity();
            return std::vector<double>{r, negativity(rho),
                                       payoff(avg, 2.0 / 3.0),
                                       timer.seconds()};
        },
        out.teleport_vs_negativity.rows);

    out.rsp_unitary_vs_sqrt_discord.columns = {
        "r_abs",       "nbar",        "mu",          "sqrt_dg",
        "payoff_rsp",  "bound_lower", "bound_upper", "wall_time"};
    run_indexed(
        b_r.size() * b_nbar.size(), run.jobs,
        [&](std::size_t i) {
            const RowTimer timer(run.timing);
            const double r = b_r[i / b_nbar.size()];
            const double nbar = b_nbar[i % b_nbar.size()];
            const QubitParams qubit = make_qubit(0.5, r, 0.0);
            const int dim = recommended_dim(std::abs(beta), nbar);
            const OscillatorState osc = thermal_state(nbar, dim);
            const Spectrum spec = spectral_decomposition(osc);
            const HybridState rho = build_resource_state(qubit, osc, beta);
            const double dg = geometric_discord(rho);
            const double avg = rsp_average_fidelity(
                rho, spec, beta, RspMode::unitary_correction);
            const double threshold = rsp_classical_threshold(beta, dim);
            const auto bounds = rsp_payoff_bounds(dg);
            return std::vector<double>{r,
                                       nbar,
                                       purity(osc),
                                       std::sqrt(dg),
                                       payoff(avg, threshold),
                                       bounds.first,
                                       bounds.second,
                                       timer.seconds()};
        },
        out.rsp_unitary_vs_sqrt_discord.rows);

    out.rsp_digitalizing_vs_negativity.columns = {
        "r_abs", "negativity", "payoff_rsp_digitalizing", "wall_time"};
    run_indexed(
        static_cast<std::size_t>(n), run.jobs,
        [&](std::size_t i) {
            const RowTimer timer(run.timing);
            const double r = 0.5 * static_cast<double>(i) / (n - 1);
            const QubitParams qubit = make_qubit(0.5, r, 0.0);
            const OscillatorState vac = thermal_state(0.0, dim_vacuum);
            const Spectrum spec = spectral_decomposition(vac);
            const HybridState rho = build_resource_state(qubit, vac, beta);
            DigitalizeConfig dig;
            dig.kraus_cutoff = 1;
            dig.beta = beta;
            const RspResult res =
                rsp_simulate(rho, spec, 0.0, beta,
                             RspMode::digitalizing_correction, -1, &dig);
            return std::vector<double>{r, negativity(rho), res.payoff,
                                       timer.seconds()};
        },
        out.rsp_digitalizing_vs_negativity.rows);

    return out;
}

Table cmd_converge(const SweepConfig& cfg, const RunOptions& run) {
    cfg.restrict_keys({"p", "r_abs", "r_arg", "nbar", "beta_re", "beta_im",
                       "dim", "with_dz_numeric"});
    const double p = cfg.get_double("p", 0.5);
    const double r_abs = cfg.get_double("r_abs", 0.5);
    const double r_arg = cfg.get_double("r_arg", 0.0);
    const double nbar = cfg.get_double("nbar", 0.0);
    const bool with_dz = cfg.get_int("with_dz_numeric", 0) != 0;
    Grid grid;
    grid.add("beta_re", cfg.get_grid("beta_re", {1.0, 2.0, 3.0, 4.0}));
    grid.add("beta_im", cfg.get_grid("beta_im", {0.0}));
    grid.add("dim", cfg.get_grid("dim", {0.0}));
    const QubitParams qubit = make_qubit(p, r_abs, r_arg);

    Table t;
    t.columns = {"beta_re",       "beta_im",
                 "dim",           "negativity",
                 "negativity_gap", "geometric_discord",
                 "dg_gap",        "chi_2beta_abs"};
    if (with_dz) {
        t.columns.push_back("dz_numeric");
        t.columns.push_back("dz_gap");
    }
    t.columns.insert(t.columns.end(),
                     {"trace_deficit", "containment_margin",
                      "containment_warning", "wall_time"});

    static std::mutex warn_mutex;
    run_indexed(
        grid.size(), run.jobs,
        [&](std::size_t i) {
            const RowTimer timer(run.timing);
            const Complex beta(grid.value(i, 0), grid.value(i, 1));
            const int dim = resolve_dim(grid.value(i, 2), beta, nbar);
            // Diagnostics must come out even (especially) when the basis is
            // too small, so containment stops nothing here.
            const OscillatorState osc = thermal_state(nbar, dim, 1.0);
            const TruncationReport trunc =
                truncation_report(osc, {beta, -beta});
            const bool warn = trunc.containment_margin > 1e-6;
            if (warn) {
                const std::lock_guard<std::mutex> lock(warn_mutex);
                std::fprintf(stderr,
                             "warning: dim=%d below containment for "
                             "beta=(%g,%g), margin %.3g\n",
                             dim, beta.real(), beta.imag(),
                             trunc.containment_margin);
            }
            const HybridState rho =
                build_resource_state(qubit, osc, beta, 1.0);
            const double neg = negativity(rho);
            const double dg = geometric_discord(rho);
            const double mu = purity(osc);
            const Matrix d2 = displacement_matrix(2.0 * beta, dim);
            const double chi = std::abs(
                osc.matrix().transpose().cwiseProduct(d2).sum());

            std::vector<double> row = {
                beta.real(),
                beta.imag(),
                static_cast<double>(dim),
                neg,
                std::abs(neg - negativity_asymptote(qubit)),
                dg,
                std::abs(dg - geometric_discord_asymptote(qubit, mu))};
            row.push_back(chi);
            if (with_dz) {
                const double dz = entropic_discord_numeric(rho);
                row.push_back(dz);
                row.push_back(dz - entropic_discord_digitalized(qubit));
            }
            append(row, {trunc.trace_deficit, trunc.containment_margin,
                         warn ? 1.0 : 0.0, timer.seconds()});
            return row;
        },
        t.rows);
    return t;
}

} // namespace hybridcorr
