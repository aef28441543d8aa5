#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hybridcorr/commands.hpp"

namespace {

using hybridcorr::OutputFormat;
using hybridcorr::Table;
using hybridcorr::UsageError;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    int jobs = 1;
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    bool timing = false;
    std::vector<std::string> sets;
};

void attach_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path,
                    "config file, one key = value per line, '#' comments");
    sub->add_option("--out", args.out_path,
                    "output path (default: stdout; figure commands default "
                    "to figure2.<fmt> / figure3_<panel>.<fmt>)");
    sub->add_option("--format", args.format, "csv or json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", args.jobs, "worker threads (default 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", args.seed,
                    "RNG seed (teleport Monte Carlo sampling only)");
    sub->add_flag("--timing", args.timing,
                  "measure wall_time columns instead of emitting 0 "
                  "(breaks byte-reproducibility)");
    sub->add_option("--set", args.sets,
                    "override a config entry, key=value (repeatable; wins "
                    "over the file)");
}

void emit_table(const Table& table, const std::string& out_path,
                OutputFormat format) {
    if (out_path.empty()) {
        hybridcorr::write_table(table, std::cout, format);
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw UsageError("cannot open output file: " + out_path);
    hybridcorr::write_table(table, os, format);
}

// figure3.csv -> figure3_a.csv; extensionless paths get a plain suffix.
std::string with_panel(const std::string& base, const std::string& panel) {
    const auto dot = base.find_last_of('.');
    const auto slash = base.find_last_of('/');
    if (dot == std::string::npos ||
        (slash != std::string::npos && dot < slash))
        return base + panel;
    return base.substr(0, dot) + panel + base.substr(dot);
}

constexpr const char* kGridKeysHelp =
    "Config grids (comma lists, cartesian product in this order): "
    "p, r_abs, r_arg, beta_re, beta_im, nbar, dim (0 = auto)";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Qubit-oscillator resource states from controlled displacements: "
        "correlation measures, teleportation and remote state preparation."};
    app.require_subcommand(1);
    CommonArgs args;

    CLI::App* correlations = app.add_subcommand(
        "correlations",
        std::string("Sweep correlation measures against their "
                    "large-displacement limits.\n") +
            kGridKeysHelp +
            "; scalars: with_dz_numeric, trace_tol, containment_tol.\n"
            "Columns: p,r_abs,r_arg,beta_re,beta_im,nbar,dim,purity_b0,"
            "negativity,negativity_asymptote,geometric_discord,"
            "geometric_discord_asymptote,dz_digitalized[,dz_numeric],"
            "trace_deficit,tail_eps,containment_margin,wall_time");
    attach_common(correlations, args);

    CLI::App* teleport = app.add_subcommand(
        "teleport",
        std::string("Sweep hybrid teleportation average fidelity and "
                    "payoff.\n") +
            kGridKeysHelp +
            ", n_kept (-1 = auto); scalars: mc_samples (0 = exact average), "
            "trace_tol, containment_tol.\n"
            "Columns: p,r_abs,r_arg,beta_re,beta_im,nbar,dim,n_kept,"
            "gram_deviation,average_fidelity,classical_threshold,payoff,"
            "wall_time");
    attach_common(teleport, args);

    CLI::App* rsp = app.add_subcommand(
        "rsp",
        std::string("Sweep remote state preparation fidelity and payoff.\n") +
            kGridKeysHelp +
            ", n_kept (-1 = auto), kraus_cutoff (-1 = auto); scalars: mode "
            "(unitary|digitalizing), phi, quadrature_order, trace_tol, "
            "containment_tol.\n"
            "Columns: p,r_abs,r_arg,beta_re,beta_im,nbar,dim,mode,n_kept,"
            "kraus_cutoff,phi,fidelity_at_phi,average_fidelity,"
            "classical_threshold,payoff,success_prob,wall_time");
    attach_common(rsp, args);

    CLI::App* digitalize = app.add_subcommand(
        "digitalize",
        std::string("Sweep the oscillator-to-qubit digitalization "
                    "channel.\n") +
            kGridKeysHelp +
            ", kraus_cutoff (-1 = auto); scalars: fail_policy "
            "(track|renormalize), trace_tol, containment_tol, "
            "completeness_tol.\n"
            "Columns: p,r_abs,r_arg,beta_re,beta_im,nbar,dim,kraus_cutoff,"
            "fail_policy,success_prob,completeness_gap,whitened,"
            "channel_fidelity,spectral_tail,wall_time");
    attach_common(digitalize, args);

    CLI::App* figure2 = app.add_subcommand(
        "figure2",
        "Correlation measures vs |r| at p = 1/2: analytic "
        "large-displacement curves next to beta = 4 numerics.\n"
        "Config scalars: r_points (default 26).\n"
        "Columns: r_abs,negativity_limit,dz_limit,dg_limit_mu05,"
        "dg_limit_mu01,negativity_beta4,dz_beta4,dg_beta4_mu05,"
        "dg_beta4_mu01,wall_time");
    attach_common(figure2, args);

    CLI::App* figure3 = app.add_subcommand(
        "figure3",
        "Protocol payoffs vs their correlation measures, three files "
        "(_a teleport, _b unitary rsp, _c digitalizing rsp).\n"
        "Config: r_points (default 26), b_r, b_nbar (panel b grids).\n"
        "Columns a: r_abs,negativity,payoff_teleport,wall_time; "
        "b: r_abs,nbar,mu,sqrt_dg,payoff_rsp,bound_lower,bound_upper,"
        "wall_time; c: r_abs,negativity,payoff_rsp_digitalizing,wall_time");
    attach_common(figure3, args);

    CLI::App* converge = app.add_subcommand(
        "converge",
        "Gap to each asymptote as beta and dim sweep, with truncation "
        "diagnostics.\n"
        "Config grids: beta_re (default 1,2,3,4), beta_im, dim (0 = auto); "
        "scalars: p, r_abs, r_arg, nbar, with_dz_numeric.\n"
        "Columns: beta_re,beta_im,dim,negativity,negativity_gap,"
        "geometric_discord,dg_gap,chi_2beta_abs[,dz_numeric,dz_gap],"
        "trace_deficit,containment_margin,containment_warning,wall_time");
    attach_common(converge, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        hybridcorr::SweepConfig cfg =
            hybridcorr::SweepConfig::from_file(args.config_path);
        for (const auto& s : args.sets) cfg.apply_override(s);
        hybridcorr::RunOptions run;
        run.jobs = args.jobs;
        run.seed = args.seed;
        run.timing = args.timing;
        const OutputFormat fmt = hybridcorr::parse_format(args.format);
        const std::string ext = args.format;

        if (app.got_subcommand(correlations)) {
            emit_table(hybridcorr::cmd_correlations(cfg, run), args.out_path,
                       fmt);
        } else if (app.got_subcommand(teleport)) {
            emit_table(hybridcorr::cmd_teleport(cfg, run), args.out_path, fmt);
        } else if (app.got_subcommand(rsp)) {
            emit_table(hybridcorr::cmd_rsp(cfg, run), args.out_path, fmt);
        } else if (app.got_subcommand(digitalize)) {
            emit_table(hybridcorr::cmd_digitalize(cfg, run), args.out_path,
                       fmt);
        } else if (app.got_subcommand(figure2)) {
            const std::string out =
                args.out_path.empty() ? "figure2." + ext : args.out_path;
            emit_table(hybridcorr::cmd_figure2(cfg, run), out, fmt);
        } else if (app.got_subcommand(figure3)) {
            const std::string base =
                args.out_path.empty() ? "figure3." + ext : args.out_path;
            const hybridcorr::FigureThreeTables tables =
                hybridcorr::cmd_figure3(cfg, run);
            emit_table(tables.teleport_vs_negativity, with_panel(base, "_a"),
                       fmt);
            emit_table(tables.rsp_unitary_vs_sqrt_discord,
                       with_panel(base, "_b"), fmt);
            emit_table(tables.rsp_digitalizing_vs_negativity,
                       with_panel(base, "_c"), fmt);
        } else {
            emit_table(hybridcorr::cmd_converge(cfg, run), args.out_path, fmt);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
