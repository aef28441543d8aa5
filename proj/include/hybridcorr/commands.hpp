#pragma once

#include <cstdint>
#include <string>

#include "hybridcorr/sweep.hpp"

namespace hybridcorr {

struct RunOptions {
    int jobs = 1;
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    // Off: wall_time columns emit 0 so output stays byte-reproducible.
    bool timing = false;
};

// Each command validates its config keys, expands the parameter grid, and
// computes rows in grid order. Column schemas are fixed per command and
// repeated in the CLI help text.

Table cmd_correlations(const SweepConfig& cfg, const RunOptions& run);
Table cmd_teleport(const SweepConfig& cfg, const RunOptions& run);
Table cmd_rsp(const SweepConfig& cfg, const RunOptions& run);
Table cmd_digitalize(const SweepConfig& cfg, const RunOptions& run);

// Analytic large-displacement curves vs |r| at p = 1/2, next to their
// finite-displacement numerical counterparts.
Table cmd_figure2(const SweepConfig& cfg, const RunOptions& run);

struct FigureThreeTables {
    Table teleport_vs_negativity;        // panel a
    Table rsp_unitary_vs_sqrt_discord;   // panel b
    Table rsp_digitalizing_vs_negativity;  // panel c
};
FigureThreeTables cmd_figure3(const SweepConfig& cfg, const RunOptions& run);

// Gap to every asymptote as beta and dim sweep; containment warnings go to
// stderr and the containment_warning column.
Table cmd_converge(const SweepConfig& cfg, const RunOptions& run);

} // namespace hybridcorr
