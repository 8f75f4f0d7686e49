#pragma once

// The experiments behind each CLI subcommand. Every command is a pure
// function of a validated configuration and returns a table.

#include "dersamp/cli/config.hpp"
#include "dersamp/cli/table.hpp"

#include <iosfwd>

namespace dersamp::cli {

/// Rows (r, bounds and extreme eigenvalues of S11 and S22) for U = m * base.
Table cmd_bounds_table(const ExperimentConfig& cfg);

/// Rows (r, cond(I - S), trust flag).
Table cmd_cond_table(const ExperimentConfig& cfg);

/// Largest eigenvalue of S for U = m * {0, ..., N-1}, N = 1..n_max, per r.
Table cmd_eig_vs_n(const ExperimentConfig& cfg);

/// Selected eigenvalues of S over the r sweep.
Table cmd_eig_vs_r(const ExperimentConfig& cfg);

/// Selected eigenvalues of S over the m sweep.
Table cmd_eig_vs_m(const ExperimentConfig& cfg);

/// Per-sample recovery report for the test signal g.
Table cmd_recover(const ExperimentConfig& cfg);

/// Curve (x, g, reconstruction) after splicing recovered samples.
Table cmd_reconstruct(const ExperimentConfig& cfg);

/// Spectrum monitor: max |Im lambda(S)| and eigenvalues outside (0, 1).
Table cmd_spectrum(const ExperimentConfig& cfg);

Table run_command(const ExperimentConfig& cfg);

/// Runs the command and writes the table in the configured format.
void run_and_write(const ExperimentConfig& cfg, std::ostream& os);

} // namespace dersamp::cli
