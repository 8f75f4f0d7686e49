#pragma once

// Experiment configuration for the command-line front end: parsing,
// per-command defaults, validation and canonical serialization.

#include "dersamp/kernels.hpp"
#include "dersamp/recovery.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace CLI {
class App;
}

namespace dersamp::cli {

enum class Command {
  BoundsTable,
  CondTable,
  EigVsN,
  EigVsR,
  EigVsM,
  Recover,
  Reconstruct,
  Spectrum,
};

enum class Format { Csv, Json };

/// Which samples are unknown: one-channel, both channels, or only one of
/// the two channels of the derivative scheme.
enum class Channels { One, Two, Function, Derivative };

struct ExperimentConfig {
  Command command = Command::Spectrum;
  std::vector<double> r;
  double omega = kPi;
  /// Explicit missing indices, or the factored form m * base.
  std::optional<std::vector<long>> missing;
  std::optional<int> m;
  std::optional<std::vector<long>> base;
  long M = kDefaultTruncation;
  std::optional<double> noise;
  std::uint64_t seed = 0;
  NoiseTarget noise_target = NoiseTarget::RightHandSide;
  bool regularize = false;
  std::optional<double> delta;
  Channels channels = Channels::Two;
  /// 1-based eigenvalue positions (ascending real part) for the sweeps.
  std::vector<int> select = {1, 5, 10, 11, 15, 20};
  /// eig-vs-m sweep values.
  std::vector<int> m_values;
  /// eig-vs-N: N = 1, ..., n_max.
  int n_max = 20;
  double x_min = -5.0;
  double x_max = 5.0;
  std::size_t points = 1001;
  std::string output;
  Format format = Format::Csv;
};

std::string command_name(Command c);
Command parse_command(const std::string& name);
std::string channels_name(Channels c);

inline constexpr const char* kAppDescription =
    "dersamp: missing-sample recovery with derivative oversampling";

/// Registers every subcommand and flag on `app`, writing into `cfg`.
void register_options(CLI::App& app, ExperimentConfig& cfg);

/// Parses argv into a validated configuration. CLI11 parse errors propagate
/// as CLI::ParseError; semantic errors as InvalidArgument.
ExperimentConfig parse_command_line(int argc, const char* const* argv);

/// Fills the per-command defaults (r sweeps, missing sets, m values).
void apply_defaults(ExperimentConfig& cfg);

/// Checks every module precondition before any computation.
/// Throws InvalidArgument.
void validate(const ExperimentConfig& cfg);

/// The missing set described by the config (explicit list or m * base).
MissingSet missing_set(const ExperimentConfig& cfg);

/// Canonical form: every field, keys sorted.
nlohmann::json config_to_json(const ExperimentConfig& cfg);
std::string canonical_string(const ExperimentConfig& cfg);

/// Comma-separated list parsers; an empty string gives an empty list.
std::vector<long> parse_index_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

} // namespace dersamp::cli
