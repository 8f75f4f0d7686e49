#pragma once

// Recovery of missing samples from the assembled systems, with optional
// synthetic noise and Tikhonov regularization tuned by the discrepancy
// principle.

#include "dersamp/kernels.hpp"
#include "dersamp/linalg.hpp"
#include "dersamp/signals.hpp"
#include "dersamp/system.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dersamp {

/// Where synthetic noise enters the recovery problem.
enum class NoiseTarget {
  /// The right-hand side vector (C or B) of the linear system.
  RightHandSide,
  /// Every known sample that enters the right-hand side sums.
  Samples,
};

/// Zero-mean Gaussian noise, rescaled to the exact norm magnitude * sqrt(len).
struct NoiseSpec {
  double magnitude = 0.0;
  std::uint64_t seed = 0;
  NoiseTarget target = NoiseTarget::RightHandSide;
};

struct NoisyData {
  Vector noisy;
  double delta = 0.0; ///< ||noise||_2
};

NoisyData add_noise(std::span<const double> data, const NoiseSpec& spec);

struct RecoveryOptions {
  std::optional<NoiseSpec> noise;
  bool regularize = false;
  /// Noise level for the discrepancy principle. Defaults to the norm of the
  /// noise contribution to the right-hand side when noise is injected.
  std::optional<double> delta;
};

struct RecoveryResult {
  std::vector<long> indices;
  std::vector<double> positions; ///< l_k * t_o
  std::optional<Vector> recovered_function;
  std::optional<Vector> recovered_derivative;
  double lambda_used = 0.0;
  double residual_norm = 0.0;
  double condition_estimate = 1.0;
  /// ||(I - S)^{-1}||_2 = 1 / sigma_min: absolute amplification of data errors.
  /// Catches the r -> 1 collapse I - S -> 0, which cond alone does not see.
  double inverse_norm = 1.0;
  /// Noise level handed to the discrepancy principle (0 when unregularized).
  double delta = 0.0;
  std::vector<std::string> warnings;
};

/// Above this condition number (or inverse norm) an unregularized solve
/// carries a warning.
inline constexpr double kIllConditionedWarning = 1e12;

/// Solves (I - S) Z = C for the missing f and f' samples at U.
RecoveryResult recover_two_channel(const TwoChannelParams& p, const MissingSet& u,
                                   const SampleSeries& f, const SampleSeries& df, long M,
                                   const RecoveryOptions& opts = {});

/// f' known everywhere, f missing on U: (I - S11) X = C1 + S12 Y.
RecoveryResult recover_function_channel(const TwoChannelParams& p, const MissingSet& u,
                                        const SampleSeries& f, const SampleSeries& df, long M,
                                        const RecoveryOptions& opts = {});

/// f known everywhere, f' missing on U: (I - S22) Y = C2 + S21 X.
RecoveryResult recover_derivative_channel(const TwoChannelParams& p, const MissingSet& u,
                                          const SampleSeries& f, const SampleSeries& df, long M,
                                          const RecoveryOptions& opts = {});

/// One-channel recovery (I - R) X = B.
RecoveryResult recover_one_channel(const OneChannelParams& p, const MissingSet& u,
                                   const SampleSeries& samples, long M,
                                   const RecoveryOptions& opts = {});

/// Rough norm of the truncation error of the two-channel right-hand side,
/// 2 ||C_M - C_2M||, used as the discrepancy level for noise-free data.
double truncation_delta_two_channel(const TwoChannelParams& p, const MissingSet& u,
                                    const BandLimitedSignal& f, long M);
double truncation_delta_one_channel(const OneChannelParams& p, const MissingSet& u,
                                    const BandLimitedSignal& f, long M);

/// Replaces the entries at U with recovered values (for reconstruction).
SampleSeries splice(const SampleSeries& series, const MissingSet& u,
                    std::span<const double> values);

} // namespace dersamp
