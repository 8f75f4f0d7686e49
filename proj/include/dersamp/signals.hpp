#pragma once

// Ground-truth band-limited signals, the sampling formulas that rebuild a
// function from its samples, and error metrics.

#include "dersamp/kernels.hpp"
#include "dersamp/linalg.hpp"
#include "dersamp/system.hpp"

#include <span>
#include <string>
#include <vector>

namespace dersamp {

/// One term a * sinc(omega (x - shift)).
struct SincTerm {
  double amplitude = 0.0;
  double shift = 0.0;
};

/// A finite combination of shifted sincs: an exact member of B_omega with an
/// analytic derivative.
class BandLimitedSignal {
public:
  BandLimitedSignal(double band, std::vector<SincTerm> terms, std::string description);

  double band() const { return band_; }
  const std::string& description() const { return description_; }
  std::span<const SincTerm> terms() const { return terms_; }

  double eval(double x) const;
  double eval_deriv(double x) const;

private:
  double band_;
  std::vector<SincTerm> terms_;
  std::string description_;
};

/// g(x) = sinc(pi (x - 2.1)) - 0.7 sinc(pi (x + 1.7)), band pi.
BandLimitedSignal test_signal_g();

BandLimitedSignal sinc_combination(std::vector<SincTerm> terms, double omega);

/// f(n t_o) for |n| <= M.
SampleSeries sample_function(const BandLimitedSignal& f, double t_o, long M);
/// f'(n t_o) for |n| <= M.
SampleSeries sample_derivative(const BandLimitedSignal& f, double t_o, long M);

/// r * sum_{|n|<=M} f(n t_o) sinc(omega (x - n t_o)), r = omega t_o / pi.
double reconstruct_one_channel(const OneChannelParams& p, const SampleSeries& samples, long M,
                               double x);

/// sqrt(2pi) * sum_{|k|<=M} [f(k t_o) dual1(x - k t_o) - f'(k t_o) dual2(x - k t_o)]
double reconstruct_two_channel(const TwoChannelParams& p, const SampleSeries& f,
                               const SampleSeries& df, long M, double x);

/// Derivative of the two-channel formula: same sum with dual1', dual2'.
double reconstruct_two_channel_deriv(const TwoChannelParams& p, const SampleSeries& f,
                                     const SampleSeries& df, long M, double x);

/// Critically sampled derivative formula on B_h, t_o = 2 pi / h:
/// sum_{|n|<=M} [f(n t_o) + f'(n t_o)(x - n t_o)] sinc^2(h (x - n t_o) / 2).
double reconstruct_riesz(double h, double t_o, const SampleSeries& f, const SampleSeries& df,
                         long M, double x);

struct ErrorMetrics {
  double max_abs = 0.0;
  /// |computed - truth| / |truth|; +infinity where truth is 0 and the entries differ.
  std::vector<double> per_entry_rel;
};

ErrorMetrics error_metrics(std::span<const double> truth, std::span<const double> computed);

/// 1001-point uniform grid on [a, b], the default for curve output.
std::vector<double> uniform_grid(double a, double b, std::size_t points = 1001);

} // namespace dersamp
