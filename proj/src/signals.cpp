#include "dersamp/signals.hpp"

#include "dersamp/errors.hpp"

#include <cmath>
#include <limits>

namespace dersamp {

BandLimitedSignal::BandLimitedSignal(double band, std::vector<SincTerm> terms,
                                     std::string description)
    : band_(band), terms_(std::move(terms)), description_(std::move(description)) {
  if (!(band > 0.0) || !std::isfinite(band))
    throw InvalidArgument("signal band must be positive and finite");
}

double BandLimitedSignal::eval(double x) const {
  double s = 0.0;
  for (const auto& t : terms_)
    s += t.amplitude * sinc(band_ * (x - t.shift));
  return s;
}

double BandLimitedSignal::eval_deriv(double x) const {
  double s = 0.0;
  for (const auto& t : terms_)
    s += t.amplitude * band_ * sinc_deriv(band_ * (x - t.shift));
  return s;
}

BandLimitedSignal test_signal_g() {
  return BandLimitedSignal(kPi, {{1.0, 2.1}, {-0.7, -1.7}},
                           "g(x) = sinc(pi(x-2.1)) - 0.7 sinc(pi(x+1.7))");
}

BandLimitedSignal sinc_combination(std::vector<SincTerm> terms, double omega) {
  std::string desc = "sinc combination (" + std::to_string(terms.size()) + " terms)";
  return BandLimitedSignal(omega, std::move(terms), std::move(desc));
}

SampleSeries sample_function(const BandLimitedSignal& f, double t_o, long M) {
  SampleSeries s(M);
  for (long n = -M; n <= M; ++n)
    s.set(n, f.eval(static_cast<double>(n) * t_o));
  return s;
}

SampleSeries sample_derivative(const BandLimitedSignal& f, double t_o, long M) {
  SampleSeries s(M);
  for (long n = -M; n <= M; ++n)
    s.set(n, f.eval_deriv(static_cast<double>(n) * t_o));
  return s;
}

double reconstruct_one_channel(const OneChannelParams& p, const SampleSeries& samples, long M,
                               double x) {
  double s = 0.0;
  for (long n = -M; n <= M; ++n)
    s += samples.at(n) * sinc(p.omega() * (x - static_cast<double>(n) * p.t_o()));
  return p.r() * s;
}

double reconstruct_two_channel(const TwoChannelParams& p, const SampleSeries& f,
                               const SampleSeries& df, long M, double x) {
  double s = 0.0;
  for (long k = -M; k <= M; ++k) {
    const double y = x - static_cast<double>(k) * p.t_o();
    s += f.at(k) * dual_gen_1(y, p) - df.at(k) * dual_gen_2(y, p);
  }
  return kSqrtTwoPi * s;
}

double reconstruct_two_channel_deriv(const TwoChannelParams& p, const SampleSeries& f,
                                     const SampleSeries& df, long M, double x) {
  double s = 0.0;
  for (long k = -M; k <= M; ++k) {
    const double y = x - static_cast<double>(k) * p.t_o();
    s += f.at(k) * dual_gen_1_deriv(y, p) - df.at(k) * dual_gen_2_deriv(y, p);
  }
  return kSqrtTwoPi * s;
}

double reconstruct_riesz(double h, double t_o, const SampleSeries& f, const SampleSeries& df,
                         long M, double x) {
  if (!(h > 0.0) || std::abs(h * t_o - kTwoPi) > 1e-9 * kTwoPi)
    throw InvalidArgument("reconstruct_riesz: requires critical sampling t_o = 2 pi / h");
  double s = 0.0;
  for (long n = -M; n <= M; ++n) {
    const double y = x - static_cast<double>(n) * t_o;
    const double k = sinc(0.5 * h * y);
    s += (f.at(n) + df.at(n) * y) * k * k;
  }
  return s;
}

ErrorMetrics error_metrics(std::span<const double> truth, std::span<const double> computed) {
  if (truth.size() != computed.size())
    throw LengthMismatch("error_metrics: vectors differ in length");
  ErrorMetrics m;
  m.per_entry_rel.reserve(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double err = std::abs(computed[i] - truth[i]);
    m.max_abs = std::max(m.max_abs, err);
    if (err == 0.0)
      m.per_entry_rel.push_back(0.0);
    else if (truth[i] == 0.0)
      m.per_entry_rel.push_back(std::numeric_limits<double>::infinity());
    else
      m.per_entry_rel.push_back(err / std::abs(truth[i]));
  }
  return m;
}

std::vector<double> uniform_grid(double a, double b, std::size_t points) {
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = a;
    return g;
  }
  for (std::size_t i = 0; i < points; ++i)
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

} // namespace dersamp
