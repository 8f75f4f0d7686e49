#include "dersamp/recovery.hpp"

#include "dersamp/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

namespace dersamp {

NoisyData add_noise(std::span<const double> data, const NoiseSpec& spec) {
  if (!(spec.magnitude >= 0.0) || !std::isfinite(spec.magnitude))
    throw InvalidArgument("noise magnitude must be a finite non-negative number");
  NoisyData out{Vector(data.begin(), data.end()), 0.0};
  if (spec.magnitude == 0.0 || data.empty())
    return out;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector e(data.size());
  for (double& v : e)
    v = gauss(rng);
  const double target = spec.magnitude * std::sqrt(static_cast<double>(data.size()));
  const double scale = target / norm2(e);
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] *= scale;
    out.noisy[i] += e[i];
  }
  out.delta = norm2(e);
  return out;
}

namespace {

enum class Channel { Function, Derivative };

struct Slot {
  Channel channel;
  long n;
};

// Noisy copies of the data and a noise-only version of the same series.
struct PerturbedData {
  SampleSeries f, df;
  SampleSeries noise_f, noise_df;
};

PerturbedData perturb(const SampleSeries& f, const SampleSeries& df, std::span<const Slot> slots,
                      const NoiseSpec& spec, long M) {
  Vector data;
  data.reserve(slots.size());
  for (const Slot& s : slots)
    data.push_back(s.channel == Channel::Function ? f.at(s.n) : df.at(s.n));
  const NoisyData nd = add_noise(data, spec);

  PerturbedData out{f, df, SampleSeries(M), SampleSeries(M)};
  for (long n = -M; n <= M; ++n) {
    out.noise_f.set(n, 0.0);
    out.noise_df.set(n, 0.0);
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const double e = nd.noisy[i] - data[i];
    if (slots[i].channel == Channel::Function) {
      out.f.set(slots[i].n, nd.noisy[i]);
      out.noise_f.set(slots[i].n, e);
    } else {
      out.df.set(slots[i].n, nd.noisy[i]);
      out.noise_df.set(slots[i].n, e);
    }
  }
  return out;
}

std::vector<Slot> known_slots(const MissingSet& u, long M, bool f_on_u, bool df_on_u) {
  std::vector<Slot> slots;
  for (long n = -M; n <= M; ++n)
    if (!u.contains(n) || f_on_u)
      slots.push_back({Channel::Function, n});
  for (long n = -M; n <= M; ++n)
    if (!u.contains(n) || df_on_u)
      slots.push_back({Channel::Derivative, n});
  return slots;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(4);
  os << std::scientific << v;
  return os.str();
}

// Solves A z = b, regularized when requested, and fills the common fields.
Vector solve_system(const DenseMatrix& a, const Vector& b, const RecoveryOptions& opts,
                    std::optional<double> delta, RecoveryResult& res) {
  const Vector sv = singular_values(a);
  const double smin = sv.back();
  const double inf = std::numeric_limits<double>::infinity();
  res.condition_estimate = smin < 1e-300 ? inf : sv.front() / smin;
  res.inverse_norm = smin < 1e-300 ? inf : 1.0 / smin;
  Vector z;
  if (opts.regularize) {
    if (!delta || !(*delta > 0.0))
      throw InvalidArgument("regularization requires a positive noise level delta");
    DiscrepancyResult d = discrepancy_select(a, b, *delta);
    res.lambda_used = d.lambda;
    res.delta = *delta;
    if (d.bracket_failure)
      res.warnings.push_back(
          "discrepancy bracket failure: residual at lambda=1e-12 exceeds 1.05*delta");
    z = std::move(d.x);
  } else {
    if (res.condition_estimate > kIllConditionedWarning)
      res.warnings.push_back("ill-conditioned system, cond=" +
                             format_double(res.condition_estimate) +
                             "; consider regularization");
    if (res.inverse_norm > kIllConditionedWarning)
      res.warnings.push_back("near-singular system, ||(I-S)^-1||=" +
                             format_double(res.inverse_norm) + "; recovered values are unreliable");
    z = solve_linear(a, b);
  }
  if (res.condition_estimate > kConditionTrustLimit)
    res.warnings.push_back("condition number beyond binary64 trust");
  Vector r = a * z;
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] -= b[i];
  res.residual_norm = norm2(r);
  return z;
}

RecoveryResult base_result(const MissingSet& u, double t_o) {
  RecoveryResult res;
  res.indices.assign(u.indices().begin(), u.indices().end());
  for (long l : u.indices())
    res.positions.push_back(static_cast<double>(l) * t_o);
  return res;
}

std::optional<double> resolve_delta(const RecoveryOptions& opts,
                                    std::optional<double> noise_delta) {
  if (opts.delta)
    return opts.delta;
  return noise_delta;
}

struct NoisyRhs {
  Vector b;
  std::optional<double> noise_delta;
};

// Builds the right-hand side with rhs(f, df), injecting noise as requested.
// Sample noise touches every known sample in `slots`; the noise-only data
// then gives the exact noise contribution to the right-hand side.
template <class RhsFn>
NoisyRhs noisy_rhs(RhsFn&& rhs, const SampleSeries& f, const SampleSeries& df,
                   std::span<const Slot> slots, long M, const RecoveryOptions& opts) {
  if (!opts.noise)
    return {rhs(f, df), std::nullopt};
  if (opts.noise->target == NoiseTarget::RightHandSide) {
    NoisyData nd = add_noise(rhs(f, df), *opts.noise);
    return {std::move(nd.noisy), nd.delta};
  }
  const PerturbedData pd = perturb(f, df, slots, *opts.noise, M);
  return {rhs(pd.f, pd.df), norm2(rhs(pd.noise_f, pd.noise_df))};
}

Vector values_at(const SampleSeries& s, const MissingSet& u) {
  Vector v;
  v.reserve(u.size());
  for (long l : u.indices())
    v.push_back(s.at(l));
  return v;
}

} // namespace

RecoveryResult recover_two_channel(const TwoChannelParams& p, const MissingSet& u,
                                   const SampleSeries& f, const SampleSeries& df, long M,
                                   const RecoveryOptions& opts) {
  RecoveryResult res = base_result(u, p.t_o());
  const std::size_t n = u.size();
  if (n == 0) {
    res.recovered_function = Vector{};
    res.recovered_derivative = Vector{};
    return res;
  }

  const auto rhs = [&](const SampleSeries& fs, const SampleSeries& dfs) {
    return rhs_two_channel(p, u, fs, dfs, M);
  };
  const NoisyRhs c = noisy_rhs(rhs, f, df, known_slots(u, M, false, false), M, opts);

  const DenseMatrix a = identity_minus(build_S(p, u));
  const Vector z = solve_system(a, c.b, opts, resolve_delta(opts, c.noise_delta), res);
  res.recovered_function = Vector(z.begin(), z.begin() + static_cast<long>(n));
  res.recovered_derivative = Vector(z.begin() + static_cast<long>(n), z.end());
  return res;
}

RecoveryResult recover_function_channel(const TwoChannelParams& p, const MissingSet& u,
                                        const SampleSeries& f, const SampleSeries& df, long M,
                                        const RecoveryOptions& opts) {
  RecoveryResult res = base_result(u, p.t_o());
  const std::size_t n = u.size();
  if (n == 0) {
    res.recovered_function = Vector{};
    return res;
  }
  const SBlocks blocks = split_blocks(build_S(p, u));

  const auto rhs = [&](const SampleSeries& fs, const SampleSeries& dfs) {
    const Vector c = rhs_two_channel(p, u, fs, dfs, M);
    const Vector y = values_at(dfs, u);
    Vector b(c.begin(), c.begin() + static_cast<long>(n));
    const Vector s12y = blocks.s12 * y;
    for (std::size_t k = 0; k < n; ++k)
      b[k] += s12y[k];
    return b;
  };

  const NoisyRhs b = noisy_rhs(rhs, f, df, known_slots(u, M, false, true), M, opts);
  res.recovered_function =
      solve_system(identity_minus(blocks.s11), b.b, opts, resolve_delta(opts, b.noise_delta), res);
  return res;
}

RecoveryResult recover_derivative_channel(const TwoChannelParams& p, const MissingSet& u,
                                          const SampleSeries& f, const SampleSeries& df, long M,
                                          const RecoveryOptions& opts) {
  RecoveryResult res = base_result(u, p.t_o());
  const std::size_t n = u.size();
  if (n == 0) {
    res.recovered_derivative = Vector{};
    return res;
  }
  const SBlocks blocks = split_blocks(build_S(p, u));

  const auto rhs = [&](const SampleSeries& fs, const SampleSeries& dfs) {
    const Vector c = rhs_two_channel(p, u, fs, dfs, M);
    const Vector x = values_at(fs, u);
    Vector b(c.begin() + static_cast<long>(n), c.end());
    const Vector s21x = blocks.s21 * x;
    for (std::size_t k = 0; k < n; ++k)
      b[k] += s21x[k];
    return b;
  };

  const NoisyRhs b = noisy_rhs(rhs, f, df, known_slots(u, M, true, false), M, opts);
  res.recovered_derivative =
      solve_system(identity_minus(blocks.s22), b.b, opts, resolve_delta(opts, b.noise_delta), res);
  return res;
}

RecoveryResult recover_one_channel(const OneChannelParams& p, const MissingSet& u,
                                   const SampleSeries& samples, long M,
                                   const RecoveryOptions& opts) {
  RecoveryResult res = base_result(u, p.t_o());
  if (u.empty()) {
    res.recovered_function = Vector{};
    return res;
  }

  std::vector<Slot> slots;
  for (long n = -M; n <= M; ++n)
    if (!u.contains(n))
      slots.push_back({Channel::Function, n});
  // One channel: the derivative series slot is never read.
  const auto rhs = [&](const SampleSeries& fs, const SampleSeries&) {
    return rhs_one_channel(p, u, fs, M);
  };
  const NoisyRhs b = noisy_rhs(rhs, samples, samples, slots, M, opts);

  const DenseMatrix a = identity_minus(build_R(p, u));
  res.recovered_function = solve_system(a, b.b, opts, resolve_delta(opts, b.noise_delta), res);
  return res;
}

double truncation_delta_two_channel(const TwoChannelParams& p, const MissingSet& u,
                                    const BandLimitedSignal& f, long M) {
  const long wide = 2 * M;
  const SampleSeries fs = sample_function(f, p.t_o(), wide);
  const SampleSeries dfs = sample_derivative(f, p.t_o(), wide);
  const Vector c1 = rhs_two_channel(p, u, fs, dfs, M);
  const Vector c2 = rhs_two_channel(p, u, fs, dfs, wide);
  return 2.0 * norm2(axpy(-1.0, c2, c1));
}

double truncation_delta_one_channel(const OneChannelParams& p, const MissingSet& u,
                                    const BandLimitedSignal& f, long M) {
  const long wide = 2 * M;
  const SampleSeries fs = sample_function(f, p.t_o(), wide);
  const Vector b1 = rhs_one_channel(p, u, fs, M);
  const Vector b2 = rhs_one_channel(p, u, fs, wide);
  return 2.0 * norm2(axpy(-1.0, b2, b1));
}

SampleSeries splice(const SampleSeries& series, const MissingSet& u,
                    std::span<const double> values) {
  if (values.size() != u.size())
    throw LengthMismatch("splice: one value per missing index expected");
  SampleSeries out = series;
  for (std::size_t k = 0; k < u.size(); ++k)
    out.set(u[k], values[k]);
  return out;
}

} // namespace dersamp
