#include "dersamp/errors.hpp"
#include "dersamp/recovery.hpp"
#include "dersamp/signals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dersamp;

namespace {

// Up to five terms, amplitudes normalized to sum |a| = 1. The truncation
// error of the reconstruction sums scales with sum |a|.
BandLimitedSignal random_combination(std::mt19937_64& rng, double omega) {
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  std::vector<SincTerm> terms(count(rng));
  double total = 0.0;
  for (auto& t : terms) {
    t = {amp(rng), shift(rng)};
    total += std::abs(t.amplitude);
  }
  for (auto& t : terms) t.amplitude /= total;
  return sinc_combination(std::move(terms), omega);
}

SampleSeries combine(double a, const SampleSeries& s1, double b, const SampleSeries& s2) {
  SampleSeries out(s1.half_width());
  for (long n = -s1.half_width(); n <= s1.half_width(); ++n) {
    out.set(n, a * s1.at(n) + b * s2.at(n));
  }
  return out;
}

} // namespace

TEST(Signal, TestSignalValues) {
  const auto g = test_signal_g();
  EXPECT_EQ(g.band(), kPi);
  EXPECT_NEAR(g.eval(2.1), 1.0 - 0.7 * std::sin(3.8 * kPi) / (3.8 * kPi), 1e-15);
  EXPECT_NEAR(g.eval(2.1), 1.03446539466589722754, 1e-15);
  EXPECT_NEAR(g.eval(0.0), 0.1529, 5e-5);
  EXPECT_NEAR(g.eval(0.0), 0.15287646980463441323, 1e-15);
  EXPECT_NEAR(g.eval_deriv(0.0), -0.7350, 5e-5);
  EXPECT_NEAR(g.eval_deriv(0.0), -0.73498333259534260330, 1e-14);
}

TEST(Signal, SincCombinationBasics) {
  const auto zero = sinc_combination({}, 2.0);
  EXPECT_EQ(zero.eval(0.3), 0.0);
  EXPECT_EQ(zero.eval_deriv(0.3), 0.0);
  const auto one = sinc_combination({{1.0, 0.0}}, 2.0);
  for (double x : {-1.3, 0.0, 0.2, 4.0}) EXPECT_DOUBLE_EQ(one.eval(x), sinc(2.0 * x));
  EXPECT_THROW(sinc_combination({}, 0.0), InvalidArgument);
}

TEST(Signal, SamplesAreAnalyticValues) {
  const auto f = sinc_combination({{0.8, 0.4}, {-0.3, -1.1}}, kPi);
  const auto s = sample_function(f, 0.6, 10);
  const auto ds = sample_derivative(f, 0.6, 10);
  for (long n = -10; n <= 10; ++n) {
    const double x = n * 0.6;
    EXPECT_DOUBLE_EQ(s.at(n), 0.8 * sinc(kPi * (x - 0.4)) - 0.3 * sinc(kPi * (x + 1.1)));
    EXPECT_DOUBLE_EQ(ds.at(n), f.eval_deriv(x));
  }
}

TEST(Signal, DerivativeMatchesFiniteDifferences) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> xs(-8.0, 8.0);
  const double h = 1e-5;
  for (int t = 0; t < 200; ++t) {
    const auto f = random_combination(rng, 0.5 + t % 4);
    const double x = xs(rng);
    const double fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
    EXPECT_NEAR(f.eval_deriv(x), fd, 1e-6 * std::max(std::abs(fd), 1e-2));
  }
}

TEST(Reconstruct, ZeroSignal) {
  const auto zero = sinc_combination({}, kPi);
  const auto p1 = OneChannelParams::from_ratio(kPi, 0.6);
  const auto p2 = TwoChannelParams::from_ratio(kPi, 0.6);
  const auto s1 = sample_function(zero, p1.t_o(), 50);
  const auto s2 = sample_function(zero, p2.t_o(), 50);
  const auto d2 = sample_derivative(zero, p2.t_o(), 50);
  for (double x : {-2.0, 0.0, 1.7}) {
    EXPECT_EQ(reconstruct_one_channel(p1, s1, 50, x), 0.0);
    EXPECT_EQ(reconstruct_two_channel(p2, s2, d2, 50, x), 0.0);
    EXPECT_EQ(reconstruct_riesz(p2.h(), p2.t_o(), s2, d2, 50, x), 0.0);
  }
}

TEST(Reconstruct, OneChannelAtGridPoints) {
  std::mt19937_64 rng(61);
  const auto p = OneChannelParams::from_ratio(kPi, 0.6);
  for (int t = 0; t < 5; ++t) {
    const auto f = random_combination(rng, kPi);
    const auto s = sample_function(f, p.t_o(), 500);
    for (long k = -8; k <= 8; ++k) {
      const double x = k * p.t_o();
      EXPECT_NEAR(reconstruct_one_channel(p, s, 500, x), f.eval(x), 1e-3);
    }
  }
}

TEST(Reconstruct, TwoChannelFunctionAndDerivative) {
  std::mt19937_64 rng(67);
  for (double r : {0.3, 0.6, 0.9}) {
    const auto p = TwoChannelParams::from_ratio(kPi, r);
    const auto f = random_combination(rng, kPi);
    const auto s = sample_function(f, p.t_o(), 500);
    const auto ds = sample_derivative(f, p.t_o(), 500);
    for (double x : uniform_grid(-5.0, 5.0, 41)) {
      EXPECT_NEAR(reconstruct_two_channel(p, s, ds, 500, x), f.eval(x), 1e-3) << x;
      EXPECT_NEAR(reconstruct_two_channel_deriv(p, s, ds, 500, x), f.eval_deriv(x), 1e-3) << x;
    }
    for (long k = -5; k <= 5; ++k) {
      EXPECT_NEAR(reconstruct_two_channel(p, s, ds, 500, k * p.t_o()), s.at(k), 1e-3);
    }
  }
}

TEST(Reconstruct, TwoChannelTestSignal) {
  const auto g = test_signal_g();
  for (double r : {0.2, 0.5, 0.7, 0.9}) {
    const auto p = TwoChannelParams::from_ratio(kPi, r);
    const auto s = sample_function(g, p.t_o(), 500);
    const auto ds = sample_derivative(g, p.t_o(), 500);
    for (double x : uniform_grid(-5.0, 5.0, 101)) {
      EXPECT_NEAR(reconstruct_two_channel(p, s, ds, 500, x), g.eval(x), 1e-3);
      EXPECT_NEAR(reconstruct_two_channel_deriv(p, s, ds, 500, x), g.eval_deriv(x), 1e-3);
    }
  }
}

TEST(Reconstruct, RieszInterpolatesAndConverges) {
  const double h = 2.0;
  const double t_o = kTwoPi / h;
  std::mt19937_64 rng(71);
  const auto f = random_combination(rng, h);
  const auto s = sample_function(f, t_o, 500);
  const auto ds = sample_derivative(f, t_o, 500);
  for (long k = -6; k <= 6; ++k) {
    EXPECT_NEAR(reconstruct_riesz(h, t_o, s, ds, 500, k * t_o), s.at(k), 1e-15);
  }
  for (double x : uniform_grid(-5.0, 5.0, 41)) {
    EXPECT_NEAR(reconstruct_riesz(h, t_o, s, ds, 500, x), f.eval(x), 1e-3);
  }
  EXPECT_THROW(reconstruct_riesz(h, 1.0, s, ds, 10, 0.0), InvalidArgument);
}

TEST(Reconstruct, LinearInSamples) {
  std::mt19937_64 rng(73);
  const auto p2 = TwoChannelParams::from_ratio(kPi, 0.7);
  const auto p1 = OneChannelParams::from_ratio(kPi, 0.7);
  const auto f1 = random_combination(rng, kPi);
  const auto f2 = random_combination(rng, kPi);
  const double a = 0.7, b = -1.9;
  const long M = 200;
  const auto s1 = sample_function(f1, p2.t_o(), M), s2 = sample_function(f2, p2.t_o(), M);
  const auto d1 = sample_derivative(f1, p2.t_o(), M), d2 = sample_derivative(f2, p2.t_o(), M);
  const auto sc = combine(a, s1, b, s2), dc = combine(a, d1, b, d2);
  const auto o1 = sample_function(f1, p1.t_o(), M), o2 = sample_function(f2, p1.t_o(), M);
  const auto oc = combine(a, o1, b, o2);
  for (double x : {-3.3, 0.0, 0.45, 2.9}) {
    EXPECT_NEAR(reconstruct_two_channel(p2, sc, dc, M, x),
                a * reconstruct_two_channel(p2, s1, d1, M, x) +
                    b * reconstruct_two_channel(p2, s2, d2, M, x),
                1e-12);
    EXPECT_NEAR(reconstruct_two_channel_deriv(p2, sc, dc, M, x),
                a * reconstruct_two_channel_deriv(p2, s1, d1, M, x) +
                    b * reconstruct_two_channel_deriv(p2, s2, d2, M, x),
                1e-12);
    EXPECT_NEAR(reconstruct_one_channel(p1, oc, M, x),
                a * reconstruct_one_channel(p1, o1, M, x) +
                    b * reconstruct_one_channel(p1, o2, M, x),
                1e-12);
  }
}

TEST(Reconstruct, SplicedOneChannelCurve) {
  // Recovered samples spliced into the stream: the curve passes through the
  // recovered values at the missing points, and its deviation from g is
  // bounded by r * sum |recovered - truth| plus the truncation floor.
  const auto p = OneChannelParams::from_ratio(kPi, 0.6);
  const auto u = MissingSet::contiguous(0, 6);
  const auto g = test_signal_g();
  auto samples = sample_function(g, p.t_o(), 500);
  const auto res = recover_one_channel(p, u, samples, 500);
  const auto spliced = splice(samples, u, *res.recovered_function);
  double sum_err = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double x = u[k] * p.t_o();
    EXPECT_NEAR(reconstruct_one_channel(p, spliced, 500, x), (*res.recovered_function)[k], 1e-12);
    sum_err += std::abs((*res.recovered_function)[k] - g.eval(x));
  }
  double dev = 0.0;
  for (double x : uniform_grid(-5.0, 5.0)) {
    dev = std::max(dev, std::abs(reconstruct_one_channel(p, spliced, 500, x) - g.eval(x)));
  }
  EXPECT_LE(dev, p.r() * sum_err + 1e-3);
  EXPECT_GT(dev, 0.05);
}

TEST(ErrorMetrics, Values) {
  const std::vector<double> a{0.1, -2.0, 0.0};
  const auto same = error_metrics(a, a);
  EXPECT_EQ(same.max_abs, 0.0);
  for (double e : same.per_entry_rel) EXPECT_EQ(e, 0.0);

  // Inputs carry four decimals, so the ratio is only good to about 1e-3.
  const std::vector<double> t{0.1529}, c{0.1498};
  EXPECT_NEAR(error_metrics(t, c).per_entry_rel[0], 0.0199, 1e-3);
  const std::vector<double> t2{-0.2906}, c2{-0.3096};
  EXPECT_NEAR(error_metrics(t2, c2).per_entry_rel[0], 0.0653, 1e-3);
  EXPECT_NEAR(error_metrics(t2, c2).max_abs, 0.019, 1e-12);

  const std::vector<double> z{0.0}, nz{1e-3};
  EXPECT_TRUE(std::isinf(error_metrics(z, nz).per_entry_rel[0]));
  EXPECT_THROW(error_metrics(z, a), LengthMismatch);
}

TEST(UniformGrid, Endpoints) {
  const auto g = uniform_grid(-5.0, 5.0);
  ASSERT_EQ(g.size(), 1001u);
  EXPECT_EQ(g.front(), -5.0);
  EXPECT_EQ(g.back(), 5.0);
  EXPECT_DOUBLE_EQ(g[500], 0.0);
}
