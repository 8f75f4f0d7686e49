#include "dersamp/errors.hpp"
#include "dersamp/recovery.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace dersamp;

namespace {

struct Truth {
  Vector f, df;
};

Truth truth_at(const BandLimitedSignal& g, const MissingSet& u, double t_o) {
  Truth t;
  for (long l : u.indices()) {
    t.f.push_back(g.eval(l * t_o));
    t.df.push_back(g.eval_deriv(l * t_o));
  }
  return t;
}

double max_abs_error(const Vector& truth, const Vector& got) {
  return error_metrics(truth, got).max_abs;
}

Vector concat(const Vector& a, const Vector& b) {
  Vector c(a);
  c.insert(c.end(), b.begin(), b.end());
  return c;
}

} // namespace

TEST(AddNoise, Properties) {
  const Vector data(100, 1.0);
  const auto none = add_noise(data, {0.0, 5});
  EXPECT_EQ(none.delta, 0.0);
  EXPECT_EQ(none.noisy, data);

  const auto a = add_noise(data, {1e-2, 5});
  const auto b = add_noise(data, {1e-2, 5});
  EXPECT_EQ(a.noisy, b.noisy);
  EXPECT_NEAR(a.delta, 0.1, 1e-15);
  EXPECT_NEAR(norm2(axpy(-1.0, data, a.noisy)), 0.1, 1e-14);
  EXPECT_NE(add_noise(data, {1e-2, 6}).noisy, a.noisy);
  EXPECT_THROW(add_noise(data, {-1.0, 1}), InvalidArgument);
}

TEST(RecoverTwoChannel, ZeroSignal) {
  const auto p = TwoChannelParams::from_ratio(kPi, 0.6);
  const auto u = MissingSet::contiguous(-2, 6);
  const auto zero = sinc_combination({}, kPi);
  const auto res = recover_two_channel(p, u, sample_function(zero, p.t_o(), 100),
                                       sample_derivative(zero, p.t_o(), 100), 100);
  for (double v : *res.recovered_function) EXPECT_EQ(v, 0.0);
  for (double v : *res.recovered_derivative) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(res.lambda_used, 0.0);
}

TEST(RecoverTwoChannel, EmptyMissingSet) {
  const auto p = TwoChannelParams::from_ratio(kPi, 0.6);
  const auto g = test_signal_g();
  const auto res = recover_two_channel(p, MissingSet(std::vector<long>{}),
                                       sample_function(g, p.t_o(), 10),
                                       sample_derivative(g, p.t_o(), 10), 10);
  EXPECT_TRUE(res.indices.empty());
  EXPECT_TRUE(res.recovered_function->empty());
}

TEST(RecoverTwoChannel, InterleavedWellConditioned) {
  const auto p = TwoChannelParams::from_ratio(kPi, 0.7);
  const auto u = MissingSet::interleaved(4, {-1, 0, 1, 2, 3, 4});
  const auto g = test_signal_g();
  const auto res = recover_two_channel(p, u, sample_function(g, p.t_o(), 500),
                                       sample_derivative(g, p.t_o(), 500), 500);
  const auto t = truth_at(g, u, p.t_o());
  EXPECT_LT(max_abs_error(t.f, *res.recovered_function), 8e-4);
  EXPECT_LT(max_abs_error(t.df, *res.recovered_derivative), 8e-4);
  EXPECT_TRUE(res.warnings.empty());
  EXPECT_EQ(res.positions[0], -4 * p.t_o());
}

TEST(RecoverTwoChannel, ContiguousLowRatio) {
  const auto p = TwoChannelParams::from_step(kPi, 0.6);
  const auto u = MissingSet::contiguous(-2, 6);
  const auto g = test_signal_g();
  const auto res = recover_two_channel(p, u, sample_function(g, p.t_o(), 500),
                                       sample_derivative(g, p.t_o(), 500), 500);
  // cond(I - S) = 1920.117 from an independent float64 SVD of the same matrix.
  EXPECT_NEAR(res.condition_estimate, 1920.117, 0.01 * 1920.117);
  const auto t = truth_at(g, u, p.t_o());
  EXPECT_NEAR(max_abs_error(t.f, *res.recovered_function), 0.0078, 5e-4);
}

TEST(RecoverTwoChannel, ResidualAndLambdaBookkeeping) {
  const auto p = TwoChannelParams::from_ratio(kPi, 0.6);
  const auto u = MissingSet::contiguous(-2, 6);
  const auto g = test_signal_g();
  const auto f = sample_function(g, p.t_o(), 500);
  const auto df = sample_derivative(g, p.t_o(), 500);
  const auto res = recover_two_channel(p, u, f, df, 500);
  EXPECT_EQ(res.lambda_used, 0.0);
  EXPECT_NEAR(res.condition_estimate, 3.67e7, 0.01 * 3.67e7);
  const auto sys = assemble_two_channel(p, u, f, df, 500);
  const Vector z = concat(*res.recovered_function, *res.recovered_derivative);
  const Vector r = axpy(-1.0, sys.C, identity_minus(sys.S) * z);
  EXPECT_DOUBLE_EQ(res.residual_norm, norm2(r));

  RecoveryOptions opts;
  opts.regularize = true;
  EXPECT_THROW(recover_two_channel(p, u, f, df, 500, opts), InvalidArgument);
  opts.delta = truncation_delta_two_channel(p, u, g, 500);
  const auto reg = recover_two_channel(p, u, f, df, 500, opts);
  EXPECT_GT(reg.lambda_used, 0.0);
  EXPECT_GE(reg.residual_norm, *opts.delta * (1.0 - 1e-9));
  EXPECT_LE(reg.residual_norm, 1.05 * *opts.delta * (1.0 + 1e-9));
}

TEST(RecoverTwoChannel, IllConditionedWarnings) {
  const auto u = MissingSet::contiguous(0, 10);
  const auto g = test_signal_g();
  const auto p6 = TwoChannelParams::from_ratio(kPi, 0.6);
  const auto f6 = sample_function(g, p6.t_o(), 100);
  const auto df6 = sample_derivative(g, p6.t_o(), 100);
  const auto res = recover_two_channel(p6, u, f6, df6, 100);
  EXPECT_GT(res.condition_estimate, kIllConditionedWarning);
  EXPECT_LT(res.condition_estimate, kConditionTrustLimit);
  ASSERT_FALSE(res.warnings.empty());
  EXPECT_NE(res.warnings[0].find("ill-conditioned"), std::string::npos);

  // Beyond binary64 trust: the plain solve fails, the regularized one warns.
  const auto p9 = TwoChannelParams::from_ratio(kPi, 0.9);
  const auto f9 = sample_function(g, p9.t_o(), 100);
  const auto df9 = sample_derivative(g, p9.t_o(), 100);
  EXPECT_THROW(recover_two_channel(p9, u, f9, df9, 100), SingularMatrix);
  RecoveryOptions opts;
  opts.regularize = true;
  opts.delta = 1e-4;
  const auto reg = recover_two_channel(p9, u, f9, df9, 100, opts);
  EXPECT_GT(reg.condition_estimate, kConditionTrustLimit);
  ASSERT_FALSE(reg.warnings.empty());
  EXPECT_NE(reg.warnings.back().find("trust"), std::string::npos);
}

TEST(RecoverTwoChannel, RegularizationDoesNotHurtBeyondTolerance) {
  // ||Z_lambda - Z_0|| <= 1.05 delta ||(I - S)^{-1}||_2 on well-conditioned cases.
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> rs(0.2, 0.6);
  const auto g = test_signal_g();
  for (int t = 0; t < 10; ++t) {
    const auto p = TwoChannelParams::from_ratio(kPi, rs(rng));
    const auto u = MissingSet::interleaved(3 + t % 3, {-1, 0, 1, 2});
    const auto f = sample_function(g, p.t_o(), 500);
    const auto df = sample_derivative(g, p.t_o(), 500);
    const auto z0 = recover_two_channel(p, u, f, df, 500);
    RecoveryOptions opts;
    opts.regularize = true;
    opts.delta = truncation_delta_two_channel(p, u, g, 500);
    const auto zl = recover_two_channel(p, u, f, df, 500, opts);
    const DenseMatrix a = identity_minus(build_S(p, u));
    const double inv_norm = 1.0 / singular_values(a).back();
    const Vector diff = axpy(-1.0, concat(*z0.recovered_function, *z0.recovered_derivative),
                             concat(*zl.recovered_function, *zl.recovered_derivative));
    EXPECT_LE(norm2(diff), 1.05 * *opts.delta * inv_norm * (1.0 + 1e-9));
  }
}

TEST(RecoverTwoChannel, ConsistentWithTruncationErrorOfSincCombinations) {
  // Error <= 10 cond(I - S) ||C_M - (I - S) Z_true||, all terms computable.
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), shift(-4.0, 4.0), rs(0.2, 0.8);
  for (int t = 0; t < 20; ++t) {
    std::vector<SincTerm> terms(1 + t % 5);
    for (auto& term : terms) term = {amp(rng), shift(rng)};
    const auto sig = sinc_combination(terms, kPi);
    const auto p = TwoChannelParams::from_ratio(kPi, rs(rng));
    const auto u = MissingSet::interleaved(2 + t % 4, {-2, 0, 1, 3});
    const auto f = sample_function(sig, p.t_o(), 500);
    const auto df = sample_derivative(sig, p.t_o(), 500);
    const auto res = recover_two_channel(p, u, f, df, 500);
    const auto truth = truth_at(sig, u, p.t_o());
    const Vector z_true = concat(truth.f, truth.df);
    const auto sys = assemble_two_channel(p, u, f, df, 500);
    const double trunc = norm2(axpy(-1.0, identity_minus(sys.S) * z_true, sys.C));
    const Vector z = concat(*res.recovered_function, *res.recovered_derivative);
    EXPECT_LE(norm_inf(axpy(-1.0, z_true, z)), 10.0 * res.condition_estimate * trunc);
  }
}

TEST(RecoverFunctionChannel, ZeroAndWellConditioned) {
  const auto p = TwoChannelParams::from_ratio(kPi, 0.7);
  const auto u = MissingSet::interleaved(8, {0, 1, 2, 3});
  const auto zero = sinc_combination({}, kPi);
  const auto z = recover_function_channel(p, u, sample_function(zero, p.t_o(), 100),
                                          sample_derivative(zero, p.t_o(), 100), 100);
  for (double v : *z.recovered_function) EXPECT_EQ(v, 0.0);
  EXPECT_FALSE(z.recovered_derivative.has_value());

  const auto g = test_signal_g();
  const auto res = recover_function_channel(p, u, sample_function(g, p.t_o(), 500),
                                            sample_derivative(g, p.t_o(), 500), 500);
  EXPECT_LE(max_abs_error(truth_at(g, u, p.t_o()).f, *res.recovered_function), 1e-3);
}

TEST(RecoverFunctionChannel, DegenerateNearCriticalRatio) {
  // S11 -> I as r -> 1: I - S11 collapses and the inverse norm explodes.
  const auto u = MissingSet({0, 3, 7});
  const auto g = test_signal_g();
  for (double eps : {1e-4, 1e-6, 1e-10}) {
    const auto p = TwoChannelParams::from_ratio(kPi, 1.0 - eps);
    const auto f = sample_function(g, p.t_o(), 100);
    const auto df = sample_derivative(g, p.t_o(), 100);
    bool flagged = false;
    try {
      const auto res = recover_function_channel(p, u, f, df, 100);
      flagged = res.inverse_norm > 1e8 && !res.warnings.empty();
    } catch (const NumericalError&) {
      flagged = true;
    }
    EXPECT_TRUE(flagged) << "eps=" << eps;
  }
}

TEST(RecoverFunctionChannel, MatchesFirstRowsOfJointSystem) {
  const auto g = test_signal_g();
  for (double r : {0.3, 0.6, 0.8}) {
    const auto p = TwoChannelParams::from_ratio(kPi, r);
    const auto u = MissingSet({-3, -1, 0, 2, 5});
    const auto f = sample_function(g, p.t_o(), 200);
    auto df = sample_derivative(g, p.t_o(), 200);
    const auto joint = recover_two_channel(p, u, f, df, 200);
    df = splice(df, u, *joint.recovered_derivative);
    const auto single = recover_function_channel(p, u, f, df, 200);
    for (std::size_t k = 0; k < u.size(); ++k) {
      EXPECT_NEAR((*single.recovered_function)[k], (*joint.recovered_function)[k],
                  1e-10 * std::max(1.0, std::abs((*joint.recovered_function)[k])));
    }
  }
}

TEST(RecoverDerivativeChannel, ZeroAndWellConditioned) {
  const auto p = TwoChannelParams::from_ratio(kPi, 0.7);
  const auto u = MissingSet::interleaved(8, {0, 1, 2, 3});
  const auto zero = sinc_combination({}, kPi);
  const auto z = recover_derivative_channel(p, u, sample_function(zero, p.t_o(), 100),
                                            sample_derivative(zero, p.t_o(), 100), 100);
  for (double v : *z.recovered_derivative) EXPECT_EQ(v, 0.0);

  const auto g = test_signal_g();
  const auto res = recover_derivative_channel(p, u, sample_function(g, p.t_o(), 500),
                                              sample_derivative(g, p.t_o(), 500), 500);
  EXPECT_LE(max_abs_error(truth_at(g, u, p.t_o()).df, *res.recovered_derivative), 1e-3);
}

TEST(RecoverDerivativeChannel, IntegerCaseClosedForm) {
  // S22 = r^2 I, so (1 - r^2) Y = C2 + S21 X componentwise.
  const auto p = TwoChannelParams::from_ratio(kPi, 0.6);
  const auto u = MissingSet::interleaved(5, {-1, 0, 2});
  const auto g = test_signal_g();
  const auto f = sample_function(g, p.t_o(), 300);
  const auto df = sample_derivative(g, p.t_o(), 300);
  const auto res = recover_derivative_channel(p, u, f, df, 300);
  const auto sys = assemble_two_channel(p, u, f, df, 300);
  const Vector x = truth_at(g, u, p.t_o()).f;
  const Vector s21x = sys.blocks.s21 * x;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double b2 = sys.C[u.size() + k] + s21x[k];
    EXPECT_NEAR((*res.recovered_derivative)[k], b2 / (1.0 - 0.36), 1e-12);
  }
}

TEST(RecoverOneChannel, ContiguousSixReference) {
  const auto p = OneChannelParams::from_ratio(kPi, 0.6);
  const auto u = MissingSet::contiguous(0, 6);
  const auto g = test_signal_g();
  const auto res = recover_one_channel(p, u, sample_function(g, p.t_o(), 500), 500);
  const double expected[] = {0.1498, -0.3096, 0.0410, 0.8664, 0.8029, 0.0585};
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_NEAR((*res.recovered_function)[k], expected[k], 2e-3) << k;
  }
  EXPECT_NEAR(res.condition_estimate, 3.07e4, 0.05 * 3.07e4);
}

TEST(RecoverOneChannel, SolvesItsSystem) {
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> rs(0.2, 0.9);
  const auto g = test_signal_g();
  for (int t = 0; t < 20; ++t) {
    const auto p = OneChannelParams::from_ratio(kPi, rs(rng));
    const auto u = MissingSet({-4, -1, 0, 3, static_cast<long>(5 + t % 4)});
    const auto s = sample_function(g, p.t_o(), 200);
    const auto res = recover_one_channel(p, u, s, 200);
    const Vector b = rhs_one_channel(p, u, s, 200);
    const Vector lhs = identity_minus(build_R(p, u)) * *res.recovered_function;
    EXPECT_LE(norm2(axpy(-1.0, b, lhs)), 1e-10 * norm2(b));
  }
}

TEST(RecoverOneChannel, NoisyContiguousSix) {
  const auto p = OneChannelParams::from_ratio(kPi, 0.6);
  const auto u = MissingSet::contiguous(-2, 6);
  const auto g = test_signal_g();
  const auto s = sample_function(g, p.t_o(), 500);
  const Vector truth = truth_at(g, u, p.t_o()).f;
  RecoveryOptions opts;
  opts.noise = NoiseSpec{1e-2 / std::sqrt(6.0), 2};
  const auto plain = recover_one_channel(p, u, s, 500, opts);
  const auto rel = error_metrics(truth, *plain.recovered_function).per_entry_rel;
  EXPECT_GT(*std::max_element(rel.begin(), rel.end()), 10.0);
  EXPECT_NEAR(plain.condition_estimate, 3.07e4, 0.05 * 3.07e4);

  opts.regularize = true;
  const auto reg = recover_one_channel(p, u, s, 500, opts);
  EXPECT_NEAR(reg.delta, 1e-2, 1e-14);
  EXPECT_GT(reg.lambda_used, 0.0);
  EXPECT_LT(max_abs_error(truth, *reg.recovered_function), 0.3);
  EXPECT_LT(max_abs_error(truth, *reg.recovered_function),
            0.1 * max_abs_error(truth, *plain.recovered_function));
}

TEST(RecoverOneChannel, DeterministicNoise) {
  const auto p = OneChannelParams::from_ratio(kPi, 0.6);
  const auto u = MissingSet::contiguous(-2, 6);
  const auto s = sample_function(test_signal_g(), p.t_o(), 300);
  for (NoiseTarget target : {NoiseTarget::RightHandSide, NoiseTarget::Samples}) {
    RecoveryOptions opts;
    opts.noise = NoiseSpec{1e-2, 17, target};
    opts.regularize = true;
    const auto a = recover_one_channel(p, u, s, 300, opts);
    const auto b = recover_one_channel(p, u, s, 300, opts);
    EXPECT_EQ(*a.recovered_function, *b.recovered_function);
    EXPECT_EQ(a.lambda_used, b.lambda_used);
    EXPECT_GT(a.delta, 0.0);
  }
}

TEST(RecoverOneChannel, SampleNoiseDeltaIsPropagatedNorm) {
  // delta equals the norm of the right-hand side built from the noise alone.
  const auto p = OneChannelParams::from_ratio(kPi, 0.6);
  const auto u = MissingSet::contiguous(-2, 6);
  const auto s = sample_function(test_signal_g(), p.t_o(), 50);
  RecoveryOptions opts;
  opts.noise = NoiseSpec{1e-3, 23, NoiseTarget::Samples};
  opts.regularize = true;
  opts.delta = std::nullopt;
  const auto res = recover_one_channel(p, u, s, 50, opts);

  // Rebuild the same noise: known samples in index order; the noise vector
  // depends only on seed, magnitude and length.
  Vector data;
  for (long n = -50; n <= 50; ++n)
    if (!u.contains(n)) data.push_back(0.0);
  const auto noisy = add_noise(data, *opts.noise);
  SampleSeries ns(50);
  std::size_t i = 0;
  for (long n = -50; n <= 50; ++n) ns.set(n, u.contains(n) ? 0.0 : noisy.noisy[i++]);
  EXPECT_NEAR(res.delta, norm2(rhs_one_channel(p, u, ns, 50)), 1e-15);
}

TEST(Splice, ReplacesMissingEntries) {
  SampleSeries s(3);
  for (long n = -3; n <= 3; ++n) s.set(n, 1.0);
  const auto u = MissingSet({-1, 2});
  const Vector vals{5.0, 6.0};
  const auto out = splice(s, u, vals);
  EXPECT_EQ(out.at(-1), 5.0);
  EXPECT_EQ(out.at(2), 6.0);
  EXPECT_EQ(out.at(0), 1.0);
  EXPECT_THROW(splice(s, u, Vector{1.0}), LengthMismatch);
}
