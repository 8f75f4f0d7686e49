#include "dersamp/system.hpp"

#include "dersamp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace dersamp {

// ---------------------------------------------------------------------------
// MissingSet

MissingSet::MissingSet(std::vector<long> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw InvalidArgument("missing set: indices must be distinct");
}

MissingSet MissingSet::interleaved(int m, std::vector<long> base) {
  if (m < 1)
    throw InvalidArgument("missing set: interleaving factor m must be positive");
  std::sort(base.begin(), base.end());
  std::vector<long> idx;
  idx.reserve(base.size());
  for (long i : base)
    idx.push_back(static_cast<long>(m) * i);
  MissingSet u(std::move(idx));
  u.factorization_ = Factorization{m, std::move(base)};
  return u;
}

MissingSet MissingSet::contiguous(long first, std::size_t count) {
  std::vector<long> idx(count);
  for (std::size_t k = 0; k < count; ++k)
    idx[k] = first + static_cast<long>(k);
  return MissingSet(std::move(idx));
}

bool MissingSet::contains(long n) const {
  return std::binary_search(indices_.begin(), indices_.end(), n);
}

long MissingSet::max_abs() const {
  long m = 0;
  for (long l : indices_)
    m = std::max(m, std::labs(l));
  return m;
}

bool MissingSet::equispaced() const {
  if (indices_.size() < 3)
    return true;
  const long step = indices_[1] - indices_[0];
  for (std::size_t k = 2; k < indices_.size(); ++k)
    if (indices_[k] - indices_[k - 1] != step)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Matrices

DenseMatrix build_S(const TwoChannelParams& p, const MissingSet& u) {
  const std::size_t n = u.size();
  DenseMatrix s(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = static_cast<double>(u[k] - u[j]) * p.t_o();
      s(k, j) = kSqrtTwoPi * dual_gen_1(x, p);
      s(k, n + j) = -kSqrtTwoPi * dual_gen_2(x, p);
      s(n + k, j) = kSqrtTwoPi * dual_gen_1_deriv(x, p);
      s(n + k, n + j) = -kSqrtTwoPi * dual_gen_2_deriv(x, p);
    }
  }
  return s;
}

DenseMatrix build_R(const OneChannelParams& p, const MissingSet& u) {
  const std::size_t n = u.size();
  DenseMatrix r(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      r(j, k) = one_channel_kernel(p.r(), u[j] - u[k]);
  return r;
}

SBlocks split_blocks(const DenseMatrix& s) {
  if (!s.is_square() || s.rows() % 2 != 0)
    throw InvalidArgument("split_blocks: expected a 2N x 2N matrix");
  const std::size_t n = s.rows() / 2;
  return {s.block(0, 0, n, n), s.block(0, n, n, n), s.block(n, 0, n, n), s.block(n, n, n, n)};
}

DenseMatrix identity_minus(const DenseMatrix& s) {
  if (!s.is_square())
    throw InvalidArgument("identity_minus: matrix must be square");
  return DenseMatrix::identity(s.rows()) - s;
}

// ---------------------------------------------------------------------------
// SampleSeries

SampleSeries::SampleSeries(long half_width)
    : half_width_(half_width), values_(2 * half_width + 1, 0.0), known_(2 * half_width + 1, 0) {
  if (half_width < 0)
    throw InvalidArgument("sample series: negative half width");
}

bool SampleSeries::has(long n) const { return in_range(n) && known_[slot(n)]; }

double SampleSeries::at(long n) const {
  if (!has(n))
    throw MissingKnownSample("sample at index " + std::to_string(n) + " is not available");
  return values_[slot(n)];
}

void SampleSeries::set(long n, double v) {
  if (!in_range(n))
    throw InvalidArgument("sample index " + std::to_string(n) + " outside the series window");
  values_[slot(n)] = v;
  known_[slot(n)] = 1;
}

void SampleSeries::erase(long n) {
  if (in_range(n))
    known_[slot(n)] = 0;
}

// ---------------------------------------------------------------------------
// Right-hand sides

namespace {

void check_truncation(const MissingSet& u, long M) {
  if (M <= u.max_abs())
    throw InvalidArgument("truncation M=" + std::to_string(M) +
                          " must exceed the largest |missing index|");
}

} // namespace

Vector rhs_two_channel(const TwoChannelParams& p, const MissingSet& u, const SampleSeries& f,
                       const SampleSeries& df, long M) {
  check_truncation(u, M);
  const std::size_t n = u.size();
  Vector c(2 * n, 0.0);
  for (long idx = -M; idx <= M; ++idx) {
    if (u.contains(idx))
      continue;
    const double fv = f.at(idx);
    const double dfv = df.at(idx);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = static_cast<double>(u[k] - idx) * p.t_o();
      c[k] += fv * dual_gen_1(x, p) - dfv * dual_gen_2(x, p);
      c[n + k] += fv * dual_gen_1_deriv(x, p) - dfv * dual_gen_2_deriv(x, p);
    }
  }
  for (double& v : c)
    v *= kSqrtTwoPi;
  return c;
}

Vector rhs_one_channel(const OneChannelParams& p, const MissingSet& u,
                       const SampleSeries& samples, long M) {
  check_truncation(u, M);
  const std::size_t n = u.size();
  Vector b(n, 0.0);
  for (long idx = -M; idx <= M; ++idx) {
    if (u.contains(idx))
      continue;
    const double fv = samples.at(idx);
    for (std::size_t j = 0; j < n; ++j)
      b[j] += fv * one_channel_kernel(p.r(), u[j] - idx);
  }
  return b;
}

BlockSystem assemble_two_channel(const TwoChannelParams& p, const MissingSet& u,
                                 const SampleSeries& f, const SampleSeries& df, long M) {
  DenseMatrix s = build_S(p, u);
  SBlocks blocks = split_blocks(s);
  Vector c = rhs_two_channel(p, u, f, df, M);
  return BlockSystem{std::move(s), std::move(blocks), std::move(c), M, p, u};
}

// ---------------------------------------------------------------------------
// Spectral predictions

bool is_integer_case(int m, double r) {
  const double mr = static_cast<double>(m) * r;
  return std::abs(mr - std::round(mr)) < 1e-9;
}

EigBounds eig_bounds(int m, double r) {
  if (m < 1)
    throw InvalidArgument("eig_bounds: m must be a positive integer");
  if (!(r > 0.0 && r < 1.0))
    throw InvalidArgument("eig_bounds: r must lie in (0, 1)");
  if (is_integer_case(m, r))
    throw IntegerCase("eig_bounds: m r is an integer; S is block triangular");
  EigBounds b;
  b.D = static_cast<long>(std::floor(2.0 * m * r));
  const double d = static_cast<double>(b.D);
  const double md = static_cast<double>(m);
  b.alpha11_low = (d / md) * (1.0 - d / (4.0 * md) - 1.0 / (4.0 * md));
  b.alpha11_high = b.alpha11_low + 1.0 / md;
  b.beta22_low = d * (d - 1.0) / (4.0 * md * md);
  b.beta22_high = d * (d + 1.0) / (4.0 * md * md) + r / md;
  return b;
}

double separation_threshold(double r) {
  if (!(r > 0.0 && r < 1.0))
    throw InvalidArgument("separation_threshold: r must lie in (0, 1)");
  return (1.0 + 2.0 * r) / (2.0 * r * (1.0 - r));
}

std::optional<StructuralPrediction> structural_case(int m, const TwoChannelParams& p,
                                                    std::span<const long> base) {
  if (m < 1 || !is_integer_case(m, p.r()))
    return std::nullopt;
  const double r = p.r();
  const std::size_t n = base.size();
  StructuralPrediction pred;
  pred.s11_diagonal = 2.0 * r - r * r;
  pred.s22_diagonal = r * r;
  pred.s21 = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      if (k != j)
        pred.s21(k, j) = (1.0 - r) * p.omega() /
                         (static_cast<double>(m) * kPi * static_cast<double>(base[k] - base[j]));
  return pred;
}

} // namespace dersamp
