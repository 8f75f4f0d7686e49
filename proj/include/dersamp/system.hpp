#pragma once

// Assembly of the missing-sample recovery systems and the analytic
// predictions for their spectra.
//
// Two channels: unknowns Z = (f(l_1 t_o), ..., f(l_N t_o), f'(l_1 t_o), ...,
// f'(l_N t_o)) solve (I - S) Z = C with the 2N x 2N block matrix
//
//   S = [S11 S12]   S11(k,j) =  sqrt(2pi) dual1 ((l_k - l_j) t_o)
//       [S21 S22]   S12(k,j) = -sqrt(2pi) dual2 ((l_k - l_j) t_o)
//                   S21(k,j) =  sqrt(2pi) dual1'((l_k - l_j) t_o)
//                   S22(k,j) = -sqrt(2pi) dual2'((l_k - l_j) t_o)
//
// One channel: (I - R) X = B with R(j,k) = r sinc(pi r (l_j - l_k)).

#include "dersamp/kernels.hpp"
#include "dersamp/linalg.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dersamp {

/// Positions l_1 < ... < l_N of the missing samples on the integer grid,
/// optionally known to be of the interleaved form m * {i_1, ..., i_N}.
class MissingSet {
public:
  struct Factorization {
    int m = 1;
    std::vector<long> base;
  };

  /// Sorts and validates; duplicates are rejected. An empty set is allowed
  /// (nothing to recover).
  explicit MissingSet(std::vector<long> indices);
  /// m * base, with the factorization recorded.
  static MissingSet interleaved(int m, std::vector<long> base);
  /// {first, first + 1, ..., first + count - 1}
  static MissingSet contiguous(long first, std::size_t count);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::span<const long> indices() const { return indices_; }
  long operator[](std::size_t k) const { return indices_[k]; }
  const std::optional<Factorization>& factorization() const { return factorization_; }

  bool contains(long n) const;
  long max_abs() const;
  /// True when consecutive indices are evenly spaced (N <= 2 counts).
  bool equispaced() const;

private:
  std::vector<long> indices_;
  std::optional<Factorization> factorization_;
};

/// Two-channel recovery matrix S (2N x 2N), block layout [S11 S12; S21 S22].
DenseMatrix build_S(const TwoChannelParams& p, const MissingSet& u);

/// One-channel recovery matrix R (N x N).
DenseMatrix build_R(const OneChannelParams& p, const MissingSet& u);

/// The four N x N blocks of S as separate matrices.
struct SBlocks {
  DenseMatrix s11, s12, s21, s22;
};
SBlocks split_blocks(const DenseMatrix& s);

/// I - S for a square S.
DenseMatrix identity_minus(const DenseMatrix& s);

/// Samples of one channel on the index window [-M, M]. Entries may be
/// absent (unknown).
class SampleSeries {
public:
  SampleSeries() = default;
  explicit SampleSeries(long half_width);

  long half_width() const { return half_width_; }
  bool in_range(long n) const { return n >= -half_width_ && n <= half_width_; }
  bool has(long n) const;
  /// Throws MissingKnownSample when the entry is absent.
  double at(long n) const;
  void set(long n, double v);
  void erase(long n);

private:
  std::size_t slot(long n) const { return static_cast<std::size_t>(n + half_width_); }

  long half_width_ = 0;
  std::vector<double> values_;
  std::vector<char> known_;
};

/// Default truncation of the sums over known samples.
inline constexpr long kDefaultTruncation = 500;

/// Right-hand side C (length 2N): the known-sample sums truncated to |n| <= M.
/// Both series must hold every n with |n| <= M outside U.
Vector rhs_two_channel(const TwoChannelParams& p, const MissingSet& u, const SampleSeries& f,
                       const SampleSeries& df, long M);

/// Right-hand side B (length N) of the one-channel system.
Vector rhs_one_channel(const OneChannelParams& p, const MissingSet& u,
                       const SampleSeries& samples, long M);

/// Complete two-channel system with its provenance.
struct BlockSystem {
  DenseMatrix S;
  SBlocks blocks;
  Vector C;
  long truncation_M = kDefaultTruncation;
  TwoChannelParams params;
  MissingSet missing;
};

BlockSystem assemble_two_channel(const TwoChannelParams& p, const MissingSet& u,
                                 const SampleSeries& f, const SampleSeries& df, long M);

/// Eigenvalue enclosures of S11 and S22 for U = m * I when m r is not an integer.
struct EigBounds {
  long D = 0; ///< floor(2 m r)
  double alpha11_low = 0.0;
  double alpha11_high = 0.0;
  double beta22_low = 0.0;
  double beta22_high = 0.0;
};

/// |m r - round(m r)| < 1e-9
bool is_integer_case(int m, double r);

/// Throws IntegerCase when m r is an integer.
EigBounds eig_bounds(int m, double r);

/// (1 + 2r) / (2 r (1 - r)); for integer m above it (m r non-integer),
/// lambda_max(S22) < lambda_min(S11).
double separation_threshold(double r);

/// Exact blocks of S when m r is an integer: S is block lower triangular.
struct StructuralPrediction {
  double s11_diagonal = 0.0; ///< 2r - r^2
  double s22_diagonal = 0.0; ///< r^2
  DenseMatrix s21;           ///< (1-r) omega / (m pi (i_k - i_j)) off the diagonal
};

/// Empty unless m r is an integer. The base set fixes the S21 prediction.
std::optional<StructuralPrediction> structural_case(int m, const TwoChannelParams& p,
                                                    std::span<const long> base);

} // namespace dersamp
