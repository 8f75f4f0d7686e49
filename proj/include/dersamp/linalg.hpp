#pragma once

// Small dense real linear algebra: pivoted LU solves, Jacobi and Francis QR
// eigenvalues, one-sided Jacobi singular values, Tikhonov regularization.
//
// Matrices here are at most a few hundred rows, so everything is O(n^3)
// on a contiguous row-major buffer.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dersamp {

using Vector = std::vector<double>;

class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Row-major nested initializer, e.g. {{1, 2}, {3, 4}}.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const { return data_; }

  DenseMatrix transpose() const;
  /// Copy of the block starting at (r0, c0) with the given shape.
  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  double norm_inf() const;
  double norm_frobenius() const;
  double trace() const;
  bool all_finite() const;

  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator*(double s, const DenseMatrix& a);
  friend Vector operator*(const DenseMatrix& a, std::span<const double> x);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
Vector axpy(double a, std::span<const double> x, std::span<const double> y); // a*x + y

/// Eigenvalues of a matrix, sorted by real part (then imaginary part).
struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  double max_imag_abs = 0.0;
  bool is_symmetric_input = false;

  std::vector<double> real_parts() const;
  double min_real() const;
  double max_real() const;
};

/// Solves A x = b by LU with partial pivoting.
/// Throws SingularMatrix when a pivot is below 1e-14 * ||A||_inf.
Vector solve_linear(const DenseMatrix& a, std::span<const double> b);

/// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
/// Throws NotSymmetric when ||A - A^T||_inf exceeds 1e-12 * ||A||_inf.
SpectrumReport eig_symmetric(const DenseMatrix& a);

/// Eigenvalues of a general real square matrix: Householder reduction to
/// Hessenberg form followed by Francis double-shift QR iteration.
/// Throws NoConvergence after 100 * n iterations.
SpectrumReport eig_general(const DenseMatrix& a);

/// Singular values, descending.
Vector singular_values(const DenseMatrix& a);

/// sigma_max / sigma_min; +infinity when sigma_min < 1e-300.
double spectral_condition(const DenseMatrix& a);

/// Condition numbers beyond this are not resolvable in binary64.
inline constexpr double kConditionTrustLimit = 1e15;

/// Minimizer of ||A x - b||^2 + lambda^2 ||x||^2.
Vector tikhonov_solve(const DenseMatrix& a, std::span<const double> b, double lambda);

struct DiscrepancyResult {
  double lambda = 0.0;
  Vector x;
  double residual_norm = 0.0;
  /// Set when even the smallest lambda leaves a residual above 1.05 delta;
  /// x is then the smallest-lambda solution.
  bool bracket_failure = false;
};

inline constexpr double kDiscrepancyLambdaMin = 1e-12;
inline constexpr double kDiscrepancyLambdaMax = 1e3;
inline constexpr double kDiscrepancyUpperFactor = 1.05;

/// Picks lambda so that ||A x_lambda - b|| lies in [delta, 1.05 delta],
/// bisecting on log(lambda) over [1e-12, 1e3].
/// Throws DeltaTooLarge when delta >= ||b||.
DiscrepancyResult discrepancy_select(const DenseMatrix& a, std::span<const double> b,
                                     double delta);

} // namespace dersamp
