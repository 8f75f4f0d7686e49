#include "dersamp/linalg.hpp"

#include "dersamp/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dersamp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw LengthMismatch("matrix shapes differ");
}

void sort_spectrum(SpectrumReport& rep) {
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              if (x.real() != y.real())
                return x.real() < y.real();
              return x.imag() < y.imag();
            });
  rep.max_imag_abs = 0.0;
  for (const auto& z : rep.eigenvalues)
    rep.max_imag_abs = std::max(rep.max_imag_abs, std::abs(z.imag()));
}

// Householder QR least squares for a tall matrix with full column rank.
Vector least_squares_qr(DenseMatrix a, Vector b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i)
      norm = std::hypot(norm, a(i, k));
    if (norm == 0.0)
      throw SingularMatrix("least squares: rank-deficient column " + std::to_string(k));
    if (a(k, k) > 0.0)
      norm = -norm;
    // v = x - norm * e_k, stored in place; R(k, k) = norm.
    const double vkk = a(k, k) - norm;
    a(k, k) = vkk;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < m; ++i)
      vnorm2 += a(i, k) * a(i, k);
    for (std::size_t j = k + 1; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i)
        dot += a(i, k) * a(i, j);
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = k; i < m; ++i)
        a(i, j) -= f * a(i, k);
    }
    double dot = 0.0;
    for (std::size_t i = k; i < m; ++i)
      dot += a(i, k) * b[i];
    const double f = 2.0 * dot / vnorm2;
    for (std::size_t i = k; i < m; ++i)
      b[i] -= f * a(i, k);
    a(k, k) = norm;
  }
  Vector x(n);
  for (std::size_t kk = n; kk-- > 0;) {
    double s = b[kk];
    for (std::size_t j = kk + 1; j < n; ++j)
      s -= a(kk, j) * x[j];
    x[kk] = s / a(kk, kk);
  }
  return x;
}

double residual_norm(const DenseMatrix& a, std::span<const double> x, std::span<const double> b) {
  Vector r = a * x;
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] -= b[i];
  return norm2(r);
}

} // namespace

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_)
      throw LengthMismatch("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix DenseMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_)
    throw InvalidArgument("block out of range");
  DenseMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

double DenseMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (double v : row(i))
      s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double DenseMatrix::norm_frobenius() const {
  double s = 0.0;
  for (double v : data_)
    s += v * v;
  return std::sqrt(s);
}

double DenseMatrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
    s += (*this)(i, i);
  return s;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  DenseMatrix c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k)
    c.data_[k] += b.data_[k];
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  DenseMatrix c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k)
    c.data_[k] -= b.data_[k];
  return c;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols_ != b.rows_)
    throw LengthMismatch("matrix product: inner dimensions differ");
  DenseMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0)
        continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        c(i, j) += aik * b(k, j);
    }
  return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c = a;
  for (double& v : c.data_)
    v *= s;
  return c;
}

Vector operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols_ != x.size())
    throw LengthMismatch("matrix-vector product: dimension mismatch");
  Vector y(a.rows_, 0.0);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    double s = 0.0;
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols_; ++j)
      s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

double norm2(std::span<const double> x) {
  // Scaled to stay clear of overflow for the huge unregularized solutions.
  double scale = 0.0;
  for (double v : x)
    scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale))
    return scale;
  double s = 0.0;
  for (double v : x) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x)
    m = std::max(m, std::abs(v));
  return m;
}

Vector axpy(double a, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw LengthMismatch("axpy: length mismatch");
  Vector z(y.begin(), y.end());
  for (std::size_t i = 0; i < z.size(); ++i)
    z[i] += a * x[i];
  return z;
}

std::vector<double> SpectrumReport::real_parts() const {
  std::vector<double> re;
  re.reserve(eigenvalues.size());
  for (const auto& z : eigenvalues)
    re.push_back(z.real());
  return re;
}

double SpectrumReport::min_real() const {
  return eigenvalues.empty() ? std::numeric_limits<double>::quiet_NaN()
                             : eigenvalues.front().real();
}

double SpectrumReport::max_real() const {
  return eigenvalues.empty() ? std::numeric_limits<double>::quiet_NaN()
                             : eigenvalues.back().real();
}

// ---------------------------------------------------------------------------
// Linear solve

Vector solve_linear(const DenseMatrix& a, std::span<const double> b) {
  if (!a.is_square())
    throw InvalidArgument("solve_linear: matrix must be square");
  if (b.size() != a.rows())
    throw LengthMismatch("solve_linear: right-hand side length mismatch");
  const std::size_t n = a.rows();
  const double threshold = 1e-14 * a.norm_inf();
  DenseMatrix lu = a;
  Vector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k)))
        piv = i;
    if (!(std::abs(lu(piv, k)) >= threshold) || lu(piv, k) == 0.0)
      throw SingularMatrix("solve_linear: pivot " + std::to_string(k) + " below tolerance");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(lu(k, j), lu(piv, j));
      std::swap(x[k], x[piv]);
    }
    const double d = lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / d;
      if (f == 0.0)
        continue;
      lu(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j)
        lu(i, j) -= f * lu(k, j);
      x[i] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j)
      s -= lu(k, j) * x[j];
    x[k] = s / lu(k, k);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Symmetric eigenvalues: cyclic Jacobi

SpectrumReport eig_symmetric(const DenseMatrix& a) {
  if (!a.is_square())
    throw InvalidArgument("eig_symmetric: matrix must be square");
  const std::size_t n = a.rows();
  if ((a - a.transpose()).norm_inf() > 1e-12 * a.norm_inf())
    throw NotSymmetric("eig_symmetric: matrix is not symmetric");

  DenseMatrix w = a;
  // Symmetrize so that rounding asymmetry does not bias the result.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      w(i, j) = w(j, i) = 0.5 * (a(i, j) + a(j, i));

  const double target = 1e-13 * a.norm_frobenius();
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j)
          s += w(i, j) * w(i, j);
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  while (off_norm() > target) {
    if (++sweep > kMaxSweeps)
      throw NoConvergence("eig_symmetric: Jacobi sweeps did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0)
          continue;
        const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = w(k, p);
          const double akq = w(k, q);
          w(k, p) = c * akp - s * akq;
          w(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = w(p, k);
          const double aqk = w(q, k);
          w(p, k) = c * apk - s * aqk;
          w(q, k) = s * apk + c * aqk;
        }
        w(p, q) = w(q, p) = 0.0;
      }
    }
  }

  SpectrumReport rep;
  rep.is_symmetric_input = true;
  rep.eigenvalues.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    rep.eigenvalues.emplace_back(w(i, i), 0.0);
  sort_spectrum(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// General eigenvalues: Hessenberg reduction + Francis double-shift QR

namespace {

void reduce_to_hessenberg(DenseMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3)
    return;
  std::vector<double> ort(n, 0.0);
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double scale = 0.0;
    for (std::size_t i = m; i < n; ++i)
      scale += std::abs(h(i, m - 1));
    if (scale == 0.0)
      continue;
    double sum = 0.0;
    for (std::size_t i = n; i-- > m;) {
      ort[i] = h(i, m - 1) / scale;
      sum += ort[i] * ort[i];
    }
    double g = std::sqrt(sum);
    if (ort[m] > 0.0)
      g = -g;
    sum -= ort[m] * g;
    ort[m] -= g;
    // H = (I - u u'/sum) H (I - u u'/sum)
    for (std::size_t j = m; j < n; ++j) {
      double f = 0.0;
      for (std::size_t i = n; i-- > m;)
        f += ort[i] * h(i, j);
      f /= sum;
      for (std::size_t i = m; i < n; ++i)
        h(i, j) -= f * ort[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double f = 0.0;
      for (std::size_t j = n; j-- > m;)
        f += ort[j] * h(i, j);
      f /= sum;
      for (std::size_t j = m; j < n; ++j)
        h(i, j) -= f * ort[j];
    }
    ort[m] *= scale;
    h(m, m - 1) = scale * g;
    for (std::size_t i = m + 1; i < n; ++i)
      h(i, m - 1) = 0.0;
  }
}

// Eigenvalues of an upper Hessenberg matrix (destroys h).
void hessenberg_qr(DenseMatrix& h, std::vector<double>& wr, std::vector<double>& wi) {
  const int nn = static_cast<int>(h.rows());
  wr.assign(nn, 0.0);
  wi.assign(nn, 0.0);
  const int low = 0;
  const long max_iterations = 100L * std::max(nn, 1);
  long total_iterations = 0;

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j)
      norm += std::abs(h(i, j));

  int n = nn - 1;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, w, x, y;
  int iter = 0;

  while (n >= low) {
    // Look for a single small subdiagonal element.
    int l = n;
    while (l > low) {
      s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0)
        s = norm;
      if (std::abs(h(l, l - 1)) < kEps * s)
        break;
      --l;
    }

    if (l == n) {
      // One root.
      h(n, n) += exshift;
      wr[n] = h(n, n);
      wi[n] = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      // Two roots.
      w = h(n, n - 1) * h(n - 1, n);
      p = (h(n - 1, n - 1) - h(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      h(n, n) += exshift;
      h(n - 1, n - 1) += exshift;
      x = h(n, n);
      if (q >= 0.0) {
        z = (p >= 0.0) ? p + z : p - z;
        wr[n - 1] = x + z;
        wr[n] = (z != 0.0) ? x - w / z : wr[n - 1];
        wi[n - 1] = 0.0;
        wi[n] = 0.0;
      } else {
        wr[n - 1] = x + p;
        wr[n] = x + p;
        wi[n - 1] = z;
        wi[n] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      x = h(n, n);
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = h(n - 1, n - 1);
        w = h(n, n - 1) * h(n - 1, n);
      }
      // Exceptional shifts.
      if (iter == 10) {
        exshift += x;
        for (int i = low; i <= n; ++i)
          h(i, i) -= x;
        s = std::abs(h(n, n - 1)) + std::abs(h(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x)
            s = -s;
          s = (y - x) / 2.0 + s;
          s = x - w / s;
          for (int i = low; i <= n; ++i)
            h(i, i) -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;
      if (++total_iterations > max_iterations)
        throw NoConvergence("eig_general: QR iteration did not converge");

      // Look for two consecutive small subdiagonal elements.
      int m = n - 2;
      while (m >= l) {
        z = h(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
        q = h(m + 1, m + 1) - z - r - s;
        r = h(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l)
          break;
        if (std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r)) <
            kEps * (std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) +
                                   std::abs(h(m + 1, m + 1)))))
          break;
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        h(i, i - 2) = 0.0;
        if (i > m + 2)
          h(i, i - 3) = 0.0;
      }

      // Double QR step on rows l..n and columns m..n.
      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = h(k, k - 1);
          q = h(k + 1, k - 1);
          r = notlast ? h(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0)
            continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0)
          s = -s;
        if (s != 0) {
          if (k != m)
            h(k, k - 1) = -s * x;
          else if (l != m)
            h(k, k - 1) = -h(k, k - 1);
          p += s;
          x = p / s;
          y = q / s;
          z = r / s;
          q /= p;
          r /= p;
          for (int j = k; j < nn; ++j) {
            p = h(k, j) + q * h(k + 1, j);
            if (notlast) {
              p += r * h(k + 2, j);
              h(k + 2, j) -= p * z;
            }
            h(k, j) -= p * x;
            h(k + 1, j) -= p * y;
          }
          for (int i = 0; i <= std::min(n, k + 3); ++i) {
            p = x * h(i, k) + y * h(i, k + 1);
            if (notlast) {
              p += z * h(i, k + 2);
              h(i, k + 2) -= p * r;
            }
            h(i, k) -= p;
            h(i, k + 1) -= p * q;
          }
        }
      }
    }
  }
}

} // namespace

SpectrumReport eig_general(const DenseMatrix& a) {
  if (!a.is_square())
    throw InvalidArgument("eig_general: matrix must be square");
  if (!a.all_finite())
    throw InvalidArgument("eig_general: matrix has non-finite entries");
  DenseMatrix h = a;
  reduce_to_hessenberg(h);
  std::vector<double> wr, wi;
  hessenberg_qr(h, wr, wi);
  SpectrumReport rep;
  rep.is_symmetric_input = false;
  for (std::size_t i = 0; i < wr.size(); ++i)
    rep.eigenvalues.emplace_back(wr[i], wi[i]);
  sort_spectrum(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Singular values: one-sided (Hestenes) Jacobi

Vector singular_values(const DenseMatrix& a) {
  // Work on the columns of the taller orientation.
  const DenseMatrix& src = a;
  const bool use_transpose = a.rows() < a.cols();
  const DenseMatrix t = use_transpose ? a.transpose() : DenseMatrix();
  const DenseMatrix& m = use_transpose ? t : src;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();

  std::vector<Vector> col(cols, Vector(rows));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      col[j][i] = m(i, j);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0;; ++sweep) {
    if (sweep >= kMaxSweeps)
      throw NoConvergence("singular_values: Jacobi sweeps did not converge");
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += col[p][i] * col[p][i];
          beta += col[q][i] * col[q][i];
          gamma += col[p][i] * col[q][i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta))
          continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double tt = (zeta >= 0.0 ? 1.0 : -1.0) /
                          (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + tt * tt);
        const double s = c * tt;
        for (std::size_t i = 0; i < rows; ++i) {
          const double xp = col[p][i];
          const double xq = col[q][i];
          col[p][i] = c * xp - s * xq;
          col[q][i] = s * xp + c * xq;
        }
      }
    }
    if (!rotated)
      break;
  }

  Vector sigma(cols);
  for (std::size_t j = 0; j < cols; ++j)
    sigma[j] = norm2(col[j]);
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

double spectral_condition(const DenseMatrix& a) {
  if (!a.is_square())
    throw InvalidArgument("spectral_condition: matrix must be square");
  if (a.rows() == 0)
    return 1.0;
  const Vector sigma = singular_values(a);
  const double smin = sigma.back();
  if (smin < 1e-300)
    return std::numeric_limits<double>::infinity();
  return sigma.front() / smin;
}

// ---------------------------------------------------------------------------
// Tikhonov regularization

Vector tikhonov_solve(const DenseMatrix& a, std::span<const double> b, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("tikhonov_solve: lambda must be a finite non-negative number");
  if (b.size() != a.rows())
    throw LengthMismatch("tikhonov_solve: right-hand side length mismatch");
  if (lambda == 0.0 && a.is_square())
    return solve_linear(a, b);

  // Least squares on the stacked system [A; lambda I] x = [b; 0].
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  DenseMatrix stacked(m + n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      stacked(i, j) = a(i, j);
  for (std::size_t j = 0; j < n; ++j)
    stacked(m + j, j) = lambda;
  Vector rhs(m + n, 0.0);
  std::copy(b.begin(), b.end(), rhs.begin());
  return least_squares_qr(std::move(stacked), std::move(rhs));
}

DiscrepancyResult discrepancy_select(const DenseMatrix& a, std::span<const double> b,
                                     double delta) {
  if (!(delta > 0.0))
    throw InvalidArgument("discrepancy_select: delta must be positive");
  const double bnorm = norm2(b);
  if (delta >= bnorm)
    throw DeltaTooLarge("discrepancy_select: delta >= ||b||, the zero solution already fits");

  const double upper = kDiscrepancyUpperFactor * delta;
  auto evaluate = [&](double log_lambda) {
    DiscrepancyResult r;
    r.lambda = std::exp(log_lambda);
    r.x = tikhonov_solve(a, b, r.lambda);
    r.residual_norm = residual_norm(a, r.x, b);
    return r;
  };

  double lo = std::log(kDiscrepancyLambdaMin);
  double hi = std::log(kDiscrepancyLambdaMax);
  DiscrepancyResult bottom = evaluate(lo);
  if (bottom.residual_norm > upper) {
    bottom.bracket_failure = true;
    return bottom;
  }
  if (bottom.residual_norm >= delta)
    return bottom;
  DiscrepancyResult top = evaluate(hi);
  if (top.residual_norm <= upper)
    return top;

  // Residual is nondecreasing in lambda: keep res(lo) < delta, res(hi) > upper.
  DiscrepancyResult best = top;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    DiscrepancyResult cur = evaluate(mid);
    if (cur.residual_norm < delta) {
      lo = mid;
    } else if (cur.residual_norm > upper) {
      hi = mid;
      best = std::move(cur);
    } else {
      return cur;
    }
    if (hi - lo < 1e-14)
      break;
  }
  return best;
}

} // namespace dersamp
