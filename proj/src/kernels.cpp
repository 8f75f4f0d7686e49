#include "dersamp/kernels.hpp"

#include "dersamp/errors.hpp"

#include <cmath>
#include <string>

namespace dersamp {

namespace {

void check_positive_finite(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0)
    throw InvalidArgument(std::string(name) + " must be positive and finite, got " +
                          std::to_string(v));
}

void check_ratio(double r) {
  if (!(r > 0.0 && r <= 1.0))
    throw InvalidArgument("oversampling ratio must lie in (0, 1], got " + std::to_string(r));
}

} // namespace

TwoChannelParams TwoChannelParams::from_ratio(double omega, double r) {
  check_positive_finite(omega, "omega");
  check_ratio(r);
  return TwoChannelParams(omega, kTwoPi * r / omega, r);
}

TwoChannelParams TwoChannelParams::from_step(double omega, double t_o) {
  check_positive_finite(omega, "omega");
  check_positive_finite(t_o, "t_o");
  const double r = omega * t_o / kTwoPi;
  check_ratio(r);
  return TwoChannelParams(omega, t_o, r);
}

OneChannelParams OneChannelParams::from_ratio(double omega, double r) {
  check_positive_finite(omega, "omega");
  check_ratio(r);
  return OneChannelParams(omega, kPi * r / omega, r);
}

OneChannelParams OneChannelParams::from_step(double omega, double t_o) {
  check_positive_finite(omega, "omega");
  check_positive_finite(t_o, "t_o");
  const double r = omega * t_o / kPi;
  check_ratio(r);
  return OneChannelParams(omega, t_o, r);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double sinc_deriv(double x) {
  // (cos x - sinc x) / x loses all digits to cancellation near 0; below 0.1
  // the odd series through x^9 is exact to binary64.
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    return x * (-1.0 / 3.0 +
                x2 * (1.0 / 30.0 +
                      x2 * (-1.0 / 840.0 + x2 * (1.0 / 45360.0 - x2 / 3991680.0))));
  }
  return (std::cos(x) - std::sin(x) / x) / x;
}

double dual_gen_1(double x, const TwoChannelParams& p) {
  const double r = p.r();
  const double half = sinc(0.5 * p.omega() * x);
  return (2.0 * r * (1.0 - r) * sinc(p.omega() * x) + r * r * half * half) / kSqrtTwoPi;
}

double dual_gen_2(double x, const TwoChannelParams& p) {
  const double r = p.r();
  const double half = sinc(0.5 * p.omega() * x);
  return -x * r * r * half * half / kSqrtTwoPi;
}

double dual_gen_1_deriv(double x, const TwoChannelParams& p) {
  const double r = p.r();
  const double w = p.omega();
  const double u = 0.5 * w * x;
  return (2.0 * r * (1.0 - r) * w * sinc_deriv(w * x) + r * r * w * sinc(u) * sinc_deriv(u)) /
         kSqrtTwoPi;
}

double dual_gen_2_deriv(double x, const TwoChannelParams& p) {
  const double r = p.r();
  const double u = 0.5 * p.omega() * x;
  const double s = sinc(u);
  return -r * r * s * (2.0 * std::cos(u) - s) / kSqrtTwoPi;
}

double one_channel_kernel(double r, long n) {
  return r * sinc(kPi * r * static_cast<double>(n));
}

double riesz_dual_1(double x, double h) {
  const double s = sinc(0.5 * h * x);
  return s * s / kSqrtTwoPi;
}

double riesz_dual_2(double x, double h) {
  const double s = sinc(0.5 * h * x);
  return -x * s * s / kSqrtTwoPi;
}

} // namespace dersamp
