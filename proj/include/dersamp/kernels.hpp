#pragma once

// Kernels of the one- and two-channel derivative oversampling formulas.
//
// The two-channel frame for B_omega samples f and f' on the grid n * t_o.
// Its dual generators have the closed forms
//
//   dual1(x) = [2r(1-r) sinc(omega x) + r^2 sinc^2(omega x / 2)] / sqrt(2 pi)
//   dual2(x) = -x r^2 sinc^2(omega x / 2) / sqrt(2 pi)
//
// with r = omega t_o / (2 pi). All kernels are evaluated in binary64.

namespace dersamp {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
/// sqrt(2 pi)
inline constexpr double kSqrtTwoPi = 2.50662827463100050241576528481104525;

/// Sampling parameters of the two-channel (function + derivative) scheme.
///
/// The oversampling ratio is r = omega * t_o / (2 pi) and h = 2 pi / t_o.
/// r = 1 is accepted as the critical (Riesz basis) limit, where the
/// recovery system degenerates to the identity.
class TwoChannelParams {
public:
  /// Builds the parameters from the band edge and the oversampling ratio.
  static TwoChannelParams from_ratio(double omega, double r);
  /// Builds the parameters from the band edge and the sampling step.
  static TwoChannelParams from_step(double omega, double t_o);

  double omega() const { return omega_; }
  double t_o() const { return t_o_; }
  double r() const { return r_; }
  double h() const { return kTwoPi / t_o_; }

private:
  TwoChannelParams(double omega, double t_o, double r) : omega_(omega), t_o_(t_o), r_(r) {}

  double omega_;
  double t_o_;
  double r_;
};

/// Sampling parameters of the classic one-channel oversampling formula,
/// r = omega * t_o / pi.
class OneChannelParams {
public:
  static OneChannelParams from_ratio(double omega, double r);
  static OneChannelParams from_step(double omega, double t_o);

  double omega() const { return omega_; }
  double t_o() const { return t_o_; }
  double r() const { return r_; }

private:
  OneChannelParams(double omega, double t_o, double r) : omega_(omega), t_o_(t_o), r_(r) {}

  double omega_;
  double t_o_;
  double r_;
};

/// sin(x) / x, with the removable singularity filled in.
double sinc(double x);

/// d/dx sinc(x) = (cos x - sinc x) / x; series near zero.
double sinc_deriv(double x);

double dual_gen_1(double x, const TwoChannelParams& p);
double dual_gen_2(double x, const TwoChannelParams& p);

/// Derivative of dual_gen_1. Odd, zero at the origin.
double dual_gen_1_deriv(double x, const TwoChannelParams& p);

/// Derivative of dual_gen_2. Even, equal to -r^2 / sqrt(2 pi) at the origin.
double dual_gen_2_deriv(double x, const TwoChannelParams& p);

/// Entry r * sinc(pi r n) of the one-channel recovery matrix.
double one_channel_kernel(double r, long n);

/// Dual generators of the critically sampled derivative Riesz basis of B_h.
double riesz_dual_1(double x, double h);
double riesz_dual_2(double x, double h);

} // namespace dersamp
