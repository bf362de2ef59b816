// Exact integrals of powers of a linear function over one subinterval.
#pragma once

namespace gridnls {

struct SegmentPower {
  double value{0.0};  ///< \int_0^1 |a + (b-a) s|^p ds
  double d_a{0.0};
  double d_b{0.0};
};

/// Closed form for any real p >= 1, with partial derivatives in the endpoint
/// values. Nearly equal endpoints fall back to Gauss-Legendre to avoid
/// cancellation.
SegmentPower segment_power(double a, double b, double p);

/// Value only; cheaper when derivatives are not needed.
double segment_power_value(double a, double b, double p);

/// \int_0^1 (a + (b-a) s)^2 ds
inline double segment_square(double a, double b) noexcept { return (a * a + a * b + b * b) / 3.0; }

}  // namespace gridnls
