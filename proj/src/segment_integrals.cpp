#include "gridnls/segment_integrals.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace gridnls {
namespace {

// 8-point Gauss-Legendre on [0,1].
constexpr std::array<double, 8> kNodes = {
    0.019855071751231856, 0.10166676129318664, 0.2372337950418355, 0.40828267875217505,
    0.59171732124782495, 0.7627662049581645,  0.89833323870681336, 0.98014492824876814};
constexpr std::array<double, 8> kWeights = {
    0.050614268145188129, 0.11119051722668724, 0.15685332293894364, 0.18134189168918099,
    0.18134189168918099,  0.15685332293894364, 0.11119051722668724, 0.050614268145188129};

constexpr double kNearEqual = 1e-2;

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

SegmentPower gauss(double a, double b, double p, bool with_derivs) {
  SegmentPower r;
  for (std::size_t k = 0; k < kNodes.size(); ++k) {
    const double s = kNodes[k];
    const double v = a + (b - a) * s;
    const double av = std::abs(v);
    r.value += kWeights[k] * std::pow(av, p);
    if (with_derivs) {
      const double dv = p * std::pow(av, p - 1.0) * sgn(v);
      r.d_a += kWeights[k] * dv * (1.0 - s);
      r.d_b += kWeights[k] * dv * s;
    }
  }
  return r;
}

SegmentPower evaluate(double a, double b, double p, bool with_derivs) {
  if (a == 0.0 && b == 0.0) return {};
  const double A = std::abs(a);
  const double B = std::abs(b);
  const double q = p + 1.0;

  if (a * b < 0.0) {
    // Split at the zero crossing: both pieces vanish linearly at one end.
    const double S = A + B;
    const double Ap = std::pow(A, p);
    const double Bp = std::pow(B, p);
    const double F = (Ap * A + Bp * B) / (q * S);
    SegmentPower r{F, 0.0, 0.0};
    if (with_derivs) {
      r.d_a = sgn(a) * (Ap - F) / S;
      r.d_b = sgn(b) * (Bp - F) / S;
    }
    return r;
  }

  const double big = std::max(A, B);
  const double diff = B - A;
  if (std::abs(diff) <= kNearEqual * big) return gauss(a, b, p, with_derivs);

  const double sign = sgn(a) != 0.0 ? sgn(a) : sgn(b);
  const double Ap = std::pow(A, p);
  const double Bp = std::pow(B, p);
  const double G = (Bp * B - Ap * A) / (q * diff);
  SegmentPower r{G, 0.0, 0.0};
  if (with_derivs) {
    r.d_a = sign * (G - Ap) / diff;
    r.d_b = sign * (Bp - G) / diff;
  }
  return r;
}

}  // namespace

SegmentPower segment_power(double a, double b, double p) { return evaluate(a, b, p, true); }

double segment_power_value(double a, double b, double p) { return evaluate(a, b, p, false).value; }

}  // namespace gridnls
