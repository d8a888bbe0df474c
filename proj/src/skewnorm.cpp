#include "portopt/skewnorm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace portopt::skewnorm {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

}  // namespace

SkewNormalParams from_moments(double mean, double stddev, double skewness) {
  if (!std::isfinite(mean) || !std::isfinite(stddev) || !std::isfinite(skewness)) {
    throw ValidationError("skewnorm: moments must be finite");
  }
  if (!(stddev > 0.0)) throw ValidationError("skewnorm: stddev must be positive");
  if (std::abs(skewness) > 0.99) {
    throw SkewnessOutOfRange("skewnorm: |skewness| = " +
                             std::to_string(std::abs(skewness)) +
                             " exceeds the supported limit 0.99");
  }

  double delta = 0.0;
  if (skewness != 0.0) {
    const double b = (4.0 - kPi) / 2.0;
    const double t = std::pow(std::abs(skewness), 2.0 / 3.0);
    delta = std::sqrt((kPi / 2.0) * t / (std::pow(b, 2.0 / 3.0) + t));
    if (skewness < 0.0) delta = -delta;
  }

  SkewNormalParams p;
  p.delta = delta;
  p.alpha = delta / std::sqrt(1.0 - delta * delta);
  p.omega = stddev / std::sqrt(1.0 - 2.0 * delta * delta / kPi);
  p.epsilon = mean - p.omega * delta * kSqrt2OverPi;
  return p;
}

double pdf(const SkewNormalParams& p, double r) {
  const double t = (r - p.epsilon) / p.omega;
  return 2.0 / p.omega * std_normal_pdf(t) * std_normal_cdf(p.alpha * t);
}

double cdf(const SkewNormalParams& p, double r, double tol) {
  const double lo = p.epsilon - 14.0 * p.omega;
  const double hi = p.epsilon + 14.0 * p.omega;
  if (r <= lo) return 0.0;
  if (r >= hi) return 1.0;
  const double v = integrate([&p](double x) { return pdf(p, x); }, lo, r, tol);
  return std::clamp(v, 0.0, 1.0);
}

double analytic_mean(const SkewNormalParams& p) {
  return p.epsilon + p.omega * p.delta * kSqrt2OverPi;
}

double analytic_stddev(const SkewNormalParams& p) {
  return p.omega * std::sqrt(1.0 - 2.0 * p.delta * p.delta / kPi);
}

double analytic_skewness(const SkewNormalParams& p) {
  const double m = p.delta * kSqrt2OverPi;
  const double v = 1.0 - m * m;
  return (4.0 - kPi) / 2.0 * (m * m * m) / std::pow(v, 1.5);
}

Vec sample(const SkewNormalParams& p, std::size_t n, RngStream& rng) {
  const double c = std::sqrt(1.0 - p.delta * p.delta);
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u0 = rng.next_normal();
    const double u1 = rng.next_normal();
    const double z = p.delta * std::abs(u0) + c * u1;
    out[i] = p.epsilon + p.omega * z;
  }
  return out;
}

}  // namespace portopt::skewnorm
