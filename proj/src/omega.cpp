#include "portopt/omega.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "portopt/sharpe.hpp"

namespace portopt::omega {

namespace {

void validate_normal(const NormalDist& d) {
  if (!std::isfinite(d.mean) || !(d.stddev > 0.0)) {
    throw ValidationError("omega: normal distribution needs finite mean and stddev > 0");
  }
}

// Shortfall expectation E[(L - R)^+] by quadrature of (L - r) f(r).
double shortfall_by_quadrature(const ReturnDistribution& d, double L,
                               double tol) {
  double lo = 0.0, hi = 0.0;
  dist_support(d, lo, hi);
  const double upper = std::min(L, hi);
  if (!(upper > lo)) return 0.0;
  return integrate(
      [&d, L](double r) { return (L - r) * dist_pdf(d, r); }, lo, upper, tol);
}

double upside_by_quadrature(const ReturnDistribution& d, double L, double tol) {
  double lo = 0.0, hi = 0.0;
  dist_support(d, lo, hi);
  const double lower = std::max(L, lo);
  if (!(hi > lower)) return 0.0;
  return integrate(
      [&d, L](double r) { return (r - L) * dist_pdf(d, r); }, lower, hi, tol);
}

}  // namespace

double dist_mean(const ReturnDistribution& d) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NormalDist>) {
          validate_normal(v);
          return v.mean;
        } else {
          return skewnorm::analytic_mean(v);
        }
      },
      d);
}

double dist_pdf(const ReturnDistribution& d, double r) {
  return std::visit(
      [r](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NormalDist>) {
          return std_normal_pdf((r - v.mean) / v.stddev) / v.stddev;
        } else {
          return skewnorm::pdf(v, r);
        }
      },
      d);
}

double dist_cdf(const ReturnDistribution& d, double r, double tol) {
  return std::visit(
      [r, tol](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NormalDist>) {
          return std_normal_cdf((r - v.mean) / v.stddev);
        } else {
          return skewnorm::cdf(v, r, tol);
        }
      },
      d);
}

void dist_support(const ReturnDistribution& d, double& lo, double& hi) {
  std::visit(
      [&lo, &hi](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NormalDist>) {
          validate_normal(v);
          lo = v.mean - 14.0 * v.stddev;
          hi = v.mean + 14.0 * v.stddev;
        } else {
          lo = v.epsilon - 14.0 * v.omega;
          hi = v.epsilon + 14.0 * v.omega;
        }
      },
      d);
}

OmegaEstimate omega_cdf_ratio(const ReturnDistribution& d, double L,
                              double tol) {
  if (!std::isfinite(L)) throw ValidationError("omega: threshold must be finite");
  if (!(tol > 0.0)) throw ValidationError("omega: tol must be positive");
  const double den = shortfall_by_quadrature(d, L, tol);
  if (den <= tol) {
    throw DegenerateDenominator(
        "omega: shortfall expectation " + std::to_string(den) +
        " at threshold " + std::to_string(L) +
        " is zero within tolerance; Omega diverges");
  }
  const double num = upside_by_quadrature(d, L, tol);
  OmegaEstimate est;
  est.value = num / den;
  est.error_estimate = tol * (1.0 + est.value) / den;
  est.method = OmegaMethod::Quadrature;
  return est;
}

OmegaEstimate omega_partial_moment(const ReturnDistribution& d, double L,
                                   double tol) {
  if (!std::isfinite(L)) throw ValidationError("omega: threshold must be finite");
  if (!(tol > 0.0)) throw ValidationError("omega: tol must be positive");
  const double den = shortfall_by_quadrature(d, L, tol);
  if (den <= tol) {
    throw DegenerateDenominator(
        "omega: shortfall expectation " + std::to_string(den) +
        " at threshold " + std::to_string(L) +
        " is zero within tolerance; Omega diverges");
  }
  const double mean = dist_mean(d);
  OmegaEstimate est;
  est.value = 1.0 + (mean - L) / den;
  est.error_estimate = tol * (1.0 + std::abs(mean - L) / den) / den;
  est.method = OmegaMethod::PartialMoment;
  return est;
}

OmegaEstimate omega_monte_carlo(const ReturnDistribution& d, double L,
                                std::uint64_t n_samples, std::uint64_t seed) {
  if (!std::isfinite(L)) throw ValidationError("omega: threshold must be finite");
  if (n_samples == 0) throw ValidationError("omega: need at least one sample");
  const double mean = dist_mean(d);

  constexpr std::uint64_t kChunk = 100000;
  double sum_y = 0.0;
  double sum_y2 = 0.0;
  std::uint64_t below = 0;
  std::uint64_t drawn = 0;
  std::uint64_t chunk_index = 0;
  while (drawn < n_samples) {
    const std::uint64_t m = std::min(kChunk, n_samples - drawn);
    RngStream rng(seed + chunk_index);
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, NormalDist>) {
            validate_normal(v);
            for (std::uint64_t i = 0; i < m; ++i) {
              const double r = v.mean + v.stddev * rng.next_normal();
              const double y = std::max(L - r, 0.0);
              sum_y += y;
              sum_y2 += y * y;
              if (y > 0.0) ++below;
            }
          } else {
            const double c = std::sqrt(1.0 - v.delta * v.delta);
            for (std::uint64_t i = 0; i < m; ++i) {
              const double u0 = rng.next_normal();
              const double u1 = rng.next_normal();
              const double r =
                  v.epsilon + v.omega * (v.delta * std::abs(u0) + c * u1);
              const double y = std::max(L - r, 0.0);
              sum_y += y;
              sum_y2 += y * y;
              if (y > 0.0) ++below;
            }
          }
        },
        d);
    drawn += m;
    ++chunk_index;
  }

  if (below == 0) {
    throw DegenerateDenominator(
        "omega: no sample fell below the threshold; the Monte Carlo "
        "shortfall estimate is zero");
  }
  const double nd = static_cast<double>(n_samples);
  const double mean_y = sum_y / nd;
  double se_y = 0.0;
  if (n_samples > 1) {
    const double var_y =
        std::max(0.0, (sum_y2 - nd * mean_y * mean_y) / (nd - 1.0));
    se_y = std::sqrt(var_y / nd);
  }

  OmegaEstimate est;
  est.value = 1.0 + (mean - L) / mean_y;
  est.error_estimate = std::abs(mean - L) * se_y / (mean_y * mean_y);
  est.method = OmegaMethod::MonteCarlo;
  return est;
}

double lower_partial_moment_normal(double mean, double stddev, double L) {
  if (!(stddev > 0.0)) throw ValidationError("omega: stddev must be positive");
  const double z = (L - mean) / stddev;
  return stddev * (z * std_normal_cdf(z) + std_normal_pdf(z));
}

OmegaEstimate omega_elliptical_normal(double mean, double stddev, double L) {
  const double lpm = lower_partial_moment_normal(mean, stddev, L);
  if (!(lpm > 0.0)) {
    throw DegenerateDenominator("omega: normal shortfall vanished (z = " +
                                std::to_string((L - mean) / stddev) + ")");
  }
  OmegaEstimate est;
  est.value = 1.0 + (mean - L) / lpm;
  est.error_estimate = 0.0;
  est.method = OmegaMethod::ClosedForm;
  return est;
}

namespace {

// Enumerate integer compositions of m into n parts, optionally restricted to
// a box around a center point (inclusive bounds per coordinate).
void enumerate_box(int n, std::vector<int>& k, int pos, int left,
                   const std::vector<int>& lo, const std::vector<int>& hi,
                   const std::function<void(const std::vector<int>&)>& fn) {
  if (pos == n - 1) {
    if (left >= lo[static_cast<std::size_t>(pos)] &&
        left <= hi[static_cast<std::size_t>(pos)]) {
      k[static_cast<std::size_t>(pos)] = left;
      fn(k);
    }
    return;
  }
  const int a = std::max(0, lo[static_cast<std::size_t>(pos)]);
  const int b = std::min(left, hi[static_cast<std::size_t>(pos)]);
  for (int v = a; v <= b; ++v) {
    k[static_cast<std::size_t>(pos)] = v;
    enumerate_box(n, k, pos + 1, left - v, lo, hi, fn);
  }
}

struct GridBest {
  std::vector<int> k;
  double value = -std::numeric_limits<double>::infinity();
};

}  // namespace

ArgmaxProbe argmax_equivalence_probe(const ExcessModel& model,
                                     double grid_step, double refine_step,
                                     double tie_tol) {
  const int n = static_cast<int>(model.e.size());
  if (n > 3) {
    throw DimensionTooLarge("argmax probe: supports at most 3 assets, got " +
                            std::to_string(n));
  }
  if (!(grid_step > 0.0) || !(refine_step > 0.0) || refine_step > grid_step) {
    throw ValidationError("argmax probe: need 0 < refine_step <= grid_step");
  }
  const double L = model.benchmark;

  auto eval = [&](const Vec& w, double& s_out, double& o_out) {
    s_out = sharpe_ratio(w, model);
    const double mean = dot(w, model.e) + L;
    const double sd = std::sqrt(model.sigma.quad_form(w));
    o_out = omega_elliptical_normal(mean, sd, L).value;
  };

  auto scan = [&](int m, const std::vector<int>& lo, const std::vector<int>& hi,
                  GridBest& best_s, GridBest& best_o, double& smin,
                  double& omin) {
    std::vector<int> k(static_cast<std::size_t>(n), 0);
    Vec w(static_cast<std::size_t>(n), 0.0);
    enumerate_box(n, k, 0, m, lo, hi, [&](const std::vector<int>& kk) {
      for (int i = 0; i < n; ++i) {
        w[static_cast<std::size_t>(i)] =
            static_cast<double>(kk[static_cast<std::size_t>(i)]) / m;
      }
      double s = 0.0, o = 0.0;
      eval(w, s, o);
      smin = std::min(smin, s);
      omin = std::min(omin, o);
      if (s > best_s.value) {
        best_s.value = s;
        best_s.k = kk;
      }
      if (o > best_o.value) {
        best_o.value = o;
        best_o.k = kk;
      }
    });
  };

  const int mc = static_cast<int>(std::lround(1.0 / grid_step));
  std::vector<int> lo_all(static_cast<std::size_t>(n), 0);
  std::vector<int> hi_all(static_cast<std::size_t>(n), mc);
  GridBest coarse_s, coarse_o;
  double smin = std::numeric_limits<double>::infinity();
  double omin = std::numeric_limits<double>::infinity();
  scan(mc, lo_all, hi_all, coarse_s, coarse_o, smin, omin);

  // Refine inside one coarse cell around each winner, on the union of boxes.
  const int mf = static_cast<int>(std::lround(1.0 / refine_step));
  const int ratio = mf / mc;
  GridBest fine_s = coarse_s, fine_o = coarse_o;
  fine_s.value = -std::numeric_limits<double>::infinity();
  fine_o.value = -std::numeric_limits<double>::infinity();
  for (const GridBest* center : {&coarse_s, &coarse_o}) {
    std::vector<int> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int c = center->k[static_cast<std::size_t>(i)] * ratio;
      lo[static_cast<std::size_t>(i)] = std::max(0, c - ratio);
      hi[static_cast<std::size_t>(i)] = std::min(mf, c + ratio);
    }
    scan(mf, lo, hi, fine_s, fine_o, smin, omin);
  }

  ArgmaxProbe probe;
  probe.argmax_sharpe.resize(static_cast<std::size_t>(n));
  probe.argmax_omega.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    probe.argmax_sharpe[static_cast<std::size_t>(i)] =
        static_cast<double>(fine_s.k[static_cast<std::size_t>(i)]) / mf;
    probe.argmax_omega[static_cast<std::size_t>(i)] =
        static_cast<double>(fine_o.k[static_cast<std::size_t>(i)]) / mf;
  }
  double s_at_o = 0.0, o_at_o = 0.0, s_at_s = 0.0, o_at_s = 0.0;
  eval(probe.argmax_omega, s_at_o, o_at_o);
  eval(probe.argmax_sharpe, s_at_s, o_at_s);
  probe.sharpe_at_sharpe_max = s_at_s;
  probe.sharpe_at_omega_max = s_at_o;
  probe.omega_at_omega_max = o_at_o;
  probe.omega_at_sharpe_max = o_at_s;
  probe.flat = (fine_s.value - smin <= tie_tol) || (fine_o.value - omin <= tie_tol);
  probe.coincide = (s_at_s - s_at_o <= tie_tol) && (o_at_o - o_at_s <= tie_tol);
  return probe;
}

}  // namespace portopt::omega
