#pragma once

#include <cstdint>
#include <variant>

#include "portopt/market.hpp"
#include "portopt/numerics.hpp"
#include "portopt/skewnorm.hpp"

namespace portopt::omega {

struct NormalDist {
  double mean = 0.0;
  double stddev = 1.0;  // > 0
};

using ReturnDistribution = std::variant<NormalDist, skewnorm::SkewNormalParams>;

double dist_mean(const ReturnDistribution& d);
double dist_pdf(const ReturnDistribution& d, double r);
double dist_cdf(const ReturnDistribution& d, double r, double tol = 1e-10);

/// Effective support [lo, hi] used to truncate integrals: mean +- 14 sd for
/// the normal, epsilon +- 14 omega for the skew-normal. Mass outside is
/// below 1e-40, negligible against every tolerance here.
void dist_support(const ReturnDistribution& d, double& lo, double& hi);

enum class OmegaMethod { Quadrature, PartialMoment, MonteCarlo, ClosedForm };

struct OmegaEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  OmegaMethod method = OmegaMethod::Quadrature;
};

/// Omega at threshold L as the ratio of expected one-sided deviations,
///   Omega(L) = E[(R - L)^+] / E[(L - R)^+],
/// each side reduced to a single integral of the density (the tail-CDF form
/// integrates to exactly these by Fubini). Throws DegenerateDenominator when
/// the shortfall side is 0 within tolerance.
OmegaEstimate omega_cdf_ratio(const ReturnDistribution& d, double L,
                              double tol = 1e-10);

/// Same quantity through the identity Omega(L) = 1 + (mean - L) / E[(L-R)^+],
/// which needs only the shortfall integral.
OmegaEstimate omega_partial_moment(const ReturnDistribution& d, double L,
                                   double tol = 1e-10);

/// Monte Carlo estimate of the shortfall expectation plugged into the same
/// identity. Sampling runs in chunks of 100000 draws; chunk c uses the
/// stream seeded with seed + c, so results are reproducible and chunk order
/// is immaterial. error_estimate is the delta-method standard error.
OmegaEstimate omega_monte_carlo(const ReturnDistribution& d, double L,
                                std::uint64_t n_samples, std::uint64_t seed);

/// Closed form for normal returns: with z = (L - mean)/sd,
///   E[(L-R)^+] = sd (z Phi(z) + phi(z)),  Omega = 1 + (mean - L)/E[(L-R)^+].
OmegaEstimate omega_elliptical_normal(double mean, double stddev, double L);

double lower_partial_moment_normal(double mean, double stddev, double L);

/// Grid search over the weight simplex comparing the argmax of the Sharpe
/// ratio with the argmax of Omega under normal portfolio returns (closed
/// form). A coarse pass at grid_step is refined at refine_step inside a
/// one-coarse-cell neighborhood of each coarse winner. coincide is true when
/// each winner is within tie_tol of optimal under the other objective.
struct ArgmaxProbe {
  Vec argmax_sharpe;
  Vec argmax_omega;
  double sharpe_at_sharpe_max = 0.0;
  double sharpe_at_omega_max = 0.0;
  double omega_at_omega_max = 0.0;
  double omega_at_sharpe_max = 0.0;
  bool coincide = false;
  bool flat = false;  // objective range below tie_tol; coincidence is vacuous
};

ArgmaxProbe argmax_equivalence_probe(const ExcessModel& model,
                                     double grid_step = 0.05,
                                     double refine_step = 0.01,
                                     double tie_tol = 1e-9);

}  // namespace portopt::omega
