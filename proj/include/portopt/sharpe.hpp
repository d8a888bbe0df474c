#pragma once

#include "portopt/market.hpp"
#include "portopt/numerics.hpp"

namespace portopt {

/// S(w) = w'e / sqrt(w' Sigma w). Scale-invariant: S(c w) = S(w) for c > 0.
/// Throws DegeneratePortfolio when w' Sigma w is not meaningfully positive.
double sharpe_ratio(const Vec& w, const ExcessModel& model);

/// grad S(w) = e / sigma(w) - (w'e) Sigma w / sigma(w)^3 with
/// sigma(w) = sqrt(w' Sigma w). Orthogonal to w at every point.
Vec sharpe_gradient(const Vec& w, const ExcessModel& model);

/// Closed-form stationary portfolio of the sign-free problem:
/// w* = Sigma^{-1} e / sum_i (Sigma^{-1} e)_i.
/// Throws DegenerateNormalization when the normalizing sum is zero within
/// 1e-12 (relative) or negative; the message reports the sum and its sign.
PortfolioWeights unconstrained_optimum(const ExcessModel& model);

/// First-order conditions of the nonnegativity-constrained problem at w:
/// grad S(w) + mu = 0, w >= 0, mu >= 0, mu'w = 0, with mu supported on the
/// zero set {j : w_j <= zero_tol}. max_violation aggregates the worst of the
/// four conditions; a point is a verified optimum when it is ~0.
struct KktReport {
  Vec duals;
  Vec stationarity_residual;
  double max_violation = 0.0;
  double stationarity = 0.0;       // |grad S_j| over the positive set
  double primal_negativity = 0.0;  // max(0, -min_j w_j)
  double dual_negativity = 0.0;    // max(0, -min_j mu_j) over the zero set
  double complementarity = 0.0;    // |mu' w|
};

KktReport kkt_report(const Vec& w, const ExcessModel& model,
                     double zero_tol = 1e-10);

}  // namespace portopt
