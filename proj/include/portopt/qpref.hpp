#pragma once

#include "portopt/market.hpp"
#include "portopt/numerics.hpp"

namespace portopt::qpref {

/// Target excess level for the variance-minimization reformulation
///   min w' Sigma w  s.t.  w'e = z, w >= 0.
/// Any z > 0 yields the same normalized portfolio; z = sum(e) is the default,
/// falling back to max(e) when the sum is not positive.
/// Throws NoPositiveExcess when max(e) <= 0 (no feasible z > 0 exists).
double default_z(const Vec& e);

/// Euclidean projection onto {w >= 0, e'w = z}. The multiplier lambda in
/// w = max(0, v + lambda e) makes e'w continuous and nondecreasing in lambda,
/// so it is found by bracketing and bisection to |e'w - z| <= 1e-14 max(1,|z|).
/// Throws InfeasibleProjection if no bracket exists (impossible for
/// max(e) > 0, z > 0).
Vec project(const Vec& v, const Vec& e, double z);

struct QpInstance {
  SymMatrix sigma;
  Vec e;
  double z = 0.0;
};

/// Optional iterate log for solve_qp (pass nullptr to skip collection).
struct QpTrace {
  Vec objective;            // w' Sigma w per accepted step
  double max_feasibility_gap = 0.0;  // worst |e'w - z| over iterates
  double min_weight = 0.0;           // most negative weight seen (0 if none)
  int iterations = 0;
};

/// Projected gradient with Armijo backtracking (c = 1e-4, halving, initial
/// step 1 / ||Sigma||_inf). Stops when the accepted step moves w by at most
/// tol * max(1, ||w||_inf); result is normalized to sum 1.
/// Throws IterationLimit after max_iter accepted steps without convergence.
PortfolioWeights solve_qp(const QpInstance& inst, double tol = 1e-10,
                          int max_iter = 200000, QpTrace* trace = nullptr);

/// Exhaustive simplex-grid maximizer of the Sharpe ratio with spacing step
/// (weights k/m, sum k = m, m = round(1/step)). Exact within the grid; cost
/// grows as m^(n-1), so n > 4 throws DimensionTooLarge.
PortfolioWeights grid_oracle(const ExcessModel& model, double step);

}  // namespace portopt::qpref
