#pragma once

#include <vector>

#include "portopt/market.hpp"
#include "portopt/numerics.hpp"
#include "portopt/sharpe.hpp"

namespace portopt::sras {

enum class StepKind { Move, Release, Terminate };

/// Snapshot of one solver pass, taken at entry (before the pass mutates w).
struct ActiveSetState {
  int iteration = 0;
  Vec w;                       // iterate at entry; w_j = 0 exactly for j in working
  std::vector<int> positive;   // P: coordinates free to move
  std::vector<int> working;    // W: coordinates pinned at zero
  Vec x;                       // subspace optimum scattered to full size
  Vec p;                       // x - w
  double alpha = 1.0;          // step taken (Move only)
  Vec duals;                   // -grad S on W (Release/Terminate only)
  StepKind kind = StepKind::Move;
  int changed_index = -1;      // blocking index (Move) or released index
};

struct SolverTrace {
  std::vector<ActiveSetState> states;
  Vec sharpe_per_iteration;  // S(w) at entry of each pass
};

struct SolveResult {
  PortfolioWeights weights;  // normalized terminal iterate
  double sharpe = 0.0;
  KktReport kkt;
  int iterations = 0;
  SolverTrace trace;
};

/// Starting coordinate: argmax_j e_j / sqrt(Sigma_jj), ties to the lowest
/// index. Throws NoPositiveExcess when no asset beats the benchmark.
int initial_index(const ExcessModel& model);

/// Sharpe-ratio active-set solver for max S(w) s.t. w >= 0, normalized at
/// exit so the weights sum to 1.
///
/// Each pass solves Sigma_P x_P = e_P on the positive set, steps toward x
/// along p = x - w, clipping at the first coordinate driven to zero
/// (alpha = min{1, min over p_j < 0 of -w_j / p_j}); a blocked coordinate
/// moves to the working set. When p vanishes, duals mu = -grad S(w) on the
/// working set decide: all >= -tol_dual terminates, otherwise the most
/// negative coordinate is released. The Sharpe value never decreases and
/// strictly increases across any n consecutive passes, which bounds the
/// visit count of each active set and forces termination.
///
/// max_iter <= 0 selects the default cap of 3 n^2 passes. On cap overrun
/// throws IterationLimit; result() on the exception carries the best iterate
/// and the trace collected so far.
SolveResult solve(const ExcessModel& model, double tol = 1e-10,
                  int max_iter = 0);

class SrasIterationLimit : public IterationLimit {
 public:
  SrasIterationLimit(const std::string& message, SolveResult partial)
      : IterationLimit(message), partial_(std::move(partial)) {}
  const SolveResult& result() const noexcept { return partial_; }

 private:
  SolveResult partial_;
};

/// Structural checks over a recorded trace:
///  - iterates feasible (w >= 0, exactly zero on the working set)
///  - Sharpe nondecreasing pass to pass (slack 1e-12)
///  - Sharpe strictly increasing across every window of n passes
///  - every Release happens only when some recorded dual is negative and
///    removes the most negative one
///  - every blocking Move has alpha < 1; full steps carry no blocking index
struct TraceVerification {
  bool feasible = true;
  bool monotone = true;
  bool strict_windows = true;
  bool releases_valid = true;
  bool blocking_valid = true;

  bool ok() const {
    return feasible && monotone && strict_windows && releases_valid &&
           blocking_valid;
  }
};

TraceVerification verify_trace(const SolverTrace& trace, int n);

}  // namespace portopt::sras
