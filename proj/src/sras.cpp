#include "portopt/sras.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace portopt::sras {

namespace {

Vec scatter(const Vec& packed, const std::vector<int>& where, std::size_t n) {
  Vec full(n, 0.0);
  for (std::size_t k = 0; k < where.size(); ++k) {
    full[static_cast<std::size_t>(where[k])] = packed[k];
  }
  return full;
}

PortfolioWeights normalize(const Vec& w, const std::vector<std::string>& labels) {
  const double s = sum(w);
  // w >= 0 with at least one strictly positive coordinate at every iterate,
  // so the sum cannot vanish.
  if (!(s > 0.0)) {
    throw DegenerateNormalization("sras: iterate sum " + std::to_string(s) +
                                  " is not positive");
  }
  PortfolioWeights out;
  out.labels = labels;
  out.values.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.values[i] = w[i] / s;
  out.normalized = true;
  return out;
}

}  // namespace

int initial_index(const ExcessModel& model) {
  if (!model.has_positive_excess) {
    throw NoPositiveExcess(
        "sras: no asset has positive mean excess return; the long-only "
        "optimum is degenerate");
  }
  const int n = static_cast<int>(model.e.size());
  int best = -1;
  double best_ratio = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    const double d = model.sigma(j, j);
    if (!(d > 0.0)) continue;  // cannot be part of a PD matrix; skip here, factorization reports it
    const double ratio = model.e[static_cast<std::size_t>(j)] / std::sqrt(d);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = j;
    }
  }
  if (best < 0) throw ValidationError("sras: covariance diagonal is not positive");
  return best;
}

SolveResult solve(const ExcessModel& model, double tol, int max_iter) {
  const int n = static_cast<int>(model.e.size());
  if (n < 1) throw ValidationError("sras: empty model");
  if (model.sigma.dim() != n) throw ValidationError("sras: sigma/e size mismatch");
  if (!(tol > 0.0)) throw ValidationError("sras: tol must be positive");
  if (max_iter <= 0) max_iter = 3 * n * n;
  const double dual_tol = std::min(tol, 1e-10);

  const int j0 = initial_index(model);
  Vec w(static_cast<std::size_t>(n), 0.0);
  // Start at the singleton subspace optimum so w equals x on entry of the
  // first pass. Sharpe is scale-invariant, so the scale choice changes
  // nothing downstream.
  w[static_cast<std::size_t>(j0)] =
      model.e[static_cast<std::size_t>(j0)] / model.sigma(j0, j0);

  std::vector<int> P{j0};
  std::vector<int> W;
  W.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    if (j != j0) W.push_back(j);
  }

  SolveResult res;
  bool converged = false;

  for (int iter = 0; iter < max_iter; ++iter) {
    const SymMatrix sigma_p = model.sigma.submatrix(P);
    Vec e_p(P.size());
    for (std::size_t k = 0; k < P.size(); ++k) {
      e_p[k] = model.e[static_cast<std::size_t>(P[k])];
    }
    const Vec x_p = solve_pd(sigma_p, e_p);
    const Vec x = scatter(x_p, P, static_cast<std::size_t>(n));

    Vec p(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      p[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] - w[static_cast<std::size_t>(j)];
    }

    ActiveSetState state;
    state.iteration = iter;
    state.w = w;
    state.positive = P;
    state.working = W;
    state.x = x;
    state.p = p;
    res.trace.sharpe_per_iteration.push_back(sharpe_ratio(w, model));

    const double p_tol = 1e-12 * std::max(1.0, norm_inf(w));
    if (norm_inf(p) <= p_tol) {
      // On-subspace optimum reached; consult the working-set duals.
      const Vec g = sharpe_gradient(w, model);
      state.duals.assign(static_cast<std::size_t>(n), 0.0);
      int release = -1;
      double most_negative = -dual_tol;
      for (int j : W) {
        const double mu = -g[static_cast<std::size_t>(j)];
        state.duals[static_cast<std::size_t>(j)] = mu;
        if (mu < most_negative) {
          most_negative = mu;
          release = j;
        }
      }
      if (release < 0) {
        state.kind = StepKind::Terminate;
        res.trace.states.push_back(std::move(state));
        res.iterations = iter + 1;
        converged = true;
        break;
      }
      state.kind = StepKind::Release;
      state.changed_index = release;
      res.trace.states.push_back(std::move(state));
      W.erase(std::find(W.begin(), W.end(), release));
      P.push_back(release);
      std::sort(P.begin(), P.end());
      continue;
    }

    // Step toward x, clipped at the first coordinate driven to zero.
    double alpha = 1.0;
    int blocking = -1;
    for (int j : P) {
      const double pj = p[static_cast<std::size_t>(j)];
      if (pj < 0.0) {
        const double ratio = -w[static_cast<std::size_t>(j)] / pj;
        if (ratio < alpha) {
          alpha = ratio;
          blocking = j;
        }
      }
    }
    state.kind = StepKind::Move;
    state.alpha = alpha;
    state.changed_index = blocking;
    res.trace.states.push_back(std::move(state));

    if (blocking < 0) {
      w = x;  // full step lands exactly on the subspace optimum
    } else {
      for (int j : P) {
        const std::size_t sj = static_cast<std::size_t>(j);
        w[sj] = std::max(0.0, w[sj] + alpha * p[sj]);
      }
      w[static_cast<std::size_t>(blocking)] = 0.0;
      P.erase(std::find(P.begin(), P.end(), blocking));
      W.push_back(blocking);
      std::sort(W.begin(), W.end());
    }
  }

  if (!converged) {
    SolveResult partial;
    partial.weights = normalize(w, model.labels);
    partial.sharpe = sharpe_ratio(partial.weights.values, model);
    partial.kkt = kkt_report(partial.weights.values, model);
    partial.iterations = max_iter;
    partial.trace = std::move(res.trace);
    throw SrasIterationLimit(
        "sras: no convergence within " + std::to_string(max_iter) +
            " passes; best iterate attached",
        std::move(partial));
  }

  res.weights = normalize(w, model.labels);
  res.sharpe = sharpe_ratio(res.weights.values, model);
  res.kkt = kkt_report(res.weights.values, model);
  return res;
}

TraceVerification verify_trace(const SolverTrace& trace, int n) {
  TraceVerification v;
  const auto& S = trace.sharpe_per_iteration;
  const auto& states = trace.states;
  if (states.size() != S.size()) {
    v.feasible = false;
    return v;
  }

  for (const ActiveSetState& st : states) {
    for (double wj : st.w) {
      if (!(wj >= 0.0)) v.feasible = false;
    }
    for (int j : st.working) {
      if (st.w[static_cast<std::size_t>(j)] != 0.0) v.feasible = false;
    }
    if (st.kind == StepKind::Release) {
      if (st.changed_index < 0 || st.duals.empty()) {
        v.releases_valid = false;
      } else {
        double min_dual = 0.0;
        for (int j : st.working) {
          min_dual = std::min(min_dual, st.duals[static_cast<std::size_t>(j)]);
        }
        const double released = st.duals[static_cast<std::size_t>(st.changed_index)];
        if (!(released < 0.0) || released != min_dual) v.releases_valid = false;
      }
    }
    if (st.kind == StepKind::Move) {
      if (st.changed_index >= 0 && !(st.alpha < 1.0)) v.blocking_valid = false;
      if (st.changed_index < 0 && st.alpha != 1.0) v.blocking_valid = false;
    }
  }

  for (std::size_t i = 0; i + 1 < S.size(); ++i) {
    if (S[i + 1] < S[i] - 1e-12) v.monotone = false;
  }
  if (n > 0) {
    const std::size_t win = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + win < S.size(); ++i) {
      if (!(S[i + win] > S[i])) v.strict_windows = false;
    }
  }
  return v;
}

}  // namespace portopt::sras
