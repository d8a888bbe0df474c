#include "portopt/qpref.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "portopt/sharpe.hpp"

namespace portopt::qpref {

namespace {

double constraint_value(const Vec& v, const Vec& e, double lambda) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc += e[i] * std::max(0.0, v[i] + lambda * e[i]);
  }
  return acc;
}

}  // namespace

double default_z(const Vec& e) {
  if (e.empty()) throw ValidationError("qpref: empty excess vector");
  const double mx = *std::max_element(e.begin(), e.end());
  if (!(mx > 0.0)) {
    throw NoPositiveExcess("qpref: no positive excess return; no z > 0 is attainable");
  }
  const double s = sum(e);
  return s > 0.0 ? s : mx;
}

Vec project(const Vec& v, const Vec& e, double z) {
  if (v.size() != e.size() || v.empty()) {
    throw ValidationError("qpref::project: size mismatch");
  }
  const double target_tol = 1e-14 * std::max(1.0, std::abs(z));

  // Bracket the monotone map lambda -> e' max(0, v + lambda e).
  double lo = 0.0, hi = 0.0;
  double g_lo = constraint_value(v, e, lo);
  double g_hi = g_lo;
  double step = 1.0;
  int guard = 0;
  while (g_hi < z) {
    lo = hi;
    hi += step;
    step *= 2.0;
    g_hi = constraint_value(v, e, hi);
    if (++guard > 200) {
      throw InfeasibleProjection("qpref::project: constraint level " +
                                 std::to_string(z) + " is unreachable");
    }
  }
  guard = 0;
  while (g_lo > z) {
    hi = lo;
    lo -= step;
    step *= 2.0;
    g_lo = constraint_value(v, e, lo);
    if (++guard > 200) {
      throw InfeasibleProjection("qpref::project: constraint level " +
                                 std::to_string(z) + " is unreachable");
    }
  }

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double g = constraint_value(v, e, mid);
    if (std::abs(g - z) <= target_tol) break;
    if (g < z) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
  }

  Vec w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = std::max(0.0, v[i] + mid * e[i]);
  }
  return w;
}

PortfolioWeights solve_qp(const QpInstance& inst, double tol, int max_iter,
                          QpTrace* trace) {
  const int n = inst.sigma.dim();
  if (static_cast<int>(inst.e.size()) != n) {
    throw ValidationError("qpref: sigma/e size mismatch");
  }
  if (!(inst.z > 0.0)) throw ValidationError("qpref: requires z > 0");
  if (!(tol > 0.0)) throw ValidationError("qpref: tol must be positive");
  const double mx = *std::max_element(inst.e.begin(), inst.e.end());
  if (!(mx > 0.0)) {
    throw NoPositiveExcess("qpref: no positive excess return");
  }

  Vec w = project(Vec(static_cast<std::size_t>(n), 0.0), inst.e, inst.z);
  const double step0 = 1.0 / inst.sigma.norm_inf();
  double fw = inst.sigma.quad_form(w);

  auto log_state = [&](const Vec& wi, double fi) {
    if (!trace) return;
    trace->objective.push_back(fi);
    trace->max_feasibility_gap = std::max(
        trace->max_feasibility_gap, std::abs(dot(wi, inst.e) - inst.z));
    double mn = 0.0;
    for (double x : wi) mn = std::min(mn, x);
    trace->min_weight = std::min(trace->min_weight, mn);
  };
  log_state(w, fw);

  bool converged = false;
  int accepted = 0;
  for (; accepted < max_iter; ++accepted) {
    Vec grad = inst.sigma.multiply(w);
    for (double& g : grad) g *= 2.0;

    double step = step0;
    Vec cand;
    double fc = fw;
    bool took = false;
    for (int halving = 0; halving < 80; ++halving) {
      Vec target(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) target[i] = w[i] - step * grad[i];
      cand = project(target, inst.e, inst.z);
      Vec d(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) d[i] = cand[i] - w[i];
      fc = inst.sigma.quad_form(cand);
      if (fc <= fw + 1e-4 * dot(grad, d)) {
        took = true;
        break;
      }
      step *= 0.5;
    }
    if (!took) {
      // No productive direction at machine scale; treat as converged.
      converged = true;
      break;
    }

    double move = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      move = std::max(move, std::abs(cand[i] - w[i]));
    }
    w = std::move(cand);
    fw = fc;
    log_state(w, fw);
    if (move <= tol * std::max(1.0, norm_inf(w))) {
      converged = true;
      ++accepted;
      break;
    }
  }
  if (trace) trace->iterations = accepted;
  if (!converged) {
    throw IterationLimit("qpref: no convergence within " +
                         std::to_string(max_iter) + " steps");
  }

  const double s = sum(w);
  if (!(s > 0.0)) {
    throw DegenerateNormalization("qpref: solution sum " + std::to_string(s) +
                                  " is not positive");
  }
  PortfolioWeights out;
  out.values.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.values[i] = w[i] / s;
  out.normalized = true;
  return out;
}

namespace {

void for_each_composition(int n, int m, Vec& scratch, int pos, int left,
                          const std::function<void(const Vec&)>& fn) {
  if (pos == n - 1) {
    scratch[static_cast<std::size_t>(pos)] = left;
    fn(scratch);
    return;
  }
  for (int k = 0; k <= left; ++k) {
    scratch[static_cast<std::size_t>(pos)] = k;
    for_each_composition(n, m, scratch, pos + 1, left - k, fn);
  }
}

}  // namespace

PortfolioWeights grid_oracle(const ExcessModel& model, double step) {
  const int n = static_cast<int>(model.e.size());
  if (n > 4) {
    throw DimensionTooLarge("grid_oracle: " + std::to_string(n) +
                            " assets; the exhaustive grid supports at most 4");
  }
  if (!(step > 0.0) || step > 1.0) {
    throw ValidationError("grid_oracle: step must lie in (0, 1]");
  }
  const int m = static_cast<int>(std::lround(1.0 / step));
  if (m < 1) throw ValidationError("grid_oracle: step too coarse");

  Vec best;
  double best_sharpe = -std::numeric_limits<double>::infinity();
  Vec counts(static_cast<std::size_t>(n), 0.0);
  Vec w(static_cast<std::size_t>(n), 0.0);
  for_each_composition(n, m, counts, 0, m, [&](const Vec& k) {
    for (std::size_t i = 0; i < k.size(); ++i) {
      w[i] = k[i] / static_cast<double>(m);
    }
    const double s = sharpe_ratio(w, model);
    if (s > best_sharpe) {
      best_sharpe = s;
      best = w;
    }
  });

  PortfolioWeights out;
  out.labels = model.labels;
  out.values = std::move(best);
  out.normalized = true;
  return out;
}

}  // namespace portopt::qpref
