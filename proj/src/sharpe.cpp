#include "portopt/sharpe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace portopt {

namespace {

// Variance with the same degeneracy floor used by portfolio_moments.
double variance_checked(const Vec& w, const ExcessModel& model) {
  if (w.size() != model.e.size() ||
      static_cast<int>(w.size()) != model.sigma.dim()) {
    throw ValidationError("sharpe: weight/model size mismatch");
  }
  const double v = model.sigma.quad_form(w);
  const double scale = std::max(1.0, norm_inf(w));
  const double floor = 1e-16 * model.sigma.max_diag() * scale * scale;
  if (!(v > floor)) {
    throw DegeneratePortfolio("sharpe: portfolio variance " +
                              std::to_string(v) +
                              " is not meaningfully positive");
  }
  return v;
}

}  // namespace

double sharpe_ratio(const Vec& w, const ExcessModel& model) {
  const double v = variance_checked(w, model);
  return dot(w, model.e) / std::sqrt(v);
}

Vec sharpe_gradient(const Vec& w, const ExcessModel& model) {
  const double v = variance_checked(w, model);
  const double sig = std::sqrt(v);
  const Vec sw = model.sigma.multiply(w);
  const double we = dot(w, model.e);
  Vec g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    g[i] = model.e[i] / sig - we * sw[i] / (v * sig);
  }
  return g;
}

PortfolioWeights unconstrained_optimum(const ExcessModel& model) {
  const Vec x = solve_pd(model.sigma, model.e);
  const double s = sum(x);
  const double tol = 1e-12 * std::max(1.0, norm_l1(x));
  if (s <= tol) {
    const char* sign = s < 0.0 ? "negative" : "zero";
    throw DegenerateNormalization(
        "unconstrained_optimum: normalizing sum of Sigma^{-1} e is " +
        std::string(sign) + " (" + std::to_string(s) +
        "); the normalized point is not a meaningful optimum");
  }
  PortfolioWeights w;
  w.labels = model.labels;
  w.values.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w.values[i] = x[i] / s;
  w.normalized = true;
  return w;
}

KktReport kkt_report(const Vec& w, const ExcessModel& model, double zero_tol) {
  const Vec g = sharpe_gradient(w, model);
  KktReport r;
  r.duals.assign(w.size(), 0.0);
  r.stationarity_residual.assign(w.size(), 0.0);
  double min_w = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    min_w = std::min(min_w, w[j]);
    if (w[j] <= zero_tol) {
      r.duals[j] = -g[j];
    } else {
      r.stationarity = std::max(r.stationarity, std::abs(g[j]));
    }
    r.stationarity_residual[j] = g[j] + r.duals[j];
    r.dual_negativity = std::max(r.dual_negativity, -r.duals[j]);
  }
  r.dual_negativity = std::max(0.0, r.dual_negativity);
  r.primal_negativity = std::max(0.0, -min_w);
  r.complementarity = std::abs(dot(r.duals, w));
  r.max_violation = std::max({r.stationarity, r.primal_negativity,
                              r.dual_negativity, r.complementarity});
  return r;
}

}  // namespace portopt
