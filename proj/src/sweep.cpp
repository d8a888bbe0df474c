#include "portopt/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace portopt::skewnorm {

std::vector<SweepRow> sweep_skewness(const SweepSpec& spec) {
  if (!(spec.gamma_step > 0.0)) {
    throw ValidationError("sweep: gamma_step must be positive");
  }
  if (spec.gamma_min > spec.gamma_max) {
    throw ValidationError("sweep: gamma_min must not exceed gamma_max");
  }
  if (std::abs(spec.gamma_min) > 0.99 || std::abs(spec.gamma_max) > 0.99) {
    throw SkewnessOutOfRange("sweep: gamma range must lie within [-0.99, 0.99]");
  }
  if (spec.method == omega::OmegaMethod::ClosedForm) {
    throw ValidationError("sweep: the normal closed form cannot price skewed returns");
  }

  std::vector<SweepRow> rows;
  const double span = spec.gamma_max - spec.gamma_min;
  const int count = static_cast<int>(std::floor(span / spec.gamma_step + 0.5)) + 1;
  for (int k = 0; k < count; ++k) {
    double g = spec.gamma_min + k * spec.gamma_step;
    if (std::abs(g) < 1e-9 * spec.gamma_step) g = 0.0;
    if (g > spec.gamma_max + 0.5 * spec.gamma_step) break;

    const SkewNormalParams params = from_moments(spec.mean, spec.stddev, g);
    const omega::ReturnDistribution dist = params;
    omega::OmegaEstimate est;
    switch (spec.method) {
      case omega::OmegaMethod::Quadrature:
        est = omega::omega_cdf_ratio(dist, spec.threshold, spec.tol);
        break;
      case omega::OmegaMethod::PartialMoment:
        est = omega::omega_partial_moment(dist, spec.threshold, spec.tol);
        break;
      case omega::OmegaMethod::MonteCarlo:
        est = omega::omega_monte_carlo(dist, spec.threshold, spec.n_samples,
                                       spec.seed + static_cast<std::uint64_t>(k));
        break;
      case omega::OmegaMethod::ClosedForm:
        break;  // rejected above
    }

    SweepRow row;
    row.gamma1 = g;
    row.omega = est.value;
    row.omega_minus_two = est.value - 2.0;
    row.sharpe = (spec.mean - spec.threshold) / spec.stddev;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv_text(const std::vector<SweepRow>& rows) {
  std::string out = "gamma1,omega,omega_paper,sharpe\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g\n", r.gamma1,
                  r.omega, r.omega_minus_two, r.sharpe);
    out += buf;
  }
  return out;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("sweep: cannot open '" + path + "' for writing");
  out << sweep_csv_text(rows);
  if (!out) throw ValidationError("sweep: write to '" + path + "' failed");
}

}  // namespace portopt::skewnorm
