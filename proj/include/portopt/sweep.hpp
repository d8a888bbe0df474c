#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "portopt/omega.hpp"

namespace portopt::skewnorm {

struct SweepSpec {
  double mean = 0.1;
  double stddev = 0.3;
  double threshold = 0.01;
  double gamma_min = -0.99;
  double gamma_max = 0.99;
  double gamma_step = 0.01;
  omega::OmegaMethod method = omega::OmegaMethod::Quadrature;
  double tol = 1e-10;
  std::uint64_t n_samples = 10000000;
  std::uint64_t seed = 0;
};

struct SweepRow {
  double gamma1 = 0.0;
  double omega = 0.0;
  double omega_minus_two = 0.0;  // the value a sign slip in the identity produces
  double sharpe = 0.0;           // (mean - threshold)/stddev, constant by design
};

/// Omega across skewness, holding mean and stddev fixed so the Sharpe ratio
/// is constant while Omega moves with the third moment. Row k evaluates
/// gamma1 = gamma_min + k * gamma_step (snapped to 0 when within 1e-9 step
/// fractions of it); Monte Carlo rows derive their stream from seed + k.
std::vector<SweepRow> sweep_skewness(const SweepSpec& spec);

/// CSV with header gamma1,omega,omega_paper,sharpe at 10 significant digits.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::string sweep_csv_text(const std::vector<SweepRow>& rows);

}  // namespace portopt::skewnorm
