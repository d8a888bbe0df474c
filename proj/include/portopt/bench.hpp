#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "portopt/market.hpp"

namespace portopt::bench {

/// Synthetic instance: mu_i ~ U[-0.05, 0.15] (resampled until some asset
/// clears the benchmark L = 0.01), Sigma = A'A/n + 0.01 I with standard
/// normal A, so the covariance is safely positive definite.
ExcessModel random_instance(int n_assets, std::uint64_t seed);

struct BenchRecord {
  int instance = 0;
  double sharpe_active_set = 0.0;
  double sharpe_qp = 0.0;
  double weight_gap = 0.0;  // infinity norm between the two solutions
  double ms_active_set = 0.0;
  double ms_qp = 0.0;
  int iters_active_set = 0;
  int iters_qp = 0;
};

struct BenchResult {
  int n_assets = 0;
  std::vector<BenchRecord> records;
  double max_weight_gap = 0.0;
  double max_sharpe_gap = 0.0;
};

/// Runs both solvers on k random instances of n assets; timings are
/// informational, agreement gaps are the data of interest.
BenchResult run(int n_assets, int instances, std::uint64_t seed,
                double tol = 1e-10);

void write_bench_csv(const BenchResult& result, const std::string& path);
std::string bench_csv_text(const BenchResult& result);

}  // namespace portopt::bench
