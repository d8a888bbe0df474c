#include "portopt/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "portopt/qpref.hpp"
#include "portopt/sharpe.hpp"
#include "portopt/sras.hpp"

namespace portopt::bench {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  const auto dt = std::chrono::steady_clock::now() - t0;
  return std::chrono::duration<double, std::milli>(dt).count();
}

}  // namespace

ExcessModel random_instance(int n_assets, std::uint64_t seed) {
  if (n_assets < 1) throw ValidationError("bench: need at least one asset");
  const double L = 0.01;
  RngStream rng(seed);
  const std::size_t n = static_cast<std::size_t>(n_assets);

  Vec mu(n);
  for (int attempt = 0;; ++attempt) {
    double mx = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      mu[i] = -0.05 + 0.2 * rng.next_uniform();
      mx = std::max(mx, mu[i] - L);
    }
    if (mx > 0.0) break;
    if (attempt > 1000) {
      throw ValidationError("bench: failed to sample an instance with positive excess");
    }
  }

  // Sigma = A'A/n + 0.01 I, filled symmetrically.
  std::vector<Vec> a(n, Vec(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = rng.next_normal();
  }
  Vec cov(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += a[k][i] * a[k][j];
      acc /= static_cast<double>(n);
      if (i == j) acc += 0.01;
      cov[i * n + j] = acc;
      cov[j * n + i] = acc;
    }
  }

  ExcessModel m;
  m.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) m.labels.push_back("A" + std::to_string(i));
  m.sigma = SymMatrix(n_assets, std::move(cov));
  m.benchmark = L;
  m.e.resize(n);
  double mx = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    m.e[i] = mu[i] - L;
    mx = std::max(mx, m.e[i]);
  }
  m.has_positive_excess = mx > 0.0;
  return m;
}

BenchResult run(int n_assets, int instances, std::uint64_t seed, double tol) {
  if (instances < 1) throw ValidationError("bench: need at least one instance");
  BenchResult result;
  result.n_assets = n_assets;
  result.records.reserve(static_cast<std::size_t>(instances));

  for (int i = 0; i < instances; ++i) {
    const ExcessModel model = random_instance(n_assets, seed + static_cast<std::uint64_t>(i));

    BenchRecord rec;
    rec.instance = i;

    auto t0 = std::chrono::steady_clock::now();
    const sras::SolveResult as = sras::solve(model, tol);
    rec.ms_active_set = elapsed_ms(t0);
    rec.iters_active_set = as.iterations;
    rec.sharpe_active_set = as.sharpe;

    qpref::QpInstance inst{model.sigma, model.e, qpref::default_z(model.e)};
    qpref::QpTrace trace;
    t0 = std::chrono::steady_clock::now();
    const PortfolioWeights qp = qpref::solve_qp(inst, tol, 200000, &trace);
    rec.ms_qp = elapsed_ms(t0);
    rec.iters_qp = trace.iterations;
    rec.sharpe_qp = sharpe_ratio(qp.values, model);

    double gap = 0.0;
    for (std::size_t j = 0; j < qp.values.size(); ++j) {
      gap = std::max(gap, std::abs(qp.values[j] - as.weights.values[j]));
    }
    rec.weight_gap = gap;

    result.max_weight_gap = std::max(result.max_weight_gap, gap);
    result.max_sharpe_gap = std::max(
        result.max_sharpe_gap, std::abs(rec.sharpe_active_set - rec.sharpe_qp));
    result.records.push_back(rec);
  }
  return result;
}

std::string bench_csv_text(const BenchResult& result) {
  std::string out =
      "instance,sharpe_active_set,sharpe_qp,weight_gap,ms_active_set,ms_qp,"
      "iters_active_set,iters_qp\n";
  char buf[256];
  for (const BenchRecord& r : result.records) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.3e,%.3f,%.3f,%d,%d\n",
                  r.instance, r.sharpe_active_set, r.sharpe_qp, r.weight_gap,
                  r.ms_active_set, r.ms_qp, r.iters_active_set, r.iters_qp);
    out += buf;
  }
  return out;
}

void write_bench_csv(const BenchResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("bench: cannot open '" + path + "' for writing");
  out << bench_csv_text(result);
  if (!out) throw ValidationError("bench: write to '" + path + "' failed");
}

}  // namespace portopt::bench
