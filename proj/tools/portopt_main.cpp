#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "portopt/bench.hpp"
#include "portopt/market.hpp"
#include "portopt/omega.hpp"
#include "portopt/qpref.hpp"
#include "portopt/sharpe.hpp"
#include "portopt/sras.hpp"
#include "portopt/sweep.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

json base_report(const std::string& command) {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

portopt::omega::OmegaMethod parse_method(const std::string& name) {
  using portopt::omega::OmegaMethod;
  if (name == "quadrature") return OmegaMethod::Quadrature;
  if (name == "partial-moment") return OmegaMethod::PartialMoment;
  if (name == "monte-carlo") return OmegaMethod::MonteCarlo;
  if (name == "closed-form") return OmegaMethod::ClosedForm;
  throw portopt::ValidationError("unknown method '" + name + "'");
}

const char* method_name(portopt::omega::OmegaMethod m) {
  using portopt::omega::OmegaMethod;
  switch (m) {
    case OmegaMethod::Quadrature: return "quadrature";
    case OmegaMethod::PartialMoment: return "partial-moment";
    case OmegaMethod::MonteCarlo: return "monte-carlo";
    case OmegaMethod::ClosedForm: return "closed-form";
  }
  return "unknown";
}

struct OptimizeArgs {
  std::string prices;
  double benchmark = 0.0;
  std::string solver = "sras";
  bool allow_short = false;
  double tol = 1e-10;
  int max_iter = 0;  // 0 = default cap of 3 n^2
};

int run_optimize(const OptimizeArgs& a) {
  json report = base_report("optimize");
  const portopt::PriceHistory history = portopt::load_prices(a.prices);
  const portopt::ReturnsMatrix returns = portopt::arithmetic_returns(history);
  const portopt::MomentEstimate moments = portopt::estimate_moments(returns);
  const portopt::ExcessModel model = portopt::excess_model(moments, a.benchmark);
  const int n = static_cast<int>(model.e.size());

  report["options"] = {
      {"prices", a.prices},       {"benchmark", a.benchmark},
      {"solver", a.solver},       {"allow_short", a.allow_short},
      {"tol", a.tol},             {"max_iter", a.max_iter > 0 ? a.max_iter : 3 * n * n},
      {"observations", returns.observations()},
  };

  json result;
  result["labels"] = model.labels;
  if (a.allow_short) {
    const portopt::PortfolioWeights w = portopt::unconstrained_optimum(model);
    result["weights"] = w.values;
    result["sharpe"] = portopt::sharpe_ratio(w.values, model);
    result["solver"] = "closed-form";
    const double gnorm = portopt::norm_inf(portopt::sharpe_gradient(w.values, model));
    result["gradient_norm"] = gnorm;
  } else if (a.solver == "sras") {
    const portopt::sras::SolveResult res = portopt::sras::solve(model, a.tol, a.max_iter);
    result["weights"] = res.weights.values;
    result["sharpe"] = res.sharpe;
    result["iterations"] = res.iterations;
    result["kkt_max_violation"] = res.kkt.max_violation;
    result["solver"] = "sras";
  } else if (a.solver == "qp") {
    portopt::qpref::QpInstance inst{model.sigma, model.e,
                                    portopt::qpref::default_z(model.e)};
    portopt::qpref::QpTrace trace;
    const portopt::PortfolioWeights w =
        portopt::qpref::solve_qp(inst, a.tol, 200000, &trace);
    result["weights"] = w.values;
    result["sharpe"] = portopt::sharpe_ratio(w.values, model);
    result["iterations"] = trace.iterations;
    result["kkt_max_violation"] = portopt::kkt_report(w.values, model).max_violation;
    result["solver"] = "qp";
    result["z"] = inst.z;
  } else {
    throw portopt::ValidationError("unknown solver '" + a.solver +
                                   "' (expected sras or qp)");
  }
  report["result"] = result;
  emit(report);
  return 0;
}

struct OmegaArgs {
  std::string dist = "normal";
  double mean = 0.0;
  double stddev = 1.0;
  double skew = 0.0;
  double threshold = 0.0;
  std::string method = "quadrature";
  double tol = 1e-10;
  std::uint64_t samples = 10000000;
  std::uint64_t seed = 0;
};

int run_omega(const OmegaArgs& a) {
  json report = base_report("omega");
  report["options"] = {
      {"dist", a.dist},     {"mean", a.mean},       {"stddev", a.stddev},
      {"skew", a.skew},     {"threshold", a.threshold},
      {"method", a.method}, {"tol", a.tol},         {"samples", a.samples},
      {"seed", a.seed},
  };

  const portopt::omega::OmegaMethod method = parse_method(a.method);
  portopt::omega::ReturnDistribution dist;
  json dist_json;
  if (a.dist == "normal") {
    if (a.skew != 0.0) {
      throw portopt::ValidationError("--skew is only valid with --dist skewnormal");
    }
    dist = portopt::omega::NormalDist{a.mean, a.stddev};
    dist_json = {{"family", "normal"}, {"mean", a.mean}, {"stddev", a.stddev}};
  } else if (a.dist == "skewnormal") {
    const portopt::skewnorm::SkewNormalParams p =
        portopt::skewnorm::from_moments(a.mean, a.stddev, a.skew);
    dist = p;
    dist_json = {{"family", "skewnormal"}, {"mean", a.mean},
                 {"stddev", a.stddev},     {"skewness", a.skew},
                 {"epsilon", p.epsilon},   {"omega_scale", p.omega},
                 {"alpha", p.alpha},       {"delta", p.delta}};
  } else {
    throw portopt::ValidationError("unknown distribution '" + a.dist +
                                   "' (expected normal or skewnormal)");
  }

  portopt::omega::OmegaEstimate est;
  switch (method) {
    case portopt::omega::OmegaMethod::Quadrature:
      est = portopt::omega::omega_cdf_ratio(dist, a.threshold, a.tol);
      break;
    case portopt::omega::OmegaMethod::PartialMoment:
      est = portopt::omega::omega_partial_moment(dist, a.threshold, a.tol);
      break;
    case portopt::omega::OmegaMethod::MonteCarlo:
      est = portopt::omega::omega_monte_carlo(dist, a.threshold, a.samples, a.seed);
      break;
    case portopt::omega::OmegaMethod::ClosedForm:
      if (a.dist != "normal") {
        throw portopt::ValidationError(
            "--method closed-form requires --dist normal");
      }
      est = portopt::omega::omega_elliptical_normal(a.mean, a.stddev, a.threshold);
      break;
  }

  report["result"] = {
      {"omega", est.value},
      {"omega_paper", est.value - 2.0},
      {"error_estimate", est.error_estimate},
      {"method", method_name(est.method)},
      {"distribution", dist_json},
  };
  emit(report);
  return 0;
}

struct SweepArgs {
  double mean = 0.1;
  double stddev = 0.3;
  double threshold = 0.01;
  double gamma_min = -0.99;
  double gamma_max = 0.99;
  double step = 0.01;
  std::string method = "quadrature";
  double tol = 1e-10;
  std::uint64_t samples = 10000000;
  std::uint64_t seed = 0;
  std::string out = "sweep.csv";
};

int run_sweep(const SweepArgs& a) {
  json report = base_report("sweep-skew");
  report["options"] = {
      {"mean", a.mean},           {"stddev", a.stddev},
      {"threshold", a.threshold}, {"gamma_min", a.gamma_min},
      {"gamma_max", a.gamma_max}, {"step", a.step},
      {"method", a.method},       {"tol", a.tol},
      {"samples", a.samples},     {"seed", a.seed},
      {"out", a.out},
  };

  portopt::skewnorm::SweepSpec spec;
  spec.mean = a.mean;
  spec.stddev = a.stddev;
  spec.threshold = a.threshold;
  spec.gamma_min = a.gamma_min;
  spec.gamma_max = a.gamma_max;
  spec.gamma_step = a.step;
  spec.method = parse_method(a.method);
  spec.tol = a.tol;
  spec.n_samples = a.samples;
  spec.seed = a.seed;

  const std::vector<portopt::skewnorm::SweepRow> rows =
      portopt::skewnorm::sweep_skewness(spec);
  portopt::skewnorm::write_sweep_csv(rows, a.out);

  report["result"] = {
      {"rows", rows.size()},
      {"path", a.out},
      {"omega_first", rows.front().omega},
      {"omega_last", rows.back().omega},
      {"sharpe", rows.front().sharpe},
  };
  emit(report);
  return 0;
}

struct BenchArgs {
  int assets = 10;
  int instances = 20;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::string out;
};

int run_bench(const BenchArgs& a) {
  json report = base_report("bench");
  report["options"] = {
      {"assets", a.assets}, {"instances", a.instances},
      {"seed", a.seed},     {"tol", a.tol},
      {"out", a.out},
  };
  const portopt::bench::BenchResult res =
      portopt::bench::run(a.assets, a.instances, a.seed, a.tol);
  if (!a.out.empty()) portopt::bench::write_bench_csv(res, a.out);

  double total_as = 0.0, total_qp = 0.0;
  for (const auto& r : res.records) {
    total_as += r.ms_active_set;
    total_qp += r.ms_qp;
  }
  report["result"] = {
      {"n_assets", res.n_assets},
      {"instances", res.records.size()},
      {"max_weight_gap", res.max_weight_gap},
      {"max_sharpe_gap", res.max_sharpe_gap},
      {"total_ms_active_set", total_as},
      {"total_ms_qp", total_qp},
  };
  if (!a.out.empty()) report["result"]["path"] = a.out;
  emit(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-only Sharpe optimization and Omega evaluation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  OptimizeArgs opt;
  CLI::App* c_opt = app.add_subcommand(
      "optimize", "Maximize the Sharpe ratio of excess returns from a price CSV");
  c_opt->add_option("--prices", opt.prices, "Price CSV (date,<label>,...)")
      ->required();
  c_opt->add_option("--benchmark", opt.benchmark, "Benchmark return level L")
      ->required();
  c_opt->add_option("--solver", opt.solver, "sras | qp")
      ->check(CLI::IsMember({"sras", "qp"}))
      ->capture_default_str();
  c_opt->add_flag("--allow-short", opt.allow_short,
                  "Drop the long-only constraint and use the closed form");
  c_opt->add_option("--tol", opt.tol, "Convergence tolerance")->capture_default_str();
  c_opt->add_option("--max-iter", opt.max_iter, "Iteration cap (0 = 3 n^2)")
      ->capture_default_str();

  OmegaArgs om;
  CLI::App* c_om = app.add_subcommand("omega", "Evaluate the Omega measure");
  c_om->add_option("--dist", om.dist, "normal | skewnormal")
      ->check(CLI::IsMember({"normal", "skewnormal"}))
      ->capture_default_str();
  c_om->add_option("--mean", om.mean, "Mean return")->required();
  c_om->add_option("--stddev", om.stddev, "Return standard deviation")->required();
  c_om->add_option("--skew", om.skew, "Skewness (skewnormal only)")
      ->capture_default_str();
  c_om->add_option("--threshold", om.threshold, "Threshold level L")->required();
  c_om->add_option("--method", om.method,
                   "quadrature | partial-moment | monte-carlo | closed-form")
      ->check(CLI::IsMember(
          {"quadrature", "partial-moment", "monte-carlo", "closed-form"}))
      ->capture_default_str();
  c_om->add_option("--tol", om.tol, "Quadrature tolerance")->capture_default_str();
  c_om->add_option("--samples", om.samples, "Monte Carlo sample count")
      ->capture_default_str();
  c_om->add_option("--seed", om.seed, "Monte Carlo seed")->capture_default_str();

  SweepArgs sw;
  CLI::App* c_sw = app.add_subcommand(
      "sweep-skew", "Omega across skewness at fixed mean and stddev");
  c_sw->add_option("--mean", sw.mean, "Mean return")->capture_default_str();
  c_sw->add_option("--stddev", sw.stddev, "Return standard deviation")
      ->capture_default_str();
  c_sw->add_option("--threshold", sw.threshold, "Threshold level L")
      ->capture_default_str();
  c_sw->add_option("--gamma-min", sw.gamma_min, "Lowest skewness")
      ->capture_default_str();
  c_sw->add_option("--gamma-max", sw.gamma_max, "Highest skewness")
      ->capture_default_str();
  c_sw->add_option("--step", sw.step, "Skewness grid step")->capture_default_str();
  c_sw->add_option("--method", sw.method,
                   "quadrature | partial-moment | monte-carlo")
      ->check(CLI::IsMember({"quadrature", "partial-moment", "monte-carlo"}))
      ->capture_default_str();
  c_sw->add_option("--tol", sw.tol, "Quadrature tolerance")->capture_default_str();
  c_sw->add_option("--samples", sw.samples, "Monte Carlo samples per row")
      ->capture_default_str();
  c_sw->add_option("--seed", sw.seed, "Monte Carlo base seed")->capture_default_str();
  c_sw->add_option("--out", sw.out, "Output CSV path")->capture_default_str();

  BenchArgs be;
  CLI::App* c_be = app.add_subcommand(
      "bench", "Cross-check the active-set solver against the QP path");
  c_be->add_option("--assets", be.assets, "Assets per instance")->required();
  c_be->add_option("--instances", be.instances, "Instance count")->required();
  c_be->add_option("--seed", be.seed, "Instance seed")->capture_default_str();
  c_be->add_option("--tol", be.tol, "Solver tolerance")->capture_default_str();
  c_be->add_option("--out", be.out, "Optional per-instance CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_opt->parsed()) return run_optimize(opt);
    if (c_om->parsed()) return run_omega(om);
    if (c_sw->parsed()) return run_sweep(sw);
    if (c_be->parsed()) return run_bench(be);
  } catch (const portopt::Error& ex) {
    json report = base_report("error");
    report["error"] = {{"code", ex.code()}, {"message", ex.what()}};
    emit(report);
    return 1;
  } catch (const std::exception& ex) {
    json report = base_report("error");
    report["error"] = {{"code", "InternalError"}, {"message", ex.what()}};
    emit(report);
    return 1;
  }
  return 0;
}
