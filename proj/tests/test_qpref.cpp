#include <doctest.h>

#include <cmath>

#include "portopt/bench.hpp"
#include "portopt/qpref.hpp"
#include "portopt/sharpe.hpp"
#include "portopt/sras.hpp"

using namespace portopt;

namespace {

ExcessModel golden_model() {
  ExcessModel m;
  m.labels = {"X", "Y"};
  m.e = {0.05, 0.04};
  m.sigma = SymMatrix(2, Vec{0.04, 0.03, 0.03, 0.09});
  m.benchmark = 0.01;
  m.has_positive_excess = true;
  return m;
}

}  // namespace

TEST_CASE("default target level prefers the excess sum") {
  CHECK(qpref::default_z({0.05, 0.04}) == doctest::Approx(0.09).epsilon(1e-15));
  CHECK(qpref::default_z({0.05, -0.2}) == 0.05);  // sum not positive, fall back to max
  CHECK_THROWS_AS(qpref::default_z({-0.1, -0.2}), NoPositiveExcess);
  CHECK_THROWS_AS(qpref::default_z(Vec{}), ValidationError);
}

TEST_CASE("projection onto the constrained simplex is exact on known cases") {
  // e = (1,1), z = 1 reduces to the probability-simplex projection
  const Vec w1 = qpref::project({0.8, 0.4}, {1.0, 1.0}, 1.0);
  CHECK(w1[0] == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(w1[1] == doctest::Approx(0.3).epsilon(1e-10));

  const Vec w2 = qpref::project({2.0, -1.0}, {1.0, 1.0}, 1.0);
  CHECK(w2[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(w2[1] == 0.0);
}

TEST_CASE("projection satisfies the constraints and is idempotent") {
  RngStream rng(33);
  const Vec e{0.05, 0.04, -0.01, 0.08};
  const double z = qpref::default_z(e);
  for (int trial = 0; trial < 200; ++trial) {
    Vec v(4);
    for (double& x : v) x = 4.0 * rng.next_uniform() - 2.0;
    const Vec w = qpref::project(v, e, z);
    for (double x : w) CHECK(x >= 0.0);
    CHECK(std::abs(dot(w, e) - z) <= 1e-10 * std::max(1.0, std::abs(z)));

    const Vec w2 = qpref::project(w, e, z);
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(std::abs(w2[i] - w[i]) <= 1e-9 * std::max(1.0, std::abs(w[i])));
    }
  }
}

TEST_CASE("qp solve matches the closed form on the interior instance") {
  const ExcessModel m = golden_model();
  qpref::QpInstance inst{m.sigma, m.e, qpref::default_z(m.e)};
  qpref::QpTrace trace;
  const PortfolioWeights w = qpref::solve_qp(inst, 1e-10, 200000, &trace);

  CHECK(w.values[0] == doctest::Approx(0.9705882352941176).epsilon(1e-7));
  CHECK(w.values[1] == doctest::Approx(0.029411764705882335).epsilon(1e-4));
  CHECK(sum(w.values) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sharpe_ratio(w.values, m) == doctest::Approx(0.25018511664883786).epsilon(1e-10));

  CHECK(trace.iterations > 0);
  REQUIRE(!trace.objective.empty());
  for (std::size_t i = 0; i + 1 < trace.objective.size(); ++i) {
    CHECK(trace.objective[i + 1] <= trace.objective[i] + 1e-15);
  }
  CHECK(trace.max_feasibility_gap <= 1e-10 * std::max(1.0, inst.z));
  CHECK(trace.min_weight == 0.0);  // projection clamps, iterates never go negative
}

TEST_CASE("qp solve validates its inputs") {
  const ExcessModel m = golden_model();
  qpref::QpInstance bad{m.sigma, m.e, -1.0};
  CHECK_THROWS_AS(qpref::solve_qp(bad), ValidationError);

  qpref::QpInstance neg{SymMatrix::identity(2), Vec{-0.1, -0.2}, 0.05};
  CHECK_THROWS_AS(qpref::solve_qp(neg), NoPositiveExcess);

  qpref::QpInstance mismatch{SymMatrix::identity(3), Vec{0.1, 0.2}, 0.3};
  CHECK_THROWS_AS(qpref::solve_qp(mismatch), ValidationError);
}

TEST_CASE("grid oracle finds the best lattice portfolio") {
  const ExcessModel m = golden_model();
  const PortfolioWeights g = qpref::grid_oracle(m, 0.01);
  CHECK(g.values[0] == doctest::Approx(0.97).epsilon(1e-12));
  CHECK(g.values[1] == doctest::Approx(0.03).epsilon(1e-12));

  // the lattice cannot beat the true optimum
  const sras::SolveResult res = sras::solve(m);
  CHECK(sharpe_ratio(g.values, m) <= res.sharpe + 1e-12);

  ExcessModel big;
  big.labels = {"a", "b", "c", "d", "e"};
  big.e = Vec(5, 0.05);
  big.sigma = SymMatrix::identity(5);
  big.has_positive_excess = true;
  CHECK_THROWS_AS(qpref::grid_oracle(big, 0.1), DimensionTooLarge);
  CHECK_THROWS_AS(qpref::grid_oracle(m, 0.0), ValidationError);
}

TEST_CASE("qp path and active-set path agree on random instances") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);
    const ExcessModel m = bench::random_instance(n, 4000 + seed);
    const sras::SolveResult as = sras::solve(m);
    qpref::QpInstance inst{m.sigma, m.e, qpref::default_z(m.e)};
    const PortfolioWeights qp = qpref::solve_qp(inst);
    for (std::size_t i = 0; i < qp.values.size(); ++i) {
      CHECK(std::abs(qp.values[i] - as.weights.values[i]) <= 1e-6);
    }
  }
}
