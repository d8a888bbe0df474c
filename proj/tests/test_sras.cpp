#include <doctest.h>

#include <cmath>

#include "portopt/bench.hpp"
#include "portopt/qpref.hpp"
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

ExcessModel identity_model() {
  ExcessModel m;
  m.labels = {"X", "Y"};
  m.e = {0.01, 0.05};
  m.sigma = SymMatrix::identity(2);
  m.benchmark = 0.0;
  m.has_positive_excess = true;
  return m;
}

}  // namespace

TEST_CASE("starting index maximizes excess per unit volatility") {
  CHECK(sras::initial_index(golden_model()) == 0);   // 0.25 vs 0.1333
  CHECK(sras::initial_index(identity_model()) == 1); // 0.01 vs 0.05

  ExcessModel tie;
  tie.labels = {"X", "Y"};
  tie.e = {0.05, 0.05};
  tie.sigma = SymMatrix::identity(2);
  tie.has_positive_excess = true;
  CHECK(sras::initial_index(tie) == 0);  // ties resolve to the lowest index

  ExcessModel none;
  none.labels = {"X"};
  none.e = {-0.01};
  none.sigma = SymMatrix::identity(1);
  none.has_positive_excess = false;
  CHECK_THROWS_AS(sras::initial_index(none), NoPositiveExcess);
  CHECK_THROWS_AS(sras::solve(none), NoPositiveExcess);
}

TEST_CASE("solver reproduces the closed-form interior optimum") {
  const sras::SolveResult res = sras::solve(golden_model());
  CHECK(res.weights.values[0] == doctest::Approx(0.9705882352941176).epsilon(1e-12));
  CHECK(res.weights.values[1] == doctest::Approx(0.029411764705882335).epsilon(1e-9));
  CHECK(res.sharpe == doctest::Approx(0.25018511664883786).epsilon(1e-13));
  CHECK(res.kkt.max_violation <= 1e-10);
  CHECK(sum(res.weights.values) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sras::verify_trace(res.trace, 2).ok());
}

TEST_CASE("solver pins assets that should not be held") {
  ExcessModel m;
  m.labels = {"X", "Y"};
  m.e = {0.05, -0.01};
  m.sigma = SymMatrix(2, Vec{0.04, 0.0, 0.0, 0.09});
  m.benchmark = 0.0;
  m.has_positive_excess = true;

  const sras::SolveResult res = sras::solve(m);
  CHECK(res.weights.values[0] == 1.0);
  CHECK(res.weights.values[1] == 0.0);
  CHECK(res.iterations == 1);  // the start singleton is already optimal
  CHECK(res.kkt.max_violation <= 1e-12);
  REQUIRE(res.trace.states.size() == 1);
  CHECK(res.trace.states[0].kind == sras::StepKind::Terminate);
  // The recorded iterate is unnormalized (w0 = e0/sigma00 = 1.25 on the start
  // singleton) and grad S scales by 1/c under w -> c w, so the state dual is
  // 0.05/1.25. The report at the normalized weights carries the plain value.
  CHECK(res.trace.states[0].duals[1] == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(res.kkt.duals[1] == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("solver releases a pinned asset when its dual is negative") {
  const sras::SolveResult res = sras::solve(identity_model());
  // identity covariance: optimum is proportional to e
  CHECK(res.weights.values[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(res.weights.values[1] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(res.iterations == 3);  // release, full step, terminate

  REQUIRE(res.trace.states.size() == 3);
  CHECK(res.trace.states[0].kind == sras::StepKind::Release);
  CHECK(res.trace.states[0].changed_index == 0);
  CHECK(res.trace.states[1].kind == sras::StepKind::Move);
  CHECK(res.trace.states[1].alpha == 1.0);
  CHECK(res.trace.states[1].changed_index == -1);
  CHECK(res.trace.states[2].kind == sras::StepKind::Terminate);

  const sras::TraceVerification v = sras::verify_trace(res.trace, 2);
  CHECK(v.ok());
}

TEST_CASE("one-asset model is solved in a single pass") {
  ExcessModel m;
  m.labels = {"X"};
  m.e = {0.05};
  m.sigma = SymMatrix(1, Vec{0.04});
  m.has_positive_excess = true;
  const sras::SolveResult res = sras::solve(m);
  CHECK(res.weights.values[0] == 1.0);
  CHECK(res.sharpe == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(res.iterations == 1);
}

TEST_CASE("iteration cap surfaces the best iterate honestly") {
  try {
    sras::solve(identity_model(), 1e-10, 1);
    FAIL("expected SrasIterationLimit");
  } catch (const sras::SrasIterationLimit& ex) {
    CHECK(ex.code() == "IterationLimit");
    const sras::SolveResult& partial = ex.result();
    CHECK(partial.trace.states.size() == 1);
    CHECK(partial.weights.normalized);
    CHECK(sum(partial.weights.values) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(partial.iterations == 1);
  }
}

TEST_CASE("random instances satisfy KKT, match the QP path, and verify traces") {
  int releases = 0;
  int blocked_moves = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);
    const ExcessModel m = bench::random_instance(n, 9000 + seed);
    const sras::SolveResult res = sras::solve(m);

    CHECK(res.kkt.max_violation <= 1e-8);
    CHECK(sum(res.weights.values) == doctest::Approx(1.0).epsilon(1e-12));
    for (double w : res.weights.values) CHECK(w >= 0.0);

    const sras::TraceVerification v = sras::verify_trace(res.trace, n);
    CHECK(v.feasible);
    CHECK(v.monotone);
    CHECK(v.strict_windows);
    CHECK(v.releases_valid);
    CHECK(v.blocking_valid);

    for (const auto& st : res.trace.states) {
      if (st.kind == sras::StepKind::Release) ++releases;
      if (st.kind == sras::StepKind::Move && st.changed_index >= 0) ++blocked_moves;
    }
  }
  // the sample must actually exercise both event kinds
  CHECK(releases > 0);
  CHECK(blocked_moves > 0);
}

TEST_CASE("trace verifier rejects fabricated traces") {
  sras::SolverTrace t;
  sras::ActiveSetState s0;
  s0.iteration = 0;
  s0.w = {0.5, 0.0};
  s0.positive = {0};
  s0.working = {1};
  s0.x = {0.5, 0.0};
  s0.p = {0.0, 0.0};
  s0.kind = sras::StepKind::Move;
  s0.alpha = 1.0;
  s0.changed_index = -1;
  sras::ActiveSetState s1 = s0;
  s1.iteration = 1;

  SUBCASE("decreasing sharpe fails monotonicity") {
    t.states = {s0, s1};
    t.sharpe_per_iteration = {0.5, 0.4};
    const auto v = sras::verify_trace(t, 2);
    CHECK_FALSE(v.monotone);
  }

  SUBCASE("flat long window fails strictness") {
    sras::ActiveSetState s2 = s0;
    s2.iteration = 2;
    t.states = {s0, s1, s2};
    t.sharpe_per_iteration = {0.5, 0.5, 0.5};
    const auto v = sras::verify_trace(t, 2);
    CHECK(v.monotone);
    CHECK_FALSE(v.strict_windows);
  }

  SUBCASE("negative weight fails feasibility") {
    s0.w = {0.5, -0.1};
    s0.working = {};
    s0.positive = {0, 1};
    t.states = {s0};
    t.sharpe_per_iteration = {0.5};
    CHECK_FALSE(sras::verify_trace(t, 2).feasible);
  }

  SUBCASE("nonzero weight on the working set fails feasibility") {
    s0.w = {0.5, 0.1};
    t.states = {s0};
    t.sharpe_per_iteration = {0.5};
    CHECK_FALSE(sras::verify_trace(t, 2).feasible);
  }

  SUBCASE("release without a negative dual is invalid") {
    s0.kind = sras::StepKind::Release;
    s0.changed_index = 1;
    s0.duals = {0.0, 0.02};
    t.states = {s0};
    t.sharpe_per_iteration = {0.5};
    CHECK_FALSE(sras::verify_trace(t, 2).releases_valid);
  }

  SUBCASE("blocking step with a full step length is invalid") {
    s0.kind = sras::StepKind::Move;
    s0.alpha = 1.0;
    s0.changed_index = 0;
    t.states = {s0};
    t.sharpe_per_iteration = {0.5};
    CHECK_FALSE(sras::verify_trace(t, 2).blocking_valid);
  }
}

TEST_CASE("sharpe is nondecreasing along every recorded run") {
  for (std::uint64_t seed : {101u, 202u, 303u}) {
    const ExcessModel m = bench::random_instance(12, seed);
    const sras::SolveResult res = sras::solve(m);
    const auto& s = res.trace.sharpe_per_iteration;
    REQUIRE(!s.empty());
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      CHECK(s[i + 1] >= s[i] - 1e-12);
    }
    // the terminal value is the best value seen
    CHECK(res.sharpe == doctest::Approx(s.back()).epsilon(1e-12));
  }
}
