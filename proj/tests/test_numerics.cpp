#include <doctest.h>

#include <cmath>
#include <vector>

#include "portopt/numerics.hpp"

using namespace portopt;

TEST_CASE("vector helpers") {
  const Vec a{1.0, -2.0, 3.0};
  const Vec b{0.5, 0.25, -1.0};
  CHECK(dot(a, b) == doctest::Approx(1.0 * 0.5 - 2.0 * 0.25 - 3.0).epsilon(1e-15));
  CHECK(sum(a) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(norm_inf(a) == 3.0);
  CHECK(norm_l1(a) == 6.0);
  CHECK_THROWS_AS(dot(a, Vec{1.0}), ValidationError);
}

TEST_CASE("symmetric matrix validation") {
  CHECK_THROWS_AS(SymMatrix(2, Vec{1.0, 2.0, 3.0}), ValidationError);
  CHECK_THROWS_AS(SymMatrix(2, Vec{1.0, 1.0, 2.0, 1.0}), ValidationError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(SymMatrix(2, Vec{1.0, 0.0, 0.0, inf}), ValidationError);

  const SymMatrix s(2, Vec{4.0, 2.0, 2.0, 3.0});
  CHECK(s(0, 1) == 2.0);
  CHECK(s.max_diag() == 4.0);
  CHECK(s.norm_inf() == 6.0);
  const Vec y = s.multiply({1.0, -1.0});
  CHECK(y[0] == doctest::Approx(2.0));
  CHECK(y[1] == doctest::Approx(-1.0));
  CHECK(s.quad_form({1.0, -1.0}) == doctest::Approx(3.0));

  const SymMatrix sub = s.submatrix({1});
  CHECK(sub.dim() == 1);
  CHECK(sub(0, 0) == 3.0);
}

TEST_CASE("cholesky factors and solves a PD system") {
  const SymMatrix s(3, Vec{4.0, 2.0, 1.0, 2.0, 5.0, 3.0, 1.0, 3.0, 6.0});
  const CholFactor f = cholesky(s);

  // reconstruction L L^T within 1e-10
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += f.lower(i, k) * f.lower(j, k);
      CHECK(acc == doctest::Approx(s(i, j)).epsilon(1e-10));
    }
  }

  const Vec b{1.0, -2.0, 0.5};
  const Vec x = f.solve(b);
  const Vec r = s.multiply(x);
  for (int i = 0; i < 3; ++i) CHECK(r[static_cast<std::size_t>(i)] == doctest::Approx(b[static_cast<std::size_t>(i)]).epsilon(1e-12));
}

TEST_CASE("cholesky solve matches a hand-checked 2x2 system") {
  const SymMatrix s(2, Vec{0.04, 0.03, 0.03, 0.09});
  const Vec x = solve_pd(s, {0.05, 0.04});
  CHECK(x[0] == doctest::Approx(1.2222222222222223).epsilon(1e-13));
  CHECK(x[1] == doctest::Approx(0.037037037037037014).epsilon(1e-10));
}

TEST_CASE("cholesky reports the failing pivot") {
  try {
    cholesky(SymMatrix(2, Vec{1.0, 1.0, 1.0, 1.0}));
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& ex) {
    CHECK(ex.pivot() == 1);
    CHECK(ex.code() == "NotPositiveDefinite");
  }

  try {
    cholesky(SymMatrix(2, Vec{1.0, 2.0, 2.0, 1.0}));
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& ex) {
    CHECK(ex.pivot() == 1);
  }

  // pivot at the relative threshold 1e-12 * max diagonal
  try {
    cholesky(SymMatrix(2, Vec{1.0, 0.0, 0.0, 1e-13}));
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& ex) {
    CHECK(ex.pivot() == 1);
  }
}

TEST_CASE("standard normal pdf and cdf against frozen references") {
  CHECK(std_normal_pdf(0.0) == doctest::Approx(0.398942280401432678).epsilon(1e-15));
  CHECK(std_normal_pdf(-0.3) == doctest::Approx(0.381387815460524086).epsilon(1e-15));
  CHECK(std_normal_cdf(1.0) == doctest::Approx(0.841344746068542949).epsilon(1e-15));
  CHECK(std_normal_cdf(-0.3) == doctest::Approx(0.382088577811047363).epsilon(1e-15));
  CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-16));

  for (double x : {0.25, 0.5, 1.0, 1.7, 2.9, 3.3, 5.0}) {
    CHECK(std::abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) <= 1e-15);
  }
  CHECK(std_normal_cdf(-8.0) > 0.0);
  CHECK(std_normal_cdf(8.0) < 1.0);
  CHECK(std_normal_cdf(-40.0) == 0.0);
}

TEST_CASE("adaptive quadrature integrates exactly and to tolerance") {
  const double cubic = integrate([](double x) { return x * x * x; }, 0.0, 1.0, 1e-12);
  CHECK(std::abs(cubic - 0.25) <= 1e-15);  // Simpson is exact for cubics

  const double quartic = integrate([](double x) { return x * x * x * x; }, 0.0, 1.0, 1e-12);
  CHECK(std::abs(quartic - 0.2) <= 1e-11);

  const double sine = integrate([](double x) { return std::sin(x); }, 0.0,
                                3.14159265358979323846, 1e-11);
  CHECK(std::abs(sine - 2.0) <= 1e-10);

  const double gauss = integrate([](double x) { return std_normal_pdf(x); },
                                 -8.0, 8.0, 1e-12);
  const double expected = std_normal_cdf(8.0) - std_normal_cdf(-8.0);
  CHECK(std::abs(gauss - expected) <= 1e-10);
}

TEST_CASE("quadrature rejects bad arguments and refuses to fake convergence") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0, 1e-8), ValidationError);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, 0.0), ValidationError);

  // A jump at a point the dyadic refinement never isolates: the panel error
  // and the per-level tolerance shrink at the same rate, so acceptance never
  // triggers and the depth cap must fire.
  auto step_fn = [](double x) { return x < 0.4 ? 0.0 : 1.0; };
  CHECK_THROWS_AS(integrate(step_fn, 0.0, 1.0, 1e-13), NoConvergence);
}

TEST_CASE("random stream is deterministic and seed-sensitive") {
  RngStream a(7), b(7), c(8);
  bool all_equal = true;
  bool any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const double x = a.next_uniform();
    if (x != b.next_uniform()) all_equal = false;
    if (x != c.next_uniform()) any_diff = true;
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_diff);

  RngStream d(42), e(42);
  const Vec z1 = sample_std_normals(d, 1000);
  const Vec z2 = sample_std_normals(e, 1000);
  CHECK(z1 == z2);
}

TEST_CASE("normal deviates have the right first two moments") {
  RngStream rng(1);
  const std::size_t n = 1000000;
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    s1 += z;
    s2 += z * z;
  }
  const double mean = s1 / static_cast<double>(n);
  const double var = s2 / static_cast<double>(n) - mean * mean;
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) <= 4.0 * std::sqrt(2.0 / static_cast<double>(n)));
}
