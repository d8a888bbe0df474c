#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "portopt/errors.hpp"

namespace portopt {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double sum(const Vec& v);
double norm_inf(const Vec& v);
double norm_l1(const Vec& v);

/// Dense symmetric matrix, row-major. Construction validates squareness,
/// finite entries, and symmetry to 1e-12 relative to the largest magnitude.
class SymMatrix {
 public:
  SymMatrix() = default;
  SymMatrix(int dim, Vec data);  // data.size() == dim*dim

  static SymMatrix identity(int dim, double scale = 1.0);

  int dim() const noexcept { return dim_; }
  double operator()(int i, int j) const { return data_[idx(i, j)]; }

  Vec multiply(const Vec& x) const;
  double quad_form(const Vec& x) const;  // x^T S x
  double max_diag() const;
  double norm_inf() const;  // max row absolute sum

  /// Principal submatrix on the given (distinct, in-range) indices, in order.
  SymMatrix submatrix(const std::vector<int>& indices) const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(j);
  }
  int dim_ = 0;
  Vec data_;
};

/// Lower-triangular Cholesky factor L with S = L L^T.
class CholFactor {
 public:
  int dim() const noexcept { return dim_; }
  double lower(int i, int j) const;  // zero above the diagonal

  /// Solves S x = b via forward then back substitution.
  Vec solve(const Vec& b) const;

 private:
  friend CholFactor cholesky(const SymMatrix& s);
  int dim_ = 0;
  Vec l_;  // row-major, lower triangle populated
};

/// Factors a positive definite matrix. Throws NotPositiveDefinite, carrying
/// the pivot index, when a pivot is <= 1e-12 * max diagonal of the input.
CholFactor cholesky(const SymMatrix& s);

Vec solve_pd(const SymMatrix& s, const Vec& b);

/// Standard normal density and distribution function. The CDF is evaluated
/// through erfc, so it stays accurate far into the tails.
double std_normal_pdf(double x);
double std_normal_cdf(double x);

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance tol.
/// Accepts a panel when the two-half refinement agrees within 15*tol and
/// applies the Richardson correction; recursion splits tol in half per side.
/// Throws NoConvergence past recursion depth 60.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

/// Deterministic random stream (splitmix64 core). Identical seeds give
/// identical sequences on every platform. Normal variates come from the
/// Marsaglia polar method; the spare deviate is cached, so a stream is
/// single-owner mutable state. For concurrent or chunked work, derive fresh
/// streams as seed + chunk index instead of sharing one.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double next_uniform();  // [0, 1)
  double next_normal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Vec sample_std_normals(RngStream& rng, std::size_t n);

}  // namespace portopt
