#include "portopt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace portopt {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void require_same_size(const Vec& a, const Vec& b, const char* where) {
  if (a.size() != b.size()) {
    throw ValidationError(std::string(where) + ": size mismatch (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
}

}  // namespace

double dot(const Vec& a, const Vec& b) {
  require_same_size(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const Vec& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

double norm_inf(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm_l1(const Vec& v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

SymMatrix::SymMatrix(int dim, Vec data) : dim_(dim), data_(std::move(data)) {
  if (dim_ <= 0) throw ValidationError("SymMatrix: dimension must be positive");
  if (data_.size() != static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_)) {
    throw ValidationError("SymMatrix: data size does not match dimension");
  }
  double max_abs = 0.0;
  for (double x : data_) {
    if (!std::isfinite(x)) throw ValidationError("SymMatrix: non-finite entry");
    max_abs = std::max(max_abs, std::abs(x));
  }
  const double tol = 1e-12 * std::max(1.0, max_abs);
  for (int i = 0; i < dim_; ++i) {
    for (int j = i + 1; j < dim_; ++j) {
      if (std::abs(data_[idx(i, j)] - data_[idx(j, i)]) > tol) {
        throw ValidationError("SymMatrix: not symmetric at (" +
                              std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

SymMatrix SymMatrix::identity(int dim, double scale) {
  Vec data(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0);
  for (int i = 0; i < dim; ++i) {
    data[static_cast<std::size_t>(i) * (dim + 1)] = scale;
  }
  return SymMatrix(dim, std::move(data));
}

Vec SymMatrix::multiply(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw ValidationError("SymMatrix::multiply: size mismatch");
  }
  Vec y(x.size(), 0.0);
  for (int i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (int j = 0; j < dim_; ++j) acc += data_[idx(i, j)] * x[j];
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

double SymMatrix::quad_form(const Vec& x) const { return dot(x, multiply(x)); }

double SymMatrix::max_diag() const {
  double m = data_[0];
  for (int i = 1; i < dim_; ++i) m = std::max(m, data_[idx(i, i)]);
  return m;
}

double SymMatrix::norm_inf() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i) {
    double row = 0.0;
    for (int j = 0; j < dim_; ++j) row += std::abs(data_[idx(i, j)]);
    m = std::max(m, row);
  }
  return m;
}

SymMatrix SymMatrix::submatrix(const std::vector<int>& indices) const {
  const int k = static_cast<int>(indices.size());
  if (k == 0) throw ValidationError("SymMatrix::submatrix: empty index set");
  for (int i : indices) {
    if (i < 0 || i >= dim_) {
      throw ValidationError("SymMatrix::submatrix: index out of range");
    }
  }
  Vec data(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      data[static_cast<std::size_t>(a) * k + b] = (*this)(indices[a], indices[b]);
    }
  }
  return SymMatrix(k, std::move(data));
}

double CholFactor::lower(int i, int j) const {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_) {
    throw ValidationError("CholFactor::lower: index out of range");
  }
  if (j > i) return 0.0;
  return l_[static_cast<std::size_t>(i) * dim_ + j];
}

Vec CholFactor::solve(const Vec& b) const {
  if (static_cast<int>(b.size()) != dim_) {
    throw ValidationError("CholFactor::solve: size mismatch");
  }
  Vec y(b);
  for (int i = 0; i < dim_; ++i) {
    double acc = y[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) acc -= l_[static_cast<std::size_t>(i) * dim_ + j] * y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc / l_[static_cast<std::size_t>(i) * dim_ + i];
  }
  for (int i = dim_ - 1; i >= 0; --i) {
    double acc = y[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < dim_; ++j) acc -= l_[static_cast<std::size_t>(j) * dim_ + i] * y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc / l_[static_cast<std::size_t>(i) * dim_ + i];
  }
  return y;
}

CholFactor cholesky(const SymMatrix& s) {
  const int n = s.dim();
  const double threshold = 1e-12 * std::max(0.0, s.max_diag());
  CholFactor f;
  f.dim_ = n;
  f.l_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  auto L = [&f, n](int i, int j) -> double& {
    return f.l_[static_cast<std::size_t>(i) * n + j];
  };
  for (int j = 0; j < n; ++j) {
    double d = s(j, j);
    for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > threshold)) {
      throw NotPositiveDefinite(
          j, "cholesky: pivot " + std::to_string(j) + " is " +
                 std::to_string(d) + " (threshold " + std::to_string(threshold) + ")");
    }
    L(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double acc = s(i, j);
      for (int k = 0; k < j; ++k) acc -= L(i, k) * L(j, k);
      L(i, j) = acc / L(j, j);
    }
  }
  return f;
}

Vec solve_pd(const SymMatrix& s, const Vec& b) { return cholesky(s).solve(b); }

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

namespace {

struct AdaptiveSimpson {
  const std::function<double(double)>& f;
  // Refinement is unconditional for the first levels. Acceptance by the
  // Richardson test alone is unsafe on a coarse mesh: a localized integrand
  // (a density bump far from the interval midpoint) can evaluate to ~0 at
  // every node of the first few levels and be accepted as a zero integral.
  static constexpr int kMinDepth = 8;
  static constexpr int kMaxDepth = 60;

  double panel(double a, double fa, double fm, double fb, double b) const {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  double run(double a, double m, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) const {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm)) {
      throw ValidationError("integrate: integrand is not finite at x = " +
                            std::to_string(std::isfinite(flm) ? rm : lm));
    }
    const double left = panel(a, fa, flm, fm, m);
    const double right = panel(m, fm, frm, fb, b);
    const double delta = left + right - whole;
    if (depth >= kMinDepth && std::abs(delta) <= 15.0 * tol) {
      return left + right + delta / 15.0;
    }
    // Subdivision makes no progress once the nodes stop being distinct
    // doubles. Reporting the unmet tolerance beats returning the panel value:
    // this branch is reached by integrands too irregular for the mesh
    // (jumps, near-singularities), where the Richardson estimate is fiction.
    if (std::abs(delta) > 15.0 * tol &&
        !(a < lm && lm < m && m < rm && rm < b)) {
      throw NoConvergence(
          "integrate: interval cannot be subdivided further near x = " +
          std::to_string(m) + " with the error estimate still " +
          std::to_string(std::abs(delta)) + " > 15 * " + std::to_string(tol) +
          "; the integrand is too irregular for the requested tolerance");
    }
    if (depth >= kMaxDepth) {
      throw NoConvergence("integrate: adaptive refinement exceeded depth " +
                          std::to_string(kMaxDepth) + " near x = " +
                          std::to_string(m));
    }
    const double half = 0.5 * tol;
    return run(a, lm, m, fa, flm, fm, left, half, depth + 1) +
           run(m, rm, b, fm, frm, fb, right, half, depth + 1);
  }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (!(a < b)) throw ValidationError("integrate: requires a < b");
  if (!(tol > 0.0)) throw ValidationError("integrate: requires tol > 0");
  AdaptiveSimpson quad{f};
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) {
    throw ValidationError("integrate: integrand is not finite on [a, b]");
  }
  const double whole = quad.panel(a, fa, fm, fb, b);
  return quad.run(a, m, b, fa, fm, fb, whole, tol, 0);
}

std::uint64_t RngStream::next_u64() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double RngStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_uniform() - 1.0;
    v = 2.0 * next_uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double k = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * k;
  has_spare_ = true;
  return u * k;
}

Vec sample_std_normals(RngStream& rng, std::size_t n) {
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rng.next_normal();
  return out;
}

}  // namespace portopt
