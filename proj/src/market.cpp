#include "portopt/market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <utility>

namespace portopt {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool looks_like_iso_date(const std::string& d) {
  if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
  }
  return true;
}

double parse_price(const std::string& raw, int line_no, const std::string& label) {
  const std::string s = trim(raw);
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw ParseError("prices: line " + std::to_string(line_no) +
                     ", column " + label + ": not a number: '" + raw + "'");
  }
  return value;
}

}  // namespace

PriceHistory load_prices(std::istream& in) {
  PriceHistory h;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("prices: empty input");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.size() < 2 || trim(header[0]) != "date") {
    throw ParseError("prices: header must be 'date,<label>,...'");
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    const std::string label = trim(header[i]);
    if (label.empty()) throw ParseError("prices: empty asset label in header");
    h.labels.push_back(label);
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError("prices: line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    const std::string date = trim(fields[0]);
    if (!looks_like_iso_date(date)) {
      throw ParseError("prices: line " + std::to_string(line_no) +
                       ": bad date '" + date + "' (expected YYYY-MM-DD)");
    }
    if (!h.dates.empty() && date <= h.dates.back()) {
      throw ValidationError("prices: dates must be strictly increasing (line " +
                            std::to_string(line_no) + ": '" + date + "')");
    }
    Vec row(h.labels.size());
    for (std::size_t i = 0; i < h.labels.size(); ++i) {
      const double p = parse_price(fields[i + 1], line_no, h.labels[i]);
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw ValidationError("prices: line " + std::to_string(line_no) +
                              ", asset " + h.labels[i] +
                              ": price must be positive and finite");
      }
      row[i] = p;
    }
    h.dates.push_back(date);
    h.prices.push_back(std::move(row));
  }

  if (h.periods() < 3) {
    throw ValidationError("prices: need at least 3 dates, got " +
                          std::to_string(h.periods()));
  }
  return h;
}

PriceHistory load_prices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("prices: cannot open '" + path + "'");
  return load_prices(in);
}

ReturnsMatrix arithmetic_returns(const PriceHistory& history) {
  ReturnsMatrix r;
  r.labels = history.labels;
  const int T = history.periods();
  const int n = history.assets();
  r.rows.reserve(static_cast<std::size_t>(T - 1));
  for (int t = 0; t + 1 < T; ++t) {
    Vec row(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      row[static_cast<std::size_t>(i)] =
          history.prices[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(i)] /
              history.prices[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] -
          1.0;
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

MomentEstimate estimate_moments(const ReturnsMatrix& returns) {
  const int m = returns.observations();
  const int n = returns.assets();
  if (m < 2) {
    throw ValidationError("moments: need at least 2 return observations, got " +
                          std::to_string(m));
  }
  if (n < 1) throw ValidationError("moments: no assets");

  Vec mu(static_cast<std::size_t>(n), 0.0);
  for (const Vec& row : returns.rows) {
    for (int i = 0; i < n; ++i) mu[static_cast<std::size_t>(i)] += row[static_cast<std::size_t>(i)];
  }
  for (double& x : mu) x /= static_cast<double>(m);

  Vec cov(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (const Vec& row : returns.rows) {
    for (int i = 0; i < n; ++i) {
      const double di = row[static_cast<std::size_t>(i)] - mu[static_cast<std::size_t>(i)];
      for (int j = i; j < n; ++j) {
        const double dj = row[static_cast<std::size_t>(j)] - mu[static_cast<std::size_t>(j)];
        cov[static_cast<std::size_t>(i) * n + j] += di * dj;
      }
    }
  }
  const double denom = static_cast<double>(m - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = cov[static_cast<std::size_t>(i) * n + j] / denom;
      cov[static_cast<std::size_t>(i) * n + j] = v;
      cov[static_cast<std::size_t>(j) * n + i] = v;
    }
  }

  MomentEstimate est{returns.labels, std::move(mu), SymMatrix(n, std::move(cov))};
  try {
    cholesky(est.sigma);
  } catch (const NotPositiveDefinite& ex) {
    throw SingularCovariance(
        "moments: covariance is singular or indefinite at pivot " +
        std::to_string(ex.pivot()) + " (asset " +
        est.labels[static_cast<std::size_t>(ex.pivot())] +
        "); add observations or drop collinear assets");
  }
  return est;
}

ExcessModel excess_model(const MomentEstimate& moments, double benchmark) {
  if (!std::isfinite(benchmark)) {
    throw ValidationError("excess_model: benchmark must be finite");
  }
  ExcessModel m;
  m.labels = moments.labels;
  m.sigma = moments.sigma;
  m.benchmark = benchmark;
  m.e.resize(moments.mu.size());
  double max_e = -1.0;
  for (std::size_t i = 0; i < moments.mu.size(); ++i) {
    m.e[i] = moments.mu[i] - benchmark;
    max_e = std::max(max_e, m.e[i]);
  }
  m.has_positive_excess = max_e > 0.0;
  return m;
}

PortfolioWeights holdings_to_weights(const Vec& holdings, const Vec& initial_prices) {
  if (holdings.size() != initial_prices.size() || holdings.empty()) {
    throw ValidationError("weights: holdings and prices must have equal, nonzero length");
  }
  Vec value(holdings.size());
  double total = 0.0;
  double total_abs = 0.0;
  for (std::size_t i = 0; i < holdings.size(); ++i) {
    if (!(initial_prices[i] > 0.0)) {
      throw ValidationError("weights: initial prices must be positive");
    }
    value[i] = holdings[i] * initial_prices[i];
    total += value[i];
    total_abs += std::abs(value[i]);
  }
  if (std::abs(total) <= 1e-12 * std::max(1.0, total_abs)) {
    throw ZeroWealth("weights: portfolio value is zero (positions cancel)");
  }
  PortfolioWeights w;
  w.values.resize(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) w.values[i] = value[i] / total;
  w.normalized = true;
  return w;
}

PortfolioMoments portfolio_moments(const PortfolioWeights& weights,
                                   const MomentEstimate& moments) {
  if (weights.values.size() != moments.mu.size()) {
    throw ValidationError("portfolio_moments: weight/moment size mismatch");
  }
  PortfolioMoments pm;
  pm.mean = dot(weights.values, moments.mu);
  pm.variance = moments.sigma.quad_form(weights.values);
  const double scale = std::max(1.0, norm_inf(weights.values));
  const double floor = 1e-16 * moments.sigma.max_diag() * scale * scale;
  if (!(pm.variance > floor)) {
    throw DegeneratePortfolio("portfolio_moments: variance " +
                              std::to_string(pm.variance) +
                              " is not meaningfully positive");
  }
  return pm;
}

}  // namespace portopt
