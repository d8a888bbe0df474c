#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "portopt/numerics.hpp"

namespace portopt {

/// Price table: T dates by n assets, prices strictly positive, dates strictly
/// increasing, T >= 3 so at least two return observations exist.
struct PriceHistory {
  std::vector<std::string> dates;   // ISO YYYY-MM-DD
  std::vector<std::string> labels;  // asset column headers
  std::vector<Vec> prices;          // prices[t][i], one row per date

  int periods() const { return static_cast<int>(dates.size()); }
  int assets() const { return static_cast<int>(labels.size()); }
};

/// Parses CSV with header "date,<label>,<label>,..." and one row per date.
/// Throws ParseError on malformed input and ValidationError on bad data
/// (non-positive price, non-increasing dates, fewer than 3 rows).
PriceHistory load_prices(std::istream& in);
PriceHistory load_prices(const std::string& path);

/// Per-period arithmetic returns, (T-1) x n: r[t][i] = S[t+1][i]/S[t][i] - 1.
struct ReturnsMatrix {
  std::vector<std::string> labels;
  std::vector<Vec> rows;

  int observations() const { return static_cast<int>(rows.size()); }
  int assets() const { return static_cast<int>(labels.size()); }
};

ReturnsMatrix arithmetic_returns(const PriceHistory& history);

/// Sample mean vector and unbiased (divisor m-1) covariance of the returns.
/// The covariance must factor; otherwise SingularCovariance is thrown with
/// the offending pivot's asset named in the message.
struct MomentEstimate {
  std::vector<std::string> labels;
  Vec mu;
  SymMatrix sigma;
};

MomentEstimate estimate_moments(const ReturnsMatrix& returns);

/// Portfolio weights. normalized means the entries were scaled to sum to 1.
struct PortfolioWeights {
  std::vector<std::string> labels;
  Vec values;
  bool normalized = false;
};

/// Mean excess return e = mu - L against a fixed benchmark level L.
struct ExcessModel {
  std::vector<std::string> labels;
  Vec e;
  SymMatrix sigma;
  double benchmark = 0.0;
  bool has_positive_excess = false;
};

ExcessModel excess_model(const MomentEstimate& moments, double benchmark);

/// Converts share holdings at initial prices to value weights
/// w_i = delta_i * S_i(0) / sum_j delta_j * S_j(0).
/// Throws ZeroWealth when the total value is degenerate (cancels to ~0).
PortfolioWeights holdings_to_weights(const Vec& holdings, const Vec& initial_prices);

/// Portfolio mean and variance under the estimated moments.
/// Throws DegeneratePortfolio when the variance is not meaningfully positive.
struct PortfolioMoments {
  double mean = 0.0;
  double variance = 0.0;
};

PortfolioMoments portfolio_moments(const PortfolioWeights& weights,
                                   const MomentEstimate& moments);

}  // namespace portopt
