#include "logopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "logopt/error.hpp"

namespace logopt {

namespace {

void require_curve(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::CurveTooShort,
                fmt::format("equity curve needs >= 2 values, got {}", values.size()));
  }
}

void require_series(std::span<const double> returns) {
  if (returns.size() < 2) {
    throw Error(ErrorCode::CurveTooShort,
                fmt::format("return series needs >= 2 periods, got {}", returns.size()));
  }
}

double mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_stdev(std::span<const double> xs) {
  const double mu = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::vector<double> per_period_returns(std::span<const double> values) {
  require_curve(values);
  std::vector<double> out(values.size() - 1);
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    out[k] = (values[k + 1] - values[k]) / values[k];
  }
  return out;
}

double cumulative_return(std::span<const double> values) {
  require_curve(values);
  return (values.back() - values.front()) / values.front();
}

double realized_log_growth(std::span<const double> values) {
  require_curve(values);
  return std::log(values.back() / values.front());
}

SharpeRatio sharpe_ratio(std::span<const double> returns, double risk_free_rate) {
  require_series(returns);
  std::vector<double> excess(returns.begin(), returns.end());
  for (double& r : excess) r -= risk_free_rate;
  const double sigma = sample_stdev(excess);
  double scale = 0.0;
  for (double r : excess) scale = std::max(scale, std::abs(r));
  // A constant series can leave round-off residue in the mean; treat a
  // spread at the level of that residue as zero.
  if (!(sigma > 64.0 * std::numeric_limits<double>::epsilon() * scale)) {
    throw Error(ErrorCode::DegenerateVolatility, "excess returns have zero standard deviation");
  }
  const double per_period = mean(excess) / sigma;
  return {per_period, std::sqrt(static_cast<double>(returns.size())) * per_period};
}

double annualized_volatility(std::span<const double> returns) {
  require_series(returns);
  // Subtracting a constant r_f does not change the spread.
  return sample_stdev(returns) * std::sqrt(kTradingDaysPerYear);
}

double max_drawdown(std::span<const double> values) {
  require_curve(values);
  double peak = values.front();
  double worst = 0.0;
  for (double v : values) {
    peak = std::max(peak, v);
    // 1 - v/peak is monotone in peak under rounding, so the running peak
    // attains the pairwise maximum exactly.
    worst = std::max(worst, 1.0 - v / peak);
  }
  return worst;
}

MetricsSummary summarize(std::span<const double> values, double risk_free_rate) {
  const auto returns = per_period_returns(values);
  MetricsSummary s;
  s.cumulative_return = cumulative_return(values);
  s.realized_log_growth = realized_log_growth(values);
  s.max_drawdown = max_drawdown(values);
  s.n_periods = returns.size();
  s.risk_free_rate = risk_free_rate;
  if (returns.size() >= 2) {
    s.annualized_volatility = annualized_volatility(returns);
    try {
      const auto sr = sharpe_ratio(returns, risk_free_rate);
      s.sharpe_per_period = sr.per_period;
      s.sharpe_n_period = sr.n_period;
      s.sharpe_annualized = std::sqrt(kTradingDaysPerYear) * sr.per_period;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateVolatility) throw;
    }
  }
  return s;
}

}  // namespace logopt
