#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace logopt {

inline constexpr double kTradingDaysPerYear = 252.0;

struct SharpeRatio {
  double per_period = 0.0;
  /// sqrt(N) * per_period.
  double n_period = 0.0;
};

/// Performance figures for one equity curve. The Sharpe fields are empty
/// when the excess returns have zero spread.
struct MetricsSummary {
  double cumulative_return = 0.0;
  double realized_log_growth = 0.0;
  double annualized_volatility = 0.0;
  std::optional<double> sharpe_per_period;
  std::optional<double> sharpe_n_period;
  std::optional<double> sharpe_annualized;
  double max_drawdown = 0.0;
  std::size_t n_periods = 0;
  double risk_free_rate = 0.0;
};

/// R(k) = (V(k+1) - V(k)) / V(k).
std::vector<double> per_period_returns(std::span<const double> values);

double cumulative_return(std::span<const double> values);
double realized_log_growth(std::span<const double> values);

/// Excess returns R(k) - r_f over their unbiased standard deviation.
/// Throws DegenerateVolatility when that deviation is zero.
SharpeRatio sharpe_ratio(std::span<const double> returns, double risk_free_rate);

/// Unbiased standard deviation of the per-period returns times sqrt(252).
double annualized_volatility(std::span<const double> returns);

/// Largest peak-to-trough decline (V(l) - V(k)) / V(l) over l < k, in one
/// pass with a running peak; 0 for a curve that never falls.
double max_drawdown(std::span<const double> values);

MetricsSummary summarize(std::span<const double> values, double risk_free_rate);

}  // namespace logopt
