#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "logopt/growth_solver.hpp"
#include "logopt/market_data.hpp"
#include "logopt/metrics.hpp"
#include "logopt/strategy.hpp"

namespace logopt {

/// Account values V(start_stage), ..., V(start_stage + n).
struct EquityCurve {
  std::size_t start_stage = 0;
  std::vector<double> values;

  /// g(k) = log(V(k+1) / V(k)).
  std::vector<double> log_returns() const;

  bool operator==(const EquityCurve&) const = default;
};

/// V(k+1) = (1 + K(k)'x(k)) V(k), starting from V(start_stage) = v0.
EquityCurve simulate(const WeightSchedule& schedule, const ReturnSeries& returns, double v0);

struct RunSpec {
  /// Last in-sample price date. The classical weight is fitted on returns
  /// realized up to it; every strategy is scored on the returns after it.
  Date split;
  std::vector<std::size_t> windows;
  double risk_free_rate = 0.0;
  double v0 = 1.0;
  SolverConfig solver{};
  unsigned threads = 1;
};

struct StrategyRun {
  std::string name;
  /// Sliding window size; empty for the classical baseline.
  std::optional<std::size_t> window;
  WeightSchedule schedule;
  EquityCurve curve;
  MetricsSummary metrics;
  double runtime_secs = 0.0;
};

struct BacktestReport {
  std::vector<std::string> assets;
  /// First in-sample price date, the split date actually used, and the last
  /// price date.
  Date in_sample_start;
  Date split;
  Date out_of_sample_end;
  std::size_t in_sample_stages = 0;
  /// Calendar date of every curve value; shared by all strategies.
  std::vector<Date> curve_dates;
  /// Dates on which each scheduled weight is held (one per out-of-sample stage).
  std::vector<Date> stage_dates;
  std::vector<StrategyRun> strategies;
};

/// Classical baseline plus one sliding-window strategy per window size, all
/// scored over the same out-of-sample stages. Sliding strategies take their
/// first window from the last in-sample returns.
BacktestReport run_backtest(const PriceSeries& prices, const RunSpec& spec);

}  // namespace logopt
