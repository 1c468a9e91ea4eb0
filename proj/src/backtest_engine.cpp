#include "logopt/backtest_engine.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

namespace logopt {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  const auto elapsed = std::chrono::steady_clock::now() - start;
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  return static_cast<double>(ms) / 1000.0;
}

}  // namespace

std::vector<double> EquityCurve::log_returns() const {
  std::vector<double> g;
  if (values.size() < 2) return g;
  g.reserve(values.size() - 1);
  for (std::size_t k = 0; k + 1 < values.size(); ++k) g.push_back(std::log(values[k + 1] / values[k]));
  return g;
}

EquityCurve simulate(const WeightSchedule& schedule, const ReturnSeries& returns, double v0) {
  if (!(v0 > 0.0) || !std::isfinite(v0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("initial value {} must be > 0", v0));
  }
  if (schedule.entries.empty() || schedule.end_stage() > returns.num_stages()) {
    throw Error(ErrorCode::StageMismatch,
                fmt::format("schedule covers stages [{}, {}) but returns have {}",
                            schedule.start_stage, schedule.end_stage(), returns.num_stages()));
  }

  EquityCurve curve{schedule.start_stage, {}};
  curve.values.reserve(schedule.size() + 1);
  curve.values.push_back(v0);
  double value = v0;
  for (std::size_t t = 0; t < schedule.size(); ++t) {
    const std::size_t stage = schedule.start_stage + t;
    const auto& weights = schedule.entries[t];
    const auto row = returns.row(stage);
    if (weights.size() != row.size()) {
      throw Error(ErrorCode::StageMismatch,
                  fmt::format("stage {}: {} weights for {} assets", stage, weights.size(), row.size()));
    }
    const double growth =
        1.0 + std::inner_product(row.begin(), row.end(), weights.values().begin(), 0.0);
    if (!(growth > 0.0)) {
      throw Error(ErrorCode::NonViableReturn, fmt::format("stage {}: 1 + K'x = {}", stage, growth));
    }
    value *= growth;
    curve.values.push_back(value);
  }
  return curve;
}

BacktestReport run_backtest(const PriceSeries& prices, const RunSpec& spec) {
  const auto returns = compute_returns(prices);

  const auto split_index = prices.last_index_on_or_before(spec.split);
  if (!split_index || *split_index == 0) {
    throw Error(ErrorCode::SplitOutOfRange,
                fmt::format("split {} leaves no in-sample returns", format_date(spec.split)));
  }
  const std::size_t first_stage = *split_index;
  if (first_stage >= returns.num_stages()) {
    throw Error(ErrorCode::SplitOutOfRange,
                fmt::format("split {} leaves no out-of-sample stages", format_date(spec.split)));
  }
  const std::size_t last_stage = returns.num_stages() - 1;
  const std::size_t length = last_stage - first_stage + 1;

  std::set<std::size_t> seen;
  for (std::size_t w : spec.windows) {
    if (w == 0) throw Error(ErrorCode::InvalidArgument, "window sizes must be >= 1");
    if (!seen.insert(w).second) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("window size {} listed twice", w));
    }
    if (w > first_stage) {
      throw Error(ErrorCode::InsufficientData,
                  fmt::format("window {} exceeds the {} in-sample returns", w, first_stage));
    }
  }

  BacktestReport report;
  report.assets = prices.assets();
  report.in_sample_start = prices.dates().front();
  report.split = prices.dates()[first_stage];
  report.out_of_sample_end = prices.dates().back();
  report.in_sample_stages = first_stage;
  report.curve_dates.assign(prices.dates().begin() + static_cast<std::ptrdiff_t>(first_stage),
                            prices.dates().end());
  report.stage_dates.assign(returns.dates().begin() + static_cast<std::ptrdiff_t>(first_stage),
                            returns.dates().end());

  auto finish = [&](StrategyRun run, std::chrono::steady_clock::time_point started) {
    run.curve = simulate(run.schedule, returns, spec.v0);
    run.runtime_secs = seconds_since(started);
    run.metrics = summarize(run.curve.values, spec.risk_free_rate);
    report.strategies.push_back(std::move(run));
  };

  {
    const auto started = std::chrono::steady_clock::now();
    const auto fit = classical_log_optimal(returns.slice(0, first_stage), spec.solver);
    StrategyRun run;
    run.name = "classical";
    run.schedule = constant_schedule(fit.weights, first_stage, length);
    run.schedule.diagnostics.assign(length, StageDiagnostics{fit.gap, fit.iterations});
    finish(std::move(run), started);
  }

  for (std::size_t w : spec.windows) {
    const auto started = std::chrono::steady_clock::now();
    StrategyRun run;
    run.name = fmt::format("sliding_M{}", w);
    run.window = w;
    run.schedule = sliding_window_weights(returns, w, first_stage, last_stage,
                                          SlidingOptions{spec.solver, spec.threads});
    finish(std::move(run), started);
  }
  return report;
}

}  // namespace logopt
