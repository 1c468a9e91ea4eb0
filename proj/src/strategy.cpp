#include "logopt/strategy.hpp"

#include <algorithm>
#include <exception>
#include <optional>
#include <thread>

#include <fmt/format.h>

namespace logopt {

StageDidNotConverge::StageDidNotConverge(std::size_t stage, const DidNotConverge& cause)
    : DidNotConverge(cause.best(), fmt::format("stage {}: {}", stage, cause.what())),
      stage_(stage) {}

WeightSchedule sliding_window_weights(const ReturnSeries& returns, std::size_t window,
                                      std::size_t first_stage, std::size_t last_stage,
                                      const SlidingOptions& options) {
  if (window == 0) throw Error(ErrorCode::InvalidArgument, "window size must be >= 1");
  if (returns.num_stages() < window + 1) {
    throw Error(ErrorCode::InsufficientData,
                fmt::format("window {} needs at least {} return rows, have {}", window, window + 1,
                            returns.num_stages()));
  }
  if (first_stage < window || last_stage < first_stage || last_stage >= returns.num_stages()) {
    throw Error(ErrorCode::InsufficientData,
                fmt::format("stages [{}, {}] not coverable with window {} over {} return rows",
                            first_stage, last_stage, window, returns.num_stages()));
  }
  options.solver.validate();

  const std::size_t count = last_stage - first_stage + 1;
  std::vector<std::optional<SolveResult>> results(count);
  std::vector<std::exception_ptr> failures(count);

  auto solve_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const std::size_t stage = first_stage + t;
      try {
        results[t] = solve_log_optimal(slice_window(returns, stage, window), options.solver);
      } catch (const DidNotConverge& e) {
        failures[t] = std::make_exception_ptr(StageDidNotConverge(stage, e));
      } catch (...) {
        failures[t] = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, count);
  if (workers == 1) {
    solve_range(0, count);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t begin = 0; begin < count; begin += chunk) {
      pool.emplace_back(solve_range, begin, std::min(count, begin + chunk));
    }
  }

  // Report the earliest failing stage so errors match the sequential run.
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  WeightSchedule schedule;
  schedule.start_stage = first_stage;
  schedule.entries.reserve(count);
  schedule.diagnostics.reserve(count);
  for (auto& result : results) {
    schedule.diagnostics.push_back({result->gap, result->iterations});
    schedule.entries.push_back(std::move(result->weights));
  }
  return schedule;
}

WeightSchedule sliding_window_weights(const ReturnSeries& returns, std::size_t window,
                                      const SlidingOptions& options) {
  if (window == 0) throw Error(ErrorCode::InvalidArgument, "window size must be >= 1");
  if (returns.num_stages() < window + 1) {
    throw Error(ErrorCode::InsufficientData,
                fmt::format("window {} needs at least {} return rows, have {}", window, window + 1,
                            returns.num_stages()));
  }
  return sliding_window_weights(returns, window, window, returns.num_stages() - 1, options);
}

SolveResult classical_log_optimal(const ReturnSeries& in_sample, const SolverConfig& config) {
  if (in_sample.num_stages() == 0) {
    throw Error(ErrorCode::InsufficientData, "in-sample return set is empty");
  }
  return solve_log_optimal(ReturnWindow(in_sample.returns()), config);
}

WeightSchedule constant_schedule(const WeightVector& weights, std::size_t start_stage,
                                 std::size_t length) {
  if (length == 0) throw Error(ErrorCode::InvalidArgument, "schedule length must be >= 1");
  WeightSchedule schedule;
  schedule.start_stage = start_stage;
  schedule.entries.assign(length, weights);
  schedule.diagnostics.assign(length, StageDiagnostics{});
  return schedule;
}

}  // namespace logopt
