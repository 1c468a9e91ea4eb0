#pragma once

#include <cstddef>
#include <vector>

#include "logopt/growth_solver.hpp"
#include "logopt/market_data.hpp"

namespace logopt {

struct StageDiagnostics {
  double gap = 0.0;
  std::size_t iterations = 0;

  bool operator==(const StageDiagnostics&) const = default;
};

/// Entry t is the weight applied to return x(start_stage + t).
struct WeightSchedule {
  std::size_t start_stage = 0;
  std::vector<WeightVector> entries;
  std::vector<StageDiagnostics> diagnostics;

  std::size_t size() const noexcept { return entries.size(); }
  std::size_t end_stage() const noexcept { return start_stage + entries.size(); }
  const WeightVector& at_stage(std::size_t stage) const { return entries.at(stage - start_stage); }

  bool operator==(const WeightSchedule&) const = default;
};

/// DidNotConverge raised while solving one stage of a schedule.
class StageDidNotConverge : public DidNotConverge {
 public:
  StageDidNotConverge(std::size_t stage, const DidNotConverge& cause);
  std::size_t stage() const noexcept { return stage_; }

 private:
  std::size_t stage_;
};

struct SlidingOptions {
  SolverConfig solver{};
  /// Worker threads for the per-stage solves; the schedule is identical
  /// for every value.
  unsigned threads = 1;
};

/// Sliding-window log-optimal weights for stages [first_stage, last_stage]:
/// the weight for stage k is solved on x(k - window) ... x(k - 1) only.
WeightSchedule sliding_window_weights(const ReturnSeries& returns, std::size_t window,
                                      std::size_t first_stage, std::size_t last_stage,
                                      const SlidingOptions& options = {});

/// Every stage the data allows: k = window ... num_stages() - 1.
WeightSchedule sliding_window_weights(const ReturnSeries& returns, std::size_t window,
                                      const SlidingOptions& options = {});

/// One solve over the whole in-sample set; the classical fixed weight.
SolveResult classical_log_optimal(const ReturnSeries& in_sample, const SolverConfig& config = {});

WeightSchedule constant_schedule(const WeightVector& weights, std::size_t start_stage,
                                 std::size_t length);

}  // namespace logopt
