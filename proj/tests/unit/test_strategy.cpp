#include <doctest.h>

#include <random>

#include "logopt/error.hpp"
#include "logopt/strategy.hpp"
#include "oracles.hpp"

using namespace logopt;

namespace {

ReturnSeries make_returns(const Matrix& rows) {
  std::vector<Date> dates;
  auto d = std::chrono::sys_days{Date{std::chrono::year{2021}, std::chrono::month{3}, std::chrono::day{1}}};
  for (std::size_t k = 0; k < rows.size(); ++k, d += std::chrono::days{1}) dates.emplace_back(d);
  std::vector<std::string> assets;
  for (std::size_t i = 0; i < rows.front().size(); ++i) assets.push_back("A" + std::to_string(i));
  return ReturnSeries(dates, assets, rows);
}

ReturnSeries random_returns(std::mt19937_64& rng, std::size_t stages, std::size_t m) {
  std::normal_distribution<double> n(0.0005, 0.01);
  Matrix rows(stages, std::vector<double>(m));
  for (auto& row : rows) {
    for (double& x : row) x = n(rng);
  }
  return make_returns(rows);
}

}  // namespace

TEST_CASE("schedule covers stages M .. T-2") {
  const auto r = make_returns({{0.1}, {-0.1}, {0.05}});
  const auto s = sliding_window_weights(r, 2);
  CHECK(s.start_stage == 2);
  CHECK(s.size() == 1);
  CHECK(s.entries[0].values() == std::vector<double>{1.0});
}

TEST_CASE("single asset schedules are all ones") {
  std::mt19937_64 rng(1);
  const auto r = random_returns(rng, 40, 1);
  const auto s = sliding_window_weights(r, 5);
  CHECK(s.size() == 35);
  for (const auto& w : s.entries) CHECK(w.values() == std::vector<double>{1.0});
}

TEST_CASE("Cover instance appears as the stage-2 weight") {
  const auto r = make_returns({{1.0, 0.0}, {-0.5, 0.0}, {0.3, 0.0}});
  const auto s = sliding_window_weights(r, 2);
  REQUIRE(s.size() == 1);
  CHECK(std::abs(s.entries[0][0] - 0.5) <= 1e-6);
  CHECK(std::abs(s.entries[0][1] - 0.5) <= 1e-6);
  CHECK(s.diagnostics[0].gap <= 1e-9);
}

TEST_CASE("insufficient data and bad ranges") {
  const auto r = make_returns({{0.1}, {-0.1}});
  CHECK_THROWS_WITH_AS(sliding_window_weights(r, 2), doctest::Contains("InsufficientData"), Error);
  CHECK_THROWS_AS(sliding_window_weights(r, 0), Error);
  const auto longer = make_returns({{0.1}, {-0.1}, {0.2}, {0.0}});
  CHECK_THROWS_AS(sliding_window_weights(longer, 2, 1, 3), Error);
  CHECK_THROWS_AS(sliding_window_weights(longer, 2, 2, 4), Error);
  CHECK(sliding_window_weights(longer, 2, 3, 3).size() == 1);
}

TEST_CASE("no lookahead: later returns never change earlier weights") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> shock(0.0, 0.05);
  for (int trial = 0; trial < 10; ++trial) {
    const auto base = random_returns(rng, 50, 3);
    const std::size_t window = 3 + trial;
    const auto reference = sliding_window_weights(base, window);
    for (std::size_t k = window; k < base.num_stages(); k += 7) {
      Matrix rows = base.returns();
      for (std::size_t j = k; j < rows.size(); ++j) {
        for (double& x : rows[j]) x = std::max(-0.9, x + shock(rng));
      }
      const auto altered = sliding_window_weights(make_returns(rows), window);
      for (std::size_t stage = window; stage <= k; ++stage) {
        CHECK(altered.at_stage(stage) == reference.at_stage(stage));
      }
    }
  }
}

TEST_CASE("full-length window reduces to the classical solve") {
  std::mt19937_64 rng(12);
  const auto r = random_returns(rng, 61, 3);
  const std::size_t m = 60;
  const auto sliding = sliding_window_weights(r, m, m, m);
  const auto classical = classical_log_optimal(r.slice(0, m));
  CHECK(sliding.entries[0] == classical.weights);
}

TEST_CASE("parallel solves assemble the sequential schedule") {
  std::mt19937_64 rng(13);
  const auto r = random_returns(rng, 120, 3);
  const auto sequential = sliding_window_weights(r, 10);
  for (unsigned threads : {2u, 3u, 8u}) {
    CHECK(sliding_window_weights(r, 10, SlidingOptions{{}, threads}) == sequential);
  }
  for (const auto& d : sequential.diagnostics) CHECK(d.gap <= 1e-9);
}

TEST_CASE("stage failures carry the stage index") {
  std::mt19937_64 rng(14);
  const auto r = random_returns(rng, 30, 3);
  SlidingOptions opts;
  opts.solver.max_iterations = 1;
  opts.solver.gap_tolerance = 0.0;
  opts.solver.initial_step = 1e-9;
  try {
    sliding_window_weights(r, 5, opts);
    FAIL("expected StageDidNotConverge");
  } catch (const StageDidNotConverge& e) {
    CHECK(e.stage() == 5);
    CHECK_FALSE(e.best().converged);
  }
}

TEST_CASE("classical_log_optimal examples") {
  CHECK(classical_log_optimal(make_returns({{0.1}, {-0.2}})).weights.values() == std::vector<double>{1.0});
  CHECK(classical_log_optimal(make_returns({{0.0, 0.0}, {0.0, 0.0}})).weights == WeightVector::uniform(2));
  const auto kelly =
      classical_log_optimal(make_returns({{1, 0}, {1, 0}, {1, 0}, {-0.5, 0}, {-0.5, 0}}));
  CHECK(std::abs(kelly.weights[0] - 0.8) <= 1e-6);
  CHECK_THROWS_AS(classical_log_optimal(make_returns({{0.1}}).slice(0, 0)), Error);
}

TEST_CASE("constant_schedule") {
  const auto e1 = WeightVector::vertex(2, 0);
  const auto s = constant_schedule(e1, 4, 3);
  CHECK(s.start_stage == 4);
  CHECK(s.entries == std::vector<WeightVector>(3, e1));
  CHECK(constant_schedule(WeightVector::uniform(2), 0, 1).entries[0].values() ==
        std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(constant_schedule(e1, 0, 0), Error);
}
