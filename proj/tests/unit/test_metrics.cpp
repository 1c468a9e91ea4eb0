#include <doctest.h>

#include <cmath>
#include <random>

#include "logopt/error.hpp"
#include "logopt/metrics.hpp"
#include "oracles.hpp"

using namespace logopt;

namespace {

std::vector<double> random_curve(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> step(-0.2, 0.2);
  std::vector<double> v{1.0};
  while (v.size() < n) v.push_back(v.back() * (1.0 + step(rng)));
  return v;
}

}  // namespace

TEST_CASE("per_period_returns") {
  const auto r = per_period_returns(std::vector<double>{1, 1.1, 0.99});
  CHECK(r[0] == doctest::Approx(0.10).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(-0.10).epsilon(1e-14));
  CHECK(per_period_returns(std::vector<double>{3, 3, 3}) == std::vector<double>{0, 0});
  CHECK(per_period_returns(std::vector<double>{1, 2}) == std::vector<double>{1.0});
  CHECK_THROWS_WITH_AS(per_period_returns(std::vector<double>{1}), doctest::Contains("CurveTooShort"), Error);
}

TEST_CASE("cumulative return and realized log-growth") {
  const std::vector<double> classical{1.0, 1.0849};
  CHECK(cumulative_return(classical) == doctest::Approx(0.0849).epsilon(1e-12));
  CHECK(std::abs(realized_log_growth(classical) - 0.0815) < 5e-5);  // 8.49% pairs with 8.15%
  CHECK(cumulative_return(std::vector<double>{2, 2}) == 0.0);
  CHECK(realized_log_growth(std::vector<double>{2, 2}) == 0.0);
  CHECK(cumulative_return(std::vector<double>{2, 1}) == -0.5);
  CHECK(realized_log_growth(std::vector<double>{2, 1}) == doctest::Approx(std::log(0.5)));
  CHECK_THROWS_AS(cumulative_return(std::vector<double>{}), Error);
  CHECK_THROWS_AS(realized_log_growth(std::vector<double>{1}), Error);
}

TEST_CASE("sharpe_ratio examples") {
  const auto zero = sharpe_ratio(std::vector<double>{0.01, -0.01, 0.01, -0.01}, 0.0);
  CHECK(zero.per_period == doctest::Approx(0.0));
  CHECK_THROWS_WITH_AS(sharpe_ratio(std::vector<double>{0.02, 0.02}, 0.0),
                       doctest::Contains("DegenerateVolatility"), Error);
  CHECK_THROWS_AS(sharpe_ratio(std::vector<double>{0.1, 0.1, 0.1}, 0.0), Error);
  CHECK_THROWS_AS(sharpe_ratio(std::vector<double>{0.1}, 0.0), Error);

  // Excess [0, 0.02]: mean 0.01, stdev 0.02/sqrt(2).
  const auto sr = sharpe_ratio(std::vector<double>{0.01, 0.03}, 0.01);
  const std::vector<double> excess{0.0, 0.02};
  const double expected = static_cast<double>(oracle::mean(excess) / oracle::sample_stdev(excess));
  CHECK(sr.per_period == doctest::Approx(expected).epsilon(1e-12));
  CHECK(sr.per_period == doctest::Approx(0.7071067811865476).epsilon(1e-12));
  CHECK(sr.n_period == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sharpe sign follows the mean excess return") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 0.01);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r(2 + trial % 30);
    for (double& x : r) x = n(rng);
    const double rf = 0.0001 * (trial % 3);
    const auto sr = sharpe_ratio(r, rf);
    std::vector<double> excess = r;
    for (double& x : excess) x -= rf;
    CHECK((sr.per_period > 0.0) == (oracle::mean(excess) > 0.0L));
    CHECK(sr.per_period == doctest::Approx(static_cast<double>(oracle::mean(excess) /
                                                                oracle::sample_stdev(excess)))
                               .epsilon(1e-9));
  }
}

TEST_CASE("annualized_volatility") {
  CHECK(annualized_volatility(std::vector<double>{0.01, 0.01, 0.01}) == doctest::Approx(0.0));
  CHECK(annualized_volatility(std::vector<double>{0.01, -0.01}) ==
        doctest::Approx(0.02 / std::sqrt(2.0) * std::sqrt(252.0)).epsilon(1e-14));
  CHECK(std::abs(annualized_volatility(std::vector<double>{0.01, -0.01}) - 0.22449) < 1e-5);
  const std::vector<double> r{0.01, -0.02, 0.005, 0.03};
  const std::vector<double> r2{0.02, -0.04, 0.01, 0.06};
  CHECK(annualized_volatility(r2) == doctest::Approx(2.0 * annualized_volatility(r)).epsilon(1e-14));
  CHECK_THROWS_AS(annualized_volatility(std::vector<double>{0.1}), Error);
}

TEST_CASE("max_drawdown examples") {
  CHECK(max_drawdown(std::vector<double>{1, 1.2, 0.9, 1.1}) == 0.25);
  CHECK(max_drawdown(std::vector<double>{1, 2, 3, 4}) == 0.0);
  CHECK_THROWS_AS(max_drawdown(std::vector<double>{1}), Error);
}

TEST_CASE("one-pass drawdown equals the pairwise brute force") {
  std::mt19937_64 rng(100);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto v = random_curve(rng, 2 + trial % 7);
    CHECK(max_drawdown(v) == oracle::brute_force_drawdown(v));
  }
}

TEST_CASE("metrics are invariant under rescaling the curve") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = random_curve(rng, 30);
    auto scaled = v;
    for (double& x : scaled) x *= 37.5;
    const auto a = summarize(v, 0.0);
    const auto b = summarize(scaled, 0.0);
    CHECK(a.cumulative_return == doctest::Approx(b.cumulative_return).epsilon(1e-12));
    CHECK(a.realized_log_growth == doctest::Approx(b.realized_log_growth).epsilon(1e-12));
    CHECK(a.max_drawdown == doctest::Approx(b.max_drawdown).epsilon(1e-12));
    CHECK(a.annualized_volatility == doctest::Approx(b.annualized_volatility).epsilon(1e-12));
    CHECK(*a.sharpe_n_period == doctest::Approx(*b.sharpe_n_period).epsilon(1e-9));
  }
}

TEST_CASE("summarize ties the fields together") {
  std::mt19937_64 rng(6);
  const auto v = random_curve(rng, 253);
  const auto s = summarize(v, 0.0);
  CHECK(s.n_periods == 252);
  CHECK(s.realized_log_growth == doctest::Approx(std::log1p(s.cumulative_return)).epsilon(1e-12));
  double telescoped = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) telescoped += std::log(v[k + 1] / v[k]);
  CHECK(std::abs(s.realized_log_growth - telescoped) <= 1e-10);
  CHECK(*s.sharpe_n_period == doctest::Approx(std::sqrt(252.0) * *s.sharpe_per_period));
  CHECK(*s.sharpe_annualized == doctest::Approx(std::sqrt(252.0) * *s.sharpe_per_period));
  CHECK(s.max_drawdown >= 0.0);
  CHECK(s.max_drawdown < 1.0);

  const auto flat = summarize(std::vector<double>{1, 1, 1, 1}, 0.0);
  CHECK_FALSE(flat.sharpe_n_period.has_value());
  CHECK(flat.annualized_volatility == 0.0);
  CHECK(flat.max_drawdown == 0.0);
}
