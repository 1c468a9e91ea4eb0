#include "logopt/growth_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <fmt/format.h>

namespace logopt {

namespace {

// Step sizes are kept inside this band; the upper end is far beyond the
// inverse curvature of daily-return windows (~1e4), the lower end means
// the line search has nothing left to try.
constexpr double kMaxStep = 1e15;
constexpr double kMinStep = 1e-30;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void check_dimensions(std::span<const double> weights, const ReturnWindow& window) {
  if (weights.size() != window.num_assets()) {
    throw Error(ErrorCode::InvalidWindow,
                fmt::format("weights have {} entries, window has {} assets", weights.size(),
                            window.num_assets()));
  }
}

// K'x in extended precision. Near the optimum successive iterates differ
// in the objective by less than a double ulp, so the line search compares
// extended-precision values.
long double wealth_excess(std::span<const double> weights, std::span<const double> row,
                          std::size_t j) {
  long double excess = 0.0L;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    excess += static_cast<long double>(weights[i]) * row[i];
  }
  if (!(1.0L + excess > 0.0L)) {
    throw Error(ErrorCode::NonViableReturn,
                fmt::format("1 + K'x is {} at window row {}", static_cast<double>(1.0L + excess), j));
  }
  return excess;
}

long double precise_objective(std::span<const double> weights, const ReturnWindow& window) {
  check_dimensions(weights, window);
  long double total = 0.0L;
  const auto& rows = window.rows();
  for (std::size_t j = 0; j < rows.size(); ++j) total += std::log1p(wealth_excess(weights, rows[j], j));
  return total / static_cast<long double>(rows.size());
}

double frank_wolfe_gap(std::span<const double> weights, std::span<const double> gradient) {
  const double best_vertex = *std::max_element(gradient.begin(), gradient.end());
  return std::max(0.0, best_vertex - dot(weights, gradient));
}

}  // namespace

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(ErrorCode::InvalidArgument, "weight vector is empty");
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("weight {} outside [0, 1]", w));
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("weights sum to {:.17g}", sum));
  }
}

WeightVector WeightVector::uniform(std::size_t m) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "weight vector is empty");
  return WeightVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

WeightVector WeightVector::vertex(std::size_t m, std::size_t i) {
  if (i >= m) throw Error(ErrorCode::InvalidArgument, fmt::format("vertex {} of {}", i, m));
  std::vector<double> w(m, 0.0);
  w[i] = 1.0;
  return WeightVector(std::move(w));
}

void SolverConfig::validate() const {
  if (!(gap_tolerance >= 0.0) || !std::isfinite(gap_tolerance)) {
    throw Error(ErrorCode::InvalidArgument, "gap_tolerance must be finite and >= 0");
  }
  if (max_iterations == 0) throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  if (!(shrink > 0.0 && shrink < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "shrink factor must lie in (0, 1)");
  }
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) {
    throw Error(ErrorCode::InvalidArgument, "initial_step must be finite and > 0");
  }
}

double log_growth_objective(std::span<const double> weights, const ReturnWindow& window) {
  return static_cast<double>(precise_objective(weights, window));
}

std::vector<double> log_growth_gradient(std::span<const double> weights, const ReturnWindow& window) {
  check_dimensions(weights, window);
  std::vector<long double> sums(weights.size(), 0.0L);
  const auto& rows = window.rows();
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const long double inv = 1.0L / (1.0L + wealth_excess(weights, rows[j], j));
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += rows[j][i] * inv;
  }
  std::vector<double> gradient(sums.size());
  const long double scale = 1.0L / static_cast<long double>(rows.size());
  for (std::size_t i = 0; i < sums.size(); ++i) gradient[i] = static_cast<double>(sums[i] * scale);
  return gradient;
}

WeightVector project_to_simplex(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "cannot project an empty vector");
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "cannot project non-finite entries");
  }

  // Find the threshold theta such that sum_i max(v_i - theta, 0) = 1.
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    prefix += sorted[r];
    const double candidate = (prefix - 1.0) / static_cast<double>(r + 1);
    if (sorted[r] - candidate > 0.0) theta = candidate;
  }

  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::max(v[i] - theta, 0.0);
    sum += out[i];
  }
  // The threshold is exact only up to round-off; fold the residual into
  // the support so the sum is 1 to working precision.
  if (sum != 1.0) {
    for (double& w : out) w /= sum;
  }
  for (double& w : out) w = std::min(w, 1.0);
  return WeightVector(std::move(out));
}

double optimality_gap(const WeightVector& k, const ReturnWindow& window) {
  return frank_wolfe_gap(k.span(), log_growth_gradient(k, window));
}

SolveResult solve_log_optimal(const ReturnWindow& window, const SolverConfig& config,
                              std::vector<double>* trace) {
  config.validate();
  const std::size_t m = window.num_assets();

  WeightVector current = WeightVector::uniform(m);
  long double value = precise_objective(current.span(), window);
  double step = config.initial_step;
  if (trace) trace->push_back(static_cast<double>(value));

  auto result = [&](double gap, std::size_t iterations, bool converged) {
    return SolveResult{current, static_cast<double>(value), gap, iterations, converged};
  };

  for (std::size_t iteration = 0;; ++iteration) {
    const auto gradient = log_growth_gradient(current, window);
    const double gap = frank_wolfe_gap(current.span(), gradient);
    if (gap <= config.gap_tolerance) return result(gap, iteration, true);
    if (iteration == config.max_iterations) {
      throw DidNotConverge(result(gap, iteration, false),
                           fmt::format("gap {:.3e} after {} iterations", gap, iteration));
    }

    // Try a longer step than last time, then backtrack until the
    // sufficient-ascent condition holds:
    //   f(K+) >= f(K) + g'(K+ - K) - |K+ - K|^2 / (2 step)
    // When the objective can no longer resolve the improvement, a step is
    // still taken if f did not drop and the slope at K+ along K+ - K is
    // nonnegative (so by concavity f increased along the whole segment).
    if (iteration > 0) step = std::min(step / config.shrink, kMaxStep);
    std::vector<double> trial(m);
    std::vector<double> direction(m);
    bool accepted = false;
    while (step >= kMinStep) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = current[i] + step * gradient[i];
      WeightVector candidate = project_to_simplex(trial);

      long double linear = 0.0L;
      long double squared = 0.0L;
      for (std::size_t i = 0; i < m; ++i) {
        direction[i] = candidate[i] - current[i];
        linear += static_cast<long double>(gradient[i]) * direction[i];
        squared += static_cast<long double>(direction[i]) * direction[i];
      }
      if (squared == 0.0L) break;

      const long double candidate_value = precise_objective(candidate.span(), window);
      bool ascent = candidate_value >= value &&
                    candidate_value >= value + linear - squared / (2.0L * step);
      if (!ascent && candidate_value >= value) {
        ascent = dot(log_growth_gradient(candidate, window), direction) >= 0.0;
      }
      if (ascent) {
        current = std::move(candidate);
        value = candidate_value;
        if (trace) trace->push_back(static_cast<double>(value));
        accepted = true;
        break;
      }
      step *= config.shrink;
    }
    if (!accepted) {
      throw DidNotConverge(result(gap, iteration, false),
                           fmt::format("line search stalled at gap {:.3e} after {} iterations",
                                       gap, iteration));
    }
  }
}

}  // namespace logopt
