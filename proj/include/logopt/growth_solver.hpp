#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "logopt/error.hpp"
#include "logopt/market_data.hpp"

namespace logopt {

/// A long-only, fully invested allocation: every weight in [0, 1] and the
/// weights sum to 1 within kSimplexTolerance.
class WeightVector {
 public:
  static constexpr double kSimplexTolerance = 1e-12;

  explicit WeightVector(std::vector<double> weights);

  static WeightVector uniform(std::size_t m);
  /// The i-th vertex e_i of the simplex.
  static WeightVector vertex(std::size_t m, std::size_t i);

  const std::vector<double>& values() const noexcept { return weights_; }
  std::span<const double> span() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

  bool operator==(const WeightVector&) const = default;

 private:
  std::vector<double> weights_;
};

struct SolverConfig {
  double gap_tolerance = 1e-9;
  std::size_t max_iterations = 10'000;
  double shrink = 0.5;
  double initial_step = 1.0;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

struct SolveResult {
  WeightVector weights;
  double objective = 0.0;
  double gap = 0.0;
  std::size_t iterations = 0;
  bool converged = false;

  bool operator==(const SolveResult&) const = default;
};

/// Raised when the iteration budget runs out before the certificate reaches
/// the tolerance. Carries the best iterate so callers can still use it.
class DidNotConverge : public Error {
 public:
  DidNotConverge(SolveResult best, const std::string& what)
      : Error(ErrorCode::DidNotConverge, what), best_(std::move(best)) {}

  const SolveResult& best() const noexcept { return best_; }

 private:
  SolveResult best_;
};

/// (1/M) sum_j log(1 + K'x(j)).
double log_growth_objective(std::span<const double> weights, const ReturnWindow& window);
inline double log_growth_objective(const WeightVector& k, const ReturnWindow& window) {
  return log_growth_objective(k.span(), window);
}

/// Component i is (1/M) sum_j x_i(j) / (1 + K'x(j)).
std::vector<double> log_growth_gradient(std::span<const double> weights, const ReturnWindow& window);
inline std::vector<double> log_growth_gradient(const WeightVector& k, const ReturnWindow& window) {
  return log_growth_gradient(k.span(), window);
}

/// Euclidean projection onto the unit simplex (sort and threshold).
WeightVector project_to_simplex(std::span<const double> v);

/// Frank-Wolfe gap max_i g_i - K'g at K. For the concave objective this
/// bounds optimum - objective(K) from above.
double optimality_gap(const WeightVector& k, const ReturnWindow& window);

/// Projected-gradient ascent from the uniform weight with a backtracking
/// line search. Returns a converged result or throws DidNotConverge.
/// When `trace` is given, the objective at the start and after every
/// accepted step is appended to it.
SolveResult solve_log_optimal(const ReturnWindow& window, const SolverConfig& config = {},
                              std::vector<double>* trace = nullptr);

}  // namespace logopt
