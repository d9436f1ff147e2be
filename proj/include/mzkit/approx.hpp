#pragma once

// Discrete minimax fitting of trigonometric polynomials on sampled angles,
// and the uniform-convergence experiment fitting degree n on Z(2n).

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mzkit/circle_family.hpp"
#include "mzkit/circle_poly.hpp"

namespace mzkit {

struct Sample {
  double angle = 0.0;
  Complex value{};
};

struct FitResult {
  int n = 0;
  TrigPolynomial trig;
  /// max over the sample angles of |p_n - f|
  double discrete_error = 0.0;
  /// sup over the evaluation grid (which contains the sample angles) of |p_n - f|;
  /// NaN until measure_grid_error is called.
  double grid_error = 0.0;
  int iterations = 0;
  /// Lawson lower bound on the discrete minimax error: sqrt(sum w_j r_j^2).
  double lower_bound = 0.0;
  bool converged = false;
  /// Non-empty when the iteration stopped on a failed monotonicity check.
  std::string diagnostics;
};

using AngleFunction = std::function<Complex(double)>;

inline constexpr int kDefaultLawsonIterations = 1000;

/// Plain least-squares fit of degree n (baseline).
TrigPolynomial least_squares_fit(std::span<const Sample> samples, int n);

/// Lawson iteratively reweighted least squares for
/// min over trig polynomials of degree n of max_j |p(theta_j) - f_j|.
/// Real data yields a real fit. Throws RankDeficientError with fewer than
/// 2n+1 distinct angles.
FitResult chebyshev_fit(std::span<const Sample> samples, int n, int max_iter = kDefaultLawsonIterations);

/// Evaluation grid: 64(2n+1) equispaced angles together with `sample_angles`.
std::vector<double> evaluation_grid(int n, std::span<const double> sample_angles);

/// max over `grid` of |trig - f|.
double max_deviation(const TrigPolynomial& trig, const AngleFunction& f, std::span<const double> grid);

/// Sets fit.grid_error against f on evaluation_grid(fit.n, sample_angles).
void measure_grid_error(FitResult& fit, const AngleFunction& f, std::span<const double> sample_angles);

struct ConvergenceRow {
  int n = 0;
  double discrete_error = 0.0;
  double grid_error = 0.0;
  int iterations = 0;
};

/// Fits f on Z(2n) for each n and measures the uniform error. Throws
/// InvalidArgument when the family lacks generation 2n.
std::vector<ConvergenceRow> convergence_experiment(const AngleFunction& f, const TriangularFamily& family,
                                                   std::span<const int> n_list,
                                                   int max_iter = kDefaultLawsonIterations);

}  // namespace mzkit
