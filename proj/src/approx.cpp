#include "mzkit/approx.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mzkit/error.hpp"

namespace mzkit {

namespace {

// Columns ordered k = -n..n.
Eigen::MatrixXcd trig_basis(std::span<const Sample> samples, int n) {
  Eigen::MatrixXcd B(static_cast<Eigen::Index>(samples.size()), 2 * n + 1);
  for (std::size_t j = 0; j < samples.size(); ++j)
    for (int k = -n; k <= n; ++k) B(static_cast<Eigen::Index>(j), k + n) = unit(k * samples[j].angle);
  return B;
}

TrigPolynomial to_trig(const Eigen::VectorXcd& c, int n, bool real) {
  TrigPolynomial t;
  t.a0 = c(n);
  t.a.resize(static_cast<std::size_t>(n));
  t.b.resize(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    t.a[k - 1] = c(n + k);
    t.b[k - 1] = c(n - k);
  }
  if (real) {
    // conjugate-symmetric projection
    t.a0 = {t.a0.real(), 0.0};
    for (std::size_t k = 0; k < t.a.size(); ++k) {
      const Complex sym = 0.5 * (t.a[k] + std::conj(t.b[k]));
      t.a[k] = sym;
      t.b[k] = std::conj(sym);
    }
  }
  return t;
}

void check_samples(std::span<const Sample> samples, int n) {
  if (n < 0) throw InvalidArgument("fit degree must be >= 0");
  std::vector<double> angles;
  for (const auto& s : samples) angles.push_back(wrap_angle(s.angle));
  std::sort(angles.begin(), angles.end());
  const auto distinct = static_cast<std::size_t>(std::unique(angles.begin(), angles.end()) - angles.begin());
  const auto dim = static_cast<std::size_t>(2 * n + 1);
  if (distinct < dim)
    throw RankDeficientError(n, distinct,
                             "fit of degree " + std::to_string(n) + " needs " + std::to_string(dim) +
                                 " distinct sample angles, got " + std::to_string(distinct));
  if (distinct != samples.size()) throw InvalidArgument("sample angles must be distinct");
}

bool all_real(std::span<const Sample> samples) {
  return std::all_of(samples.begin(), samples.end(), [](const Sample& s) { return s.value.imag() == 0.0; });
}

Eigen::VectorXcd sample_values(std::span<const Sample> samples) {
  Eigen::VectorXcd f(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t j = 0; j < samples.size(); ++j) f(static_cast<Eigen::Index>(j)) = samples[j].value;
  return f;
}

double sample_error(const TrigPolynomial& trig, std::span<const Sample> samples) {
  double e = 0.0;
  for (const auto& s : samples) e = std::max(e, std::abs(trig(s.angle) - s.value));
  return e;
}

}  // namespace

TrigPolynomial least_squares_fit(std::span<const Sample> samples, int n) {
  check_samples(samples, n);
  const Eigen::MatrixXcd B = trig_basis(samples, n);
  const Eigen::VectorXcd c = B.colPivHouseholderQr().solve(sample_values(samples));
  return to_trig(c, n, all_real(samples));
}

FitResult chebyshev_fit(std::span<const Sample> samples, int n, int max_iter) {
  check_samples(samples, n);
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  const Eigen::MatrixXcd B = trig_basis(samples, n);
  const Eigen::VectorXcd f = sample_values(samples);
  const bool real = all_real(samples);
  const auto N = static_cast<Eigen::Index>(samples.size());

  double scale = 0.0;
  for (Eigen::Index j = 0; j < N; ++j) scale = std::max(scale, std::abs(f(j)));
  const double floor = 1e-14 * std::max(scale, 1.0);

  Eigen::VectorXd w = Eigen::VectorXd::Constant(N, 1.0 / static_cast<double>(N));
  FitResult res;
  res.n = n;
  double best = kInf;
  double prev_max = kInf;
  double prev_bound = 0.0;

  for (int it = 1; it <= max_iter; ++it) {
    res.iterations = it;
    const Eigen::VectorXd sw = w.cwiseSqrt();
    const Eigen::MatrixXcd WB = sw.asDiagonal() * B;
    const Eigen::VectorXcd Wf = sw.asDiagonal() * f;
    const Eigen::VectorXcd c = WB.completeOrthogonalDecomposition().solve(Wf);
    const TrigPolynomial trig = to_trig(c, n, real);

    Eigen::VectorXd r(N);
    for (Eigen::Index j = 0; j < N; ++j) r(j) = std::abs(trig(samples[static_cast<std::size_t>(j)].angle) - f(j));
    const double max_r = r.maxCoeff();
    const double bound = std::sqrt((w.array() * r.array().square()).sum());

    if (max_r < best) {
      best = max_r;
      res.trig = trig;
    }
    // The Lawson weighted residual never decreases; a drop means the weighted
    // solve lost accuracy and further iterations are meaningless.
    if (bound < prev_bound - 1e-12 * std::max(scale, 1.0)) {
      res.diagnostics = "weighted residual decreased at iteration " + std::to_string(it) + " (" +
                        std::to_string(prev_bound) + " -> " + std::to_string(bound) + ")";
      break;
    }
    res.lower_bound = std::max(res.lower_bound, bound);
    prev_bound = bound;

    if (max_r <= floor || std::abs(prev_max - max_r) <= 1e-10 * max_r) {
      res.converged = true;
      break;
    }
    prev_max = max_r;

    w = w.cwiseProduct(r);
    const double total = w.sum();
    if (!(total > 0.0)) {
      res.converged = true;
      break;
    }
    w /= total;
  }

  res.discrete_error = sample_error(res.trig, samples);
  res.grid_error = std::numeric_limits<double>::quiet_NaN();
  return res;
}

std::vector<double> evaluation_grid(int n, std::span<const double> sample_angles) {
  const int count = 64 * (2 * n + 1);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count) + sample_angles.size());
  for (int k = 0; k < count; ++k) grid.push_back(kTwoPi * k / count);
  grid.insert(grid.end(), sample_angles.begin(), sample_angles.end());
  return grid;
}

double max_deviation(const TrigPolynomial& trig, const AngleFunction& f, std::span<const double> grid) {
  double e = 0.0;
  for (double t : grid) e = std::max(e, std::abs(trig(t) - f(t)));
  return e;
}

void measure_grid_error(FitResult& fit, const AngleFunction& f, std::span<const double> sample_angles) {
  fit.grid_error = max_deviation(fit.trig, f, evaluation_grid(fit.n, sample_angles));
}

std::vector<ConvergenceRow> convergence_experiment(const AngleFunction& f, const TriangularFamily& family,
                                                   std::span<const int> n_list, int max_iter) {
  std::vector<const Generation*> gens;
  for (int n : n_list) {
    const Generation* g = family.find(2 * n);
    if (!g) throw InvalidArgument("family lacks generation 2n=" + std::to_string(2 * n) + " for n=" + std::to_string(n));
    gens.push_back(g);
  }
  std::vector<ConvergenceRow> rows(n_list.size());
  parallel_for(n_list.size(), [&](std::size_t i) {
    const Generation& g = *gens[i];
    std::vector<Sample> samples;
    for (double t : g.angles) samples.push_back({t, f(t)});
    FitResult fit = chebyshev_fit(samples, n_list[i], max_iter);
    measure_grid_error(fit, f, g.angles);
    rows[i] = {n_list[i], fit.discrete_error, fit.grid_error, fit.iterations};
  });
  return rows;
}

}  // namespace mzkit
