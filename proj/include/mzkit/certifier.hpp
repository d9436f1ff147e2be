#pragma once

// Quantitative Marcinkiewicz-Zygmund certification of triangular families.
//
// At p = 2 the best constants are exact: with E the m x (n+1) matrix
// E[j][k] = z_j^k, the ratio ||q||_2^2 / disc(q)^2 ranges over
// [2pi m / s_max^2, 2pi m / s_min^2] where s are the singular values of E.
// For p in {1, inf} the supremum over P_n is non-convex, so only certified
// lower bounds (explicit witness polynomials) are produced.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mzkit/circle_family.hpp"
#include "mzkit/circle_poly.hpp"

namespace mzkit {

struct FrameBounds {
  int n = 0;
  std::size_t m = 0;
  double A = 0.0;
  double B = 0.0;
  double kappa = 1.0;
  /// Smallest singular value below rounding level: B and kappa are reported as inf.
  bool numerically_singular = false;
};

/// Exact p = 2 frame bounds. Throws RankDeficientError when m_n <= n.
FrameBounds frame_bounds_p2(const Generation& generation);

/// A polynomial certifying C_p >= ratio on one generation.
struct Witness {
  int n = 0;
  double ratio = 0.0;
  std::string label;
  Polynomial poly;
};

/// max(||q||_p^p / disc^p, disc^p / ||q||_p^p) for one polynomial (sup norms at p = inf).
double mz_ratio(const Polynomial& q, const Generation& generation, double p,
                int oversampling = kDefaultOversampling);

/// Best ratio over structured candidates (ones/kernel, Fejer peaks and localized
/// squares rotated to points and gap midpoints) plus `budget` random polynomials.
Witness mz_lower_bound(const Generation& generation, double p, int budget, std::uint64_t seed = 0,
                       int oversampling = kDefaultOversampling);

struct Thresholds {
  double kappa_max = 1e3;
  double density_margin = 0.01;
};

struct CertifyOptions {
  Thresholds thresholds;
  /// Empty: {2pi, 4pi, 8pi, 16pi}.
  std::vector<double> R_grid;
  /// Defaults to the smallest generation index.
  std::optional<int> tail_start;
  int random_budget = 32;
  std::uint64_t seed = 0;
  int oversampling = kDefaultOversampling;
};

enum class Verdict { certified, refuted, inconclusive };

std::string_view to_string(Verdict v);

/// Least-squares fit of log(y) against log(n). Trend diverges when
/// slope > 0.1 and R^2 > 0.5.
struct Trend {
  double slope = 0.0;
  double r_squared = 0.0;
  bool diverging = false;
};

Trend log_log_trend(const std::vector<int>& n, const std::vector<double>& y);

struct GenerationReport {
  int n = 0;
  std::size_t m = 0;
  std::optional<FrameBounds> frame;  // empty when m <= n
  double arc_count_sup = 0.0;
  Witness witness;
};

struct CertificationReport {
  std::string family;
  double p = 2.0;
  std::vector<GenerationReport> generations;
  std::optional<DensityEstimate> density;
  /// 0 when some generation has fewer than two points.
  double separation = 0.0;
  Trend arc_trend;
  Trend kappa_trend;
  Trend witness_trend;
  Verdict verdict = Verdict::inconclusive;
  /// "p2-trend", "density" or empty; what the certification rests on.
  std::string basis;
  std::vector<std::string> reasons;
  /// Set whenever verdict == refuted.
  std::optional<Witness> refuting_witness;
};

CertificationReport certify(const TriangularFamily& family, double p, const CertifyOptions& options = {});

/// Frame vectors f_i = k(., z_i) / sqrt(2pi m) and their duals d_i = S^{-1} f_i
/// for the un-normalised inner product <f, g> = int f conj(g) d theta. The
/// frame operator in coefficient space is S = E^H E / m (identity for m-th
/// roots of unity).
struct DualFrame {
  int n = 0;
  std::size_t m = 0;
  std::vector<Polynomial> frame;
  std::vector<Polynomial> duals;
  /// Condition number of S, equal to the p = 2 kappa.
  double condition = 1.0;

  /// sum_i <p, f_i> d_i
  Polynomial reconstruct_from_frame(const Polynomial& p) const;
  /// sum_i <p, d_i> f_i
  Polynomial reconstruct_from_duals(const Polynomial& p) const;
};

/// <f, g> = int_0^{2pi} f conj(g) d theta = 2pi sum_k f_k conj(g_k).
Complex inner_product(const Polynomial& f, const Polynomial& g);

/// Throws RankDeficientError if S is singular (m <= n or repeated points).
DualFrame dual_frame(const Generation& generation);

/// (1/m) sum_{|z_i - 1| > R/n} |p_n(z_i)|^2 / ||p_n||_2^2 with p_n = 1 + ... + z^n.
double kernel_tail(const Generation& generation, double R);

/// sup over the radial points of |w|^n.
double blaschke_bound(const RadialGeneration& radial);

}  // namespace mzkit
