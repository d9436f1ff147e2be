#pragma once

// Triangular families of sampling points on the unit circle: construction,
// perturbation, and the metric quantities (separation, arc counts, lower
// density) that decide whether a family samples polynomials stably.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mzkit/numeric.hpp"

namespace mzkit {

/// One generation Z(n): the sampling points used for polynomials of degree n,
/// stored as angles in [0, 2pi), sorted. m_n is the number of points.
///
/// In memory, repeated angles are allowed (clustered and duplicated test
/// families need them); the family file format requires strictly increasing
/// angles and is checked at the IO boundary.
struct Generation {
  int n = 0;
  std::vector<double> angles;

  std::size_t m() const noexcept { return angles.size(); }
  std::vector<Complex> points() const;

  /// Throws InvalidArgument unless n >= 1 and the angles are sorted and in
  /// [0, 2pi). With `strict`, repeated angles are rejected too.
  void validate(bool strict = false) const;
};

struct TriangularFamily {
  std::string name;
  std::vector<Generation> generations;

  /// Generation indices strictly increasing, every generation valid.
  void validate(bool strict = false) const;

  /// Generation with index n, or nullptr.
  const Generation* find(int n) const;
};

/// Points pushed inside the disk, w_j = (1 - eps/n) z_j.
struct RadialGeneration {
  int n = 0;
  std::vector<Complex> points;
};

/// Windowed minimum counts. min_counts[r][k] is, for window scale R_grid[r]
/// and generation n_grid[k], min_x #(Z(n) in [x, x + R/n)) / R.
struct DensityEstimate {
  std::vector<double> R_grid;
  std::vector<int> n_grid;
  std::vector<std::vector<double>> min_counts;
  /// Per R: minimum of min_counts over generations with n >= tail_start.
  std::vector<double> tail_min;
  int tail_start = 0;
  /// tail_min at the largest R; the estimate of D^-.
  double extrapolated = 0.0;
};

/// Periodised sequence n*theta/(2pi) + n*k restricted to [-K, K].
struct FlattenedSequence {
  int n = 0;
  double K = 0.0;
  std::vector<double> points;
};

// ---------------------------------------------------------------------------
// Construction

using CountFn = std::function<std::size_t(int)>;

/// count_fn(n) equispaced points per generation, offset by `rotation`.
TriangularFamily generate_roots_of_unity(std::span<const int> n_list, const CountFn& count_fn,
                                         double rotation = 0.0, std::string name = "roots");

/// (n+2)-nd roots of unity; with drop_unit_point the point 1 is removed from
/// every generation, leaving exactly n+1 points.
TriangularFamily generate_excess_family(std::span<const int> n_list, bool drop_unit_point);

/// Moves every angle by an independent uniform draw in [-eps/n, eps/n].
TriangularFamily perturb_angular(const TriangularFamily& family, double epsilon,
                                 std::uint64_t seed);

/// Rotates every generation by `angle`.
TriangularFamily rotate(const TriangularFamily& family, double angle);

RadialGeneration push_radial(const Generation& generation, double epsilon);

// ---------------------------------------------------------------------------
// Measurements

/// Minimum chordal distance between distinct indices of one generation,
/// wrap-around pair included. Requires at least two points.
double min_chordal_gap(const Generation& generation);

/// inf_n n * min_chordal_gap(Z(n)).
double separation_constant(const TriangularFamily& family);

/// Number of points (with multiplicity) of the periodic lift of `sorted`
/// lying in the half-open window [x, x + length).
std::size_t count_in_window(std::span<const double> sorted, double x, double length);

/// Exact minimum over x of count_in_window(sorted, x, length).
std::size_t min_window_count(std::span<const double> sorted, double length);

/// Exact maximum over x of count_in_window(sorted, x, length).
std::size_t max_window_count(std::span<const double> sorted, double length);

/// sup over arcs I of length 1/n of #(Z(n) in I) * n / m_n.
double arc_count_sup(const Generation& generation);

DensityEstimate lower_density(const TriangularFamily& family, std::span<const double> R_grid,
                              int tail_start);

/// One point per arc of length <= eps/n, then a greedy pass enforcing chordal
/// gaps >= eps/(3n). Every input point ends up within chordal 3eps/n of a
/// kept point.
TriangularFamily extract_separated(const TriangularFamily& family, double epsilon);

FlattenedSequence flatten(const Generation& generation, double K);

}  // namespace mzkit
