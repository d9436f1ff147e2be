#include "mzkit/circle_family.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mzkit/error.hpp"

namespace mzkit {

namespace {

double chord(double a, double b) { return 2.0 * std::abs(std::sin(0.5 * (b - a))); }

// Number of points of the periodic lift strictly below t.
long long lifted_below(std::span<const double> sorted, double t) {
  const auto m = static_cast<long long>(sorted.size());
  const double periods = std::floor(t / kTwoPi);
  const double r = t - periods * kTwoPi;
  const auto idx = std::lower_bound(sorted.begin(), sorted.end(), r) - sorted.begin();
  return static_cast<long long>(periods) * m + idx;
}

// Lift count at an exact point angle, avoiding the round trip through t/2pi.
long long lifted_below_point(std::span<const double> sorted, std::size_t j) {
  return std::lower_bound(sorted.begin(), sorted.end(), sorted[j]) - sorted.begin();
}

// Window length as whole turns plus a remainder in [0, 2pi).
std::pair<std::size_t, double> split_turns(double length) {
  const double turns = std::floor(length / kTwoPi);
  const double rem = length - turns * kTwoPi;
  if (rem < 0.0) return {static_cast<std::size_t>(turns) - 1, rem + kTwoPi};
  if (rem >= kTwoPi) return {static_cast<std::size_t>(turns) + 1, rem - kTwoPi};
  return {static_cast<std::size_t>(turns), rem};
}

template <typename Pick>
std::size_t extreme_window_count(std::span<const double> sorted, double total_length, Pick pick) {
  if (sorted.empty() || total_length <= 0.0) return 0;
  const auto [turns, length] = split_turns(total_length);
  const std::size_t whole = turns * sorted.size();
  if (length == 0.0) return whole;
  // The count is piecewise constant in x and changes only when x crosses a
  // point angle (point leaves) or a point angle minus length (point enters),
  // so the extremes are attained at those x.
  std::size_t best = 0;
  bool first = true;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    const long long at = lifted_below_point(sorted, j);
    const auto starting_here = static_cast<std::size_t>(lifted_below(sorted, sorted[j] + length) - at);
    const auto ending_here = static_cast<std::size_t>(at - lifted_below(sorted, sorted[j] - length));
    for (std::size_t c : {starting_here, ending_here}) {
      if (first) {
        best = c;
        first = false;
      } else {
        best = pick(best, c);
      }
    }
  }
  return whole + best;
}

}  // namespace

std::vector<Complex> Generation::points() const {
  std::vector<Complex> out;
  out.reserve(angles.size());
  for (double t : angles) out.push_back(unit(t));
  return out;
}

void Generation::validate(bool strict) const {
  const std::string where = "generation n=" + std::to_string(n);
  if (n < 1) throw InvalidArgument(where + ": n must be >= 1");
  for (std::size_t j = 0; j < angles.size(); ++j) {
    const double t = angles[j];
    if (!std::isfinite(t) || t < 0.0 || t >= kTwoPi)
      throw InvalidArgument(where + ": angle[" + std::to_string(j) + "] = " + std::to_string(t) +
                            " outside [0, 2pi)");
    if (j > 0) {
      const double prev = angles[j - 1];
      if (t < prev || (strict && t == prev))
        throw InvalidArgument(where + ": angle[" + std::to_string(j) + "] not " +
                              (strict ? "strictly " : "") + "increasing");
    }
  }
}

void TriangularFamily::validate(bool strict) const {
  for (std::size_t g = 0; g < generations.size(); ++g) {
    generations[g].validate(strict);
    if (g > 0 && generations[g].n <= generations[g - 1].n)
      throw InvalidArgument("family '" + name + "': generation indices not strictly increasing at position " +
                            std::to_string(g));
  }
}

const Generation* TriangularFamily::find(int n) const {
  for (const auto& g : generations)
    if (g.n == n) return &g;
  return nullptr;
}

TriangularFamily generate_roots_of_unity(std::span<const int> n_list, const CountFn& count_fn,
                                         double rotation, std::string name) {
  TriangularFamily family{std::move(name), {}};
  for (int n : n_list) {
    const std::size_t m = count_fn(n);
    if (m == 0) throw InvalidArgument("point count for n=" + std::to_string(n) + " must be >= 1");
    Generation g{n, {}};
    g.angles.reserve(m);
    for (std::size_t j = 0; j < m; ++j)
      g.angles.push_back(wrap_angle(rotation + kTwoPi * static_cast<double>(j) / static_cast<double>(m)));
    std::sort(g.angles.begin(), g.angles.end());
    family.generations.push_back(std::move(g));
  }
  family.validate();
  return family;
}

TriangularFamily generate_excess_family(std::span<const int> n_list, bool drop_unit_point) {
  TriangularFamily family{drop_unit_point ? "excess-drop" : "excess", {}};
  for (int n : n_list) {
    Generation g{n, {}};
    const int m = n + 2;
    for (int j = drop_unit_point ? 1 : 0; j < m; ++j)
      g.angles.push_back(kTwoPi * j / m);
    family.generations.push_back(std::move(g));
  }
  family.validate();
  return family;
}

TriangularFamily perturb_angular(const TriangularFamily& family, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("perturbation epsilon must be >= 0");
  Rng rng(seed);
  TriangularFamily out{family.name, {}};
  for (const auto& g : family.generations) {
    const double h = epsilon / g.n;
    Generation p{g.n, {}};
    p.angles.reserve(g.m());
    for (double t : g.angles) p.angles.push_back(wrap_angle(t + rng.uniform(-h, h)));
    std::sort(p.angles.begin(), p.angles.end());
    out.generations.push_back(std::move(p));
  }
  return out;
}

TriangularFamily rotate(const TriangularFamily& family, double angle) {
  TriangularFamily out{family.name, {}};
  for (const auto& g : family.generations) {
    Generation r{g.n, {}};
    for (double t : g.angles) r.angles.push_back(wrap_angle(t + angle));
    std::sort(r.angles.begin(), r.angles.end());
    out.generations.push_back(std::move(r));
  }
  return out;
}

RadialGeneration push_radial(const Generation& generation, double epsilon) {
  if (!(epsilon > 0.0) || epsilon >= generation.n)
    throw InvalidArgument("radial push requires 0 < eps < n (eps=" + std::to_string(epsilon) +
                          ", n=" + std::to_string(generation.n) + ")");
  const double radius = 1.0 - epsilon / generation.n;
  RadialGeneration out{generation.n, {}};
  for (double t : generation.angles) out.points.push_back(std::polar(radius, t));
  return out;
}

double min_chordal_gap(const Generation& generation) {
  const auto& a = generation.angles;
  if (a.size() < 2)
    throw InvalidArgument("generation n=" + std::to_string(generation.n) +
                          " has fewer than 2 points; separation undefined");
  double best = chord(a.back(), a.front() + kTwoPi);
  for (std::size_t j = 1; j < a.size(); ++j) best = std::min(best, chord(a[j - 1], a[j]));
  return best;
}

double separation_constant(const TriangularFamily& family) {
  double best = kInf;
  for (const auto& g : family.generations) best = std::min(best, g.n * min_chordal_gap(g));
  return best;
}

std::size_t count_in_window(std::span<const double> sorted, double x, double length) {
  if (sorted.empty() || length <= 0.0) return 0;
  const auto [turns, rem] = split_turns(length);
  return turns * sorted.size() + static_cast<std::size_t>(lifted_below(sorted, x + rem) - lifted_below(sorted, x));
}

std::size_t min_window_count(std::span<const double> sorted, double length) {
  return extreme_window_count(sorted, length, [](std::size_t a, std::size_t b) { return std::min(a, b); });
}

std::size_t max_window_count(std::span<const double> sorted, double length) {
  return extreme_window_count(sorted, length, [](std::size_t a, std::size_t b) { return std::max(a, b); });
}

double arc_count_sup(const Generation& generation) {
  if (generation.angles.empty()) return 0.0;
  const double count = static_cast<double>(max_window_count(generation.angles, 1.0 / generation.n));
  return count * generation.n / static_cast<double>(generation.m());
}

DensityEstimate lower_density(const TriangularFamily& family, std::span<const double> R_grid,
                              int tail_start) {
  if (R_grid.empty()) throw InvalidArgument("R grid is empty");
  for (std::size_t r = 0; r < R_grid.size(); ++r) {
    if (!(R_grid[r] > 0.0)) throw InvalidArgument("R grid entries must be positive");
    if (r > 0 && R_grid[r] <= R_grid[r - 1]) throw InvalidArgument("R grid must be increasing");
  }
  const bool has_tail = std::any_of(family.generations.begin(), family.generations.end(),
                                    [&](const Generation& g) { return g.n >= tail_start; });
  if (!has_tail)
    throw InvalidArgument("no generation with n >= tail_start=" + std::to_string(tail_start));

  DensityEstimate est;
  est.R_grid.assign(R_grid.begin(), R_grid.end());
  est.tail_start = tail_start;
  for (const auto& g : family.generations) est.n_grid.push_back(g.n);
  for (double R : R_grid) {
    std::vector<double> row;
    double tail = kInf;
    for (const auto& g : family.generations) {
      const double v = static_cast<double>(min_window_count(g.angles, R / g.n)) / R;
      row.push_back(v);
      if (g.n >= tail_start) tail = std::min(tail, v);
    }
    est.min_counts.push_back(std::move(row));
    est.tail_min.push_back(tail);
  }
  est.extrapolated = est.tail_min.back();
  return est;
}

TriangularFamily extract_separated(const TriangularFamily& family, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("extraction epsilon must be > 0");
  TriangularFamily out{family.name, {}};
  for (const auto& g : family.generations) {
    const auto arcs = static_cast<std::size_t>(std::ceil(kTwoPi * g.n / epsilon));
    const double arc_len = kTwoPi / static_cast<double>(arcs);

    std::vector<double> representatives;
    std::size_t last_bucket = arcs;  // sentinel: none yet
    for (double t : g.angles) {
      const auto bucket = std::min(arcs - 1, static_cast<std::size_t>(t / arc_len));
      if (bucket != last_bucket) {
        representatives.push_back(t);
        last_bucket = bucket;
      }
    }

    // separated means n * chord >= eps/3, compared in exactly that form
    const double target = epsilon / 3.0;
    auto far_enough = [&](double a, double b) { return g.n * chord(a, b) >= target; };
    std::vector<double> kept;
    for (double t : representatives)
      if (kept.empty() || far_enough(kept.back(), t)) kept.push_back(t);
    while (kept.size() >= 2 && !far_enough(kept.back(), kept.front() + kTwoPi)) kept.pop_back();

    if (kept.empty())
      throw InvalidArgument("extraction with eps=" + std::to_string(epsilon) +
                            " leaves generation n=" + std::to_string(g.n) + " empty");
    out.generations.push_back(Generation{g.n, std::move(kept)});
  }
  return out;
}

FlattenedSequence flatten(const Generation& generation, double K) {
  if (!(K > 0.0)) throw InvalidArgument("flatten window half-width must be > 0");
  const double n = generation.n;
  FlattenedSequence out{generation.n, K, {}};
  for (double t : generation.angles) {
    const double base = n * t / kTwoPi;
    const auto k_lo = static_cast<long long>(std::ceil((-K - base) / n));
    const auto k_hi = static_cast<long long>(std::floor((K - base) / n));
    for (long long k = k_lo; k <= k_hi; ++k) {
      const double x = base + n * static_cast<double>(k);
      if (x >= -K && x <= K) out.points.push_back(x);
    }
  }
  std::sort(out.points.begin(), out.points.end());
  return out;
}

}  // namespace mzkit
