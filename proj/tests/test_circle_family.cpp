#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mzkit/circle_family.hpp"
#include "mzkit/error.hpp"

using namespace mzkit;

namespace {

std::size_t roots_count(int n) { return static_cast<std::size_t>(n) + 1; }
std::size_t doubled_count(int n) { return 2 * (static_cast<std::size_t>(n) + 1); }

TriangularFamily roots(std::vector<int> ns, double rotation = 0.0) {
  return generate_roots_of_unity(ns, roots_count, rotation);
}

TriangularFamily doubled(std::vector<int> ns) { return generate_roots_of_unity(ns, doubled_count, 0.0, "doubled"); }

double chord(double a, double b) { return 2.0 * std::abs(std::sin((a - b) / 2.0)); }

TriangularFamily random_family(std::uint64_t seed, std::vector<int> ns, std::size_t points_per_n) {
  Rng rng(seed);
  TriangularFamily f{"random", {}};
  for (int n : ns) {
    Generation g{n, {}};
    for (std::size_t i = 0; i < points_per_n * static_cast<std::size_t>(n); ++i) g.angles.push_back(rng.uniform(0, kTwoPi));
    std::sort(g.angles.begin(), g.angles.end());
    f.generations.push_back(g);
  }
  return f;
}

}  // namespace

TEST_CASE("roots of unity generator") {
  const int n3[] = {3};
  auto f = generate_roots_of_unity(n3, [](int) { return std::size_t{4}; });
  REQUIRE(f.generations.size() == 1);
  const auto& a = f.generations[0].angles;
  REQUIRE(a.size() == 4);
  for (int j = 0; j < 4; ++j) CHECK(a[j] == doctest::Approx(j * kPi / 2).epsilon(1e-15));

  auto r = generate_roots_of_unity(n3, [](int) { return std::size_t{4}; }, kPi / 4);
  for (int j = 0; j < 4; ++j) CHECK(r.generations[0].angles[j] == doctest::Approx(kPi / 4 + j * kPi / 2));

  auto d = doubled({8});
  CHECK(d.generations[0].m() == 18);
  for (std::size_t j = 0; j < 18; ++j) CHECK(d.generations[0].angles[j] == doctest::Approx(kTwoPi * j / 18));
}

TEST_CASE("excess family generator") {
  auto keep = generate_excess_family(std::vector<int>{3}, false);
  REQUIRE(keep.generations[0].m() == 5);
  for (int j = 0; j < 5; ++j) CHECK(keep.generations[0].angles[j] == doctest::Approx(kTwoPi * j / 5));

  auto drop = generate_excess_family(std::vector<int>{3}, true);
  REQUIRE(drop.generations[0].m() == 4);
  for (int j = 1; j <= 4; ++j) CHECK(drop.generations[0].angles[j - 1] == doctest::Approx(kTwoPi * j / 5));

  auto one = generate_excess_family(std::vector<int>{1}, false);
  REQUIRE(one.generations[0].m() == 3);
  CHECK(one.generations[0].angles[1] == doctest::Approx(kTwoPi / 3));
  CHECK(one.generations[0].angles[2] == doctest::Approx(2 * kTwoPi / 3));
}

TEST_CASE("perturb_angular") {
  auto base = roots({4, 8, 16});
  auto zero = perturb_angular(base, 0.0, 7);
  for (std::size_t g = 0; g < base.generations.size(); ++g) CHECK(zero.generations[g].angles == base.generations[g].angles);

  auto a = perturb_angular(base, 0.1, 1);
  auto b = perturb_angular(base, 0.1, 1);
  for (std::size_t g = 0; g < base.generations.size(); ++g) CHECK(a.generations[g].angles == b.generations[g].angles);

  auto c = perturb_angular(base, 0.1, 2);
  CHECK(c.generations[2].angles != a.generations[2].angles);

  auto r16 = roots({16});
  auto p16 = perturb_angular(r16, 0.5, 3);
  CHECK(separation_constant(r16) - separation_constant(p16) <= 2 * 0.5 + 1e-12);
}

TEST_CASE("push_radial") {
  Generation g{4, {0.0}};
  auto w = push_radial(g, 1.0);
  CHECK(w.points[0].real() == doctest::Approx(0.75));
  CHECK(w.points[0].imag() == doctest::Approx(0.0));

  auto r = push_radial(roots({16}).generations[0], 1.0);
  for (auto z : r.points) CHECK(std::abs(z) == doctest::Approx(15.0 / 16.0).epsilon(1e-14));

  CHECK_THROWS_AS(push_radial(g, 0.0), InvalidArgument);
  CHECK_THROWS_AS(push_radial(g, 4.0), InvalidArgument);
}

TEST_CASE("separation constant") {
  CHECK(separation_constant(roots({1, 2, 3})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(separation_constant(roots({3})) == doctest::Approx(3 * 2 * std::sin(kPi / 4)).epsilon(1e-14));
  TriangularFamily dup{"dup", {Generation{2, {0.5, 0.5, 2.0}}}};
  CHECK(separation_constant(dup) == 0.0);
}

TEST_CASE("window counts") {
  const std::vector<double> a = {0.0, 1.0, 2.0, 3.0};
  CHECK(count_in_window(a, 0.0, 1.0) == 1);
  CHECK(count_in_window(a, 0.0, 1.0000001) == 2);
  CHECK(count_in_window(a, 5.5, 1.0) == 1);  // wraps to 0 + 2pi
  CHECK(count_in_window(a, 3.5, 2.0) == 0);
  CHECK(min_window_count(a, 2.0) == 0);
  CHECK(min_window_count(a, 1.5) == 0);
  CHECK(min_window_count(a, 3.5) == 1);
  CHECK(max_window_count(a, 2.0) == 2);
  CHECK(max_window_count(a, kTwoPi) == 4);
  CHECK(min_window_count(a, 2 * kTwoPi) == 8);
}

TEST_CASE("arc_count_sup") {
  CHECK(arc_count_sup(roots({8}).generations[0]) == doctest::Approx(8.0 / 9.0));
  CHECK(arc_count_sup(doubled({8}).generations[0]) == doctest::Approx(8.0 / 18.0));
  Generation cluster{8, std::vector<double>(9, 1.0)};
  for (int i = 0; i < 9; ++i) cluster.angles[i] += i * 0.01;
  CHECK(arc_count_sup(cluster) == doctest::Approx(8.0));
}

TEST_CASE("arc_count_sup dominates multiplicity") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + trial;
    Generation g{n, {}};
    const double base = rng.uniform(0, 3);
    const std::size_t mult = 1 + trial % 5;
    for (std::size_t k = 0; k < mult; ++k) g.angles.push_back(base);
    for (int k = 0; k < 2 * n; ++k) g.angles.push_back(rng.uniform(3.5, 6.2));
    std::sort(g.angles.begin(), g.angles.end());
    CHECK(arc_count_sup(g) >= static_cast<double>(n) / g.m() * mult - 1e-12);
  }
}

TEST_CASE("lower density") {
  const std::vector<double> R = {kTwoPi * 4};
  auto r = lower_density(roots({64, 128, 256, 512}), R, 64);
  CHECK(r.extrapolated == doctest::Approx(1 / kTwoPi).epsilon(0.05));
  auto d = lower_density(doubled({64, 128, 256, 512}), R, 64);
  CHECK(d.extrapolated == doctest::Approx(1 / kPi).epsilon(0.05));

  TriangularFamily half{"half", {}};
  for (int n : {8, 16, 32}) {
    Generation g{n, {}};
    for (int j = 0; j < 4 * n; ++j) g.angles.push_back(kPi * j / (4 * n));
    half.generations.push_back(g);
  }
  const std::vector<double> Rh = {kTwoPi, 2 * kTwoPi};
  auto h = lower_density(half, Rh, 8);
  CHECK(h.extrapolated == 0.0);
  CHECK(h.min_counts.size() == 2);
  CHECK(h.min_counts[0].size() == 3);
}

TEST_CASE("lower density is rotation invariant") {
  const std::vector<double> R = {kTwoPi, 2 * kTwoPi, 4 * kTwoPi};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto f = random_family(seed, {8, 16, 32}, 2);
    auto rf = rotate(f, 0.3 + seed);
    auto a = lower_density(f, R, 8);
    auto b = lower_density(rf, R, 8);
    for (std::size_t i = 0; i < R.size(); ++i)
      for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(a.min_counts[i][k] - b.min_counts[i][k]) <= 1e-12);
  }
}

TEST_CASE("extract_separated") {
  auto r = roots({8});
  auto same = extract_separated(r, kTwoPi * (8.0 / 9.0) * 0.99);
  CHECK(same.generations[0].angles == r.generations[0].angles);

  auto d = doubled({4, 8});
  auto dd = extract_separated(d, 1.0);
  for (std::size_t g = 0; g < d.generations.size(); ++g) CHECK(dd.generations[g].angles == d.generations[g].angles);

  TriangularFamily dup{"dup", {}};
  for (const auto& g : r.generations) {
    Generation x{g.n, {}};
    for (double a : g.angles) {
      x.angles.push_back(a);
      x.angles.push_back(a);
    }
    dup.generations.push_back(x);
  }
  auto undup = extract_separated(dup, 1.0);
  CHECK(undup.generations[0].angles == r.generations[0].angles);
}

TEST_CASE("extract_separated separation and covering on random families") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const double eps = 0.5 + 0.25 * static_cast<double>(seed % 4);
    auto f = random_family(seed, {8, 16, 32}, 3);
    auto s = extract_separated(f, eps);
    CHECK(separation_constant(s) >= eps / 3 - 1e-9);
    for (std::size_t g = 0; g < f.generations.size(); ++g) {
      const int n = f.generations[g].n;
      for (double a : f.generations[g].angles) {
        double best = kInf;
        for (double b : s.generations[g].angles) best = std::min(best, chord(a, b));
        CHECK(best <= 3 * eps / n + 1e-12);
      }
    }
  }
}

TEST_CASE("flatten") {
  auto f = flatten(Generation{4, {0.0, kPi}}, 4.0);
  REQUIRE(f.points.size() == 5);
  const double expect[] = {-4, -2, 0, 2, 4};
  for (int i = 0; i < 5; ++i) CHECK(f.points[i] == doctest::Approx(expect[i]));

  auto g = flatten(Generation{1, {0.0}}, 2.5);
  REQUIRE(g.points.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(g.points[i] == doctest::Approx(i - 2.0));

  auto eq = flatten(doubled({8}).generations[0], 10.0);
  for (std::size_t i = 1; i < eq.points.size(); ++i)
    CHECK(eq.points[i] - eq.points[i - 1] == doctest::Approx(8.0 / 18.0).epsilon(1e-12));
}

TEST_CASE("perturbation moves separation by at most 2 eps") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto base = doubled({8, 16, 32});
    const double eps = 0.05 * static_cast<double>(seed);
    auto p = perturb_angular(base, eps, seed);
    CHECK(std::abs(separation_constant(base) - separation_constant(p)) <= 2 * eps + 1e-12);
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS((Generation{0, {0.0}}.validate()), InvalidArgument);
  CHECK_THROWS_AS((Generation{2, {1.0, 0.5}}.validate()), InvalidArgument);
  CHECK_THROWS_AS((Generation{2, {kTwoPi}}.validate()), InvalidArgument);
  CHECK_NOTHROW((Generation{2, {0.5, 0.5}}.validate()));
  CHECK_THROWS_AS((Generation{2, {0.5, 0.5}}.validate(true)), InvalidArgument);
  TriangularFamily f{"x", {Generation{3, {0.0}}, Generation{3, {0.0}}}};
  CHECK_THROWS_AS(f.validate(), InvalidArgument);
  CHECK(roots({2, 5}).find(5) != nullptr);
  CHECK(roots({2, 5}).find(4) == nullptr);
}
