// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mzkit/approx.hpp"
#include "mzkit/certifier.hpp"
#include "mzkit/cli.hpp"
#include "mzkit/io.hpp"

using namespace mzkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "failed: " + what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::size_t roots_count(int n) { return static_cast<std::size_t>(n) + 1; }
std::size_t doubled_count(int n) { return 2 * (static_cast<std::size_t>(n) + 1); }

TriangularFamily roots(std::vector<int> ns) { return generate_roots_of_unity(ns, roots_count); }
TriangularFamily doubled(std::vector<int> ns) { return generate_roots_of_unity(ns, doubled_count, 0.0, "doubled"); }

Polynomial random_poly(Rng& rng, int n) {
  std::vector<Complex> c(n + 1);
  for (auto& x : c) x = rng.complex_normal();
  return Polynomial(c);
}

double chord(double a, double b) { return 2.0 * std::abs(std::sin((a - b) / 2.0)); }

// 1. roots of unity are tight frames with A = B = 2pi
Outcome tight_frame() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n : {3, 8, 16, 64}) {
    const auto fb = frame_bounds_p2(roots({n}).generations[0]);
    worst = std::max({worst, std::abs(fb.kappa - 1.0), std::abs(fb.A - kTwoPi) / kTwoPi, std::abs(fb.B - kTwoPi) / kTwoPi});
    o.require(std::abs(fb.kappa - 1.0) <= 1e-9, "|kappa - 1| <= 1e-9 at n=" + std::to_string(n));
    o.require(std::abs(fb.A - kTwoPi) <= 1e-9 * kTwoPi, "A = 2pi at n=" + std::to_string(n));
    o.require(std::abs(fb.B - kTwoPi) <= 1e-9 * kTwoPi, "B = 2pi at n=" + std::to_string(n));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 1.0, "runtime < 1 s");
  o.detail = "max deviation " + fmt(worst) + ", " + fmt(secs) + " s" + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// 2. excess family minus the point 1
Outcome counterexample() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> ns = {8, 16, 32, 64};
  const auto fam = generate_excess_family(ns, true);
  double worst = 0.0;
  for (const auto& g : fam.generations) {
    const Polynomial ones = ones_polynomial(g.n);
    const double d = discrete_norm(ones, g, 2.0);
    const double ratio = lp_norm(ones, 2.0).value / (d * d);
    const double expected = kTwoPi * (g.n + 1);
    worst = std::max(worst, std::abs(ratio - expected));
    o.require(std::abs(ratio - expected) <= 1e-8, "ratio = 2pi(n+1) at n=" + std::to_string(g.n));
  }

  const auto dir = std::filesystem::temp_directory_path() / "mzkit-acceptance";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "excess-drop.json").string();
  io::write_family(path, fam);
  std::ostringstream out, err;
  const int code = cli::run({"certify", "--family", path, "--p", "2", "--budget", "0"}, out, err);
  o.require(code == cli::kRefuted, "certify exit code 2 (got " + std::to_string(code) + ")");
  if (code == cli::kRefuted) {
    const auto report = io::json::parse(out.str());
    o.require(report["refuting_witness"]["poly_ref"] == "ones", "ones witness");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 5.0, "runtime < 5 s");
  o.detail = "max |ratio - 2pi(n+1)| " + fmt(worst) + ", exit " + std::to_string(code) + ", " + fmt(secs) + " s" +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// 3. Plancherel-Polya pair
Outcome plancherel_polya() {
  Outcome o;
  const std::vector<int> ns = {8, 16, 32, 64};

  // (a) doubled roots plus n points packed into an arc of length 1/(2n) at angle 1
  std::vector<double> growth;
  for (int n : ns) {
    Generation g = doubled({n}).generations[0];
    for (int k = 0; k < n; ++k) g.angles.push_back(1.0 + k * 0.5 / (n * static_cast<double>(n)));
    std::sort(g.angles.begin(), g.angles.end());
    const Polynomial peak = fejer_peak(n + 1).rotated(unit(1.0));
    growth.push_back(discrete_norm(peak, g, 1.0) / lp_norm(peak, 1.0).value);
  }
  bool increasing = true;
  for (std::size_t i = 1; i < growth.size(); ++i) increasing = increasing && growth[i] > growth[i - 1];
  const Trend trend = log_log_trend(ns, growth);
  o.require(increasing && trend.diverging, "clustered disc/continuous ratio grows");

  // (b) bounded arc counts give an n-independent upper constant
  std::vector<std::pair<std::string, TriangularFamily>> families = {
      {"doubled", doubled(ns)},
      {"perturbed", perturb_angular(doubled(ns), 0.3, 7)},
      {"excess", generate_excess_family(ns, false)}};
  double worst_spread = 0.0;
  for (const auto& [label, fam] : families) {
    for (double p : {1.0, 2.0}) {
      std::vector<double> constants;
      double arc_max = 0.0;
      for (const auto& g : fam.generations) {
        arc_max = std::max(arc_max, arc_count_sup(g));
        Rng rng(1000 + g.n);
        double c = 0.0;
        for (int t = 0; t < 200; ++t) {
          const Polynomial q = random_poly(rng, g.n);
          c = std::max(c, std::pow(discrete_norm(q, g, p), p) / lp_norm(q, p).value);
        }
        constants.push_back(c);
      }
      const auto [lo, hi] = std::minmax_element(constants.begin(), constants.end());
      worst_spread = std::max(worst_spread, *hi / *lo);
      o.require(arc_max <= 1.0, label + " arc_count_sup bounded");
      o.require(*hi <= 2.0 * *lo, label + " C' within factor 2 at p=" + fmt(p));
    }
  }
  o.detail = "cluster ratios " + fmt(growth.front()) + " -> " + fmt(growth.back()) + " (slope " + fmt(trend.slope) +
             "), worst C' spread " + fmt(worst_spread) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// 4. Bernstein, dilation and radial monotonicity
Outcome bernstein_dilation() {
  Outcome o;
  std::size_t bernstein_bad = 0, dilation_bad = 0, hardy_bad = 0, checks = 0;
  for (int n : {8, 16, 32}) {
    for (double p : {1.0, 2.0, kInf}) {
      Rng rng(static_cast<std::uint64_t>(n) * 10 + (std::isinf(p) ? 9 : static_cast<int>(p)));
      for (int t = 0; t < 500; ++t) {
        const Polynomial q = random_poly(rng, n);
        const double base = lp_norm(q, p).norm();
        if (lp_norm(derivative(q), p).norm() > n * base * (1 + 1e-8)) ++bernstein_bad;
        const double r = rng.uniform(1.0, 1.5);
        if (lp_norm(dilate(q, r), p).norm() > std::pow(r, n) * base * (1 + 1e-8)) ++dilation_bad;
        const double r1 = rng.uniform(0.05, 1.0);
        const double r2 = rng.uniform(r1, 1.0);
        if (lp_norm(dilate(q, r1), p).value > lp_norm(dilate(q, r2), p).value + 1e-9) ++hardy_bad;
        ++checks;
      }
    }
  }
  o.require(bernstein_bad == 0, "Bernstein violations = 0");
  o.require(dilation_bad == 0, "dilation violations = 0");
  o.require(hardy_bad == 0, "radial monotonicity violations = 0");
  o.detail = std::to_string(checks) + " polynomials; violations bernstein=" + std::to_string(bernstein_bad) +
             " dilation=" + std::to_string(dilation_bad) + " radial=" + std::to_string(hardy_bad);
  return o;
}

// 5. lower density estimator
Outcome density() {
  Outcome o;
  const std::vector<int> ns = {64, 128, 256, 512};
  const std::vector<double> R = {kTwoPi * 4};
  const double dr = lower_density(roots(ns), R, 64).extrapolated;
  const double dd = lower_density(doubled(ns), R, 64).extrapolated;
  o.require(std::abs(dr - 1 / kTwoPi) <= 0.05 / kTwoPi, "roots density 1/(2pi) +- 5%");
  o.require(std::abs(dd - 1 / kPi) <= 0.05 / kPi, "doubled density 1/pi +- 5%");

  TriangularFamily half{"half", {}};
  for (int n : ns) {
    Generation g{n, {}};
    for (int j = 0; j < 4 * n; ++j) g.angles.push_back(kPi * j / (4 * n));
    half.generations.push_back(g);
  }
  const double dh = lower_density(half, R, 64).extrapolated;
  o.require(dh == 0.0, "half-circle density exactly 0");

  double worst = 0.0;
  const std::vector<double> grid = {kTwoPi, 2 * kTwoPi, 4 * kTwoPi, 8 * kTwoPi};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto fam = perturb_angular(doubled({8, 16, 32}), 2.0, seed);
    const auto a = lower_density(fam, grid, 8);
    const auto b = lower_density(rotate(fam, 0.7 * static_cast<double>(seed)), grid, 8);
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t k = 0; k < a.n_grid.size(); ++k)
        worst = std::max(worst, std::abs(a.min_counts[i][k] - b.min_counts[i][k]));
  }
  o.require(worst <= 1e-12, "rotation invariance to 1e-12");
  o.detail = "roots " + fmt(dr) + ", doubled " + fmt(dd) + ", half " + fmt(dh) + ", rotation drift " + fmt(worst) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// 6. separated extraction and perturbation stability
Outcome extraction_stability() {
  Outcome o;
  std::size_t uncovered = 0;
  double min_sep_margin = kInf;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    TriangularFamily fam{"random", {}};
    for (int n : {8, 16, 32}) {
      Generation g{n, {}};
      for (int j = 0; j < 3 * n; ++j) g.angles.push_back(rng.uniform(0, kTwoPi));
      std::sort(g.angles.begin(), g.angles.end());
      fam.generations.push_back(g);
    }
    const double eps = rng.uniform(0.2, 2.0);
    const auto sep = extract_separated(fam, eps);
    const double s = separation_constant(sep);
    min_sep_margin = std::min(min_sep_margin, s - eps / 3);
    o.require(s >= eps / 3, "eps/3 separation (seed " + std::to_string(seed) + ")");
    for (std::size_t g = 0; g < fam.generations.size(); ++g) {
      const int n = fam.generations[g].n;
      for (double a : fam.generations[g].angles) {
        double best = kInf;
        for (double b : sep.generations[g].angles) best = std::min(best, chord(a, b));
        if (best > 3 * eps / n) ++uncovered;
      }
    }
  }
  o.require(uncovered == 0, "3 eps/n covering");

  const std::vector<int> ns = {8, 16, 32};
  const auto base = doubled(ns);
  const auto pert = perturb_angular(base, 0.05, 42);
  std::vector<double> kappas;
  double worst_growth = 0.0;
  for (std::size_t g = 0; g < ns.size(); ++g) {
    const double k0 = frame_bounds_p2(base.generations[g]).kappa;
    const double k1 = frame_bounds_p2(pert.generations[g]).kappa;
    kappas.push_back(k1);
    worst_growth = std::max(worst_growth, k1 / k0);
    o.require(k1 <= 4 * k0, "perturbed kappa <= 4 kappa at n=" + std::to_string(ns[g]));
  }
  const auto [lo, hi] = std::minmax_element(kappas.begin(), kappas.end());
  o.require(*hi <= 4 * *lo, "perturbed kappa within factor 4 across n");
  o.detail = "min separation margin " + fmt(min_sep_margin) + ", uncovered " + std::to_string(uncovered) +
             ", perturbed kappa " + fmt(*lo) + ".." + fmt(*hi) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// 7. dual frame reconstruction
Outcome dual_reconstruction() {
  Outcome o;
  const auto fam = perturb_angular(doubled({16}), 0.5, 2024);
  const Generation& g = fam.generations[0];
  o.require(separation_constant(fam) > 0, "family separated");
  const DualFrame df = dual_frame(g);
  Rng rng(99);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Polynomial p = random_poly(rng, 16);
    const double scale = std::sqrt(p.coeff_energy());
    const Polynomial a = df.reconstruct_from_frame(p) - p;
    const Polynomial b = df.reconstruct_from_duals(p) - p;
    worst = std::max({worst, std::sqrt(a.coeff_energy()) / scale, std::sqrt(b.coeff_energy()) / scale});
  }
  o.require(worst <= 1e-8, "residual <= 1e-8");
  o.detail = "kappa " + fmt(df.condition) + ", max relative residual " + fmt(worst) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// 8. kernel tail decay against c/R
Outcome kernel_decay() {
  Outcome o;
  const Generation g = doubled({32}).generations[0];
  const std::vector<double> Rs = {4, 8, 16};
  std::vector<double> scaled;
  double log_sum = 0.0;
  for (double R : Rs) {
    scaled.push_back(R * kernel_tail(g, R));
    log_sum += std::log(scaled.back());
  }
  const double c = std::exp(log_sum / Rs.size());
  std::string ratios;
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    const double ratio = scaled[i] / c;
    ratios += (i ? ", " : "") + fmt(ratio);
    o.require(ratio >= 0.5 && ratio <= 2.0, "R*tail/c within factor 2 at R=" + fmt(Rs[i]));
  }
  o.detail = "c = " + fmt(c) + ", R*tail/c = " + ratios + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// 9. uniform approximation of |sin| and exact representability
Outcome approximation() {
  Outcome o;
  const std::vector<int> ns = {8, 16, 32, 64};
  std::vector<int> two_n;
  for (int n : ns) two_n.push_back(2 * n);
  const auto fam = doubled(two_n);
  const auto rows = convergence_experiment([](double a) { return Complex(std::abs(std::sin(a))); }, fam, ns);
  const double drop = rows.front().grid_error / rows.back().grid_error;
  o.require(drop >= 2.0, "grid error drops >= 2x from n=8 to n=64");

  Rng rng(5);
  double worst = 0.0;
  for (int n : ns) {
    TrigPolynomial t;
    t.a0 = rng.normal();
    for (int i = 0; i < n; ++i) {
      t.a.push_back(rng.complex_normal());
      t.b.push_back(std::conj(t.a.back()));
    }
    const Generation& g = *fam.find(2 * n);
    std::vector<Sample> s;
    for (double a : g.angles) s.push_back({a, t(a)});
    worst = std::max(worst, chebyshev_fit(s, n).discrete_error);
  }
  o.require(worst <= 1e-9, "exact-representability residual <= 1e-9");
  o.detail = "grid error " + fmt(rows.front().grid_error) + " -> " + fmt(rows.back().grid_error) + " (" + fmt(drop) +
             "x), exact residual " + fmt(worst) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

// 10. modulus bound for radially pushed families
Outcome blaschke() {
  Outcome o;
  std::string values;
  for (double eps : {0.1, 1.0}) {
    const double b = blaschke_bound(push_radial(roots({100}).generations[0], eps));
    values += (values.empty() ? "" : ", ") + fmt(b);
    o.require(std::abs(b - std::exp(-eps)) <= 0.01 * std::exp(-eps), "within 1% of e^-eps at eps=" + fmt(eps));
  }
  const std::vector<int> ns = {4, 8, 16, 32, 64, 128};
  const std::vector<TriangularFamily> families = {roots(ns), doubled(ns), generate_excess_family(ns, false),
                                                  perturb_angular(doubled(ns), 0.5, 3)};
  double sup = 0.0;
  for (const auto& fam : families)
    for (const auto& g : fam.generations)
      for (double eps : {0.01, 0.5, 1.0, 3.0})
        if (eps < g.n) sup = std::max(sup, blaschke_bound(push_radial(g, eps)));
  o.require(sup < 1.0, "sup |gamma|^n < 1");
  o.detail = "n=100 bounds " + values + ", sup over pushed families " + fmt(sup) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

}  // namespace

int main() {
  set_warning_handler([](std::string_view) {});
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"tight frame of roots of unity", tight_frame},
      {"excess family counterexample", counterexample},
      {"Plancherel-Polya necessity and sufficiency", plancherel_polya},
      {"Bernstein, dilation and radial monotonicity", bernstein_dilation},
      {"lower density estimator", density},
      {"separated extraction and perturbation stability", extraction_stability},
      {"dual frame reconstruction", dual_reconstruction},
      {"kernel tail decay", kernel_decay},
      {"uniform approximation of |sin|", approximation},
      {"Blaschke modulus bound", blaschke},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
