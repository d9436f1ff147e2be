#include "mzkit/certifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "mzkit/error.hpp"

namespace mzkit {

namespace {

// Stand-in for an infinite ratio inside log-log fits.
constexpr double kRatioCap = 1e16;

bool is_infinite_p(double p) { return std::isinf(p) && p > 0.0; }

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Eigen::MatrixXcd sampling_matrix(const Generation& g) {
  Eigen::MatrixXcd E(static_cast<Eigen::Index>(g.m()), g.n + 1);
  for (std::size_t j = 0; j < g.m(); ++j)
    for (int k = 0; k <= g.n; ++k) E(static_cast<Eigen::Index>(j), k) = unit(k * g.angles[j]);
  return E;
}

double ratio_from_powers(double continuous, double discrete) {
  if (continuous == 0.0 && discrete == 0.0) return 1.0;
  if (discrete == 0.0 || continuous == 0.0) return kInf;
  return std::max(continuous / discrete, discrete / continuous);
}

// discrete_norm^p, or the max for p = inf.
double discrete_power(const Polynomial& q, const Generation& g, double p) {
  const double d = discrete_norm(q, g, p);
  return is_infinite_p(p) ? d : std::pow(d, p);
}

std::string angle_label(const std::string& base, double theta) {
  if (theta == 0.0) return base;
  return base + "@" + fmt_double(theta);
}

Polynomial vanishing_polynomial(const Generation& g) {
  Polynomial q({Complex{1.0, 0.0}});
  for (double t : g.angles) q = q * Polynomial({-unit(t), Complex{1.0, 0.0}});
  return q;
}

double capped(double v) { return std::isfinite(v) ? std::min(v, kRatioCap) : kRatioCap; }

}  // namespace

FrameBounds frame_bounds_p2(const Generation& generation) {
  const std::size_t m = generation.m();
  if (m <= static_cast<std::size_t>(generation.n))
    throw RankDeficientError(generation.n, m,
                             "generation n=" + std::to_string(generation.n) + " has m=" + std::to_string(m) +
                                 " <= n points: sampling is not injective on P_n");
  const Eigen::MatrixXcd E = sampling_matrix(generation);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(E);
  const auto& s = svd.singularValues();
  const double s_max = s(0);
  const double s_min = s(s.size() - 1);

  FrameBounds fb;
  fb.n = generation.n;
  fb.m = m;
  const double md = static_cast<double>(m);
  fb.A = kTwoPi * md / (s_max * s_max);
  const double floor = s_max * static_cast<double>(std::max<std::size_t>(m, generation.n + 1)) *
                       std::numeric_limits<double>::epsilon();
  if (s_min <= floor) {
    fb.numerically_singular = true;
    fb.B = kInf;
    fb.kappa = kInf;
  } else {
    fb.B = kTwoPi * md / (s_min * s_min);
    fb.kappa = (s_max / s_min) * (s_max / s_min);
  }
  return fb;
}

double mz_ratio(const Polynomial& q, const Generation& generation, double p, int oversampling) {
  const double continuous = lp_norm(q, p, oversampling).value;
  return ratio_from_powers(continuous, discrete_power(q, generation, p));
}

Witness mz_lower_bound(const Generation& generation, double p, int budget, std::uint64_t seed,
                       int oversampling) {
  if (!(p == 1.0 || p == 2.0 || is_infinite_p(p))) throw InvalidArgument("lower bound supports p in {1, 2, inf}");
  if (generation.angles.empty()) throw InvalidArgument("lower bound on empty generation");
  const int n = generation.n;

  Witness best;
  best.n = n;
  best.ratio = -1.0;
  auto consider = [&](const Polynomial& q, double continuous, std::string label) {
    const double r = ratio_from_powers(continuous, discrete_power(q, generation, p));
    if (r > best.ratio) {
      best.ratio = r;
      best.label = std::move(label);
      best.poly = q;
    }
  };

  // Peak locations: 1, every sample point, and every gap midpoint (wrap included).
  const auto& a = generation.angles;
  std::vector<double> locations{0.0};
  for (std::size_t j = 0; j < a.size(); ++j) {
    locations.push_back(a[j]);
    const double next = j + 1 < a.size() ? a[j + 1] : a.front() + kTwoPi;
    locations.push_back(wrap_angle(0.5 * (a[j] + next)));
  }

  // Rotation leaves the continuous norm unchanged, so it is computed once per shape.
  struct Shape {
    std::string name;
    Polynomial poly;
    double continuous;
  };
  std::vector<Shape> shapes;
  shapes.push_back({"ones", ones_polynomial(n), 0.0});
  if (n >= 1) shapes.push_back({"fejer", fejer_peak((n + 2) / 2), 0.0});
  if (n >= 2) shapes.push_back({"localized-square", localized_square(n), 0.0});
  for (auto& s : shapes) s.continuous = lp_norm(s.poly, p, oversampling).value;

  for (const auto& s : shapes)
    for (double t : locations) consider(s.poly.rotated(unit(t)), s.continuous, angle_label(s.name, t));

  Rng rng(seed);
  for (int i = 0; i < budget; ++i) {
    std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
    for (auto& v : c) v = rng.complex_normal();
    Polynomial q(std::move(c));
    consider(q, lp_norm(q, p, oversampling).value, "random#" + std::to_string(i));
  }
  return best;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Trend log_log_trend(const std::vector<int>& n, const std::vector<double>& y) {
  Trend t;
  if (n.size() != y.size() || n.size() < 2) return t;
  const auto k = static_cast<double>(n.size());
  double mx = 0.0;
  double my = 0.0;
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < n.size(); ++i) {
    lx.push_back(std::log(static_cast<double>(n[i])));
    ly.push_back(std::log(capped(y[i])));
    mx += lx.back();
    my += ly.back();
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) return t;
  t.slope = sxy / sxx;
  t.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
  t.diverging = t.slope > 0.1 && t.r_squared > 0.5;
  return t;
}

CertificationReport certify(const TriangularFamily& family, double p, const CertifyOptions& options) {
  if (family.generations.empty()) throw InvalidArgument("cannot certify an empty family");
  if (!(p == 1.0 || p == 2.0 || is_infinite_p(p))) throw InvalidArgument("certify supports p in {1, 2, inf}");
  family.validate();

  CertificationReport rep;
  rep.family = family.name;
  rep.p = p;
  rep.generations.resize(family.generations.size());

  parallel_for(family.generations.size(), [&](std::size_t i) {
    const Generation& g = family.generations[i];
    GenerationReport& gr = rep.generations[i];
    gr.n = g.n;
    gr.m = g.m();
    gr.arc_count_sup = arc_count_sup(g);
    if (g.m() <= static_cast<std::size_t>(g.n)) {
      gr.witness = Witness{g.n, kInf, "vanishing", vanishing_polynomial(g)};
      return;
    }
    gr.frame = frame_bounds_p2(g);
    gr.witness = mz_lower_bound(g, p, options.random_budget, options.seed + static_cast<std::uint64_t>(g.n),
                                options.oversampling);
  });

  try {
    rep.separation = separation_constant(family);
  } catch (const InvalidArgument&) {
    rep.separation = 0.0;
  }

  std::vector<double> R_grid = options.R_grid;
  if (R_grid.empty()) R_grid = {kTwoPi, 2 * kTwoPi, 4 * kTwoPi, 8 * kTwoPi};
  rep.density = lower_density(family, R_grid, options.tail_start.value_or(family.generations.front().n));

  std::vector<int> ns;
  std::vector<double> arcs;
  std::vector<double> ratios;
  std::vector<int> frame_ns;
  std::vector<double> kappas;
  double kappa_max = 0.0;
  for (const auto& gr : rep.generations) {
    ns.push_back(gr.n);
    arcs.push_back(gr.arc_count_sup);
    ratios.push_back(gr.witness.ratio);
    if (gr.frame) {
      frame_ns.push_back(gr.n);
      kappas.push_back(gr.frame->kappa);
      kappa_max = std::max(kappa_max, gr.frame->kappa);
    }
  }
  rep.arc_trend = log_log_trend(ns, arcs);
  rep.kappa_trend = log_log_trend(frame_ns, kappas);
  rep.witness_trend = log_log_trend(ns, ratios);

  const double threshold = 1.0 / kTwoPi;
  const double margin = options.thresholds.density_margin;
  const double density = rep.density->extrapolated;
  const bool p2 = p == 2.0;

  std::vector<std::string> refutations;
  for (const auto& gr : rep.generations)
    if (gr.m <= static_cast<std::size_t>(gr.n))
      refutations.push_back("generation n=" + std::to_string(gr.n) + " has m=" + std::to_string(gr.m) +
                            " <= n points; a nonzero polynomial of degree <= n vanishes on it");

  if (rep.generations.size() >= 2) {
    if (density < threshold - margin)
      refutations.push_back("lower density estimate " + fmt_double(density) + " < 1/(2pi) - " +
                            fmt_double(margin) + " (necessary density condition)");
    if (rep.arc_trend.diverging)
      refutations.push_back("arc-count sup grows with n (slope " + fmt_double(rep.arc_trend.slope) +
                            "): the upper sampling inequality fails");
    if (p2 && rep.kappa_trend.diverging)
      refutations.push_back("frame condition number grows with n (log-log slope " +
                            fmt_double(rep.kappa_trend.slope) + ", R^2 " + fmt_double(rep.kappa_trend.r_squared) +
                            ")");
    if (!p2 && rep.witness_trend.diverging)
      refutations.push_back("witness ratio lower bound grows with n (log-log slope " +
                            fmt_double(rep.witness_trend.slope) + ", R^2 " +
                            fmt_double(rep.witness_trend.r_squared) + ")");
  }

  if (!refutations.empty()) {
    rep.verdict = Verdict::refuted;
    rep.reasons = std::move(refutations);
    const auto it = std::max_element(rep.generations.begin(), rep.generations.end(),
                                     [](const GenerationReport& x, const GenerationReport& y) {
                                       return x.witness.ratio < y.witness.ratio;
                                     });
    rep.refuting_witness = it->witness;
  } else if (rep.generations.size() < 2) {
    rep.verdict = Verdict::inconclusive;
    rep.reasons.push_back("single generation: no trend over n can be assessed");
  } else if (p2 && kappa_max <= options.thresholds.kappa_max) {
    rep.verdict = Verdict::certified;
    rep.basis = "p2-trend";
    rep.reasons.push_back("frame condition number bounded: max kappa " + fmt_double(kappa_max) + " <= " +
                          fmt_double(options.thresholds.kappa_max) + ", no growth over n");
  } else if (density > threshold + margin && rep.separation > 0.0 && (!p2 || kappa_max <= options.thresholds.kappa_max)) {
    rep.verdict = Verdict::certified;
    rep.basis = "density";
    rep.reasons.push_back("separated family (constant " + fmt_double(rep.separation) + ") with lower density " +
                          fmt_double(density) + " > 1/(2pi) + " + fmt_double(margin));
  } else {
    rep.verdict = Verdict::inconclusive;
    if (p2 && kappa_max > options.thresholds.kappa_max)
      rep.reasons.push_back("max kappa " + fmt_double(kappa_max) + " exceeds kappa_max without a growth trend");
    rep.reasons.push_back("lower density estimate " + fmt_double(density) + " within margin of 1/(2pi)" +
                          std::string(rep.separation > 0.0 ? "" : " or family not separated"));
  }

  if (is_infinite_p(p))
    rep.reasons.push_back(
        "p=inf: for a separated family, lower density strictly above 1/(2pi) is necessary and sufficient");
  return rep;
}

Complex inner_product(const Polynomial& f, const Polynomial& g) {
  Complex acc{};
  const auto k = std::min(f.coeffs().size(), g.coeffs().size());
  for (std::size_t i = 0; i < k; ++i) acc += f[i] * std::conj(g[i]);
  return kTwoPi * acc;
}

Polynomial DualFrame::reconstruct_from_frame(const Polynomial& p) const {
  Polynomial acc(std::vector<Complex>(static_cast<std::size_t>(n) + 1));
  for (std::size_t i = 0; i < m; ++i) acc = acc + duals[i] * inner_product(p, frame[i]);
  return acc;
}

Polynomial DualFrame::reconstruct_from_duals(const Polynomial& p) const {
  Polynomial acc(std::vector<Complex>(static_cast<std::size_t>(n) + 1));
  for (std::size_t i = 0; i < m; ++i) acc = acc + frame[i] * inner_product(p, duals[i]);
  return acc;
}

DualFrame dual_frame(const Generation& generation) {
  const std::size_t m = generation.m();
  const int n = generation.n;
  if (m <= static_cast<std::size_t>(n))
    throw RankDeficientError(n, m, "dual frame needs m > n (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  const Eigen::MatrixXcd E = sampling_matrix(generation);
  const Eigen::MatrixXcd S = (E.adjoint() * E) / static_cast<double>(m);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(S, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues()(0);
  const double lmax = eig.eigenvalues()(eig.eigenvalues().size() - 1);
  if (!(lmin > lmax * 1e-12))
    throw RankDeficientError(n, m, "singular frame operator for generation n=" + std::to_string(n));

  // column i holds the coefficients of f_i: conj(z_i)^k / sqrt(2pi m)
  const Eigen::MatrixXcd F = E.adjoint() / std::sqrt(kTwoPi * static_cast<double>(m));
  const Eigen::MatrixXcd D = S.ldlt().solve(F);

  DualFrame df;
  df.n = n;
  df.m = m;
  df.condition = lmax / lmin;
  df.frame.reserve(m);
  df.duals.reserve(m);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m); ++i) {
    df.frame.emplace_back(std::vector<Complex>(F.col(i).data(), F.col(i).data() + F.rows()));
    df.duals.emplace_back(std::vector<Complex>(D.col(i).data(), D.col(i).data() + D.rows()));
  }
  return df;
}

double kernel_tail(const Generation& generation, double R) {
  if (!(R > 0.0)) throw InvalidArgument("kernel tail needs R > 0");
  if (generation.angles.empty()) return 0.0;
  const int n = generation.n;
  const Polynomial p = ones_polynomial(n);
  const double radius = R / n;
  std::vector<double> terms;
  for (double t : generation.angles) {
    const Complex z = unit(t);
    if (std::abs(z - 1.0) > radius) terms.push_back(std::norm(p(z)));
  }
  const double energy = kTwoPi * (n + 1);
  return pairwise_sum(terms) / static_cast<double>(generation.m()) / energy;
}

double blaschke_bound(const RadialGeneration& radial) {
  double best = 0.0;
  for (const auto& w : radial.points) {
    const double r = std::abs(w);
    if (!(r < 1.0)) throw InvalidArgument("blaschke bound needs points strictly inside the disk");
    best = std::max(best, std::pow(r, radial.n));
  }
  return best;
}

}  // namespace mzkit
