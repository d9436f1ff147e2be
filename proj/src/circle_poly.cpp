#include "mzkit/circle_poly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mzkit/error.hpp"

namespace mzkit {

namespace {

constexpr int kTernaryIterations = 48;

bool is_infinite_p(double p) { return std::isinf(p) && p > 0.0; }

void check_p(double p) {
  if (std::isnan(p) || p < 1.0) throw InvalidArgument("p must be in [1, inf], got " + std::to_string(p));
}

double pow_abs(Complex v, double p) {
  const double a = std::abs(v);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  return std::pow(a, p);
}

// Ternary search for the maximum of f on [lo, hi], assuming unimodality.
template <typename F>
double ternary_max(F&& f, double lo, double hi, double seed_value) {
  double best = seed_value;
  for (int it = 0; it < kTernaryIterations; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    const double f1 = f(m1);
    const double f2 = f(m2);
    best = std::max({best, f1, f2});
    if (f1 < f2)
      lo = m1;
    else
      hi = m2;
  }
  return best;
}

}  // namespace

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidArgument("polynomial needs at least one coefficient");
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Polynomial::coeff_energy() const {
  std::vector<double> sq;
  sq.reserve(coeffs_.size());
  for (const auto& c : coeffs_) sq.push_back(std::norm(c));
  return pairwise_sum(sq);
}

Polynomial Polynomial::rotated(Complex w) const {
  std::vector<Complex> out(coeffs_.size());
  const Complex step = std::conj(w);
  Complex power{1.0, 0.0};
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    out[k] = coeffs_[k] * power;
    power *= step;
  }
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  std::vector<Complex> out(coeffs_.size() + other.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * other.coeffs_[j];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(Complex s) const {
  std::vector<Complex> out(coeffs_);
  for (auto& c : out) c *= s;
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  std::vector<Complex> out(std::max(coeffs_.size(), other.coeffs_.size()));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k] += coeffs_[k];
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) out[k] += other.coeffs_[k];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other * Complex{-1.0, 0.0}; }

Complex TrigPolynomial::operator()(double theta) const {
  Complex acc = a0;
  const Complex z = unit(theta);
  const Complex zbar = std::conj(z);
  Complex zp{1.0, 0.0};
  Complex zbp{1.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    zp *= z;
    zbp *= zbar;
    acc += a[i] * zp + b[i] * zbp;
  }
  return acc;
}

bool TrigPolynomial::is_real(double tol) const {
  if (std::abs(a0.imag()) > tol || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(b[i] - std::conj(a[i])) > tol) return false;
  return true;
}

std::string_view to_string(NormMethod m) {
  switch (m) {
    case NormMethod::parseval: return "parseval";
    case NormMethod::quadrature: return "quadrature";
    case NormMethod::max_grid: return "max-grid";
  }
  return "unknown";
}

double NormResult::norm() const {
  if (is_infinite_p(p)) return value;
  return std::pow(value, 1.0 / p);
}

std::vector<Complex> eval(const Polynomial& poly, std::span<const Complex> points) {
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const auto& z : points) out.push_back(poly(z));
  return out;
}

NormResult lp_norm(const Polynomial& poly, double p, int oversampling) {
  check_p(p);
  if (oversampling < 4) throw InvalidArgument("oversampling must be >= 4");
  NormResult res;
  res.p = p;
  res.oversampling = oversampling;

  if (p == 2.0) {
    res.method = NormMethod::parseval;
    res.value = kTwoPi * poly.coeff_energy();
    return res;
  }

  const int nodes = oversampling * (poly.degree() + 1);
  std::vector<double> moduli(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) moduli[k] = std::abs(poly(unit(kTwoPi * k / nodes)));

  if (!is_infinite_p(p)) {
    res.method = NormMethod::quadrature;
    std::vector<double> powered(moduli.size());
    for (std::size_t k = 0; k < moduli.size(); ++k) powered[k] = std::pow(moduli[k], p);
    res.value = kTwoPi / nodes * pairwise_sum(powered);
    return res;
  }

  res.method = NormMethod::max_grid;
  double best = *std::max_element(moduli.begin(), moduli.end());
  if (poly.degree() == 0 || best == 0.0) {
    res.value = best;
    return res;
  }
  const double h = kTwoPi / nodes;
  auto modulus = [&](double t) { return std::abs(poly(unit(t))); };
  for (int k = 0; k < nodes; ++k) {
    const double prev = moduli[(k + nodes - 1) % nodes];
    const double next = moduli[(k + 1) % nodes];
    if (moduli[k] >= prev && moduli[k] >= next) {
      const double t = k * h;
      best = std::max(best, ternary_max(modulus, t - h, t + h, moduli[k]));
    }
  }
  res.value = best;
  return res;
}

double discrete_norm(const Polynomial& poly, const Generation& generation, double p) {
  check_p(p);
  if (generation.angles.empty())
    throw InvalidArgument("discrete norm on empty generation n=" + std::to_string(generation.n));
  if (poly.degree() > generation.n)
    warn("polynomial of degree " + std::to_string(poly.degree()) + " sampled on generation n=" +
         std::to_string(generation.n));
  std::vector<double> vals;
  vals.reserve(generation.m());
  for (double t : generation.angles) vals.push_back(std::abs(poly(unit(t))));
  if (is_infinite_p(p)) return *std::max_element(vals.begin(), vals.end());
  for (auto& v : vals) v = std::pow(v, p);
  return std::pow(pairwise_sum(vals) / static_cast<double>(generation.m()), 1.0 / p);
}

Polynomial derivative(const Polynomial& poly) {
  if (poly.degree() == 0) return Polynomial({Complex{}});
  std::vector<Complex> out(static_cast<std::size_t>(poly.degree()));
  for (int k = 1; k <= poly.degree(); ++k) out[k - 1] = static_cast<double>(k) * poly[k];
  return Polynomial(std::move(out));
}

Polynomial dilate(const Polynomial& poly, double r) {
  if (!(r > 0.0)) throw InvalidArgument("dilation radius must be > 0");
  std::vector<Complex> out(poly.coeffs().begin(), poly.coeffs().end());
  double power = 1.0;
  for (auto& c : out) {
    c *= power;
    power *= r;
  }
  return Polynomial(std::move(out));
}

Polynomial kernel_polynomial(int n, Complex w) {
  if (n < 0) throw InvalidArgument("kernel degree must be >= 0");
  if (std::abs(std::abs(w) - 1.0) > 1e-12) throw InvalidArgument("kernel point must be unimodular");
  return ones_polynomial(n).rotated(w);
}

Polynomial ones_polynomial(int n) {
  if (n < 0) throw InvalidArgument("degree must be >= 0");
  return Polynomial(std::vector<Complex>(static_cast<std::size_t>(n) + 1, Complex{1.0, 0.0}));
}

Polynomial fejer_peak(int m) {
  if (m < 1) throw InvalidArgument("fejer peak order must be >= 1");
  return Polynomial(std::vector<Complex>(static_cast<std::size_t>(m), Complex{1.0 / m, 0.0}));
}

Polynomial localized_square(int degree_budget) {
  if (degree_budget < 2) throw InvalidArgument("localized square needs degree budget >= 2");
  const Polynomial b = fejer_peak(degree_budget / 2 + 1);
  return b * b;
}

Polynomial harmonic_to_holo(const TrigPolynomial& trig) {
  if (trig.a.size() != trig.b.size()) throw InvalidArgument("trig polynomial a/b lengths differ");
  const std::size_t n = trig.a.size();
  std::vector<Complex> out(2 * n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    out[n - i] = trig.b[i - 1];
    out[n + i] = trig.a[i - 1];
  }
  out[n] = trig.a0;
  return Polynomial(std::move(out));
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw InvalidArgument("need at least one Gauss node");
  nodes.assign(static_cast<std::size_t>(count), 0.0);
  weights.assign(static_cast<std::size_t>(count), 0.0);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double annulus_norm(const Polynomial& poly, int n, double p, int radial_nodes, int oversampling) {
  check_p(p);
  if (is_infinite_p(p)) throw InvalidArgument("annulus norm needs finite p");
  if (n < 1) throw InvalidArgument("annulus index n must be >= 1");
  if (oversampling < 4) throw InvalidArgument("oversampling must be >= 4");
  std::vector<double> gx;
  std::vector<double> gw;
  gauss_legendre(radial_nodes, gx, gw);
  const double half = 1.0 / n;
  const int angular = oversampling * (poly.degree() + 1);

  std::vector<double> rings;
  rings.reserve(gx.size());
  std::vector<double> ring(static_cast<std::size_t>(angular));
  for (std::size_t i = 0; i < gx.size(); ++i) {
    const double r = 1.0 + half * gx[i];
    for (int k = 0; k < angular; ++k) ring[k] = pow_abs(poly(std::polar(r, kTwoPi * k / angular)), p);
    rings.push_back(gw[i] * half * r * kTwoPi / angular * pairwise_sum(ring));
  }
  return n * pairwise_sum(rings);
}

double poisson_sum(const RadialGeneration& radial, int t_resolution) {
  if (t_resolution < 1) throw InvalidArgument("t resolution must be >= 1");
  for (const auto& w : radial.points)
    if (!(std::abs(w) < 1.0)) throw InvalidArgument("poisson sum needs points strictly inside the disk");
  if (radial.points.empty()) return 0.0;

  auto total = [&](double t) {
    const Complex e = unit(t);
    std::vector<double> terms;
    terms.reserve(radial.points.size());
    for (const auto& w : radial.points) terms.push_back((1.0 - std::norm(w)) / std::norm(e - w));
    return pairwise_sum(terms);
  };

  std::vector<std::pair<double, double>> candidates;  // (value, t)
  for (int k = 0; k < t_resolution; ++k) {
    const double t = kTwoPi * k / t_resolution;
    candidates.emplace_back(total(t), t);
  }
  for (const auto& w : radial.points) {
    if (std::abs(w) == 0.0) continue;
    const double t = std::arg(w);
    candidates.emplace_back(total(t), t);
  }
  const std::size_t keep = std::min<std::size_t>(8, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<long>(keep), candidates.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = candidates.front().first;
  const double h = kTwoPi / t_resolution;
  for (std::size_t i = 0; i < keep; ++i) {
    const double t = candidates[i].second;
    best = std::max(best, ternary_max(total, t - h, t + h, candidates[i].first));
  }
  return best;
}

}  // namespace mzkit
