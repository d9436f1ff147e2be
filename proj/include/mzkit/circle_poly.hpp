#pragma once

// Holomorphic polynomials restricted to the unit circle: evaluation, the
// continuous L^p norms (un-normalised, d theta), the discrete sampling norms,
// and the extremal polynomials used as witnesses.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mzkit/circle_family.hpp"
#include "mzkit/numeric.hpp"

namespace mzkit {

/// Polynomial c_0 + c_1 z + ... + c_n z^n. The degree is the declared length
/// minus one; trailing zeros are kept so membership in P_n stays explicit.
class Polynomial {
 public:
  /// Zero polynomial of declared degree 0.
  Polynomial() : coeffs_{Complex{}} {}
  explicit Polynomial(std::vector<Complex> coeffs);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  const Complex& operator[](std::size_t k) const { return coeffs_[k]; }

  Complex operator()(Complex z) const;

  /// Sum of |c_k|^2.
  double coeff_energy() const;

  /// q(z * conj(w)) for unimodular w: moves a peak at 1 to w.
  Polynomial rotated(Complex w) const;

  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(Complex s) const;
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;

 private:
  std::vector<Complex> coeffs_;
};

/// a0 + sum_i a_i z^i + b_i conj(z)^i on the circle.
struct TrigPolynomial {
  Complex a0{};
  std::vector<Complex> a;
  std::vector<Complex> b;

  int degree() const noexcept { return static_cast<int>(a.size()); }
  Complex operator()(double theta) const;
  /// b_i == conj(a_i) and a0 real, within tol.
  bool is_real(double tol = 1e-12) const;
};

enum class NormMethod { parseval, quadrature, max_grid };

std::string_view to_string(NormMethod m);

/// `value` is the integral of |q|^p over [0, 2pi) for finite p (not its p-th
/// root) and the supremum for p = inf.
struct NormResult {
  double value = 0.0;
  NormMethod method = NormMethod::parseval;
  int oversampling = 0;
  double p = 2.0;

  /// ||q||_p, i.e. value^{1/p} (value itself for p = inf).
  double norm() const;
};

inline constexpr int kDefaultOversampling = 16;

std::vector<Complex> eval(const Polynomial& poly, std::span<const Complex> points);

/// Continuous norm. p = 2 uses Parseval; other finite p the trapezoid rule on
/// oversampling*(deg+1) nodes; p = inf a grid maximum refined by ternary search.
NormResult lp_norm(const Polynomial& poly, double p, int oversampling = kDefaultOversampling);

/// ((1/m_n) sum_j |q(z_j)|^p)^{1/p}; max_j |q(z_j)| for p = inf.
double discrete_norm(const Polynomial& poly, const Generation& generation, double p);

Polynomial derivative(const Polynomial& poly);

/// q_r(z) = q(r z).
Polynomial dilate(const Polynomial& poly, double r);

/// Reproducing kernel of P_n at unimodular w: coefficients conj(w)^k.
Polynomial kernel_polynomial(int n, Complex w);

/// 1 + z + ... + z^n
Polynomial ones_polynomial(int n);

/// (z^m - 1) / (m (z - 1)): value 1 at z = 1, zero at the other m-th roots.
Polynomial fejer_peak(int m);

/// b^2 with b = fejer_peak(degree_budget/2 + 1): peak 1 at z = 1 and
/// L^1 norm 2pi/(degree_budget/2 + 1).
Polynomial localized_square(int degree_budget);

/// p = z^n * pi, a holomorphic polynomial of degree 2n with |p| = |pi| on the circle.
Polynomial harmonic_to_holo(const TrigPolynomial& trig);

/// n * integral of |q|^p over the annulus 1 - 1/n < |z| < 1 + 1/n (area measure),
/// Gauss-Legendre in the radius and trapezoid in the angle.
double annulus_norm(const Polynomial& poly, int n, double p, int radial_nodes,
                    int oversampling = kDefaultOversampling);

/// sup_t sum_j (1 - |w_j|^2) / |e^{it} - w_j|^2 over a t grid of `t_resolution`
/// nodes plus every point's angle, refined around the best candidates.
double poisson_sum(const RadialGeneration& radial, int t_resolution);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace mzkit
