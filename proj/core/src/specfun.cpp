// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include "vortexpair/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace vortexpair::specfun {

double wigner_d1(int n, int np, double theta) {
  if (n < -1 || n > 1 || np < -1 || np > 1)
    throw std::domain_error("wigner_d1: indices must lie in {-1,0,1}");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double r2 = std::sqrt(2.0);
  // explicit 3x3 closed form; only j = 1 is ever needed (p-manifold)
  if (n == 1) {
    if (np == 1) return 0.5 * (1.0 + c);
    if (np == 0) return -s / r2;
    return 0.5 * (1.0 - c);
  }
  if (n == 0) {
    if (np == 1) return s / r2;
    if (np == 0) return c;
    return -s / r2;
  }
  if (np == 1) return 0.5 * (1.0 - c);
  if (np == 0) return s / r2;
  return 0.5 * (1.0 + c);
}

namespace {

// factorials up to 20! are exact in double
double fact(int n) {
  static const std::array<double, 21> table = [] {
    std::array<double, 21> t{};
    t[0] = 1.0;
    for (int i = 1; i <= 20; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  if (n < 0) return 0.0;
  if (n <= 20) return table[n];
  double v = table[20];
  for (int i = 21; i <= n; ++i) v *= i;
  return v;
}

} // namespace

double clebsch_gordan(int j1, int m1, int j2, int m2, int J, int M) {
  if (j1 < 0 || j2 < 0 || J < 0)
    throw std::domain_error("clebsch_gordan: negative angular momentum");
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(M) > J)
    throw std::domain_error("clebsch_gordan: |m| exceeds j");
  if (m1 + m2 != M) return 0.0;
  if (J < std::abs(j1 - j2) || J > j1 + j2) return 0.0;

  // Racah's closed form (Condon-Shortley phases)
  const double pref =
      std::sqrt((2.0 * J + 1.0) * fact(J + j1 - j2) * fact(J - j1 + j2) * fact(j1 + j2 - J)
                / fact(j1 + j2 + J + 1))
      * std::sqrt(fact(J + M) * fact(J - M) * fact(j1 - m1) * fact(j1 + m1) * fact(j2 - m2)
                  * fact(j2 + m2));
  int kmin = std::max({0, j2 - J - m1, j1 - J + m2});
  int kmax = std::min({j1 + j2 - J, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    double denom = fact(k) * fact(j1 + j2 - J - k) * fact(j1 - m1 - k) * fact(j2 + m2 - k)
                   * fact(J - j2 + m1 + k) * fact(J - j1 - m2 + k);
    sum += ((k % 2) ? -1.0 : 1.0) / denom;
  }
  return pref * sum;
}

double bessel_j(int m, double x) {
  const int n = std::abs(m);
  // J_{-m}(x) = (-1)^m J_m(x); J_m(-x) = (-1)^m J_m(x)
  double sign = 1.0;
  if (m < 0 && (n % 2)) sign = -sign;
  if (x < 0.0 && (n % 2)) sign = -sign;
  const double ax = std::abs(x);
  if (ax == 0.0) return n == 0 ? 1.0 : 0.0;
  return sign * std::cyl_bessel_j(static_cast<double>(n), ax);
}

double spherical_bessel(int L, double x) {
  if (L < 0) throw std::domain_error("spherical_bessel: L must be >= 0");
  if (x < 0.0) throw std::domain_error("spherical_bessel: x must be >= 0");
  if (x == 0.0) return L == 0 ? 1.0 : 0.0;
  return std::sph_bessel(static_cast<unsigned>(L), x);
}

namespace {

// Rational approximation of w(z) on Im z >= 0 (Weideman 1994, SIAM Rev. 36),
// N = 48 terms; coefficients built once by a direct DFT of the generator.
constexpr int kWeidemanN = 48;

struct WeidemanTable {
  double L;
  std::array<double, kWeidemanN> a;
  WeidemanTable() {
    const double N = kWeidemanN;
    L = std::sqrt(N / std::sqrt(2.0));
    const int M = 4 * kWeidemanN; // DFT size
    std::vector<double> f(M);
    const double pi = 3.14159265358979323846;
    for (int k = 0; k < M; ++k) {
      const double th = pi * (2.0 * (k + 0.5) / M - 1.0);
      const double t = L * std::tan(th / 2.0);
      f[k] = std::exp(-t * t) * (L * L + t * t);
    }
    // a[n] = (1/2pi) int f(theta) cos((n+1) theta) dtheta, midpoint rule
    for (int n = 0; n < kWeidemanN; ++n) {
      double s = 0.0;
      for (int k = 0; k < M; ++k) {
        const double th = pi * (2.0 * (k + 0.5) / M - 1.0);
        s += f[k] * std::cos((n + 1) * th);
      }
      a[n] = s / M;
    }
  }
};

complexd weideman_upper(complexd z) {
  static const WeidemanTable tab;
  const double pi = 3.14159265358979323846;
  const complexd iz(-z.imag(), z.real());
  const complexd Z = (tab.L + iz) / (tab.L - iz);
  // Horner over the polynomial part
  complexd p(0.0, 0.0);
  for (int n = kWeidemanN - 1; n >= 0; --n) p = p * Z + tab.a[n];
  const complexd one_over = 1.0 / (tab.L - iz);
  return 2.0 * one_over * one_over * p + one_over / std::sqrt(pi);
}

} // namespace

FaddeevaResult faddeeva_checked(complexd z) {
  if (z.imag() >= 0.0) return {weideman_upper(z), false};
  // w(z) = 2 exp(-z^2) - conj(w(conj(-z)))  for Im z < 0
  const complexd zr(-z.real(), -z.imag()); // -z
  const complexd wu = weideman_upper(std::conj(zr));
  const complexd mz2 = -z * z;
  FaddeevaResult out;
  if (mz2.real() > 700.0) {
    // 2 exp(-z^2) overflows; clamp and flag
    const double mx = std::numeric_limits<double>::max() / 4.0;
    const complexd phase = std::exp(complexd(0.0, mz2.imag()));
    out.value = 2.0 * mx * phase;
    out.saturated = true;
    return out;
  }
  out.value = 2.0 * std::exp(mz2) - std::conj(wu);
  return out;
}

complexd faddeeva(complexd z) { return faddeeva_checked(z).value; }

complexd erf_complex(complexd z) {
  // erf(z) = 1 - exp(-z^2) w(iz); use reflection for Re z < 0
  if (z.real() >= 0.0) {
    const complexd iz(-z.imag(), z.real());
    return 1.0 - std::exp(-z * z) * faddeeva(iz);
  }
  return -erf_complex(-z);
}

} // namespace vortexpair::specfun
