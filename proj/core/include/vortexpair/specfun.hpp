// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#ifndef VORTEXPAIR_SPECFUN_HPP
#define VORTEXPAIR_SPECFUN_HPP

#include <complex>

namespace vortexpair::specfun {

using complexd = std::complex<double>;

/// Angular-momentum index pair for the j = 1 manifold.
struct AngularIndex {
  int m;
  int mp;
};

/// Wigner (small) d-matrix element d^1_{n,np}(theta) for j = 1,
/// Varshalovich convention (d^1_{1,0} = -sin(theta)/sqrt(2)).
/// Throws std::domain_error for indices outside {-1,0,1}.
double wigner_d1(int n, int np, double theta);

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> in the Condon-Shortley
/// phase convention. Returns 0 when m1+m2 != M or the triangle rule fails.
/// Throws std::domain_error for non-physical (negative or |m|>j) inputs.
/// Integer angular momenta only (sufficient here: j <= small multipole order).
double clebsch_gordan(int j1, int m1, int j2, int m2, int J, int M);

/// Cylindrical Bessel function J_m(x) for any integer order and real x.
double bessel_j(int m, double x);

/// Spherical Bessel function j_L(x), L >= 0, x >= 0.
double spherical_bessel(int L, double x);

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
/// `saturated` flags lower-half-plane arguments where the reflection term
/// 2 exp(-z^2) overflows; the value is then clamped to the largest finite
/// result along the evaluation ray.
struct FaddeevaResult {
  complexd value;
  bool saturated = false;
};

FaddeevaResult faddeeva_checked(complexd z);

/// Plain-value convenience wrapper (most callers stay in Im z >= 0).
complexd faddeeva(complexd z);

/// erf(z) for complex argument, assembled from the Faddeeva function.
complexd erf_complex(complexd z);

} // namespace vortexpair::specfun

#endif
