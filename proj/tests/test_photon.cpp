// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>

#include "vortexpair/photon.hpp"
#include "vortexpair/quadrature.hpp"
#include "vortexpair/specfun.hpp"
#include "vortexpair/units.hpp"

using namespace vortexpair;
using photon::Mode;
using photon::PhotonPacket;
using photon::TrapSpec;
using std::complex;

namespace {
constexpr double kPi = 3.14159265358979323846;

PhotonPacket na_packet() {
  PhotonPacket p;
  p.m_gamma = 3;
  p.lambda = 1;
  p.kappa_c = 0.21;
  p.k_c = std::sqrt(2.1 * 2.1 - 0.21 * 0.21);
  p.sigma = 0.021;
  return p;
}

// independent mode-sum of |<nu|gamma_i>|^2 on adaptive grids
double mode_sum_norm(const PhotonPacket& p, const photon::Normalization& n) {
  auto fz = [&](double kz) {
    auto fp = [&](double kp) {
      const double omega = std::hypot(kp, kz);
      const double theta = std::atan2(kp, kz);
      const double amp = std::abs(photon::overlap_plane_wave(p, n, {omega, theta, 0.3, p.lambda}));
      return kp * amp * amp;
    };
    return quadrature::integrate(fp, std::max(0.0, p.kappa_c - 12.0 * p.sigma),
                                 p.kappa_c + 12.0 * p.sigma, 1e-10)
        .value;
  };
  const double iz =
      quadrature::integrate(fz, p.k_c - 12.0 * p.sigma, p.k_c + 12.0 * p.sigma, 1e-10).value;
  return iz * 2.0 * kPi / std::pow(2.0 * kPi, 3);
}

} // namespace

TEST_CASE("packet invariants and derived quantities") {
  PhotonPacket p = na_packet();
  CHECK_NOTHROW(p.validate());
  CHECK(p.omega_c() == doctest::Approx(2.1).epsilon(1e-14));
  CHECK(std::abs(std::tan(p.theta_c()) - p.kappa_c / p.k_c) < 1e-14);

  p.sigma = p.kappa_c; // not well-localized
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = na_packet();
  p.kappa_c = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = na_packet();
  p.lambda = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("trap invariants") {
  TrapSpec t;
  t.sigma_b = units::nm_to_inv_ev(100.0);
  CHECK_NOTHROW(t.validate(0.021));
  t.sigma_b = units::nm_to_inv_ev(2000.0); // beyond 0.1/sigma
  CHECK_THROWS_AS(t.validate(0.021), std::invalid_argument);
  t.sigma_b = 0.0;
  CHECK_THROWS_AS(t.validate(0.021), std::invalid_argument);
}

TEST_CASE("overlap_plane_wave structure") {
  const PhotonPacket p = na_packet();
  const auto n = photon::normalize(p);
  const double thc = p.theta_c();

  // helicity selection
  CHECK(photon::overlap_plane_wave(p, n, {2.1, thc, 0.0, -1}) == complex<double>(0.0, 0.0));

  // peak at the packet center when b = 0
  const double peak = std::abs(photon::overlap_plane_wave(p, n, {2.1, thc, 0.0, 1}));
  for (double dw : {-0.05, -0.01, 0.01, 0.05})
    for (double dth : {-0.03, 0.02}) {
      const double v =
          std::abs(photon::overlap_plane_wave(p, n, {2.1 + dw, thc + dth, 0.0, 1}));
      CHECK(v <= peak);
    }

  // |overlap| is phi-independent at b = 0
  for (double phi : {0.0, 0.7, 2.0, 5.5})
    CHECK(std::abs(photon::overlap_plane_wave(p, n, {2.1, thc, phi, 1}))
          == doctest::Approx(peak).epsilon(1e-14));
}

TEST_CASE("packet normalization solves the continuum mode sum") {
  PhotonPacket p = na_packet();
  auto n = photon::normalize(p);
  CHECK(mode_sum_norm(p, n) == doctest::Approx(1.0).epsilon(1e-8));

  // sigma -> 2 sigma rescaling against the quadrature oracle
  PhotonPacket p2 = p;
  p2.sigma = 2.0 * p.sigma;
  auto n2 = photon::normalize(p2);
  CHECK(mode_sum_norm(p2, n2) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(n2.n_packet < n.n_packet); // wider profile needs a smaller constant
}

TEST_CASE("V-invariance with the packet constant re-derived") {
  // box normalization: sum_nu = V int d^3k/(2pi)^3, amplitude = (N_V/2pi) prof
  // with N_V fixed by the V-weighted norm; the kernel combination N^2 V^2 in
  // the channel weight then cancels against the amplitude 1/V factors
  const PhotonPacket p = na_packet();
  const double base = photon::normalize(p).n_packet;
  auto observable = [&](double V) {
    const double n_v = base / std::sqrt(V);   // re-derived normalization
    const double g2_v = 7.7e-9 / V;           // |G|^2 with 1/V mode factor
    return 4.0 * n_v * n_v * (V * V) * g2_v / V; // one V folds back via the mode sum
  };
  CHECK(observable(1.0) == doctest::Approx(observable(2.0)).epsilon(1e-14));
}

TEST_CASE("partial-wave resummation of the displaced packet") {
  PhotonPacket p = na_packet();
  p.b = 0.8 / p.kappa_c; // kappa_c b = 0.8
  p.phi_b = 0.6;
  const auto n = photon::normalize(p);
  PhotonPacket p0 = p;
  p0.b = 0.0;
  for (double phi : {0.0, 1.1, 3.9}) {
    const Mode mode{2.09, p.theta_c() * 1.1, phi, 1};
    const complex<double> direct = photon::overlap_plane_wave(p, n, mode);
    complex<double> resum(0.0, 0.0);
    const complex<double> base = photon::overlap_plane_wave(p0, n, mode);
    for (int q = -24; q <= 24; ++q) {
      const complex<double> iq = std::pow(complex<double>(0.0, 1.0), q);
      resum += iq * specfun::bessel_j(q, mode.k_perp() * p.b)
               * std::exp(complex<double>(0.0, q * (phi - p.phi_b)));
    }
    resum *= base;
    CHECK(std::abs(direct - resum) <= 1e-9 * std::abs(base));
  }
}

TEST_CASE("trap density") {
  TrapSpec t;
  t.sigma_b = units::nm_to_inv_ev(100.0);
  const double sb = t.sigma_b;
  CHECK(photon::trap_density(t, 0.0) == doctest::Approx(1.0 / (kPi * sb * sb)).epsilon(1e-14));

  auto radial = [&](auto f) {
    return quadrature::integrate([&](double b) { return f(b) * 2.0 * kPi * b; }, 0.0, 12.0 * sb,
                                 1e-12)
        .value;
  };
  CHECK(radial([&](double b) { return photon::trap_density(t, b); })
        == doctest::Approx(1.0).epsilon(1e-10));
  // 2D second moment sigma_b^2, i.e. sigma_b^2/2 per Cartesian component
  CHECK(radial([&](double b) { return b * b * photon::trap_density(t, b); })
        == doctest::Approx(sb * sb).epsilon(1e-10));
  CHECK(radial([&](double b) { return 0.5 * b * b * photon::trap_density(t, b); })
        == doctest::Approx(sb * sb / 2.0).epsilon(1e-10));
}

TEST_CASE("bessel_weight series values and exact-integral oracle") {
  const double kappa = 0.21;
  const double sb = units::nm_to_inv_ev(100.0);
  CHECK(kappa * sb / 2.0 == doctest::Approx(0.053).epsilon(0.02));

  CHECK(photon::bessel_weight(3, 3, kappa, sb).value == 1.0);
  CHECK(photon::bessel_weight(2, 1, kappa, sb).value
        == doctest::Approx(std::pow(kappa * sb / 2.0, 2)).epsilon(1e-14));

  TrapSpec t;
  t.sigma_b = sb;
  for (int dm = 0; dm <= 3; ++dm) {
    auto f = [&](double b) {
      const double j = specfun::bessel_j(dm, kappa * b);
      return photon::trap_density(t, b) * j * j * 2.0 * kPi * b;
    };
    const double exact = quadrature::integrate(f, 0.0, 14.0 * sb, 1e-12).value;
    const double series = photon::bessel_weight(dm, 0, kappa, sb).value;
    CHECK(std::abs(series / exact - 1.0) < 0.01);
  }

  // monotone decrease in |m_gamma - n|
  double prev = 2.0;
  for (int dm = 0; dm <= 4; ++dm) {
    const double w = photon::bessel_weight(dm, 0, kappa, sb).value;
    CHECK(w < prev);
    prev = w;
  }

  // regime flag
  CHECK(photon::bessel_weight(1, 0, kappa, sb).regime_ok);
  CHECK_FALSE(photon::bessel_weight(1, 0, 5.0, 0.5).regime_ok);
}

TEST_CASE("coherence-length unit anchor") {
  CHECK(units::inv_ev_to_um(1.0 / 2.1e-2) == doctest::Approx(9.38).epsilon(0.0022));
}
