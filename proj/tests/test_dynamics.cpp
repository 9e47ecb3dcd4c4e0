// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "vortexpair/dynamics.hpp"
#include "vortexpair/quadrature.hpp"
#include "vortexpair/units.hpp"

using namespace vortexpair;
using dynamics::Mode;
using std::complex;

namespace {

constexpr double kPi = 3.14159265358979323846;

// wide-line toy system: resolvable grids while honoring gamma/omega < 1e-3
atom::AtomSpec toy_atom() {
  atom::AtomSpec a;
  a.n_g = 1;
  a.n_e = 2;
  a.z_eff = 1.0;
  a.omega_a = 50.0;
  a.gamma = 0.04;
  return a;
}

photon::PhotonPacket toy_packet() {
  photon::PhotonPacket p;
  p.m_gamma = 2;
  p.lambda = 1;
  p.kappa_c = 5.0;
  p.k_c = std::sqrt(50.0 * 50.0 - 25.0);
  p.sigma = 0.5;
  return p;
}

complex<double> brute_pw_double(double gamma, double dn, double dn0, double t) {
  auto outer = [&](double t2) {
    auto inner = [&](double t1) {
      return std::exp(complex<double>(gamma / 2.0 * (t2 - t1), dn0 * t2 - dn * t1));
    };
    return quadrature::integrate_complex(inner, 0.0, t2, 1e-11, 1e-300).value;
  };
  return quadrature::integrate_complex(outer, 0.0, t, 1e-10, 1e-300).value;
}

complex<double> brute_vortex_double(double gamma, double sigma, double dc, double dn, double t) {
  auto outer = [&](double t1) {
    auto inner = [&](double t2) {
      return std::exp(complex<double>(-gamma / 2.0 * t2, -dn * t2));
    };
    const auto in = quadrature::integrate_complex(inner, 0.0, t1, 1e-11, 1e-300).value;
    return std::exp(complex<double>(gamma / 2.0 * t1 - sigma * sigma * t1 * t1 / 2.0, dc * t1))
           * in;
  };
  return quadrature::integrate_complex(outer, 0.0, t, 1e-10, 1e-300).value;
}

complex<double> brute_triple(double gamma, double sigma, double d1, double d2, double dc,
                             double t) {
  auto l3 = [&](double t3) {
    auto l2 = [&](double t2) {
      auto l1 = [&](double t1) {
        const double re = -gamma / 2.0 * (t3 + t1 - t2) - sigma * sigma * t2 * t2 / 2.0;
        return std::exp(complex<double>(re, -d1 * t3 + dc * t2 - d2 * t1));
      };
      return quadrature::integrate_complex(l1, 0.0, t2, 1e-11, 1e-300).value;
    };
    return quadrature::integrate_complex(l2, 0.0, t3, 1e-10, 1e-300).value;
  };
  return quadrature::integrate_complex(l3, 0.0, t, 1e-9, 1e-300).value;
}

} // namespace

TEST_CASE("TimeGrid invariants") {
  dynamics::TimeGrid g;
  g.points = {0.5, 1.0, 10.0};
  CHECK_NOTHROW(g.validate());
  g.points = {1.0, 1.0};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g.points = {0.5, 60.0};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g.points = {};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("emission kernel f") {
  CHECK(dynamics::emission_kernel_f(1.0, 0.3, 0.0) == complex<double>(0.0, 0.0));
  // resonance, late times: f -> 2/Gamma; Gamma = 4e-8 eV gives 5e7 eV^-1
  const auto f = dynamics::emission_kernel_f(4e-8, 0.0, 40.0 / 4e-8);
  CHECK(f.real() == doctest::Approx(5e7).epsilon(1e-10));
  CHECK(std::abs(f.imag()) < 1.0);
  // |f|^2 is Lorentzian with half-width Gamma/2 at late times
  const double g = 0.04;
  const double t = 2000.0;
  const double at_res = std::norm(dynamics::emission_kernel_f(g, 0.0, t));
  const double at_hw = std::norm(dynamics::emission_kernel_f(g, g / 2.0, t));
  CHECK(at_hw / at_res == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("gauss_time_integral against brute quadrature") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 25; ++k) {
    const double sigma = 0.3 + 2.5 * u(rng);
    const complex<double> z(0.05 + 0.8 * u(rng), -4.0 + 8.0 * u(rng));
    const double t = 0.2 + 5.0 * u(rng);
    auto f = [&](double v) { return std::exp(z * v - sigma * sigma * v * v / 2.0); };
    const auto brute = quadrature::integrate_complex(f, 0.0, t, 1e-12, 1e-300).value;
    const auto closed = dynamics::gauss_time_integral(t, z, sigma);
    CHECK(std::abs(closed - brute) <= 1e-10 * std::abs(brute));
  }
}

TEST_CASE("gauss_time_integral Taylor branch is continuous") {
  const complex<double> z(0.5, 2.0);
  const double sigma = 1.3;
  const double t_star = 1e-6 / sigma; // branch threshold in sigma*t
  const auto below = dynamics::gauss_time_integral(t_star * (1.0 - 1e-9), z, sigma);
  const auto above = dynamics::gauss_time_integral(t_star * (1.0 + 1e-9), z, sigma);
  CHECK(std::abs(above - below) <= 1e-10 * std::abs(above) + 1e-22);
}

TEST_CASE("plane-wave double integral: anchors and branch continuity") {
  CHECK(dynamics::pw_double_integral(1.0, 0.4, 0.1, 0.0) == complex<double>(0.0, 0.0));

  // spec node: Delta_nu = 0.5 Gamma, Delta_nu0 = 0, t = 3/Gamma
  const double g = 1.0;
  const auto closed = dynamics::pw_double_integral(g, 0.5, 0.0, 3.0);
  const auto brute = brute_pw_double(g, 0.5, 0.0, 3.0);
  CHECK(std::abs(closed - brute) <= 1e-8 * std::abs(brute));

  // degenerate-detuning branch: values converge continuously to the limit
  const auto at = dynamics::pw_double_integral(g, 0.3, 0.3, 2.0);
  for (double eps : {1e-5, 1e-7, 1e-9}) {
    const auto near = dynamics::pw_double_integral(g, 0.3 + eps, 0.3, 2.0);
    CHECK(std::abs(near - at) <= 10.0 * eps * std::abs(at) + 1e-10 * std::abs(at));
  }
}

TEST_CASE("plane-wave double integral: randomized oracle nodes") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double dn = -4.0 + 8.0 * u(rng), dn0 = -4.0 + 8.0 * u(rng);
    const double t = 0.5 + 4.0 * u(rng);
    const auto closed = dynamics::pw_double_integral(1.0, dn, dn0, t);
    const auto brute = brute_pw_double(1.0, dn, dn0, t);
    CHECK(std::abs(closed - brute) <= 1e-7 * std::abs(brute));
  }
}

TEST_CASE("amplitude_e_pw initial condition and free decay") {
  const auto a = toy_atom();
  const Mode nu{50.0, 0.4, 1.1, 1};
  const Mode nu0{49.9, 0.2, 0.3, 1};
  CHECK(dynamics::amplitude_e_pw(a, nu, nu, 1, 1, 0.0) == complex<double>(1.0, 0.0));
  CHECK(dynamics::amplitude_e_pw(a, nu, nu0, 1, 1, 0.0) == complex<double>(0.0, 0.0));
  CHECK(dynamics::amplitude_e_pw(a, nu, nu, 0, 1, 0.0) == complex<double>(0.0, 0.0));

  atom::AtomSpec off = a;
  off.coupling_scale = 0.0;
  const double t = 3.0 / a.gamma;
  CHECK(dynamics::amplitude_e_pw(off, nu, nu, 1, 1, t)
        == complex<double>(std::exp(-a.gamma * t / 2.0), 0.0));
}

TEST_CASE("vortex double integral against brute quadrature") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double sg = 0.4 + 2.0 * u(rng);
    const double dc = -1.5 + 3.0 * u(rng);
    const double dn = -3.0 + 6.0 * u(rng);
    const double t = 0.5 + 4.0 * u(rng);
    const auto closed = dynamics::vortex_double_integral(1.0, sg, dc, dn, t);
    const auto brute = brute_vortex_double(1.0, sg, dc, dn, t);
    CHECK(std::abs(closed - brute) <= 1e-8 * std::abs(brute));
  }
}

TEST_CASE("triple time integral: anchor node and randomized oracle") {
  CHECK(dynamics::triple_time_integral(1.0, 0.8, 0.1, 0.2, 0.0, 0.0)
        == complex<double>(0.0, 0.0));

  // spec node: zero detunings, t = 5/Gamma
  const auto closed5 = dynamics::triple_time_integral(1.0, 0.8, 0.0, 0.0, 0.0, 5.0);
  const auto brute5 = brute_triple(1.0, 0.8, 0.0, 0.0, 0.0, 5.0);
  CHECK(std::abs(closed5 - brute5) <= 1e-7 * std::abs(brute5));

  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double sg = 0.4 + 2.0 * u(rng);
    const double d1 = -3.0 + 6.0 * u(rng), d2 = -3.0 + 6.0 * u(rng);
    const double dc = -1.0 + 2.0 * u(rng);
    const double t = 0.5 + 3.5 * u(rng);
    const auto closed = dynamics::triple_time_integral(1.0, sg, d1, d2, dc, t);
    const auto brute = brute_triple(1.0, sg, d1, d2, dc, t);
    CHECK(std::abs(closed - brute) <= 1e-7 * std::abs(brute));
  }
}

TEST_CASE("scattering kernel F: Bessel gate at zero impact parameter") {
  const auto a = toy_atom();
  auto p = toy_packet();
  p.b = 0.0;
  const auto norm = photon::normalize(p);
  // m != n through J_{m-n}(0) = 0
  CHECK(std::abs(dynamics::scattering_kernel_F(a, p, norm, 1, 50.0, 50.0, 2.0 / a.gamma))
        == 0.0);
  // m == n survives
  p.m_gamma = 1;
  CHECK(std::abs(dynamics::scattering_kernel_F(a, p, norm, 1, 50.0, 50.0, 2.0 / a.gamma))
        > 0.0);
  // finite b re-opens the channel
  p.m_gamma = 2;
  p.b = 0.5 / p.kappa_c;
  CHECK(std::abs(dynamics::scattering_kernel_F(a, p, norm, 1, 50.0, 50.0, 2.0 / a.gamma))
        > 0.0);
}

TEST_CASE("amplitude_e_vortex: initial condition and decoupled decay") {
  const auto a = toy_atom();
  const auto p = toy_packet();
  const auto norm = photon::normalize(p);
  const Mode nu{50.0, p.theta_c(), 0.4, 1};

  const auto ov = photon::overlap_plane_wave(p, norm, nu);
  CHECK(std::abs(dynamics::amplitude_e_vortex(a, p, norm, nu, 2, 2, 0.0) - ov)
        <= 1e-14 * std::abs(ov));
  CHECK(dynamics::amplitude_e_vortex(a, p, norm, nu, 0, 2, 0.0) == complex<double>(0.0, 0.0));

  atom::AtomSpec off = a;
  off.coupling_scale = 0.0;
  const double t = 2.0 / a.gamma;
  CHECK(std::abs(dynamics::amplitude_e_vortex(off, p, norm, nu, 2, 2, t)
                 - ov * std::exp(-a.gamma * t / 2.0))
        <= 1e-14 * std::abs(ov));
}

TEST_CASE("excited-state norm sum decays monotonically") {
  const auto a = toy_atom();
  const auto p = toy_packet();
  const auto norm = photon::normalize(p);
  // coarse mode grid over the packet (oracle: discretized mode-grid sum)
  std::vector<Mode> modes;
  for (int iw = 0; iw < 9; ++iw)
    for (int it = 0; it < 7; ++it)
      modes.push_back({50.0 + (iw - 4) * 0.3, p.theta_c() + (it - 3) * 0.02, 0.0, 1});
  double prev = 1e300;
  for (double tg : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    double total = 0.0;
    for (const auto& m : modes)
      for (int n = -1; n <= 1; ++n)
        total += std::norm(dynamics::amplitude_e_vortex(a, p, norm, m, n, 2, tg / a.gamma));
    CHECK(total < prev);
    prev = total;
  }
}

TEST_CASE("amplitude_g_vortex: symmetry and initial condition") {
  const auto a = toy_atom();
  auto p = toy_packet();
  p.b = 0.3 / p.kappa_c;
  p.phi_b = 0.9;
  const auto norm = photon::normalize(p);
  const Mode nu1{50.2, 0.7, 1.9, 1};
  const Mode nu2{49.8, p.theta_c(), 0.3, 1};

  CHECK(dynamics::amplitude_g_vortex(a, p, norm, nu1, nu2, 1, 0.0) == complex<double>(0.0, 0.0));

  const double t = 4.0 / a.gamma;
  const auto fwd = dynamics::amplitude_g_vortex(a, p, norm, nu1, nu2, 1, t);
  const auto rev = dynamics::amplitude_g_vortex(a, p, norm, nu2, nu1, 1, t);
  CHECK(fwd.real() == rev.real()); // bit-identical under exchange
  CHECK(fwd.imag() == rev.imag());
  CHECK(std::abs(fwd) > 0.0);
}

TEST_CASE("channel weight: zero start, monotonicity, plateau") {
  const auto cfg_atom = toy_atom();
  const auto p = toy_packet();
  const auto norm = photon::normalize(p);

  const auto w0 = dynamics::channel_weight(cfg_atom, p, norm, 1, 1, 0.0);
  CHECK(w0.value == 0.0);

  const auto w5 = dynamics::channel_weights(cfg_atom, p, norm, 1, 5.0);
  const auto w8 = dynamics::channel_weights(cfg_atom, p, norm, 1, 8.0);
  const auto w10 = dynamics::channel_weights(cfg_atom, p, norm, 1, 10.0);
  for (int n = -1; n <= 1; ++n) {
    CHECK(w5.at(n) >= 0.0);
    CHECK(w5.at(n) <= w10.at(n));
    CHECK(std::abs(w10.at(n) - w8.at(n)) / w10.at(n) < 1e-3); // late-time plateau
  }
}

TEST_CASE("channel weight matches the Monte Carlo oracle") {
  // reduced two-time form vs stratified MC of the printed six-fold
  // integrand with the deltas sampled as coincident pairs
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double sigma = 1.2, dc = 0.4, t = 4.0;
  const auto red = dynamics::channel_weight_reduced(1.0, sigma, dc, t, 1e-9);

  const std::size_t nsamp = 400000;
  double sum = 0.0, sum2 = 0.0;
  const double vol0 = t * t * t / 6.0;
  for (std::size_t i = 0; i < nsamp; ++i) {
    double a = t * u(rng), b = t * u(rng), c = t * u(rng);
    const double t1 = std::min({a, b, c});
    const double t3 = std::max({a, b, c});
    const double t2 = a + b + c - t1 - t3;
    const double t2p = t1 + (t3 - t1) * u(rng);
    const double f = std::exp(-0.5 * (t3 + t1 - t2) - sigma * sigma * t2 * t2 / 2.0)
                     * std::exp(-0.5 * (t3 + t1 - t2p) - sigma * sigma * t2p * t2p / 2.0)
                     * std::cos(dc * (t2 - t2p));
    const double w = f * vol0 * (t3 - t1);
    sum += w;
    sum2 += w * w;
  }
  const double mean = sum / nsamp;
  const double se = std::sqrt((sum2 / nsamp - mean * mean) / nsamp);
  CHECK(std::abs(red.value - mean) < 3.0 * se);
}

TEST_CASE("channel weight magnitudes for the sodium defaults") {
  atom::AtomSpec na = atom::preset("Na-3p3s");
  photon::PhotonPacket p;
  p.m_gamma = 3;
  p.lambda = 1;
  p.kappa_c = 0.21;
  p.k_c = std::sqrt(2.1 * 2.1 - 0.21 * 0.21);
  p.sigma = 0.021;
  const auto norm = photon::normalize(p);
  const auto iw = dynamics::channel_weights(na, p, norm, 1, 10.0);
  // dominant channel n = lambda; hierarchy set by d^1_{n,1}(theta_c)^2
  CHECK(iw.at(1) > 100.0 * iw.at(0));
  CHECK(iw.at(0) > 100.0 * iw.at(-1));
  CHECK(iw.at(1) == doctest::Approx(4.9566e-11).epsilon(1e-3)); // frozen pipeline anchor
}
