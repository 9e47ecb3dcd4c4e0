// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include "vortexpair/photon.hpp"

#include <cmath>
#include <stdexcept>

#include "vortexpair/quadrature.hpp"
#include "vortexpair/specfun.hpp"

namespace vortexpair::photon {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}

double Mode::k_perp() const { return omega * std::sin(theta); }
double Mode::k_z() const { return omega * std::cos(theta); }

double PhotonPacket::omega_c() const { return std::hypot(kappa_c, k_c); }
double PhotonPacket::theta_c() const { return std::atan2(kappa_c, k_c); }

void PhotonPacket::validate() const {
  if (!(kappa_c > 0.0)) throw std::invalid_argument("PhotonPacket: kappa_c must be positive");
  if (!(k_c > 0.0)) throw std::invalid_argument("PhotonPacket: k_c must be positive");
  if (!(sigma > 0.0 && sigma < kappa_c))
    throw std::invalid_argument("PhotonPacket: need 0 < sigma < kappa_c (paraxial packet)");
  if (lambda != 1 && lambda != -1)
    throw std::invalid_argument("PhotonPacket: lambda must be +1 or -1");
  if (!(b >= 0.0)) throw std::invalid_argument("PhotonPacket: b must be >= 0");
}

void TrapSpec::validate(double sigma) const {
  if (!(sigma_b > 0.0)) throw std::invalid_argument("TrapSpec: sigma_b must be positive");
  if (!(sigma_b < 0.1 / sigma))
    throw std::invalid_argument("TrapSpec: sigma_b must be < 0.1/sigma (b << 1/sigma regime)");
}

double packet_profile(const PhotonPacket& p, double k_perp, double k_z) {
  const double dkp = (k_perp - p.kappa_c) / p.sigma;
  const double dkz = (k_z - p.k_c) / p.sigma;
  return std::exp(-0.5 * (dkp * dkp + dkz * dkz));
}

Normalization normalize(const PhotonPacket& p) {
  p.validate();
  // 1 = (N/2pi)^2 (1/(2pi)^3) * 2pi * Iperp * Iz
  const double lo = std::max(0.0, p.kappa_c - 30.0 * p.sigma);
  auto fperp = [&](double k) {
    const double d = (k - p.kappa_c) / p.sigma;
    return k * std::exp(-d * d);
  };
  auto fz = [&](double k) {
    const double d = (k - p.k_c) / p.sigma;
    return std::exp(-d * d);
  };
  const double iperp =
      quadrature::integrate(fperp, lo, p.kappa_c + 30.0 * p.sigma, 1e-12).value;
  const double iz = quadrature::integrate(fz, p.k_c - 30.0 * p.sigma, p.k_c + 30.0 * p.sigma,
                                          1e-12).value;
  if (!(iperp > 0.0) || !(iz > 0.0))
    throw NumericalError("normalize: degenerate packet profile integral");
  Normalization n;
  n.n_packet = kTwoPi * kTwoPi / std::sqrt(iperp * iz);
  return n;
}

complexd overlap_plane_wave(const PhotonPacket& p, const Normalization& norm, const Mode& mode) {
  if (mode.s != 1 && mode.s != -1) throw std::invalid_argument("Mode: s must be +1 or -1");
  if (!(mode.omega > 0.0)) throw std::invalid_argument("Mode: omega must be positive");
  if (mode.s != p.lambda) return {0.0, 0.0};
  const double kp = mode.k_perp();
  const double amp = norm.n_packet / kTwoPi * packet_profile(p, kp, mode.k_z());
  const double phase = p.m_gamma * mode.phi + kp * p.b * std::cos(mode.phi - p.phi_b);
  return std::polar(amp, phase);
}

double trap_density(const TrapSpec& trap, double b) {
  if (b < 0.0) throw std::domain_error("trap_density: b must be >= 0");
  const double s2 = trap.sigma_b * trap.sigma_b;
  return std::exp(-b * b / s2) / (kPi * s2);
}

BesselWeight bessel_weight(int m_gamma, int n, double kappa_c, double sigma_b) {
  BesselWeight w;
  const double x = kappa_c * sigma_b / 2.0;
  w.regime_ok = x < 0.5;
  const int d = std::abs(m_gamma - n);
  double f = 1.0;
  for (int i = 2; i <= d; ++i) f *= i;
  w.value = std::pow(x * x, d) / f;
  return w;
}

} // namespace vortexpair::photon
