// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include "vortexpair/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vortexpair/quadrature.hpp"
#include "vortexpair/specfun.hpp"

namespace vortexpair::dynamics {

namespace {

constexpr double kPi = 3.14159265358979323846;
const complexd kI(0.0, 1.0);

// (e^z - 1)/z, series below |z| = 1e-4
complexd em1(complexd z) {
  if (std::abs(z) < 1e-4) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
  return (std::exp(z) - 1.0) / z;
}

} // namespace

void TimeGrid::validate() const {
  if (points.empty()) throw std::invalid_argument("TimeGrid: empty");
  if (points.front() < 0.0) throw std::invalid_argument("TimeGrid: times must be >= 0");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i] > points[i - 1]))
      throw std::invalid_argument("TimeGrid: times must be strictly increasing");
  if (points.back() > 50.0)
    throw std::invalid_argument("TimeGrid: t_max must be <= 50 Gamma^-1");
}

complexd emission_kernel_f(double gamma, double delta, double t) {
  const complexd a(gamma / 2.0, delta);
  return t * em1(-a * t); // (1 - e^{-a t})/a
}

complexd gauss_time_integral(double t, complexd z, double sigma) {
  if (t == 0.0) return {0.0, 0.0};
  if (!(sigma > 0.0)) throw std::domain_error("gauss_time_integral: sigma must be positive");
  const double T = sigma * t;
  const complexd w = z / sigma;
  if (T < 1e-6 || T * (1.0 + std::abs(w)) < 1e-4) {
    // int_0^T e^{w v - v^2/2} dv, short-time series (in scaled units)
    const complexd h =
        T * (1.0 + w * T / 2.0 + (w * w - 1.0) * T * T / 6.0 + (w * w * w - 3.0 * w) * T * T * T / 24.0);
    return h / sigma;
  }
  const double rt2 = std::sqrt(2.0);
  const complexd ew2 = std::exp(w * w / 2.0);
  const complexd et = std::exp(w * T - T * T / 2.0);
  const complexd w1 = specfun::faddeeva(kI * (T - w) / rt2);
  const complexd w2 = specfun::faddeeva(kI * w / rt2);
  return std::sqrt(kPi / 2.0) * (2.0 * ew2 - et * w1 - w2) / sigma;
}

complexd pw_double_integral(double gamma, double delta_nu, double delta_nu0, double t) {
  const complexd a(gamma / 2.0, delta_nu);
  const complexd b(gamma / 2.0, delta_nu0);
  // (1/a) [ (e^{b t}-1)/b - (e^{(b-a)t}-1)/(b-a) ], removable at b = a
  return (t * em1(b * t) - t * em1((b - a) * t)) / a;
}

namespace {

bool same_mode(const Mode& x, const Mode& y) {
  return x.omega == y.omega && x.theta == y.theta && x.phi == y.phi && x.s == y.s;
}

} // namespace

complexd amplitude_e_pw(const AtomSpec& atom, const Mode& nu, const Mode& nu0, int n, int m_e,
                        double t) {
  const double decay = std::exp(-atom.gamma * t / 2.0);
  complexd c(0.0, 0.0);
  if (same_mode(nu, nu0) && n == m_e) c += decay;
  const complexd g1 = atom::mode_coupling(atom, m_e, nu.s, nu.omega, nu.theta, nu.phi);
  const complexd g0 = atom::mode_coupling(atom, n, nu0.s, nu0.omega, nu0.theta, nu0.phi);
  if (g1 != complexd(0.0, 0.0) && g0 != complexd(0.0, 0.0)) {
    c -= g1 * std::conj(g0) * decay
         * pw_double_integral(atom.gamma, detuning(atom, nu.omega), detuning(atom, nu0.omega), t);
  }
  return c;
}

complexd vortex_double_integral(double gamma, double sigma, double delta_c, double delta_nu,
                                double t) {
  const complexd beta(gamma / 2.0, delta_c);
  const complexd a(gamma / 2.0, delta_nu);
  // int_0^t dt1 e^{beta t1 - s^2 t1^2/2} (1 - e^{-a t1})/a
  return (gauss_time_integral(t, beta, sigma) - gauss_time_integral(t, beta - a, sigma)) / a;
}

complexd triple_time_integral(double gamma, double sigma, double delta1, double delta2,
                              double delta_c, double t) {
  const complexd beta(gamma / 2.0, delta_c);
  const complexd a1(gamma / 2.0, delta1);
  const complexd a2(gamma / 2.0, delta2);
  const complexd e1 = std::exp(-a1 * t);
  const complexd h_b_a1 = gauss_time_integral(t, beta - a1, sigma);
  const complexd h_b = gauss_time_integral(t, beta, sigma);
  const complexd h_b_a12 = gauss_time_integral(t, beta - a1 - a2, sigma);
  const complexd h_b_a2 = gauss_time_integral(t, beta - a2, sigma);
  return (h_b_a1 - e1 * h_b - h_b_a12 + e1 * h_b_a2) / (a1 * a2);
}

namespace {

// N i^{m-n} sigma^2 kappa_c G_n(omega_c, theta_c) e^{i(m-n)phi_b} J_{m-n}(kappa_c b)
complexd scattering_prefactor(const AtomSpec& atom, const PhotonPacket& p,
                              const Normalization& norm, int n) {
  const int dm = p.m_gamma - n;
  const complexd gc = atom::coupling_amplitude(atom, n, p.lambda, p.omega_c(), p.theta_c());
  return norm.n_packet * std::pow(kI, dm) * p.sigma * p.sigma * p.kappa_c * gc
         * std::polar(1.0, dm * p.phi_b) * specfun::bessel_j(dm, p.kappa_c * p.b);
}

} // namespace

complexd scattering_kernel_F(const AtomSpec& atom, const PhotonPacket& packet,
                             const Normalization& norm, int n, double omega1, double omega2,
                             double t) {
  const complexd t3 = triple_time_integral(atom.gamma, packet.sigma, detuning(atom, omega1),
                                           detuning(atom, omega2), central_detuning(atom, packet),
                                           t);
  return scattering_prefactor(atom, packet, norm, n) * t3;
}

complexd amplitude_e_vortex(const AtomSpec& atom, const PhotonPacket& packet,
                            const Normalization& norm, const Mode& nu, int n, int m_e, double t) {
  const double decay = std::exp(-atom.gamma * t / 2.0);
  complexd c(0.0, 0.0);
  if (n == m_e) c += photon::overlap_plane_wave(packet, norm, nu) * decay;
  const complexd g1 = atom::mode_coupling(atom, m_e, nu.s, nu.omega, nu.theta, nu.phi);
  if (g1 != complexd(0.0, 0.0)) {
    const complexd d2 = vortex_double_integral(atom.gamma, packet.sigma,
                                               central_detuning(atom, packet),
                                               detuning(atom, nu.omega), t);
    c -= scattering_prefactor(atom, packet, norm, n) * g1 * decay * d2;
  }
  return c;
}

complexd amplitude_g_vortex(const AtomSpec& atom, const PhotonPacket& packet,
                            const Normalization& norm, const Mode& nu1, const Mode& nu2, int m_e,
                            double t) {
  auto half = [&](const Mode& a, const Mode& b) {
    // photon `a` emitted through m_e while `b` rides the packet overlap,
    // minus the absorption-re-emission chain with `a` on the late emission
    complexd v = atom::mode_coupling(atom, m_e, a.s, a.omega, a.theta, a.phi)
                 * emission_kernel_f(atom.gamma, detuning(atom, a.omega), t)
                 * photon::overlap_plane_wave(packet, norm, b);
    const complexd gb = atom::mode_coupling(atom, m_e, b.s, b.omega, b.theta, b.phi);
    if (gb != complexd(0.0, 0.0)) {
      for (int n = -1; n <= 1; ++n) {
        const complexd ga = atom::mode_coupling(atom, n, a.s, a.omega, a.theta, a.phi);
        if (ga == complexd(0.0, 0.0)) continue;
        v -= ga * gb * scattering_kernel_F(atom, packet, norm, n, a.omega, b.omega, t);
      }
    }
    return v;
  };
  return half(nu1, nu2) + half(nu2, nu1);
}

ReducedWeight channel_weight_reduced(double gamma, double sigma, double delta_c, double t_gamma,
                                     double rel_tol) {
  if (t_gamma == 0.0) return {0.0, 0.0};
  const complexd beta(gamma / 2.0, delta_c);
  const double s = sigma / gamma; // dimensionless spread
  // inner structure lives at tau ~ 1/s; seed panels there
  std::vector<double> fine;
  for (double c : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    if (c / s < t_gamma) fine.push_back(c / s);
  }
  auto inner = [&](double tau3) {
    const complexd h3 = gauss_time_integral(tau3 / gamma, beta, sigma);
    auto f1 = [&](double tau1) {
      const complexd q = h3 - gauss_time_integral(tau1 / gamma, beta, sigma);
      return std::exp(-tau1) * std::norm(q);
    };
    return std::exp(-tau3)
           * quadrature::integrate(f1, 0.0, tau3, rel_tol * 0.1, 1e-320, fine).value;
  };
  std::vector<double> outer_seeds = fine;
  for (double c : {0.5, 1.0, 2.0, 4.0, 8.0})
    if (c < t_gamma) outer_seeds.push_back(c);
  quadrature::Result r;
  try {
    r = quadrature::integrate(inner, 0.0, t_gamma, rel_tol, 1e-320, outer_seeds);
  } catch (const NumericalError& e) {
    std::ostringstream os;
    os << "channel_weight_reduced: 2D quadrature failed at t=" << t_gamma << " s=" << s
       << " (inner scale 1/s=" << 1.0 / s << "): " << e.what();
    throw NumericalError(os.str());
  }
  return {r.value, r.error};
}

ChannelWeight channel_weight(const AtomSpec& atom, const PhotonPacket& packet,
                             const Normalization& norm, int n, int m_e, double t_gamma,
                             double rel_tol) {
  if (n < -1 || n > 1) throw std::domain_error("channel_weight: n in {-1,0,1}");
  if (t_gamma < 0.0) throw std::domain_error("channel_weight: t >= 0");
  const ReducedWeight w = channel_weight_reduced(atom.gamma, packet.sigma,
                                                 central_detuning(atom, packet), t_gamma, rel_tol);
  const double bose = (n == m_e) ? 2.0 : 1.0;
  const complexd gc = atom::coupling_amplitude(atom, n, packet.lambda, packet.omega_c(),
                                               packet.theta_c());
  const double s2 = packet.sigma * packet.sigma;
  const double pref = bose * 4.0 * norm.n_packet * norm.n_packet * s2 * s2 * packet.kappa_c
                      * packet.kappa_c * std::norm(gc);
  return {pref * w.value, pref * w.quad_error};
}

ChannelWeights channel_weights(const AtomSpec& atom, const PhotonPacket& packet,
                               const Normalization& norm, int m_e, double t_gamma,
                               double rel_tol) {
  ChannelWeights out;
  out.t_gamma = t_gamma;
  const ReducedWeight w = channel_weight_reduced(atom.gamma, packet.sigma,
                                                 central_detuning(atom, packet), t_gamma, rel_tol);
  for (int n = -1; n <= 1; ++n) {
    const double bose = (n == m_e) ? 2.0 : 1.0;
    const complexd gc = atom::coupling_amplitude(atom, n, packet.lambda, packet.omega_c(),
                                                 packet.theta_c());
    const double s2 = packet.sigma * packet.sigma;
    const double pref = bose * 4.0 * norm.n_packet * norm.n_packet * s2 * s2 * packet.kappa_c
                        * packet.kappa_c * std::norm(gc);
    out.value[static_cast<std::size_t>(n + 1)] = pref * w.value;
    out.quad_error[static_cast<std::size_t>(n + 1)] = pref * w.quad_error;
  }
  return out;
}

} // namespace vortexpair::dynamics
