// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#ifndef VORTEXPAIR_DYNAMICS_HPP
#define VORTEXPAIR_DYNAMICS_HPP

#include <array>
#include <complex>
#include <vector>

#include "vortexpair/atom.hpp"
#include "vortexpair/photon.hpp"

namespace vortexpair::dynamics {

using atom::AtomSpec;
using photon::Mode;
using photon::Normalization;
using photon::PhotonPacket;
using complexd = std::complex<double>;

/// Times in units of Gamma^-1; strictly increasing, t_max <= 50.
struct TimeGrid {
  std::vector<double> points;
  void validate() const;
  double t_max() const { return points.empty() ? 0.0 : points.back(); }
};

/// Detuning of a mode from the atomic resonance, Delta_nu = omega - omega_a.
inline double detuning(const AtomSpec& atom, double omega) { return omega - atom.omega_a; }

/// Central detuning Delta_c = omega_a - omega_c (note the opposite sign).
inline double central_detuning(const AtomSpec& atom, const PhotonPacket& p) {
  return atom.omega_a - p.omega_c();
}

/// f(omega, t) = (1 - e^{-Gamma t/2 - i Delta t}) / (Gamma/2 + i Delta).
complexd emission_kernel_f(double gamma, double delta, double t);

/// H(t; z, sigma) = int_0^t exp(z u - sigma^2 u^2 / 2) du, evaluated through
/// the Faddeeva function; Taylor branch below sigma*t = 1e-6 to avoid
/// cancellation.
complexd gauss_time_integral(double t, complexd z, double sigma);

/// Double time integral of the plane-wave amplitude,
/// int_0^t dt2 int_0^t2 dt1 e^{(G/2 + i d_nu0) t2 - (G/2 + i d_nu) t1};
/// continuous across the degenerate-detuning point d_nu = d_nu0.
complexd pw_double_integral(double gamma, double delta_nu, double delta_nu0, double t);

/// Excited-state amplitude for an incident plane wave (Markov closed form).
/// The delta term compares the mode labels exactly.
complexd amplitude_e_pw(const AtomSpec& atom, const Mode& nu, const Mode& nu0, int n, int m_e,
                        double t);

/// Double time integral of the vortex excited-state amplitude,
/// int_0^t dt1 e^{(G/2 + i Dc) t1 - s^2 t1^2/2} int_0^t1 dt2 e^{-(G/2 + i d_nu) t2}.
complexd vortex_double_integral(double gamma, double sigma, double delta_c, double delta_nu,
                                double t);

/// Triple time integral of the scattering kernel (t1 <= t2 <= t3),
/// exp(-G/2 (t3 + t1 - t2) - i d1 t3 + i Dc t2 - i d2 t1 - s^2 t2^2 / 2);
/// inner/outer exponential layers in closed form, middle layer via the
/// Faddeeva-based Gaussian integral.
complexd triple_time_integral(double gamma, double sigma, double delta1, double delta2,
                              double delta_c, double t);

/// Full scattering kernel F_{m,n}(omega1, omega2, t) including the
/// N i^{m-n} sigma^2 kappa_c G_n(omega_c, theta_c) e^{i(m-n)phi_b}
/// J_{m-n}(kappa_c b) prefactor. omega1 rides the late emission (t3),
/// omega2 the early one (t1).
complexd scattering_kernel_F(const AtomSpec& atom, const PhotonPacket& packet,
                             const Normalization& norm, int n, double omega1, double omega2,
                             double t);

/// Vortex excited-state amplitude C^v_{e,nu,n}(t).
complexd amplitude_e_vortex(const AtomSpec& atom, const PhotonPacket& packet,
                            const Normalization& norm, const Mode& nu, int n, int m_e, double t);

/// Symmetrized two-photon ground-state amplitude C^v_{g,nu1,nu2}(t);
/// exactly invariant under nu1 <-> nu2.
complexd amplitude_g_vortex(const AtomSpec& atom, const PhotonPacket& packet,
                            const Normalization& norm, const Mode& nu1, const Mode& nu2, int m_e,
                            double t);

/// Reduced two-time integral of the channel weight (t in Gamma^-1 units):
/// W(t) = int int_{0<=t1<=t3<=t} e^{-(t1+t3)} |H(t3/G) - H(t1/G)|^2 dt1 dt3.
struct ReducedWeight {
  double value = 0.0;
  double quad_error = 0.0;
};
ReducedWeight channel_weight_reduced(double gamma, double sigma, double delta_c, double t_gamma,
                                     double rel_tol = 1e-7);

/// TAM-transfer weight I_{n,lambda}(t) for one magnetic sublevel;
/// t in Gamma^-1 units.
struct ChannelWeight {
  double value = 0.0;
  double quad_error = 0.0;
};
ChannelWeight channel_weight(const AtomSpec& atom, const PhotonPacket& packet,
                             const Normalization& norm, int n, int m_e, double t_gamma,
                             double rel_tol = 1e-7);

/// All three channels n in {-1, 0, +1}; I[n+1] is the weight for sublevel n.
struct ChannelWeights {
  std::array<double, 3> value{};
  std::array<double, 3> quad_error{};
  double t_gamma = 0.0;
  double at(int n) const { return value[static_cast<std::size_t>(n + 1)]; }
};
ChannelWeights channel_weights(const AtomSpec& atom, const PhotonPacket& packet,
                               const Normalization& norm, int m_e, double t_gamma,
                               double rel_tol = 1e-7);

} // namespace vortexpair::dynamics

#endif
