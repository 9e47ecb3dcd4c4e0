// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#ifndef VORTEXPAIR_PHOTON_HPP
#define VORTEXPAIR_PHOTON_HPP

#include <complex>

namespace vortexpair::photon {

using complexd = std::complex<double>;

/// Plane-wave mode label: momentum in spherical form plus helicity.
struct Mode {
  double omega;  // eV
  double theta;  // rad
  double phi;    // rad
  int s;         // helicity, +1 or -1
  double k_perp() const;
  double k_z() const;
};

/// Bessel-Gaussian incident packet. Momenta/energies in eV, lengths in
/// eV^-1 internally (config layer converts nm).
struct PhotonPacket {
  int m_gamma = 3;       // total angular momentum, hbar units
  int lambda = 1;        // helicity
  double kappa_c = 0.21; // central transverse momentum, eV
  double k_c = 2.089;    // central longitudinal momentum, eV
  double sigma = 0.021;  // common momentum spread, eV
  double b = 0.0;        // impact parameter, eV^-1
  double phi_b = 0.0;    // azimuth of the impact parameter

  double omega_c() const; // sqrt(kappa_c^2 + k_c^2)
  double theta_c() const; // arctan(kappa_c / k_c)

  /// Throws std::invalid_argument on invariant violation
  /// (kappa_c, k_c > 0; 0 < sigma < kappa_c).
  void validate() const;
};

/// Gaussian transverse distribution of the trapped atom.
struct TrapSpec {
  double sigma_b = 0.0; // eV^-1

  /// Validity of the Laplace step requires sigma_b << 1/sigma; enforced as
  /// sigma_b < 0.1/sigma. Throws std::invalid_argument otherwise.
  void validate(double sigma) const;
};

/// Packet normalization record. `n_packet` is the constant N appearing in
/// the closed-form kernels (Bessel-measure convention); the plane-wave
/// amplitude carries n_packet/(2 pi) so that the continuum mode sum
/// sum_s int d^3k/(2pi)^3 |<nu|gamma_i>|^2 equals one.
struct Normalization {
  double n_packet = 0.0;
};

/// Solves <gamma_i|gamma_i> = 1 for the packet constant. Throws
/// NumericalError if the profile quadrature fails to converge.
Normalization normalize(const PhotonPacket& packet);

/// Plane-wave overlap <nu|gamma_i>: Gaussian envelopes around
/// (kappa_c, k_c), vortex phase e^{i m_gamma phi}, impact-parameter factor
/// e^{i k_perp b cos(phi - phi_b)}, zero unless s = lambda.
complexd overlap_plane_wave(const PhotonPacket& packet, const Normalization& norm,
                            const Mode& mode);

/// Gaussian profile factor of the overlap (no phases, no helicity gate).
double packet_profile(const PhotonPacket& packet, double k_perp, double k_z);

/// Transverse atom-position density n(b) = exp(-b^2/sigma_b^2)/(pi sigma_b^2).
double trap_density(const TrapSpec& trap, double b);

/// Trap-averaged squared Bessel weight in the power-series regime:
/// (1/|m_gamma - n|!) (kappa_c sigma_b / 2)^{2 |m_gamma - n|}.
/// `regime_ok` is false when sigma_b kappa_c / 2 >= 0.5.
struct BesselWeight {
  double value = 0.0;
  bool regime_ok = true;
};
BesselWeight bessel_weight(int m_gamma, int n, double kappa_c, double sigma_b);

} // namespace vortexpair::photon

#endif
