// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#ifndef VORTEXPAIR_OBSERVABLES_HPP
#define VORTEXPAIR_OBSERVABLES_HPP

#include <string>
#include <vector>

#include "vortexpair/dynamics.hpp"

namespace vortexpair::observables {

using atom::AtomSpec;
using photon::PhotonPacket;
using photon::TrapSpec;

/// Total-angular-momentum statistics of the emitted pair.
struct TamStats {
  double j_z_mean = 0.0;  // <J_z>, hbar
  double mismatch = 0.0;  // Delta J_z = J_z - (m_gamma + m_e)
  double variance = 0.0;  // (delta J_z)^2, hbar^2
  double std_dev = 0.0;   // delta J_z, hbar
  bool bessel_regime_ok = true;
};

/// Channel-resolved TAM statistics at time t (Gamma^-1 units). The channel
/// sums are normalized by the total weight 1 + sum_n w_n I_n so the
/// sigma_b -> 0 limits are exact.
TamStats tam_stats(const AtomSpec& atom, const PhotonPacket& packet, const TrapSpec& trap,
                   int m_e, double t_gamma, double rel_tol = 1e-7);

/// Mean part only (j_z_mean, mismatch filled; variance fields zero).
TamStats tam_mean(const AtomSpec& atom, const PhotonPacket& packet, const TrapSpec& trap, int m_e,
                  double t_gamma, double rel_tol = 1e-7);

/// Variance part only (variance, std_dev filled).
TamStats tam_variance(const AtomSpec& atom, const PhotonPacket& packet, const TrapSpec& trap,
                      int m_e, double t_gamma, double rel_tol = 1e-7);

/// Large-m_gamma asymptotic of delta J_z:
/// (kappa_c sigma_b/2)^{m_gamma} sqrt(m_gamma^2/m_gamma! * sum_n I_n).
/// Requires m_gamma >= 3.
double tam_variance_asymptotic(const AtomSpec& atom, const PhotonPacket& packet,
                               const TrapSpec& trap, int m_e, double t_gamma, int m_gamma,
                               double rel_tol = 1e-7);

/// Symmetric OAM window [l_min, l_max] for both photons.
struct OamWindow {
  int l_min = -3;
  int l_max = 3;
  int size() const { return l_max - l_min + 1; }
};

/// Momentum discretization record for the coincidence matrix.
struct GridSpec {
  double line_halfwidth_gammas = 20.0;  // emission-line band, units of Gamma
  double packet_halfwidth_sigmas = 6.0; // packet band, units of sigma
  int omega_nodes_per_panel = 14;
  int theta_nodes_per_panel = 12;
  int azimuthal_cutoff = 12; // pmax of the explicit partial-wave sums
  int b_nodes = 20;          // Gauss-Laguerre nodes of the trap average
  double t_gamma = 20.0;     // t -> infinity surrogate
  bool richardson_check = true;
};

/// Windowed OAM-coincidence probability matrix P_{l1,l2}, trap-averaged and
/// normalized by the all-space total.
struct PairProbabilityMatrix {
  OamWindow window;
  std::vector<double> values; // row-major, (l1-l_min)*size + (l2-l_min)
  double captured_mass = 0.0;
  double richardson_rel_change = 0.0;
  GridSpec grid_spec;
  std::vector<std::string> warnings;

  double at(int l1, int l2) const;
  double row_sum(int l1) const;
  /// Fraction of windowed mass off the conservation line l1 + l2 = m1 + m2.
  double off_conservation_mass(int line_sum) const;
};

/// Joint OAM distribution of the two-photon state at t -> infinity.
/// The packet's own impact parameter is ignored; b is averaged over the trap.
/// Throws NumericalError when the grid fails the resolution gate
/// (captured_mass < 0.98).
PairProbabilityMatrix pair_probability(const AtomSpec& atom, const PhotonPacket& packet,
                                       const TrapSpec& trap, int m_e, const OamWindow& window,
                                       const GridSpec& grid = {});

/// Non-factorizability witness: 1 - (largest singular value)^2 / ||P||_F^2.
/// Strictly positive iff the coincidence pattern is not rank one.
/// Requires captured_mass >= 0.98; throws std::domain_error on an all-zero
/// matrix.
double entanglement_witness(const PairProbabilityMatrix& matrix);

} // namespace vortexpair::observables

#endif
