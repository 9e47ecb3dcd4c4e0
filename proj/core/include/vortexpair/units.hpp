// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#ifndef VORTEXPAIR_UNITS_HPP
#define VORTEXPAIR_UNITS_HPP

namespace vortexpair::units {

// Natural units (hbar = c = 1): energies and momenta in eV, lengths in eV^-1.
// Config-boundary lengths are nm/um, times in units of Gamma^-1.
inline constexpr double hbar_c_ev_nm = 197.3269804;   // eV nm
inline constexpr double bohr_radius_nm = 0.0529177;   // nm
inline constexpr double hartree_ev = 27.211386245988; // eV
inline constexpr double hbar_ev_s = 6.582119569e-16;  // eV s
inline constexpr double fine_structure = 7.2973525693e-3;

inline constexpr double nm_to_inv_ev(double nm) { return nm / hbar_c_ev_nm; }
inline constexpr double inv_ev_to_nm(double inv_ev) { return inv_ev * hbar_c_ev_nm; }
inline constexpr double um_to_inv_ev(double um) { return um * 1e3 / hbar_c_ev_nm; }
inline constexpr double inv_ev_to_um(double inv_ev) { return inv_ev * hbar_c_ev_nm * 1e-3; }

// photon momentum in atomic units (a0^-1) for a given energy in eV
inline constexpr double ev_to_momentum_au(double ev) { return ev * bohr_radius_nm / hbar_c_ev_nm; }

// decay rate in eV from a lifetime in ns
inline constexpr double lifetime_ns_to_gamma_ev(double ns) { return hbar_ev_s / (ns * 1e-9); }

} // namespace vortexpair::units

#endif
