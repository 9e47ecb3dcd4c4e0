// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#ifndef VORTEXPAIR_ATOM_HPP
#define VORTEXPAIR_ATOM_HPP

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace vortexpair::atom {

using complexd = std::complex<double>;

/// Index convention for the helicity Clebsch-Gordan factor in the multipole
/// sum. `Printed` couples <1,lambda; L,0 | 1,n> (collapses the sum onto
/// n = lambda); `MAdditive` couples <1,lambda; L,n-lambda | 1,n> so the
/// third components add. Both are exposed; Printed is the default.
enum class CgConvention { Printed, MAdditive };

/// Two-level hydrogenlike atom: ground (n_g, l=0) and excited p-manifold
/// (n_e, l=1, sublevels n in {-1,0,1}).
struct AtomSpec {
  int n_g = 1;
  int n_e = 2;
  double z_eff = 1.0;        // effective nuclear charge
  double omega_a = 10.2;     // resonance energy, eV
  double gamma = 4.124e-7;   // decay rate, eV
  double coupling_scale = 1.0;
  CgConvention cg_convention = CgConvention::Printed;

  /// Throws std::invalid_argument when invariants fail
  /// (n_g >= 1, n_e >= 2, omega_a > 0, 0 < gamma and gamma/omega_a < 1e-3).
  void validate() const;
};

/// Named presets: "Na-3p3s", "H-2p1s".
AtomSpec preset(std::string_view name);
std::vector<std::string> preset_names();

/// Hydrogenlike radial wave function R_{n,l}(r), atomic units,
/// normalized so that int R^2 r^2 dr = 1. Requires 0 <= l < n, r >= 0.
double radial_wavefunction(int n, int l, double z_eff, double r);

/// dR_{n,l}/dr, atomic units.
double radial_wavefunction_derivative(int n, int l, double z_eff, double r);

/// int_0^inf R_{n_e,1}(r) j_L(kr) dR_{n_g,0}/dr r^2 dr, atomic units
/// (k in units of 1/a0).
double radial_overlap(int n_e, int n_g, double z_eff, int L, double k_au);

/// Multipole matrix element M^0_{n,0} for excitation from the s ground
/// state by a helicity-lambda photon of momentum k (atomic units, e=m=1).
/// Partial waves are truncated at relative contribution 1e-10, hard cap
/// L = 40 (throws NumericalError if not converged). Linear in
/// coupling_scale.
complexd multipole_element(const AtomSpec& atom, int n, int lambda, double k_au);

/// Non-dipolar coupling amplitude G_n(omega, theta) for photon helicity s,
/// with the mode-volume factor sqrt(V) folded out (units eV^{1/2}).
/// Magnitude is calibrated so the Markov closure reproduces atom.gamma
/// exactly at coupling_scale = 1:
///   gamma = (omega_a^2/(2 pi)^2) sum_s int dOmega |G_n(omega_a, theta)|^2.
complexd coupling_amplitude(const AtomSpec& atom, int n, int s, double omega_ev, double theta);

/// Full mode coupling g_{nu,n} = e^{i n phi} G_n(omega, theta).
complexd mode_coupling(const AtomSpec& atom, int n, int s, double omega_ev, double theta,
                       double phi);

/// Decay rate derived from the dipole (k->0) limit of the multipole element,
/// in eV. Consistency/validation mode only; presets configure gamma directly.
double gamma_from_dipole(const AtomSpec& atom);

/// Markov-closure decay rate recomputed from the coupling amplitudes by
/// angular quadrature, in eV. Equals atom.gamma to quadrature accuracy when
/// coupling_scale = 1; scales as coupling_scale^2 otherwise.
double gamma_from_closure(const AtomSpec& atom);

/// Immutable table of G_n(omega, theta) on strictly increasing node sets.
class CouplingTable {
public:
  CouplingTable(const AtomSpec& atom, int lambda, std::vector<double> omegas,
                std::vector<double> thetas);
  const std::vector<double>& omegas() const { return omegas_; }
  const std::vector<double>& thetas() const { return thetas_; }
  /// G_n at node (i_omega, i_theta) for sublevel n in {-1,0,1}.
  complexd value(int n, std::size_t i_omega, std::size_t i_theta) const;

private:
  std::vector<double> omegas_, thetas_;
  std::vector<complexd> values_; // [n+1][i_omega][i_theta] flattened
};

} // namespace vortexpair::atom

#endif
