// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include "vortexpair/atom.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "vortexpair/quadrature.hpp"
#include "vortexpair/specfun.hpp"
#include "vortexpair/units.hpp"

namespace vortexpair::atom {

using specfun::clebsch_gordan;
using specfun::spherical_bessel;
using specfun::wigner_d1;

void AtomSpec::validate() const {
  if (n_g < 1) throw std::invalid_argument("AtomSpec: n_g must be >= 1");
  if (n_e < 2) throw std::invalid_argument("AtomSpec: n_e must be >= 2");
  if (!(z_eff > 0.0)) throw std::invalid_argument("AtomSpec: z_eff must be positive");
  if (!(omega_a > 0.0)) throw std::invalid_argument("AtomSpec: omega_a must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("AtomSpec: gamma must be positive");
  if (gamma / omega_a >= 1e-3)
    throw std::invalid_argument("AtomSpec: gamma/omega_a must be < 1e-3 (narrow line)");
}

AtomSpec preset(std::string_view name) {
  AtomSpec a;
  if (name == "Na-3p3s") {
    // 3p lifetime 16.4 ns -> 4e-8 eV; z_eff from the 3s ionization energy
    a.n_g = 3;
    a.n_e = 3;
    a.z_eff = 1.84;
    a.omega_a = 2.1;
    a.gamma = 4e-8;
  } else if (name == "H-2p1s") {
    a.n_g = 1;
    a.n_e = 2;
    a.z_eff = 1.0;
    a.omega_a = 10.2;
    a.gamma = 4.124e-7; // dipole-limit 2p->1s rate
  } else {
    throw std::invalid_argument("unknown atom preset: " + std::string(name));
  }
  return a;
}

std::vector<std::string> preset_names() { return {"Na-3p3s", "H-2p1s"}; }

namespace {

double fact(int n) {
  double v = 1.0;
  for (int i = 2; i <= n; ++i) v *= i;
  return v;
}

// generalized Laguerre L^alpha_k(x) by upward recurrence
double laguerre(int k, int alpha, double x) {
  if (k < 0) return 0.0;
  double l0 = 1.0;
  if (k == 0) return l0;
  double l1 = 1.0 + alpha - x;
  for (int i = 2; i <= k; ++i) {
    double l2 = ((2.0 * i - 1.0 + alpha - x) * l1 - (i - 1.0 + alpha) * l0) / i;
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

double radial_norm(int n, int l, double z) {
  return std::sqrt(std::pow(2.0 * z / n, 3) * fact(n - l - 1) / (2.0 * n * fact(n + l)));
}

} // namespace

double radial_wavefunction(int n, int l, double z_eff, double r) {
  if (l < 0 || l >= n) throw std::domain_error("radial_wavefunction: need 0 <= l < n");
  if (r < 0.0) throw std::domain_error("radial_wavefunction: r >= 0 required");
  const double rho = 2.0 * z_eff * r / n;
  return radial_norm(n, l, z_eff) * std::exp(-rho / 2.0) * std::pow(rho, l)
         * laguerre(n - l - 1, 2 * l + 1, rho);
}

double radial_wavefunction_derivative(int n, int l, double z_eff, double r) {
  if (l < 0 || l >= n) throw std::domain_error("radial_wavefunction: need 0 <= l < n");
  const double s = 2.0 * z_eff / n; // drho/dr
  const double rho = s * r;
  const int k = n - l - 1, alpha = 2 * l + 1;
  const double L = laguerre(k, alpha, rho);
  const double dL = k > 0 ? -laguerre(k - 1, alpha + 1, rho) : 0.0;
  double core;
  if (l == 0) {
    core = -0.5 * L + dL;
  } else {
    core = std::pow(rho, l) * (-0.5 * L + dL) + l * std::pow(rho, l - 1) * L;
  }
  return radial_norm(n, l, z_eff) * s * std::exp(-rho / 2.0) * core;
}

double radial_overlap(int n_e, int n_g, double z_eff, int L, double k_au) {
  if (L < 0) throw std::domain_error("radial_overlap: L >= 0 required");
  if (k_au < 0.0) throw std::domain_error("radial_overlap: k >= 0 required");
  // integrand decays like exp(-z r (1/n_e + 1/n_g)); pick the range from that scale
  const double decay = z_eff * (1.0 / n_e + 1.0 / n_g);
  const double r_max = 80.0 / decay;
  std::vector<double> seeds;
  if (k_au * r_max > 6.0) {
    const double pi = 3.14159265358979323846;
    for (double r = pi / k_au; r < r_max; r += pi / k_au) seeds.push_back(r);
  }
  auto f = [&](double r) {
    return radial_wavefunction(n_e, 1, z_eff, r) * spherical_bessel(L, k_au * r)
           * radial_wavefunction_derivative(n_g, 0, z_eff, r) * r * r;
  };
  return quadrature::integrate(f, 0.0, r_max, 1e-12, 1e-300, seeds).value;
}

namespace {

struct MultipoleKey {
  int n, lambda, n_g, n_e, conv;
  double z, k;
  bool operator==(const MultipoleKey& o) const {
    return n == o.n && lambda == o.lambda && n_g == o.n_g && n_e == o.n_e && conv == o.conv
           && z == o.z && k == o.k;
  }
};
struct MultipoleKeyHash {
  std::size_t operator()(const MultipoleKey& k) const {
    std::size_t h = std::hash<int>()((k.n + 1) + 4 * (k.lambda + 1) + 16 * k.n_g + 256 * k.n_e
                                     + 4096 * k.conv);
    h ^= std::hash<double>()(k.z) + 0x9e3779b97f4a7c15ull + (h << 6);
    h ^= std::hash<double>()(k.k) + 0x9e3779b97f4a7c15ull + (h << 6);
    return h;
  }
};

} // namespace

complexd multipole_element(const AtomSpec& atom, int n, int lambda, double k_au) {
  if (n < -1 || n > 1) throw std::domain_error("multipole_element: |n| <= 1");
  if (lambda != 1 && lambda != -1) throw std::domain_error("multipole_element: lambda in {-1,+1}");

  // hot path for mode-grid assembly: memoize the unit-scale value
  static std::unordered_map<MultipoleKey, complexd, MultipoleKeyHash> cache;
  static std::mutex mtx;
  MultipoleKey key{n, lambda, atom.n_g, atom.n_e, static_cast<int>(atom.cg_convention),
                   atom.z_eff, k_au};
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return atom.coupling_scale * it->second;
  }

  const complexd I(0.0, 1.0);
  complexd sum(0.0, 0.0);
  double max_abs = 0.0;
  int done = 0;
  constexpr int kCap = 40;
  bool converged = false;
  for (int L = 0; L <= kCap; ++L) {
    const double cg1 = clebsch_gordan(1, 0, L, 0, 1, 0);
    const double cg2 = atom.cg_convention == CgConvention::Printed
                           ? clebsch_gordan(1, lambda, L, 0, 1, n)
                           : (std::abs(n - lambda) <= L ? clebsch_gordan(1, lambda, L, n - lambda, 1, n)
                                                        : 0.0);
    if (cg1 == 0.0 || cg2 == 0.0) {
      if (L > 2 && ++done >= 3) { // triangle rule gates everything past L = 2
        converged = true;
        break;
      }
      continue;
    }
    const double rad = radial_overlap(atom.n_e, atom.n_g, atom.z_eff, L, k_au);
    const complexd term =
        std::pow(I, L) * std::sqrt(std::pow(2.0 * L + 1.0, 3) / 3.0) * cg1 * cg2 * rad;
    sum += term;
    max_abs = std::max(max_abs, std::abs(sum));
    if (L > 2 && std::abs(term) < 1e-10 * max_abs) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("multipole_element: L-sum not converged within L <= 40");
  const complexd unit = -I * sum;
  std::lock_guard<std::mutex> lock(mtx);
  cache.emplace(key, unit);
  return atom.coupling_scale * unit;
}

namespace {

struct CalKey {
  int n_g, n_e, conv;
  double z, wa, g;
  bool operator==(const CalKey& o) const {
    return n_g == o.n_g && n_e == o.n_e && conv == o.conv && z == o.z && wa == o.wa && g == o.g;
  }
};
struct CalKeyHash {
  std::size_t operator()(const CalKey& k) const {
    std::size_t h = std::hash<int>()(k.n_g * 8 + k.n_e * 64 + k.conv);
    auto mix = [&h](double v) { h ^= std::hash<double>()(v) + 0x9e3779b97f4a7c15ull + (h << 6); };
    mix(k.z);
    mix(k.wa);
    mix(k.g);
    return h;
  }
};

// Calibration constant C so that G_n = C sqrt(2 pi / omega) sum_n' d^1 M_n'
// satisfies the Markov closure at resonance for coupling_scale = 1:
//   gamma = (omega_a^2/(2pi)^2) * sum_s int dOmega |G_n|^2
//         = (omega_a^2/(2pi)^2) * (2pi/omega_a) * 2pi * (2/3) * C^2 * S
// with S = sum_s sum_n' |M^(s)_n'(k_a)|^2 (d-orthogonality makes it
// n-independent). All in eV-folded units; M stays in atomic units, so C
// absorbs the a.u. -> eV bookkeeping.
double calibration_constant(const AtomSpec& atom) {
  static std::unordered_map<CalKey, double, CalKeyHash> cache;
  static std::mutex mtx;
  CalKey key{atom.n_g, atom.n_e, static_cast<int>(atom.cg_convention),
             atom.z_eff, atom.omega_a, atom.gamma};
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  AtomSpec unit = atom;
  unit.coupling_scale = 1.0;
  const double k_au = units::ev_to_momentum_au(atom.omega_a);
  double S = 0.0;
  for (int s : {+1, -1})
    for (int np = -1; np <= 1; ++np) S += std::norm(multipole_element(unit, np, s, k_au));
  // gamma = (wa^2/(2pi)^2) * C^2 (2pi/wa) * 2pi * (2/3) * S  =>  C^2 = 3 gamma / (2 wa S)
  const double c = std::sqrt(3.0 * atom.gamma / (2.0 * atom.omega_a * S));
  std::lock_guard<std::mutex> lock(mtx);
  cache.emplace(key, c);
  return c;
}

} // namespace

complexd coupling_amplitude(const AtomSpec& atom, int n, int s, double omega_ev, double theta) {
  if (!(omega_ev > 0.0)) throw std::domain_error("coupling_amplitude: omega must be positive");
  const double k_au = units::ev_to_momentum_au(omega_ev);
  complexd mixed(0.0, 0.0);
  for (int np = -1; np <= 1; ++np) {
    const complexd m = multipole_element(atom, np, s, k_au);
    if (m != complexd(0.0, 0.0)) mixed += wigner_d1(n, np, theta) * m;
  }
  const double pi = 3.14159265358979323846;
  return calibration_constant(atom) * std::sqrt(2.0 * pi / omega_ev) * mixed;
}

complexd mode_coupling(const AtomSpec& atom, int n, int s, double omega_ev, double theta,
                       double phi) {
  return std::exp(complexd(0.0, n * phi)) * coupling_amplitude(atom, n, s, omega_ev, theta);
}

double gamma_from_dipole(const AtomSpec& atom) {
  // only the n = lambda channel survives at k -> 0 in either convention
  const complexd m0 = multipole_element(atom, 1, 1, 1e-8);
  const double omega_au = atom.omega_a / units::hartree_ev;
  const double c_au = 1.0 / units::fine_structure;
  const double gamma_au = (4.0 / 3.0) * (omega_au / (c_au * c_au * c_au)) * std::norm(m0);
  return gamma_au * units::hartree_ev;
}

double gamma_from_closure(const AtomSpec& atom) {
  // gamma = (wa^2/(2pi)^2) sum_s int dOmega |G_n(wa, theta)|^2, any n
  const double pi = 3.14159265358979323846;
  double total = 0.0;
  for (int s : {+1, -1}) {
    auto f = [&](double th) {
      return std::norm(coupling_amplitude(atom, 1, s, atom.omega_a, th)) * std::sin(th);
    };
    total += 2.0 * pi * quadrature::integrate(f, 0.0, pi, 1e-11).value;
  }
  return atom.omega_a * atom.omega_a / (4.0 * pi * pi) * total;
}

CouplingTable::CouplingTable(const AtomSpec& atom, int lambda, std::vector<double> omegas,
                             std::vector<double> thetas)
    : omegas_(std::move(omegas)), thetas_(std::move(thetas)) {
  for (std::size_t i = 1; i < omegas_.size(); ++i)
    if (!(omegas_[i] > omegas_[i - 1]))
      throw std::invalid_argument("CouplingTable: omega nodes must be strictly increasing");
  for (std::size_t i = 1; i < thetas_.size(); ++i)
    if (!(thetas_[i] > thetas_[i - 1]))
      throw std::invalid_argument("CouplingTable: theta nodes must be strictly increasing");
  values_.reserve(3 * omegas_.size() * thetas_.size());
  for (int n = -1; n <= 1; ++n)
    for (double w : omegas_)
      for (double th : thetas_) {
        complexd g = coupling_amplitude(atom, n, lambda, w, th);
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
          throw NumericalError("CouplingTable: non-finite coupling value");
        values_.push_back(g);
      }
}

complexd CouplingTable::value(int n, std::size_t i_omega, std::size_t i_theta) const {
  return values_[(static_cast<std::size_t>(n + 1) * omegas_.size() + i_omega) * thetas_.size()
                 + i_theta];
}

} // namespace vortexpair::atom
