// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include "vortexpair/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "vortexpair/quadrature.hpp"
#include "vortexpair/specfun.hpp"
#include "vortexpair/units.hpp"

namespace vortexpair::observables {

using complexd = std::complex<double>;
using dynamics::ChannelWeights;

namespace {

constexpr double kPi = 3.14159265358979323846;
const complexd kI(0.0, 1.0);

double fact(int n) {
  double v = 1.0;
  for (int i = 2; i <= n; ++i) v *= i;
  return v;
}

struct TamCore {
  double mismatch = 0.0;
  double variance = 0.0;
  bool regime_ok = true;
};

TamCore tam_core(const AtomSpec& atom, const PhotonPacket& packet, const TrapSpec& trap, int m_e,
                 double t_gamma, double rel_tol) {
  atom.validate();
  packet.validate();
  trap.validate(packet.sigma);
  if (m_e < -1 || m_e > 1) throw std::invalid_argument("tam: m_e must lie in {-1,0,1}");
  const photon::Normalization norm = photon::normalize(packet);
  const ChannelWeights iw = dynamics::channel_weights(atom, packet, norm, m_e, t_gamma, rel_tol);
  TamCore out;
  double mean_sum = 0.0, var_sum = 0.0, weight_sum = 0.0;
  for (int n = -1; n <= 1; ++n) {
    const photon::BesselWeight w =
        photon::bessel_weight(packet.m_gamma, n, packet.kappa_c, trap.sigma_b);
    out.regime_ok = out.regime_ok && w.regime_ok;
    const double wi = w.value * iw.at(n);
    weight_sum += wi;
    mean_sum += (n - packet.m_gamma) * wi;
    var_sum += double(n - packet.m_gamma) * (n - packet.m_gamma) * wi;
  }
  const double denom = 1.0 + weight_sum;
  out.mismatch = mean_sum / denom;
  out.variance = var_sum / denom;
  return out;
}

} // namespace

TamStats tam_stats(const AtomSpec& atom, const PhotonPacket& packet, const TrapSpec& trap,
                   int m_e, double t_gamma, double rel_tol) {
  const TamCore core = tam_core(atom, packet, trap, m_e, t_gamma, rel_tol);
  TamStats s;
  s.mismatch = core.mismatch;
  s.j_z_mean = packet.m_gamma + m_e + core.mismatch;
  s.variance = core.variance;
  s.std_dev = std::sqrt(core.variance);
  s.bessel_regime_ok = core.regime_ok;
  return s;
}

TamStats tam_mean(const AtomSpec& atom, const PhotonPacket& packet, const TrapSpec& trap, int m_e,
                  double t_gamma, double rel_tol) {
  const TamCore core = tam_core(atom, packet, trap, m_e, t_gamma, rel_tol);
  TamStats s;
  s.mismatch = core.mismatch;
  s.j_z_mean = packet.m_gamma + m_e + core.mismatch;
  s.bessel_regime_ok = core.regime_ok;
  return s;
}

TamStats tam_variance(const AtomSpec& atom, const PhotonPacket& packet, const TrapSpec& trap,
                      int m_e, double t_gamma, double rel_tol) {
  const TamCore core = tam_core(atom, packet, trap, m_e, t_gamma, rel_tol);
  TamStats s;
  s.variance = core.variance;
  s.std_dev = std::sqrt(core.variance);
  s.bessel_regime_ok = core.regime_ok;
  return s;
}

double tam_variance_asymptotic(const AtomSpec& atom, const PhotonPacket& packet,
                               const TrapSpec& trap, int m_e, double t_gamma, int m_gamma,
                               double rel_tol) {
  if (m_gamma < 3)
    throw std::domain_error("tam_variance_asymptotic: valid for m_gamma >= 3 only");
  const photon::Normalization norm = photon::normalize(packet);
  PhotonPacket p = packet;
  p.m_gamma = m_gamma;
  const ChannelWeights iw = dynamics::channel_weights(atom, p, norm, m_e, t_gamma, rel_tol);
  const double x = p.kappa_c * trap.sigma_b / 2.0;
  const double isum = iw.at(-1) + iw.at(0) + iw.at(1);
  return std::pow(x, m_gamma)
         * std::sqrt(double(m_gamma) * m_gamma / fact(m_gamma) * isum);
}

double PairProbabilityMatrix::at(int l1, int l2) const {
  if (l1 < window.l_min || l1 > window.l_max || l2 < window.l_min || l2 > window.l_max)
    throw std::out_of_range("PairProbabilityMatrix::at: l outside window");
  const int w = window.size();
  return values[static_cast<std::size_t>(l1 - window.l_min) * w + (l2 - window.l_min)];
}

double PairProbabilityMatrix::row_sum(int l1) const {
  double s = 0.0;
  for (int l2 = window.l_min; l2 <= window.l_max; ++l2) s += at(l1, l2);
  return s;
}

double PairProbabilityMatrix::off_conservation_mass(int line_sum) const {
  double off = 0.0, tot = 0.0;
  for (int l1 = window.l_min; l1 <= window.l_max; ++l1)
    for (int l2 = window.l_min; l2 <= window.l_max; ++l2) {
      const double v = at(l1, l2);
      tot += v;
      if (l1 + l2 != line_sum) off += v;
    }
  return tot > 0.0 ? off / tot : 0.0;
}

namespace {

// ---- coincidence-matrix assembly -------------------------------------
//
// All azimuthal structure is projected analytically: the packet overlap is
// expanded in J_p(k_perp b) partial waves, the couplings carry e^{i n phi}.
// What remains are tensor (omega, theta) quadratures per photon; theta and
// helicity are contracted first, leaving omega-indexed vectors, and the
// scattering kernel couples the two omega grids through a precomputed
// T3 table.

struct ModeGrid {
  std::vector<double> omega, womega; // omega nodes; weights incl. omega^2/(2pi)^2
  std::vector<double> theta, wtheta; // theta nodes; weights incl. sin(theta)
  int no() const { return static_cast<int>(omega.size()); }
  int nt() const { return static_cast<int>(theta.size()); }
};

ModeGrid build_grid(const AtomSpec& atom, const PhotonPacket& p, const GridSpec& g) {
  const double wa = atom.omega_a;
  const double wc = p.omega_c();
  const double sg = p.sigma;
  const double line = g.line_halfwidth_gammas * atom.gamma;
  std::set<double> bp;
  auto add = [&](double x) {
    if (x > 0.0) bp.insert(x);
  };
  for (double f : {-g.packet_halfwidth_sigmas, -2.0, -0.5, -0.05, 0.05, 0.5, 2.0,
                   g.packet_halfwidth_sigmas})
    add(wc + f * sg);
  for (double f : {-1.0, -0.25, 0.25, 1.0}) add(wa + f * line);
  add(wa);
  ModeGrid grid;
  {
    auto pg = quadrature::panel_grid(std::vector<double>(bp.begin(), bp.end()),
                                     g.omega_nodes_per_panel);
    grid.omega = pg.x;
    grid.womega.resize(pg.w.size());
    for (std::size_t i = 0; i < pg.w.size(); ++i)
      grid.womega[i] = pg.w[i] * grid.omega[i] * grid.omega[i] / (4.0 * kPi * kPi);
  }
  const double thc = p.theta_c();
  const double dth = sg / p.k_c;
  std::set<double> tb{0.0, kPi};
  for (double f : {-8.0, -3.0, 0.0, 3.0, 8.0}) {
    double v = thc + f * dth;
    if (v > 0.0 && v < kPi) tb.insert(v);
  }
  for (double v : {0.35, 0.8, 1.4, 2.0, 2.6})
    if (v > thc + 8.0 * dth) tb.insert(v);
  {
    auto pg = quadrature::panel_grid(std::vector<double>(tb.begin(), tb.end()),
                                     g.theta_nodes_per_panel);
    grid.theta = pg.x;
    grid.wtheta.resize(pg.w.size());
    for (std::size_t i = 0; i < pg.w.size(); ++i)
      grid.wtheta[i] = pg.w[i] * std::sin(grid.theta[i]);
  }
  return grid;
}

// contraction kinds of a term's two mode factors
enum class Kind { EmLine, Packet, Channel }; // G_me*f(Delta) | B*c_q | bare G_n

struct Term {
  Kind side1, side2;
  int q1 = 0, q2 = 0; // Bessel order for Packet sides
  int n1 = 0, n2 = 0; // sublevel for Channel sides (EmLine implies m_e)
  complexd coeff{1.0, 0.0};
  int t3 = 0; // 0 none, 1 direct T3[i1][i2], 2 transposed T3[i2][i1]
};

struct Workspace {
  const AtomSpec* atom;
  const PhotonPacket* packet;
  int m_e;
  ModeGrid grid;
  // b-independent tables
  std::vector<complexd> fk;             // f(Delta_i, T) on the omega grid
  std::vector<complexd> t3;             // T3[i1*no + i2]
  std::vector<complexd> rgg;            // [ (n+1)*3 + (n'+1) ][ i ]
  double n_packet = 0.0;
  // b-dependent tables (rebuilt per b node)
  int pmax = 0;
  std::vector<complexd> rbb;            // [(q+pmax)*(2pmax+1) + (q'+pmax)][i]
  std::vector<complexd> rgb;            // [(n+1)*(2pmax+1) + (q+pmax)][i]
  std::vector<complexd> kn;             // scattering prefactor K_n, n+1 indexed

  int no() const { return grid.no(); }
  const complexd* rgg_at(int n, int np) const {
    return rgg.data() + (static_cast<std::size_t>(n + 1) * 3 + (np + 1)) * no();
  }
  const complexd* rbb_at(int q, int qp) const {
    return rbb.data()
           + (static_cast<std::size_t>(q + pmax) * (2 * pmax + 1) + (qp + pmax)) * no();
  }
  const complexd* rgb_at(int n, int q) const {
    return rgb.data() + (static_cast<std::size_t>(n + 1) * (2 * pmax + 1) + (q + pmax)) * no();
  }
};

// G_n(omega, theta; s) for all n, s on the grid, plus the packet profile
struct RawFactors {
  std::vector<complexd> g; // [(n+1)*2 + sidx][i*nt + j], sidx: 0 -> s=+1, 1 -> s=-1
  std::vector<double> prof; // [i*nt + j]
};

RawFactors build_raw(const AtomSpec& atom, const PhotonPacket& p, const ModeGrid& grid) {
  RawFactors raw;
  const int no = grid.no(), nt = grid.nt();
  raw.g.assign(static_cast<std::size_t>(6) * no * nt, complexd(0.0, 0.0));
  raw.prof.assign(static_cast<std::size_t>(no) * nt, 0.0);
  for (int i = 0; i < no; ++i) {
    const double w = grid.omega[i];
    const double k_au = units::ev_to_momentum_au(w);
    complexd m[3][2];
    for (int np = -1; np <= 1; ++np)
      for (int si = 0; si < 2; ++si)
        m[np + 1][si] = atom::multipole_element(atom, np, si == 0 ? 1 : -1, k_au);
    // calibrated prefactor; see atom::coupling_amplitude
    const double pref = std::sqrt(2.0 * kPi / w);
    for (int j = 0; j < nt; ++j) {
      const double th = grid.theta[j];
      for (int n = -1; n <= 1; ++n)
        for (int si = 0; si < 2; ++si) {
          complexd mixed(0.0, 0.0);
          for (int np = -1; np <= 1; ++np)
            if (m[np + 1][si] != complexd(0.0, 0.0))
              mixed += specfun::wigner_d1(n, np, th) * m[np + 1][si];
          raw.g[(static_cast<std::size_t>(n + 1) * 2 + si) * no * nt + static_cast<std::size_t>(i) * nt + j] =
              pref * mixed;
        }
      raw.prof[static_cast<std::size_t>(i) * nt + j] =
          photon::packet_profile(p, w * std::sin(th), w * std::cos(th));
    }
  }
  // fold in the closure calibration via one reference evaluation
  const complexd ref_direct = atom::coupling_amplitude(atom, 1, 1, grid.omega[0], grid.theta[0]);
  const complexd ref_raw = raw.g[(2 * 2 + 0) * static_cast<std::size_t>(no) * nt];
  const complexd scale = ref_raw == complexd(0.0, 0.0) ? complexd(0.0, 0.0)
                                                       : ref_direct / ref_raw;
  for (auto& v : raw.g) v *= scale;
  return raw;
}

// reduce over theta and helicity: out[i] = sum_{s,j} wtheta[j] A[i,j,s] conj(B[i,j,s])
void reduce(const ModeGrid& grid, const complexd* a_pos, const complexd* a_neg,
            const complexd* b_pos, const complexd* b_neg, complexd* out) {
  const int no = grid.no(), nt = grid.nt();
  for (int i = 0; i < no; ++i) {
    complexd acc(0.0, 0.0);
    const std::size_t base = static_cast<std::size_t>(i) * nt;
    for (int j = 0; j < nt; ++j) {
      const double w = grid.wtheta[j];
      if (a_pos && b_pos) acc += w * a_pos[base + j] * std::conj(b_pos[base + j]);
      if (a_neg && b_neg) acc += w * a_neg[base + j] * std::conj(b_neg[base + j]);
    }
    out[i] = acc;
  }
}

// per-side omega vector of the pair (a,b): r[i] = sum_{s,j} wtheta S_a conj(S_b)
// assembled from precontracted families plus f-kernel multipliers
void side_vector(const Workspace& ws, Kind ka, int qa, int na, Kind kb, int qb, int nb,
                 std::vector<complexd>& r) {
  const int no = ws.no();
  r.resize(no);
  auto fk = [&](int i) { return ws.fk[i]; };
  if (ka == Kind::EmLine && kb == Kind::EmLine) {
    const complexd* base = ws.rgg_at(ws.m_e, ws.m_e);
    for (int i = 0; i < no; ++i) r[i] = fk(i) * std::conj(fk(i)) * base[i];
  } else if (ka == Kind::EmLine && kb == Kind::Packet) {
    const complexd* base = ws.rgb_at(ws.m_e, qb);
    for (int i = 0; i < no; ++i) r[i] = fk(i) * base[i];
  } else if (ka == Kind::Packet && kb == Kind::EmLine) {
    const complexd* base = ws.rgb_at(ws.m_e, qa);
    for (int i = 0; i < no; ++i) r[i] = std::conj(fk(i) * base[i]);
  } else if (ka == Kind::EmLine && kb == Kind::Channel) {
    const complexd* base = ws.rgg_at(ws.m_e, nb);
    for (int i = 0; i < no; ++i) r[i] = fk(i) * base[i];
  } else if (ka == Kind::Channel && kb == Kind::EmLine) {
    const complexd* base = ws.rgg_at(na, ws.m_e);
    for (int i = 0; i < no; ++i) r[i] = std::conj(fk(i)) * base[i];
  } else if (ka == Kind::Packet && kb == Kind::Packet) {
    const complexd* base = ws.rbb_at(qa, qb);
    for (int i = 0; i < no; ++i) r[i] = base[i];
  } else if (ka == Kind::Channel && kb == Kind::Channel) {
    const complexd* base = ws.rgg_at(na, nb);
    for (int i = 0; i < no; ++i) r[i] = base[i];
  } else if (ka == Kind::Channel && kb == Kind::Packet) {
    const complexd* base = ws.rgb_at(na, qb);
    for (int i = 0; i < no; ++i) r[i] = base[i];
  } else { // Packet x Channel
    const complexd* base = ws.rgb_at(nb, qa);
    for (int i = 0; i < no; ++i) r[i] = std::conj(base[i]);
  }
}

double pair_contribution(const Workspace& ws, const Term& a, const Term& b) {
  const int no = ws.no();
  static thread_local std::vector<complexd> r1, r2;
  side_vector(ws, a.side1, a.q1, a.n1, b.side1, b.q1, b.n1, r1);
  side_vector(ws, a.side2, a.q2, a.n2, b.side2, b.q2, b.n2, r2);
  const complexd cc = a.coeff * std::conj(b.coeff);
  const auto& w = ws.grid.womega;
  if (a.t3 == 0 && b.t3 == 0) {
    complexd s1(0.0, 0.0), s2(0.0, 0.0);
    for (int i = 0; i < no; ++i) {
      s1 += w[i] * r1[i];
      s2 += w[i] * r2[i];
    }
    return (cc * s1 * s2).real();
  }
  if (a.t3 != 0 && b.t3 != 0) {
    complexd acc(0.0, 0.0);
    for (int i1 = 0; i1 < no; ++i1) {
      complexd row(0.0, 0.0);
      for (int i2 = 0; i2 < no; ++i2) {
        const complexd ta = a.t3 == 1 ? ws.t3[static_cast<std::size_t>(i1) * no + i2]
                                      : ws.t3[static_cast<std::size_t>(i2) * no + i1];
        const complexd tb = b.t3 == 1 ? ws.t3[static_cast<std::size_t>(i1) * no + i2]
                                      : ws.t3[static_cast<std::size_t>(i2) * no + i1];
        row += w[i2] * r2[i2] * ta * std::conj(tb);
      }
      acc += w[i1] * r1[i1] * row;
    }
    return (cc * acc).real();
  }
  // exactly one side carries the kernel
  const bool on_a = a.t3 != 0;
  const int mode = on_a ? a.t3 : b.t3;
  complexd acc(0.0, 0.0);
  for (int i1 = 0; i1 < no; ++i1) {
    complexd row(0.0, 0.0);
    for (int i2 = 0; i2 < no; ++i2) {
      complexd t = mode == 1 ? ws.t3[static_cast<std::size_t>(i1) * no + i2]
                             : ws.t3[static_cast<std::size_t>(i2) * no + i1];
      if (!on_a) t = std::conj(t);
      row += w[i2] * r2[i2] * t;
    }
    acc += w[i1] * r1[i1] * row;
  }
  return (cc * acc).real();
}

std::vector<Term> cell_terms(const Workspace& ws, int l1, int l2, int m) {
  std::vector<Term> terms;
  if (l1 == ws.m_e) {
    Term t;
    t.side1 = Kind::EmLine;
    t.side2 = Kind::Packet;
    t.q2 = l2 - m;
    if (std::abs(t.q2) <= ws.pmax) terms.push_back(t);
  }
  if (l2 == ws.m_e) {
    Term t;
    t.side1 = Kind::Packet;
    t.side2 = Kind::EmLine;
    t.q1 = l1 - m;
    if (std::abs(t.q1) <= ws.pmax) terms.push_back(t);
  }
  if (l2 == ws.m_e && l1 >= -1 && l1 <= 1) {
    Term t;
    t.side1 = Kind::Channel;
    t.n1 = l1;
    t.side2 = Kind::Channel;
    t.n2 = ws.m_e;
    t.coeff = -ws.kn[static_cast<std::size_t>(l1 + 1)];
    t.t3 = 1;
    terms.push_back(t);
  }
  if (l1 == ws.m_e && l2 >= -1 && l2 <= 1) {
    Term t;
    t.side1 = Kind::Channel;
    t.n1 = ws.m_e;
    t.side2 = Kind::Channel;
    t.n2 = l2;
    t.coeff = -ws.kn[static_cast<std::size_t>(l2 + 1)];
    t.t3 = 2;
    terms.push_back(t);
  }
  return terms;
}

double cell_value(const Workspace& ws, int l1, int l2, int m) {
  const auto terms = cell_terms(ws, l1, l2, m);
  double v = 0.0;
  for (const auto& a : terms)
    for (const auto& b : terms) v += pair_contribution(ws, a, b);
  return v;
}

struct BNodeResult {
  std::vector<double> cells; // window cells, row-major
  double total = 0.0;        // all-space norm at this b
};

BNodeResult assemble_at_b(Workspace& ws, const RawFactors& raw, double b, const OamWindow& win) {
  const int no = ws.no(), nt = ws.grid.nt();
  const PhotonPacket& p = *ws.packet;
  const int m = p.m_gamma;
  const int pmax = ws.pmax;
  const int nq = 2 * pmax + 1;

  // packet-side factors B c_q = (N/2pi) prof * i^q J_q(k_perp b)
  std::vector<complexd> bc(static_cast<std::size_t>(nq) * no * nt);
  const double bamp = ws.n_packet / (2.0 * kPi);
  for (int q = -pmax; q <= pmax; ++q) {
    const complexd iq = std::pow(kI, q);
    for (int i = 0; i < no; ++i)
      for (int j = 0; j < nt; ++j) {
        const double kp = ws.grid.omega[i] * std::sin(ws.grid.theta[j]);
        const std::size_t idx = static_cast<std::size_t>(i) * nt + j;
        bc[(static_cast<std::size_t>(q + pmax) * no + i) * nt + j] =
            bamp * raw.prof[idx] * iq * specfun::bessel_j(q, kp * b);
      }
  }

  // b-dependent reductions
  ws.rbb.assign(static_cast<std::size_t>(nq) * nq * no, complexd(0.0, 0.0));
  ws.rgb.assign(static_cast<std::size_t>(3) * nq * no, complexd(0.0, 0.0));
  const int sidx_lambda = p.lambda == 1 ? 0 : 1;
  for (int q = -pmax; q <= pmax; ++q) {
    const complexd* bq = bc.data() + static_cast<std::size_t>(q + pmax) * no * nt;
    for (int qp = -pmax; qp <= pmax; ++qp) {
      const complexd* bqp = bc.data() + static_cast<std::size_t>(qp + pmax) * no * nt;
      reduce(ws.grid, bq, nullptr, bqp, nullptr,
             ws.rbb.data() + (static_cast<std::size_t>(q + pmax) * nq + (qp + pmax)) * no);
    }
    for (int n = -1; n <= 1; ++n) {
      const complexd* gn =
          raw.g.data() + (static_cast<std::size_t>(n + 1) * 2 + sidx_lambda) * no * nt;
      reduce(ws.grid, gn, nullptr, bq, nullptr,
             ws.rgb.data() + (static_cast<std::size_t>(n + 1) * nq + (q + pmax)) * no);
    }
  }

  // scattering prefactors K_n at this b
  ws.kn.resize(3);
  for (int n = -1; n <= 1; ++n) {
    const complexd gc =
        atom::coupling_amplitude(*ws.atom, n, p.lambda, p.omega_c(), p.theta_c());
    const int dm = m - n;
    ws.kn[static_cast<std::size_t>(n + 1)] = ws.n_packet * std::pow(kI, dm) * p.sigma * p.sigma
                                             * p.kappa_c * gc
                                             * specfun::bessel_j(dm, p.kappa_c * b);
  }

  BNodeResult out;
  const int w = win.size();
  out.cells.assign(static_cast<std::size_t>(w) * w, 0.0);
  for (int l1 = win.l_min; l1 <= win.l_max; ++l1)
    for (int l2 = l1; l2 <= win.l_max; ++l2) {
      const double v = cell_value(ws, l1, l2, m);
      out.cells[static_cast<std::size_t>(l1 - win.l_min) * w + (l2 - win.l_min)] = v;
      out.cells[static_cast<std::size_t>(l2 - win.l_min) * w + (l1 - win.l_min)] = v;
    }

  // all-space total: windowed mass plus the f-diagonal tails outside it
  double windowed = 0.0;
  for (double v : out.cells) windowed += v;
  double em_line = 0.0, tail1 = 0.0, tail2 = 0.0;
  {
    const complexd* rgg = ws.rgg_at(ws.m_e, ws.m_e);
    for (int i = 0; i < no; ++i)
      em_line += (ws.grid.womega[i] * std::norm(ws.fk[i]) * rgg[i]).real();
    for (int q = -pmax; q <= pmax; ++q) {
      const int l_f1 = m + q; // spectator OAM when the emitted photon is photon 1
      const bool in1 = ws.m_e >= win.l_min && ws.m_e <= win.l_max && l_f1 >= win.l_min
                       && l_f1 <= win.l_max;
      if (!in1) {
        const complexd* rbb = ws.rbb_at(q, q);
        double mass = 0.0;
        for (int i = 0; i < no; ++i) mass += (ws.grid.womega[i] * rbb[i]).real();
        tail1 += mass;
      }
    }
    tail2 = tail1; // mirror ordering has the same tail mass
  }
  out.total = windowed + em_line * (tail1 + tail2);
  return out;
}

} // namespace

PairProbabilityMatrix pair_probability(const AtomSpec& atom, const PhotonPacket& packet,
                                       const TrapSpec& trap, int m_e, const OamWindow& window,
                                       const GridSpec& grid) {
  atom.validate();
  packet.validate();
  trap.validate(packet.sigma);
  if (m_e < -1 || m_e > 1)
    throw std::invalid_argument("pair_probability: m_e must lie in {-1,0,1}");
  if (window.l_min > std::min(m_e, packet.m_gamma) - 2
      || window.l_max < std::max(m_e, packet.m_gamma) + 2)
    throw std::invalid_argument("pair_probability: window must cover {m_e, m_gamma} +- 2");

  PhotonPacket p = packet;
  p.b = 0.0;
  p.phi_b = 0.0;

  Workspace ws;
  ws.atom = &atom;
  ws.packet = &p;
  ws.m_e = m_e;
  ws.grid = build_grid(atom, p, grid);
  ws.pmax = std::max({grid.azimuthal_cutoff, std::abs(window.l_min - p.m_gamma),
                      std::abs(window.l_max - p.m_gamma)});
  ws.n_packet = photon::normalize(p).n_packet;

  const RawFactors raw = build_raw(atom, p, ws.grid);
  const int no = ws.grid.no(), nt = ws.grid.nt();

  // b-independent reductions over the couplings (both helicities)
  ws.rgg.assign(static_cast<std::size_t>(9) * no, complexd(0.0, 0.0));
  for (int n = -1; n <= 1; ++n)
    for (int np = -1; np <= 1; ++np) {
      const complexd* gp = raw.g.data() + (static_cast<std::size_t>(n + 1) * 2 + 0) * no * nt;
      const complexd* gm = raw.g.data() + (static_cast<std::size_t>(n + 1) * 2 + 1) * no * nt;
      const complexd* hp = raw.g.data() + (static_cast<std::size_t>(np + 1) * 2 + 0) * no * nt;
      const complexd* hm = raw.g.data() + (static_cast<std::size_t>(np + 1) * 2 + 1) * no * nt;
      reduce(ws.grid, gp, gm, hp, hm,
             ws.rgg.data() + (static_cast<std::size_t>(n + 1) * 3 + (np + 1)) * no);
    }

  auto run_at_t = [&](double t_gamma, std::vector<double>& cells_out, double& norm_out) {
    const double t = t_gamma / atom.gamma;
    ws.fk.resize(no);
    for (int i = 0; i < no; ++i)
      ws.fk[i] = dynamics::emission_kernel_f(atom.gamma, ws.grid.omega[i] - atom.omega_a, t);
    ws.t3.resize(static_cast<std::size_t>(no) * no);
    const double dc = dynamics::central_detuning(atom, p);
    for (int i1 = 0; i1 < no; ++i1)
      for (int i2 = 0; i2 < no; ++i2)
        ws.t3[static_cast<std::size_t>(i1) * no + i2] =
            dynamics::triple_time_integral(atom.gamma, p.sigma, ws.grid.omega[i1] - atom.omega_a,
                                           ws.grid.omega[i2] - atom.omega_a, dc, t);

    const auto lag = quadrature::gauss_laguerre(grid.b_nodes);
    const int w = window.size();
    cells_out.assign(static_cast<std::size_t>(w) * w, 0.0);
    norm_out = 0.0;
    for (int k = 0; k < grid.b_nodes; ++k) {
      const double b = trap.sigma_b * std::sqrt(lag.x[k]);
      const BNodeResult r = assemble_at_b(ws, raw, b, window);
      for (std::size_t c = 0; c < cells_out.size(); ++c) cells_out[c] += lag.w[k] * r.cells[c];
      norm_out += lag.w[k] * r.total;
    }
  };

  PairProbabilityMatrix out;
  out.window = window;
  out.grid_spec = grid;

  std::vector<double> cells;
  double norm = 0.0;
  run_at_t(grid.t_gamma, cells, norm);
  if (!(norm > 0.0)) throw NumericalError("pair_probability: vanishing normalization");
  out.values.resize(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) out.values[c] = cells[c] / norm;
  out.captured_mass = 0.0;
  for (double v : out.values) out.captured_mass += v;

  if (grid.richardson_check) {
    std::vector<double> cells2;
    double norm2 = 0.0;
    run_at_t(grid.t_gamma / 2.0, cells2, norm2);
    double rel = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double a = cells[c] / norm, bb = cells2[c] / norm2;
      if (a > 1e-9) rel = std::max(rel, std::abs(a - bb) / a);
    }
    out.richardson_rel_change = rel;
    if (rel > 1e-3) {
      std::ostringstream os;
      os << "late-time limit not settled: relative change " << rel << " between t="
         << grid.t_gamma / 2.0 << " and t=" << grid.t_gamma << " Gamma^-1";
      out.warnings.push_back(os.str());
    }
  }

  if (packet.sigma * trap.sigma_b >= 0.1)
    out.warnings.push_back("trap width approaches the coherence-length bound");
  if (out.captured_mass < 0.98) {
    std::ostringstream os;
    os << "pair_probability: resolution failure, captured_mass = " << out.captured_mass
       << " < 0.98 over the stated window";
    throw NumericalError(os.str());
  }
  return out;
}

double entanglement_witness(const PairProbabilityMatrix& matrix) {
  if (matrix.captured_mass < 0.98)
    throw std::domain_error("entanglement_witness: captured_mass must be >= 0.98");
  const int n = matrix.window.size();
  std::vector<double> a(matrix.values);
  double frob2 = 0.0;
  for (double v : a) frob2 += v * v;
  if (frob2 == 0.0) throw std::domain_error("entanglement_witness: all-zero matrix");
  // cyclic Jacobi on the symmetric matrix; singular values are |eigenvalues|
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (off < 1e-30 * frob2) break;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double apq = a[i * n + j];
        if (apq == 0.0) continue;
        const double app = a[i * n + i], aqq = a[j * n + j];
        const double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
        const double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < n; ++k) {
          const double aik = a[i * n + k], ajk = a[j * n + k];
          a[i * n + k] = c * aik - s * ajk;
          a[j * n + k] = s * aik + c * ajk;
        }
        for (int k = 0; k < n; ++k) {
          const double aki = a[k * n + i], akj = a[k * n + j];
          a[k * n + i] = c * aki - s * akj;
          a[k * n + j] = s * aki + c * akj;
        }
      }
  }
  double smax2 = 0.0;
  for (int i = 0; i < n; ++i) smax2 = std::max(smax2, a[i * n + i] * a[i * n + i]);
  return 1.0 - smax2 / frob2;
}

} // namespace vortexpair::observables
