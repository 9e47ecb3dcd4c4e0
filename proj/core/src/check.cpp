// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include "vortexpair/check.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "vortexpair/emit.hpp"
#include "vortexpair/observables.hpp"
#include "vortexpair/quadrature.hpp"
#include "vortexpair/specfun.hpp"
#include "vortexpair/sweep.hpp"
#include "vortexpair/units.hpp"

namespace vortexpair::harness {

namespace {

using complexd = std::complex<double>;
using quadrature::integrate_complex;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---- brute-force oracles (independent of the closed-form kernels) ------

// printed plane-wave double integral, nested adaptive quadrature
complexd oracle_pw_double(double gamma, double d_nu, double d_nu0, double t) {
  auto outer = [&](double t2) {
    auto inner = [&](double t1) {
      return std::exp(complexd(gamma / 2.0 * (t2 - t1), d_nu0 * t2 - d_nu * t1));
    };
    return integrate_complex(inner, 0.0, t2, 1e-11, 1e-300).value;
  };
  return integrate_complex(outer, 0.0, t, 1e-10, 1e-300).value;
}

// printed triple integrand, three nested adaptive layers
complexd oracle_triple(double gamma, double sigma, double d1, double d2, double dc, double t) {
  auto l3 = [&](double t3) {
    auto l2 = [&](double t2) {
      auto l1 = [&](double t1) {
        const double re = -gamma / 2.0 * (t3 + t1 - t2) - sigma * sigma * t2 * t2 / 2.0;
        const double im = -d1 * t3 + dc * t2 - d2 * t1;
        return std::exp(complexd(re, im));
      };
      return integrate_complex(l1, 0.0, t2, 1e-11, 1e-300).value;
    };
    return integrate_complex(l2, 0.0, t3, 1e-10, 1e-300).value;
  };
  return integrate_complex(l3, 0.0, t, 1e-9, 1e-300).value;
}

// Monte Carlo of the printed six-fold weight integrand with the two delta
// functions sampled as coincident pairs (t3'=t3, t1'=t1); gamma = 1 units.
struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
};
McEstimate oracle_channel_mc(double sigma, double dc, double t, std::uint64_t seed,
                             std::size_t samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  const double vol0 = t * t * t / 6.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double a = t * uni(rng), b = t * uni(rng), c = t * uni(rng);
    double t1 = std::min({a, b, c});
    double t3 = std::max({a, b, c});
    double t2 = a + b + c - t1 - t3;
    double t2p = t1 + (t3 - t1) * uni(rng);
    const double f = std::exp(-0.5 * (t3 + t1 - t2) - sigma * sigma * t2 * t2 / 2.0)
                     * std::exp(-0.5 * (t3 + t1 - t2p) - sigma * sigma * t2p * t2p / 2.0)
                     * std::cos(dc * (t2 - t2p));
    const double w = f * vol0 * (t3 - t1);
    sum += w;
    sum2 += w * w;
  }
  const double n = static_cast<double>(samples);
  McEstimate e;
  e.mean = sum / n;
  const double var = std::max(0.0, sum2 / n - e.mean * e.mean);
  e.std_err = std::sqrt(var / n);
  return e;
}

// delta J_z over an m_gamma range at fixed preset/time
std::map<int, double> djz_scan(const RunConfig& base, int lambda, int mg_min, int mg_max) {
  std::map<int, double> out;
  photon::PhotonPacket p = base.make_packet();
  p.lambda = lambda;
  const photon::TrapSpec trap = base.make_trap();
  for (int mg = mg_min; mg <= mg_max; ++mg) {
    p.m_gamma = mg;
    out[mg] = observables::tam_stats(base.atom, p, trap, base.m_e, base.t_gamma, base.tol).std_dev;
  }
  return out;
}

std::vector<int> interior_maxima(const std::map<int, double>& curve) {
  std::vector<int> out;
  for (auto it = curve.begin(); it != curve.end(); ++it) {
    auto prev = it, next = it;
    if (it == curve.begin()) continue;
    --prev;
    ++next;
    if (next == curve.end()) continue;
    if (it->second > prev->second && it->second > next->second) out.push_back(it->first);
  }
  return out;
}

using CheckFn = std::function<void(CheckResult&)>;

void run_one(std::vector<CheckResult>& results, std::ostream& progress, const std::string& name,
             const CheckFn& fn) {
  CheckResult r;
  r.name = name;
  progress << "[check] " << name << " ..." << std::flush;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fn(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.measured = std::string("exception: ") + e.what();
  }
  r.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  progress << (r.pass ? " ok" : " FAIL") << " (" << fmt(r.wall_ms) << " ms)\n";
  results.push_back(r);
}

} // namespace

std::vector<CheckResult> run_all_checks(std::ostream& progress) {
  std::vector<CheckResult> results;
  const RunConfig na = default_config("Na-3p3s");
  const RunConfig hy = default_config("H-2p1s");

  // 1. unit anchor
  run_one(results, progress, "1 unit-anchor kappa_c*sigma_b/2", [&](CheckResult& r) {
    const double x = 0.21 * units::nm_to_inv_ev(100.0) / 2.0;
    r.measured = fmt(x);
    r.expected = "0.053 +- 0.001";
    r.pass = std::abs(x - 0.053) <= 1e-3;
  });

  // 2. coherence length
  run_one(results, progress, "2 coherence-length sigma_0^-1", [&](CheckResult& r) {
    const double um = units::inv_ev_to_um(1.0 / 2.1e-2);
    r.measured = fmt(um) + " um";
    r.expected = "9.38 +- 0.02 um";
    r.pass = std::abs(um - 9.38) <= 0.02;
  });

  // 3. magnitude band
  run_one(results, progress, "3 delta-Jz magnitude band", [&](CheckResult& r) {
    RunConfig cfg = na;
    cfg.m_gamma = 3;
    const auto s = observables::tam_stats(cfg.atom, cfg.make_packet(), cfg.make_trap(), cfg.m_e,
                                          10.0, cfg.tol);
    r.measured = fmt(s.std_dev);
    r.expected = "[1e-8, 1e-7]";
    r.pass = s.std_dev >= 1e-8 && s.std_dev <= 1e-7;
  });

  // 4. two-maxima structure
  run_one(results, progress, "4 variance maxima positions", [&](CheckResult& r) {
    const auto plus = interior_maxima(djz_scan(na, +1, -4, 4));
    const auto minus = interior_maxima(djz_scan(na, -1, -4, 4));
    std::ostringstream os;
    os << "lambda=+1:{";
    for (int m : plus) os << m << " ";
    os << "} lambda=-1:{";
    for (int m : minus) os << m << " ";
    os << "}";
    r.measured = os.str();
    r.expected = "lambda=+1:{0 2} lambda=-1:{-2 0}";
    r.pass = plus == std::vector<int>{0, 2} && minus == std::vector<int>{-2, 0};
  });

  // 5. sigma orderings
  run_one(results, progress, "5 sigma orderings at t=10", [&](CheckResult& r) {
    photon::PhotonPacket p = na.make_packet();
    const photon::TrapSpec trap = na.make_trap();
    std::vector<double> dj, st;
    for (double sc : {1.0, 1.5, 2.0}) {
      p.sigma = na.sigma_ev * sc;
      const auto s = observables::tam_stats(na.atom, p, trap, na.m_e, 10.0, na.tol);
      dj.push_back(s.mismatch);
      st.push_back(s.std_dev);
    }
    r.measured = "dJz: " + fmt(dj[0]) + " " + fmt(dj[1]) + " " + fmt(dj[2]) + "; std: "
                 + fmt(st[0]) + " " + fmt(st[1]) + " " + fmt(st[2]);
    r.expected = "delta-Jz std strictly decreasing, mismatch strictly increasing";
    r.pass = st[0] > st[1] && st[1] > st[2] && dj[0] < dj[1] && dj[1] < dj[2];
  });

  // 6. log-linear tail
  run_one(results, progress, "6 log-linear tail slope", [&](CheckResult& r) {
    const auto curve = djz_scan(na, +1, 4, 6);
    const double l4 = std::log(curve.at(4)), l5 = std::log(curve.at(5)),
                 l6 = std::log(curve.at(6));
    // least squares over {4,5,6} equals the symmetric difference
    const double slope = (l6 - l4) / 2.0;
    (void)l5;
    const double target = std::log(0.21 * units::nm_to_inv_ev(100.0) / 2.0);
    const double rel = std::abs(slope - target) / std::abs(target);
    r.measured = "slope " + fmt(slope) + " vs ln(x) " + fmt(target) + " (rel dev " + fmt(rel)
                 + ")";
    r.expected = "|slope - ln(kappa_c sigma_b/2)| <= 15%";
    r.pass = rel <= 0.15;
  });

  // 7. oracle equivalence
  run_one(results, progress, "7 closed-form vs brute-force oracles", [&](CheckResult& r) {
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst_pw = 0.0, worst_t3 = 0.0, worst_mc = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double dn = -4.0 + 8.0 * uni(rng), dn0 = -4.0 + 8.0 * uni(rng);
      const double t = 0.5 + 4.5 * uni(rng);
      const complexd closed = dynamics::pw_double_integral(1.0, dn, dn0, t);
      const complexd brute = oracle_pw_double(1.0, dn, dn0, t);
      worst_pw = std::max(worst_pw, std::abs(closed - brute) / std::abs(brute));
    }
    for (int k = 0; k < 20; ++k) {
      const double sg = 0.4 + 2.1 * uni(rng);
      const double d1 = -3.0 + 6.0 * uni(rng), d2 = -3.0 + 6.0 * uni(rng);
      const double dc = -1.0 + 2.0 * uni(rng);
      const double t = 0.5 + 3.5 * uni(rng);
      const complexd closed = dynamics::triple_time_integral(1.0, sg, d1, d2, dc, t);
      const complexd brute = oracle_triple(1.0, sg, d1, d2, dc, t);
      worst_t3 = std::max(worst_t3, std::abs(closed - brute) / std::abs(brute));
    }
    int mc_fail = 0;
    for (int k = 0; k < 20; ++k) {
      const double sg = 0.4 + 2.6 * uni(rng);
      const double dc = -2.0 + 4.0 * uni(rng);
      const double t = 1.0 + 5.0 * uni(rng);
      const auto red = dynamics::channel_weight_reduced(1.0, sg, dc, t, 1e-9);
      const auto mc = oracle_channel_mc(sg, dc, t, 777000 + static_cast<std::uint64_t>(k), 300000);
      const double dev = std::abs(red.value - mc.mean) / std::max(mc.std_err, 1e-300);
      worst_mc = std::max(worst_mc, dev);
      if (dev > 3.0) ++mc_fail;
    }
    r.measured = "pw rel " + fmt(worst_pw) + ", triple rel " + fmt(worst_t3) + ", mc max "
                 + fmt(worst_mc) + " sigma";
    r.expected = "rel <= 1e-7 (deterministic), <= 3 std err (MC)";
    r.pass = worst_pw <= 1e-7 && worst_t3 <= 1e-7 && mc_fail == 0;
  });

  // 8. conservation limit
  run_one(results, progress, "8 sigma_b -> 0 conservation", [&](CheckResult& r) {
    RunConfig cfg = na;
    photon::TrapSpec tight;
    tight.sigma_b = units::nm_to_inv_ev(1.0);
    const auto s1 = observables::tam_stats(cfg.atom, cfg.make_packet(), tight, cfg.m_e, 10.0,
                                           cfg.tol);
    const auto s100 = observables::tam_stats(cfg.atom, cfg.make_packet(), cfg.make_trap(),
                                             cfg.m_e, 10.0, cfg.tol);
    observables::OamWindow win;
    win.l_min = std::min(cfg.m_e, cfg.m_gamma) - 2;
    win.l_max = std::max(cfg.m_e, cfg.m_gamma) + 2;
    const auto P =
        observables::pair_probability(cfg.atom, cfg.make_packet(), tight, cfg.m_e, win, {});
    const double off = P.off_conservation_mass(cfg.m_gamma + cfg.m_e);
    r.measured = "|dJz| " + fmt(std::abs(s1.mismatch)) + ", std ratio "
                 + fmt(s1.std_dev / s100.std_dev) + ", off-line " + fmt(off);
    r.expected = "|dJz| < 1e-12, std < 1e-6 x (100 nm), off-line < 1e-4";
    r.pass = std::abs(s1.mismatch) < 1e-12 && s1.std_dev < 1e-6 * s100.std_dev && off < 1e-4;
  });

  // 9. H-preset non-monotonicity
  run_one(results, progress, "9 P(1,-1) interior maximum", [&](CheckResult& r) {
    RunConfig cfg = hy;
    cfg.m_gamma = -1;
    std::vector<double> grid, vals;
    for (int i = 0; i < 12; ++i)
      grid.push_back(cfg.sigma_b_min_nm
                     + (cfg.sigma_b_max_nm - cfg.sigma_b_min_nm) * i / 11.0);
    photon::PhotonPacket p = cfg.make_packet();
    observables::OamWindow win;
    win.l_min = std::min(cfg.m_e, cfg.m_gamma) - 2;
    win.l_max = std::max(cfg.m_e, cfg.m_gamma) + 2;
    observables::GridSpec gs;
    gs.t_gamma = 20.0;
    gs.richardson_check = false;
    for (double sb : grid) {
      photon::TrapSpec trap;
      trap.sigma_b = units::nm_to_inv_ev(sb);
      const auto P = observables::pair_probability(cfg.atom, p, trap, cfg.m_e, win, gs);
      vals.push_back(P.at(1, -1) + P.at(-1, 1));
    }
    int argmax = 0;
    for (std::size_t i = 1; i < vals.size(); ++i)
      if (vals[i] > vals[static_cast<std::size_t>(argmax)]) argmax = static_cast<int>(i);
    std::ostringstream os;
    os << "P(sigma_b): ";
    for (double v : vals) os << fmt(v) << " ";
    os << "(argmax " << argmax << ")";
    r.measured = os.str();
    r.expected = "interior maximum on the 12-point grid";
    r.pass = argmax > 0 && argmax < 11;
  });

  // 10. special-function suite
  run_one(results, progress, "10 specfun invariants", [&](CheckResult& r) {
    double worst_unit = 0.0;
    for (double th = 0.0; th <= 3.141592653589793; th += 0.05) {
      for (int n = -1; n <= 1; ++n) {
        double s = 0.0;
        for (int np = -1; np <= 1; ++np) {
          const double d = specfun::wigner_d1(n, np, th);
          s += d * d;
        }
        worst_unit = std::max(worst_unit, std::abs(s - 1.0));
      }
    }
    double worst_cg = 0.0;
    for (int j2 = 0; j2 <= 3; ++j2)
      for (int J = std::abs(1 - j2); J <= 1 + j2; ++J)
        for (int Jp = std::abs(1 - j2); Jp <= 1 + j2; ++Jp)
          for (int M = -std::min(J, Jp); M <= std::min(J, Jp); ++M) {
            double s = 0.0;
            for (int m1 = -1; m1 <= 1; ++m1) {
              const int m2 = M - m1;
              if (std::abs(m2) > j2) continue;
              s += specfun::clebsch_gordan(1, m1, j2, m2, J, M)
                   * specfun::clebsch_gordan(1, m1, j2, m2, Jp, M);
            }
            worst_cg = std::max(worst_cg, std::abs(s - (J == Jp ? 1.0 : 0.0)));
          }
    double worst_rec = 0.0;
    for (double x = 0.1; x <= 20.0; x += 0.37)
      for (int m = -8; m <= 8; ++m) {
        const double res = specfun::bessel_j(m - 1, x) + specfun::bessel_j(m + 1, x)
                           - 2.0 * m / x * specfun::bessel_j(m, x);
        worst_rec = std::max(worst_rec, std::abs(res));
      }
    double worst_wr = 0.0;
    for (double x : {0.3, 1.0, 2.7, 5.0, 9.1, 14.0}) {
      for (int L = 0; L <= 4; ++L) {
        // j_{L+1}' j_L - j_L' j_{L+1} via the cross-product identity
        const double jl = specfun::spherical_bessel(L, x);
        const double jlp = specfun::spherical_bessel(L + 1, x);
        auto yl = [&](int n, double xx) { // spherical Neumann via closed forms
          const double c = std::cos(xx), s = std::sin(xx);
          switch (n) {
            case 0: return -c / xx;
            case 1: return -c / (xx * xx) - s / xx;
            case 2: return (-3.0 / (xx * xx * xx) + 1.0 / xx) * c - 3.0 / (xx * xx) * s;
            case 3:
              return (-15.0 / (xx * xx * xx * xx) + 6.0 / (xx * xx)) * c
                     - (15.0 / (xx * xx * xx) - 1.0 / xx) * s;
            case 4:
              return (-105.0 / std::pow(xx, 5) + 45.0 / std::pow(xx, 3) - 1.0 / xx) * c
                     - (105.0 / std::pow(xx, 4) - 10.0 / (xx * xx)) * s;
            default: return 0.0;
          }
        };
        if (L <= 3) {
          const double wr = jl * yl(L + 1, x) - jlp * yl(L, x) + 1.0 / (x * x);
          worst_wr = std::max(worst_wr, std::abs(wr));
        }
      }
    }
    r.measured = "unitarity " + fmt(worst_unit) + ", CG orth " + fmt(worst_cg) + ", recurrence "
                 + fmt(worst_rec) + ", Wronskian " + fmt(worst_wr);
    r.expected = "1e-12 / 1e-12 / 1e-10 / 1e-10";
    r.pass = worst_unit <= 1e-12 && worst_cg <= 1e-12 && worst_rec <= 1e-10 && worst_wr <= 1e-10;
  });

  // 11. determinism / cache
  run_one(results, progress, "11 determinism and cache", [&](CheckResult& r) {
    RunConfig cfg = na;
    cfg.mode = SweepMode::SigmaScale;
    cfg.t_gamma = 5.0;
    cfg.use_cache = true;
    cfg.workers = 1;
    SweepResult a = run_sweep(cfg, /*bypass=*/true);
    cfg.workers = 8;
    SweepResult b = run_sweep(cfg, /*bypass=*/true);
    cfg.workers = 1;
    SweepResult c = run_sweep(cfg, /*bypass=*/false); // cache hit from b's store
    const bool bytes_equal = to_csv(a) == to_csv(b);
    const bool cache_equal = to_csv(c) == to_csv(a);
    r.measured = std::string("workers 1 vs 8 ") + (bytes_equal ? "identical" : "DIFFER")
                 + ", cache " + (c.served_from_cache ? "hit" : "miss") + " "
                 + (cache_equal ? "identical" : "DIFFER");
    r.expected = "byte-identical CSV; cache hit equals recomputation";
    r.pass = bytes_equal && cache_equal && c.served_from_cache;
  });

  return results;
}

void print_check_report(const std::vector<CheckResult>& results, std::ostream& os) {
  std::size_t passed = 0;
  os << "acceptance checks (" << kArtifactVersion << ")\n";
  for (const auto& r : results) {
    os << (r.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(38) << r.name
       << "  measured: " << r.measured << "  expected: " << r.expected << "  ["
       << fmt(r.wall_ms) << " ms]\n";
    if (r.pass) ++passed;
  }
  os << passed << "/" << results.size() << " criteria passed\n";
}

int check_exit_code(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return 1;
  return 0;
}

} // namespace vortexpair::harness
