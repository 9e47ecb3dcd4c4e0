// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include "vortexpair/sweep.hpp"

#include "vortexpair/quadrature.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "vortexpair/emit.hpp"
#include "vortexpair/observables.hpp"
#include "vortexpair/units.hpp"

namespace vortexpair::harness {

namespace {

const char* mode_label(const RunConfig& cfg) {
  switch (cfg.mode) {
    case SweepMode::Time: return "time";
    case SweepMode::MGamma: return "m_gamma";
    case SweepMode::SigmaScale: return "sigma_scale";
    case SweepMode::SigmaB: return "sigma_b";
    case SweepMode::Figure: return "figure";
  }
  return "?";
}

double time_at(const RunConfig& cfg, int i) {
  return cfg.t_max_gamma * (i + 1) / cfg.t_points;
}

double sigma_b_at(const RunConfig& cfg, int i) {
  return cfg.sigma_b_min_nm
         + (cfg.sigma_b_max_nm - cfg.sigma_b_min_nm) * i / (cfg.sigma_b_points - 1);
}

std::vector<std::string> tam_outputs() { return {"delta_jz", "delta_jz_std", "delta_jz_var"}; }

SweepPoint eval_tam(const RunConfig& cfg, const photon::PhotonPacket& p, double sigma_b_nm,
                    double t_gamma, std::vector<double> inputs) {
  SweepPoint pt;
  pt.inputs = std::move(inputs);
  photon::TrapSpec trap;
  trap.sigma_b = units::nm_to_inv_ev(sigma_b_nm);
  const auto s = observables::tam_stats(cfg.atom, p, trap, cfg.m_e, t_gamma, cfg.tol);
  pt.outputs = {s.mismatch, s.std_dev, s.variance};
  if (!s.bessel_regime_ok)
    pt.warnings.push_back("bessel_weight outside the power-series regime");
  return pt;
}

SweepPoint eval_pairprob(const RunConfig& cfg, int m_gamma, double sigma_b_nm) {
  SweepPoint pt;
  pt.inputs = {sigma_b_nm, static_cast<double>(m_gamma)};
  photon::PhotonPacket p = cfg.make_packet();
  p.m_gamma = m_gamma;
  photon::TrapSpec trap;
  trap.sigma_b = units::nm_to_inv_ev(sigma_b_nm);
  observables::OamWindow win;
  win.l_min = std::min(cfg.m_e, m_gamma) - 2;
  win.l_max = std::max(cfg.m_e, m_gamma) + 2;
  observables::GridSpec grid;
  grid.t_gamma = 20.0;
  const auto P = observables::pair_probability(cfg.atom, p, trap, cfg.m_e, win, grid);
  const double pair = m_gamma == cfg.m_e
                          ? P.at(cfg.m_e, cfg.m_e)
                          : P.at(m_gamma, cfg.m_e) + P.at(cfg.m_e, m_gamma);
  pt.outputs = {pair, P.captured_mass, P.richardson_rel_change};
  pt.warnings = P.warnings;
  return pt;
}

struct Plan {
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  std::size_t size = 0;
};

Plan plan_for(const RunConfig& cfg) {
  Plan plan;
  if (cfg.mode == SweepMode::Figure) {
    if (cfg.figure == "fig2a" || cfg.figure == "fig2b") {
      plan.input_names = {"t_gamma", "sigma_scale"};
      plan.output_names = tam_outputs();
      plan.size = cfg.sigma_scales.size() * static_cast<std::size_t>(cfg.t_points);
    } else if (cfg.figure == "fig2c") {
      plan.input_names = {"t_gamma", "m_gamma"};
      plan.output_names = tam_outputs();
      plan.size = 4u * static_cast<std::size_t>(cfg.t_points);
    } else if (cfg.figure == "fig3") {
      plan.input_names = {"m_gamma"};
      plan.output_names = tam_outputs();
      plan.size = static_cast<std::size_t>(cfg.m_gamma_max - cfg.m_gamma_min + 1);
    } else if (cfg.figure == "pairprob") {
      plan.input_names = {"sigma_b_nm", "m_gamma"};
      plan.output_names = {"p_pair", "captured_mass", "late_time_rel_change"};
      plan.size = 3u * static_cast<std::size_t>(cfg.sigma_b_points);
    } else {
      throw ConfigError("unknown figure '" + cfg.figure + "'");
    }
    return plan;
  }
  switch (cfg.mode) {
    case SweepMode::Time:
      plan.input_names = {"t_gamma"};
      plan.size = static_cast<std::size_t>(cfg.t_points);
      break;
    case SweepMode::MGamma:
      plan.input_names = {"m_gamma"};
      plan.size = static_cast<std::size_t>(cfg.m_gamma_max - cfg.m_gamma_min + 1);
      break;
    case SweepMode::SigmaScale:
      plan.input_names = {"sigma_scale"};
      plan.size = cfg.sigma_scales.size();
      break;
    case SweepMode::SigmaB:
      plan.input_names = {"sigma_b_nm"};
      plan.size = static_cast<std::size_t>(cfg.sigma_b_points);
      break;
    default: break;
  }
  plan.output_names = tam_outputs();
  return plan;
}

} // namespace

std::size_t sweep_size(const RunConfig& cfg) { return plan_for(cfg).size; }

SweepPoint evaluate_point(const RunConfig& cfg, std::size_t index) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepPoint pt;
  if (cfg.mode == SweepMode::Figure && cfg.figure == "pairprob") {
    static const int kMg[3] = {-1, 0, 2};
    const int mg = kMg[index / cfg.sigma_b_points];
    pt = eval_pairprob(cfg, mg, sigma_b_at(cfg, static_cast<int>(index % cfg.sigma_b_points)));
  } else if (cfg.mode == SweepMode::Figure
             && (cfg.figure == "fig2a" || cfg.figure == "fig2b")) {
    const std::size_t is = index / cfg.t_points;
    const int it = static_cast<int>(index % cfg.t_points);
    photon::PhotonPacket p = cfg.make_packet();
    p.sigma = cfg.sigma_ev * cfg.sigma_scales[is];
    pt = eval_tam(cfg, p, cfg.sigma_b_nm, time_at(cfg, it),
                  {time_at(cfg, it), cfg.sigma_scales[is]});
  } else if (cfg.mode == SweepMode::Figure && cfg.figure == "fig2c") {
    static const int kMg[4] = {0, 1, 2, 3};
    const int mg = kMg[index / cfg.t_points];
    const int it = static_cast<int>(index % cfg.t_points);
    photon::PhotonPacket p = cfg.make_packet();
    p.m_gamma = mg;
    pt = eval_tam(cfg, p, cfg.sigma_b_nm, time_at(cfg, it),
                  {time_at(cfg, it), static_cast<double>(mg)});
  } else if (cfg.mode == SweepMode::Figure && cfg.figure == "fig3") {
    const int mg = cfg.m_gamma_min + static_cast<int>(index);
    photon::PhotonPacket p = cfg.make_packet();
    p.m_gamma = mg;
    pt = eval_tam(cfg, p, cfg.sigma_b_nm, cfg.t_gamma, {static_cast<double>(mg)});
  } else if (cfg.mode == SweepMode::Time) {
    const double t = time_at(cfg, static_cast<int>(index));
    pt = eval_tam(cfg, cfg.make_packet(), cfg.sigma_b_nm, t, {t});
  } else if (cfg.mode == SweepMode::MGamma) {
    const int mg = cfg.m_gamma_min + static_cast<int>(index);
    photon::PhotonPacket p = cfg.make_packet();
    p.m_gamma = mg;
    pt = eval_tam(cfg, p, cfg.sigma_b_nm, cfg.t_gamma, {static_cast<double>(mg)});
  } else if (cfg.mode == SweepMode::SigmaScale) {
    photon::PhotonPacket p = cfg.make_packet();
    p.sigma = cfg.sigma_ev * cfg.sigma_scales[index];
    pt = eval_tam(cfg, p, cfg.sigma_b_nm, cfg.t_gamma, {cfg.sigma_scales[index]});
  } else { // SigmaB
    const double sb = sigma_b_at(cfg, static_cast<int>(index));
    pt = eval_tam(cfg, cfg.make_packet(), sb, cfg.t_gamma, {sb});
  }
  pt.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                   .count();
  return pt;
}

std::string cache_directory() {
  if (const char* env = std::getenv("VORTEXPAIR_CACHE_DIR"); env && *env) return env;
  return ".vortexpair_cache";
}

namespace {

SweepResult compute_sweep(const RunConfig& cfg) {
  const Plan plan = plan_for(cfg);
  SweepResult r;
  r.artifact_version = kArtifactVersion;
  r.preset = cfg.preset;
  r.config_hash = config_hash(cfg);
  r.mode = cfg.mode == SweepMode::Figure ? cfg.figure : mode_label(cfg);
  r.config_text = cfg.canonical_text();
  r.input_names = plan.input_names;
  r.output_names = plan.output_names;
  r.points.resize(plan.size);

  const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(plan.size)));
  if (workers == 1) {
    for (std::size_t i = 0; i < plan.size; ++i) r.points[i] = evaluate_point(cfg, i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= plan.size) return;
          try {
            r.points[i] = evaluate_point(cfg, i);
          } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(w)] = e.what();
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (!e.empty()) throw NumericalError("sweep worker failed: " + e);
  }
  return r;
}

} // namespace

SweepResult run_sweep(const RunConfig& cfg, bool bypass_cache) {
  cfg.validate();
  const std::string hash = config_hash(cfg);
  namespace fs = std::filesystem;
  const fs::path dir = cache_directory();
  const fs::path file = dir / (hash + ".json");

  if (cfg.use_cache && !bypass_cache && fs::exists(file)) {
    try {
      std::ifstream f(file);
      std::ostringstream os;
      os << f.rdbuf();
      SweepResult cached = from_json(os.str()); // checksum-verified
      if (cached.config_hash == hash) {
        cached.served_from_cache = true;
        return cached;
      }
      fs::remove(file); // hash mismatch: stale or corrupted entry
    } catch (const std::exception&) {
      std::error_code ec;
      fs::remove(file, ec); // corrupted entry is invalidated, then recomputed
    }
  }

  SweepResult r = compute_sweep(cfg);
  if (cfg.use_cache) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path tmp = file.string() + ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary);
      if (f) f << to_json(r);
    }
    fs::rename(tmp, file, ec); // atomic publish keeps the cache consistent
  }
  return r;
}

SweepResult run_figure(const std::string& name, const RunConfig* overrides, bool bypass_cache) {
  RunConfig cfg;
  if (name == "fig2a" || name == "fig2b" || name == "fig2c" || name == "fig3") {
    cfg = default_config("Na-3p3s");
    cfg.t_gamma = 10.0;
    cfg.t_max_gamma = 10.0;
    cfg.t_points = 40;
    if (name == "fig3") {
      cfg.m_gamma_min = -4;
      cfg.m_gamma_max = 8;
    }
  } else if (name == "pairprob") {
    cfg = default_config("H-2p1s");
    cfg.sigma_b_min_nm = 5.0;
    cfg.sigma_b_max_nm = 180.0;
    cfg.sigma_b_points = 12;
  } else {
    throw ConfigError("unknown figure '" + name + "'");
  }
  if (overrides) {
    cfg = *overrides;
  }
  cfg.mode = SweepMode::Figure;
  cfg.figure = name;
  return run_sweep(cfg, bypass_cache);
}

} // namespace vortexpair::harness
