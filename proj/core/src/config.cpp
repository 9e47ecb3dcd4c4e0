// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include "vortexpair/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vortexpair/units.hpp"

namespace vortexpair::harness {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& file, int line,
                 const std::string& key) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(file, line, "value of '" + key + "' is not a number: '" + v + "'");
  }
}

int to_int(const std::string& v, const std::string& file, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    throw ConfigError(file, line, "value of '" + key + "' is not an integer: '" + v + "'");
  }
}

std::vector<double> to_list(const std::string& v, const std::string& file, int line,
                            const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_double(item, file, line, key));
  }
  if (out.empty()) throw ConfigError(file, line, "empty list for '" + key + "'");
  return out;
}

const char* mode_name(SweepMode m) {
  switch (m) {
    case SweepMode::Time: return "time";
    case SweepMode::MGamma: return "m_gamma";
    case SweepMode::SigmaScale: return "sigma_scale";
    case SweepMode::SigmaB: return "sigma_b";
    case SweepMode::Figure: return "figure";
  }
  return "?";
}

} // namespace

photon::PhotonPacket RunConfig::make_packet() const {
  photon::PhotonPacket p;
  p.m_gamma = m_gamma;
  p.lambda = lambda;
  p.kappa_c = kappa_c_ev;
  p.k_c = k_c_ev;
  p.sigma = sigma_ev;
  p.b = units::nm_to_inv_ev(b_nm);
  p.phi_b = phi_b;
  return p;
}

photon::TrapSpec RunConfig::make_trap() const {
  photon::TrapSpec t;
  t.sigma_b = units::nm_to_inv_ev(sigma_b_nm);
  return t;
}

void RunConfig::validate() const {
  atom.validate();
  make_packet().validate();
  make_trap().validate(sigma_ev);
  if (m_e < -1 || m_e > 1) throw ConfigError("system.m_e must lie in {-1,0,1}");
  if (!(tol >= 1e-12 && tol <= 1e-3)) throw ConfigError("run.tol must lie in [1e-12, 1e-3]");
  if (workers < 1 || workers > 256) throw ConfigError("run.workers must lie in [1,256]");
  if (t_points < 1 || t_points > 100000) throw ConfigError("sweep.t_points out of range");
  if (!(t_max_gamma > 0.0 && t_max_gamma <= 50.0))
    throw ConfigError("sweep.t_max_gamma must lie in (0, 50]");
  if (!(t_gamma > 0.0 && t_gamma <= 50.0)) throw ConfigError("run.t_gamma must lie in (0, 50]");
  if (m_gamma_min > m_gamma_max) throw ConfigError("sweep.m_gamma_min > sweep.m_gamma_max");
  if (sigma_b_points < 2 || sigma_b_points > 10000)
    throw ConfigError("sweep.sigma_b_points out of range");
  if (!(sigma_b_min_nm > 0.0 && sigma_b_min_nm < sigma_b_max_nm))
    throw ConfigError("sweep.sigma_b range invalid");
  if (mode == SweepMode::Figure && figure.empty()) throw ConfigError("sweep.figure name missing");
  for (double s : sigma_scales)
    if (!(s > 0.0)) throw ConfigError("sweep.sigma_scales must be positive");
}

std::string RunConfig::canonical_text() const {
  std::ostringstream os;
  os << "[atom]\n";
  os << "preset = " << preset << "\n";
  os << "n_g = " << atom.n_g << "\n";
  os << "n_e = " << atom.n_e << "\n";
  os << "z_eff = " << fmt17(atom.z_eff) << "\n";
  os << "omega_a_ev = " << fmt17(atom.omega_a) << "\n";
  os << "gamma_ev = " << fmt17(atom.gamma) << "\n";
  os << "coupling_scale = " << fmt17(atom.coupling_scale) << "\n";
  os << "cg_convention = "
     << (atom.cg_convention == atom::CgConvention::Printed ? "printed" : "m_additive") << "\n";
  os << "[packet]\n";
  os << "m_gamma = " << m_gamma << "\n";
  os << "lambda = " << lambda << "\n";
  os << "kappa_c_ev = " << fmt17(kappa_c_ev) << "\n";
  os << "k_c_ev = " << fmt17(k_c_ev) << "\n";
  os << "sigma_ev = " << fmt17(sigma_ev) << "\n";
  os << "b_nm = " << fmt17(b_nm) << "\n";
  os << "phi_b = " << fmt17(phi_b) << "\n";
  os << "[trap]\n";
  os << "sigma_b_nm = " << fmt17(sigma_b_nm) << "\n";
  os << "[system]\n";
  os << "m_e = " << m_e << "\n";
  os << "[sweep]\n";
  os << "mode = " << mode_name(mode) << "\n";
  if (!figure.empty()) os << "figure = " << figure << "\n";
  os << "t_max_gamma = " << fmt17(t_max_gamma) << "\n";
  os << "t_points = " << t_points << "\n";
  os << "m_gamma_min = " << m_gamma_min << "\n";
  os << "m_gamma_max = " << m_gamma_max << "\n";
  os << "sigma_scales = ";
  for (std::size_t i = 0; i < sigma_scales.size(); ++i)
    os << (i ? "," : "") << fmt17(sigma_scales[i]);
  os << "\n";
  os << "sigma_b_min_nm = " << fmt17(sigma_b_min_nm) << "\n";
  os << "sigma_b_max_nm = " << fmt17(sigma_b_max_nm) << "\n";
  os << "sigma_b_points = " << sigma_b_points << "\n";
  os << "[run]\n";
  os << "t_gamma = " << fmt17(t_gamma) << "\n";
  os << "tol = " << fmt17(tol) << "\n";
  os << "workers = " << workers << "\n";
  os << "format = " << (format == OutputFormat::Csv ? "csv" : "json") << "\n";
  os << "out = " << out << "\n";
  os << "cache = " << (use_cache ? "on" : "off") << "\n";
  return os.str();
}

RunConfig default_config(const std::string& preset_name) {
  RunConfig cfg;
  cfg.preset = preset_name;
  cfg.atom = atom::preset(preset_name);
  cfg.kappa_c_ev = 0.1 * cfg.atom.omega_a;
  cfg.sigma_ev = 0.1 * cfg.kappa_c_ev;
  cfg.k_c_ev = std::sqrt(cfg.atom.omega_a * cfg.atom.omega_a - cfg.kappa_c_ev * cfg.kappa_c_ev);
  cfg.lambda = 1;
  cfg.m_e = 1;
  cfg.b_nm = 0.0;
  cfg.phi_b = 0.0;
  cfg.sigma_b_nm = 100.0;
  cfg.m_gamma = preset_name == "H-2p1s" ? -1 : 3;
  return cfg;
}

RunConfig parse_config_text(const std::string& text, const std::string& filename,
                            const RunConfig& base) {
  RunConfig cfg = base;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  bool resonant_k_c = false;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(filename, lineno, "malformed section header: '" + line + "'");
      section = line.substr(1, line.size() - 2);
      if (section != "atom" && section != "packet" && section != "trap" && section != "system"
          && section != "sweep" && section != "run")
        throw ConfigError(filename, lineno, "unknown section '[" + section + "]'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(filename, lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError(filename, lineno, "key '" + key + "' outside any section");

    auto unknown = [&]() {
      return ConfigError(filename, lineno,
                         "unknown key '" + key + "' in section [" + section + "]");
    };

    if (section == "atom") {
      if (key == "preset") {
        cfg.preset = val;
        try {
          cfg.atom = atom::preset(val);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(filename, lineno, e.what());
        }
      } else if (key == "n_g")
        cfg.atom.n_g = to_int(val, filename, lineno, key);
      else if (key == "n_e")
        cfg.atom.n_e = to_int(val, filename, lineno, key);
      else if (key == "z_eff")
        cfg.atom.z_eff = to_double(val, filename, lineno, key);
      else if (key == "omega_a_ev")
        cfg.atom.omega_a = to_double(val, filename, lineno, key);
      else if (key == "gamma_ev")
        cfg.atom.gamma = to_double(val, filename, lineno, key);
      else if (key == "coupling_scale")
        cfg.atom.coupling_scale = to_double(val, filename, lineno, key);
      else if (key == "cg_convention") {
        if (val == "printed")
          cfg.atom.cg_convention = atom::CgConvention::Printed;
        else if (val == "m_additive")
          cfg.atom.cg_convention = atom::CgConvention::MAdditive;
        else
          throw ConfigError(filename, lineno,
                            "cg_convention must be 'printed' or 'm_additive', got '" + val + "'");
      } else
        throw unknown();
    } else if (section == "packet") {
      if (key == "m_gamma")
        cfg.m_gamma = to_int(val, filename, lineno, key);
      else if (key == "lambda")
        cfg.lambda = to_int(val, filename, lineno, key);
      else if (key == "kappa_c_ev")
        cfg.kappa_c_ev = to_double(val, filename, lineno, key);
      else if (key == "k_c_ev") {
        if (val == "resonant")
          resonant_k_c = true;
        else
          cfg.k_c_ev = to_double(val, filename, lineno, key);
      } else if (key == "sigma_ev")
        cfg.sigma_ev = to_double(val, filename, lineno, key);
      else if (key == "b_nm")
        cfg.b_nm = to_double(val, filename, lineno, key);
      else if (key == "phi_b")
        cfg.phi_b = to_double(val, filename, lineno, key);
      else
        throw unknown();
    } else if (section == "trap") {
      if (key == "sigma_b_nm")
        cfg.sigma_b_nm = to_double(val, filename, lineno, key);
      else
        throw unknown();
    } else if (section == "system") {
      if (key == "m_e")
        cfg.m_e = to_int(val, filename, lineno, key);
      else
        throw unknown();
    } else if (section == "sweep") {
      if (key == "mode") {
        if (val == "time")
          cfg.mode = SweepMode::Time;
        else if (val == "m_gamma")
          cfg.mode = SweepMode::MGamma;
        else if (val == "sigma_scale")
          cfg.mode = SweepMode::SigmaScale;
        else if (val == "sigma_b")
          cfg.mode = SweepMode::SigmaB;
        else if (val == "figure")
          cfg.mode = SweepMode::Figure;
        else
          throw ConfigError(filename, lineno, "unknown sweep mode '" + val + "'");
      } else if (key == "figure")
        cfg.figure = val;
      else if (key == "t_max_gamma")
        cfg.t_max_gamma = to_double(val, filename, lineno, key);
      else if (key == "t_points")
        cfg.t_points = to_int(val, filename, lineno, key);
      else if (key == "m_gamma_min")
        cfg.m_gamma_min = to_int(val, filename, lineno, key);
      else if (key == "m_gamma_max")
        cfg.m_gamma_max = to_int(val, filename, lineno, key);
      else if (key == "sigma_scales")
        cfg.sigma_scales = to_list(val, filename, lineno, key);
      else if (key == "sigma_b_min_nm")
        cfg.sigma_b_min_nm = to_double(val, filename, lineno, key);
      else if (key == "sigma_b_max_nm")
        cfg.sigma_b_max_nm = to_double(val, filename, lineno, key);
      else if (key == "sigma_b_points")
        cfg.sigma_b_points = to_int(val, filename, lineno, key);
      else
        throw unknown();
    } else { // run
      if (key == "t_gamma")
        cfg.t_gamma = to_double(val, filename, lineno, key);
      else if (key == "tol")
        cfg.tol = to_double(val, filename, lineno, key);
      else if (key == "workers")
        cfg.workers = to_int(val, filename, lineno, key);
      else if (key == "format") {
        if (val == "csv")
          cfg.format = OutputFormat::Csv;
        else if (val == "json")
          cfg.format = OutputFormat::Json;
        else
          throw ConfigError(filename, lineno, "format must be 'csv' or 'json'");
      } else if (key == "out")
        cfg.out = val;
      else if (key == "cache") {
        if (val == "on")
          cfg.use_cache = true;
        else if (val == "off")
          cfg.use_cache = false;
        else
          throw ConfigError(filename, lineno, "cache must be 'on' or 'off'");
      } else
        throw unknown();
    }
  }
  if (resonant_k_c) {
    const double wa = cfg.atom.omega_a, kc = cfg.kappa_c_ev;
    if (!(wa > kc)) throw ConfigError(filename, 0, "resonant k_c needs omega_a > kappa_c");
    cfg.k_c_ev = std::sqrt(wa * wa - kc * kc);
  }
  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(filename, 0, e.what());
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream os;
  os << f.rdbuf();
  return parse_config_text(os.str(), path, base);
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(cfg.canonical_text())));
  return buf;
}

} // namespace vortexpair::harness
