// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#ifndef VORTEXPAIR_CONFIG_HPP
#define VORTEXPAIR_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "vortexpair/atom.hpp"
#include "vortexpair/photon.hpp"

namespace vortexpair::harness {

/// Config-layer failure with file/line context (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string file, int line, const std::string& msg)
      : std::runtime_error(file.empty() || line <= 0
                               ? msg
                               : file + ":" + std::to_string(line) + ": " + msg),
        file_(std::move(file)), line_(line) {}
  explicit ConfigError(const std::string& msg) : ConfigError("", 0, msg) {}
  const std::string& file() const { return file_; }
  int line() const { return line_; }

private:
  std::string file_;
  int line_ = 0;
};

enum class SweepMode { Time, MGamma, SigmaScale, SigmaB, Figure };

enum class OutputFormat { Csv, Json };

/// One run = one sweep mode over one preset-or-explicit system. Lengths are
/// stored in boundary units (nm) so the canonical serialization round-trips
/// bit-exactly.
struct RunConfig {
  std::string preset = "Na-3p3s";
  atom::AtomSpec atom;

  // packet
  int m_gamma = 3;
  int lambda = 1;
  double kappa_c_ev = 0.21;
  double k_c_ev = 2.0894736657208399; // resonant for Na defaults
  double sigma_ev = 0.021;
  double b_nm = 0.0;
  double phi_b = 0.0;

  // trap
  double sigma_b_nm = 100.0;

  // system
  int m_e = 1;

  // sweep axes
  SweepMode mode = SweepMode::Time;
  std::string figure;
  double t_max_gamma = 10.0;
  int t_points = 40;
  int m_gamma_min = -4, m_gamma_max = 8;
  std::vector<double> sigma_scales{1.0, 1.5, 2.0};
  double sigma_b_min_nm = 5.0, sigma_b_max_nm = 180.0;
  int sigma_b_points = 12;

  // run controls
  double t_gamma = 10.0;
  double tol = 1e-7;
  int workers = 1;
  OutputFormat format = OutputFormat::Csv;
  std::string out = "-";
  bool use_cache = true;

  photon::PhotonPacket make_packet() const;
  photon::TrapSpec make_trap() const;

  /// Invariant checks (tolerance range, struct invariants, axis sanity).
  void validate() const;

  /// Canonical serialization: stable section/key order, 17 significant
  /// digits; parse_config_text(canonical_text()) reproduces the config.
  std::string canonical_text() const;
};

/// Default config for a named atom preset, with the packet defaults
/// belonging to that figure set.
RunConfig default_config(const std::string& preset_name);

/// Parse a sectioned key-value config (overlay on top of `base`). Unknown
/// sections/keys, malformed values, and invariant violations raise
/// ConfigError with file:line context.
RunConfig parse_config_text(const std::string& text, const std::string& filename,
                            const RunConfig& base);
RunConfig parse_config_file(const std::string& path, const RunConfig& base);

/// FNV-1a 64-bit content hash of the canonical config text (hex string).
std::string config_hash(const RunConfig& cfg);
std::uint64_t fnv1a64(const std::string& data);

} // namespace vortexpair::harness

#endif
