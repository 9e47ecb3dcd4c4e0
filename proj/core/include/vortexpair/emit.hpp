// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#ifndef VORTEXPAIR_EMIT_HPP
#define VORTEXPAIR_EMIT_HPP

#include <string>

#include "vortexpair/sweep.hpp"

namespace vortexpair::harness {

/// CSV: '#'-prefixed header lines (artifact version, preset, config hash,
/// per-point warnings), one documented column header, one row per grid
/// point. Numbers carry 17 significant digits. Wall times are JSON-only
/// metadata so identical configs emit byte-identical CSV.
std::string to_csv(const SweepResult& r);

/// Single JSON document mirroring SweepResult; numbers serialized with
/// 17 significant digits; carries a checksum of the data records.
std::string to_json(const SweepResult& r);

/// Parse back an emitted document (cache loads, round-trip tests).
SweepResult from_json(const std::string& text);
SweepResult from_csv(const std::string& text);

/// Write to `path` ("-" = stdout). Throws std::runtime_error with path
/// context on I/O failure.
void emit(const SweepResult& r, OutputFormat format, const std::string& path);

} // namespace vortexpair::harness

#endif
