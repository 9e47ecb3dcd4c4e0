// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0
//
// vortexpair CLI: figure reproductions, parameter sweeps, and the
// acceptance suite. Data goes to stdout or --out; progress to stderr.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vortexpair/check.hpp"
#include "vortexpair/emit.hpp"
#include "vortexpair/quadrature.hpp"
#include "vortexpair/sweep.hpp"

namespace vh = vortexpair::harness;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out = "-";
  std::string format;
  int workers = 0;
  bool no_cache = false;
  double tol = 0.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "config file (sectioned key = value)");
  cmd->add_option("--preset", o.preset, "atom preset: Na-3p3s or H-2p1s");
  cmd->add_option("--out", o.out, "output path ('-' = stdout)");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", o.workers, "worker pool size");
  cmd->add_flag("--no-cache", o.no_cache, "bypass the result cache");
  cmd->add_option("--tol", o.tol, "relative quadrature tolerance");
}

vh::RunConfig build_config(const CommonOpts& o, const std::string& default_preset) {
  vh::RunConfig cfg = vh::default_config(o.preset.empty() ? default_preset : o.preset);
  if (!o.config_path.empty()) cfg = vh::parse_config_file(o.config_path, cfg);
  if (o.workers > 0) cfg.workers = o.workers;
  if (o.tol > 0.0) cfg.tol = o.tol;
  if (!o.format.empty()) cfg.format = o.format == "csv" ? vh::OutputFormat::Csv
                                                        : vh::OutputFormat::Json;
  if (!o.out.empty()) cfg.out = o.out;
  cfg.validate();
  return cfg;
}

int run_figure_cmd(const std::string& name, const CommonOpts& o) {
  const std::string preset = name == "pairprob" ? "H-2p1s" : "Na-3p3s";
  vh::RunConfig cfg = build_config(o, preset);
  std::cerr << "[vortexpair] figure " << name << ", preset " << cfg.preset << ", hash pending\n";
  vh::SweepResult r = vh::run_figure(name, &cfg, o.no_cache);
  std::cerr << "[vortexpair] " << (r.served_from_cache ? "cache hit " : "computed ")
            << r.points.size() << " points, config " << r.config_hash << "\n";
  vh::emit(r, cfg.format, cfg.out);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"biphoton emission induced by a Bessel-Gaussian vortex photon"};
  app.require_subcommand(1);

  CommonOpts opts;
  const char* figures[] = {"fig2a", "fig2b", "fig2c", "fig3", "pairprob"};
  for (const char* f : figures) {
    auto* cmd = app.add_subcommand(
        f, std::string("reproduce curve data for ") + f);
    add_common(cmd, opts);
  }
  auto* sweep_cmd = app.add_subcommand("sweep", "run the sweep described by --config");
  add_common(sweep_cmd, opts);
  auto* check_cmd = app.add_subcommand("check", "run the acceptance suite");
  add_common(check_cmd, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    for (const char* f : figures)
      if (app.got_subcommand(f)) return run_figure_cmd(f, opts);

    if (app.got_subcommand("sweep")) {
      if (opts.config_path.empty())
        throw vh::ConfigError("sweep requires --config with a [sweep] section");
      vh::RunConfig cfg = build_config(opts, "Na-3p3s");
      std::cerr << "[vortexpair] sweep mode, " << vh::sweep_size(cfg) << " points\n";
      vh::SweepResult r = vh::run_sweep(cfg, opts.no_cache);
      std::cerr << "[vortexpair] " << (r.served_from_cache ? "cache hit" : "computed")
                << ", config " << r.config_hash << "\n";
      vh::emit(r, cfg.format, cfg.out);
      return 0;
    }

    if (app.got_subcommand("check")) {
      const auto results = vh::run_all_checks(std::cerr);
      vh::print_check_report(results, std::cout);
      return vh::check_exit_code(results);
    }
  } catch (const vh::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const vortexpair::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
