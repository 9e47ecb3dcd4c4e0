// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "vortexpair/emit.hpp"
#include "vortexpair/units.hpp"
#include "vortexpair/sweep.hpp"

using namespace vortexpair::harness;
namespace fs = std::filesystem;

namespace {

struct CacheDirGuard {
  fs::path dir;
  CacheDirGuard() {
    dir = fs::temp_directory_path()
          / ("vortexpair_test_cache_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    setenv("VORTEXPAIR_CACHE_DIR", dir.c_str(), 1);
  }
  ~CacheDirGuard() {
    unsetenv("VORTEXPAIR_CACHE_DIR");
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

RunConfig small_sweep_config() {
  RunConfig cfg = default_config("Na-3p3s");
  cfg.mode = SweepMode::SigmaScale;
  cfg.sigma_scales = {1.0, 1.5, 2.0};
  cfg.t_gamma = 5.0;
  return cfg;
}

} // namespace

TEST_CASE("config canonical round trip") {
  RunConfig cfg = default_config("Na-3p3s");
  cfg.tol = 3.14159e-9;
  cfg.sigma_b_nm = 123.456789012345678;
  cfg.mode = SweepMode::MGamma;
  const std::string text = cfg.canonical_text();
  const RunConfig back = parse_config_text(text, "canon", RunConfig{});
  CHECK(back.canonical_text() == text);
  CHECK(config_hash(back) == config_hash(cfg));
}

TEST_CASE("config parser: line-precise errors") {
  const RunConfig base = default_config("Na-3p3s");
  CHECK_THROWS_WITH_AS(parse_config_text("[packet]\nm_gamma = 3\nsigmab = 1\n", "f.ini", base),
                       doctest::Contains("f.ini:3"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[nope]\n", "f.ini", base),
                       doctest::Contains("unknown section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("m_e = 1\n", "f.ini", base),
                       doctest::Contains("outside any section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[packet]\nkappa_c_ev = tiny\n", "f.ini", base),
                       doctest::Contains("not a number"), ConfigError);
}

TEST_CASE("config validation: tolerance bounds reject 1e-2") {
  RunConfig cfg = small_sweep_config();
  cfg.tol = 1e-2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.tol = 1e-13;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.tol = 1e-7;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config hash is stable") {
  // frozen: platform-independent content address of the canonical text
  const RunConfig cfg = default_config("Na-3p3s");
  CHECK(config_hash(cfg) == config_hash(cfg));
  CHECK(fnv1a64("vortexpair") == 0x5ffa44f3901f8a73ull);
}

TEST_CASE("figure plans match their captions") {
  RunConfig cfg = default_config("Na-3p3s");
  cfg.mode = SweepMode::Figure;
  cfg.figure = "fig3";
  CHECK(sweep_size(cfg) == 13); // m_gamma in [-4, 8]
  CHECK(cfg.t_gamma == 10.0);
  CHECK(cfg.lambda == 1);
  CHECK(cfg.m_e == 1);

  cfg.figure = "fig2a";
  CHECK(sweep_size(cfg) == 3u * 40u); // sigma scales {1, 1.5, 2}
  CHECK(cfg.sigma_scales == std::vector<double>{1.0, 1.5, 2.0});

  cfg.figure = "fig2c";
  CHECK(sweep_size(cfg) == 4u * 40u); // m_gamma in {0,1,2,3}

  cfg.figure = "nope";
  CHECK_THROWS_AS(sweep_size(cfg), ConfigError);
}

TEST_CASE("sweep determinism across worker counts and cache correctness") {
  CacheDirGuard guard;
  RunConfig cfg = small_sweep_config();

  cfg.workers = 1;
  const SweepResult a = run_sweep(cfg, /*bypass=*/true);
  cfg.workers = 8;
  const SweepResult b = run_sweep(cfg, /*bypass=*/true);
  CHECK(to_csv(a) == to_csv(b)); // byte-identical output

  cfg.workers = 1;
  const SweepResult c = run_sweep(cfg, /*bypass=*/false); // first cached read
  CHECK(c.served_from_cache);
  CHECK(to_csv(c) == to_csv(a));
}

TEST_CASE("identical config reproduces bit-identically across two runs") {
  CacheDirGuard guard;
  RunConfig cfg = small_sweep_config();
  const SweepResult r1 = run_sweep(cfg, true);
  const SweepResult r2 = run_sweep(cfg, true);
  CHECK(to_csv(r1) == to_csv(r2));
  CHECK(to_json(r1) == to_json(r2));
}

TEST_CASE("cache corruption is invalidated and recomputed") {
  CacheDirGuard guard;
  RunConfig cfg = small_sweep_config();
  const SweepResult fresh = run_sweep(cfg); // populates the cache
  CHECK_FALSE(fresh.served_from_cache);

  const fs::path file = guard.dir / (config_hash(cfg) + ".json");
  REQUIRE(fs::exists(file));
  { // corrupt a data byte: checksum must catch it
    std::fstream f(file, std::ios::in | std::ios::out);
    std::string text((std::istreambuf_iterator<char>(f)), {});
    const auto pos = text.find("\"outputs\": [");
    REQUIRE(pos != std::string::npos);
    text[pos + 13] = text[pos + 13] == '1' ? '2' : '1';
    f.seekp(0);
    f << text;
  }
  const SweepResult again = run_sweep(cfg);
  CHECK_FALSE(again.served_from_cache); // invalidated, recomputed
  CHECK(to_csv(again) == to_csv(fresh));
}

TEST_CASE("cached equals recomputed on randomized configs") {
  CacheDirGuard guard;
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    RunConfig cfg = small_sweep_config();
    cfg.t_gamma = 2.0 + 6.0 * u(rng);
    cfg.sigma_scales = {1.0 + u(rng)};
    cfg.sigma_b_nm = 60.0 + 80.0 * u(rng);
    cfg.m_gamma = static_cast<int>(rng() % 5) - 1;
    const SweepResult fresh = run_sweep(cfg);
    const SweepResult cached = run_sweep(cfg);
    CHECK(cached.served_from_cache);
    CHECK(to_csv(cached) == to_csv(fresh));
    CHECK(to_json(cached) == to_json(fresh));
  }
}

TEST_CASE("emit round trips") {
  CacheDirGuard guard;
  RunConfig cfg = small_sweep_config();
  const SweepResult r = run_sweep(cfg, true);

  const SweepResult jr = from_json(to_json(r));
  CHECK(jr.config_hash == r.config_hash);
  CHECK(jr.points.size() == r.points.size());
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    CHECK(jr.points[i].inputs == r.points[i].inputs);   // %.17g round trip is exact
    CHECK(jr.points[i].outputs == r.points[i].outputs);
  }

  const SweepResult cr = from_csv(to_csv(r));
  CHECK(cr.config_hash == r.config_hash);
  REQUIRE(cr.points.size() == r.points.size());
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    std::vector<double> expect = r.points[i].inputs;
    expect.insert(expect.end(), r.points[i].outputs.begin(), r.points[i].outputs.end());
    CHECK(cr.points[i].inputs == expect);
    CHECK(cr.points[i].quad_error == r.points[i].quad_error);
  }
}

TEST_CASE("emitted JSON validates against the published schema") {
  CacheDirGuard guard;
  const SweepResult r = run_sweep(small_sweep_config(), true);
  const nlohmann::json doc = nlohmann::json::parse(to_json(r));

  std::ifstream fs_schema(std::string(VORTEXPAIR_SOURCE_DIR) + "/tests/schema/sweep_result.schema.json");
  REQUIRE(fs_schema.good());
  const nlohmann::json schema = nlohmann::json::parse(fs_schema);

  // structural validation: required properties with the declared types
  auto type_ok = [](const nlohmann::json& v, const std::string& t) {
    if (t == "string") return v.is_string();
    if (t == "array") return v.is_array();
    if (t == "number") return v.is_number();
    if (t == "object") return v.is_object();
    return false;
  };
  for (const auto& req : schema.at("required")) {
    const std::string key = req.get<std::string>();
    REQUIRE(doc.contains(key));
    CHECK(type_ok(doc.at(key), schema.at("properties").at(key).at("type").get<std::string>()));
  }
  const auto& pt_schema = schema.at("properties").at("points").at("items");
  for (const auto& pt : doc.at("points"))
    for (const auto& req : pt_schema.at("required")) {
      const std::string key = req.get<std::string>();
      REQUIRE(pt.contains(key));
      CHECK(type_ok(pt.at(key),
                    pt_schema.at("properties").at(key).at("type").get<std::string>()));
    }
}

TEST_CASE("figure run with no overrides is reproducible bit for bit") {
  CacheDirGuard guard;
  const SweepResult r1 = run_figure("fig3", nullptr, /*bypass=*/true);
  const SweepResult r2 = run_figure("fig3", nullptr, /*bypass=*/true);
  CHECK(to_csv(r1) == to_csv(r2));
  REQUIRE(r1.points.size() == 13);
  CHECK(r1.points.front().inputs[0] == -4.0);
  CHECK(r1.points.back().inputs[0] == 8.0);
}

TEST_CASE("regime warnings surface in the output metadata") {
  CacheDirGuard guard;
  RunConfig cfg = small_sweep_config();
  cfg.mode = SweepMode::MGamma;
  cfg.m_gamma_min = 0;
  cfg.m_gamma_max = 1;
  cfg.kappa_c_ev = 0.21;
  cfg.sigma_b_nm = vortexpair::units::hbar_c_ev_nm * 2.0 * 0.6 / 0.21; // kappa_c sigma_b/2 = 0.6
  cfg.sigma_ev = 0.021;
  // keep the trap invariant satisfied: sigma_b < 0.1/sigma = 938 nm
  const SweepResult r = run_sweep(cfg, true);
  bool found = false;
  for (const auto& p : r.points)
    for (const auto& w : p.warnings)
      if (w.find("power-series") != std::string::npos) found = true;
  CHECK(found);
  CHECK(to_csv(r).find("# warning[0]") != std::string::npos);
}
