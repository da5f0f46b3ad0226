#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>

#include "slopegrowth/report.hpp"

using namespace slopegrowth;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.preset = "example31";
  c.l_max = 6;
  c.grid_points = 19;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const char* name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("pipeline reruns are deterministic") {
  const auto c = small_config();
  const Report a = run_pipeline(c);
  const Report b = run_pipeline(c);
  CHECK(a.profile_csv() == b.profile_csv());
  CHECK(a.plotdata_csv() == b.plotdata_csv());
  CHECK(a.theta_star.theta == b.theta_star.theta);
  CHECK(a.exit_code == b.exit_code);
}

TEST_CASE("warm cache rerun hits the cache and emits identical CSV bytes") {
  TempDir cache("slopegrowth_cache_test");
  TempDir out1("slopegrowth_out1");
  TempDir out2("slopegrowth_out2");
  auto c = small_config();
  c.cache_dir = cache.path;

  const Report cold = run_pipeline(c);
  CHECK_FALSE(cold.cache_hit);
  emit_report(cold, out1.path);

  const Report warm = run_pipeline(c);
  CHECK(warm.cache_hit);
  emit_report(warm, out2.path);

  CHECK(slurp(out1.path / "profile.csv") == slurp(out2.path / "profile.csv"));
  CHECK(slurp(out1.path / "plotdata.csv") == slurp(out2.path / "plotdata.csv"));
  CHECK(slurp(out1.path / "condition.txt") == slurp(out2.path / "condition.txt"));
}

TEST_CASE("a config change invalidates the cache entry") {
  TempDir cache("slopegrowth_cache_inval");
  auto c = small_config();
  c.cache_dir = cache.path;
  (void)run_pipeline(c);
  c.l_max = 7;  // different cache key
  const Report r = run_pipeline(c);
  CHECK_FALSE(r.cache_hit);
}

TEST_CASE("report JSON is parseable and carries the run config") {
  const Report r = run_pipeline(small_config());
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j.at("config").at("preset") == "example31");
  CHECK(j.at("config").at("l_max") == 6);
  CHECK(j.at("spec").at("fingerprint") == r.spec.fingerprint());
  CHECK(j.at("spectrum").at("horizon") == 8);
  CHECK(j.at("profile").size() == 19);
  CHECK(j.at("exit_code") == r.exit_code);
  CHECK(j.at("theta_star").contains("theta"));
}

TEST_CASE("profile CSV layout") {
  const Report r = run_pipeline(small_config());
  const auto csv = r.profile_csv();
  CHECK(csv.rfind("theta,delta,stderr,neg_inf_flag,eps_used,n_lo,n_hi\n", 0) == 0);
  std::size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 20);  // header + one row per grid point
  // axis directions of the diagonal group are empty: flagged rows exist
  CHECK(csv.find(",-inf,") != std::string::npos);
}

TEST_CASE("emit_report writes the full artifact set") {
  TempDir out("slopegrowth_emit_test");
  const Report r = run_pipeline(small_config());
  emit_report(r, out.path);
  for (const char* name : {"profile.csv", "plotdata.csv", "report.json",
                           "condition.txt", "spectrum.cache", "run.stamp"})
    CHECK(std::filesystem::exists(out.path / name));
  const auto reloaded = SlopeSpectrum::load(out.path / "spectrum.cache",
                                            r.spec.fingerprint());
  CHECK(reloaded == r.spectrum);
}

TEST_CASE("unknown preset is a usage error") {
  RunConfig c;
  c.preset = "example00";
  CHECK_THROWS_AS(run_pipeline(c), input_error);
}

TEST_CASE("unwritable output directory raises io_error") {
  const Report r = run_pipeline(small_config());
  CHECK_THROWS_AS(emit_report(r, "/proc/no_such_dir/out"), io_error);
}

TEST_CASE("cache path respects the environment variable") {
  const auto spec = resolve_spec(small_config());
  RunConfig c = small_config();
  c.cache_dir.clear();
  setenv("SLOPEGROWTH_CACHE_DIR", "/tmp/slopegrowth_envcache", 1);
  const auto p = cache_path(c, spec);
  CHECK(p.string().rfind("/tmp/slopegrowth_envcache/", 0) == 0);
  unsetenv("SLOPEGROWTH_CACHE_DIR");
  CHECK(cache_path(c, spec).empty());
}
