// Acceptance gate: one pass/fail line per criterion, pinned tolerances.
// Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "slopegrowth/report.hpp"
#include "slopegrowth/slope_calculus.hpp"

using namespace slopegrowth;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kQuarterPi = std::numbers::pi / 4;
const double kLog3 = std::log(3.0);

int g_failures = 0;

void verdict(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  (%s)\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

int hw_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n ? static_cast<int>(n) : 4;
}

// Direct count of reduced words of length exactly k in the rank-m free group,
// by DFS over non-backtracking letter sequences.
std::int64_t dfs_sphere(int m, int k) {
  std::int64_t total = 0;
  const auto rec = [&](auto&& self, int last, int depth) -> void {
    if (depth == k) {
      ++total;
      return;
    }
    for (int s = 0; s < 2 * m; ++s) {
      if (last >= 0 && s == (last ^ 1)) continue;
      self(self, s, depth + 1);
    }
  };
  rec(rec, -1, 0);
  return total;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (int k = 1; k <= 10; ++k) ok = ok && dfs_sphere(2, k) == free_sphere_size(2, k);
  for (int k = 1; k <= 6; ++k) ok = ok && dfs_sphere(4, k) == free_sphere_size(4, k);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  std::ostringstream d;
  d << "sphere DFS vs 2m(2m-1)^(k-1), F2 k<=10 and F4 k<=6, " << secs << " s";
  verdict(1, ok && secs < 10, d.str());
}

void criterion2() {
  BuildOptions opts;
  opts.jobs = hw_jobs();
  const auto spec = preset_example31();
  const auto s = build_spectrum(spec, 12, Binning::angular(360), 0, opts);
  const Window w = default_window(s.meta().horizon);
  EpsSchedule fine;
  fine.values = {0.4, 0.2, 0.1, 0.05, 0.02, 0.008};
  const auto profile = build_profile(s, uniform_grid(91), fine, w);

  bool ok = true;
  std::ostringstream d;
  double diag = 0;
  for (const auto& pt : profile.points) {
    if (std::abs(pt.theta - kQuarterPi) < 1e-12) {
      ok = ok && pt.status == PointStatus::finite;
      if (pt.status == PointStatus::finite) diag = pt.estimate.value;
    } else {
      ok = ok && pt.status == PointStatus::neg_inf;
    }
  }
  const double target = kLog3 / std::numbers::sqrt2;
  ok = ok && std::abs(diag - target) <= 0.08;
  ok = ok && !regular_growth_check(s, 0.0, kHalfPi, 0.1, w);
  ok = ok && regular_growth_check(s, kQuarterPi, kQuarterPi, 0.1, w);
  d << "delta(pi/4) = " << diag << " vs log3/sqrt2 = " << target
    << " +/- 0.08; all other grid points -inf; regular growth fails on "
       "[0,pi/2], holds at pi/4";
  verdict(2, ok, d.str());
}

void criterion3() {
  BuildOptions opts;
  opts.jobs = hw_jobs();
  const auto spec = preset_example41();
  const auto s = build_spectrum(spec, 11, Binning::angular(90), 0, opts);
  const Window w = default_window(s.meta().horizon);
  const EpsSchedule sched;
  const auto profile = build_profile(s, uniform_grid(91), sched, w);

  const double lo = kQuarterPi, hi = std::atan(2.0);
  const double grid_step = kHalfPi / 90;
  const double eps_eff = sched.values.back() + grid_step + grid_step;

  bool contained = true, covered = true;
  for (const auto& pt : profile.points) {
    const bool finite = pt.status == PointStatus::finite;
    if (finite && (pt.theta < lo - eps_eff || pt.theta > hi + eps_eff))
      contained = false;
    if (!finite && pt.theta >= lo + eps_eff && pt.theta <= hi - eps_eff)
      covered = false;
  }

  bool extremes = true;
  for (int k = 1; k <= 11; ++k) {
    std::string xs, ys;
    for (int i = 0; i < k; ++i) {
      xs += "x1 ";
      ys += "x2 ";
    }
    const auto dx = displacement(spec, ReducedWord::parse(spec.abstract_alphabet, xs));
    const auto dy = displacement(spec, ReducedWord::parse(spec.abstract_alphabet, ys));
    extremes = extremes && dx == Displacement{k, k} && dy == Displacement{k, 2 * k};
  }

  const auto positivity = positivity_audit(profile, lo + eps_eff, hi - eps_eff);

  std::ostringstream d;
  d << "finite slopes within [pi/4, arctan 2] +/- " << eps_eff
    << " (contained=" << contained << ", covered=" << covered
    << "); tan extremes 1 and 2 at depths 1..11 (" << extremes
    << "); positivity violations on the open band: " << positivity.size();
  verdict(3, contained && covered && extremes && positivity.empty(), d.str());
}

RateProfile criterion4(SlopeSpectrum& out_spectrum) {
  const auto t0 = std::chrono::steady_clock::now();
  BuildOptions opts;
  opts.jobs = hw_jobs();
  const auto spec = preset_example51(4);
  out_spectrum = build_spectrum(spec, 10, Binning::angular(90), 0, opts);
  const Window w = default_window(out_spectrum.meta().horizon);
  const auto profile = build_profile(out_spectrum, uniform_grid(91), {}, w);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();

  const double at_pi2 = profile.points.back().status == PointStatus::finite
                            ? profile.points.back().estimate.value
                            : -std::numeric_limits<double>::infinity();
  const auto star = find_theta_star(profile);

  const bool endpoint_ok = std::abs(at_pi2 - kLog3) <= 0.15;
  const bool star_ok = star.theta >= 1.45;
  std::ostringstream d;
  d << "delta(pi/2) = " << at_pi2 << " vs log3 = " << kLog3
    << " +/- 0.15 (ok=" << endpoint_ok << "); theta_star = " << star.theta
    << " >= 1.45 (ok=" << star_ok << "); " << secs << " s with " << hw_jobs()
    << " workers";
  verdict(4, endpoint_ok && star_ok, d.str());
  return profile;
}

void criterion5() {
  const auto grid = uniform_grid(91);
  const auto analytic = analytic_profile(
      [](double t) { return kLog3 * std::sin(t); }, grid);
  const auto sharp = check_interior_condition(analytic, 1e-12);
  const auto flat = analytic_profile([](double) { return 1.0; }, grid);
  const auto interior = check_interior_condition(flat, 1e-12);
  std::ostringstream d;
  d << "log3*sin profile: " << sharp.verdict_name() << ", max dev "
    << sharp.max_abs_dev_first << "; constant profile: "
    << interior.verdict_name();
  verdict(5,
          sharp.verdict == ConditionVerdict::boundary_sharp &&
              sharp.max_abs_dev_first < 1e-12 &&
              interior.verdict == ConditionVerdict::interior_guaranteed,
          d.str());
}

void criterion6() {
  bool ok = true;
  std::mt19937 rng(20260823);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const SlopeVector x{10 * unif(rng), 10 * unif(rng)};
    const SlopeVector y{10 * unif(rng), 10 * unif(rng)};
    ok = ok && std::abs(second_coordinate_identity_residual(x, y, unif(rng))) < 1e-12;
  }
  for (int i = 0; i <= 90; ++i)
    ok = ok && mixing_identity_residual(i * kHalfPi / 90) < 1e-12;
  for (int i = 0; i < 50; ++i) {
    const double beta = 0.7 * unif(rng);
    const double theta = beta + 0.05 + unif(rng) * (kHalfPi - beta - 0.05);
    const double t = 0.05 + 0.9 * unif(rng);
    const double h = 1e-6;
    const double fd = (tau(t + h, beta, theta) - tau(t - h, beta, theta)) / (2 * h);
    const double an = tau_prime(t, beta, theta);
    ok = ok && an > 0 && std::abs(an - fd) < 1e-6;
  }
  ok = ok && tau(0, 0.3, 1.2) == 0.3 && tau(1, 0.3, 1.2) == 1.2;
  verdict(6, ok,
          "second-coordinate and mixing identities < 1e-12; tau' matches "
          "finite differences within 1e-6 and stays positive");
}

void criterion7(const RateProfile& estimated51) {
  const auto grid = uniform_grid(91);
  const auto a = analytic_profile([](double t) { return kLog3 * std::sin(t); }, grid);
  const auto b = analytic_profile(
      [](double t) { return std::cos(t) + std::sin(t); }, grid);
  const auto va = concavity_audit(a, 1e-9);
  const auto vb = concavity_audit(b, 1e-9);
  const auto v51 = concavity_audit(estimated51, 0.1);
  const auto c51 = continuity_audit(estimated51, 2.0);

  BuildOptions opts;
  opts.jobs = hw_jobs();
  const auto s41 = build_spectrum(preset_example41(), 11, Binning::angular(90), 0, opts);
  const auto p41 =
      build_profile(s41, grid, {}, default_window(s41.meta().horizon));
  const auto c41 = continuity_audit(p41, 2.0);

  std::ostringstream d;
  d << "analytic concavity violations: " << va.size() << " and " << vb.size()
    << "; estimated rank-4 profile concavity violations at slack 0.1: "
    << v51.size() << "; continuity violations (example41, example51): "
    << c41.size() << ", " << c51.size();
  verdict(7,
          va.empty() && vb.empty() && v51.empty() && c41.empty() && c51.empty(),
          d.str());
}

void criterion8() {
  const auto tmp = std::filesystem::temp_directory_path();
  const auto cache = tmp / "slopegrowth_acceptance_cache";
  const auto out1 = tmp / "slopegrowth_acceptance_out1";
  const auto out2 = tmp / "slopegrowth_acceptance_out2";
  std::filesystem::remove_all(cache);

  RunConfig c;
  c.preset = "example31";
  c.l_max = 8;
  c.cache_dir = cache;
  const Report cold = run_pipeline(c);
  emit_report(cold, out1);
  const Report warm = run_pipeline(c);
  emit_report(warm, out2);

  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };
  const bool bytes_equal =
      slurp(out1 / "profile.csv") == slurp(out2 / "profile.csv") &&
      !slurp(out1 / "profile.csv").empty();

  const auto reloaded =
      SlopeSpectrum::load(out1 / "spectrum.cache", cold.spec.fingerprint());
  const bool roundtrip = reloaded == cold.spectrum;

  std::filesystem::remove_all(cache);
  std::filesystem::remove_all(out1);
  std::filesystem::remove_all(out2);

  std::ostringstream d;
  d << "warm-cache rerun byte-identical profile.csv (" << bytes_equal
    << "); spectrum save/load round trip (" << roundtrip
    << "); cache hit on rerun (" << warm.cache_hit << ")";
  verdict(8, bytes_equal && roundtrip && warm.cache_hit, d.str());
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  SlopeSpectrum big;
  const auto profile51 = criterion4(big);
  criterion5();
  criterion6();
  criterion7(profile51);
  criterion8();
  std::printf("%d of 8 criteria failed\n", g_failures);
  return g_failures;
}
