#include "slopegrowth/report.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "slopegrowth/slope_calculus.hpp"

namespace slopegrowth {

namespace {

using ordered_json = nlohmann::ordered_json;

// Fixed-format double for CSV cells; locale-free and round-trip exact.
std::string csv_num(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json schedule_json(const EpsSchedule& s) {
  return {{"values", s.values}, {"min_samples", s.min_samples}};
}

ordered_json binning_json(const Binning& b) {
  ordered_json j{{"mode", b.mode_name()}};
  if (b.mode == BinningMode::angular)
    j["bins"] = b.bins;
  else
    j["grid"] = b.grid;
  return j;
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  if (!c.spec_file.empty())
    j["spec_file"] = c.spec_file.string();
  else
    j["preset"] = c.preset;
  if (c.preset == "example51") j["n_rank"] = c.n_rank;
  j["l_max"] = c.l_max;
  j["binning"] = binning_json(c.binning);
  j["n_max"] = c.n_max;
  j["allow_beyond_horizon"] = c.allow_beyond_horizon;
  j["dedup"] = c.dedup == Dedup::on;
  j["jobs"] = c.jobs;
  j["grid_points"] = c.grid_points;
  j["eps_schedule"] = schedule_json(c.schedule);
  if (c.window) j["window"] = {{"lo", c.window->lo}, {"hi", c.window->hi}};
  j["concavity_slack"] = c.concavity_slack;
  j["continuity_lipschitz"] = c.continuity_lipschitz;
  j["positivity_margin_lo"] = c.positivity_margin_lo;
  j["condition_tolerance"] = c.condition_tolerance;
  j["cos_sin_slack"] = c.cos_sin_slack;
  return j;
}

ordered_json estimate_json(const RateEstimate& e) {
  ordered_json j;
  j["neg_inf"] = e.neg_inf;
  j["value"] = e.neg_inf ? ordered_json(nullptr) : ordered_json(e.value);
  j["stderr"] = e.stderr_;
  j["samples"] = e.samples;
  j["max_quotient"] =
      std::isfinite(e.max_quotient) ? ordered_json(e.max_quotient) : nullptr;
  j["eps_used"] = e.eps_used;
  j["window"] = {{"lo", e.window.lo}, {"hi", e.window.hi}};
  return j;
}

const char* status_name(PointStatus s) {
  switch (s) {
    case PointStatus::finite:
      return "finite";
    case PointStatus::neg_inf:
      return "neg_inf";
    default:
      return "low_data";
  }
}

}  // namespace

std::string RunConfig::to_json() const { return config_json(*this).dump(2); }

ProductGroupSpec resolve_spec(const RunConfig& config) {
  if (!config.spec_file.empty()) return load_spec_file(config.spec_file);
  return make_preset(config.preset, config.n_rank);
}

std::filesystem::path cache_path(const RunConfig& config,
                                 const ProductGroupSpec& spec) {
  std::filesystem::path dir = config.cache_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("SLOPEGROWTH_CACHE_DIR")) dir = env;
  }
  if (dir.empty()) return {};
  std::ostringstream name;
  name << spec.fingerprint() << "-L" << config.l_max << "-"
       << config.binning.mode_name() << config.binning.bin_count();
  if (config.n_max != 0) name << "-n" << config.n_max;
  name << ".cache";
  return dir / name.str();
}

Report run_pipeline(const RunConfig& config) {
  Report rep;
  rep.config = config;
  rep.spec = resolve_spec(config);

  const std::int64_t horizon = completeness_horizon(rep.spec, config.l_max);
  const int n_max =
      config.n_max != 0 ? config.n_max : static_cast<int>(horizon);

  const auto cache = cache_path(config, rep.spec);
  if (!cache.empty() && std::filesystem::exists(cache)) {
    try {
      SlopeSpectrum loaded = SlopeSpectrum::load(cache, rep.spec.fingerprint());
      if (loaded.meta().l_max == config.l_max && loaded.n_max() == n_max &&
          loaded.binning() == config.binning &&
          loaded.meta().dedup == config.dedup) {
        rep.spectrum = std::move(loaded);
        rep.cache_hit = true;
      }
    } catch (const format_error&) {
      // stale or corrupt cache entry; rebuild below
    }
  }
  if (!rep.cache_hit) {
    BuildOptions opts;
    opts.dedup = config.dedup;
    opts.jobs = config.jobs;
    opts.allow_beyond_horizon = config.allow_beyond_horizon;
    rep.spectrum = build_spectrum(rep.spec, config.l_max, config.binning,
                                  config.n_max, opts);
    if (!cache.empty()) {
      std::filesystem::create_directories(cache.parent_path());
      rep.spectrum.save(cache);
    }
  }

  Window window =
      config.window ? *config.window
                    : default_window(std::min<std::int64_t>(horizon, n_max));
  if (window.hi > rep.spectrum.n_max())
    throw config_error("window extends past the spectrum n_max");

  const auto grid = uniform_grid(config.grid_points);
  rep.profile = build_profile(rep.spectrum, grid, config.schedule, window);
  for (const auto& pt : rep.profile.points)
    if (pt.status == PointStatus::low_data) ++rep.low_data_points;

  try {
    rep.global = delta_global(rep.spectrum, window);
  } catch (const low_data_error& e) {
    rep.global = e.partial;
    ++rep.low_data_points;
  }

  try {
    rep.theta_star = find_theta_star(rep.profile);
  } catch (const std::domain_error&) {
    rep.theta_star = {0.0, -std::numeric_limits<double>::infinity()};
  }

  rep.condition = check_interior_condition(rep.profile, config.condition_tolerance);
  rep.concavity = concavity_audit(rep.profile, config.concavity_slack);
  rep.continuity = continuity_audit(rep.profile, config.continuity_lipschitz);
  rep.positivity =
      positivity_audit(rep.profile, config.positivity_margin_lo,
                       std::numbers::pi / 2 - config.positivity_margin_lo);
  rep.cos_sin = check_cos_sin_bound(rep.profile, config.cos_sin_slack);

  bool band_set = false;
  for (const auto& pt : rep.profile.points) {
    if (pt.status != PointStatus::finite) continue;
    if (!band_set) rep.band_lo = pt.theta;
    rep.band_hi = pt.theta;
    band_set = true;
  }
  if (band_set)
    rep.regular_growth = regular_growth_check(
        rep.spectrum, rep.band_lo, rep.band_hi, config.schedule.values.back(),
        window);

  if (rep.spec.name == "example51") {
    for (const auto& pt : rep.profile.points) {
      if (pt.theta < std::numbers::pi / 4) continue;
      Report::FormulaRow row;
      row.theta = pt.theta;
      row.closed_form = example51_formula(config.n_rank, pt.theta);
      row.estimated = pt.status == PointStatus::finite
                          ? pt.estimate.value
                          : -std::numeric_limits<double>::infinity();
      rep.formula_rows.push_back(row);
    }
  }

  const bool audit_fail = !rep.concavity.empty() || !rep.continuity.empty() ||
                          !rep.positivity.empty() || !rep.cos_sin.pass;
  if (audit_fail)
    rep.exit_code = kExitAuditFail;
  else if (rep.low_data_points > 0)
    rep.exit_code = kExitLowData;
  else
    rep.exit_code = kExitOk;
  return rep;
}

std::string Report::to_json() const {
  ordered_json j;
  j["config"] = config_json(config);
  j["spec"] = {{"name", spec.name},
               {"fingerprint", spec.fingerprint()},
               {"lambda", spec.lambda}};
  j["spectrum"] = {{"l_max", spectrum.meta().l_max},
                   {"n_max", spectrum.n_max()},
                   {"horizon", spectrum.meta().horizon},
                   {"dedup", spectrum.meta().dedup == Dedup::on},
                   {"skipped", spectrum.skipped()},
                   {"cache_hit", cache_hit}};
  j["global"] = estimate_json(global);
  j["theta_star"] = {{"theta", theta_star.theta},
                     {"value", std::isfinite(theta_star.value)
                                   ? ordered_json(theta_star.value)
                                   : nullptr}};
  ordered_json cond{{"verdict", condition.verdict_name()},
                    {"tolerance", condition.tolerance},
                    {"max_abs_dev_first", condition.max_abs_dev_first},
                    {"max_abs_dev_second", condition.max_abs_dev_second}};
  if (condition.witness_theta) cond["witness_theta"] = *condition.witness_theta;
  if (condition.witness_beta) cond["witness_beta"] = *condition.witness_beta;
  j["condition"] = cond;
  j["audits"] = {{"concavity_violations", concavity.size()},
                 {"continuity_violations", continuity.size()},
                 {"positivity_violations", positivity.size()},
                 {"cos_sin_pass", cos_sin.pass},
                 {"cos_sin_worst_theta", cos_sin.worst_theta},
                 {"cos_sin_worst_margin",
                  std::isfinite(cos_sin.worst_margin)
                      ? ordered_json(cos_sin.worst_margin)
                      : nullptr},
                 {"regular_growth", regular_growth},
                 {"band_lo", band_lo},
                 {"band_hi", band_hi}};
  if (!formula_rows.empty()) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : formula_rows)
      rows.push_back({{"theta", r.theta},
                      {"closed_form", r.closed_form},
                      {"estimated", std::isfinite(r.estimated)
                                        ? ordered_json(r.estimated)
                                        : nullptr}});
    j["formula_comparison"] = rows;
  }
  ordered_json pts = ordered_json::array();
  for (const auto& pt : profile.points) {
    ordered_json p{{"theta", pt.theta}, {"status", status_name(pt.status)}};
    if (pt.status != PointStatus::neg_inf) {
      p["value"] = pt.estimate.value;
      p["stderr"] = pt.estimate.stderr_;
      p["eps_used"] = pt.estimate.eps_used;
      p["samples"] = pt.estimate.samples;
    }
    pts.push_back(p);
  }
  j["profile"] = pts;
  j["low_data_points"] = low_data_points;
  j["exit_code"] = exit_code;
  return j.dump(2);
}

std::string Report::profile_csv() const {
  std::ostringstream out;
  out << "theta,delta,stderr,neg_inf_flag,eps_used,n_lo,n_hi\n";
  for (const auto& pt : profile.points) {
    const bool ninf = pt.status == PointStatus::neg_inf;
    out << csv_num(pt.theta) << ','
        << (ninf ? "-inf" : csv_num(pt.estimate.value)) << ','
        << csv_num(pt.estimate.stderr_) << ',' << (ninf ? 1 : 0) << ','
        << csv_num(pt.estimate.eps_used) << ',' << profile.window.lo << ','
        << profile.window.hi << '\n';
  }
  return out.str();
}

std::string Report::plotdata_csv() const {
  std::ostringstream out;
  out << "n,total,exact\n";
  const auto totals = spectrum.totals();
  for (int n = 1; n <= spectrum.n_max(); ++n)
    out << n << ',' << totals[n - 1] << ','
        << (spectrum.annulus_exact(n) ? 1 : 0) << '\n';
  return out.str();
}

void emit_report(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto write = [&](const char* name, const std::string& body) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw io_error(std::string("cannot write ") + name);
    out << body;
    if (!out) throw io_error(std::string("short write to ") + name);
  };
  write("profile.csv", report.profile_csv());
  write("plotdata.csv", report.plotdata_csv());
  write("report.json", report.to_json() + "\n");
  write("condition.txt", report.condition.to_text());
  report.spectrum.save(dir / "spectrum.cache");

  const auto now = std::chrono::system_clock::now();
  std::ostringstream stamp;
  stamp << "emitted = "
        << std::chrono::duration_cast<std::chrono::seconds>(
               now.time_since_epoch())
               .count()
        << "\nbuilt = " << report.spectrum.meta().built << '\n';
  write("run.stamp", stamp.str());
}

}  // namespace slopegrowth
