#ifndef SLOPEGROWTH_REPORT_HPP
#define SLOPEGROWTH_REPORT_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "slopegrowth/rates.hpp"

namespace slopegrowth {

// Fully materialized run configuration; every default is resolved before the
// pipeline starts so the serialized copy in report.json reproduces the run.
struct RunConfig {
  std::string preset = "example31";  // empty when spec_file is set
  int n_rank = 4;                    // example51 only
  std::filesystem::path spec_file;   // overrides preset when nonempty

  int l_max = 9;
  Binning binning = Binning::angular(90);
  int n_max = 0;  // 0 = completeness horizon
  bool allow_beyond_horizon = false;
  Dedup dedup = Dedup::off;
  int jobs = 1;

  int grid_points = 91;
  EpsSchedule schedule;
  std::optional<Window> window;  // default: top half of the horizon

  double concavity_slack = 0.02;
  double continuity_lipschitz = 2.0;
  double positivity_margin_lo = 0.05;  // audited band (lo, pi/2 - lo)
  double condition_tolerance = 0.02;
  double cos_sin_slack = 0.05;

  std::filesystem::path cache_dir;  // empty = no cache
  std::string to_json() const;
};

// Exit codes shared by the pipeline and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitLowData = 3;
inline constexpr int kExitAuditFail = 4;

struct Report {
  RunConfig config;
  ProductGroupSpec spec;
  SlopeSpectrum spectrum;
  bool cache_hit = false;

  RateProfile profile;
  RateEstimate global;
  ThetaStar theta_star;
  ConditionReport condition;

  std::vector<ConcavityViolation> concavity;
  std::vector<ContinuityViolation> continuity;
  std::vector<PositivityViolation> positivity;
  CosSinResult cos_sin;

  // Regular growth over the finite band of the profile (empty band = false).
  bool regular_growth = false;
  double band_lo = 0;
  double band_hi = 0;

  // Estimated vs closed-form rate, filled for presets with a formula.
  struct FormulaRow {
    double theta = 0;
    double closed_form = 0;
    double estimated = 0;  // -infinity when the profile is not finite there
  };
  std::vector<FormulaRow> formula_rows;

  int low_data_points = 0;
  int exit_code = kExitOk;

  std::string to_json() const;
  std::string profile_csv() const;
  std::string plotdata_csv() const;
};

ProductGroupSpec resolve_spec(const RunConfig& config);

// Cache path: <cache_dir>/<fingerprint>-L<l_max>-<mode>.cache. Honors the
// SLOPEGROWTH_CACHE_DIR environment variable when config.cache_dir is empty.
std::filesystem::path cache_path(const RunConfig& config,
                                 const ProductGroupSpec& spec);

Report run_pipeline(const RunConfig& config);

// Writes profile.csv, plotdata.csv, report.json, condition.txt and
// spectrum.cache into dir. CSV bytes depend only on the report contents;
// wall-clock stamps go to the run.stamp sidecar so reruns are byte-identical.
void emit_report(const Report& report, const std::filesystem::path& dir);

}  // namespace slopegrowth

#endif
