// Command-line front end: builds slope spectra for a preset or a spec file,
// estimates slope-resolved growth rates, and runs the structural audits.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>

#include "slopegrowth/report.hpp"
#include "slopegrowth/slope_calculus.hpp"

namespace {

using namespace slopegrowth;

struct CliOptions {
  RunConfig config;
  std::string binning_mode = "angular";
  int bins = 90;
  std::vector<double> eps_values;
  std::vector<int> window_pair;
  std::string out_dir;
  bool dedup = false;
};

void add_common(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--preset", o.config.preset,
                  "example31 | example41 | example51")
      ->capture_default_str();
  cmd->add_option("--rank", o.config.n_rank, "free-group rank for example51")
      ->capture_default_str();
  cmd->add_option("--spec-file", o.config.spec_file,
                  "group spec file (overrides --preset)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--lmax", o.config.l_max, "max abstract word length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--bins", o.bins, "angular bin count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--binning", o.binning_mode, "angular | paper-tan")
      ->check(CLI::IsMember({"angular", "paper-tan"}))
      ->capture_default_str();
  cmd->add_option("--grid", o.config.grid_points, "theta grid points")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
  cmd->add_option("--eps-schedule", o.eps_values,
                  "strictly decreasing eps values")
      ->delimiter(',');
  cmd->add_option("--min-samples", o.config.schedule.min_samples,
                  "min nonzero annuli kept by the eps schedule")
      ->capture_default_str();
  cmd->add_option("--window", o.window_pair,
                  "regression window lo,hi (annulus indices)")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--nmax", o.config.n_max,
                  "annulus table size (0 = completeness horizon)")
      ->capture_default_str();
  cmd->add_flag("--allow-beyond-horizon", o.config.allow_beyond_horizon,
                "permit nmax past the completeness horizon");
  cmd->add_flag("--dedup", o.dedup, "deduplicate image pairs");
  cmd->add_option("--jobs", o.config.jobs, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--cache", o.config.cache_dir,
                  "spectrum cache directory (or SLOPEGROWTH_CACHE_DIR)");
  cmd->add_option("--out", o.out_dir, "artifact output directory");
}

RunConfig materialize(CliOptions& o) {
  RunConfig c = o.config;
  if (o.binning_mode == "angular") {
    c.binning = Binning::angular(o.bins);
  } else {
    std::vector<double> grid;
    const auto thetas = uniform_grid(c.grid_points);
    grid.assign(thetas.begin(), thetas.end());
    c.binning = Binning::paper_tan(std::move(grid));
  }
  if (!o.eps_values.empty()) c.schedule.values = o.eps_values;
  if (!o.window_pair.empty())
    c.window = Window{o.window_pair[0], o.window_pair[1]};
  c.dedup = o.dedup ? Dedup::on : Dedup::off;
  return c;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int run_spectrum(CliOptions& o) {
  const RunConfig c = materialize(o);
  const Report rep = run_pipeline(c);
  const auto totals = rep.spectrum.totals();
  std::cout << "group " << rep.spec.name << " fingerprint "
            << rep.spec.fingerprint() << (rep.cache_hit ? " (cached)" : "")
            << "\nhorizon " << rep.spectrum.meta().horizon << ", n_max "
            << rep.spectrum.n_max() << ", skipped " << rep.spectrum.skipped()
            << "\n";
  for (int n = 1; n <= rep.spectrum.n_max(); ++n)
    std::cout << "n=" << n << " count=" << totals[n - 1]
              << (rep.spectrum.annulus_exact(n) ? "" : " (lower bound)")
              << "\n";
  if (!o.out_dir.empty()) emit_report(rep, o.out_dir);
  return kExitOk;
}

int run_profile(CliOptions& o) {
  const RunConfig c = materialize(o);
  const Report rep = run_pipeline(c);
  std::cout << rep.profile_csv();
  if (!o.out_dir.empty()) emit_report(rep, o.out_dir);
  return rep.low_data_points > 0 ? kExitLowData : kExitOk;
}

int run_maximizer(CliOptions& o) {
  const RunConfig c = materialize(o);
  const Report rep = run_pipeline(c);
  std::cout << "theta_star = " << fmt(rep.theta_star.theta)
            << "\nvalue = " << fmt(rep.theta_star.value)
            << "\nglobal rate = "
            << (rep.global.neg_inf ? "-inf" : fmt(rep.global.value)) << "\n";
  if (!o.out_dir.empty()) emit_report(rep, o.out_dir);
  if (!std::isfinite(rep.theta_star.value)) return kExitLowData;
  return rep.low_data_points > 0 ? kExitLowData : kExitOk;
}

int run_audit(CliOptions& o) {
  const RunConfig c = materialize(o);
  const Report rep = run_pipeline(c);
  std::cout << "condition: " << rep.condition.verdict_name() << "\n"
            << "concavity violations: " << rep.concavity.size() << "\n"
            << "continuity violations: " << rep.continuity.size() << "\n"
            << "positivity violations: " << rep.positivity.size() << "\n"
            << "cos/sin bound: " << (rep.cos_sin.pass ? "pass" : "fail")
            << " (worst margin " << fmt(rep.cos_sin.worst_margin)
            << " at theta " << fmt(rep.cos_sin.worst_theta) << ")\n";
  if (!o.out_dir.empty()) emit_report(rep, o.out_dir);
  return rep.exit_code;
}

int run_formula(CliOptions& o, double theta, bool compare) {
  const double lo = std::numbers::pi / 4, hi = std::numbers::pi / 2;
  if (theta >= 0) {
    std::cout << fmt(example51_formula(o.config.n_rank, theta)) << "\n";
    return kExitOk;
  }
  RunConfig c = materialize(o);
  c.preset = "example51";
  c.spec_file.clear();
  Report rep;
  if (compare) rep = run_pipeline(c);
  std::cout << "theta,formula" << (compare ? ",estimated" : "") << "\n";
  for (int i = 0; i <= 45; ++i) {
    const double t = lo + (hi - lo) * i / 45;
    std::cout << fmt(t) << ',' << fmt(example51_formula(c.n_rank, t));
    if (compare) std::cout << ',' << fmt(rep.profile.value_at(t));
    std::cout << "\n";
  }
  if (compare && rep.low_data_points > 0) return kExitLowData;
  return kExitOk;
}

int run_preset_dump(const std::string& name, int rank) {
  std::cout << make_preset(name, rank).canonical_text();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slope-resolved growth rates of product actions"};
  app.require_subcommand(1);

  CliOptions o;
  auto* spectrum = app.add_subcommand("spectrum", "build annulus counts");
  auto* profile = app.add_subcommand("profile", "theta -> rate profile CSV");
  auto* maximizer = app.add_subcommand("maximizer", "locate theta_star");
  auto* audit = app.add_subcommand("audit", "structural audits");
  for (auto* cmd : {spectrum, profile, maximizer, audit}) add_common(cmd, o);

  auto* formula =
      app.add_subcommand("formula", "closed-form rank-N rate on [pi/4, pi/2]");
  double formula_theta = -1;
  bool formula_compare = false;
  add_common(formula, o);
  formula->add_option("--theta", formula_theta, "single evaluation point");
  formula->add_flag("--compare", formula_compare,
                    "also estimate rates from enumeration");

  auto* preset = app.add_subcommand("preset", "print a preset spec file");
  std::string preset_name = "example31";
  int preset_rank = 4;
  preset->add_option("name", preset_name, "preset name")->required();
  preset->add_option("--rank", preset_rank, "rank for example51");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : slopegrowth::kExitUsage;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(o);
    if (profile->parsed()) return run_profile(o);
    if (maximizer->parsed()) return run_maximizer(o);
    if (audit->parsed()) return run_audit(o);
    if (formula->parsed()) return run_formula(o, formula_theta, formula_compare);
    if (preset->parsed()) return run_preset_dump(preset_name, preset_rank);
  } catch (const slopegrowth::low_data_error& e) {
    std::cerr << "low data: " << e.what() << "\n";
    return slopegrowth::kExitLowData;
  } catch (const slopegrowth::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return slopegrowth::kExitUsage;
  } catch (const slopegrowth::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return slopegrowth::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return slopegrowth::kExitUsage;
}
