#ifndef SLOPEGROWTH_RATES_HPP
#define SLOPEGROWTH_RATES_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slopegrowth/spectrum.hpp"

namespace slopegrowth {

struct Window {
  int lo = 0;
  int hi = 0;
};

// Top half of the completeness horizon.
Window default_window(std::int64_t horizon);

// A finite-horizon growth-rate estimate: least-squares slope of log(count)
// over the annulus window, with the max log(count)/n quotient kept as a
// limsup diagnostic. NEG_INFINITY is an explicit flag, never a large
// negative float.
struct RateEstimate {
  double value = 0;
  bool neg_inf = false;
  double stderr_ = 0;
  Window window;
  int samples = 0;        // nonzero-count annuli used
  double max_quotient = 0;
  double eps_used = 0;    // set by delta_theta; 0 elsewhere

  bool finite() const { return !neg_inf; }
  static RateEstimate negative_infinity(Window w, double eps = 0);
};

struct EpsCurvePoint {
  double eps = 0;
  int samples = 0;
  std::optional<RateEstimate> estimate;  // absent when under 3 samples
};

// Fewer than 3 nonzero annuli (but more than none): the estimate cannot be
// regressed; the partial data rides along.
struct low_data_error : std::runtime_error {
  low_data_error(const std::string& what, RateEstimate partial_,
                 std::vector<EpsCurvePoint> curve_ = {})
      : std::runtime_error(what), partial(partial_), curve(std::move(curve_)) {}
  RateEstimate partial;
  std::vector<EpsCurvePoint> curve;
};

// counts[0] corresponds to annulus n = 1; window bounds are inclusive.
RateEstimate estimate_rate(std::span<const std::int64_t> counts, Window window);

RateEstimate delta_global(const SlopeSpectrum& s, Window window);
RateEstimate delta_eps_theta(const SlopeSpectrum& s, double eps, double theta,
                             Window window);

struct EpsSchedule {
  std::vector<double> values{0.4, 0.2, 0.1, 0.05};  // strictly decreasing
  int min_samples = 4;
};

// liminf-over-eps proxy: the estimate at the smallest scheduled eps that
// keeps at least min_samples nonzero annuli. When the smallest eps sees no
// elements at all the liminf collapses and NEG_INFINITY is returned even if
// larger eps windows were populated.
RateEstimate delta_theta(const SlopeSpectrum& s, double theta,
                         const EpsSchedule& schedule, Window window,
                         std::vector<EpsCurvePoint>* curve = nullptr);

enum class PointStatus { finite, neg_inf, low_data };

struct ProfilePoint {
  double theta = 0;
  RateEstimate estimate;
  PointStatus status = PointStatus::neg_inf;
};

// Sampled theta -> estimated delta_theta map.
struct RateProfile {
  std::vector<ProfilePoint> points;  // sorted by theta, endpoints included
  EpsSchedule schedule;
  Window window;
  std::string fingerprint;
  // Set when the profile comes from a closed form; off-grid evaluation then
  // uses the formula instead of interpolation, so audits on analytic
  // profiles are exact.
  std::function<double(double)> analytic;

  // Piecewise-linear value at theta; -infinity outside the finite band or
  // between non-finite grid points.
  double value_at(double theta) const;
  double stderr_at(double theta) const;
  bool finite_at(double theta) const;
};

std::vector<double> uniform_grid(int points = 91);

RateProfile build_profile(const SlopeSpectrum& s, std::span<const double> grid,
                          const EpsSchedule& schedule, Window window);

// Profile sampled from a closed-form rate function (may return -infinity);
// stderr is zero everywhere.
RateProfile analytic_profile(const std::function<double(double)>& f,
                             std::span<const double> grid);

// Growth indicator Psi(x) = ||x|| * delta_{theta(x)} with the profile
// linearly interpolated; homogeneous by construction. Returns -infinity when
// the profile is not finite at theta(x).
double psi(const RateProfile& profile, double x1, double x2);

struct ConcavityViolation {
  double alpha = 0, beta = 0, t = 0;
  double lhs = 0, rhs = 0;
};

// Midpoint concavity check of Psi over all finite grid direction pairs and
// t in {0.25, 0.5, 0.75}. Empty result = concave within slack.
std::vector<ConcavityViolation> concavity_audit(const RateProfile& profile,
                                                double slack);

struct ThetaStar {
  double theta = 0;
  double value = 0;
};

// Grid argmax refined by golden-section search on the interpolant; ties go
// to the smaller theta. Throws std::domain_error when nothing is finite.
ThetaStar find_theta_star(const RateProfile& profile);

enum class ConditionVerdict { interior_guaranteed, boundary_sharp, not_satisfied };

struct ConditionRow {
  double angle = 0;   // theta for the first inequality, beta for the second
  double ratio = 0;   // -infinity encoded as -HUGE_VAL here (display only)
  double bound = 0;   // 1/sin(angle)
  bool strict = false;
  bool equal = false;
};

struct ConditionReport {
  ConditionVerdict verdict = ConditionVerdict::not_satisfied;
  std::optional<double> witness_theta;
  std::optional<double> witness_beta;
  double max_abs_dev_first = 0;   // max |delta_{pi/2}/delta_theta - 1/sin theta|
  double max_abs_dev_second = 0;
  std::vector<ConditionRow> first_rows;
  std::vector<ConditionRow> second_rows;
  double tolerance = 0;

  std::string verdict_name() const;
  std::string to_text() const;  // verdict on the first line
};

// Interior-maximizer condition: delta_{pi/2}/delta_theta < 1/sin(theta) and
// delta_0/delta_{pi/2-beta} < 1/sin(beta) for some interior grid theta, beta.
ConditionReport check_interior_condition(const RateProfile& profile,
                                         double tolerance);

enum class BoundarySentinelPolicy {
  propagate_neg_inf,  // a -infinity endpoint drives its term to -infinity
  treat_as_zero,
};

struct CosSinResult {
  bool pass = true;
  double worst_theta = 0;
  double worst_margin = 0;  // min over grid of delta_theta - bound
};

// delta_theta >= delta_0 cos(theta) + delta_{pi/2} sin(theta) - slack on all
// finite grid points.
CosSinResult check_cos_sin_bound(
    const RateProfile& profile, double slack,
    BoundarySentinelPolicy policy = BoundarySentinelPolicy::propagate_neg_inf);

// Definition-2.1 style check: slope-annulus counts stay populated in the top
// half of the window for every sampled theta in [a1, a2].
bool regular_growth_check(const SlopeSpectrum& s, double a1, double a2,
                          double eps, Window window);

struct ContinuityViolation {
  double theta_a = 0, theta_b = 0;
  double gap = 0, bound = 0;
};

// Adjacent finite grid values must differ by at most
// lipschitz * dtheta + 2 * (stderr_a + stderr_b).
std::vector<ContinuityViolation> continuity_audit(const RateProfile& profile,
                                                  double lipschitz);

struct PositivityViolation {
  double theta = 0;
  double value = 0;
  double stderr_ = 0;
};

// Finite grid points strictly inside (lo, hi) must satisfy value > stderr.
std::vector<PositivityViolation> positivity_audit(const RateProfile& profile,
                                                  double lo, double hi);

}  // namespace slopegrowth

#endif
