#include "slopegrowth/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace slopegrowth {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace

Window default_window(std::int64_t horizon) {
  const int hi = static_cast<int>(horizon);
  return Window{std::max(1, hi / 2 + 1), hi};
}

RateEstimate RateEstimate::negative_infinity(Window w, double eps) {
  RateEstimate e;
  e.neg_inf = true;
  e.value = kNegInf;
  e.window = w;
  e.max_quotient = kNegInf;
  e.eps_used = eps;
  return e;
}

RateEstimate estimate_rate(std::span<const std::int64_t> counts, Window window) {
  if (window.lo < 1 || window.lo >= window.hi ||
      window.hi > static_cast<int>(counts.size()))
    throw input_error("regression window outside the count range");

  std::vector<std::pair<double, double>> pts;  // (n, log count)
  double max_q = kNegInf;
  for (int n = window.lo; n <= window.hi; ++n) {
    const std::int64_t c = counts[n - 1];
    if (c < 0) throw input_error("negative count");
    if (c == 0) continue;
    const double y = std::log(static_cast<double>(c));
    pts.emplace_back(static_cast<double>(n), y);
    max_q = std::max(max_q, y / n);
  }

  if (pts.empty()) return RateEstimate::negative_infinity(window);

  RateEstimate e;
  e.window = window;
  e.samples = static_cast<int>(pts.size());
  e.max_quotient = max_q;

  if (pts.size() < 3) {
    if (pts.size() == 2)
      e.value = (pts[1].second - pts[0].second) / (pts[1].first - pts[0].first);
    else
      e.value = max_q;
    throw low_data_error("fewer than 3 nonzero annuli in the window", e);
  }

  double sx = 0, sy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / pts.size(), my = sy / pts.size();
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  e.value = sxy / sxx;
  double sse = 0;
  for (auto [x, y] : pts) {
    const double r = y - (my + e.value * (x - mx));
    sse += r * r;
  }
  e.stderr_ = pts.size() > 2
                  ? std::sqrt(sse / (static_cast<double>(pts.size()) - 2) / sxx)
                  : 0.0;
  return e;
}

RateEstimate delta_global(const SlopeSpectrum& s, Window window) {
  const auto totals = s.totals();
  return estimate_rate(totals, window);
}

namespace {

std::vector<std::int64_t> slope_counts(const SlopeSpectrum& s, double eps,
                                       double theta, int hi) {
  std::vector<std::int64_t> counts(hi);
  for (int n = 1; n <= hi; ++n)
    counts[n - 1] = s.slope_annulus_count(eps, theta, n);
  return counts;
}

}  // namespace

RateEstimate delta_eps_theta(const SlopeSpectrum& s, double eps, double theta,
                             Window window) {
  if (window.hi > s.n_max()) throw input_error("window beyond spectrum n_max");
  return estimate_rate(slope_counts(s, eps, theta, window.hi), window);
}

RateEstimate delta_theta(const SlopeSpectrum& s, double theta,
                         const EpsSchedule& schedule, Window window,
                         std::vector<EpsCurvePoint>* curve) {
  if (schedule.values.empty()) throw config_error("empty eps schedule");
  for (std::size_t i = 1; i < schedule.values.size(); ++i)
    if (schedule.values[i] >= schedule.values[i - 1])
      throw config_error("eps schedule must be strictly decreasing");
  const int min_samples = std::max(3, schedule.min_samples);

  std::vector<EpsCurvePoint> pts;
  for (double eps : schedule.values) {
    const auto counts = slope_counts(s, eps, theta, window.hi);
    EpsCurvePoint p;
    p.eps = eps;
    for (int n = window.lo; n <= window.hi; ++n)
      if (counts[n - 1] > 0) ++p.samples;
    if (p.samples >= 3) {
      p.estimate = estimate_rate(counts, window);
      p.estimate->eps_used = eps;
    }
    pts.push_back(std::move(p));
  }
  if (curve) *curve = pts;

  // Empty at the smallest eps: the liminf proxy is -infinity regardless of
  // what wider slope windows saw.
  if (pts.back().samples == 0)
    return RateEstimate::negative_infinity(window, pts.back().eps);

  for (auto it = pts.rbegin(); it != pts.rend(); ++it)
    if (it->samples >= min_samples && it->estimate) return *it->estimate;

  RateEstimate partial;
  partial.window = window;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it)
    if (it->estimate) {
      partial = *it->estimate;
      break;
    }
  throw low_data_error("no eps in the schedule keeps enough nonzero annuli",
                       partial, pts);
}

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw input_error("grid needs at least 2 points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = static_cast<double>(i) * kHalfPi / (points - 1);
  g.front() = 0;
  g.back() = kHalfPi;
  return g;
}

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.size() < 2) throw input_error("grid needs at least 2 points");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw input_error("theta grid must be sorted");
  if (grid.front() != 0 || grid.back() != kHalfPi)
    throw input_error("theta grid must include both endpoints 0 and pi/2");
}

}  // namespace

RateProfile build_profile(const SlopeSpectrum& s, std::span<const double> grid,
                          const EpsSchedule& schedule, Window window) {
  check_grid(grid);
  RateProfile p;
  p.schedule = schedule;
  p.window = window;
  p.fingerprint = s.fingerprint();
  p.points.reserve(grid.size());
  for (double theta : grid) {
    ProfilePoint pt;
    pt.theta = theta;
    try {
      pt.estimate = delta_theta(s, theta, schedule, window);
      pt.status = pt.estimate.neg_inf ? PointStatus::neg_inf : PointStatus::finite;
    } catch (const low_data_error& e) {
      pt.estimate = e.partial;
      pt.status = PointStatus::low_data;
    }
    p.points.push_back(pt);
  }
  return p;
}

RateProfile analytic_profile(const std::function<double(double)>& f,
                             std::span<const double> grid) {
  check_grid(grid);
  RateProfile p;
  p.analytic = f;
  p.points.reserve(grid.size());
  for (double theta : grid) {
    ProfilePoint pt;
    pt.theta = theta;
    const double v = f(theta);
    if (std::isinf(v) && v < 0) {
      pt.estimate = RateEstimate::negative_infinity({});
      pt.status = PointStatus::neg_inf;
    } else {
      pt.estimate.value = v;
      pt.status = PointStatus::finite;
    }
    p.points.push_back(pt);
  }
  return p;
}

namespace {

// Index of the grid segment containing theta, and exact-hit detection.
struct Locate {
  int seg = -1;    // points[seg].theta <= theta <= points[seg+1].theta
  int exact = -1;  // grid index when theta matches exactly
};

Locate locate(const RateProfile& p, double theta) {
  const auto& pts = p.points;
  if (pts.empty() || theta < pts.front().theta - 1e-15 ||
      theta > pts.back().theta + 1e-15)
    throw input_error("theta outside the profile grid range");
  Locate loc;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (theta == pts[i].theta) {
      loc.exact = static_cast<int>(i);
      return loc;
    }
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (theta >= pts[i].theta && theta <= pts[i + 1].theta) {
      loc.seg = static_cast<int>(i);
      return loc;
    }
  }
  // clamp tiny excursions past the endpoints
  loc.exact = theta < pts.front().theta ? 0 : static_cast<int>(pts.size()) - 1;
  return loc;
}

double point_value(const ProfilePoint& pt) {
  return pt.status == PointStatus::finite ? pt.estimate.value : kNegInf;
}

}  // namespace

double RateProfile::value_at(double theta) const {
  const Locate loc = locate(*this, theta);
  if (analytic) {
    const double v = analytic(loc.exact >= 0 ? points[loc.exact].theta : theta);
    return std::isinf(v) && v < 0 ? kNegInf : v;
  }
  if (loc.exact >= 0) return point_value(points[loc.exact]);
  const auto& a = points[loc.seg];
  const auto& b = points[loc.seg + 1];
  if (a.status != PointStatus::finite || b.status != PointStatus::finite)
    return kNegInf;
  const double t = (theta - a.theta) / (b.theta - a.theta);
  return a.estimate.value + t * (b.estimate.value - a.estimate.value);
}

double RateProfile::stderr_at(double theta) const {
  const Locate loc = locate(*this, theta);
  if (loc.exact >= 0) return points[loc.exact].estimate.stderr_;
  const auto& a = points[loc.seg];
  const auto& b = points[loc.seg + 1];
  const double t = (theta - a.theta) / (b.theta - a.theta);
  return a.estimate.stderr_ + t * (b.estimate.stderr_ - a.estimate.stderr_);
}

bool RateProfile::finite_at(double theta) const {
  return std::isfinite(value_at(theta));
}

double psi(const RateProfile& profile, double x1, double x2) {
  if (x1 < 0 || x2 < 0) throw input_error("psi expects nonnegative coordinates");
  if (x1 == 0 && x2 == 0)
    throw std::domain_error("psi undefined at the origin");
  const double theta = std::atan2(x2, x1);
  const double v = profile.value_at(theta);
  if (!std::isfinite(v)) return kNegInf;
  return std::hypot(x1, x2) * v;
}

std::vector<ConcavityViolation> concavity_audit(const RateProfile& profile,
                                                double slack) {
  if (slack < 0) throw input_error("slack must be nonnegative");
  std::vector<ConcavityViolation> out;
  std::vector<const ProfilePoint*> finite;
  for (const auto& pt : profile.points)
    if (pt.status == PointStatus::finite) finite.push_back(&pt);
  static constexpr double ts[] = {0.25, 0.5, 0.75};
  for (std::size_t i = 0; i < finite.size(); ++i) {
    for (std::size_t j = i + 1; j < finite.size(); ++j) {
      const double a = finite[i]->theta, b = finite[j]->theta;
      const double xa1 = std::cos(a), xa2 = std::sin(a);
      const double xb1 = std::cos(b), xb2 = std::sin(b);
      const double pa = finite[i]->estimate.value;  // psi(H_a) = delta_a
      const double pb = finite[j]->estimate.value;
      for (double t : ts) {
        const double z1 = t * xa1 + (1 - t) * xb1;
        const double z2 = t * xa2 + (1 - t) * xb2;
        const double pz = psi(profile, z1, z2);
        if (!std::isfinite(pz)) continue;  // only audit finite triples
        const double rhs = t * pa + (1 - t) * pb;
        if (pz < rhs - slack)
          out.push_back({a, b, t, pz, rhs});
      }
    }
  }
  return out;
}

ThetaStar find_theta_star(const RateProfile& profile) {
  const auto& pts = profile.points;
  int best = -1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].status != PointStatus::finite) continue;
    if (best < 0 || pts[i].estimate.value > pts[best].estimate.value)
      best = static_cast<int>(i);
  }
  if (best < 0)
    throw std::domain_error("profile has no finite value; no maximizer");

  // Refine over the bracket of adjacent grid points; the interpolant is
  // piecewise linear so the optimum stays at a grid point, but the search
  // confirms it and resolves plateau ties toward smaller theta.
  const double lo = pts[std::max(best - 1, 0)].theta;
  const double hi = pts[std::min<std::size_t>(best + 1, pts.size() - 1)].theta;
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  const auto val = [&](double x) { return profile.value_at(x); };
  for (int it = 0; it < 120 && b - a > 1e-12; ++it) {
    if (val(c) >= val(d))
      b = d;
    else
      a = c;
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  const double mid = 0.5 * (a + b);
  ThetaStar star{pts[best].theta, pts[best].estimate.value};
  if (val(mid) > star.value ||
      (val(mid) == star.value && mid < star.theta)) {
    star.theta = mid;
    star.value = val(mid);
  }
  return star;
}

std::string ConditionReport::verdict_name() const {
  switch (verdict) {
    case ConditionVerdict::interior_guaranteed:
      return "interior-guaranteed";
    case ConditionVerdict::boundary_sharp:
      return "boundary-sharp";
    default:
      return "not-satisfied";
  }
}

std::string ConditionReport::to_text() const {
  std::ostringstream out;
  out << verdict_name() << '\n';
  out << "tolerance = " << tolerance << '\n';
  if (witness_theta) out << "witness theta = " << *witness_theta << '\n';
  if (witness_beta) out << "witness beta = " << *witness_beta << '\n';
  out << "max |delta_pi2/delta_theta - 1/sin theta| = " << max_abs_dev_first
      << '\n';
  out << "max |delta_0/delta_(pi2-beta) - 1/sin beta| = " << max_abs_dev_second
      << '\n';
  out << "theta,ratio,bound,strict,equal\n";
  for (const auto& r : first_rows)
    out << r.angle << ',' << r.ratio << ',' << r.bound << ',' << r.strict
        << ',' << r.equal << '\n';
  out << "beta,ratio,bound,strict,equal\n";
  for (const auto& r : second_rows)
    out << r.angle << ',' << r.ratio << ',' << r.bound << ',' << r.strict
        << ',' << r.equal << '\n';
  return out.str();
}

ConditionReport check_interior_condition(const RateProfile& profile,
                                         double tolerance) {
  if (tolerance < 0) throw input_error("tolerance must be nonnegative");
  ConditionReport rep;
  rep.tolerance = tolerance;
  const double d0 = point_value(profile.points.front());
  const double dpi2 = point_value(profile.points.back());

  bool strict1 = false, eq1 = false, strict2 = false, eq2 = false;

  for (std::size_t i = 1; i + 1 < profile.points.size(); ++i) {
    const auto& pt = profile.points[i];
    const double angle = pt.theta;
    const double bound = 1.0 / std::sin(angle);

    // first inequality: delta_{pi/2} / delta_theta < 1/sin theta
    if (pt.status == PointStatus::finite && pt.estimate.value > 0) {
      ConditionRow row;
      row.angle = angle;
      row.bound = bound;
      row.ratio = std::isfinite(dpi2) ? dpi2 / pt.estimate.value : kNegInf;
      row.strict = row.ratio < bound - tolerance;
      row.equal = std::isfinite(row.ratio) && std::abs(row.ratio - bound) <= tolerance;
      if (std::isfinite(row.ratio))
        rep.max_abs_dev_first =
            std::max(rep.max_abs_dev_first, std::abs(row.ratio - bound));
      if (row.strict && !strict1) {
        strict1 = true;
        rep.witness_theta = angle;
      }
      eq1 = eq1 || row.equal;
      rep.first_rows.push_back(row);
    }

    // second inequality: delta_0 / delta_{pi/2 - beta} < 1/sin beta
    const double comp = kHalfPi - angle;
    const double dcomp = profile.value_at(comp);
    if (std::isfinite(dcomp) && dcomp > 0) {
      ConditionRow row;
      row.angle = angle;
      row.bound = bound;
      row.ratio = std::isfinite(d0) ? d0 / dcomp : kNegInf;
      row.strict = row.ratio < bound - tolerance;
      row.equal = std::isfinite(row.ratio) && std::abs(row.ratio - bound) <= tolerance;
      if (std::isfinite(row.ratio))
        rep.max_abs_dev_second =
            std::max(rep.max_abs_dev_second, std::abs(row.ratio - bound));
      if (row.strict && !strict2) {
        strict2 = true;
        rep.witness_beta = angle;
      }
      eq2 = eq2 || row.equal;
      rep.second_rows.push_back(row);
    }
  }

  if (strict1 && strict2)
    rep.verdict = ConditionVerdict::interior_guaranteed;
  else if ((!strict1 && eq1) || (!strict2 && eq2))
    rep.verdict = ConditionVerdict::boundary_sharp;
  else
    rep.verdict = ConditionVerdict::not_satisfied;
  if (!strict1) rep.witness_theta.reset();
  if (!strict2) rep.witness_beta.reset();
  return rep;
}

CosSinResult check_cos_sin_bound(const RateProfile& profile, double slack,
                                 BoundarySentinelPolicy policy) {
  if (slack < 0) throw input_error("slack must be nonnegative");
  double d0 = point_value(profile.points.front());
  double dpi2 = point_value(profile.points.back());
  if (policy == BoundarySentinelPolicy::treat_as_zero) {
    if (!std::isfinite(d0)) d0 = 0;
    if (!std::isfinite(dpi2)) dpi2 = 0;
  }
  CosSinResult res;
  res.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& pt : profile.points) {
    if (pt.status != PointStatus::finite) continue;
    const double c = std::cos(pt.theta), s = std::sin(pt.theta);
    double bound;
    if ((!std::isfinite(d0) && c > 0) || (!std::isfinite(dpi2) && s > 0))
      bound = kNegInf;  // a -infinity endpoint collapses the whole bound
    else
      bound = (std::isfinite(d0) ? d0 * c : 0.0) +
              (std::isfinite(dpi2) ? dpi2 * s : 0.0);
    const double margin =
        std::isfinite(bound) ? pt.estimate.value - bound
                             : std::numeric_limits<double>::infinity();
    if (margin < res.worst_margin) {
      res.worst_margin = margin;
      res.worst_theta = pt.theta;
    }
  }
  res.pass = res.worst_margin >= -slack;
  return res;
}

bool regular_growth_check(const SlopeSpectrum& s, double a1, double a2,
                          double eps, Window window) {
  if (!(0 <= a1 && a1 <= a2 && a2 <= kHalfPi))
    throw input_error("interval must satisfy 0 <= a1 <= a2 <= pi/2");
  std::vector<double> thetas;
  if (a1 == a2) {
    thetas.push_back(a1);
  } else {
    const int steps =
        std::max(1, static_cast<int>(std::round((a2 - a1) / (kHalfPi / 90))));
    for (int i = 0; i <= steps; ++i)
      thetas.push_back(a1 + (a2 - a1) * i / steps);
  }
  const int half_lo = window.hi - (window.hi - window.lo) / 2;
  for (double theta : thetas) {
    bool populated = false;
    for (int n = half_lo; n <= window.hi && !populated; ++n)
      populated = s.slope_annulus_count(eps, theta, n) > 0;
    if (!populated) return false;
  }
  return true;
}

std::vector<ContinuityViolation> continuity_audit(const RateProfile& profile,
                                                  double lipschitz) {
  std::vector<ContinuityViolation> out;
  const ProfilePoint* prev = nullptr;
  for (const auto& pt : profile.points) {
    if (pt.status != PointStatus::finite) {
      prev = nullptr;
      continue;
    }
    if (prev) {
      const double gap = std::abs(pt.estimate.value - prev->estimate.value);
      const double bound = lipschitz * (pt.theta - prev->theta) +
                           2 * (pt.estimate.stderr_ + prev->estimate.stderr_);
      if (gap > bound)
        out.push_back({prev->theta, pt.theta, gap, bound});
    }
    prev = &pt;
  }
  return out;
}

std::vector<PositivityViolation> positivity_audit(const RateProfile& profile,
                                                  double lo, double hi) {
  std::vector<PositivityViolation> out;
  for (const auto& pt : profile.points) {
    if (pt.status != PointStatus::finite) continue;
    if (pt.theta <= lo || pt.theta >= hi) continue;
    if (!(pt.estimate.value > pt.estimate.stderr_))
      out.push_back({pt.theta, pt.estimate.value, pt.estimate.stderr_});
  }
  return out;
}

}  // namespace slopegrowth
