#include "slopegrowth/spectrum.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "slopegrowth/detail/walk.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace slopegrowth {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Binning Binning::angular(int bins) {
  if (bins < 2) throw input_error("angular binning needs at least 2 bins");
  Binning b;
  b.mode = BinningMode::angular;
  b.bins = bins;
  return b;
}

Binning Binning::paper_tan(std::vector<double> grid) {
  if (grid.empty()) throw input_error("paper-tan binning needs a grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw input_error("paper-tan grid must be sorted");
  if (grid.front() < 0 || grid.back() > kHalfPi)
    throw input_error("paper-tan grid values must lie in [0, pi/2]");
  Binning b;
  b.mode = BinningMode::paper_tan;
  b.bins = static_cast<int>(grid.size());
  b.grid = std::move(grid);
  return b;
}

int Binning::bin_count() const {
  return mode == BinningMode::angular ? bins : static_cast<int>(grid.size());
}

std::pair<double, double> Binning::bin_interval(int b) const {
  if (mode != BinningMode::angular)
    throw input_error("bin_interval is defined for angular mode only");
  return {static_cast<double>(b) * kHalfPi / bins,
          static_cast<double>(b + 1) * kHalfPi / bins};
}

double Binning::representative(int b) const {
  if (mode == BinningMode::paper_tan) return grid.at(b);
  auto [lo, hi] = bin_interval(b);
  return 0.5 * (lo + hi);
}

int Binning::bin_of(double theta) const {
  if (theta < 0 || theta > kHalfPi)
    throw input_error("theta outside [0, pi/2]");
  if (mode == BinningMode::angular) {
    int i = std::min(bins - 1, static_cast<int>(theta / kHalfPi * bins));
    const auto lower = [&](int k) { return static_cast<double>(k) * kHalfPi / bins; };
    while (i > 0 && theta <= lower(i)) --i;  // boundary -> lower bin
    while (i + 1 < bins && theta > lower(i + 1)) ++i;
    return i;
  }
  // nearest grid value, ties to the lower index
  const auto it = std::lower_bound(grid.begin(), grid.end(), theta);
  if (it == grid.begin()) return 0;
  if (it == grid.end()) return static_cast<int>(grid.size()) - 1;
  const int hi = static_cast<int>(it - grid.begin());
  return (theta - grid[hi - 1] <= grid[hi] - theta) ? hi - 1 : hi;
}

std::string Binning::mode_name() const {
  return mode == BinningMode::angular ? "angular" : "paper-tan";
}

bool slope_within(const Displacement& d, double theta, double eps,
                  BinningMode mode) {
  if (eps <= 0) throw input_error("eps must be positive");
  if (theta < 0 || theta > kHalfPi)
    throw input_error("theta outside [0, pi/2]");
  if (d.is_identity())
    throw std::domain_error("slope predicate undefined on the identity");
  if (mode == BinningMode::angular) return std::abs(d.theta() - theta) <= eps;
  if (theta == kHalfPi) {
    // tan(pi/2) degenerates; documented reciprocal condition
    if (d.d2 == 0) return false;
    return static_cast<double>(d.d1) / static_cast<double>(d.d2) <= eps;
  }
  if (d.d1 == 0) return false;
  const double t = static_cast<double>(d.d2) / static_cast<double>(d.d1);
  return std::abs(t - std::tan(theta)) <= eps;
}

SlopeSpectrum::SlopeSpectrum(std::string fingerprint, Binning binning,
                             int n_max,
                             std::vector<std::vector<std::int64_t>> counts,
                             std::int64_t skipped, SpectrumMeta meta)
    : fingerprint_(std::move(fingerprint)),
      binning_(std::move(binning)),
      n_max_(n_max),
      counts_(std::move(counts)),
      skipped_(skipped),
      meta_(std::move(meta)) {
  totals_.resize(n_max_, 0);
  for (int n = 1; n <= n_max_; ++n) {
    std::int64_t t = 0;
    for (std::int64_t c : counts_[n - 1]) {
      if (c > std::numeric_limits<std::int64_t>::max() - t)
        throw resource_error("spectrum count overflow at annulus " +
                             std::to_string(n));
      t += c;
    }
    totals_[n - 1] = t;
  }
}

std::int64_t SlopeSpectrum::count(int n, int bin) const {
  if (n < 1 || n > n_max_) throw input_error("annulus index out of range");
  if (bin < 0 || bin >= binning_.bin_count())
    throw input_error("bin index out of range");
  return counts_[n - 1][bin];
}

std::int64_t SlopeSpectrum::annulus_count(int n) const {
  if (n < 1 || n > n_max_) throw input_error("annulus index out of range");
  return totals_[n - 1];
}

std::int64_t SlopeSpectrum::slope_annulus_count(double eps, double theta,
                                                int n) const {
  if (eps <= 0) throw input_error("eps must be positive");
  if (theta < 0 || theta > kHalfPi)
    throw input_error("theta outside [0, pi/2]");
  if (n < 1 || n > n_max_) throw input_error("annulus index out of range");
  std::int64_t total = 0;
  const int B = binning_.bin_count();
  if (binning_.mode == BinningMode::angular) {
    for (int b = 0; b < B; ++b) {
      auto [lo, hi] = binning_.bin_interval(b);
      if (lo <= theta + eps && hi >= theta - eps) total += counts_[n - 1][b];
    }
    return total;
  }
  for (int b = 0; b < B; ++b) {
    const double g = binning_.grid[b];
    bool in;
    if (theta == kHalfPi) {
      in = g == kHalfPi || (std::sin(g) > 0 && std::cos(g) / std::sin(g) <= eps);
    } else if (g == kHalfPi) {
      in = false;  // infinite tan never eps-close to a finite one
    } else {
      in = std::abs(std::tan(g) - std::tan(theta)) <= eps;
    }
    if (in) total += counts_[n - 1][b];
  }
  return total;
}

std::vector<std::int64_t> SlopeSpectrum::totals() const { return totals_; }

namespace {

// Flat count accumulator used by the walk kernels; merged entrywise, which
// is commutative, so sharded results equal the serial reference bit for bit.
struct Accumulator {
  const Binning* binning;
  int n_max;
  std::vector<std::int64_t> counts;  // (n-1) * bins + bin
  std::int64_t skipped = 0;

  Accumulator(const Binning& b, int n) : binning(&b), n_max(n) {
    counts.assign(static_cast<std::size_t>(n) * b.bin_count(), 0);
  }

  void add(std::int64_t d1, std::int64_t d2) {
    if (d1 == 0 && d2 == 0) {
      ++skipped;  // only the identity has no slope
      return;
    }
    const double r =
        std::sqrt(static_cast<double>(d1 * d1 + d2 * d2));
    const std::int64_t n = static_cast<std::int64_t>(r) + 1;
    if (n > n_max) return;
    const double theta =
        std::atan2(static_cast<double>(d2), static_cast<double>(d1));
    const int bin = binning->bin_of(theta);
    ++counts[static_cast<std::size_t>(n - 1) * binning->bin_count() + bin];
  }

  void merge(const Accumulator& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    skipped += o.skipped;
  }

  std::vector<std::vector<std::int64_t>> matrix() const {
    const int B = binning->bin_count();
    std::vector<std::vector<std::int64_t>> m(n_max);
    for (int n = 0; n < n_max; ++n)
      m[n].assign(counts.begin() + static_cast<std::size_t>(n) * B,
                  counts.begin() + static_cast<std::size_t>(n + 1) * B);
    return m;
  }
};

}  // namespace

SlopeSpectrum build_spectrum(const ProductGroupSpec& spec, int l_max,
                             const Binning& binning, int n_max,
                             const BuildOptions& opts) {
  const std::int64_t horizon = completeness_horizon(spec, l_max);
  if (n_max == 0) n_max = static_cast<int>(horizon);
  if (n_max < 1) throw config_error("n_max must be at least 1");
  if (n_max > horizon && !opts.allow_beyond_horizon)
    throw config_error("n_max " + std::to_string(n_max) +
                       " exceeds the completeness horizon " +
                       std::to_string(horizon) +
                       "; counts there would be lower bounds only (pass the "
                       "override to accept)");

  SpectrumMeta meta{l_max, opts.dedup, spec.lambda, horizon, now_utc()};

  if (opts.dedup == Dedup::on) {
    // Deduplicated enumeration is inherently table-bound; serial path.
    Accumulator acc(binning, n_max);
    EnumerateOptions eo{Dedup::on, opts.dedup_budget};
    enumerate(spec, l_max, eo, [&](const ElementRecord& r) {
      acc.add(r.disp.d1, r.disp.d2);
    });
    return SlopeSpectrum(spec.fingerprint(), binning, n_max, acc.matrix(),
                         acc.skipped, meta);
  }

  if (!spec.certified_injective)
    throw config_error("dedup=off requires a certified-injective spec");

  detail::WalkTables tables(spec);
  Accumulator acc(binning, n_max);

  const int prefix_depth = std::min(l_max, 2);
  if (opts.jobs <= 1 || l_max <= prefix_depth) {
    detail::walk_all(tables, l_max,
                     [&](std::int64_t d1, std::int64_t d2) { acc.add(d1, d2); });
    return SlopeSpectrum(spec.fingerprint(), binning, n_max, acc.matrix(),
                         acc.skipped, meta);
  }

  // Words up to the prefix depth are cheap; visit them serially, then shard
  // the subtrees below each depth-2 prefix across workers.
  detail::walk_all(tables, prefix_depth,
                   [&](std::int64_t d1, std::int64_t d2) { acc.add(d1, d2); });
  const auto prefixes = detail::reduced_prefixes(tables, prefix_depth);
  const int ntasks = static_cast<int>(prefixes.size());

#ifdef _OPENMP
#pragma omp parallel num_threads(opts.jobs)
  {
    Accumulator local(binning, n_max);
#pragma omp for schedule(dynamic)
    for (int i = 0; i < ntasks; ++i) {
      detail::walk_subtree(
          tables, l_max, prefixes[i],
          [&](std::int64_t d1, std::int64_t d2) { local.add(d1, d2); });
    }
#pragma omp critical
    acc.merge(local);
  }
#else
  for (int i = 0; i < ntasks; ++i) {
    detail::walk_subtree(tables, l_max, prefixes[i],
                         [&](std::int64_t d1, std::int64_t d2) {
                           acc.add(d1, d2);
                         });
  }
#endif
  return SlopeSpectrum(spec.fingerprint(), binning, n_max, acc.matrix(),
                       acc.skipped, meta);
}

SlopeSpectrum build_spectrum(std::span<const ElementRecord> records,
                             const Binning& binning, int n_max,
                             std::string fingerprint, SpectrumMeta meta) {
  if (n_max < 1) throw config_error("n_max must be at least 1");
  Accumulator acc(binning, n_max);
  for (const auto& r : records) acc.add(r.disp.d1, r.disp.d2);
  return SlopeSpectrum(std::move(fingerprint), binning, n_max, acc.matrix(),
                       acc.skipped, std::move(meta));
}

std::int64_t free_sphere_size(int m, int k) {
  if (m < 1) throw input_error("free group rank must be >= 1");
  if (k < 0) throw input_error("radius must be >= 0");
  if (k == 0) return 1;
  std::int64_t out = 2 * m;
  const std::int64_t base = 2 * m - 1;
  for (int i = 1; i < k; ++i) {
    if (__builtin_mul_overflow(out, base, &out))
      throw resource_error("free_sphere_size overflows 64-bit counts");
  }
  return out;
}

namespace {

constexpr const char* kMagic = "slopegrowth-spectrum v1";

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void SlopeSpectrum::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write spectrum file: " + path.string());
  out << kMagic << '\n';
  out << "fingerprint=" << fingerprint_ << '\n';
  out << "binning=" << binning_.mode_name() << '\n';
  if (binning_.mode == BinningMode::angular) {
    out << "bins=" << binning_.bins << '\n';
  } else {
    out << "grid=";
    for (std::size_t i = 0; i < binning_.grid.size(); ++i)
      out << (i ? "," : "") << fmt_double(binning_.grid[i]);
    out << '\n';
  }
  out << "lmax=" << meta_.l_max << '\n';
  out << "lambda=" << fmt_double(meta_.lambda) << '\n';
  out << "nmax=" << n_max_ << '\n';
  out << "dedup=" << (meta_.dedup == Dedup::on ? "on" : "off") << '\n';
  out << "horizon=" << meta_.horizon << '\n';
  out << "skipped=" << skipped_ << '\n';
  out << "built=" << meta_.built << '\n';
  std::size_t rows = 0;
  for (const auto& a : counts_)
    for (std::int64_t c : a)
      if (c) ++rows;
  out << "rows=" << rows << '\n';
  out << "n,bin_index,count\n";
  for (int n = 1; n <= n_max_; ++n)
    for (int b = 0; b < binning_.bin_count(); ++b)
      if (counts_[n - 1][b])
        out << n << ',' << b << ',' << counts_[n - 1][b] << '\n';
  out << "end\n";
  if (!out) throw io_error("write failed: " + path.string());
}

SlopeSpectrum SlopeSpectrum::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open spectrum file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw format_error("bad magic header in " + path.string());

  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    if (line == "n,bin_index,count") break;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw format_error("bad metadata line in spectrum file: " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end())
      throw format_error(std::string("missing spectrum metadata key: ") + key);
    return it->second;
  };
  try {
    Binning binning;
    if (need("binning") == "angular") {
      binning = Binning::angular(std::stoi(need("bins")));
    } else if (need("binning") == "paper-tan") {
      std::vector<double> grid;
      std::istringstream gs(need("grid"));
      std::string tok;
      while (std::getline(gs, tok, ',')) grid.push_back(std::stod(tok));
      binning = Binning::paper_tan(std::move(grid));
    } else {
      throw format_error("unknown binning mode: " + need("binning"));
    }
    const int n_max = std::stoi(need("nmax"));
    SpectrumMeta meta;
    meta.l_max = std::stoi(need("lmax"));
    meta.lambda = std::stod(need("lambda"));
    meta.horizon = std::stoll(need("horizon"));
    meta.built = need("built");
    const std::string& dd = need("dedup");
    if (dd != "on" && dd != "off") throw format_error("bad dedup value: " + dd);
    meta.dedup = dd == "on" ? Dedup::on : Dedup::off;
    const std::int64_t skipped = std::stoll(need("skipped"));
    const std::size_t rows = std::stoull(need("rows"));

    std::vector<std::vector<std::int64_t>> counts(
        n_max, std::vector<std::int64_t>(binning.bin_count(), 0));
    std::size_t seen = 0;
    while (std::getline(in, line)) {
      if (line == "end") break;
      int n, b;
      long long c;
      if (std::sscanf(line.c_str(), "%d,%d,%lld", &n, &b, &c) != 3)
        throw format_error("bad count row: " + line);
      if (n < 1 || n > n_max || b < 0 || b >= binning.bin_count())
        throw format_error("count row out of range: " + line);
      counts[n - 1][b] = c;
      ++seen;
    }
    if (line != "end" || seen != rows)
      throw format_error("truncated spectrum file: " + path.string());
    return SlopeSpectrum(need("fingerprint"), std::move(binning), n_max,
                         std::move(counts), skipped, std::move(meta));
  } catch (const std::invalid_argument&) {
    throw format_error("malformed numeric field in " + path.string());
  } catch (const std::out_of_range&) {
    throw format_error("numeric field out of range in " + path.string());
  }
}

SlopeSpectrum SlopeSpectrum::load(const std::filesystem::path& path,
                                  const std::string& expected_fingerprint) {
  SlopeSpectrum s = load(path);
  if (s.fingerprint() != expected_fingerprint)
    throw format_error("spectrum fingerprint mismatch: expected " +
                       expected_fingerprint + ", file has " + s.fingerprint());
  return s;
}

}  // namespace slopegrowth
