#ifndef SLOPEGROWTH_SPECTRUM_HPP
#define SLOPEGROWTH_SPECTRUM_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "slopegrowth/product.hpp"

namespace slopegrowth {

enum class BinningMode { angular, paper_tan };

// Slope discretization. Angular mode partitions [0, pi/2] into `bins` equal
// bins; paper-tan mode keeps a sorted grid of representative theta values and
// assigns each element to the nearest one.
struct Binning {
  BinningMode mode = BinningMode::angular;
  int bins = 90;
  std::vector<double> grid;  // paper-tan only

  static Binning angular(int bins);
  static Binning paper_tan(std::vector<double> grid);

  int bin_count() const;
  // Elements exactly on an angular bin boundary go to the lower-index bin.
  int bin_of(double theta) const;
  // Closed angular interval covered by bin b.
  std::pair<double, double> bin_interval(int b) const;
  double representative(int b) const;

  std::string mode_name() const;
  friend bool operator==(const Binning&, const Binning&) = default;
};

// Element-level slope predicate. Angular: |theta(g) - theta| <= eps.
// Paper-tan: |tan theta(g) - tan theta| <= eps, with the reciprocal condition
// |d1/d2| <= eps at theta = pi/2 where tan degenerates.
bool slope_within(const Displacement& d, double theta, double eps,
                  BinningMode mode);

struct SpectrumMeta {
  int l_max = 0;
  Dedup dedup = Dedup::off;
  double lambda = 0.0;
  std::int64_t horizon = 0;  // annuli above this are lower bounds only
  std::string built;         // build timestamp (informational)

  friend bool operator==(const SpectrumMeta&, const SpectrumMeta&) = default;
};

// Annulus-by-slope count table: counts[n-1][bin] holds the number of
// elements with n-1 <= r < n in the given slope bin. Immutable after build.
class SlopeSpectrum {
 public:
  SlopeSpectrum() = default;
  SlopeSpectrum(std::string fingerprint, Binning binning, int n_max,
                std::vector<std::vector<std::int64_t>> counts,
                std::int64_t skipped, SpectrumMeta meta);

  const std::string& fingerprint() const { return fingerprint_; }
  const Binning& binning() const { return binning_; }
  int n_max() const { return n_max_; }
  const SpectrumMeta& meta() const { return meta_; }
  std::int64_t skipped() const { return skipped_; }

  std::int64_t count(int n, int bin) const;
  std::int64_t annulus_count(int n) const;
  // Count of annulus-n elements whose slope bin meets the eps-window around
  // theta (bin-overlap semantics in angular mode, representative-based in
  // paper-tan mode). Monotone nondecreasing in eps.
  std::int64_t slope_annulus_count(double eps, double theta, int n) const;
  bool annulus_exact(int n) const { return n <= meta_.horizon; }

  std::vector<std::int64_t> totals() const;

  void save(const std::filesystem::path& path) const;
  static SlopeSpectrum load(const std::filesystem::path& path);
  static SlopeSpectrum load(const std::filesystem::path& path,
                            const std::string& expected_fingerprint);

  friend bool operator==(const SlopeSpectrum&, const SlopeSpectrum&) = default;

 private:
  std::string fingerprint_;
  Binning binning_;
  int n_max_ = 0;
  std::vector<std::vector<std::int64_t>> counts_;
  std::vector<std::int64_t> totals_;
  std::int64_t skipped_ = 0;
  SpectrumMeta meta_;
};

struct BuildOptions {
  Dedup dedup = Dedup::off;
  int jobs = 1;
  // n_max beyond the completeness horizon requires an explicit override.
  bool allow_beyond_horizon = false;
  std::size_t dedup_budget = std::size_t(1) << 26;
};

// Enumerates the group to depth l_max and aggregates. n_max = 0 derives the
// horizon floor(lambda * l_max). jobs > 1 shards top-level prefixes across
// OpenMP workers; counts are bit-identical to the serial reference.
SlopeSpectrum build_spectrum(const ProductGroupSpec& spec, int l_max,
                             const Binning& binning, int n_max,
                             const BuildOptions& opts);

// Aggregation from a prebuilt record stream (serial reference path).
SlopeSpectrum build_spectrum(std::span<const ElementRecord> records,
                             const Binning& binning, int n_max,
                             std::string fingerprint, SpectrumMeta meta);

// Exact size of the radius-k sphere in the free group of rank m:
// 2m(2m-1)^(k-1) for k >= 1, 1 for k = 0.
std::int64_t free_sphere_size(int m, int k);

}  // namespace slopegrowth

#endif
