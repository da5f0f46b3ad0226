#ifndef SLOPEGROWTH_PRODUCT_HPP
#define SLOPEGROWTH_PRODUCT_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "slopegrowth/word.hpp"

namespace slopegrowth {

// Factor word lengths of an orbit point, with the l2 product distance and
// the slope angle derived from them.
struct Displacement {
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;

  bool is_identity() const { return d1 == 0 && d2 == 0; }

  double r() const {
    return std::sqrt(static_cast<double>(d1 * d1 + d2 * d2));
  }

  // arctan(d2/d1); pi/2 when d1 == 0, 0 when d2 == 0. Undefined on the
  // identity.
  double theta() const {
    if (is_identity())
      throw std::domain_error("slope is undefined for the identity element");
    return std::atan2(static_cast<double>(d2), static_cast<double>(d1));
  }

  // Annulus index n with n-1 <= r < n.
  std::int64_t annulus() const {
    return static_cast<std::int64_t>(r()) + 1;
  }

  friend bool operator==(const Displacement&, const Displacement&) = default;
};

enum class Dedup { off, on };

// A subgroup of Is(X1) x Is(X2) given by generator pairs: each abstract
// generator g_i acts as (h1(g_i), h2(g_i)) on the product of the two
// free-group Cayley graphs.
struct ProductGroupSpec {
  AlphabetPtr factor1;
  AlphabetPtr factor2;
  AlphabetPtr abstract_alphabet;
  GeneratorMap h1;  // abstract -> factor1
  GeneratorMap h2;  // abstract -> factor2
  bool certified_injective = false;
  // Lower bound on r(g) / abstract-length(g); 0 means unspecified, in which
  // case annulus counts are lower bounds only.
  double lambda = 0.0;
  std::string name = "custom";

  // Deterministic serialization; also the accepted group-spec file format.
  std::string canonical_text() const;
  // FNV-1a over canonical_text(), hex.
  std::string fingerprint() const;
};

struct ElementRecord {
  ReducedWord abstract;
  ReducedWord image1;
  ReducedWord image2;
  Displacement disp;
};

Displacement displacement(const ProductGroupSpec& spec, const ReducedWord& w);

// Largest annulus index guaranteed complete after enumerating abstract words
// of length <= l_max: floor(lambda * l_max).
std::int64_t completeness_horizon(const ProductGroupSpec& spec, int l_max);

struct EnumerateOptions {
  Dedup dedup = Dedup::on;
  // Dedup table budget (number of distinct image pairs held in memory).
  std::size_t dedup_budget = std::size_t(1) << 26;
};

// Serial reference enumeration of all nonidentity elements with abstract
// length 1..l_max. With dedup off every reduced abstract word is emitted in
// DFS order; with dedup on exactly one record per distinct image pair, the
// shortlex-minimal abstract representative, in sorted image-pair order.
void enumerate(const ProductGroupSpec& spec, int l_max,
               const EnumerateOptions& opts,
               const std::function<void(const ElementRecord&)>& sink);

// Streaming displacement walk over all reduced abstract words of length
// 1..l_max, no dedup, no record materialization. Serial reference kernel.
void walk_displacements(const ProductGroupSpec& spec, int l_max,
                        const std::function<void(const Displacement&)>& visit);

// Presets from the worked examples.
ProductGroupSpec preset_example31();
ProductGroupSpec preset_example41();
ProductGroupSpec preset_example51(int n_rank);
// example31 | example41 | example51 (with rank); throws input_error otherwise.
ProductGroupSpec make_preset(const std::string& name, int n_rank = 4);

ProductGroupSpec parse_spec_text(std::string_view text);
ProductGroupSpec load_spec_file(const std::filesystem::path& path);

namespace detail {

// Precomputed per-signed-generator data for the DFS kernel.
struct WalkTables {
  // indexed by signed generator slot s in [0, 2p): generator s/2, sign +1 if
  // s%2==0 else -1
  std::vector<std::vector<Letter>> img1;
  std::vector<std::vector<Letter>> img2;
  std::vector<Letter> abstract_letter;
  int slots = 0;

  explicit WalkTables(const ProductGroupSpec& spec);

  static int inverse_slot(int s) { return s ^ 1; }
};

}  // namespace detail

}  // namespace slopegrowth

#endif
