#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include "slopegrowth/product.hpp"

using namespace slopegrowth;

namespace {

std::vector<ElementRecord> collect(const ProductGroupSpec& spec, int l_max,
                                   EnumerateOptions opts = {}) {
  std::vector<ElementRecord> out;
  enumerate(spec, l_max, opts, [&](const ElementRecord& r) { out.push_back(r); });
  return out;
}

// Free product Z x Z on images (a1, 1), (1, b1): distinct image pairs with
// abstract length <= L are the l1-ball lattice points minus the origin.
ProductGroupSpec lattice_spec() {
  ProductGroupSpec s;
  s.factor1 = Alphabet::numbered("A", "a", 1);
  s.factor2 = Alphabet::numbered("B", "b", 1);
  s.abstract_alphabet = Alphabet::numbered("G", "g", 2);
  s.h1 = GeneratorMap{s.abstract_alphabet, s.factor1,
                      {ReducedWord::parse(s.factor1, "a1"),
                       ReducedWord::parse(s.factor1, "")}};
  s.h2 = GeneratorMap{s.abstract_alphabet, s.factor2,
                      {ReducedWord::parse(s.factor2, ""),
                       ReducedWord::parse(s.factor2, "b1")}};
  s.certified_injective = false;
  s.lambda = 0.5;
  s.name = "lattice";
  return s;
}

}  // namespace

TEST_CASE("displacement of hand-computed words") {
  const auto e31 = preset_example31();
  const auto w31 = ReducedWord::parse(e31.abstract_alphabet, "s1 s2");
  CHECK(displacement(e31, w31) == Displacement{2, 2});

  const auto e41 = preset_example41();
  const auto y = ReducedWord::parse(e41.abstract_alphabet, "x2");
  CHECK(displacement(e41, y) == Displacement{1, 2});
  const auto xy = ReducedWord::parse(e41.abstract_alphabet, "x1 x2");
  CHECK(displacement(e41, xy) == Displacement{2, 3});

  // first-factor cancellation: g1 g3 g1^-1 lands in the kernel of the first
  // projection
  const auto e51 = preset_example51(4);
  const auto conj = ReducedWord::parse(e51.abstract_alphabet, "g1 g3 g1^-1");
  const auto d = displacement(e51, conj);
  CHECK(d == Displacement{0, 3});
  CHECK(d.theta() == doctest::Approx(std::numbers::pi / 2));
  CHECK(d.annulus() == 4);
}

TEST_CASE("displacement polar data") {
  const Displacement d{3, 4};
  CHECK(d.r() == doctest::Approx(5.0));
  CHECK(d.theta() == doctest::Approx(std::atan2(4.0, 3.0)));
  CHECK(d.annulus() == 6);  // r = 5 exactly, 5 <= r < 6
  CHECK(Displacement{1, 0}.theta() == doctest::Approx(0.0));
  CHECK(Displacement{0, 2}.theta() == doctest::Approx(std::numbers::pi / 2));
  CHECK_THROWS_AS((void)(Displacement{0, 0}.theta()), std::domain_error);
  CHECK(Displacement{1, 1}.annulus() == 2);  // r = sqrt(2)
}

TEST_CASE("completeness horizon") {
  CHECK(completeness_horizon(preset_example31(), 9) == 12);
  CHECK(completeness_horizon(preset_example31(), 12) == 16);
  CHECK(completeness_horizon(preset_example41(), 9) == 12);
  CHECK(completeness_horizon(preset_example51(4), 9) == 9);

  ProductGroupSpec bad = preset_example31();
  bad.lambda = 0;
  CHECK_THROWS_AS(completeness_horizon(bad, 5), config_error);
}

TEST_CASE("enumerate without dedup visits every reduced abstract word once") {
  const auto spec = preset_example31();
  EnumerateOptions opts;
  opts.dedup = Dedup::off;
  std::map<std::size_t, int> per_length;
  std::set<std::string> seen;
  enumerate(spec, 3, opts, [&](const ElementRecord& r) {
    ++per_length[r.abstract.length()];
    CHECK(seen.insert(r.abstract.str()).second);
  });
  CHECK(per_length[1] == 4);
  CHECK(per_length[2] == 12);
  CHECK(per_length[3] == 36);
}

TEST_CASE("records carry consistent images and displacements") {
  const auto spec = preset_example51(4);
  EnumerateOptions opts;
  opts.dedup = Dedup::off;
  const auto recs = collect(spec, 3, opts);
  for (const auto& r : recs) {
    CHECK(r.image1 == spec.h1.apply(r.abstract));
    CHECK(r.image2 == spec.h2.apply(r.abstract));
    CHECK(r.disp.d1 == static_cast<std::int64_t>(r.image1.length()));
    CHECK(r.disp.d2 == static_cast<std::int64_t>(r.image2.length()));
  }
  int length_one = 0;
  for (const auto& r : recs)
    if (r.abstract.length() == 1) ++length_one;
  CHECK(length_one == 8);
}

TEST_CASE("dedup collapses the lattice quotient to l1-ball points") {
  // brute-force oracle: image pairs are (m, n) in Z^2 with |m| + |n| <= 4,
  // excluding the origin: 4 + 8 + 12 + 16 = 40
  const auto recs = collect(lattice_spec(), 4);
  CHECK(recs.size() == 40);
  std::set<std::pair<std::int64_t, std::int64_t>> pts;
  for (const auto& r : recs) {
    auto net = [](const ReducedWord& w) {
      std::int64_t s = 0;
      for (const auto& l : w.letters()) s += l.sign;
      return s;
    };
    pts.insert({net(r.image1), net(r.image2)});
    CHECK(r.disp.d1 + r.disp.d2 <= 4);
  }
  CHECK(pts.size() == 40);
}

TEST_CASE("dedup keeps the shortlex-minimal representative") {
  const auto recs = collect(lattice_spec(), 3);
  for (const auto& r : recs) {
    // the representative is never longer than d1 + d2, the geodesic length
    CHECK(r.abstract.length() ==
          static_cast<std::size_t>(r.disp.d1 + r.disp.d2));
  }
}

TEST_CASE("dedup on an injective spec is a no-op up to ordering") {
  const auto spec = preset_example41();
  EnumerateOptions off;
  off.dedup = Dedup::off;
  auto plain = collect(spec, 6, off);
  auto deduped = collect(spec, 6);
  REQUIRE(plain.size() == deduped.size());
  std::set<std::string> a, b;
  for (const auto& r : plain) a.insert(r.abstract.str());
  for (const auto& r : deduped) b.insert(r.abstract.str());
  CHECK(a == b);
}

TEST_CASE("dedup=off on an uncertified spec is rejected") {
  EnumerateOptions opts;
  opts.dedup = Dedup::off;
  CHECK_THROWS_AS(collect(lattice_spec(), 2, opts), config_error);
}

TEST_CASE("dedup budget overflow raises a resource error") {
  EnumerateOptions opts;
  opts.dedup_budget = 10;
  CHECK_THROWS_AS(collect(lattice_spec(), 4, opts), resource_error);
}

TEST_CASE("walk_displacements agrees with enumerate") {
  const auto spec = preset_example41();
  std::multiset<std::pair<std::int64_t, std::int64_t>> walked, recorded;
  walk_displacements(spec, 5, [&](const Displacement& d) {
    walked.insert({d.d1, d.d2});
  });
  EnumerateOptions opts;
  opts.dedup = Dedup::off;
  enumerate(spec, 5, opts, [&](const ElementRecord& r) {
    recorded.insert({r.disp.d1, r.disp.d2});
  });
  CHECK(walked == recorded);
}

TEST_CASE("spec text round-trips through the parser") {
  for (const auto& spec :
       {preset_example31(), preset_example41(), preset_example51(5)}) {
    const auto reparsed = parse_spec_text(spec.canonical_text());
    CHECK(reparsed.canonical_text() == spec.canonical_text());
    CHECK(reparsed.fingerprint() == spec.fingerprint());
  }
}

TEST_CASE("spec parser rejects malformed input") {
  CHECK_THROWS_AS(parse_spec_text("factor1 = A a1\n"), format_error);
  CHECK_THROWS_AS(parse_spec_text("nonsense without equals\n"), format_error);
  const char* missing_image =
      "factor1 = A : a1\nfactor2 = B : b1\ngenerators = g1 g2\n"
      "g1 = a1 | b1\ninjective = true\nlambda = 1\n";
  CHECK_THROWS_AS(parse_spec_text(missing_image), format_error);
  const char* bad_lambda =
      "factor1 = A : a1\nfactor2 = B : b1\ngenerators = g1\n"
      "g1 = a1 | b1\nlambda = abc\n";
  CHECK_THROWS_AS(parse_spec_text(bad_lambda), format_error);
}

TEST_CASE("fingerprint distinguishes specs and is stable") {
  const auto a = preset_example31();
  CHECK(a.fingerprint() == preset_example31().fingerprint());
  CHECK(a.fingerprint() != preset_example41().fingerprint());
  CHECK(preset_example51(4).fingerprint() != preset_example51(5).fingerprint());
}

TEST_CASE("preset validation") {
  CHECK_THROWS_AS(preset_example51(2), input_error);
  CHECK_THROWS_AS(make_preset("example99"), input_error);
  CHECK(make_preset("example51", 6).factor2->rank() == 6);
}
