#include <doctest.h>

#include <random>
#include <vector>

#include "slopegrowth/word.hpp"

using namespace slopegrowth;

namespace {

// Quadratic reference reducer: rescan for an adjacent canceling pair until
// none is left.
std::vector<Letter> naive_reduce(std::vector<Letter> w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i].cancels(w[i + 1])) {
        w.erase(w.begin() + i, w.begin() + i + 2);
        changed = true;
        break;
      }
    }
  }
  return w;
}

std::vector<Letter> random_raw(std::mt19937& rng, int rank, int len) {
  std::uniform_int_distribution<int> gen(0, rank - 1);
  std::uniform_int_distribution<int> sgn(0, 1);
  std::vector<Letter> out;
  out.reserve(len);
  for (int i = 0; i < len; ++i)
    out.push_back({static_cast<std::uint32_t>(gen(rng)),
                   sgn(rng) ? 1 : -1});
  return out;
}

ReducedWord random_word(std::mt19937& rng, const AlphabetPtr& a, int len) {
  return ReducedWord::reduce(a, random_raw(rng, a->rank(), len));
}

}  // namespace

TEST_CASE("reduce matches the naive reference on random raw sequences") {
  const auto a = Alphabet::numbered("A", "a", 3);
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> len(0, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto raw = random_raw(rng, 3, len(rng));
    const auto fast = ReducedWord::reduce(a, raw);
    const auto slow = naive_reduce(raw);
    REQUIRE(fast.length() == slow.size());
    for (std::size_t i = 0; i < slow.size(); ++i)
      CHECK(fast.letters()[i] == slow[i]);
    // no adjacent cancellation survives
    for (std::size_t i = 0; i + 1 < fast.length(); ++i)
      CHECK_FALSE(fast.letters()[i].cancels(fast.letters()[i + 1]));
  }
}

TEST_CASE("group axioms hold for multiply and invert") {
  const auto a = Alphabet::numbered("A", "a", 2);
  const ReducedWord id(a);
  std::mt19937 rng(999);
  std::uniform_int_distribution<int> len(0, 15);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto u = random_word(rng, a, len(rng));
    const auto v = random_word(rng, a, len(rng));
    const auto w = random_word(rng, a, len(rng));
    CHECK(multiply(multiply(u, v), w) == multiply(u, multiply(v, w)));
    CHECK(multiply(u, id) == u);
    CHECK(multiply(id, u) == u);
    CHECK(multiply(u, invert(u)) == id);
    CHECK(multiply(invert(u), u) == id);
    CHECK(invert(invert(u)) == u);
    CHECK(invert(multiply(u, v)) == multiply(invert(v), invert(u)));
    CHECK(multiply(u, v).length() <= u.length() + v.length());
  }
}

TEST_CASE("parse and str round-trip") {
  const auto a = Alphabet::numbered("A", "a", 3);
  const auto w = ReducedWord::parse(a, "a1 a2^-1 a1 a3");
  CHECK(w.length() == 4);
  CHECK(w.str() == "a1 a2^-1 a1 a3");
  CHECK(ReducedWord::parse(a, w.str()) == w);

  CHECK(ReducedWord::parse(a, "").is_identity());
  CHECK(ReducedWord::parse(a, "a1 a1^-1").is_identity());
  CHECK(ReducedWord::parse(a, "a1^2").length() == 2);
  CHECK(ReducedWord::parse(a, "a2^-3").length() == 3);
}

TEST_CASE("parse rejects unknown tokens") {
  const auto a = Alphabet::numbered("A", "a", 2);
  CHECK_THROWS_AS(ReducedWord::parse(a, "a3"), input_error);
  CHECK_THROWS_AS(ReducedWord::parse(a, "b1"), input_error);
  CHECK_THROWS_AS(ReducedWord::parse(a, "a1^x"), input_error);
  CHECK_THROWS_AS(ReducedWord::parse(a, "a1^"), input_error);
}

TEST_CASE("shortlex order: length first, then letter order") {
  const auto a = Alphabet::numbered("A", "a", 2);
  const auto p = [&](const char* s) { return ReducedWord::parse(a, s); };
  CHECK(p("a1").shortlex_less(p("a1 a2")));
  CHECK(p("a1").shortlex_less(p("a1^-1")));      // + before - per generator
  CHECK(p("a1^-1").shortlex_less(p("a2")));
  CHECK_FALSE(p("a1").shortlex_less(p("a1")));
  CHECK(p("").shortlex_less(p("a1")));
}

TEST_CASE("GeneratorMap::apply is a homomorphism") {
  const auto src = Alphabet::numbered("S", "s", 2);
  const auto dst = Alphabet::numbered("B", "b", 2);
  GeneratorMap h{src, dst,
                 {ReducedWord::parse(dst, "b1 b2"),
                  ReducedWord::parse(dst, "b2 b2 b1^-1")}};
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> len(0, 12);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto u = random_word(rng, src, len(rng));
    const auto v = random_word(rng, src, len(rng));
    CHECK(h.apply(multiply(u, v)) == multiply(h.apply(u), h.apply(v)));
    CHECK(h.apply(invert(u)) == invert(h.apply(u)));
  }
  CHECK(h.apply(ReducedWord(src)).is_identity());
}

TEST_CASE("CancelStack push/undo round-trips against multiply") {
  const auto a = Alphabet::numbered("A", "a", 2);
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> len(0, 8);
  detail::CancelStack stack;
  std::vector<detail::CancelStack::Undo> undos;
  std::vector<ReducedWord> pushed;
  ReducedWord acc(a);
  for (int step = 0; step < 500; ++step) {
    const bool push = undos.empty() || (rng() % 3 != 0);
    if (push) {
      const auto w = random_word(rng, a, len(rng));
      undos.push_back(stack.push_word(w.letters()));
      pushed.push_back(w);
      acc = multiply(acc, w);
    } else {
      stack.undo(undos.back());
      undos.pop_back();
      acc = multiply(acc, invert(pushed.back()));
      pushed.pop_back();
    }
    const auto expect = acc.letters();
    const auto got = stack.letters();
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expect[i]);
  }
}
