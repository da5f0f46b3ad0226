#ifndef SLOPEGROWTH_WORD_HPP
#define SLOPEGROWTH_WORD_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slopegrowth/errors.hpp"

namespace slopegrowth {

// Generating set of a free group. Labels are the tokens accepted by the
// word-literal parser.
struct Alphabet {
  std::string name;
  std::vector<std::string> labels;

  int rank() const { return static_cast<int>(labels.size()); }
  // -1 when the label is unknown.
  int index_of(std::string_view label) const;

  // Alphabet "name" with labels prefix1..prefixN.
  static std::shared_ptr<const Alphabet> numbered(std::string name,
                                                  const std::string& prefix,
                                                  int rank);

  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

// One signed generator occurrence.
struct Letter {
  std::uint32_t index = 0;
  std::int32_t sign = 1;  // +1 or -1

  Letter inverse() const { return {index, -sign}; }
  bool cancels(const Letter& o) const {
    return index == o.index && sign == -o.sign;
  }

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter& a, const Letter& b) {
    // positive occurrence sorts before negative, per generator
    if (auto c = a.index <=> b.index; c != 0) return c;
    return b.sign <=> a.sign;
  }
};

// A freely reduced word. Always stored reduced, so length() is the word
// metric d(1, w) in the Cayley graph.
class ReducedWord {
 public:
  ReducedWord() = default;
  explicit ReducedWord(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}

  // Single stack pass over an arbitrary raw letter sequence.
  static ReducedWord reduce(AlphabetPtr alphabet, std::span<const Letter> raw);

  // Parses whitespace-separated tokens like `a1`, `a2^-1`, `b3`; an empty
  // string is the identity. Unknown tokens are rejected.
  static ReducedWord parse(AlphabetPtr alphabet, std::string_view text);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::span<const Letter> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  std::string str() const;

  bool operator==(const ReducedWord& o) const;
  // (length, lexicographic) order; used for deterministic dedup tie-breaks.
  bool shortlex_less(const ReducedWord& o) const;

 private:
  friend ReducedWord multiply(const ReducedWord&, const ReducedWord&);
  friend ReducedWord invert(const ReducedWord&);
  friend struct GeneratorMap;

  AlphabetPtr alphabet_;
  std::vector<Letter> letters_;
};

ReducedWord multiply(const ReducedWord& u, const ReducedWord& v);
ReducedWord invert(const ReducedWord& w);

// A homomorphism between free groups, given on generators.
struct GeneratorMap {
  AlphabetPtr source;
  AlphabetPtr target;
  std::vector<ReducedWord> images;  // one per source generator

  // Freely reduced image of w under the extension of the generator images.
  ReducedWord apply(const ReducedWord& w) const;
};

namespace detail {

// Reduction stack with O(1) amortized push/undo; the workhorse of the
// incremental DFS enumeration. Image words pushed through push_word must be
// reduced, so cancellation consumes a prefix before any push happens.
class CancelStack {
 public:
  struct Undo {
    std::uint32_t pushed = 0;
    std::uint32_t popped = 0;
  };

  Undo push_word(std::span<const Letter> w) {
    Undo u;
    std::size_t i = 0;
    while (i < w.size() && !stack_.empty() && stack_.back().cancels(w[i])) {
      journal_.push_back(stack_.back());
      stack_.pop_back();
      ++u.popped;
      ++i;
    }
    for (; i < w.size(); ++i) stack_.push_back(w[i]);
    u.pushed = static_cast<std::uint32_t>(w.size() - u.popped);
    return u;
  }

  void undo(const Undo& u) {
    stack_.resize(stack_.size() - u.pushed);
    for (std::uint32_t k = 0; k < u.popped; ++k) {
      stack_.push_back(journal_.back());
      journal_.pop_back();
    }
  }

  std::size_t size() const { return stack_.size(); }
  std::span<const Letter> letters() const { return stack_; }

 private:
  std::vector<Letter> stack_;
  std::vector<Letter> journal_;  // letters removed by cancellation, in pop order
};

}  // namespace detail

}  // namespace slopegrowth

#endif
