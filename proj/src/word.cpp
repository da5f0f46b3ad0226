#include "slopegrowth/word.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace slopegrowth {

int Alphabet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

AlphabetPtr Alphabet::numbered(std::string name, const std::string& prefix,
                               int rank) {
  if (rank < 1) throw input_error("alphabet rank must be >= 1");
  auto a = std::make_shared<Alphabet>();
  a->name = std::move(name);
  a->labels.reserve(rank);
  for (int i = 1; i <= rank; ++i) a->labels.push_back(prefix + std::to_string(i));
  return a;
}

namespace {

void check_same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b,
                         const char* op) {
  if (a == b) return;
  if (a && b && *a == *b) return;
  throw input_error(std::string("alphabet mismatch in ") + op);
}

void push_reduced(std::vector<Letter>& out, const Letter& l) {
  if (!out.empty() && out.back().cancels(l))
    out.pop_back();
  else
    out.push_back(l);
}

}  // namespace

ReducedWord ReducedWord::reduce(AlphabetPtr alphabet,
                                std::span<const Letter> raw) {
  if (!alphabet) throw input_error("null alphabet");
  ReducedWord w(alphabet);
  w.letters_.reserve(raw.size());
  for (const Letter& l : raw) {
    if (l.index >= static_cast<std::uint32_t>(alphabet->rank()))
      throw input_error("generator index out of range for alphabet " +
                        alphabet->name);
    if (l.sign != 1 && l.sign != -1) throw input_error("letter sign must be +-1");
    push_reduced(w.letters_, l);
  }
  return w;
}

ReducedWord ReducedWord::parse(AlphabetPtr alphabet, std::string_view text) {
  if (!alphabet) throw input_error("null alphabet");
  std::vector<Letter> raw;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    std::string label = tok;
    long long exp = 1;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      label = tok.substr(0, caret);
      std::string_view es{tok.data() + caret + 1, tok.size() - caret - 1};
      auto [p, ec] = std::from_chars(es.data(), es.data() + es.size(), exp);
      if (ec != std::errc() || p != es.data() + es.size())
        throw input_error("bad exponent in token '" + tok + "'");
    }
    int idx = alphabet->index_of(label);
    if (idx < 0)
      throw input_error("unknown generator '" + label + "' for alphabet " +
                        alphabet->name);
    Letter l{static_cast<std::uint32_t>(idx), exp < 0 ? -1 : 1};
    for (long long k = 0; k < std::abs(exp); ++k) raw.push_back(l);
  }
  return reduce(std::move(alphabet), raw);
}

std::string ReducedWord::str() const {
  std::string out;
  for (const Letter& l : letters_) {
    if (!out.empty()) out += ' ';
    out += alphabet_->labels[l.index];
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

bool ReducedWord::operator==(const ReducedWord& o) const {
  if (letters_ != o.letters_) return false;
  if (alphabet_ == o.alphabet_) return true;
  return alphabet_ && o.alphabet_ && *alphabet_ == *o.alphabet_;
}

bool ReducedWord::shortlex_less(const ReducedWord& o) const {
  if (letters_.size() != o.letters_.size())
    return letters_.size() < o.letters_.size();
  return std::lexicographical_compare(letters_.begin(), letters_.end(),
                                      o.letters_.begin(), o.letters_.end());
}

ReducedWord multiply(const ReducedWord& u, const ReducedWord& v) {
  check_same_alphabet(u.alphabet_, v.alphabet_, "multiply");
  ReducedWord w(u.alphabet_);
  w.letters_ = u.letters_;
  for (const Letter& l : v.letters_) push_reduced(w.letters_, l);
  return w;
}

ReducedWord invert(const ReducedWord& w) {
  ReducedWord r(w.alphabet_);
  r.letters_.reserve(w.letters_.size());
  for (auto it = w.letters_.rbegin(); it != w.letters_.rend(); ++it)
    r.letters_.push_back(it->inverse());
  return r;
}

ReducedWord GeneratorMap::apply(const ReducedWord& w) const {
  check_same_alphabet(w.alphabet(), source, "apply_map");
  detail::CancelStack st;
  std::vector<Letter> inv;
  for (const Letter& l : w.letters()) {
    const ReducedWord& img = images.at(l.index);
    if (l.sign > 0) {
      st.push_word(img.letters());
    } else {
      inv.clear();
      for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it)
        inv.push_back(it->inverse());
      st.push_word(inv);
    }
  }
  std::vector<Letter> letters(st.letters().begin(), st.letters().end());
  return ReducedWord::reduce(target, letters);
}

}  // namespace slopegrowth
