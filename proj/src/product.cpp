#include "slopegrowth/product.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "slopegrowth/detail/walk.hpp"

namespace slopegrowth {

namespace detail {

WalkTables::WalkTables(const ProductGroupSpec& spec) {
  const int p = spec.abstract_alphabet->rank();
  slots = 2 * p;
  img1.resize(slots);
  img2.resize(slots);
  abstract_letter.resize(slots);
  for (int i = 0; i < p; ++i) {
    const auto fill = [&](int slot, int sign) {
      abstract_letter[slot] = Letter{static_cast<std::uint32_t>(i), sign};
      const auto take = [&](const ReducedWord& img, std::vector<Letter>& out) {
        if (sign > 0) {
          out.assign(img.letters().begin(), img.letters().end());
        } else {
          for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it)
            out.push_back(it->inverse());
        }
      };
      take(spec.h1.images.at(i), img1[slot]);
      take(spec.h2.images.at(i), img2[slot]);
    };
    fill(2 * i, +1);
    fill(2 * i + 1, -1);
  }
}

std::vector<std::vector<int>> reduced_prefixes(const WalkTables& t, int depth) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  const auto rec = [&](auto&& self, int last) -> void {
    if (static_cast<int>(cur.size()) == depth) {
      out.push_back(cur);
      return;
    }
    for (int s = 0; s < t.slots; ++s) {
      if (last >= 0 && s == WalkTables::inverse_slot(last)) continue;
      cur.push_back(s);
      self(self, s);
      cur.pop_back();
    }
  };
  if (depth >= 0) rec(rec, -1);
  return out;
}

}  // namespace detail

Displacement displacement(const ProductGroupSpec& spec, const ReducedWord& w) {
  return Displacement{
      static_cast<std::int64_t>(spec.h1.apply(w).length()),
      static_cast<std::int64_t>(spec.h2.apply(w).length())};
}

std::int64_t completeness_horizon(const ProductGroupSpec& spec, int l_max) {
  if (spec.lambda <= 0)
    throw config_error("completeness factor lambda must be positive");
  if (l_max < 0) throw input_error("l_max must be nonnegative");
  return static_cast<std::int64_t>(std::floor(spec.lambda * l_max + 1e-9));
}

namespace {

ReducedWord word_from_letters(const AlphabetPtr& a, std::span<const Letter> ls) {
  return ReducedWord::reduce(a, ls);
}

struct RecordWalker {
  const ProductGroupSpec& spec;
  const detail::WalkTables& tables;
  int l_max;
  std::vector<Letter> abstract_stack;
  detail::CancelStack s1, s2;

  template <class Emit>
  void run(Emit&& emit) {
    rec(0, -1, emit);
  }

  template <class Emit>
  void rec(int depth, int last_slot, Emit&& emit) {
    for (int s = 0; s < tables.slots; ++s) {
      if (last_slot >= 0 && s == detail::WalkTables::inverse_slot(last_slot))
        continue;
      abstract_stack.push_back(tables.abstract_letter[s]);
      const auto u1 = s1.push_word(tables.img1[s]);
      const auto u2 = s2.push_word(tables.img2[s]);
      emit(*this);
      if (depth + 1 < l_max) rec(depth + 1, s, emit);
      s2.undo(u2);
      s1.undo(u1);
      abstract_stack.pop_back();
    }
  }

  ElementRecord record() const {
    ElementRecord r;
    r.abstract = word_from_letters(spec.abstract_alphabet, abstract_stack);
    r.image1 = word_from_letters(spec.factor1, s1.letters());
    r.image2 = word_from_letters(spec.factor2, s2.letters());
    r.disp = Displacement{static_cast<std::int64_t>(s1.size()),
                          static_cast<std::int64_t>(s2.size())};
    return r;
  }
};

}  // namespace

void enumerate(const ProductGroupSpec& spec, int l_max,
               const EnumerateOptions& opts,
               const std::function<void(const ElementRecord&)>& sink) {
  if (l_max < 0) throw input_error("l_max must be nonnegative");
  if (opts.dedup == Dedup::off && !spec.certified_injective)
    throw config_error(
        "dedup=off requires a certified-injective spec; distinct abstract "
        "words could otherwise alias the same group element");
  if (l_max == 0) return;

  detail::WalkTables tables(spec);
  RecordWalker walker{spec, tables, l_max};

  if (opts.dedup == Dedup::off) {
    walker.run([&](const RecordWalker& w) { sink(w.record()); });
    return;
  }

  // Keyed by canonical image-pair serialization; value is the shortlex
  // minimal abstract representative seen so far.
  std::map<std::pair<std::string, std::string>, ElementRecord> seen;
  walker.run([&](const RecordWalker& w) {
    ElementRecord r = w.record();
    if (r.image1.is_identity() && r.image2.is_identity()) return;  // identity element
    auto key = std::make_pair(r.image1.str(), r.image2.str());
    auto it = seen.find(key);
    if (it == seen.end()) {
      if (seen.size() >= opts.dedup_budget)
        throw resource_error(
            "dedup memory budget exceeded at abstract depth " +
            std::to_string(r.abstract.length()));
      seen.emplace(std::move(key), std::move(r));
    } else if (r.abstract.shortlex_less(it->second.abstract)) {
      it->second = std::move(r);
    }
  });
  for (const auto& [key, rec] : seen) sink(rec);
}

void walk_displacements(const ProductGroupSpec& spec, int l_max,
                        const std::function<void(const Displacement&)>& visit) {
  if (l_max < 1) return;
  detail::WalkTables tables(spec);
  detail::walk_all(tables, l_max, [&](std::int64_t d1, std::int64_t d2) {
    visit(Displacement{d1, d2});
  });
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

GeneratorMap map_from_literals(const AlphabetPtr& src, const AlphabetPtr& dst,
                               const std::vector<std::string>& literals) {
  GeneratorMap m{src, dst, {}};
  m.images.reserve(literals.size());
  for (const auto& lit : literals) m.images.push_back(ReducedWord::parse(dst, lit));
  return m;
}

}  // namespace

ProductGroupSpec preset_example31() {
  ProductGroupSpec s;
  s.factor1 = Alphabet::numbered("A", "a", 2);
  s.factor2 = Alphabet::numbered("B", "b", 2);
  s.abstract_alphabet = Alphabet::numbered("G", "s", 2);
  s.h1 = map_from_literals(s.abstract_alphabet, s.factor1, {"a1", "a2"});
  s.h2 = map_from_literals(s.abstract_alphabet, s.factor2, {"b1", "b2"});
  s.certified_injective = true;
  s.lambda = kSqrt2;  // d1 = d2 = abstract length, so r = sqrt(2) * length
  s.name = "example31";
  return s;
}

ProductGroupSpec preset_example41() {
  ProductGroupSpec s;
  s.factor1 = Alphabet::numbered("A", "a", 2);
  s.factor2 = Alphabet::numbered("B", "b", 2);
  s.abstract_alphabet = Alphabet::numbered("G", "x", 2);
  s.h1 = map_from_literals(s.abstract_alphabet, s.factor1, {"a1", "a2"});
  s.h2 = map_from_literals(s.abstract_alphabet, s.factor2, {"b1", "b2 b2"});
  s.certified_injective = true;
  s.lambda = kSqrt2;  // d1 = length exactly, d2 >= length
  s.name = "example41";
  return s;
}

ProductGroupSpec preset_example51(int n_rank) {
  if (n_rank < 3) throw input_error("example51 requires rank N >= 3");
  ProductGroupSpec s;
  s.factor1 = Alphabet::numbered("A", "a", 2);
  s.factor2 = Alphabet::numbered("B", "b", n_rank);
  s.abstract_alphabet = Alphabet::numbered("G", "g", n_rank);
  std::vector<std::string> img1(n_rank, "");
  img1[0] = "a1";
  img1[1] = "a2";
  std::vector<std::string> img2;
  for (int i = 1; i <= n_rank; ++i) img2.push_back("b" + std::to_string(i));
  s.h1 = map_from_literals(s.abstract_alphabet, s.factor1, img1);
  s.h2 = map_from_literals(s.abstract_alphabet, s.factor2, img2);
  s.certified_injective = true;  // h2 is an isomorphism onto F_N
  s.lambda = 1.0;                // d2 = abstract length exactly, so r >= length
  s.name = "example51";
  return s;
}

ProductGroupSpec make_preset(const std::string& name, int n_rank) {
  if (name == "example31") return preset_example31();
  if (name == "example41") return preset_example41();
  if (name == "example51") return preset_example51(n_rank);
  throw input_error("unknown preset '" + name +
                    "'; valid presets: example31, example41, example51");
}

std::string ProductGroupSpec::canonical_text() const {
  std::ostringstream out;
  const auto alphabet_line = [&](const char* key, const AlphabetPtr& a) {
    out << key << " = " << a->name << " :";
    for (const auto& l : a->labels) out << ' ' << l;
    out << '\n';
  };
  alphabet_line("factor1", factor1);
  alphabet_line("factor2", factor2);
  out << "generators =";
  for (const auto& l : abstract_alphabet->labels) out << ' ' << l;
  out << '\n';
  for (int i = 0; i < abstract_alphabet->rank(); ++i) {
    out << abstract_alphabet->labels[i] << " = " << h1.images[i].str() << " | "
        << h2.images[i].str() << '\n';
  }
  out << "injective = " << (certified_injective ? "true" : "false") << '\n';
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", lambda);
  out << "lambda = " << buf << '\n';
  return out.str();
}

std::string ProductGroupSpec::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

AlphabetPtr parse_factor(const std::string& value, const char* key) {
  const auto colon = value.find(':');
  if (colon == std::string::npos)
    throw format_error(std::string(key) + " must be '<name> : <labels...>'");
  auto a = std::make_shared<Alphabet>();
  a->name = trim(value.substr(0, colon));
  a->labels = split_ws(value.substr(colon + 1));
  if (a->name.empty() || a->labels.empty())
    throw format_error(std::string(key) + " needs a name and at least one label");
  for (std::size_t i = 0; i < a->labels.size(); ++i)
    for (std::size_t j = i + 1; j < a->labels.size(); ++j)
      if (a->labels[i] == a->labels[j])
        throw format_error("duplicate label '" + a->labels[i] + "' in " + key);
  return a;
}

}  // namespace

ProductGroupSpec parse_spec_text(std::string_view text) {
  ProductGroupSpec spec;
  std::vector<std::string> gen_labels;
  std::map<std::string, std::pair<std::string, std::string>> image_lines;

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw format_error("expected 'key = value' line, got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "factor1") {
      spec.factor1 = parse_factor(value, "factor1");
    } else if (key == "factor2") {
      spec.factor2 = parse_factor(value, "factor2");
    } else if (key == "generators") {
      gen_labels = split_ws(value);
    } else if (key == "injective") {
      if (value != "true" && value != "false")
        throw format_error("injective must be true or false");
      spec.certified_injective = value == "true";
    } else if (key == "lambda") {
      try {
        spec.lambda = std::stod(value);
      } catch (const std::exception&) {
        throw format_error("bad lambda value: " + value);
      }
    } else {
      const auto bar = value.find('|');
      if (bar == std::string::npos)
        throw format_error("generator image line needs '<img1> | <img2>': " +
                           line);
      image_lines[key] = {trim(value.substr(0, bar)),
                          trim(value.substr(bar + 1))};
    }
  }

  if (!spec.factor1 || !spec.factor2)
    throw format_error("spec needs factor1 and factor2 alphabets");
  if (gen_labels.empty()) throw format_error("spec needs a generators list");

  auto abstract = std::make_shared<Alphabet>();
  abstract->name = "G";
  abstract->labels = gen_labels;
  spec.abstract_alphabet = abstract;

  spec.h1 = GeneratorMap{abstract, spec.factor1, {}};
  spec.h2 = GeneratorMap{abstract, spec.factor2, {}};
  for (const auto& g : gen_labels) {
    auto it = image_lines.find(g);
    if (it == image_lines.end())
      throw format_error("missing image line for generator '" + g + "'");
    spec.h1.images.push_back(ReducedWord::parse(spec.factor1, it->second.first));
    spec.h2.images.push_back(ReducedWord::parse(spec.factor2, it->second.second));
  }
  for (const auto& [g, imgs] : image_lines)
    if (abstract->index_of(g) < 0)
      throw format_error("image line for unknown generator '" + g + "'");
  return spec;
}

ProductGroupSpec load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open spec file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto spec = parse_spec_text(buf.str());
  spec.name = path.stem().string();
  return spec;
}

}  // namespace slopegrowth
