#ifndef SLOPEGROWTH_DETAIL_WALK_HPP
#define SLOPEGROWTH_DETAIL_WALK_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "slopegrowth/product.hpp"

namespace slopegrowth::detail {

// Depth-first walk over reduced abstract words, factor images maintained
// incrementally on two cancellation stacks. visit(d1, d2) fires once per
// word of length 1..l_max, in a fixed generator order, so any commutative
// accumulation is identical across sharding layouts.
template <class Visit>
void walk_rec(const WalkTables& t, int l_max, int depth, int last_slot,
              CancelStack& s1, CancelStack& s2, Visit&& visit) {
  for (int s = 0; s < t.slots; ++s) {
    if (last_slot >= 0 && s == WalkTables::inverse_slot(last_slot)) continue;
    const auto u1 = s1.push_word(t.img1[s]);
    const auto u2 = s2.push_word(t.img2[s]);
    visit(static_cast<std::int64_t>(s1.size()),
          static_cast<std::int64_t>(s2.size()));
    if (depth + 1 < l_max) walk_rec(t, l_max, depth + 1, s, s1, s2, visit);
    s2.undo(u2);
    s1.undo(u1);
  }
}

template <class Visit>
void walk_all(const WalkTables& t, int l_max, Visit&& visit) {
  if (l_max < 1) return;
  CancelStack s1, s2;
  walk_rec(t, l_max, 0, -1, s1, s2, visit);
}

// Walks only the subtree below a fixed slot prefix, visiting words strictly
// longer than the prefix. The prefix itself must be visited by the caller.
template <class Visit>
void walk_subtree(const WalkTables& t, int l_max,
                  std::span<const int> prefix, Visit&& visit) {
  CancelStack s1, s2;
  int last = -1;
  for (int s : prefix) {
    s1.push_word(t.img1[s]);
    s2.push_word(t.img2[s]);
    last = s;
  }
  const int depth = static_cast<int>(prefix.size());
  if (depth < l_max) walk_rec(t, l_max, depth, last, s1, s2, visit);
}

// All reduced slot sequences of length exactly `depth`.
std::vector<std::vector<int>> reduced_prefixes(const WalkTables& t, int depth);

}  // namespace slopegrowth::detail

#endif
