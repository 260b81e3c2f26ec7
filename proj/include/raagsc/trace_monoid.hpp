#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace raagsc {

// Lexicographically least word in the commutation class of `word`.
//
// `less(a, b)` orders symbols; `commute(a, b)` says whether two distinct
// symbols may be swapped when adjacent. Equal symbols never commute.
// Greedy heap extraction: at each step emit the least symbol with no
// earlier unemitted symbol it fails to commute with. O(n^2).
template <class Sym, class Less, class Commute>
std::vector<Sym> lex_normal_form(std::span<const Sym> word, Less less, Commute commute) {
  const std::size_t n = word.size();
  std::vector<unsigned> blockers(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (word[i] == word[j] || !commute(word[i], word[j])) ++blockers[j];

  std::vector<char> used(n, 0);
  std::vector<Sym> out;
  out.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j)
      if (!used[j] && blockers[j] == 0 && (best == n || less(word[j], word[best]))) best = j;
    used[best] = 1;
    out.push_back(word[best]);
    for (std::size_t j = best + 1; j < n; ++j)
      if (!used[j] && (word[best] == word[j] || !commute(word[best], word[j]))) --blockers[j];
  }
  return out;
}

}  // namespace raagsc
