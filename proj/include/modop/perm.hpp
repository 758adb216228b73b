#ifndef MODOP_PERM_HPP_
#define MODOP_PERM_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "modop/error.hpp"
#include "modop/graph.hpp"

namespace modop {

// Arity of a connected object: genus and number of legs.
struct GNKey {
  Genus g = 0;
  std::size_t n = 0;

  friend bool operator==(const GNKey&, const GNKey&) = default;
  friend auto operator<=>(const GNKey&, const GNKey&) = default;

  // 2g - 2 + n, the quantity bounded in census and monad checks.
  long long excess() const noexcept {
    return 2 * static_cast<long long>(g) - 2 + static_cast<long long>(n);
  }
  bool stable() const noexcept { return excess() > 0; }
};

inline std::string to_string(const GNKey& k) {
  return "(" + std::to_string(k.g) + "," + std::to_string(k.n) + ")";
}

// A permutation of {0..n-1}; perm[i] is the image of i.
using Perm = std::vector<std::size_t>;

inline Perm identity_perm(std::size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline bool is_perm(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  for (std::size_t x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

// (a o b)(i) = a(b(i))
inline Perm compose(const Perm& a, const Perm& b) {
  Perm c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
  return c;
}

inline Perm inverse(const Perm& p) {
  Perm q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = i;
  return q;
}

// Indices j_1..j_m with p = s_{j_m} o ... o s_{j_1}, where s_j swaps j and
// j+1. Acting by p means applying s_{j_1} first.
inline std::vector<std::size_t> adjacent_transpositions(Perm p) {
  if (!is_perm(p)) throw PreconditionError("not a permutation");
  std::vector<std::size_t> out;
  for (std::size_t pass = 0; pass < p.size(); ++pass) {
    bool swapped = false;
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
      if (p[j] > p[j + 1]) {
        std::swap(p[j], p[j + 1]);
        out.push_back(j);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  return out;
}

// Every permutation of {0..n-1} in lexicographic order.
inline std::vector<Perm> all_perms(std::size_t n) {
  std::vector<Perm> out;
  Perm p = identity_perm(n);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace modop

#endif  // MODOP_PERM_HPP_
