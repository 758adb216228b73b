// Brute-force reference implementations. They share no algorithm with the
// library: census by vertex-permutation minima over multiplicity matrices,
// isomorphism by trying every flag bijection, gluing by the flag formula,
// circuits by transitive closure, End(M,t) by explicit index sums.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "modop/category.hpp"
#include "modop/graph.hpp"
#include "modop/matrix.hpp"

namespace oracle {

using modop::DualGraph;
using modop::Genus;

inline std::uint64_t factorial(std::uint64_t n) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

// ------------------------------------------------------------------ census

struct Census {
  std::size_t count = 0;
  std::multiset<std::uint64_t> aut_orders;
};

namespace detail {

// Every symmetric nonnegative matrix (upper triangle incl. diagonal) with
// entry sum `total`.
inline void matrices(std::size_t v, std::size_t total,
                     const std::function<void(const std::vector<std::vector<std::size_t>>&)>& emit) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i; j < v; ++j) cells.emplace_back(i, j);
  std::vector<std::vector<std::size_t>> m(v, std::vector<std::size_t>(v, 0));
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t c, std::size_t left) {
    if (c + 1 == cells.size()) {
      auto [i, j] = cells[c];
      m[i][j] = m[j][i] = left;
      emit(m);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      auto [i, j] = cells[c];
      m[i][j] = m[j][i] = k;
      rec(c + 1, left - k);
    }
  };
  if (cells.empty()) return;
  rec(0, total);
}

inline bool connected(const std::vector<std::vector<std::size_t>>& m) {
  std::size_t v = m.size();
  std::vector<bool> seen(v, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t y = 0; y < v; ++y)
      if (!seen[y] && (m[x][y] > 0 || m[y][x] > 0)) {
        seen[y] = true;
        stack.push_back(y);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

// Encoding of (genera, matrix, leg positions) after renumbering vertex i as
// old vertex perm[i].
inline std::vector<std::size_t> encode(const std::vector<std::size_t>& perm,
                                       const std::vector<Genus>& genus,
                                       const std::vector<std::vector<std::size_t>>& m,
                                       const std::vector<std::size_t>& leg_at) {
  std::size_t v = perm.size();
  std::vector<std::size_t> inv(v);
  for (std::size_t i = 0; i < v; ++i) inv[perm[i]] = i;
  std::vector<std::size_t> code;
  for (std::size_t i = 0; i < v; ++i) code.push_back(genus[perm[i]]);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = 0; j < v; ++j) code.push_back(m[perm[i]][perm[j]]);
  for (std::size_t l : leg_at) code.push_back(inv[l]);
  return code;
}

inline void count_orbit(Census& out, std::set<std::vector<std::size_t>>& seen,
                        const std::vector<Genus>& genus,
                        const std::vector<std::vector<std::size_t>>& m,
                        const std::vector<std::size_t>& leg_at, std::uint64_t edge_symmetry) {
  std::size_t v = genus.size();
  std::vector<std::size_t> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> self = encode(perm, genus, m, leg_at);
  std::vector<std::size_t> best = self;
  std::uint64_t stab = 0;
  do {
    std::vector<std::size_t> c = encode(perm, genus, m, leg_at);
    if (c == self) ++stab;
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (seen.insert(best).second) {
    ++out.count;
    out.aut_orders.insert(stab * edge_symmetry);
  }
}

}  // namespace detail

enum class Filter { stable, forest };

// Connected stable graphs of type (g,n) with labelled legs. |Aut| of a class
// is the vertex stabilizer times m! per multi-edge and 2^m m! per loop bundle.
inline Census stable_census(Genus g, std::size_t n, Filter filter = Filter::stable) {
  Census out;
  long long excess = 2 * static_cast<long long>(g) - 2 + static_cast<long long>(n);
  if (excess <= 0) return out;
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t v = 1; v <= static_cast<std::size_t>(excess); ++v) {
    std::vector<Genus> genus(v, 0);
    while (true) {
      Genus sum = std::accumulate(genus.begin(), genus.end(), Genus{0});
      long long e = static_cast<long long>(g) - static_cast<long long>(sum) + static_cast<long long>(v) - 1;
      bool forest_ok = filter != Filter::forest || sum == g;
      if (sum <= g && e >= 0 && forest_ok) {
        detail::matrices(v, static_cast<std::size_t>(e), [&](const auto& m) {
          if (!detail::connected(m)) return;
          std::uint64_t sym = 1;
          for (std::size_t i = 0; i < v; ++i) {
            sym *= factorial(m[i][i]) * (std::uint64_t{1} << m[i][i]);
            for (std::size_t j = i + 1; j < v; ++j) sym *= factorial(m[i][j]);
          }
          std::vector<std::size_t> leg_at(n, 0);
          while (true) {
            bool stable = true;
            for (std::size_t x = 0; x < v && stable; ++x) {
              long long val = 0;
              for (std::size_t y = 0; y < v; ++y) val += static_cast<long long>(m[x][y] * (x == y ? 2 : 1));
              for (std::size_t l : leg_at) val += l == x;
              stable = 2 * static_cast<long long>(genus[x]) - 2 + val > 0;
            }
            if (stable) detail::count_orbit(out, seen, genus, m, leg_at, sym);
            std::size_t k = 0;
            while (k < n && ++leg_at[k] == v) leg_at[k++] = 0;
            if (k == n) break;
          }
        });
      }
      std::size_t k = 0;
      while (k < v && ++genus[k] > g) genus[k++] = 0;
      if (k == v) break;
    }
  }
  return out;
}

enum class DirectedFilter { all, forest, prop };

// Directed variant: legs "i*" are in, "o*" are out. d[u][v] counts edges from
// an out-flag at u to an in-flag at v; a loop has both ends at one vertex and
// no flip symmetry because its flags differ in direction.
inline Census directed_census(Genus g, std::size_t n_out, std::size_t n_in, DirectedFilter filter) {
  Census out;
  std::size_t n = n_out + n_in;
  long long excess = 2 * static_cast<long long>(g) - 2 + static_cast<long long>(n);
  if (excess <= 0) return out;
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t v = 1; v <= static_cast<std::size_t>(excess); ++v) {
    std::vector<Genus> genus(v, 0);
    while (true) {
      Genus sum = std::accumulate(genus.begin(), genus.end(), Genus{0});
      long long e = static_cast<long long>(g) - static_cast<long long>(sum) + static_cast<long long>(v) - 1;
      bool ok = sum <= g && e >= 0;
      if (filter == DirectedFilter::forest && sum != g) ok = false;
      if (filter == DirectedFilter::prop && sum != 0) ok = false;
      if (ok) {
        // All v x v matrices with entry sum e.
        std::vector<std::vector<std::size_t>> d(v, std::vector<std::size_t>(v, 0));
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t c, std::size_t left) {
          if (c + 1 == v * v) {
            d[c / v][c % v] = left;
          } else {
            for (std::size_t k = 0; k <= left; ++k) {
              d[c / v][c % v] = k;
              rec(c + 1, left - k);
            }
            return;
          }
          std::vector<std::vector<std::size_t>> sym_m(v, std::vector<std::size_t>(v, 0));
          for (std::size_t i = 0; i < v; ++i)
            for (std::size_t j = 0; j < v; ++j) sym_m[i][j] += d[i][j] + d[j][i];
          if (!detail::connected(sym_m)) return;
          if (filter == DirectedFilter::prop) {
            std::vector<std::vector<bool>> reach(v, std::vector<bool>(v, false));
            for (std::size_t i = 0; i < v; ++i)
              for (std::size_t j = 0; j < v; ++j) reach[i][j] = d[i][j] > 0;
            for (std::size_t k = 0; k < v; ++k)
              for (std::size_t i = 0; i < v; ++i)
                for (std::size_t j = 0; j < v; ++j)
                  if (reach[i][k] && reach[k][j]) reach[i][j] = true;
            for (std::size_t i = 0; i < v; ++i)
              if (reach[i][i]) return;
          }
          std::uint64_t sym = 1;
          for (std::size_t i = 0; i < v; ++i)
            for (std::size_t j = 0; j < v; ++j) sym *= factorial(d[i][j]);
          std::vector<std::size_t> leg_at(n, 0);
          while (true) {
            bool stable = true;
            for (std::size_t x = 0; x < v && stable; ++x) {
              long long val = 0;
              for (std::size_t y = 0; y < v; ++y) val += static_cast<long long>(d[x][y] + d[y][x]);
              for (std::size_t l : leg_at) val += l == x;
              stable = 2 * static_cast<long long>(genus[x]) - 2 + val > 0;
            }
            if (stable) detail::count_orbit(out, seen, genus, d, leg_at, sym);
            std::size_t k = 0;
            while (k < n && ++leg_at[k] == v) leg_at[k++] = 0;
            if (k == n) break;
          }
        };
        rec(0, static_cast<std::size_t>(e));
      }
      std::size_t k = 0;
      while (k < v && ++genus[k] > g) genus[k++] = 0;
      if (k == v) break;
    }
  }
  return out;
}

// ------------------------------------------------------------ isomorphism

// Every flag bijection a -> b preserving involution, incidence, genus,
// direction and (optionally) leg names. Isolated vertices contribute the
// factorial of each genus class. Only for small graphs.
inline std::vector<std::vector<std::size_t>> flag_isomorphisms(const DualGraph& a, const DualGraph& b,
                                                               bool fix_legs) {
  std::vector<std::vector<std::size_t>> out;
  std::size_t nf = a.flag_count();
  if (nf != b.flag_count() || a.vertex_count() != b.vertex_count() || a.directed() != b.directed()) return out;
  std::vector<std::size_t> p(nf);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    std::map<std::size_t, std::size_t> vmap, vback;
    for (std::size_t f = 0; f < nf && ok; ++f) {
      std::size_t h = p[f];
      if (p[a.partner(f)] != b.partner(h)) ok = false;
      if (a.is_leg(f) && fix_legs && a.flag_name(f) != b.flag_name(h)) ok = false;
      if (a.directed() && a.direction(f) != b.direction(h)) ok = false;
      std::size_t u = a.vertex_of(f), w = b.vertex_of(h);
      auto [it, fresh] = vmap.emplace(u, w);
      if (!fresh && it->second != w) ok = false;
      auto [jt, fresh2] = vback.emplace(w, u);
      if (!fresh2 && jt->second != u) ok = false;
      if (a.genus(u) != b.genus(w)) ok = false;
    }
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::map<Genus, std::size_t> isolated_by_genus(const DualGraph& g) {
  std::map<Genus, std::size_t> m;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (g.valence(v) == 0) ++m[g.genus(v)];
  return m;
}

inline bool isomorphic(const DualGraph& a, const DualGraph& b, bool fix_legs) {
  if (isolated_by_genus(a) != isolated_by_genus(b)) return false;
  return !flag_isomorphisms(a, b, fix_legs).empty();
}

inline std::uint64_t automorphism_count(const DualGraph& g, bool fix_legs) {
  std::uint64_t k = flag_isomorphisms(g, g, fix_legs).size();
  for (const auto& [_, c] : isolated_by_genus(g)) k *= factorial(c);
  return k;
}

// ------------------------------------------------------------- structure

inline std::vector<std::size_t> vertex_components(const DualGraph& g) {
  std::size_t nv = g.vertex_count();
  std::vector<std::size_t> comp(nv, SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t s = 0; s < nv; ++s) {
    if (comp[s] != SIZE_MAX) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t f = 0; f < g.flag_count(); ++f) {
        if (g.vertex_of(f) != x || g.is_leg(f)) continue;
        std::size_t y = g.vertex_of(g.partner(f));
        if (comp[y] == SIZE_MAX) {
          comp[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return comp;
}

// Genus of the component containing vertex v: sum of genera + edges - vertices + 1.
inline Genus genus_of_component_at(const DualGraph& g, std::size_t v) {
  std::vector<std::size_t> comp = vertex_components(g);
  long long sum = 0, verts = 0, flags = 0;
  for (std::size_t x = 0; x < g.vertex_count(); ++x)
    if (comp[x] == comp[v]) {
      sum += static_cast<long long>(g.genus(x));
      ++verts;
    }
  for (std::size_t f = 0; f < g.flag_count(); ++f)
    if (!g.is_leg(f) && comp[g.vertex_of(f)] == comp[v]) ++flags;
  return static_cast<Genus>(sum + flags / 2 - verts + 1);
}

inline bool forest(const DualGraph& g) {
  std::vector<std::size_t> comp = vertex_components(g);
  std::size_t ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::size_t internal = 0;
  for (std::size_t f = 0; f < g.flag_count(); ++f) internal += !g.is_leg(f);
  return internal / 2 + ncomp == g.vertex_count();
}

// Directed circuit via transitive closure; edges run from the out-flag's
// vertex to the in-flag's vertex.
inline bool directed_circuit(const DualGraph& g) {
  std::size_t nv = g.vertex_count();
  std::vector<std::vector<bool>> reach(nv, std::vector<bool>(nv, false));
  for (std::size_t f = 0; f < g.flag_count(); ++f) {
    if (g.is_leg(f) || g.direction(f) != modop::Direction::out) continue;
    reach[g.vertex_of(f)][g.vertex_of(g.partner(f))] = true;
  }
  for (std::size_t k = 0; k < nv; ++k)
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = 0; j < nv; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  for (std::size_t i = 0; i < nv; ++i)
    if (reach[i][i]) return true;
  return false;
}

// ----------------------------------------------------------------- gluing

struct GlueExpectation {
  std::map<std::string, std::string> involution;  // on the source legs of f
  std::map<std::string, std::string> alpha;       // composite target leg -> source leg
};

// The composite's flag involution from the gluing formula: keep f's edges; a
// leg x of f's glue graph is paired with alpha_f(sigma_h(alpha_f^-1(x))).
inline GlueExpectation expected_glue(const modop::GMorphism& f, const modop::GMorphism& h) {
  GlueExpectation out;
  std::map<std::string, std::string> alpha_inv;
  for (const auto& [t, s] : f.alpha) alpha_inv[s] = t;
  const DualGraph& g1 = f.glue;
  const DualGraph& g2 = h.glue;
  for (std::size_t x = 0; x < g1.flag_count(); ++x) {
    const std::string& name = g1.flag_name(x);
    if (!g1.is_leg(x)) {
      out.involution[name] = g1.flag_name(g1.partner(x));
      continue;
    }
    std::size_t y = *g2.flag_index(alpha_inv.at(name));
    out.involution[name] = f.alpha.at(g2.flag_name(g2.partner(y)));
  }
  for (const auto& [t, s] : h.alpha) out.alpha[t] = f.alpha.at(s);
  return out;
}

// ------------------------------------------------------------ contraction

// End(M,t) on a morphism by explicit sums. Columns index digits on the glue
// flags in sorted order, rows digits on target legs in sorted order. `dims`
// gives the dimension per glue flag; `form(a, b)` is the pairing for an edge
// given its two flags (the caller decides which flag indexes the row).
inline modop::Matrix end_matrix(const modop::GMorphism& m, const std::vector<std::size_t>& dims,
                                const std::function<modop::Rational(std::size_t, std::size_t,
                                                                    std::size_t, std::size_t)>& form) {
  const DualGraph& g = m.glue;
  const DualGraph& tg = m.target.graph();
  std::size_t nf = g.flag_count();
  std::vector<std::size_t> tlegs;
  for (std::size_t l = 0; l < tg.flag_count(); ++l) tlegs.push_back(*g.flag_index(m.alpha.at(tg.flag_name(l))));
  std::size_t cols = 1, rows = 1;
  for (std::size_t f = 0; f < nf; ++f) cols *= dims[f];
  for (std::size_t f : tlegs) rows *= dims[f];
  modop::Matrix out(rows, cols);
  std::vector<std::size_t> digit(nf, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t rest = c;
    for (std::size_t f = nf; f > 0; --f) {
      digit[f - 1] = rest % dims[f - 1];
      rest /= dims[f - 1];
    }
    modop::Rational w = 1;
    for (std::size_t f = 0; f < nf && w != 0; ++f) {
      std::size_t p = g.partner(f);
      if (p > f) w *= form(f, p, digit[f], digit[p]);
    }
    if (w == 0) continue;
    std::size_t r = 0;
    for (std::size_t f : tlegs) r = r * dims[f] + digit[f];
    out(r, c) += w;
  }
  return out;
}

}  // namespace oracle
