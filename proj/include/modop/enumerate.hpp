#ifndef MODOP_ENUMERATE_HPP_
#define MODOP_ENUMERATE_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modop/canon.hpp"
#include "modop/error.hpp"
#include "modop/graph.hpp"
#include "modop/perm.hpp"

namespace modop {

enum class EnumFlavor { stable, cyclic, directed, dioperad, prop };

inline const char* to_string(EnumFlavor f) noexcept {
  switch (f) {
    case EnumFlavor::stable: return "stable";
    case EnumFlavor::cyclic: return "cyclic";
    case EnumFlavor::directed: return "directed";
    case EnumFlavor::dioperad: return "dioperad";
    case EnumFlavor::prop: return "prop";
  }
  return "?";
}

inline std::optional<EnumFlavor> parse_enum_flavor(std::string_view s) {
  for (EnumFlavor f : {EnumFlavor::stable, EnumFlavor::cyclic, EnumFlavor::directed,
                       EnumFlavor::dioperad, EnumFlavor::prop})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

inline bool is_directed(EnumFlavor f) noexcept {
  return f == EnumFlavor::directed || f == EnumFlavor::dioperad || f == EnumFlavor::prop;
}

// Leg names "1".."n" used by every undirected graph class.
inline std::vector<Token> numbered_legs(std::size_t n) {
  std::vector<Token> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(std::to_string(i));
  return out;
}

// Leg names for a directed key: "i1".."i<n_in>" then "o1".."o<n_out>".
inline std::vector<Token> directed_legs(std::size_t n_out, std::size_t n_in) {
  std::vector<Token> out;
  for (std::size_t i = 1; i <= n_in; ++i) out.push_back("i" + std::to_string(i));
  for (std::size_t i = 1; i <= n_out; ++i) out.push_back("o" + std::to_string(i));
  return out;
}

// A leg-fixing isomorphism class with its canonical code.
struct GraphClass {
  detail::Code code;
  DualGraph graph;
  std::size_t automorphism_order = 0;
};

struct EnumerateOptions {
  // Vertex budget. Required for unstable keys, optional otherwise.
  std::optional<std::size_t> max_vertices;
  std::size_t automorphism_bound = 1'000'000;
};

namespace detail {

struct ShapeSearch {
  Genus g;
  std::vector<Token> leg_names;
  bool require_stable;
  std::size_t max_vertices;
  std::map<Code, DualGraph> found;

  void run() {
    for (std::size_t nv = 1; nv <= max_vertices; ++nv) {
      std::vector<Genus> genus(nv, 0);
      genus_vectors(genus, 0, 0, 0);
    }
  }

  void genus_vectors(std::vector<Genus>& genus, std::size_t i, Genus lo, Genus sum) {
    if (i == genus.size()) {
      long long e = static_cast<long long>(g) - static_cast<long long>(sum) +
                    static_cast<long long>(genus.size()) - 1;
      if (e < 0) return;
      std::vector<std::pair<std::size_t, std::size_t>> types;
      for (std::size_t u = 0; u < genus.size(); ++u)
        for (std::size_t v = u; v < genus.size(); ++v) types.emplace_back(u, v);
      std::vector<std::size_t> mult(types.size(), 0);
      edge_multisets(genus, types, mult, 0, static_cast<std::size_t>(e));
      return;
    }
    for (Genus x = lo; sum + x <= g; ++x) {
      genus[i] = x;
      genus_vectors(genus, i + 1, x, sum + x);
    }
  }

  void edge_multisets(const std::vector<Genus>& genus,
                      const std::vector<std::pair<std::size_t, std::size_t>>& types,
                      std::vector<std::size_t>& mult, std::size_t t, std::size_t left) {
    if (t == types.size()) {
      if (left == 0) with_edges(genus, types, mult);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      mult[t] = k;
      edge_multisets(genus, types, mult, t + 1, left - k);
    }
    mult[t] = 0;
  }

  void with_edges(const std::vector<Genus>& genus,
                  const std::vector<std::pair<std::size_t, std::size_t>>& types,
                  const std::vector<std::size_t>& mult) {
    const std::size_t nv = genus.size();
    DisjointSets ds(nv);
    std::vector<std::size_t> degree(nv, 0);
    for (std::size_t t = 0; t < types.size(); ++t) {
      if (mult[t] == 0) continue;
      auto [u, v] = types[t];
      ds.unite(u, v);
      degree[u] += mult[t];
      degree[v] += mult[t];
    }
    for (std::size_t v = 1; v < nv; ++v)
      if (ds.find(v) != ds.find(0)) return;
    std::vector<std::size_t> need(nv, 0);
    for (std::size_t v = 0; v < nv; ++v) {
      if (!require_stable) continue;
      long long base = 2 * static_cast<long long>(genus[v]) - 2 +
                       static_cast<long long>(degree[v]);
      need[v] = base > 0 ? 0 : static_cast<std::size_t>(1 - base);
    }
    std::vector<std::size_t> counts(nv, 0);
    leg_counts(genus, types, mult, need, counts, 0, leg_names.size());
  }

  void leg_counts(const std::vector<Genus>& genus,
                  const std::vector<std::pair<std::size_t, std::size_t>>& types,
                  const std::vector<std::size_t>& mult, const std::vector<std::size_t>& need,
                  std::vector<std::size_t>& counts, std::size_t v, std::size_t left) {
    if (v + 1 == counts.size()) {
      if (left < need[v]) return;
      counts[v] = left;
      std::vector<std::size_t> owner;
      assign_legs(genus, types, mult, counts, owner);
      return;
    }
    for (std::size_t k = need[v]; k <= left; ++k) {
      counts[v] = k;
      leg_counts(genus, types, mult, need, counts, v + 1, left - k);
    }
  }

  void assign_legs(const std::vector<Genus>& genus,
                   const std::vector<std::pair<std::size_t, std::size_t>>& types,
                   const std::vector<std::size_t>& mult, std::vector<std::size_t>& counts,
                   std::vector<std::size_t>& owner) {
    if (owner.size() == leg_names.size()) {
      emit(genus, types, mult, owner);
      return;
    }
    for (std::size_t v = 0; v < counts.size(); ++v) {
      if (counts[v] == 0) continue;
      --counts[v];
      owner.push_back(v);
      assign_legs(genus, types, mult, counts, owner);
      owner.pop_back();
      ++counts[v];
    }
  }

  void emit(const std::vector<Genus>& genus,
            const std::vector<std::pair<std::size_t, std::size_t>>& types,
            const std::vector<std::size_t>& mult, const std::vector<std::size_t>& owner) {
    std::vector<Token> flags = leg_names;
    std::vector<std::size_t> inc = owner;
    std::vector<std::size_t> inv(owner.size());
    for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = i;
    std::size_t h = 0;
    for (std::size_t t = 0; t < types.size(); ++t) {
      for (std::size_t k = 0; k < mult[t]; ++k) {
        std::size_t a = flags.size();
        flags.push_back("_h" + std::to_string(++h));
        flags.push_back("_h" + std::to_string(++h));
        inc.push_back(types[t].first);
        inc.push_back(types[t].second);
        inv.push_back(a + 1);
        inv.push_back(a);
      }
    }
    std::vector<Token> vertices;
    for (std::size_t v = 0; v < genus.size(); ++v) vertices.push_back("v" + std::to_string(v + 1));
    DualGraph graph(std::move(flags), std::move(vertices), std::move(inc), std::move(inv), genus);
    SearchResult r = canonical_search(structure_of(graph, true));
    if (found.count(r.code)) return;
    found.emplace(std::move(r.code), build_canonical(graph, r.best, true).graph);
  }
};

inline std::size_t vertex_budget(Genus g, std::size_t n, bool stable_key,
                                 const EnumerateOptions& opt) {
  if (stable_key) {
    std::size_t cap = static_cast<std::size_t>(2 * g - 2 + n);
    return opt.max_vertices ? std::min(cap, *opt.max_vertices) : cap;
  }
  if (!opt.max_vertices) {
    throw PreconditionError("key (" + std::to_string(g) + "," + std::to_string(n) +
                            ") is unstable: 2g-2+n must be positive, or a vertex budget "
                            "must be supplied");
  }
  return *opt.max_vertices;
}

inline std::vector<GraphClass> finish(std::map<Code, DualGraph> found, const EnumerateOptions& opt) {
  std::vector<GraphClass> out;
  for (auto& [code, graph] : found) {
    std::size_t aut = automorphisms(graph, true, opt.automorphism_bound).size();
    out.push_back({code, std::move(graph), aut});
  }
  return out;
}

inline std::map<Code, DualGraph> shapes(Genus g, std::vector<Token> legs, bool stable_key,
                                         const EnumerateOptions& opt) {
  ShapeSearch s{g, std::move(legs), stable_key, 0, {}};
  s.max_vertices = vertex_budget(g, s.leg_names.size(), stable_key, opt);
  s.run();
  return std::move(s.found);
}

}  // namespace detail

// Connected dual graphs of type (g,n) up to leg-fixing isomorphism, legs named
// "1".."n", sorted by canonical code. Stable keys yield exactly the stable
// graphs; unstable keys need a vertex budget and yield every graph within it.
inline std::vector<GraphClass> enumerate_graphs(GNKey key, EnumFlavor flavor = EnumFlavor::stable,
                                                const EnumerateOptions& opt = {}) {
  if (is_directed(flavor)) throw PreconditionError("use enumerate_directed for digraphs");
  std::map<detail::Code, DualGraph> found =
      detail::shapes(key.g, numbered_legs(key.n), key.stable(), opt);
  if (flavor == EnumFlavor::cyclic) {
    std::erase_if(found, [](const auto& kv) { return !is_forest(kv.second); });
  }
  return detail::finish(std::move(found), opt);
}

inline std::vector<GraphClass> enumerate_stable_graphs(GNKey key) {
  if (!key.stable()) {
    throw PreconditionError("key " + to_string(key) +
                            " is unstable: stable graphs need 2g-2+n > 0");
  }
  return enumerate_graphs(key, EnumFlavor::stable);
}

// Connected digraphs with legs "i1..", "o1.." of the given directions; every
// edge joins an out-flag to an in-flag.
inline std::vector<GraphClass> enumerate_directed(Genus g, std::size_t n_out, std::size_t n_in,
                                                  EnumFlavor flavor,
                                                  const EnumerateOptions& opt = {}) {
  if (!is_directed(flavor)) throw PreconditionError("enumerate_directed needs a directed flavor");
  GNKey key{g, n_out + n_in};
  std::map<detail::Code, DualGraph> shapes =
      detail::shapes(g, directed_legs(n_out, n_in), key.stable(), opt);
  std::map<detail::Code, DualGraph> found;
  for (const auto& [_, u] : shapes) {
    std::vector<Edge> es = edges(u);
    if (es.size() >= 63) throw LimitError("too many edges to orient");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << es.size()); ++mask) {
      std::vector<Direction> dir(u.flag_count());
      for (std::size_t f = 0; f < u.flag_count(); ++f)
        if (u.is_leg(f)) dir[f] = u.flag_name(f)[0] == 'o' ? Direction::out : Direction::in;
      for (std::size_t e = 0; e < es.size(); ++e) {
        bool flip = (mask >> e) & 1U;
        dir[es[e].first] = flip ? Direction::in : Direction::out;
        dir[es[e].second] = flip ? Direction::out : Direction::in;
      }
      DualGraph d(u.flags(), u.vertices(), u.incidence(), u.involution(), u.genera(), dir);
      if (flavor == EnumFlavor::dioperad && !is_forest(d)) continue;
      if (flavor == EnumFlavor::prop) {
        bool genus0 = std::all_of(d.genera().begin(), d.genera().end(),
                                  [](Genus x) { return x == 0; });
        if (!genus0 || has_directed_circuit(d)) continue;
      }
      detail::SearchResult r = detail::canonical_search(detail::structure_of(d, true));
      if (found.count(r.code)) continue;
      found.emplace(std::move(r.code), detail::build_canonical(d, r.best, true).graph);
    }
  }
  return detail::finish(std::move(found), opt);
}

}  // namespace modop

#endif  // MODOP_ENUMERATE_HPP_
