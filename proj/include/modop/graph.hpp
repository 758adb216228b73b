#ifndef MODOP_GRAPH_HPP_
#define MODOP_GRAPH_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modop/error.hpp"
#include "modop/token.hpp"

namespace modop {

using Genus = std::uint64_t;

enum class Direction : std::uint8_t { out, in };

inline const char* to_string(Direction d) noexcept {
  return d == Direction::out ? "out" : "in";
}

// A dual graph: flags, vertices, incidence p, involution sigma, vertex genus
// and, for digraphs, the out/in partition of the flags.
//
// Identifiers are stored in natural order and every relation is kept by index
// into those sorted lists. A DualGraph may violate the involution or
// direction invariants; `validate` reports them. Referential integrity (every
// map total, every target known) is enforced at construction.
class DualGraph {
 public:
  DualGraph() = default;

  // Index-level constructor. The identifier lists may come in any order; they
  // are sorted and the relations reindexed. Throws PreconditionError on
  // duplicate identifiers or out-of-range indices.
  DualGraph(std::vector<Token> flags, std::vector<Token> vertices,
            std::vector<std::size_t> incidence,
            std::vector<std::size_t> involution, std::vector<Genus> genus,
            std::optional<std::vector<Direction>> direction = std::nullopt) {
    const std::size_t nf = flags.size();
    const std::size_t nv = vertices.size();
    if (incidence.size() != nf || involution.size() != nf || genus.size() != nv ||
        (direction && direction->size() != nf)) {
      throw PreconditionError("dual graph arrays have inconsistent sizes");
    }
    for (std::size_t f = 0; f < nf; ++f) {
      if (incidence[f] >= nv || involution[f] >= nf) {
        throw PreconditionError("dual graph index out of range");
      }
    }
    std::vector<std::size_t> forder(nf);
    std::iota(forder.begin(), forder.end(), 0);
    std::sort(forder.begin(), forder.end(), [&](std::size_t a, std::size_t b) {
      return TokenLess{}(flags[a], flags[b]);
    });
    std::vector<std::size_t> vorder(nv);
    std::iota(vorder.begin(), vorder.end(), 0);
    std::sort(vorder.begin(), vorder.end(), [&](std::size_t a, std::size_t b) {
      return TokenLess{}(vertices[a], vertices[b]);
    });
    std::vector<std::size_t> fnew(nf);
    std::vector<std::size_t> vnew(nv);
    for (std::size_t i = 0; i < nf; ++i) fnew[forder[i]] = i;
    for (std::size_t i = 0; i < nv; ++i) vnew[vorder[i]] = i;

    flags_.resize(nf);
    incidence_.resize(nf);
    involution_.resize(nf);
    for (std::size_t i = 0; i < nf; ++i) {
      std::size_t old = forder[i];
      flags_[i] = std::move(flags[old]);
      incidence_[i] = vnew[incidence[old]];
      involution_[i] = fnew[involution[old]];
    }
    vertices_.resize(nv);
    genus_.resize(nv);
    for (std::size_t i = 0; i < nv; ++i) {
      vertices_[i] = std::move(vertices[vorder[i]]);
      genus_[i] = genus[vorder[i]];
    }
    if (direction) {
      std::vector<Direction> d(nf);
      for (std::size_t i = 0; i < nf; ++i) d[i] = (*direction)[forder[i]];
      direction_ = std::move(d);
    }
    for (std::size_t i = 1; i < nf; ++i) {
      if (flags_[i - 1] == flags_[i]) {
        throw PreconditionError("duplicate flag identifier '" + flags_[i] + "'");
      }
    }
    for (std::size_t i = 1; i < nv; ++i) {
      if (vertices_[i - 1] == vertices_[i]) {
        throw PreconditionError("duplicate vertex identifier '" + vertices_[i] + "'");
      }
    }
    rebuild_fibres();
  }

  // Name-level constructor used by parsers and tests. Every map must be total
  // on its domain and refer only to known identifiers; violations raise
  // SchemaError naming the offending key.
  static DualGraph from_named(
      const std::vector<Token>& flags, const std::vector<Token>& vertices,
      const std::map<Token, Token>& incidence,
      const std::map<Token, Token>& involution,
      const std::map<Token, Genus>& genus,
      const std::optional<std::map<Token, Direction>>& direction = std::nullopt) {
    std::map<Token, std::size_t> fidx;
    std::map<Token, std::size_t> vidx;
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (!fidx.emplace(flags[i], i).second) {
        throw SchemaError("/flags", "duplicate flag '" + flags[i] + "'");
      }
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (!vidx.emplace(vertices[i], i).second) {
        throw SchemaError("/vertices", "duplicate vertex '" + vertices[i] + "'");
      }
    }
    auto check_domain = [&](const auto& m, const std::map<Token, std::size_t>& dom,
                            const std::string& where) {
      for (const auto& [k, _] : m) {
        if (!dom.count(k)) throw SchemaError(where + "/" + k, "unknown identifier");
      }
      for (const auto& [k, _] : dom) {
        if (!m.count(k)) throw SchemaError(where + "/" + k, "missing entry");
      }
    };
    check_domain(incidence, fidx, "/incidence");
    check_domain(involution, fidx, "/involution");
    check_domain(genus, vidx, "/genus");
    if (direction) check_domain(*direction, fidx, "/direction");

    std::vector<std::size_t> inc(flags.size());
    std::vector<std::size_t> inv(flags.size());
    std::vector<Genus> gen(vertices.size());
    std::optional<std::vector<Direction>> dir;
    if (direction) dir.emplace(flags.size());
    for (std::size_t i = 0; i < flags.size(); ++i) {
      const Token& f = flags[i];
      auto v = vidx.find(incidence.at(f));
      if (v == vidx.end()) {
        throw SchemaError("/incidence/" + f, "unknown vertex '" + incidence.at(f) + "'");
      }
      inc[i] = v->second;
      auto s = fidx.find(involution.at(f));
      if (s == fidx.end()) {
        throw SchemaError("/involution/" + f, "unknown flag '" + involution.at(f) + "'");
      }
      inv[i] = s->second;
      if (dir) (*dir)[i] = direction->at(f);
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) gen[i] = genus.at(vertices[i]);
    return DualGraph(flags, vertices, std::move(inc), std::move(inv), std::move(gen),
                     std::move(dir));
  }

  std::size_t flag_count() const noexcept { return flags_.size(); }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }

  const std::vector<Token>& flags() const noexcept { return flags_; }
  const std::vector<Token>& vertices() const noexcept { return vertices_; }
  const Token& flag_name(std::size_t f) const { return flags_.at(f); }
  const Token& vertex_name(std::size_t v) const { return vertices_.at(v); }

  std::optional<std::size_t> flag_index(std::string_view name) const {
    return find(flags_, name);
  }
  std::optional<std::size_t> vertex_index(std::string_view name) const {
    return find(vertices_, name);
  }

  std::size_t vertex_of(std::size_t f) const { return incidence_.at(f); }
  std::size_t partner(std::size_t f) const { return involution_.at(f); }
  Genus genus(std::size_t v) const { return genus_.at(v); }
  bool is_leg(std::size_t f) const { return involution_.at(f) == f; }

  bool directed() const noexcept { return direction_.has_value(); }
  Direction direction(std::size_t f) const {
    if (!direction_) throw PreconditionError("graph carries no direction data");
    return direction_->at(f);
  }

  const std::vector<std::size_t>& incidence() const noexcept { return incidence_; }
  const std::vector<std::size_t>& involution() const noexcept { return involution_; }
  const std::vector<Genus>& genera() const noexcept { return genus_; }
  const std::optional<std::vector<Direction>>& directions() const noexcept {
    return direction_;
  }

  // Flags at v in increasing index order; n(v) is its size.
  const std::vector<std::size_t>& flags_at(std::size_t v) const { return fibres_.at(v); }
  std::size_t valence(std::size_t v) const { return fibres_.at(v).size(); }

  friend bool operator==(const DualGraph& a, const DualGraph& b) {
    return a.flags_ == b.flags_ && a.vertices_ == b.vertices_ &&
           a.incidence_ == b.incidence_ && a.involution_ == b.involution_ &&
           a.genus_ == b.genus_ && a.direction_ == b.direction_;
  }

 private:
  static std::optional<std::size_t> find(const std::vector<Token>& names,
                                         std::string_view name) {
    auto it = std::lower_bound(names.begin(), names.end(), name, TokenLess{});
    if (it == names.end() || *it != name) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
  }

  void rebuild_fibres() {
    fibres_.assign(vertices_.size(), {});
    for (std::size_t f = 0; f < flags_.size(); ++f) fibres_[incidence_[f]].push_back(f);
  }

  std::vector<Token> flags_;
  std::vector<Token> vertices_;
  std::vector<std::size_t> incidence_;
  std::vector<std::size_t> involution_;
  std::vector<Genus> genus_;
  std::optional<std::vector<Direction>> direction_;
  std::vector<std::vector<std::size_t>> fibres_;
};

// One invariant violation, naming the offending flag or vertex.
struct Violation {
  std::string subject;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::vector<Violation> validate(const DualGraph& g) {
  std::vector<Violation> out;
  for (std::size_t f = 0; f < g.flag_count(); ++f) {
    if (g.partner(g.partner(f)) != f) {
      out.push_back({g.flag_name(f),
                     "involution not self-inverse at " + g.flag_name(f)});
    }
  }
  if (g.directed()) {
    for (std::size_t f = 0; f < g.flag_count(); ++f) {
      std::size_t s = g.partner(f);
      if (s <= f || g.partner(s) != f) continue;
      if (g.direction(f) == g.direction(s)) {
        const char* what = g.direction(f) == Direction::out ? "edge lacks in-flag"
                                                            : "edge lacks out-flag";
        out.push_back({g.flag_name(f),
                       std::string(what) + " at {" + g.flag_name(f) + "," +
                           g.flag_name(s) + "}"});
      }
    }
  }
  return out;
}

inline std::vector<std::size_t> legs(const DualGraph& g) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < g.flag_count(); ++f)
    if (g.is_leg(f)) out.push_back(f);
  return out;
}

// L+(G) or L-(G) of a digraph.
inline std::vector<std::size_t> legs(const DualGraph& g, Direction d) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < g.flag_count(); ++f)
    if (g.is_leg(f) && g.direction(f) == d) out.push_back(f);
  return out;
}

struct Edge {
  std::size_t first;
  std::size_t second;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Each 2-cycle of the involution once, as (smaller index, larger index).
inline std::vector<Edge> edges(const DualGraph& g) {
  std::vector<Edge> out;
  for (std::size_t f = 0; f < g.flag_count(); ++f) {
    std::size_t s = g.partner(f);
    if (s > f && g.partner(s) == f) out.push_back({f, s});
  }
  return out;
}

struct Component {
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> legs;
  std::size_t edge_count = 0;

  std::size_t vertex_count() const noexcept { return vertices.size(); }
  std::size_t leg_count() const noexcept { return legs.size(); }
  // e(C) = |V(C)| - |E(C)|
  long long euler_characteristic() const noexcept {
    return static_cast<long long>(vertices.size()) - static_cast<long long>(edge_count);
  }

  friend bool operator==(const Component&, const Component&) = default;
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

// Vertex -> index into `components(g)`.
inline std::vector<std::size_t> component_index(const DualGraph& g) {
  detail::DisjointSets sets(g.vertex_count());
  for (const Edge& e : edges(g)) sets.unite(g.vertex_of(e.first), g.vertex_of(e.second));
  std::vector<std::size_t> root_to_comp(g.vertex_count(), SIZE_MAX);
  std::vector<std::size_t> out(g.vertex_count());
  std::size_t next = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    std::size_t r = sets.find(v);
    if (root_to_comp[r] == SIZE_MAX) root_to_comp[r] = next++;
    out[v] = root_to_comp[r];
  }
  return out;
}

// Components ordered by their smallest vertex.
inline std::vector<Component> components(const DualGraph& g) {
  std::vector<std::size_t> idx = component_index(g);
  std::size_t count = 0;
  for (std::size_t c : idx) count = std::max(count, c + 1);
  std::vector<Component> out(count);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) out[idx[v]].vertices.push_back(v);
  for (std::size_t f = 0; f < g.flag_count(); ++f)
    if (g.is_leg(f)) out[idx[g.vertex_of(f)]].legs.push_back(f);
  for (const Edge& e : edges(g)) ++out[idx[g.vertex_of(e.first)]].edge_count;
  return out;
}

// g(C) = sum of g(v) over C, plus 1 - e(C).
inline Genus component_genus(const DualGraph& g, const Component& c) {
  Genus sum = 0;
  for (std::size_t v : c.vertices) {
    if (__builtin_add_overflow(sum, g.genus(v), &sum)) {
      throw PreconditionError("genus sum overflows");
    }
  }
  Genus e = c.edge_count;
  Genus total = 0;
  if (__builtin_add_overflow(sum, Genus{1}, &total) ||
      __builtin_add_overflow(total, e, &total)) {
    throw PreconditionError("genus sum overflows");
  }
  Genus verts = c.vertices.size();
  if (total < verts) {
    throw PreconditionError("component genus is negative (malformed component)");
  }
  return total - verts;
}

inline bool vertex_is_stable(const DualGraph& g, std::size_t v) {
  // 2g(v) - 2 + n(v) > 0
  return 2 * g.genus(v) + g.valence(v) > 2;
}

inline bool is_stable(const DualGraph& g) {
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (!vertex_is_stable(g, v)) return false;
  return true;
}

inline bool is_forest(const DualGraph& g) {
  for (const Component& c : components(g))
    if (c.euler_characteristic() != 1) return false;
  return true;
}

// Each edge runs from the vertex of its in-flag to the vertex of its out-flag.
inline bool has_directed_circuit(const DualGraph& g) {
  if (!g.directed()) {
    throw PreconditionError("has_directed_circuit needs a directed graph");
  }
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::size_t>> succ(n);
  for (const Edge& e : edges(g)) {
    std::size_t out_flag = g.direction(e.first) == Direction::out ? e.first : e.second;
    std::size_t in_flag = out_flag == e.first ? e.second : e.first;
    succ[g.vertex_of(in_flag)].push_back(g.vertex_of(out_flag));
  }
  // 0 unvisited, 1 on stack, 2 done
  std::vector<int> state(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (state[root] != 0) continue;
    stack.emplace_back(root, 0);
    state[root] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < succ[v].size()) {
        std::size_t w = succ[v][i++];
        if (state[w] == 1) return true;
        if (state[w] == 0) {
          state[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

// One vertex with the given legs and no edges.
inline DualGraph corolla(Genus genus, const std::vector<Token>& leg_names,
                         const Token& vertex = "v") {
  std::vector<std::size_t> inc(leg_names.size(), 0);
  std::vector<std::size_t> inv(leg_names.size());
  std::iota(inv.begin(), inv.end(), 0);
  return DualGraph(leg_names, {vertex}, std::move(inc), std::move(inv), {genus});
}

}  // namespace modop

#endif  // MODOP_GRAPH_HPP_
