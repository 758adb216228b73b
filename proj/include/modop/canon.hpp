#ifndef MODOP_CANON_HPP_
#define MODOP_CANON_HPP_

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
#include "modop/graph.hpp"

namespace modop {

// A pair of index bijections between two dual graphs (or a graph and itself).
struct GraphIso {
  std::vector<std::size_t> flags;
  std::vector<std::size_t> vertices;

  friend bool operator==(const GraphIso&, const GraphIso&) = default;
  friend auto operator<=>(const GraphIso&, const GraphIso&) = default;
};

inline GraphIso identity_iso(const DualGraph& g) {
  GraphIso iso{std::vector<std::size_t>(g.flag_count()),
               std::vector<std::size_t>(g.vertex_count())};
  std::iota(iso.flags.begin(), iso.flags.end(), 0);
  std::iota(iso.vertices.begin(), iso.vertices.end(), 0);
  return iso;
}

// (b after a): apply a first.
inline GraphIso compose(const GraphIso& b, const GraphIso& a) {
  GraphIso c{std::vector<std::size_t>(a.flags.size()),
             std::vector<std::size_t>(a.vertices.size())};
  for (std::size_t i = 0; i < a.flags.size(); ++i) c.flags[i] = b.flags.at(a.flags[i]);
  for (std::size_t i = 0; i < a.vertices.size(); ++i)
    c.vertices[i] = b.vertices.at(a.vertices[i]);
  return c;
}

inline GraphIso inverse(const GraphIso& a) {
  GraphIso c{std::vector<std::size_t>(a.flags.size()),
             std::vector<std::size_t>(a.vertices.size())};
  for (std::size_t i = 0; i < a.flags.size(); ++i) c.flags[a.flags[i]] = i;
  for (std::size_t i = 0; i < a.vertices.size(); ++i) c.vertices[a.vertices[i]] = i;
  return c;
}

// True iff `iso` commutes with incidence and involution, preserves genus and
// direction, and (when fix_legs) sends each leg to the leg of the same name.
inline bool is_isomorphism(const DualGraph& a, const DualGraph& b, const GraphIso& iso,
                           bool fix_legs) {
  if (a.flag_count() != b.flag_count() || a.vertex_count() != b.vertex_count()) return false;
  if (iso.flags.size() != a.flag_count() || iso.vertices.size() != a.vertex_count())
    return false;
  if (a.directed() != b.directed()) return false;
  std::vector<bool> hitf(a.flag_count()), hitv(a.vertex_count());
  for (std::size_t f = 0; f < a.flag_count(); ++f) {
    std::size_t x = iso.flags[f];
    if (x >= b.flag_count() || hitf[x]) return false;
    hitf[x] = true;
  }
  for (std::size_t v = 0; v < a.vertex_count(); ++v) {
    std::size_t x = iso.vertices[v];
    if (x >= b.vertex_count() || hitv[x]) return false;
    hitv[x] = true;
    if (a.genus(v) != b.genus(x)) return false;
  }
  for (std::size_t f = 0; f < a.flag_count(); ++f) {
    std::size_t x = iso.flags[f];
    if (b.vertex_of(x) != iso.vertices[a.vertex_of(f)]) return false;
    if (b.partner(x) != iso.flags[a.partner(f)]) return false;
    if (a.directed() && a.direction(f) != b.direction(x)) return false;
    if (fix_legs && a.is_leg(f) && a.flag_name(f) != b.flag_name(x)) return false;
  }
  return true;
}

namespace detail {

// Integer view of a dual graph used by the canonical labeling search. `pin`
// is a label for legs that must be fixed (-1 for flags that may move).
struct FlagStructure {
  std::vector<std::size_t> vertex;
  std::vector<std::size_t> partner;
  std::vector<Genus> genus;
  std::vector<int> direction;  // 0 undirected, 1 out, 2 in
  std::vector<long> pin;

  std::size_t flag_count() const noexcept { return vertex.size(); }
  std::size_t vertex_count() const noexcept { return genus.size(); }
};

inline FlagStructure structure_of(const DualGraph& g, bool fix_legs) {
  FlagStructure s;
  s.vertex = g.incidence();
  s.partner = g.involution();
  s.genus = g.genera();
  s.direction.assign(g.flag_count(), 0);
  if (g.directed())
    for (std::size_t f = 0; f < g.flag_count(); ++f)
      s.direction[f] = g.direction(f) == Direction::out ? 1 : 2;
  s.pin.assign(g.flag_count(), -1);
  if (fix_legs) {
    long rank = 0;
    for (std::size_t f = 0; f < g.flag_count(); ++f)
      if (g.is_leg(f)) s.pin[f] = rank++;
  }
  return s;
}

using Code = std::vector<std::uint64_t>;

// A discrete labeling: position -> flag, and new vertex number -> vertex.
struct Leaf {
  std::vector<std::size_t> flag_at;
  std::vector<std::size_t> vertex_at;
};

struct SearchResult {
  Code code;
  Leaf best;
  // Every leaf whose code equals `code`; only filled when all were requested.
  std::vector<Leaf> optimal;
};

class CanonicalSearch {
 public:
  CanonicalSearch(const FlagStructure& s, bool collect_all, std::size_t bound)
      : s_(s), collect_all_(collect_all), bound_(bound) {
    const std::size_t nv = s.vertex_count();
    fibres_.assign(nv, {});
    for (std::size_t f = 0; f < s.flag_count(); ++f) fibres_[s.vertex[f]].push_back(f);
    for (std::size_t v = 0; v < nv; ++v)
      if (fibres_[v].empty()) isolated_.push_back(v);
    std::stable_sort(isolated_.begin(), isolated_.end(), [&](std::size_t a, std::size_t b) {
      return s_.genus[a] < s_.genus[b];
    });
  }

  SearchResult run() {
    const std::size_t nf = s_.flag_count();
    std::vector<std::size_t> color(nf);
    {
      using Key = std::tuple<long, int, Genus, std::size_t, int, int>;
      std::vector<Key> keys(nf);
      for (std::size_t f = 0; f < nf; ++f) {
        std::size_t v = s_.vertex[f];
        std::size_t p = s_.partner[f];
        keys[f] = Key{s_.pin[f], s_.direction[f], s_.genus[v], fibres_[v].size(),
                      p == f ? 0 : 1, (p != f && s_.vertex[p] == v) ? 1 : 0};
      }
      assign_ranks(keys, color);
    }
    std::vector<std::size_t> path;
    descend(std::move(color), path);
    SearchResult r;
    r.code = std::move(best_code_);
    r.best = std::move(best_leaf_);
    r.optimal = std::move(optimal_);
    if (nf == 0 && r.code.empty()) {
      // No flags: the single leaf is the ordering of isolated vertices.
      r.best = make_leaf({});
      r.code = encode(r.best);
      if (collect_all_) r.optimal = {r.best};
    }
    return r;
  }

 private:
  template <class Key>
  static std::size_t assign_ranks(const std::vector<Key>& keys,
                                  std::vector<std::size_t>& color) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::size_t rank = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && keys[order[i - 1]] < keys[order[i]]) ++rank;
      color[order[i]] = rank;
    }
    return order.empty() ? 0 : rank + 1;
  }

  static std::size_t cell_count(const std::vector<std::size_t>& color) {
    std::size_t m = 0;
    for (std::size_t c : color) m = std::max(m, c + 1);
    return m;
  }

  void refine(std::vector<std::size_t>& color) const {
    const std::size_t nf = s_.flag_count();
    std::size_t cells = cell_count(color);
    using Key = std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>;
    std::vector<Key> keys(nf);
    std::vector<std::vector<std::size_t>> vsig(s_.vertex_count());
    while (true) {
      for (std::size_t v = 0; v < vsig.size(); ++v) {
        vsig[v].clear();
        for (std::size_t f : fibres_[v]) vsig[v].push_back(color[f]);
        std::sort(vsig[v].begin(), vsig[v].end());
      }
      for (std::size_t f = 0; f < nf; ++f)
        keys[f] = Key{color[f], color[s_.partner[f]], vsig[s_.vertex[f]]};
      std::size_t now = assign_ranks(keys, color);
      if (now == cells) return;
      cells = now;
    }
  }

  Leaf make_leaf(const std::vector<std::size_t>& color) const {
    Leaf leaf;
    leaf.flag_at.resize(color.size());
    for (std::size_t f = 0; f < color.size(); ++f) leaf.flag_at[color[f]] = f;
    std::vector<bool> seen(s_.vertex_count(), false);
    for (std::size_t f : leaf.flag_at) {
      std::size_t v = s_.vertex[f];
      if (!seen[v]) {
        seen[v] = true;
        leaf.vertex_at.push_back(v);
      }
    }
    for (std::size_t v : isolated_) leaf.vertex_at.push_back(v);
    return leaf;
  }

  Code encode(const Leaf& leaf) const {
    const std::size_t nf = s_.flag_count();
    const std::size_t nv = s_.vertex_count();
    std::vector<std::size_t> pos(nf), vnum(nv);
    for (std::size_t i = 0; i < nf; ++i) pos[leaf.flag_at[i]] = i;
    for (std::size_t i = 0; i < nv; ++i) vnum[leaf.vertex_at[i]] = i;
    Code code;
    code.reserve(2 + 4 * nf + nv);
    code.push_back(nf);
    code.push_back(nv);
    for (std::size_t i = 0; i < nf; ++i) {
      std::size_t f = leaf.flag_at[i];
      code.push_back(vnum[s_.vertex[f]]);
      code.push_back(pos[s_.partner[f]]);
      code.push_back(static_cast<std::uint64_t>(s_.direction[f]));
      code.push_back(static_cast<std::uint64_t>(s_.pin[f] + 1));
    }
    for (std::size_t i = 0; i < nv; ++i) code.push_back(s_.genus[leaf.vertex_at[i]]);
    return code;
  }

  // Flag map from the current best leaf to `leaf` (an automorphism when the
  // two codes agree).
  std::vector<std::size_t> flag_map_to(const Leaf& leaf) const {
    std::vector<std::size_t> m(s_.flag_count());
    for (std::size_t i = 0; i < m.size(); ++i) m[best_leaf_.flag_at[i]] = leaf.flag_at[i];
    return m;
  }

  void visit_leaf(const std::vector<std::size_t>& color) {
    Leaf leaf = make_leaf(color);
    Code code = encode(leaf);
    if (!have_best_ || code < best_code_) {
      have_best_ = true;
      best_code_ = std::move(code);
      best_leaf_ = leaf;
      optimal_.clear();
      if (collect_all_) optimal_.push_back(std::move(leaf));
    } else if (code == best_code_) {
      automorphisms_.push_back(flag_map_to(leaf));
      if (collect_all_) {
        optimal_.push_back(std::move(leaf));
        if (optimal_.size() > bound_) {
          throw LimitError("automorphism group exceeds the configured bound of " +
                           std::to_string(bound_));
        }
      }
    }
  }

  void descend(std::vector<std::size_t> color, std::vector<std::size_t>& path) {
    refine(color);
    const std::size_t nf = color.size();
    std::size_t cells = cell_count(color);
    if (cells == nf) {
      visit_leaf(color);
      return;
    }
    std::vector<std::size_t> size(cells, 0);
    for (std::size_t c : color) ++size[c];
    std::size_t target = 0;
    while (size[target] == 1) ++target;
    std::vector<std::size_t> members;
    for (std::size_t f = 0; f < nf; ++f)
      if (color[f] == target) members.push_back(f);

    std::vector<std::size_t> explored;
    for (std::size_t f : members) {
      if (!collect_all_ && !explored.empty() && equivalent_to_explored(f, explored, path))
        continue;
      std::vector<std::size_t> child(nf);
      for (std::size_t h = 0; h < nf; ++h)
        child[h] = 2 * color[h] + ((color[h] == target && h != f) ? 1 : 0);
      path.push_back(f);
      descend(std::move(child), path);
      path.pop_back();
      explored.push_back(f);
    }
  }

  // Orbit pruning: automorphisms found so far that fix the path pointwise map
  // the subtree below `f` onto an explored one when f shares an orbit with an
  // explored child.
  bool equivalent_to_explored(std::size_t f, const std::vector<std::size_t>& explored,
                              const std::vector<std::size_t>& path) const {
    DisjointSets sets(s_.flag_count());
    bool any = false;
    for (const auto& gamma : automorphisms_) {
      bool fixes = std::all_of(path.begin(), path.end(),
                               [&](std::size_t p) { return gamma[p] == p; });
      if (!fixes) continue;
      any = true;
      for (std::size_t h = 0; h < gamma.size(); ++h) sets.unite(h, gamma[h]);
    }
    if (!any) return false;
    std::size_t root = sets.find(f);
    return std::any_of(explored.begin(), explored.end(),
                       [&](std::size_t e) { return sets.find(e) == root; });
  }

  const FlagStructure& s_;
  bool collect_all_;
  std::size_t bound_;
  std::vector<std::vector<std::size_t>> fibres_;
  std::vector<std::size_t> isolated_;
  bool have_best_ = false;
  Code best_code_;
  Leaf best_leaf_;
  std::vector<Leaf> optimal_;
  std::vector<std::vector<std::size_t>> automorphisms_;
};

inline SearchResult canonical_search(const FlagStructure& s) {
  return CanonicalSearch(s, false, 0).run();
}

inline SearchResult full_search(const FlagStructure& s, std::size_t bound) {
  return CanonicalSearch(s, true, bound).run();
}

inline std::uint64_t factorial_bounded(std::size_t n, std::uint64_t bound) {
  std::uint64_t r = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    r *= i;
    if (r > bound) return bound + 1;
  }
  return r;
}

}  // namespace detail

struct CanonicalForm {
  DualGraph graph;
  GraphIso iso;  // input -> canonical
};

namespace detail {

inline CanonicalForm build_canonical(const DualGraph& g, const Leaf& leaf, bool fix_legs) {
  const std::size_t nf = g.flag_count();
  const std::size_t nv = g.vertex_count();
  std::vector<std::size_t> pos(nf), vnum(nv);
  for (std::size_t i = 0; i < nf; ++i) pos[leaf.flag_at[i]] = i;
  for (std::size_t i = 0; i < nv; ++i) vnum[leaf.vertex_at[i]] = i;

  std::string prefix = "h";
  if (fix_legs) {
    // Internal flag names must not collide with pinned leg names.
    auto collides = [&](const std::string& p) {
      for (std::size_t f = 0; f < nf; ++f)
        if (g.is_leg(f) && g.flag_name(f).rfind(p, 0) == 0) return true;
      return false;
    };
    while (collides(prefix)) prefix += "h";
  }
  std::vector<Token> fnames(nf);
  std::size_t internal = 0;
  for (std::size_t i = 0; i < nf; ++i) {
    std::size_t f = leaf.flag_at[i];
    if (fix_legs && g.is_leg(f)) {
      fnames[i] = g.flag_name(f);
    } else {
      fnames[i] = prefix + std::to_string(++internal);
    }
  }
  std::vector<Token> vnames(nv);
  for (std::size_t i = 0; i < nv; ++i) vnames[i] = "v" + std::to_string(i + 1);
  std::vector<std::size_t> inc(nf), inv(nf);
  std::vector<Genus> gen(nv);
  std::optional<std::vector<Direction>> dir;
  if (g.directed()) dir.emplace(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    std::size_t f = leaf.flag_at[i];
    inc[i] = vnum[g.vertex_of(f)];
    inv[i] = pos[g.partner(f)];
    if (dir) (*dir)[i] = g.direction(f);
  }
  for (std::size_t i = 0; i < nv; ++i) gen[i] = g.genus(leaf.vertex_at[i]);
  DualGraph out(fnames, vnames, std::move(inc), std::move(inv), std::move(gen),
                std::move(dir));
  // Positions were reordered by name; map input indices to output indices.
  GraphIso iso{std::vector<std::size_t>(nf), std::vector<std::size_t>(nv)};
  for (std::size_t i = 0; i < nf; ++i) iso.flags[leaf.flag_at[i]] = *out.flag_index(fnames[i]);
  for (std::size_t i = 0; i < nv; ++i)
    iso.vertices[leaf.vertex_at[i]] = *out.vertex_index(vnames[i]);
  return {std::move(out), std::move(iso)};
}

}  // namespace detail

// Canonical relabeling. With fix_legs=false two graphs get byte-identical
// canonical forms iff they are isomorphic; with fix_legs=true leg names are
// kept and only leg-fixing isomorphisms are quotiented out.
inline CanonicalForm canonical_form(const DualGraph& g, bool fix_legs = false) {
  detail::FlagStructure s = detail::structure_of(g, fix_legs);
  detail::SearchResult r = detail::canonical_search(s);
  return detail::build_canonical(g, r.best, fix_legs);
}

inline std::optional<GraphIso> are_isomorphic(const DualGraph& a, const DualGraph& b,
                                              bool fix_legs) {
  if (a.flag_count() != b.flag_count() || a.vertex_count() != b.vertex_count() ||
      a.directed() != b.directed()) {
    return std::nullopt;
  }
  if (fix_legs) {
    std::vector<Token> la, lb;
    for (std::size_t f : legs(a)) la.push_back(a.flag_name(f));
    for (std::size_t f : legs(b)) lb.push_back(b.flag_name(f));
    if (la != lb) return std::nullopt;
  }
  CanonicalForm ca = canonical_form(a, fix_legs);
  CanonicalForm cb = canonical_form(b, fix_legs);
  if (!(ca.graph == cb.graph)) return std::nullopt;
  return compose(inverse(cb.iso), ca.iso);
}

// The full automorphism group as an explicit, sorted list (identity first).
// Throws LimitError when the order would exceed `bound`.
inline std::vector<GraphIso> automorphisms(const DualGraph& g, bool fix_legs,
                                           std::size_t bound = 1'000'000) {
  detail::FlagStructure s = detail::structure_of(g, fix_legs);
  detail::SearchResult r = detail::full_search(s, bound);

  std::vector<std::size_t> isolated;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (g.valence(v) == 0) isolated.push_back(v);
  std::map<Genus, std::vector<std::size_t>> by_genus;
  for (std::size_t v : isolated) by_genus[g.genus(v)].push_back(v);
  std::uint64_t extra = 1;
  for (const auto& [_, vs] : by_genus) {
    extra *= detail::factorial_bounded(vs.size(), bound);
    if (extra > bound) break;
  }
  if (extra > bound || extra * r.optimal.size() > bound) {
    throw LimitError("automorphism group exceeds the configured bound of " +
                     std::to_string(bound));
  }

  std::vector<GraphIso> base;
  for (const detail::Leaf& leaf : r.optimal) {
    GraphIso iso{std::vector<std::size_t>(g.flag_count()),
                 std::vector<std::size_t>(g.vertex_count())};
    for (std::size_t i = 0; i < g.flag_count(); ++i)
      iso.flags[r.best.flag_at[i]] = leaf.flag_at[i];
    for (std::size_t i = 0; i < g.vertex_count(); ++i)
      iso.vertices[r.best.vertex_at[i]] = leaf.vertex_at[i];
    base.push_back(std::move(iso));
  }
  std::vector<GraphIso> out = base;
  for (const auto& [_, vs] : by_genus) {
    if (vs.size() < 2) continue;
    std::vector<GraphIso> next;
    std::vector<std::size_t> perm = vs;
    do {
      for (const GraphIso& a : out) {
        GraphIso b = a;
        for (std::size_t i = 0; i < vs.size(); ++i) b.vertices[vs[i]] = perm[i];
        next.push_back(std::move(b));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace modop

#endif  // MODOP_CANON_HPP_
