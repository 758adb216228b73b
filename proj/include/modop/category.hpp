#ifndef MODOP_CATEGORY_HPP_
#define MODOP_CATEGORY_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modop/error.hpp"
#include "modop/graph.hpp"

namespace modop {

// An object of the category of dual graphs: a dual graph without edges, i.e.
// legs L, vertices V, p: L -> V and g: V -> N (plus directions for digraphs).
class GObject {
 public:
  GObject() = default;

  explicit GObject(DualGraph g) : graph_(std::move(g)) {
    for (std::size_t f = 0; f < graph_.flag_count(); ++f) {
      if (!graph_.is_leg(f)) {
        throw PreconditionError("object has an edge at flag " + graph_.flag_name(f));
      }
    }
  }

  const DualGraph& graph() const noexcept { return graph_; }
  bool directed() const noexcept { return graph_.directed(); }
  bool empty() const noexcept {
    return graph_.flag_count() == 0 && graph_.vertex_count() == 0;
  }

  friend bool operator==(const GObject&, const GObject&) = default;

 private:
  DualGraph graph_;
};

using TokenMap = std::map<Token, Token, TokenLess>;

// A morphism A -> B: a dual graph on A's legs and vertices, with alpha
// identifying B's legs with the glue graph's legs and beta identifying B's
// vertices with its components. A component is named by its smallest vertex.
struct GMorphism {
  GObject source;
  GObject target;
  DualGraph glue;
  TokenMap alpha;  // target leg -> glue leg
  TokenMap beta;   // target vertex -> smallest source vertex of the component

  friend bool operator==(const GMorphism&, const GMorphism&) = default;
};

enum class Flavor { G, G_stable, G0, G0_stable, D, D0, D_P, H, H_stable };

inline constexpr Flavor kAllFlavors[] = {Flavor::G,  Flavor::G_stable, Flavor::G0,
                                         Flavor::G0_stable, Flavor::D, Flavor::D0,
                                         Flavor::D_P, Flavor::H, Flavor::H_stable};

inline const char* to_string(Flavor f) noexcept {
  switch (f) {
    case Flavor::G: return "G";
    case Flavor::G_stable: return "G_stable";
    case Flavor::G0: return "G0";
    case Flavor::G0_stable: return "G0_stable";
    case Flavor::D: return "D";
    case Flavor::D0: return "D0";
    case Flavor::D_P: return "D_P";
    case Flavor::H: return "H";
    case Flavor::H_stable: return "H_stable";
  }
  return "?";
}

inline std::optional<Flavor> parse_flavor(std::string_view s) {
  for (Flavor f : kAllFlavors)
    if (s == to_string(f)) return f;
  return std::nullopt;
}

inline bool is_directed_flavor(Flavor f) noexcept {
  return f == Flavor::D || f == Flavor::D0 || f == Flavor::D_P;
}

namespace detail {

// Smallest vertex name of each component, indexed by vertex.
inline std::vector<Token> component_names(const DualGraph& g) {
  std::vector<std::size_t> idx = component_index(g);
  std::vector<Token> first;
  std::vector<Token> out(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (idx[v] >= first.size()) first.push_back(g.vertex_name(v));
    out[v] = first[idx[v]];
  }
  return out;
}

inline Token prefixed(std::string_view prefix, const Token& t) {
  return std::string(prefix) + t;
}

inline DualGraph prefix_graph(const DualGraph& g, std::string_view prefix) {
  std::vector<Token> flags, vertices;
  for (const Token& f : g.flags()) flags.push_back(prefixed(prefix, f));
  for (const Token& v : g.vertices()) vertices.push_back(prefixed(prefix, v));
  return DualGraph(std::move(flags), std::move(vertices), g.incidence(), g.involution(),
                   g.genera(), g.directions());
}

// Disjoint union with "i." prefixes on the i-th operand.
inline DualGraph disjoint_union(const std::vector<const DualGraph*>& parts) {
  std::vector<Token> flags, vertices;
  std::vector<std::size_t> inc, inv;
  std::vector<Genus> genus;
  std::optional<std::vector<Direction>> dir;
  bool any_directed = false;
  bool any_undirected = false;
  for (const DualGraph* g : parts) {
    if (g->flag_count() == 0) continue;
    (g->directed() ? any_directed : any_undirected) = true;
  }
  if (any_directed && any_undirected) {
    throw PreconditionError("tensor mixes directed and undirected data");
  }
  if (any_directed) dir.emplace();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const DualGraph& g = *parts[i];
    std::string prefix = std::to_string(i) + ".";
    std::size_t foff = flags.size();
    std::size_t voff = vertices.size();
    for (std::size_t f = 0; f < g.flag_count(); ++f) {
      flags.push_back(prefixed(prefix, g.flag_name(f)));
      inc.push_back(voff + g.vertex_of(f));
      inv.push_back(foff + g.partner(f));
      if (dir) dir->push_back(g.direction(f));
    }
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      vertices.push_back(prefixed(prefix, g.vertex_name(v)));
      genus.push_back(g.genus(v));
    }
  }
  return DualGraph(std::move(flags), std::move(vertices), std::move(inc), std::move(inv),
                   std::move(genus), std::move(dir));
}

inline std::vector<Violation> check_object(const DualGraph& g, const std::string& where) {
  std::vector<Violation> out;
  for (std::size_t f = 0; f < g.flag_count(); ++f)
    if (!g.is_leg(f)) out.push_back({where, "object has an edge at " + g.flag_name(f)});
  return out;
}

}  // namespace detail

// Every morphism invariant: glue data matches the source, alpha/beta are
// bijections, p o alpha = beta o p2, component genus matches the target genus,
// and in the directed case edges pair out with in and alpha keeps directions.
inline std::vector<Violation> validate(const GMorphism& m) {
  std::vector<Violation> out;
  const DualGraph& a = m.source.graph();
  const DualGraph& b = m.target.graph();
  const DualGraph& g = m.glue;
  if (g.flags() != a.flags() || g.vertices() != a.vertices() ||
      g.incidence() != a.incidence() || g.genera() != a.genera() ||
      g.directions() != a.directions()) {
    out.push_back({"glue", "glue graph does not carry the source's flags, vertices, "
                           "incidence, genus and directions"});
    return out;
  }
  for (Violation v : modop::validate(g)) {
    v.subject = "glue/" + v.subject;
    out.push_back(std::move(v));
  }
  if (!out.empty()) return out;
  if (b.directed() != a.directed() && b.flag_count() > 0 && a.flag_count() > 0) {
    out.push_back({"target", "source and target disagree on direction data"});
    return out;
  }

  std::vector<Token> comp = detail::component_names(g);
  std::map<Token, Token, TokenLess> leg_used;
  for (std::size_t l : legs(b)) {
    const Token& name = b.flag_name(l);
    auto it = m.alpha.find(name);
    if (it == m.alpha.end()) {
      out.push_back({"alpha/" + name, "target leg has no image"});
      continue;
    }
    auto gf = g.flag_index(it->second);
    if (!gf || !g.is_leg(*gf)) {
      out.push_back({"alpha/" + name, "image " + it->second + " is not a glue leg"});
      continue;
    }
    if (!leg_used.emplace(it->second, name).second) {
      out.push_back({"alpha/" + name, "alpha is not injective at " + it->second});
    }
    if (b.directed() && g.directed() && b.direction(l) != g.direction(*gf)) {
      out.push_back({"alpha/" + name, "alpha does not preserve direction"});
    }
  }
  for (const auto& [k, _] : m.alpha)
    if (!b.flag_index(k)) out.push_back({"alpha/" + k, "not a target leg"});
  for (std::size_t f : legs(g))
    if (!leg_used.count(g.flag_name(f)))
      out.push_back({"alpha", "glue leg " + g.flag_name(f) + " is not hit"});

  std::map<Token, Token, TokenLess> comp_used;
  std::vector<Component> comps = components(g);
  for (std::size_t v = 0; v < b.vertex_count(); ++v) {
    const Token& name = b.vertex_name(v);
    auto it = m.beta.find(name);
    if (it == m.beta.end()) {
      out.push_back({"beta/" + name, "target vertex has no image"});
      continue;
    }
    auto gv = g.vertex_index(it->second);
    if (!gv || comp[*gv] != it->second) {
      out.push_back({"beta/" + name, it->second + " does not name a component"});
      continue;
    }
    if (!comp_used.emplace(it->second, name).second) {
      out.push_back({"beta/" + name, "beta is not injective at " + it->second});
    }
    const Component* c = nullptr;
    for (const Component& x : comps)
      if (g.vertex_name(x.vertices.front()) == it->second) c = &x;
    if (c && component_genus(g, *c) != b.genus(v)) {
      out.push_back({"beta/" + name, "component genus " +
                                         std::to_string(component_genus(g, *c)) +
                                         " differs from target genus " +
                                         std::to_string(b.genus(v))});
    }
  }
  for (const auto& [k, _] : m.beta)
    if (!b.vertex_index(k)) out.push_back({"beta/" + k, "not a target vertex"});
  if (comp_used.size() != comps.size() && out.empty()) {
    out.push_back({"beta", "beta misses a component"});
  }
  if (!out.empty()) return out;

  for (std::size_t l : legs(b)) {
    const Token& name = b.flag_name(l);
    std::size_t gf = *g.flag_index(m.alpha.at(name));
    const Token& via_alpha = comp[g.vertex_of(gf)];
    const Token& via_beta = m.beta.at(b.vertex_name(b.vertex_of(l)));
    if (via_alpha != via_beta) {
      out.push_back({"alpha/" + name, "p o alpha differs from beta o p2"});
    }
  }
  return out;
}

inline GMorphism identity(const GObject& obj) {
  const DualGraph& g = obj.graph();
  GMorphism m{obj, obj, g, {}, {}};
  for (const Token& f : g.flags()) m.alpha.emplace(f, f);
  for (const Token& v : g.vertices()) m.beta.emplace(v, v);
  return m;
}

// h o f: glue the legs of f's glue graph that correspond to edges of h's.
inline GMorphism compose(const GMorphism& f, const GMorphism& h) {
  if (!(f.target == h.source)) throw PreconditionError("objects mismatch");
  const DualGraph& g1 = f.glue;
  const DualGraph& g2 = h.glue;
  TokenMap alpha1_inv;
  for (const auto& [k, v] : f.alpha) alpha1_inv.emplace(v, k);

  std::vector<std::size_t> inv(g1.flag_count());
  for (std::size_t x = 0; x < g1.flag_count(); ++x) {
    if (!g1.is_leg(x)) {
      inv[x] = g1.partner(x);
      continue;
    }
    const Token& y = alpha1_inv.at(g1.flag_name(x));
    std::size_t yi = *g2.flag_index(y);
    const Token& y2 = g2.flag_name(g2.partner(yi));
    inv[x] = *g1.flag_index(f.alpha.at(y2));
  }
  if (g1.directed()) {
    for (std::size_t x = 0; x < inv.size(); ++x) {
      if (inv[x] != x && g1.direction(x) == g1.direction(inv[x])) {
        throw PreconditionError("direction clash at " + g1.flag_name(x));
      }
    }
  }
  DualGraph glue(g1.flags(), g1.vertices(), g1.incidence(), std::move(inv), g1.genera(),
                 g1.directions());
  std::vector<Token> comp = detail::component_names(glue);

  GMorphism out{f.source, h.target, std::move(glue), {}, {}};
  for (const auto& [c, b] : h.alpha) out.alpha.emplace(c, f.alpha.at(b));
  for (const auto& [w, b] : h.beta) {
    const Token& a = f.beta.at(b);
    out.beta.emplace(w, comp[*out.glue.vertex_index(a)]);
  }
  return out;
}

inline GObject tensor_objects(const std::vector<GObject>& objects) {
  std::vector<const DualGraph*> parts;
  for (const GObject& o : objects) parts.push_back(&o.graph());
  return GObject(detail::disjoint_union(parts));
}

// Disjoint union; the i-th operand's identifiers are prefixed with "i.".
inline GMorphism tensor(const std::vector<GMorphism>& morphisms) {
  std::vector<const DualGraph*> sources, targets, glues;
  for (const GMorphism& m : morphisms) {
    sources.push_back(&m.source.graph());
    targets.push_back(&m.target.graph());
    glues.push_back(&m.glue);
  }
  GMorphism out{GObject(detail::disjoint_union(sources)),
                GObject(detail::disjoint_union(targets)), detail::disjoint_union(glues),
                {}, {}};
  for (std::size_t i = 0; i < morphisms.size(); ++i) {
    std::string prefix = std::to_string(i) + ".";
    for (const auto& [k, v] : morphisms[i].alpha)
      out.alpha.emplace(prefix + k, prefix + v);
    for (const auto& [k, v] : morphisms[i].beta) out.beta.emplace(prefix + k, prefix + v);
  }
  return out;
}

// An edge-free morphism obj -> obj' renaming legs and vertices.
inline GMorphism relabel(const GObject& obj, const TokenMap& flag_names,
                         const TokenMap& vertex_names) {
  const DualGraph& g = obj.graph();
  std::vector<Token> flags, vertices;
  for (const Token& f : g.flags()) flags.push_back(flag_names.at(f));
  for (const Token& v : g.vertices()) vertices.push_back(vertex_names.at(v));
  GObject target(DualGraph(flags, vertices, g.incidence(), g.involution(), g.genera(),
                           g.directions()));
  GMorphism m{obj, std::move(target), g, {}, {}};
  for (const auto& [old_name, new_name] : flag_names) m.alpha.emplace(new_name, old_name);
  for (const auto& [old_name, new_name] : vertex_names) m.beta.emplace(new_name, old_name);
  return m;
}

// The symmetry a (x) b -> b (x) a.
inline GMorphism symmetry(const GObject& a, const GObject& b) {
  GObject source = tensor_objects({a, b});
  GObject target = tensor_objects({b, a});
  GMorphism m{source, target, source.graph(), {}, {}};
  for (const Token& f : b.graph().flags()) m.alpha.emplace("0." + f, "1." + f);
  for (const Token& f : a.graph().flags()) m.alpha.emplace("1." + f, "0." + f);
  for (const Token& v : b.graph().vertices()) m.beta.emplace("0." + v, "1." + v);
  for (const Token& v : a.graph().vertices()) m.beta.emplace("1." + v, "0." + v);
  return m;
}

inline bool is_invertible(const GMorphism& m) { return edges(m.glue).empty(); }

// Membership of a morphism in a subcategory. Throws PreconditionError when a
// directed flavor is asked of a morphism without direction data.
inline bool in_flavor(const GMorphism& m, Flavor flavor) {
  const DualGraph& g = m.glue;
  const DualGraph& b = m.target.graph();
  if (is_directed_flavor(flavor) && !g.directed() && g.flag_count() > 0) {
    throw PreconditionError(std::string("flavor ") + to_string(flavor) +
                            " needs direction data");
  }
  auto all_vertices = [](const DualGraph& x, auto pred) {
    for (std::size_t v = 0; v < x.vertex_count(); ++v)
      if (!pred(x, v)) return false;
    return true;
  };
  auto three_flags = [](const DualGraph& x, std::size_t v) { return x.valence(v) >= 3; };
  auto genus_zero = [](const DualGraph& x, std::size_t v) { return x.genus(v) == 0; };
  switch (flavor) {
    case Flavor::G:
    case Flavor::D:
      return true;
    case Flavor::G_stable:
      return is_stable(g) && is_stable(b);
    case Flavor::G0:
    case Flavor::D0:
      return is_forest(g);
    case Flavor::G0_stable:
      return is_forest(g) && all_vertices(g, three_flags) && all_vertices(b, three_flags);
    case Flavor::D_P:
      return all_vertices(g, genus_zero) && (g.flag_count() == 0 || !has_directed_circuit(g));
    case Flavor::H:
      return is_invertible(m);
    case Flavor::H_stable:
      return is_invertible(m) && is_stable(g);
  }
  return false;
}

}  // namespace modop

#endif  // MODOP_CATEGORY_HPP_
