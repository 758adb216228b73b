#ifndef MODOP_FREE_OPERAD_HPP_
#define MODOP_FREE_OPERAD_HPP_

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modop/canon.hpp"
#include "modop/enumerate.hpp"
#include "modop/error.hpp"
#include "modop/matrix.hpp"
#include "modop/perm.hpp"
#include "modop/report.hpp"
#include "modop/smodule.hpp"

namespace modop {

// A family of finite S_n-sets indexed by (g,n), with a total order on
// elements so orbit representatives are well defined.
template <class S>
concept SetSpecies = requires(const S& s, GNKey k, const Perm& p, const typename S::Element& x) {
  { s.elements(k) } -> std::convertible_to<std::vector<typename S::Element>>;
  { s.act(k, p, x) } -> std::convertible_to<typename S::Element>;
  { x < x } -> std::convertible_to<bool>;
  { x == x } -> std::convertible_to<bool>;
};

// A set-based SModule viewed as a species; elements are carrier indices.
class ModuleSpecies {
 public:
  using Element = std::size_t;

  explicit ModuleSpecies(SModule m) : m_(std::make_shared<const SModule>(std::move(m))) {
    if (m_->base() != Base::set) throw PreconditionError("ModuleSpecies needs a set module");
  }

  std::vector<Element> elements(GNKey k) const {
    std::vector<Element> out(m_->size(k));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }
  Element act(GNKey k, const Perm& p, Element x) const { return m_->act(k, p, x); }
  const SModule& module() const noexcept { return *m_; }
  std::string name(GNKey k, Element x) const { return m_->set_at(k)->elements.at(x); }

 private:
  std::shared_ptr<const SModule> m_;
};

// A stable graph class with legs "1".."n" and the data needed to move
// vertex decorations along its automorphisms. Local flag order at a vertex is
// increasing flag index of `graph`.
struct DecoratedClass {
  detail::Code code;
  DualGraph graph;
  GNKey key;
  std::vector<GNKey> vertex_keys;
  std::vector<GraphIso> automorphisms;
  std::vector<std::vector<Perm>> local;  // local[a][v]: ranks at v -> ranks at a(v)

  bool is_corolla() const noexcept { return graph.vertex_count() == 1 && edges(graph).empty(); }
};

using ClassPtr = std::shared_ptr<const DecoratedClass>;

// Rank-level permutation for moving a decoration onto vertex w of `to`: the
// decoration's r-th leg becomes flag images[r] of `to`.
inline Perm local_perm(const DualGraph& to, std::size_t w, const std::vector<std::size_t>& images) {
  const auto& dst = to.flags_at(w);
  Perm pi(images.size());
  for (std::size_t r = 0; r < images.size(); ++r) {
    auto it = std::find(dst.begin(), dst.end(), images[r]);
    if (it == dst.end()) throw PreconditionError("flag image is not at the target vertex");
    pi[r] = static_cast<std::size_t>(it - dst.begin());
  }
  return pi;
}

// Interns leg-fixed isomorphism classes of graphs with legs "1".."n" and
// caches the enumerated stable classes per key. Guarded by a mutex so one
// registry may back several operads.
class ClassRegistry {
 public:
  struct Interned {
    ClassPtr cls;
    GraphIso iso;  // input graph -> cls->graph
  };

  Interned intern(const DualGraph& g) {
    detail::SearchResult r = detail::canonical_search(detail::structure_of(g, true));
    CanonicalForm cf = detail::build_canonical(g, r.best, true);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = classes_.find(r.code);
    if (it == classes_.end()) {
      it = classes_.emplace(r.code, make_class(r.code, cf.graph)).first;
    }
    return {it->second, std::move(cf.iso)};
  }

  std::vector<ClassPtr> stable_classes(GNKey key, EnumFlavor flavor) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = by_key_.find({key, flavor});
      if (it != by_key_.end()) return it->second;
    }
    std::vector<ClassPtr> out;
    for (const GraphClass& c : enumerate_graphs(key, flavor)) out.push_back(intern(c.graph).cls);
    std::lock_guard<std::mutex> lock(mu_);
    by_key_[{key, flavor}] = out;
    return out;
  }

  ClassPtr corolla_class(GNKey key) { return intern(corolla(key.g, numbered_legs(key.n))).cls; }

 private:
  static ClassPtr make_class(const detail::Code& code, const DualGraph& g) {
    auto c = std::make_shared<DecoratedClass>();
    c->code = code;
    c->graph = g;
    c->key = {component_genus(g, components(g).front()), legs(g).size()};
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
      c->vertex_keys.push_back({g.genus(v), g.valence(v)});
    c->automorphisms = automorphisms(g, true);
    for (const GraphIso& a : c->automorphisms) {
      std::vector<Perm> per_vertex;
      for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        std::vector<std::size_t> images;
        for (std::size_t f : g.flags_at(v)) images.push_back(a.flags[f]);
        per_vertex.push_back(local_perm(g, a.vertices[v], images));
      }
      c->local.push_back(std::move(per_vertex));
    }
    return c;
  }

  std::mutex mu_;
  std::map<detail::Code, ClassPtr> classes_;
  std::map<std::pair<GNKey, EnumFlavor>, std::vector<ClassPtr>> by_key_;
};

// An element of the free operad: a class with one decoration per vertex,
// stored as the lexicographically least member of its automorphism orbit.
template <class E>
struct Decorated {
  ClassPtr cls;
  std::vector<E> deco;

  friend bool operator==(const Decorated& a, const Decorated& b) {
    return a.cls->code == b.cls->code && a.deco == b.deco;
  }
  friend bool operator<(const Decorated& a, const Decorated& b) {
    if (a.cls->code != b.cls->code) return a.cls->code < b.cls->code;
    return std::lexicographical_compare(a.deco.begin(), a.deco.end(), b.deco.begin(),
                                        b.deco.end());
  }
};

struct FreeOptions {
  EnumFlavor flavor = EnumFlavor::stable;  // stable or cyclic
  bool normalize = true;  // false only to exhibit a broken substitution
};

// The free operad on a species S: decorated stable graphs modulo automorphism.
// It is itself a species, so it can be iterated to build TT S and TTT S.
template <SetSpecies S>
class FreeOperad {
 public:
  using BaseElement = typename S::Element;
  using Element = Decorated<BaseElement>;

  FreeOperad(S base, std::shared_ptr<ClassRegistry> registry, FreeOptions opt = {})
      : base_(std::move(base)),
        registry_(std::move(registry)),
        opt_(opt),
        cache_(std::make_shared<Cache>()) {
    if (opt_.flavor != EnumFlavor::stable && opt_.flavor != EnumFlavor::cyclic) {
      throw PreconditionError("free operad flavor must be stable or cyclic");
    }
  }

  const S& base() const noexcept { return base_; }
  const std::shared_ptr<ClassRegistry>& registry() const noexcept { return registry_; }
  const FreeOptions& options() const noexcept { return opt_; }

  // Orbit representatives over every stable class of the key.
  std::vector<Element> elements(GNKey key) const {
    {
      std::lock_guard<std::mutex> lock(cache_->mu);
      auto it = cache_->elements.find(key);
      if (it != cache_->elements.end()) return it->second;
    }
    std::set<Element> found;
    if (key.stable()) {
      for (const ClassPtr& c : registry_->stable_classes(key, opt_.flavor)) {
        std::vector<std::vector<BaseElement>> lists;
        bool empty = false;
        for (GNKey vk : c->vertex_keys) {
          lists.push_back(base_.elements(vk));
          empty = empty || lists.back().empty();
        }
        if (empty) continue;
        std::vector<std::size_t> sizes;
        for (const auto& l : lists) sizes.push_back(l.size());
        for (const auto& t : product_tuples(sizes)) {
          std::vector<BaseElement> deco;
          for (std::size_t v = 0; v < t.size(); ++v) deco.push_back(lists[v][t[v]]);
          found.insert(normalize(c, std::move(deco)));
        }
      }
    }
    std::vector<Element> out(found.begin(), found.end());
    std::lock_guard<std::mutex> lock(cache_->mu);
    cache_->elements.emplace(key, out);
    return out;
  }

  // Least member of the Aut-orbit of a decoration.
  Element normalize(ClassPtr cls, std::vector<BaseElement> deco) const {
    if (deco.size() != cls->graph.vertex_count()) {
      throw PreconditionError("decoration length differs from vertex count");
    }
    if (!opt_.normalize) return {std::move(cls), std::move(deco)};
    std::vector<BaseElement> best = deco;
    for (std::size_t a = 1; a < cls->automorphisms.size(); ++a) {
      std::vector<BaseElement> moved = transport_by(*cls, a, deco);
      if (moved < best) best = std::move(moved);
    }
    return {std::move(cls), std::move(best)};
  }

  // The corolla decorated by x.
  Element unit(GNKey key, const BaseElement& x) const {
    return normalize(registry_->corolla_class(key), {x});
  }

  // Relabel legs: leg k becomes leg p(k) (0-based ranks).
  Element act(GNKey key, const Perm& p, const Element& x) const {
    const DualGraph& g = x.cls->graph;
    if (p.size() != key.n || x.cls->key != key) throw PreconditionError("act: arity mismatch");
    std::vector<Token> names = g.flags();
    for (std::size_t f = 0; f < g.flag_count(); ++f) {
      if (!g.is_leg(f)) continue;
      std::size_t k = std::stoul(g.flag_name(f)) - 1;
      names[f] = std::to_string(p[k] + 1);
    }
    DualGraph h(names, g.vertices(), g.incidence(), g.involution(), g.genera(), g.directions());
    ClassRegistry::Interned in = registry_->intern(h);
    std::vector<std::size_t> flag_to(g.flag_count());
    for (std::size_t f = 0; f < g.flag_count(); ++f)
      flag_to[f] = in.iso.flags[*h.flag_index(names[f])];
    std::vector<std::size_t> vertex_to(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
      vertex_to[v] = in.iso.vertices[*h.vertex_index(g.vertex_name(v))];
    std::vector<BaseElement> deco(g.vertex_count());
    place(g, x.cls->vertex_keys, x.deco, in.cls->graph, flag_to, vertex_to, deco);
    return normalize(in.cls, std::move(deco));
  }

  // Graph insertion: vertex v of `outer` is replaced by inner[v], whose leg
  // "k" is glued to the k-th flag at v.
  Element substitute(const DecoratedClass& outer, const std::vector<Element>& inner) const {
    const DualGraph& og = outer.graph;
    if (inner.size() != og.vertex_count()) throw PreconditionError("one inner element per vertex");
    for (std::size_t v = 0; v < og.vertex_count(); ++v) {
      if (inner[v].cls->key != outer.vertex_keys[v]) {
        throw PreconditionError("inner type " + to_string(inner[v].cls->key) +
                                " does not match vertex type " + to_string(outer.vertex_keys[v]));
      }
    }
    // Flattened graph: inner flags/vertices namespaced by outer vertex.
    std::vector<Token> flags, vertices;
    std::vector<std::size_t> inc, inv;
    std::vector<Genus> genus;
    std::vector<std::size_t> flag_base(og.vertex_count()), vertex_base(og.vertex_count());
    for (std::size_t v = 0; v < og.vertex_count(); ++v) {
      const DualGraph& ig = inner[v].cls->graph;
      flag_base[v] = flags.size();
      vertex_base[v] = vertices.size();
      std::string ns = std::to_string(v) + ":";
      for (std::size_t f = 0; f < ig.flag_count(); ++f) {
        flags.push_back(ns + ig.flag_name(f));
        inc.push_back(vertex_base[v] + ig.vertex_of(f));
        inv.push_back(flag_base[v] + ig.partner(f));
      }
      for (std::size_t u = 0; u < ig.vertex_count(); ++u) {
        vertices.push_back(ns + ig.vertex_name(u));
        genus.push_back(ig.genus(u));
      }
    }
    // Inner leg "k" at v sits where the k-th outer flag at v was.
    auto inner_leg = [&](std::size_t v, std::size_t rank) {
      const DualGraph& ig = inner[v].cls->graph;
      return flag_base[v] + *ig.flag_index(std::to_string(rank + 1));
    };
    for (std::size_t v = 0; v < og.vertex_count(); ++v) {
      const auto& at = og.flags_at(v);
      for (std::size_t r = 0; r < at.size(); ++r) {
        std::size_t o = at[r];
        std::size_t x = inner_leg(v, r);
        if (og.is_leg(o)) {
          flags[x] = og.flag_name(o);
          inv[x] = x;
        } else {
          std::size_t o2 = og.partner(o);
          std::size_t v2 = og.vertex_of(o2);
          const auto& at2 = og.flags_at(v2);
          std::size_t r2 = static_cast<std::size_t>(std::find(at2.begin(), at2.end(), o2) - at2.begin());
          inv[x] = inner_leg(v2, r2);
        }
      }
    }
    // Keep the raw positions: the constructor sorts by name.
    std::vector<Token> raw_flags = flags;
    std::vector<Token> raw_vertices = vertices;
    DualGraph flat(flags, vertices, inc, inv, genus);
    ClassRegistry::Interned in = registry_->intern(flat);
    std::vector<std::size_t> flag_to(raw_flags.size()), vertex_to(raw_vertices.size());
    for (std::size_t i = 0; i < raw_flags.size(); ++i)
      flag_to[i] = in.iso.flags[*flat.flag_index(raw_flags[i])];
    for (std::size_t i = 0; i < raw_vertices.size(); ++i)
      vertex_to[i] = in.iso.vertices[*flat.vertex_index(raw_vertices[i])];

    std::vector<BaseElement> deco(in.cls->graph.vertex_count());
    for (std::size_t v = 0; v < og.vertex_count(); ++v) {
      const DualGraph& ig = inner[v].cls->graph;
      std::vector<std::size_t> ft(ig.flag_count()), vt(ig.vertex_count());
      for (std::size_t f = 0; f < ig.flag_count(); ++f) ft[f] = flag_to[flag_base[v] + f];
      for (std::size_t u = 0; u < ig.vertex_count(); ++u) vt[u] = vertex_to[vertex_base[v] + u];
      place(ig, inner[v].cls->vertex_keys, inner[v].deco, in.cls->graph, ft, vt, deco);
    }
    return normalize(in.cls, std::move(deco));
  }

  // Monad multiplication TT S -> T S.
  Element mult(const Decorated<Element>& z) const { return substitute(*z.cls, z.deco); }

  // T applied to a map f: Z(key) -> S(key), landing in this operad.
  template <class Z, class F>
  Element lift(const Decorated<Z>& z, F&& f) const {
    std::vector<BaseElement> deco;
    for (std::size_t v = 0; v < z.deco.size(); ++v) deco.push_back(f(z.cls->vertex_keys[v], z.deco[v]));
    return normalize(z.cls, std::move(deco));
  }

  // Decoration moved along the a-th automorphism of its class.
  std::vector<BaseElement> transport_by(const DecoratedClass& c, std::size_t a,
                                        const std::vector<BaseElement>& deco) const {
    std::vector<BaseElement> out(deco);
    const GraphIso& iso = c.automorphisms[a];
    for (std::size_t v = 0; v < deco.size(); ++v) {
      out[iso.vertices[v]] = base_.act(c.vertex_keys[v], c.local[a][v], deco[v]);
    }
    return out;
  }

  // Composite along an arbitrary graph with legs "1".."n": inner[v] is read
  // in the local flag order of g at v.
  Element graft(const DualGraph& g, const std::vector<Element>& inner) const {
    ClassRegistry::Interned in = registry_->intern(g);
    std::vector<Element> placed(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      std::vector<std::size_t> images;
      for (std::size_t f : g.flags_at(v)) images.push_back(in.iso.flags[f]);
      std::size_t w = in.iso.vertices[v];
      GNKey k{g.genus(v), g.valence(v)};
      placed[w] = act(k, local_perm(in.cls->graph, w, images), inner[v]);
    }
    return substitute(*in.cls, placed);
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<GNKey, std::vector<Element>> elements;
  };

  // Moves decorations of `from` onto vertices of `to` along index maps.
  void place(const DualGraph& from, const std::vector<GNKey>& keys,
             const std::vector<BaseElement>& deco, const DualGraph& to,
             const std::vector<std::size_t>& flag_to, const std::vector<std::size_t>& vertex_to,
             std::vector<BaseElement>& out) const {
    for (std::size_t u = 0; u < from.vertex_count(); ++u) {
      std::vector<std::size_t> images;
      for (std::size_t f : from.flags_at(u)) images.push_back(flag_to[f]);
      std::size_t w = vertex_to[u];
      out[w] = base_.act(keys[u], local_perm(to, w, images), deco[u]);
    }
  }

  S base_;
  std::shared_ptr<ClassRegistry> registry_;
  FreeOptions opt_;
  std::shared_ptr<Cache> cache_;
};

// When `sample` is set, at most that many elements per key and law are
// checked, drawn with a generator seeded by `seed`.
struct SampleOptions {
  std::optional<std::size_t> sample;
  std::uint64_t seed = 0;
};

template <class E>
std::vector<E> sampled(std::vector<E> all, const SampleOptions& s, std::mt19937_64& rng) {
  if (!s.sample || all.size() <= *s.sample) return all;
  std::vector<E> out;
  std::sample(all.begin(), all.end(), std::back_inserter(out), *s.sample, rng);
  return out;
}

// Unit laws on T S over `keys`, associativity on TTT S over `keys`.
template <SetSpecies S>
Report check_monad_laws(const FreeOperad<S>& t, const std::vector<GNKey>& keys,
                        SampleOptions sample = {}) {
  using TT = FreeOperad<FreeOperad<S>>;
  using TTT = FreeOperad<TT>;
  TT tt(t, t.registry(), t.options());
  TTT ttt(tt, t.registry(), t.options());
  std::mt19937_64 rng(sample.seed);
  Report r;
  for (GNKey key : keys) {
    for (const auto& x : sampled(t.elements(key), sample, rng)) {
      ++r.checked;
      if (!(t.mult(tt.unit(key, x)) == x)) {
        r.fail("left unit", "mult(unit_T(x)) != x at " + to_string(key));
      }
      auto up = tt.lift(x, [&](GNKey k, const auto& e) { return t.unit(k, e); });
      if (!(t.mult(up) == x)) {
        r.fail("right unit", "mult(T unit(x)) != x at " + to_string(key));
      }
    }
    for (const auto& z : sampled(ttt.elements(key), sample, rng)) {
      ++r.checked;
      auto lhs = t.mult(tt.mult(z));
      auto rhs = t.mult(tt.lift(z, [&](GNKey, const auto& y) { return t.mult(y); }));
      if (!(lhs == rhs)) {
        r.fail("associativity", "mult o mult_T != mult o T mult at " + to_string(key));
      }
    }
  }
  return r;
}

// Algebra laws for a structure map T Q -> Q: unit, the algebra square, and
// equivariance under adjacent leg swaps.
template <SetSpecies Q, class F>
Report check_algebra(const Q& q, F&& structure, const std::vector<GNKey>& keys,
                     std::shared_ptr<ClassRegistry> registry, FreeOptions opt = {}) {
  FreeOperad<Q> t(q, registry, opt);
  FreeOperad<FreeOperad<Q>> tt(t, registry, opt);
  Report r;
  for (GNKey key : keys) {
    for (const auto& x : q.elements(key)) {
      ++r.checked;
      if (!(structure(key, t.unit(key, x)) == x)) {
        r.fail("unit", "structure(unit(x)) != x at " + to_string(key));
      }
    }
    for (const auto& y : t.elements(key)) {
      for (std::size_t i = 0; i + 1 < key.n; ++i) {
        ++r.checked;
        Perm s = identity_perm(key.n);
        std::swap(s[i], s[i + 1]);
        if (!(structure(key, t.act(key, s, y)) == q.act(key, s, structure(key, y)))) {
          r.fail("equivariance", "s" + std::to_string(i + 1) + " at " + to_string(key));
        }
      }
    }
    for (const auto& z : tt.elements(key)) {
      ++r.checked;
      auto lhs = structure(key, t.mult(z));
      auto rhs = structure(key, t.lift(z, [&](GNKey k, const auto& y) { return structure(k, y); }));
      if (!(lhs == rhs)) {
        r.fail("associativity", "structure o mult != structure o T structure at " +
                                    to_string(key));
      }
    }
  }
  return r;
}

// Every key (g,n) with 0 < 2g-2+n <= bound.
inline std::vector<GNKey> keys_up_to(long long bound) {
  std::vector<GNKey> out;
  for (Genus g = 0; 2 * static_cast<long long>(g) - 2 <= bound; ++g) {
    for (std::size_t n = 0; 2 * static_cast<long long>(g) - 2 + static_cast<long long>(n) <= bound; ++n) {
      GNKey k{g, n};
      if (k.stable()) out.push_back(k);
    }
  }
  std::sort(out.begin(), out.end(), [](GNKey a, GNKey b) {
    return a.excess() != b.excess() ? a.excess() < b.excess() : a < b;
  });
  return out;
}

// Vect base: one summand per class, the coinvariants of the tensor product of
// vertex carriers under Aut, via the averaging projector.
struct CoinvariantSummand {
  ClassPtr cls;
  std::size_t tensor_dim = 0;
  std::size_t dim = 0;
  Matrix projector;
};

inline Matrix automorphism_transport(const SModule& p, const DecoratedClass& c, std::size_t a) {
  std::vector<std::size_t> sizes;
  for (GNKey k : c.vertex_keys) sizes.push_back(p.size(k));
  std::size_t total = 1;
  for (std::size_t s : sizes) total *= s;
  const GraphIso& iso = c.automorphisms[a];
  const std::size_t nv = c.vertex_keys.size();
  std::vector<std::size_t> pre(nv);
  for (std::size_t v = 0; v < nv; ++v) pre[iso.vertices[v]] = v;
  std::vector<Matrix> mats;
  for (std::size_t v = 0; v < nv; ++v) mats.push_back(p.act_matrix(c.vertex_keys[v], c.local[a][v]));
  Matrix out(total, total);
  for (const auto& t : product_tuples(sizes)) {
    Vector col{1};
    for (std::size_t w = 0; w < nv; ++w) col = kron(col, mats[pre[w]].column(t[pre[w]]));
    std::size_t j = tuple_index(t, sizes);
    for (std::size_t i = 0; i < col.size(); ++i) out(i, j) = col[i];
  }
  return out;
}

inline std::vector<CoinvariantSummand> free_value_vect(const SModule& p, GNKey key,
                                                       ClassRegistry& registry,
                                                       EnumFlavor flavor = EnumFlavor::stable) {
  if (p.base() != Base::vect) throw PreconditionError("free_value_vect needs a vect module");
  if (!p.stable()) throw PreconditionError("the free operad needs a module marked stable");
  std::vector<CoinvariantSummand> out;
  for (const ClassPtr& c : registry.stable_classes(key, flavor)) {
    std::size_t total = 1;
    for (GNKey k : c->vertex_keys) total *= p.size(k);
    if (total == 0) continue;
    Matrix sum(total, total);
    for (std::size_t a = 0; a < c->automorphisms.size(); ++a) sum = sum + automorphism_transport(p, *c, a);
    sum *= Rational(1) / Rational(static_cast<unsigned long>(c->automorphisms.size()));
    std::size_t d = rank(sum);
    out.push_back({c, total, d, std::move(sum)});
  }
  return out;
}

}  // namespace modop

#endif  // MODOP_FREE_OPERAD_HPP_
