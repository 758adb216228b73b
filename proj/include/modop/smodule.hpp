#ifndef MODOP_SMODULE_HPP_
#define MODOP_SMODULE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modop/category.hpp"
#include "modop/error.hpp"
#include "modop/matrix.hpp"
#include "modop/perm.hpp"
#include "modop/report.hpp"

namespace modop {

enum class Base { set, vect };

// A finite S_n-set. transpositions[i][k] is the image of element k under the
// swap of legs i and i+1 (0-based).
struct SetCarrier {
  std::vector<std::string> elements;
  std::vector<std::vector<std::size_t>> transpositions;

  friend bool operator==(const SetCarrier&, const SetCarrier&) = default;
};

// A finite-dimensional representation; transpositions[i] acts on columns.
struct VectCarrier {
  std::size_t dim = 0;
  std::vector<Matrix> transpositions;

  friend bool operator==(const VectCarrier&, const VectCarrier&) = default;
};

// A modular preoperad with finite support: (g,n) -> S_n-set or S_n-module.
// Keys absent from the table stand for the empty set or the zero space.
class SModule {
 public:
  SModule() = default;
  explicit SModule(Base base, bool stable = false) : base_(base), stable_(stable) {}

  Base base() const noexcept { return base_; }
  bool stable() const noexcept { return stable_; }

  void add(GNKey key, SetCarrier c) {
    check_key(key);
    if (base_ != Base::set) throw PreconditionError("set carrier in a vect module");
    std::size_t gens = key.n > 0 ? key.n - 1 : 0;
    if (c.transpositions.size() != gens) {
      throw PreconditionError("carrier " + to_string(key) + " needs " +
                              std::to_string(gens) + " transpositions");
    }
    for (const auto& t : c.transpositions) {
      if (t.size() != c.elements.size()) {
        throw PreconditionError("transposition of wrong length at " + to_string(key));
      }
      for (std::size_t x : t)
        if (x >= c.elements.size())
          throw PreconditionError("transposition image out of range at " + to_string(key));
    }
    sets_[key] = std::move(c);
  }

  void add(GNKey key, VectCarrier c) {
    check_key(key);
    if (base_ != Base::vect) throw PreconditionError("vect carrier in a set module");
    std::size_t gens = key.n > 0 ? key.n - 1 : 0;
    if (c.transpositions.size() != gens) {
      throw PreconditionError("carrier " + to_string(key) + " needs " +
                              std::to_string(gens) + " transpositions");
    }
    for (const Matrix& m : c.transpositions)
      if (m.rows() != c.dim || m.cols() != c.dim)
        throw PreconditionError("transposition matrix of wrong shape at " + to_string(key));
    spaces_[key] = std::move(c);
  }

  std::vector<GNKey> keys() const {
    std::vector<GNKey> out;
    for (const auto& [k, _] : sets_) out.push_back(k);
    for (const auto& [k, _] : spaces_) out.push_back(k);
    return out;
  }

  bool has(GNKey key) const { return sets_.count(key) || spaces_.count(key); }

  const SetCarrier* set_at(GNKey key) const {
    auto it = sets_.find(key);
    return it == sets_.end() ? nullptr : &it->second;
  }
  const VectCarrier* space_at(GNKey key) const {
    auto it = spaces_.find(key);
    return it == spaces_.end() ? nullptr : &it->second;
  }

  // Number of elements (set) or dimension (vect); 0 off the support.
  std::size_t size(GNKey key) const {
    if (const SetCarrier* c = set_at(key)) return c->elements.size();
    if (const VectCarrier* c = space_at(key)) return c->dim;
    return 0;
  }

  // Image of element x under the leg permutation p.
  std::size_t act(GNKey key, const Perm& p, std::size_t x) const {
    const SetCarrier* c = set_at(key);
    if (!c) throw PreconditionError("no carrier at " + to_string(key));
    for (std::size_t j : adjacent_transpositions(p)) x = c->transpositions[j][x];
    return x;
  }

  Matrix act_matrix(GNKey key, const Perm& p) const {
    const VectCarrier* c = space_at(key);
    if (!c) return Matrix();
    Matrix m = Matrix::identity(c->dim);
    for (std::size_t j : adjacent_transpositions(p)) m = c->transpositions[j] * m;
    return m;
  }

  friend bool operator==(const SModule&, const SModule&) = default;

  // The one-point module {*} at each key, with trivial action.
  static SModule point(const std::vector<GNKey>& keys, bool stable = true) {
    SModule m(Base::set, stable);
    for (GNKey k : keys) {
      SetCarrier c{{"*"}, {}};
      for (std::size_t i = 0; i + 1 < k.n; ++i) c.transpositions.push_back({0});
      m.add(k, std::move(c));
    }
    return m;
  }

  // The trivial one-dimensional representation at each key.
  static SModule trivial_line(const std::vector<GNKey>& keys, bool stable = true) {
    SModule m(Base::vect, stable);
    for (GNKey k : keys) {
      VectCarrier c{1, {}};
      for (std::size_t i = 0; i + 1 < k.n; ++i) c.transpositions.push_back(Matrix::identity(1));
      m.add(k, std::move(c));
    }
    return m;
  }

 private:
  void check_key(GNKey key) const {
    if (stable_ && !key.stable()) {
      throw PreconditionError("key " + to_string(key) + " is not stable (2g-2+n <= 0)");
    }
  }

  Base base_ = Base::set;
  bool stable_ = false;
  std::map<GNKey, SetCarrier> sets_;
  std::map<GNKey, VectCarrier> spaces_;
};

// Legs at vertex v in local order: sorted identifiers, or increasing label
// when a labeling is supplied.
inline std::vector<std::size_t> local_legs(const DualGraph& g, std::size_t v,
                                           const std::map<Token, std::size_t, TokenLess>* labeling) {
  std::vector<std::size_t> out = g.flags_at(v);
  if (labeling) {
    std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
      return labeling->at(g.flag_name(a)) < labeling->at(g.flag_name(b));
    });
  }
  return out;
}

// P evaluated on an object: the product over its vertices (components) in
// vertex order. Set base lists index tuples lexicographically; vect base
// records the tensor dimension, with the first vertex most significant.
struct Evaluation {
  std::vector<GNKey> factors;
  std::vector<std::size_t> sizes;
  std::vector<std::vector<std::size_t>> tuples;
  std::size_t dim = 0;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

inline std::vector<std::vector<std::size_t>> product_tuples(const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s : sizes)
    if (s == 0) return out;
  std::vector<std::size_t> t(sizes.size(), 0);
  while (true) {
    out.push_back(t);
    std::size_t i = sizes.size();
    while (i > 0) {
      --i;
      if (++t[i] < sizes[i]) break;
      t[i] = 0;
      if (i == 0) return out;
    }
    if (sizes.empty()) return out;
  }
}

inline std::size_t tuple_index(const std::vector<std::size_t>& t,
                               const std::vector<std::size_t>& sizes) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < t.size(); ++i) idx = idx * sizes[i] + t[i];
  return idx;
}

inline Evaluation evaluate(const SModule& p, const GObject& obj, bool strict = false) {
  const DualGraph& g = obj.graph();
  Evaluation e;
  e.dim = 1;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    GNKey key{g.genus(v), g.valence(v)};
    if (strict && !p.has(key)) {
      throw PreconditionError("module has no carrier at " + to_string(key));
    }
    e.factors.push_back(key);
    e.sizes.push_back(p.size(key));
    e.dim *= p.size(key);
  }
  if (p.base() == Base::set) e.tuples = product_tuples(e.sizes);
  return e;
}

// For an invertible morphism: the source vertex of each target vertex and
// the local permutation carrying source leg ranks to target leg ranks.
struct VertexTransport {
  std::vector<std::size_t> source_vertex;
  std::vector<Perm> local;
};

inline VertexTransport vertex_transport(const GMorphism& iso) {
  if (!is_invertible(iso)) throw PreconditionError("act needs an invertible morphism");
  const DualGraph& a = iso.source.graph();
  const DualGraph& b = iso.target.graph();
  VertexTransport t;
  for (std::size_t w = 0; w < b.vertex_count(); ++w) {
    std::size_t v = *a.vertex_index(iso.beta.at(b.vertex_name(w)));
    const auto& src = a.flags_at(v);
    const auto& dst = b.flags_at(w);
    if (src.size() != dst.size()) throw PreconditionError("valence mismatch under beta");
    Perm pi(src.size());
    for (std::size_t k = 0; k < dst.size(); ++k) {
      std::size_t f = *a.flag_index(iso.alpha.at(b.flag_name(dst[k])));
      std::size_t r = static_cast<std::size_t>(
          std::find(src.begin(), src.end(), f) - src.begin());
      if (r == src.size()) throw PreconditionError("alpha does not respect beta");
      pi[r] = k;
    }
    t.source_vertex.push_back(v);
    t.local.push_back(std::move(pi));
  }
  return t;
}

// P on a set-based invertible morphism: a map of tuple indices.
inline std::vector<std::size_t> act_set(const SModule& p, const GMorphism& iso) {
  VertexTransport t = vertex_transport(iso);
  Evaluation src = evaluate(p, iso.source);
  Evaluation dst = evaluate(p, iso.target);
  std::vector<std::size_t> out;
  for (const auto& tup : src.tuples) {
    std::vector<std::size_t> image(t.source_vertex.size());
    for (std::size_t w = 0; w < image.size(); ++w) {
      std::size_t v = t.source_vertex[w];
      image[w] = p.act(src.factors[v], t.local[w], tup[v]);
    }
    out.push_back(tuple_index(image, dst.sizes));
  }
  return out;
}

// P on a vect-based invertible morphism: a dim(target) x dim(source) matrix.
inline Matrix act_vect(const SModule& p, const GMorphism& iso) {
  VertexTransport t = vertex_transport(iso);
  Evaluation src = evaluate(p, iso.source);
  Evaluation dst = evaluate(p, iso.target);
  std::vector<Matrix> mats;
  for (std::size_t w = 0; w < t.source_vertex.size(); ++w) {
    mats.push_back(p.act_matrix(src.factors[t.source_vertex[w]], t.local[w]));
  }
  Matrix out(dst.dim, src.dim);
  for (const auto& tup : product_tuples(src.sizes)) {
    Vector col{1};
    for (std::size_t w = 0; w < mats.size(); ++w) {
      col = kron(col, mats[w].column(tup[t.source_vertex[w]]));
    }
    std::size_t j = tuple_index(tup, src.sizes);
    for (std::size_t i = 0; i < col.size(); ++i) out(i, j) = col[i];
  }
  return out;
}

namespace detail {

inline bool set_word_is_identity(const SetCarrier& c, const std::vector<std::size_t>& word) {
  for (std::size_t x = 0; x < c.elements.size(); ++x) {
    std::size_t y = x;
    for (std::size_t j : word) y = c.transpositions[j][y];
    if (y != x) return false;
  }
  return true;
}

inline bool vect_word_is_identity(const VectCarrier& c, const std::vector<std::size_t>& word) {
  Matrix m = Matrix::identity(c.dim);
  for (std::size_t j : word) m = c.transpositions[j] * m;
  return m == Matrix::identity(c.dim);
}

}  // namespace detail

// Coxeter presentation of S_n: s_i^2, (s_i s_{i+1})^3 and (s_i s_j)^2 for
// |i-j| >= 2. Every failing relation is reported by name.
inline Report check_equivariance(const SModule& p) {
  Report r;
  for (GNKey key : p.keys()) {
    std::size_t gens = key.n > 0 ? key.n - 1 : 0;
    auto holds = [&](const std::vector<std::size_t>& word) {
      ++r.checked;
      if (const SetCarrier* c = p.set_at(key)) return detail::set_word_is_identity(*c, word);
      return detail::vect_word_is_identity(*p.space_at(key), word);
    };
    if (const SetCarrier* c = p.set_at(key)) {
      for (std::size_t i = 0; i < gens; ++i)
        if (!is_perm(c->transpositions[i]))
          r.fail("bijection", "s" + std::to_string(i + 1) + " at " + to_string(key));
    }
    for (std::size_t i = 0; i < gens; ++i) {
      std::string si = "s" + std::to_string(i + 1);
      if (!holds({i, i})) r.fail("involution", si + "^2 != 1 at " + to_string(key));
      if (i + 1 < gens && !holds({i, i + 1, i, i + 1, i, i + 1})) {
        r.fail("braid", "(" + si + " s" + std::to_string(i + 2) + ")^3 != 1 at " +
                            to_string(key));
      }
      for (std::size_t j = i + 2; j < gens; ++j) {
        if (!holds({i, j, i, j})) {
          r.fail("commutation", "(" + si + " s" + std::to_string(j + 1) + ")^2 != 1 at " +
                                    to_string(key));
        }
      }
    }
  }
  return r;
}

}  // namespace modop

#endif  // MODOP_SMODULE_HPP_
