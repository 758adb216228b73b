#ifndef MODOP_ENDOMORPHISM_HPP_
#define MODOP_ENDOMORPHISM_HPP_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modop/category.hpp"
#include "modop/error.hpp"
#include "modop/free_operad.hpp"
#include "modop/matrix.hpp"
#include "modop/perm.hpp"
#include "modop/report.hpp"
#include "modop/smodule.hpp"

namespace modop {

// (M, t) with t symmetric.
struct BilinearSpace {
  std::size_t dim = 0;
  Matrix form;

  BilinearSpace() = default;
  BilinearSpace(std::size_t d, Matrix t, bool claim_nondegenerate = false)
      : dim(d), form(std::move(t)) {
    if (form.rows() != dim || form.cols() != dim) throw PreconditionError("form must be dim x dim");
    if (!(form == form.transpose())) throw PreconditionError("form is not symmetric");
    if (claim_nondegenerate && determinant(form) == 0) {
      throw PreconditionError("form claimed non-degenerate but det(t) = 0");
    }
  }

  bool nondegenerate() const { return determinant(form) != 0; }
};

// (M+, M-, t: M+ (x) M- -> 1); rows of t index M+.
struct DirectedPair {
  std::size_t dim_out = 0;
  std::size_t dim_in = 0;
  Matrix pairing;

  DirectedPair() = default;
  DirectedPair(std::size_t d_out, std::size_t d_in, Matrix t)
      : dim_out(d_out), dim_in(d_in), pairing(std::move(t)) {
    if (pairing.rows() != dim_out || pairing.cols() != dim_in) {
      throw PreconditionError("pairing must be dim_out x dim_in");
    }
  }
};

inline std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > (std::size_t{1} << 40) / base) throw LimitError("tensor power too large");
    r *= base;
  }
  return r;
}

// End(M,t)(A) = M^{(x) legs}, basis indexed by functions legs -> {0..dim-1}
// in sorted leg order.
struct EndValue {
  std::size_t dim = 1;
  std::vector<Token> slots;
};

inline EndValue end_value(const BilinearSpace& space, const GObject& obj) {
  EndValue v;
  for (std::size_t f : legs(obj.graph())) v.slots.push_back(obj.graph().flag_name(f));
  v.dim = checked_power(space.dim, v.slots.size());
  return v;
}

namespace detail {

inline std::size_t radix_total(const std::vector<std::size_t>& dims) {
  std::size_t t = 1;
  for (std::size_t d : dims) {
    if (d != 0 && t > (std::size_t{1} << 40) / d) throw LimitError("tensor too large");
    t *= d;
  }
  return t;
}

inline void radix_digits(std::size_t idx, const std::vector<std::size_t>& dims,
                         std::vector<std::size_t>& out) {
  out.resize(dims.size());
  for (std::size_t i = dims.size(); i > 0; --i) {
    out[i - 1] = idx % dims[i - 1];
    idx /= dims[i - 1];
  }
}

inline std::size_t radix_index(const std::vector<std::size_t>& digits,
                               const std::vector<std::size_t>& dims) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) idx = idx * dims[i] + digits[i];
  return idx;
}

// Contracts slots a and b (t indexed [digit a][digit b]); remaining slots keep
// their relative order.
inline SparseMatrix contraction(const std::vector<std::size_t>& dims, std::size_t a,
                                std::size_t b, const Matrix& t) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (i != a && i != b) rest.push_back(dims[i]);
  SparseMatrix c(radix_total(rest), radix_total(dims));
  std::vector<std::size_t> digits, kept;
  for (std::size_t j = 0; j < c.cols(); ++j) {
    radix_digits(j, dims, digits);
    const Rational& x = t(digits[a], digits[b]);
    if (x == 0) continue;
    kept.clear();
    for (std::size_t i = 0; i < digits.size(); ++i)
      if (i != a && i != b) kept.push_back(digits[i]);
    c.add(radix_index(kept, rest), j, x);
  }
  return c;
}

// Slot reordering: output slot k reads input slot source[k].
inline SparseMatrix slot_permutation(const std::vector<std::size_t>& dims,
                                     const std::vector<std::size_t>& source) {
  std::vector<std::size_t> out_dims;
  for (std::size_t s : source) out_dims.push_back(dims[s]);
  SparseMatrix p(radix_total(out_dims), radix_total(dims));
  std::vector<std::size_t> digits, moved(source.size());
  for (std::size_t j = 0; j < p.cols(); ++j) {
    radix_digits(j, dims, digits);
    for (std::size_t k = 0; k < source.size(); ++k) moved[k] = digits[source[k]];
    p.add(radix_index(moved, out_dims), j, 1);
  }
  return p;
}

struct SlotPlan {
  std::vector<std::size_t> dims;  // per glue flag
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row slot, col slot) of t per edge
};

inline SparseMatrix contract_and_relabel(const GMorphism& m, const SlotPlan& plan,
                                         const std::vector<const Matrix*>& forms,
                                         const std::optional<std::vector<std::size_t>>& order) {
  const DualGraph& g = m.glue;
  std::vector<std::size_t> slots(g.flag_count());
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
  std::vector<std::size_t> dims = plan.dims;
  std::size_t total = radix_total(dims);
  SparseMatrix acc = SparseMatrix::identity(total);
  std::vector<std::size_t> seq(plan.pairs.size());
  for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = i;
  if (order) {
    if (order->size() != seq.size() || !is_perm(*order)) {
      throw PreconditionError("edge order must be a permutation of the edges");
    }
    seq = *order;
  }
  for (std::size_t e : seq) {
    auto [fa, fb] = plan.pairs[e];
    std::size_t a = static_cast<std::size_t>(std::find(slots.begin(), slots.end(), fa) - slots.begin());
    std::size_t b = static_cast<std::size_t>(std::find(slots.begin(), slots.end(), fb) - slots.begin());
    acc = contraction(dims, a, b, *forms[e]) * acc;
    std::vector<std::size_t> ns, nd;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (i == a || i == b) continue;
      ns.push_back(slots[i]);
      nd.push_back(dims[i]);
    }
    slots = std::move(ns);
    dims = std::move(nd);
  }
  const DualGraph& tg = m.target.graph();
  std::vector<std::size_t> source;
  for (std::size_t l : legs(tg)) {
    std::size_t f = *g.flag_index(m.alpha.at(tg.flag_name(l)));
    source.push_back(static_cast<std::size_t>(std::find(slots.begin(), slots.end(), f) - slots.begin()));
  }
  return slot_permutation(dims, source) * acc;
}

}  // namespace detail

// End(M,t) on a morphism: contract every glue edge with t, then reorder the
// surviving slots into the target's sorted leg order via alpha. `edge_order`
// permutes the contraction sequence (indices into edges(glue)).
inline SparseMatrix end_action(const BilinearSpace& space, const GMorphism& m,
                               const std::optional<std::vector<std::size_t>>& edge_order = std::nullopt) {
  detail::SlotPlan plan;
  plan.dims.assign(m.glue.flag_count(), space.dim);
  std::vector<const Matrix*> forms;
  for (const Edge& e : edges(m.glue)) {
    plan.pairs.emplace_back(e.first, e.second);
    forms.push_back(&space.form);
  }
  return detail::contract_and_relabel(m, plan, forms, edge_order);
}

// Directed End: out-flags carry M+, in-flags M-; each edge contracts its out
// slot against its in slot with the pairing.
inline SparseMatrix end_dir_action(const DirectedPair& pair, const GMorphism& m,
                                   const std::optional<std::vector<std::size_t>>& edge_order = std::nullopt) {
  const DualGraph& g = m.glue;
  if (!g.directed() && g.flag_count() > 0) throw PreconditionError("end_dir_action needs a digraph");
  detail::SlotPlan plan;
  for (std::size_t f = 0; f < g.flag_count(); ++f)
    plan.dims.push_back(g.direction(f) == Direction::out ? pair.dim_out : pair.dim_in);
  std::vector<const Matrix*> forms;
  for (const Edge& e : edges(g)) {
    Direction d1 = g.direction(e.first);
    if (d1 == g.direction(e.second)) {
      throw PreconditionError("direction mismatch on edge {" + g.flag_name(e.first) + "," +
                              g.flag_name(e.second) + "}");
    }
    if (d1 == Direction::out) plan.pairs.emplace_back(e.first, e.second);
    else plan.pairs.emplace_back(e.second, e.first);
    forms.push_back(&pair.pairing);
  }
  const DualGraph& tg = m.target.graph();
  for (std::size_t l : legs(tg)) {
    std::size_t f = *g.flag_index(m.alpha.at(tg.flag_name(l)));
    if (!tg.directed() || tg.direction(l) != g.direction(f)) {
      throw PreconditionError("direction mismatch at target leg " + tg.flag_name(l));
    }
  }
  return detail::contract_and_relabel(m, plan, forms, edge_order);
}

// End(M,t) restricted to the given keys as a vect SModule: M^{(x) n} with
// S_n permuting tensor slots.
inline Matrix slot_swap_matrix(std::size_t dim, std::size_t n, std::size_t i) {
  std::vector<std::size_t> dims(n, dim), source(n);
  for (std::size_t k = 0; k < n; ++k) source[k] = k;
  std::swap(source[i], source[i + 1]);
  return detail::slot_permutation(dims, source).dense();
}

inline SModule end_smodule(const BilinearSpace& space, const std::vector<GNKey>& keys, bool stable = true) {
  SModule m(Base::vect, stable);
  for (GNKey k : keys) {
    VectCarrier c{checked_power(space.dim, k.n), {}};
    for (std::size_t i = 0; i + 1 < k.n; ++i) c.transpositions.push_back(slot_swap_matrix(space.dim, k.n, i));
    m.add(k, std::move(c));
  }
  return m;
}

// Acting by a leg permutation on a tensor: leg k moves to slot p(k).
inline Vector permute_slots(const Vector& v, std::size_t dim, const Perm& p) {
  std::vector<std::size_t> dims(p.size(), dim);
  Perm q = inverse(p);
  return detail::slot_permutation(dims, q).dense() * v;
}

// Contracts slots a, b of a tensor with t.
inline Vector contract_slots(const Vector& v, std::size_t dim, std::size_t n, std::size_t a,
                             std::size_t b, const Matrix& t) {
  std::vector<std::size_t> dims(n, dim);
  return detail::contraction(dims, a, b, t).dense() * v;
}

// Basis tensors of M^{(x) n} as a species; S_n permutes slots.
class BasisSpecies {
 public:
  using Element = std::vector<std::size_t>;

  explicit BasisSpecies(std::size_t dim, std::vector<GNKey> support)
      : dim_(dim), support_(std::move(support)) {}

  std::vector<Element> elements(GNKey k) const {
    if (std::find(support_.begin(), support_.end(), k) == support_.end()) return {};
    std::vector<std::size_t> sizes(k.n, dim_);
    return product_tuples(sizes);
  }
  Element act(GNKey, const Perm& p, const Element& x) const {
    Element y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[p[i]] = x[i];
    return y;
  }
  std::size_t dim() const noexcept { return dim_; }

 private:
  std::size_t dim_;
  std::vector<GNKey> support_;
};

inline Vector basis_vector(std::size_t dim, const std::vector<std::size_t>& digits) {
  std::vector<std::size_t> dims(digits.size(), dim);
  Vector v(detail::radix_total(dims));
  v[detail::radix_index(digits, dims)] = 1;
  return v;
}

// The End(M,t) structure map on a decorated class, extended multilinearly:
// tensor the vertex values (vertex order, local flag order), contract every
// edge with t, and read the legs "1".."n" in order.
inline Vector end_structure(const BilinearSpace& space, const DecoratedClass& c,
                            const std::vector<Vector>& deco) {
  const DualGraph& g = c.graph;
  std::vector<std::size_t> slot_flag;
  Vector acc{1};
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    acc = kron(acc, deco.at(v));
    for (std::size_t f : g.flags_at(v)) slot_flag.push_back(f);
  }
  std::vector<std::size_t> dims(slot_flag.size(), space.dim);
  if (acc.size() != detail::radix_total(dims)) throw PreconditionError("decoration sizes do not match");
  for (const Edge& e : edges(g)) {
    std::size_t a = static_cast<std::size_t>(std::find(slot_flag.begin(), slot_flag.end(), e.first) - slot_flag.begin());
    std::size_t b = static_cast<std::size_t>(std::find(slot_flag.begin(), slot_flag.end(), e.second) - slot_flag.begin());
    acc = detail::contraction(dims, a, b, space.form).dense() * acc;
    std::vector<std::size_t> ns;
    for (std::size_t i = 0; i < slot_flag.size(); ++i)
      if (i != a && i != b) ns.push_back(slot_flag[i]);
    slot_flag = std::move(ns);
    dims.assign(slot_flag.size(), space.dim);
  }
  std::vector<std::size_t> source;
  for (std::size_t l : legs(g)) {
    source.push_back(static_cast<std::size_t>(std::find(slot_flag.begin(), slot_flag.end(), l) - slot_flag.begin()));
  }
  return detail::slot_permutation(dims, source).dense() * acc;
}

using VectStructure = std::function<Vector(const DecoratedClass&, const std::vector<Vector>&)>;

// Algebra laws for a multilinear structure T Q -> Q with Q = M^{(x) n} on the
// given keys, checked on basis inputs: unit, Aut-invariance, equivariance
// under adjacent leg swaps, and the algebra square.
inline Report check_vect_algebra(const BilinearSpace& space, const std::vector<GNKey>& keys,
                                 const VectStructure& structure,
                                 std::shared_ptr<ClassRegistry> registry) {
  BasisSpecies q(space.dim, keys);
  FreeOperad<BasisSpecies> t(q, registry);
  FreeOperad<FreeOperad<BasisSpecies>> tt(t, registry);
  auto basis = [&](const std::vector<std::size_t>& x) { return basis_vector(space.dim, x); };
  auto eval = [&](const Decorated<BasisSpecies::Element>& x) {
    std::vector<Vector> d;
    for (const auto& b : x.deco) d.push_back(basis(b));
    return structure(*x.cls, d);
  };
  Report r;
  for (GNKey key : keys) {
    for (const auto& x : q.elements(key)) {
      ++r.checked;
      if (structure(*registry->corolla_class(key), {basis(x)}) != basis(x)) {
        r.fail("unit", "corolla at " + to_string(key));
      }
    }
    for (const ClassPtr& c : registry->stable_classes(key, EnumFlavor::stable)) {
      std::vector<std::vector<BasisSpecies::Element>> lists;
      std::vector<std::size_t> sizes;
      for (GNKey vk : c->vertex_keys) {
        lists.push_back(q.elements(vk));
        sizes.push_back(lists.back().size());
      }
      for (const auto& tup : product_tuples(sizes)) {
        std::vector<BasisSpecies::Element> deco;
        for (std::size_t v = 0; v < tup.size(); ++v) deco.push_back(lists[v][tup[v]]);
        std::vector<Vector> dv;
        for (const auto& b : deco) dv.push_back(basis(b));
        Vector base = structure(*c, dv);
        for (std::size_t a = 1; a < c->automorphisms.size(); ++a) {
          ++r.checked;
          std::vector<Vector> moved;
          for (const auto& b : t.transport_by(*c, a, deco)) moved.push_back(basis(b));
          if (structure(*c, moved) != base) {
            r.fail("invariance", "automorphism " + std::to_string(a) + " at " + to_string(key));
          }
        }
      }
    }
    for (const auto& x : t.elements(key)) {
      Vector v = eval(x);
      for (std::size_t i = 0; i + 1 < key.n; ++i) {
        ++r.checked;
        Perm s = identity_perm(key.n);
        std::swap(s[i], s[i + 1]);
        if (eval(t.act(key, s, x)) != permute_slots(v, space.dim, s)) {
          r.fail("equivariance", "s" + std::to_string(i + 1) + " at " + to_string(key));
        }
      }
    }
    for (const auto& z : tt.elements(key)) {
      ++r.checked;
      Vector lhs = eval(t.mult(z));
      std::vector<Vector> inner;
      for (const auto& y : z.deco) inner.push_back(eval(y));
      Vector rhs = structure(*z.cls, inner);
      if (lhs != rhs) r.fail("associativity", "algebra square at " + to_string(key));
    }
  }
  return r;
}

// Operad-morphism check for rho: T S -> End(M,t) given on every element over
// `keys`: equivariance, and compatibility with the generating single-edge
// gluings (two vertices, and one loop). After gluing, legs are numbered by
// the first factor's remaining legs, then the second's.
template <SetSpecies S, class Rho>
Report check_operad_morphism(const FreeOperad<S>& t, const BilinearSpace& space, Rho&& rho,
                             const std::vector<GNKey>& keys) {
  Report r;
  auto in_keys = [&](GNKey k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); };
  for (GNKey key : keys) {
    for (const auto& x : t.elements(key)) {
      Vector v = rho(key, x);
      if (v.size() != checked_power(space.dim, key.n)) {
        r.fail("shape", "rho has the wrong size at " + to_string(key));
        continue;
      }
      for (std::size_t i = 0; i + 1 < key.n; ++i) {
        ++r.checked;
        Perm s = identity_perm(key.n);
        std::swap(s[i], s[i + 1]);
        if (rho(key, t.act(key, s, x)) != permute_slots(v, space.dim, s)) {
          r.fail("equivariance", "s" + std::to_string(i + 1) + " at " + to_string(key));
        }
      }
    }
  }
  // Graph with legs "1".."n" and one gluing edge named "x"/"y". to_local[v]
  // carries the v-th factor's leg numbering to its local flag order.
  struct Gluing {
    DualGraph graph;
    std::vector<Perm> to_local;
  };
  auto build = [](const std::vector<GNKey>& factors, const std::vector<std::size_t>& owner_of_x,
                  const std::vector<std::size_t>& leg_x) {
    // owner_of_x/leg_x: the two glued flags as (factor, leg) pairs.
    std::vector<Token> flags;
    std::vector<std::size_t> inc;
    std::vector<std::vector<std::size_t>> pos(factors.size());
    std::size_t next = 0;
    for (std::size_t v = 0; v < factors.size(); ++v) {
      for (std::size_t a = 0; a < factors[v].n; ++a) {
        pos[v].push_back(flags.size());
        if (v == owner_of_x[0] && a == leg_x[0]) flags.push_back("x");
        else if (v == owner_of_x[1] && a == leg_x[1]) flags.push_back("y");
        else flags.push_back(std::to_string(++next));
        inc.push_back(v);
      }
    }
    std::vector<std::size_t> inv(flags.size());
    for (std::size_t f = 0; f < inv.size(); ++f) inv[f] = f;
    std::size_t fx = pos[owner_of_x[0]][leg_x[0]];
    std::size_t fy = pos[owner_of_x[1]][leg_x[1]];
    inv[fx] = fy;
    inv[fy] = fx;
    std::vector<Token> names;
    std::vector<Genus> genus;
    for (std::size_t v = 0; v < factors.size(); ++v) {
      names.push_back("v" + std::to_string(v + 1));
      genus.push_back(factors[v].g);
    }
    Gluing out{DualGraph(flags, names, inc, inv, genus), {}};
    for (std::size_t v = 0; v < factors.size(); ++v) {
      std::vector<std::size_t> images;
      for (std::size_t f : pos[v]) images.push_back(*out.graph.flag_index(flags[f]));
      out.to_local.push_back(local_perm(out.graph, *out.graph.vertex_index(names[v]), images));
    }
    return out;
  };
  for (GNKey k1 : keys) {
    for (GNKey k2 : keys) {
      if (k1.n == 0 || k2.n == 0) continue;
      GNKey k{k1.g + k2.g, k1.n + k2.n - 2};
      if (!in_keys(k)) continue;
      for (const auto& x : t.elements(k1)) {
        Vector vx = rho(k1, x);
        for (const auto& y : t.elements(k2)) {
          Vector vxy = kron(vx, rho(k2, y));
          for (std::size_t i = 0; i < k1.n; ++i) {
            for (std::size_t j = 0; j < k2.n; ++j) {
              ++r.checked;
              Gluing gl = build({k1, k2}, {0, 1}, {i, j});
              auto glued = t.graft(gl.graph, {t.act(k1, gl.to_local[0], x),
                                              t.act(k2, gl.to_local[1], y)});
              Vector expect = contract_slots(vxy, space.dim, k1.n + k2.n, i, k1.n + j, space.form);
              if (rho(k, glued) != expect) {
                r.fail("two-vertex gluing", to_string(k1) + " leg " + std::to_string(i + 1) +
                                                " with " + to_string(k2) + " leg " +
                                                std::to_string(j + 1));
              }
            }
          }
        }
      }
    }
  }
  for (GNKey k1 : keys) {
    if (k1.n < 2) continue;
    GNKey k{k1.g + 1, k1.n - 2};
    if (!in_keys(k)) continue;
    for (const auto& x : t.elements(k1)) {
      Vector vx = rho(k1, x);
      for (std::size_t i = 0; i < k1.n; ++i) {
        for (std::size_t j = i + 1; j < k1.n; ++j) {
          ++r.checked;
          Gluing gl = build({k1}, {0, 0}, {i, j});
          auto glued = t.graft(gl.graph, {t.act(k1, gl.to_local[0], x)});
          Vector expect = contract_slots(vx, space.dim, k1.n, i, j, space.form);
          if (rho(k, glued) != expect) {
            r.fail("loop gluing", to_string(k1) + " legs " + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1));
          }
        }
      }
    }
  }
  return r;
}

}  // namespace modop

#endif  // MODOP_ENDOMORPHISM_HPP_
