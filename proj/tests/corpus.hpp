// Seeded random objects and morphisms for the property suites.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "modop/category.hpp"
#include "modop/endomorphism.hpp"
#include "modop/graph.hpp"
#include "modop/matrix.hpp"
#include "modop/token.hpp"

namespace corpus {

using namespace modop;

enum class Kind {
  general,          // any gluing
  forest,           // edges join distinct components
  directed,         // out-in edges, any shape
  directed_forest,  // out-in edges, distinct components
  prop,             // genus-0 vertices, out-in edges, no directed circuit
};

inline bool directed_kind(Kind k) {
  return k == Kind::directed || k == Kind::directed_forest || k == Kind::prop;
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  Token fresh(const char* prefix) { return prefix + std::to_string(++counter_); }

  // Disjoint corollas with at most `max_flags` legs in total.
  GObject object(std::size_t max_flags, Kind kind) {
    std::size_t nv = uniform(1, 3);
    std::vector<Token> flags, vertices;
    std::map<Token, Token> inc, inv;
    std::map<Token, Genus> gen;
    std::map<Token, Direction> dir;
    std::size_t budget = uniform(std::min<std::size_t>(2, max_flags), max_flags);
    for (std::size_t v = 0; v < nv; ++v) {
      Token vn = fresh("v");
      vertices.push_back(vn);
      gen[vn] = kind == Kind::prop ? 0 : uniform(0, 1);
      std::size_t k = v + 1 == nv ? budget : uniform(0, budget);
      budget -= k;
      for (std::size_t i = 0; i < k; ++i) {
        Token f = fresh("l");
        flags.push_back(f);
        inc[f] = vn;
        inv[f] = f;
        dir[f] = coin() ? Direction::out : Direction::in;
      }
    }
    std::optional<std::map<Token, Direction>> d;
    if (directed_kind(kind)) d = dir;
    return GObject(DualGraph::from_named(flags, vertices, inc, inv, gen, d));
  }

  // A random morphism out of `src` whose glue graph respects `kind`.
  GMorphism morphism(const GObject& src, Kind kind, std::size_t max_edges = 3) {
    const DualGraph& s = src.graph();
    std::size_t nf = s.flag_count(), nv = s.vertex_count();
    std::vector<std::size_t> partner(nf);
    std::iota(partner.begin(), partner.end(), 0);
    std::vector<std::size_t> comp(nv);
    std::iota(comp.begin(), comp.end(), 0);
    std::vector<std::vector<bool>> reach(nv, std::vector<bool>(nv, false));
    for (std::size_t v = 0; v < nv; ++v) reach[v][v] = true;
    auto find = [&](std::size_t x) {
      while (comp[x] != x) x = comp[x];
      return x;
    };
    bool directed = directed_kind(kind);
    std::size_t want = uniform(0, std::min(max_edges, nf / 2));
    for (std::size_t attempt = 0; attempt < 40 && want > 0; ++attempt) {
      std::size_t a = uniform(0, nf - 1), b = uniform(0, nf - 1);
      if (a == b || partner[a] != a || partner[b] != b) continue;
      std::size_t u = s.vertex_of(a), w = s.vertex_of(b);
      if (directed) {
        if (s.direction(a) == s.direction(b)) continue;
        if (s.direction(a) == Direction::in) {
          std::swap(a, b);
          std::swap(u, w);
        }
      }
      bool joins = find(u) != find(w);
      if ((kind == Kind::forest || kind == Kind::directed_forest) && !joins) continue;
      if (kind == Kind::prop && reach[w][u]) continue;  // u -> w would close a circuit
      partner[a] = b;
      partner[b] = a;
      comp[find(u)] = find(w);
      for (std::size_t x = 0; x < nv; ++x)
        if (reach[x][u])
          for (std::size_t y = 0; y < nv; ++y)
            if (reach[w][y]) reach[x][y] = true;
      --want;
    }
    std::map<Token, Token> inc, inv;
    std::map<Token, Genus> gen;
    std::map<Token, Direction> dir;
    for (std::size_t f = 0; f < nf; ++f) {
      inc[s.flag_name(f)] = s.vertex_name(s.vertex_of(f));
      inv[s.flag_name(f)] = s.flag_name(partner[f]);
      if (directed) dir[s.flag_name(f)] = s.direction(f);
    }
    for (std::size_t v = 0; v < nv; ++v) gen[s.vertex_name(v)] = s.genus(v);
    std::optional<std::map<Token, Direction>> d;
    if (directed) d = dir;
    DualGraph glue = DualGraph::from_named(s.flags(), s.vertices(), inc, inv, gen, d);

    // One target vertex per component, genus from the component formula.
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t v = 0; v < nv; ++v) members[find(v)].push_back(v);
    std::vector<Token> tflags, tverts;
    std::map<Token, Token> tinc, tinv;
    std::map<Token, Genus> tgen;
    std::map<Token, Direction> tdir;
    TokenMap alpha, beta;
    std::map<std::size_t, Token> root_name;
    for (const auto& [root, vs] : members) {
      Token wn = fresh("w");
      tverts.push_back(wn);
      root_name[root] = wn;
      long long sum = 0, half = 0;
      Token smallest = s.vertex_name(vs.front());
      for (std::size_t v : vs) {
        sum += static_cast<long long>(s.genus(v));
        if (TokenLess{}(s.vertex_name(v), smallest)) smallest = s.vertex_name(v);
        for (std::size_t f = 0; f < nf; ++f)
          if (s.vertex_of(f) == v && partner[f] != f) ++half;
      }
      tgen[wn] = static_cast<Genus>(sum + half / 2 - static_cast<long long>(vs.size()) + 1);
      beta[wn] = smallest;
    }
    std::vector<std::size_t> legs;
    for (std::size_t f = 0; f < nf; ++f)
      if (partner[f] == f) legs.push_back(f);
    std::shuffle(legs.begin(), legs.end(), rng_);
    for (std::size_t f : legs) {
      Token t = fresh("t");
      tflags.push_back(t);
      tinc[t] = root_name.at(find(s.vertex_of(f)));
      tinv[t] = t;
      if (directed) tdir[t] = s.direction(f);
      alpha[t] = s.flag_name(f);
    }
    std::optional<std::map<Token, Direction>> td;
    if (directed) td = tdir;
    GObject target(DualGraph::from_named(tflags, tverts, tinc, tinv, tgen, td));
    return GMorphism{src, std::move(target), std::move(glue), std::move(alpha), std::move(beta)};
  }

  // Composable chain of `length` morphisms starting from a fresh object.
  std::vector<GMorphism> chain(std::size_t length, std::size_t max_flags, Kind kind) {
    std::vector<GMorphism> out;
    GObject x = object(max_flags, kind);
    for (std::size_t i = 0; i < length; ++i) {
      out.push_back(morphism(x, kind));
      x = out.back().target;
    }
    return out;
  }

  // Random symmetric invertible form with small rational entries.
  Matrix symmetric_form(std::size_t dim) {
    while (true) {
      Matrix t(dim, dim);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) {
          long long p = static_cast<long long>(uniform(0, 6)) - 3;
          long long q = static_cast<long long>(uniform(1, 3));
          t(i, j) = t(j, i) = parse_rational(std::to_string(p) + "/" + std::to_string(q));
        }
      if (determinant(t) != 0) return t;
    }
  }

  Matrix any_matrix(std::size_t rows, std::size_t cols) {
    Matrix t(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        long long p = static_cast<long long>(uniform(0, 6)) - 3;
        long long q = static_cast<long long>(uniform(1, 3));
        t(i, j) = parse_rational(std::to_string(p) + "/" + std::to_string(q));
      }
    return t;
  }

 private:
  std::mt19937_64 rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace corpus
