#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corpus.hpp"
#include "oracles.hpp"
#include "modop/endomorphism.hpp"
#include "modop/io.hpp"

using namespace modop;

namespace {

Matrix hyperbolic() {
  Matrix t(2, 2);
  t(0, 1) = t(1, 0) = 1;
  return t;
}

Matrix undirected_oracle(const BilinearSpace& s, const GMorphism& m) {
  std::vector<std::size_t> dims(m.glue.flag_count(), s.dim);
  return oracle::end_matrix(m, dims, [&](std::size_t, std::size_t, std::size_t a, std::size_t b) {
    return s.form(a, b);
  });
}

Matrix directed_oracle(const DirectedPair& p, const GMorphism& m) {
  const DualGraph& g = m.glue;
  std::vector<std::size_t> dims;
  for (std::size_t f = 0; f < g.flag_count(); ++f)
    dims.push_back(g.direction(f) == Direction::out ? p.dim_out : p.dim_in);
  return oracle::end_matrix(m, dims, [&](std::size_t f, std::size_t, std::size_t a, std::size_t b) {
    return g.direction(f) == Direction::out ? p.pairing(a, b) : p.pairing(b, a);
  });
}

Vector random_vector(corpus::Generator& gen, std::size_t n) {
  Matrix m = gen.any_matrix(n, 1);
  return m.column(0);
}

}  // namespace

TEST_CASE("gluing two (0,3)-corollas contracts one slot pair with the form") {
  GMorphism m = io::morphism_from_json(io::read_file(MODOP_SAMPLES_DIR "/glue_two.json"));
  BilinearSpace s(2, hyperbolic(), true);
  Matrix e = end_action(s, m).dense();
  REQUIRE(e.rows() == 16);
  REQUIRE(e.cols() == 64);
  // Column digits (a,b,c,d,e,f), big-endian; rows (a,b,e,f).
  auto col = [](std::size_t a, std::size_t b, std::size_t c, std::size_t d, std::size_t e,
                std::size_t f) { return ((((a * 2 + b) * 2 + c) * 2 + d) * 2 + e) * 2 + f; };
  CHECK(e(0, col(0, 0, 0, 1, 0, 0)) == 1);
  CHECK(e(0, col(0, 0, 1, 0, 0, 0)) == 1);
  CHECK(e(0, col(0, 0, 0, 0, 0, 0)) == 0);
  CHECK(e(0, col(0, 0, 1, 1, 0, 0)) == 0);
  CHECK(e(15, col(1, 1, 0, 1, 1, 1)) == 1);
  CHECK(e == undirected_oracle(s, m));
}

TEST_CASE("identity morphisms act by the identity") {
  corpus::Generator gen(51);
  for (int i = 0; i < 30; ++i) {
    GObject x = gen.object(5, corpus::Kind::general);
    BilinearSpace s(2, gen.symmetric_form(2));
    std::size_t d = end_value(s, x).dim;
    CHECK(end_action(s, identity(x)) == SparseMatrix::identity(d));
  }
}

TEST_CASE("forms are validated") {
  Matrix asym(2, 2);
  asym(0, 1) = 1;
  CHECK_THROWS_AS(BilinearSpace(2, asym), PreconditionError);
  CHECK_THROWS_AS(BilinearSpace(2, Matrix(2, 2), true), PreconditionError);
  CHECK_NOTHROW(BilinearSpace(2, Matrix(2, 2)));
  CHECK_FALSE(BilinearSpace(2, Matrix(2, 2)).nondegenerate());
  CHECK_THROWS_AS(BilinearSpace(3, hyperbolic()), PreconditionError);
  CHECK_THROWS_AS(DirectedPair(2, 1, hyperbolic()), PreconditionError);
}

TEST_CASE("property: end_action agrees with the explicit index sum") {
  corpus::Generator gen(52);
  for (int i = 0; i < 150; ++i) {
    std::size_t dim = gen.uniform(1, 3);
    GObject x = gen.object(dim == 3 ? 6 : 8, corpus::Kind::general);
    GMorphism m = gen.morphism(x, corpus::Kind::general, 3);
    BilinearSpace s(dim, gen.symmetric_form(dim));
    CHECK(end_action(s, m).dense() == undirected_oracle(s, m));
  }
}

TEST_CASE("property: functoriality and contraction-order independence") {
  corpus::Generator gen(53);
  std::size_t pairs = 0;
  while (pairs < 200) {
    std::size_t dim = gen.uniform(1, 3);
    std::vector<GMorphism> ch = gen.chain(2, dim == 3 ? 6 : 8, corpus::Kind::general);
    BilinearSpace s(dim, gen.symmetric_form(dim), true);
    SparseMatrix ef = end_action(s, ch[0]), eh = end_action(s, ch[1]);
    GMorphism hf = compose(ch[0], ch[1]);
    CHECK(end_action(s, hf) == eh * ef);
    std::vector<std::size_t> order(edges(hf.glue).size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), gen.rng());
    CHECK(end_action(s, hf, order) == end_action(s, hf));
    std::reverse(order.begin(), order.end());
    CHECK(end_action(s, hf, order) == end_action(s, hf));
    ++pairs;
  }
  BilinearSpace s(2, hyperbolic());
  GMorphism m = io::morphism_from_json(io::read_file(MODOP_SAMPLES_DIR "/glue_two.json"));
  CHECK_THROWS_AS(end_action(s, m, std::vector<std::size_t>{0, 0}), PreconditionError);
  CHECK_THROWS_AS(end_action(s, m, std::vector<std::size_t>{1}), PreconditionError);
}

TEST_CASE("property: end_action is monoidal") {
  corpus::Generator gen(54);
  for (int i = 0; i < 60; ++i) {
    BilinearSpace s(2, gen.symmetric_form(2));
    GMorphism f = gen.morphism(gen.object(4, corpus::Kind::general), corpus::Kind::general);
    GMorphism h = gen.morphism(gen.object(4, corpus::Kind::general), corpus::Kind::general);
    CHECK(end_action(s, tensor({f, h})) == kron(end_action(s, f), end_action(s, h)));
    // The symmetry swaps the two tensor factors.
    SparseMatrix sym = end_action(s, symmetry(f.source, h.source));
    std::size_t df = end_value(s, f.source).dim, dh = end_value(s, h.source).dim;
    Vector u = random_vector(gen, df), v = random_vector(gen, dh);
    CHECK(sym.dense() * kron(u, v) == kron(v, u));
  }
}

TEST_CASE("end_smodule satisfies the Coxeter relations") {
  BilinearSpace s(2, hyperbolic());
  CHECK(check_equivariance(end_smodule(s, {{0, 3}, {0, 4}, {1, 1}, {1, 2}})).ok());
  CHECK(check_equivariance(end_smodule(BilinearSpace(3, Matrix::identity(3)), {{0, 5}})).ok());
}

TEST_CASE("property: directed End agrees with the oracle and is functorial") {
  corpus::Generator gen(55);
  for (corpus::Kind kind : {corpus::Kind::directed, corpus::Kind::directed_forest, corpus::Kind::prop}) {
    for (int i = 0; i < 70; ++i) {
      std::size_t dout = gen.uniform(1, 2), din = gen.uniform(1, 3);
      DirectedPair p(dout, din, gen.any_matrix(dout, din));
      std::vector<GMorphism> ch = gen.chain(2, 7, kind);
      CHECK(end_dir_action(p, ch[0]).dense() == directed_oracle(p, ch[0]));
      GMorphism hf = compose(ch[0], ch[1]);
      CHECK(end_dir_action(p, hf) == end_dir_action(p, ch[1]) * end_dir_action(p, ch[0]));
      CHECK(end_dir_action(p, identity(ch[0].source)) ==
            SparseMatrix::identity(end_dir_action(p, ch[0]).cols()));
    }
  }
}

TEST_CASE("directed End rejects undirected or mismatched data") {
  DirectedPair p(1, 1, Matrix::identity(1));
  GMorphism m = io::morphism_from_json(io::read_file(MODOP_SAMPLES_DIR "/glue_two.json"));
  CHECK_THROWS_AS(end_dir_action(p, m), PreconditionError);

  std::map<Token, Direction> outs{{"a", Direction::out}, {"b", Direction::out}};
  GObject src(DualGraph::from_named({"a", "b"}, {"v"}, {{"a", "v"}, {"b", "v"}},
                                    {{"a", "a"}, {"b", "b"}}, {{"v", 0}}, outs));
  DualGraph glue = DualGraph::from_named({"a", "b"}, {"v"}, {{"a", "v"}, {"b", "v"}},
                                         {{"a", "b"}, {"b", "a"}}, {{"v", 0}}, outs);
  GObject tgt(DualGraph::from_named({}, {"w"}, {}, {}, {{"w", 1}}, std::map<Token, Direction>{}));
  GMorphism bad{src, tgt, glue, {}, {{"w", "v"}}};
  CHECK_THROWS_AS(end_dir_action(p, bad), PreconditionError);
}

TEST_CASE("the End structure map is an algebra for the free operad") {
  auto registry = std::make_shared<ClassRegistry>();
  BilinearSpace s(2, hyperbolic());
  std::vector<GNKey> keys{{0, 3}, {0, 4}, {1, 1}};
  VectStructure good = [&](const DecoratedClass& c, const std::vector<Vector>& d) {
    return end_structure(s, c, d);
  };
  Report r = check_vect_algebra(s, keys, good, registry);
  CHECK(r.ok());
  CHECK(r.checked > 0);
  VectStructure twisted = [&](const DecoratedClass& c, const std::vector<Vector>& d) {
    Vector v = end_structure(s, c, d);
    if (c.is_corolla() || c.key.n < 2) return v;
    Perm sw = identity_perm(c.key.n);
    std::swap(sw[0], sw[1]);
    return permute_slots(v, s.dim, sw);
  };
  CHECK_FALSE(check_vect_algebra(s, keys, twisted, registry).ok());
}

TEST_CASE("operad morphisms into End from a (0,3) generator") {
  auto registry = std::make_shared<ClassRegistry>();
  FreeOperad<ModuleSpecies> t(ModuleSpecies(SModule::point({{0, 3}})), registry);
  BilinearSpace s(2, hyperbolic());
  std::vector<GNKey> keys{{0, 3}, {0, 4}, {1, 1}};
  auto rho_from = [&](Vector mu) {
    return [&s, mu](GNKey, const Decorated<std::size_t>& x) {
      return end_structure(s, *x.cls, std::vector<Vector>(x.cls->graph.vertex_count(), mu));
    };
  };
  // Symmetric: e0^3 + e1^3 + (1/2) sum of the three placements of e0 e0 e1.
  Vector sym(8);
  sym[0] = 1;
  sym[7] = 1;
  sym[1] = sym[2] = sym[4] = Rational(1, 2);
  Report ok = check_operad_morphism(t, s, rho_from(sym), keys);
  CHECK(ok.ok());
  CHECK(ok.checked > 0);
  Vector lopsided(8);
  lopsided[1] = 1;  // e0 e0 e1 only
  Report bad = check_operad_morphism(t, s, rho_from(lopsided), keys);
  CHECK(bad.names("equivariance"));
}

TEST_CASE("property: directed End with an invertible pairing matches the Hom formulation") {
  // Identifying M+ with the dual of M- through t turns the pairing into
  // evaluation: end(I) . S_src = S_tgt . end(t), with t^T on every out slot.
  corpus::Generator gen(56);
  for (int i = 0; i < 80; ++i) {
    std::size_t d = gen.uniform(1, 2);
    Matrix t = gen.symmetric_form(d);
    if (gen.coin()) t = t * gen.symmetric_form(d);  // not necessarily symmetric
    std::vector<GMorphism> ch = gen.chain(1, 6, corpus::Kind::directed);
    const GMorphism& m = ch[0];
    auto slots = [&](const DualGraph& g) {
      Matrix s = Matrix::identity(1);
      for (std::size_t f : legs(g)) s = kron(s, g.direction(f) == Direction::out ? t.transpose() : Matrix::identity(d));
      return s;
    };
    Matrix lhs = end_dir_action(DirectedPair(d, d, Matrix::identity(d)), m).dense() * slots(m.source.graph());
    Matrix rhs = slots(m.target.graph()) * end_dir_action(DirectedPair(d, d, t), m).dense();
    CHECK(lhs == rhs);
  }
}
