#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "modules.hpp"
#include "oracles.hpp"
#include "modop/enumerate.hpp"
#include "modop/free_operad.hpp"

using namespace modop;

namespace {

using Free = FreeOperad<ModuleSpecies>;

Free free_on(SModule m, FreeOptions opt = {}) {
  return Free(ModuleSpecies(std::move(m)), std::make_shared<ClassRegistry>(), opt);
}

std::multiset<std::uint64_t> aut_orders(const std::vector<GraphClass>& cs) {
  std::multiset<std::uint64_t> out;
  for (const GraphClass& c : cs) out.insert(c.automorphism_order);
  return out;
}

// The same S-set with element i renamed and moved to position perm[i].
SModule permuted(const SModule& m, const std::vector<GNKey>& keys) {
  SModule out(m.base(), m.stable());
  for (GNKey k : keys) {
    const SetCarrier* c = m.set_at(k);
    std::size_t s = c->elements.size();
    std::vector<std::size_t> perm(s);
    for (std::size_t i = 0; i < s; ++i) perm[i] = s - 1 - i;
    SetCarrier d;
    d.elements.resize(s);
    for (std::size_t i = 0; i < s; ++i) d.elements[perm[i]] = "renamed_" + c->elements[i];
    for (const auto& t : c->transpositions) {
      std::vector<std::size_t> u(s);
      for (std::size_t i = 0; i < s; ++i) u[perm[i]] = perm[t[i]];
      d.transpositions.push_back(u);
    }
    out.add(k, std::move(d));
  }
  return out;
}

}  // namespace

TEST_CASE("stable graph counts on small keys") {
  CHECK(enumerate_stable_graphs({0, 3}).size() == 1);
  CHECK(enumerate_stable_graphs({1, 1}).size() == 2);
  CHECK(enumerate_stable_graphs({0, 4}).size() == 4);
  CHECK_THROWS_AS(enumerate_stable_graphs({0, 2}), PreconditionError);
  CHECK_THROWS_AS(enumerate_stable_graphs({1, 0}), PreconditionError);
}

TEST_CASE("property: stable census matches the brute-force oracle for excess <= 4") {
  for (GNKey k : keys_up_to(4)) {
    CAPTURE(to_string(k));
    std::vector<GraphClass> got = enumerate_stable_graphs(k);
    oracle::Census want = oracle::stable_census(k.g, k.n);
    CHECK(got.size() == want.count);
    CHECK(aut_orders(got) == want.aut_orders);
    for (const GraphClass& c : got) {
      CHECK(is_stable(c.graph));
      CHECK(components(c.graph).size() == 1);
      CHECK(component_genus(c.graph, components(c.graph).front()) == k.g);
    }
  }
}

TEST_CASE("property: cyclic enumeration matches the forest-restricted oracle") {
  for (GNKey k : keys_up_to(4)) {
    CAPTURE(to_string(k));
    std::vector<GraphClass> got = enumerate_graphs(k, EnumFlavor::cyclic);
    oracle::Census want = oracle::stable_census(k.g, k.n, oracle::Filter::forest);
    CHECK(got.size() == want.count);
    CHECK(aut_orders(got) == want.aut_orders);
    for (const GraphClass& c : got) CHECK(is_forest(c.graph));
  }
}

TEST_CASE("property: directed enumeration matches the directed oracle") {
  const std::pair<EnumFlavor, oracle::DirectedFilter> flavors[] = {
      {EnumFlavor::directed, oracle::DirectedFilter::all},
      {EnumFlavor::dioperad, oracle::DirectedFilter::forest},
      {EnumFlavor::prop, oracle::DirectedFilter::prop}};
  for (GNKey k : keys_up_to(3)) {
    for (std::size_t n_out = 0; n_out <= k.n; ++n_out) {
      std::size_t n_in = k.n - n_out;
      for (const auto& [flavor, filter] : flavors) {
        CAPTURE(to_string(k));
        CAPTURE(n_out);
        CAPTURE(to_string(flavor));
        std::vector<GraphClass> got = enumerate_directed(k.g, n_out, n_in, flavor);
        oracle::Census want = oracle::directed_census(k.g, n_out, n_in, filter);
        CHECK(got.size() == want.count);
        CHECK(aut_orders(got) == want.aut_orders);
      }
    }
  }
}

TEST_CASE("free operad on the one-point (0,3) module") {
  Free t = free_on(SModule::point({{0, 3}}));
  CHECK(t.elements({0, 3}).size() == 1);
  CHECK(t.elements({0, 4}).size() == 3);
  CHECK(t.elements({1, 1}).size() == 1);
  CHECK(t.elements({0, 5}).size() == 15);
  CHECK(t.elements({1, 2}).size() == 2);
  CHECK(t.elements({2, 0}).size() == 2);
  CHECK(t.elements({0, 2}).empty());
  for (const auto& x : t.elements({0, 4})) CHECK(x.cls->graph.vertex_count() == 2);
}

TEST_CASE("free operad on the regular S3-set counts free orbits") {
  Free t = free_on(modules::regular({{0, 3}}));
  CHECK(t.elements({0, 3}).size() == 6);
  CHECK(t.elements({0, 4}).size() == 3 * 36);
  CHECK(t.elements({1, 1}).size() == 3);
  CHECK(t.elements({1, 2}).size() == 18 + 18);
}

TEST_CASE("substituting corollas into a two-vertex tree gives the matching tree class") {
  Free t = free_on(SModule::point({{0, 3}}));
  DualGraph tree = DualGraph::from_named(
      {"1", "2", "3", "4", "a", "b"}, {"x", "y"},
      {{"1", "x"}, {"3", "x"}, {"a", "x"}, {"2", "y"}, {"4", "y"}, {"b", "y"}},
      {{"1", "1"}, {"2", "2"}, {"3", "3"}, {"4", "4"}, {"a", "b"}, {"b", "a"}}, {{"x", 0}, {"y", 0}});
  auto u = t.unit({0, 3}, 0);
  auto r = t.graft(tree, {u, u});
  const DualGraph& g = r.cls->graph;
  REQUIRE(g.vertex_count() == 2);
  CHECK(g.vertex_of(*g.flag_index("1")) == g.vertex_of(*g.flag_index("3")));
  CHECK(g.vertex_of(*g.flag_index("2")) == g.vertex_of(*g.flag_index("4")));
  CHECK(g.vertex_of(*g.flag_index("1")) != g.vertex_of(*g.flag_index("2")));
}

TEST_CASE("substitution rejects a mismatched inner type") {
  Free t = free_on(SModule::point({{0, 3}, {1, 1}}));
  auto inner = t.unit({1, 1}, 0);
  CHECK_THROWS_AS(t.substitute(*t.registry()->corolla_class({0, 3}), {inner}), PreconditionError);
}

TEST_CASE("vect coinvariants: sign and trivial lines") {
  ClassRegistry reg;
  SModule sign = modules::sign_line({{0, 3}});
  auto dim = [&](const SModule& p, GNKey k) {
    std::size_t d = 0;
    for (const CoinvariantSummand& s : free_value_vect(p, k, reg)) {
      CHECK(s.projector * s.projector == s.projector);
      d += s.dim;
    }
    return d;
  };
  CHECK(dim(sign, {0, 3}) == 1);
  CHECK(dim(sign, {0, 4}) == 3);
  CHECK(dim(sign, {1, 1}) == 0);
  SModule line = SModule::trivial_line({{0, 3}, {1, 1}});
  Free t = free_on(SModule::point({{0, 3}, {1, 1}}));
  for (GNKey k : keys_up_to(3)) {
    CAPTURE(to_string(k));
    CHECK(dim(line, k) == t.elements(k).size());
  }
  CHECK_THROWS_AS(free_value_vect(SModule::point({{0, 3}}), {0, 3}, reg), PreconditionError);
  CHECK_THROWS_AS(free_value_vect(SModule::trivial_line({{0, 3}}, false), {0, 3}, reg),
                  PreconditionError);
}

TEST_CASE("monad laws hold on the point modules") {
  Report a = check_monad_laws(free_on(SModule::point({{0, 3}})), keys_up_to(3));
  CHECK(a.ok());
  CHECK(a.checked > 0);
  Report b = check_monad_laws(free_on(SModule::point({{0, 3}, {1, 1}})), keys_up_to(3));
  CHECK(b.ok());
  CHECK(b.checked > a.checked);
}

TEST_CASE("monad laws hold on modules with non-trivial actions") {
  CHECK(check_monad_laws(free_on(modules::regular({{0, 3}})), keys_up_to(2)).ok());
  CHECK(check_monad_laws(free_on(modules::sign_set({{0, 3}, {1, 1}})), keys_up_to(2)).ok());
  CHECK(check_monad_laws(free_on(modules::pointed({{0, 3}, {1, 1}}, true)), keys_up_to(2)).ok());
}

TEST_CASE("skipping orbit normalization breaks the monad laws") {
  FreeOptions broken;
  broken.normalize = false;
  Report r = check_monad_laws(free_on(modules::regular({{0, 3}}), broken), keys_up_to(2));
  CHECK_FALSE(r.ok());
}

TEST_CASE("sampled monad checks are reproducible") {
  Free t = free_on(modules::regular({{0, 3}}));
  SampleOptions s{5, 17};
  Report a = check_monad_laws(t, keys_up_to(2), s);
  Report b = check_monad_laws(t, keys_up_to(2), s);
  CHECK(a.ok());
  CHECK(a.checked == b.checked);
  CHECK(a.checked <= 5 * 2 * keys_up_to(2).size());
}

TEST_CASE("property: free operad sizes are invariant under renaming elements") {
  std::vector<GNKey> support{{0, 3}, {1, 1}};
  for (const SModule& m : {modules::regular(support), modules::pointed(support, true),
                           modules::sign_set(support)}) {
    Free a = free_on(m);
    Free b = free_on(permuted(m, support));
    for (GNKey k : keys_up_to(3)) CHECK(a.elements(k).size() == b.elements(k).size());
  }
}

TEST_CASE("property: monad multiplication commutes with leg relabeling") {
  Free t = free_on(modules::pointed({{0, 3}, {1, 1}}, true));
  FreeOperad<Free> tt(t, t.registry(), t.options());
  for (GNKey k : keys_up_to(2)) {
    if (k.n < 2) continue;
    for (const auto& z : tt.elements(k)) {
      for (std::size_t i = 0; i + 1 < k.n; ++i) {
        Perm s = identity_perm(k.n);
        std::swap(s[i], s[i + 1]);
        CHECK(t.act(k, s, t.mult(z)) == t.mult(tt.act(k, s, z)));
      }
    }
  }
}

TEST_CASE("algebra checks: the free algebra passes, a twisted structure fails") {
  auto registry = std::make_shared<ClassRegistry>();
  Free q(ModuleSpecies(modules::regular({{0, 3}})), registry);
  std::vector<GNKey> keys{{0, 3}, {0, 4}};
  auto free_structure = [&](GNKey, const Decorated<Free::Element>& y) { return q.mult(y); };
  CHECK(check_algebra(q, free_structure, keys, registry).ok());
  auto twisted = [&](GNKey k, const Decorated<Free::Element>& y) {
    Free::Element x = q.mult(y);
    if (y.cls->is_corolla() || k.n < 2) return x;
    Perm s = identity_perm(k.n);
    std::swap(s[0], s[1]);
    return q.act(k, s, x);
  };
  CHECK_FALSE(check_algebra(q, twisted, keys, registry).ok());
}
