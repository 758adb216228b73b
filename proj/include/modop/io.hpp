#ifndef MODOP_IO_HPP_
#define MODOP_IO_HPP_

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "modop/category.hpp"
#include "modop/endomorphism.hpp"
#include "modop/error.hpp"
#include "modop/graph.hpp"
#include "modop/matrix.hpp"
#include "modop/morita.hpp"
#include "modop/rational.hpp"
#include "modop/report.hpp"
#include "modop/smodule.hpp"

namespace modop::io {

using Json = nlohmann::json;

// JSON pointer escaping for object keys.
inline std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

inline std::string child(const std::string& path, const std::string& key) {
  return path + "/" + escape(key);
}
inline std::string child(const std::string& path, std::size_t i) {
  return path + "/" + std::to_string(i);
}

inline const Json& require_object(const Json& j, const std::string& path,
                                  const std::set<std::string>& required,
                                  const std::set<std::string>& optional = {}) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  for (const auto& [k, _] : j.items()) {
    if (!required.count(k) && !optional.count(k)) throw SchemaError(child(path, k), "unknown key");
  }
  for (const std::string& k : required) {
    if (!j.contains(k)) throw SchemaError(child(path, k), "missing key");
  }
  return j;
}

inline std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

inline std::uint64_t get_natural(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected a non-negative integer");
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  long long v = j.get<long long>();
  if (v < 0) throw SchemaError(path, "expected a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

inline bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path, "expected a boolean");
  return j.get<bool>();
}

inline const Json& get_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

// Rationals are strings "p" or "p/q"; plain integers are accepted as well.
inline Rational get_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (!j.is_string()) throw SchemaError(path, "expected a rational string \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const SchemaError& e) {
    throw SchemaError(path, e.message());
  }
}

inline Json rational_json(const Rational& r) { return to_string(r); }

inline Vector get_vector(const Json& j, const std::string& path, std::optional<std::size_t> len = {}) {
  get_array(j, path);
  if (len && j.size() != *len) {
    throw SchemaError(path, "expected " + std::to_string(*len) + " entries");
  }
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(get_rational(j[i], child(path, i)));
  return v;
}

inline Matrix get_matrix(const Json& j, const std::string& path, std::optional<std::size_t> rows = {},
                         std::optional<std::size_t> cols = {}) {
  get_array(j, path);
  if (rows && j.size() != *rows) throw SchemaError(path, "expected " + std::to_string(*rows) + " rows");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::optional<std::size_t> c = cols;
    if (!c && i > 0) c = out.front().size();
    out.push_back(get_vector(j[i], child(path, i), c));
  }
  Matrix m = Matrix::from_rows(out);
  if (rows && *rows > 0 && cols && m.cols() != *cols) throw SchemaError(path, "wrong column count");
  if (j.empty() && cols) return Matrix(0, *cols);
  return m;
}

inline Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (const Rational& x : v) a.push_back(rational_json(x));
  return a;
}

inline Json matrix_json(const Matrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i)));
  return a;
}

// ---------------------------------------------------------------- graphs

inline DualGraph graph_from_json(const Json& j, const std::string& path = "") {
  require_object(j, path, {"flags", "vertices", "incidence", "involution", "genus"}, {"direction"});
  std::vector<Token> flags, vertices;
  const Json& jf = get_array(j["flags"], child(path, "flags"));
  for (std::size_t i = 0; i < jf.size(); ++i) flags.push_back(get_string(jf[i], child(child(path, "flags"), i)));
  const Json& jv = get_array(j["vertices"], child(path, "vertices"));
  for (std::size_t i = 0; i < jv.size(); ++i)
    vertices.push_back(get_string(jv[i], child(child(path, "vertices"), i)));
  auto string_map = [&](const char* key) {
    std::string p = child(path, key);
    if (!j[key].is_object()) throw SchemaError(p, "expected an object");
    std::map<Token, Token> m;
    for (const auto& [k, v] : j[key].items()) m.emplace(k, get_string(v, child(p, k)));
    return m;
  };
  std::map<Token, Token> incidence = string_map("incidence");
  std::map<Token, Token> involution = string_map("involution");
  std::map<Token, Genus> genus;
  {
    std::string p = child(path, "genus");
    if (!j["genus"].is_object()) throw SchemaError(p, "expected an object");
    for (const auto& [k, v] : j["genus"].items()) genus.emplace(k, get_natural(v, child(p, k)));
  }
  std::optional<std::map<Token, Direction>> direction;
  if (j.contains("direction")) {
    std::string p = child(path, "direction");
    if (!j["direction"].is_object()) throw SchemaError(p, "expected an object");
    direction.emplace();
    for (const auto& [k, v] : j["direction"].items()) {
      std::string s = get_string(v, child(p, k));
      if (s == "out") direction->emplace(k, Direction::out);
      else if (s == "in") direction->emplace(k, Direction::in);
      else throw SchemaError(child(p, k), "direction must be \"out\" or \"in\"");
    }
  }
  try {
    return DualGraph::from_named(flags, vertices, incidence, involution, genus, direction);
  } catch (const SchemaError& e) {
    throw SchemaError(path + e.path(), e.message());
  }
}

inline Json graph_json(const DualGraph& g) {
  Json j;
  j["flags"] = g.flags();
  j["vertices"] = g.vertices();
  Json inc = Json::object(), inv = Json::object(), gen = Json::object();
  for (std::size_t f = 0; f < g.flag_count(); ++f) {
    inc[g.flag_name(f)] = g.vertex_name(g.vertex_of(f));
    inv[g.flag_name(f)] = g.flag_name(g.partner(f));
  }
  for (std::size_t v = 0; v < g.vertex_count(); ++v) gen[g.vertex_name(v)] = g.genus(v);
  j["incidence"] = inc;
  j["involution"] = inv;
  j["genus"] = gen;
  if (g.directed()) {
    Json dir = Json::object();
    for (std::size_t f = 0; f < g.flag_count(); ++f) dir[g.flag_name(f)] = to_string(g.direction(f));
    j["direction"] = dir;
  }
  return j;
}

inline GObject object_from_json(const Json& j, const std::string& path) {
  DualGraph g = graph_from_json(j, path);
  for (std::size_t f = 0; f < g.flag_count(); ++f) {
    if (!g.is_leg(f)) throw SchemaError(child(child(path, "involution"), g.flag_name(f)), "objects have no edges");
  }
  return GObject(std::move(g));
}

inline TokenMap token_map_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  TokenMap m;
  for (const auto& [k, v] : j.items()) m.emplace(k, get_string(v, child(path, k)));
  return m;
}

inline Json token_map_json(const TokenMap& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

inline GMorphism morphism_from_json(const Json& j, const std::string& path = "") {
  require_object(j, path, {"source", "target", "glue", "alpha", "beta"});
  GMorphism m{object_from_json(j["source"], child(path, "source")),
              object_from_json(j["target"], child(path, "target")),
              graph_from_json(j["glue"], child(path, "glue")),
              token_map_from_json(j["alpha"], child(path, "alpha")),
              token_map_from_json(j["beta"], child(path, "beta"))};
  return m;
}

inline Json morphism_json(const GMorphism& m) {
  Json j;
  j["source"] = graph_json(m.source.graph());
  j["target"] = graph_json(m.target.graph());
  j["glue"] = graph_json(m.glue);
  j["alpha"] = token_map_json(m.alpha);
  j["beta"] = token_map_json(m.beta);
  return j;
}

inline Json violations_json(const std::vector<Violation>& vs) {
  Json a = Json::array();
  for (const Violation& v : vs) a.push_back({{"subject", v.subject}, {"message", v.message}});
  return a;
}

inline Json iso_json(const DualGraph& from, const DualGraph& to, const GraphIso& iso) {
  Json f = Json::object(), v = Json::object();
  for (std::size_t i = 0; i < iso.flags.size(); ++i) f[from.flag_name(i)] = to.flag_name(iso.flags[i]);
  for (std::size_t i = 0; i < iso.vertices.size(); ++i)
    v[from.vertex_name(i)] = to.vertex_name(iso.vertices[i]);
  return {{"flags", f}, {"vertices", v}};
}

// ---------------------------------------------------------------- modules

inline SModule smodule_from_json(const Json& j, const std::string& path = "") {
  require_object(j, path, {"base", "entries"}, {"stable"});
  std::string base = get_string(j["base"], child(path, "base"));
  if (base != "set" && base != "vect") throw SchemaError(child(path, "base"), "base must be \"set\" or \"vect\"");
  bool stable = j.contains("stable") ? get_bool(j["stable"], child(path, "stable")) : false;
  SModule m(base == "set" ? Base::set : Base::vect, stable);
  std::string ep = child(path, "entries");
  const Json& entries = get_array(j["entries"], ep);
  std::set<GNKey> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::string p = child(ep, i);
    const Json& e = entries[i];
    if (base == "set") require_object(e, p, {"g", "n", "elements", "transpositions"});
    else require_object(e, p, {"g", "n", "dim", "transpositions"});
    GNKey key{get_natural(e["g"], child(p, "g")), get_natural(e["n"], child(p, "n"))};
    if (!seen.insert(key).second) throw SchemaError(p, "duplicate key " + to_string(key));
    std::string tp = child(p, "transpositions");
    const Json& ts = get_array(e["transpositions"], tp);
    try {
      if (base == "set") {
        SetCarrier c;
        const Json& els = get_array(e["elements"], child(p, "elements"));
        for (std::size_t k = 0; k < els.size(); ++k)
          c.elements.push_back(get_string(els[k], child(child(p, "elements"), k)));
        for (std::size_t t = 0; t < ts.size(); ++t) {
          const Json& perm = get_array(ts[t], child(tp, t));
          std::vector<std::size_t> images;
          for (std::size_t k = 0; k < perm.size(); ++k)
            images.push_back(get_natural(perm[k], child(child(tp, t), k)));
          c.transpositions.push_back(std::move(images));
        }
        m.add(key, std::move(c));
      } else {
        VectCarrier c;
        c.dim = get_natural(e["dim"], child(p, "dim"));
        for (std::size_t t = 0; t < ts.size(); ++t)
          c.transpositions.push_back(get_matrix(ts[t], child(tp, t), c.dim, c.dim));
        m.add(key, std::move(c));
      }
    } catch (const PreconditionError& err) {
      throw SchemaError(p, err.what());
    }
  }
  return m;
}

inline Json smodule_json(const SModule& m) {
  Json j;
  j["base"] = m.base() == Base::set ? "set" : "vect";
  j["stable"] = m.stable();
  Json entries = Json::array();
  for (GNKey k : m.keys()) {
    Json e;
    e["g"] = k.g;
    e["n"] = k.n;
    if (const SetCarrier* c = m.set_at(k)) {
      e["elements"] = c->elements;
      e["transpositions"] = c->transpositions;
    } else {
      const VectCarrier* v = m.space_at(k);
      e["dim"] = v->dim;
      Json ts = Json::array();
      for (const Matrix& t : v->transpositions) ts.push_back(matrix_json(t));
      e["transpositions"] = ts;
    }
    entries.push_back(e);
  }
  j["entries"] = entries;
  return j;
}

// ---------------------------------------------------------------- linear data

struct SpaceFile {
  std::optional<BilinearSpace> space;
  std::optional<DirectedPair> pair;
};

inline SpaceFile space_from_json(const Json& j, const std::string& path = "") {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  SpaceFile out;
  try {
    if (j.contains("pairing")) {
      require_object(j, path, {"dim_out", "dim_in", "pairing"});
      std::size_t a = get_natural(j["dim_out"], child(path, "dim_out"));
      std::size_t b = get_natural(j["dim_in"], child(path, "dim_in"));
      out.pair = DirectedPair(a, b, get_matrix(j["pairing"], child(path, "pairing"), a, b));
    } else {
      require_object(j, path, {"dim", "form"}, {"nondegenerate"});
      std::size_t d = get_natural(j["dim"], child(path, "dim"));
      bool nd = j.contains("nondegenerate") && get_bool(j["nondegenerate"], child(path, "nondegenerate"));
      out.space = BilinearSpace(d, get_matrix(j["form"], child(path, "form"), d, d), nd);
    }
  } catch (const PreconditionError& e) {
    throw SchemaError(path, e.what());
  }
  return out;
}

inline Json space_json(const BilinearSpace& s) {
  return {{"dim", s.dim}, {"form", matrix_json(s.form)}};
}

inline Tensor3 tensor3_from_json(const Json& j, const std::string& path, std::size_t a, std::size_t b,
                                 std::size_t c) {
  get_array(j, path);
  if (j.size() != a) throw SchemaError(path, "expected " + std::to_string(a) + " entries");
  Tensor3 t;
  for (std::size_t i = 0; i < a; ++i) {
    std::string p = child(path, i);
    get_array(j[i], p);
    if (j[i].size() != b) throw SchemaError(p, "expected " + std::to_string(b) + " entries");
    std::vector<Vector> row;
    for (std::size_t k = 0; k < b; ++k) row.push_back(get_vector(j[i][k], child(p, k), c));
    t.push_back(std::move(row));
  }
  return t;
}

inline Json tensor3_json(const Tensor3& t) {
  Json a = Json::array();
  for (const auto& row : t) {
    Json r = Json::array();
    for (const Vector& v : row) r.push_back(vector_json(v));
    a.push_back(r);
  }
  return a;
}

inline FinAlgebra algebra_from_json(const Json& j, const std::string& path) {
  require_object(j, path, {"dim", "mult"}, {"unit"});
  std::size_t d = get_natural(j["dim"], child(path, "dim"));
  Tensor3 c = tensor3_from_json(j["mult"], child(path, "mult"), d, d, d);
  std::optional<Vector> unit;
  if (j.contains("unit")) unit = get_vector(j["unit"], child(path, "unit"), d);
  return FinAlgebra(d, std::move(c), std::move(unit));
}

inline Json algebra_json(const FinAlgebra& a) {
  Json j;
  j["dim"] = a.dim;
  j["mult"] = tensor3_json(a.mult);
  if (a.unit) j["unit"] = vector_json(*a.unit);
  return j;
}

inline Bimodule bimodule_from_json(const Json& j, const std::string& path, std::size_t left_dim,
                                   std::size_t right_dim) {
  require_object(j, path, {"dim", "left", "right"});
  std::size_t d = get_natural(j["dim"], child(path, "dim"));
  return Bimodule(d, tensor3_from_json(j["left"], child(path, "left"), left_dim, d, d),
                  tensor3_from_json(j["right"], child(path, "right"), d, right_dim, d));
}

inline Json bimodule_json(const Bimodule& b) {
  return {{"dim", b.dim}, {"left", tensor3_json(b.left)}, {"right", tensor3_json(b.right)}};
}

inline MoritaData morita_from_json(const Json& j, const std::string& path = "") {
  require_object(j, path, {"A", "B", "Q", "R", "alpha", "beta", "M", "trA", "trB"});
  MoritaData d;
  d.A = algebra_from_json(j["A"], child(path, "A"));
  d.B = algebra_from_json(j["B"], child(path, "B"));
  d.Q = bimodule_from_json(j["Q"], child(path, "Q"), d.A.dim, d.B.dim);
  d.R = bimodule_from_json(j["R"], child(path, "R"), d.B.dim, d.A.dim);
  d.alpha = tensor3_from_json(j["alpha"], child(path, "alpha"), d.Q.dim, d.R.dim, d.A.dim);
  d.beta = tensor3_from_json(j["beta"], child(path, "beta"), d.R.dim, d.Q.dim, d.B.dim);
  d.M = get_natural(j["M"], child(path, "M"));
  d.trA = get_matrix(j["trA"], child(path, "trA"), d.M, d.A.dim);
  d.trB = get_matrix(j["trB"], child(path, "trB"), d.M, d.B.dim);
  return d;
}

inline Json morita_json(const MoritaData& d) {
  Json j;
  j["A"] = algebra_json(d.A);
  j["B"] = algebra_json(d.B);
  j["Q"] = bimodule_json(d.Q);
  j["R"] = bimodule_json(d.R);
  j["alpha"] = tensor3_json(d.alpha);
  j["beta"] = tensor3_json(d.beta);
  j["M"] = d.M;
  j["trA"] = matrix_json(d.trA);
  j["trB"] = matrix_json(d.trB);
  return j;
}

struct OneDimOperad {
  FinAlgebra A;
  std::size_t M = 0;
  Matrix tr;
};

inline OneDimOperad one_dim_from_json(const Json& j, const std::string& path = "") {
  require_object(j, path, {"A", "M", "tr"});
  OneDimOperad o;
  o.A = algebra_from_json(j["A"], child(path, "A"));
  o.M = get_natural(j["M"], child(path, "M"));
  o.tr = get_matrix(j["tr"], child(path, "tr"), o.M, o.A.dim);
  return o;
}

inline Json one_dim_json(const OneDimOperad& o) {
  return {{"A", algebra_json(o.A)}, {"M", o.M}, {"tr", matrix_json(o.tr)}};
}

inline Json report_json(const Report& r) {
  Json f = Json::array();
  for (const Finding& x : r.failures) f.push_back({{"check", x.check}, {"detail", x.detail}});
  return {{"ok", r.ok()}, {"checked", r.checked}, {"failures", f}, {"warnings", r.warnings}};
}

// ---------------------------------------------------------------- files

inline Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", source + ": malformed JSON (" + std::string(e.what()) + ")");
  }
}

inline Json read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw SchemaError("", "cannot open " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), file);
}

}  // namespace modop::io

#endif  // MODOP_IO_HPP_
