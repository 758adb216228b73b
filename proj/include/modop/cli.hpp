#ifndef MODOP_CLI_HPP_
#define MODOP_CLI_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "modop/canon.hpp"
#include "modop/category.hpp"
#include "modop/endomorphism.hpp"
#include "modop/enumerate.hpp"
#include "modop/error.hpp"
#include "modop/free_operad.hpp"
#include "modop/io.hpp"
#include "modop/morita.hpp"
#include "modop/smodule.hpp"

namespace modop::cli {

using io::Json;

inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kInputError = 2;

struct Outcome {
  Json json;
  int code = kOk;
  std::string summary;
};

namespace detail {

inline std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

inline bool flat_object(const Json& j) {
  if (!j.is_object()) return false;
  return std::all_of(j.begin(), j.end(), [](const Json& v) { return v.is_primitive(); });
}

// Arrays of flat objects become aligned columns; anything else is printed as
// indented key/value lines with nested values dumped compactly.
inline void render_table(const Json& j, std::ostream& out, const std::string& indent = "") {
  if (j.is_array() && !j.empty() && std::all_of(j.begin(), j.end(), flat_object)) {
    std::vector<std::string> cols;
    for (const auto& [k, _] : j.front().items()) cols.push_back(k);
    std::vector<std::size_t> width;
    for (const auto& c : cols) width.push_back(c.size());
    for (const Json& row : j)
      for (std::size_t c = 0; c < cols.size(); ++c)
        width[c] = std::max(width[c], row.contains(cols[c]) ? scalar_text(row[cols[c]]).size() : 0);
    auto line = [&](auto cell) {
      out << indent;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        std::string s = cell(c);
        out << s << std::string(width[c] - s.size() + (c + 1 < cols.size() ? 2 : 0), ' ');
      }
      out << "\n";
    };
    line([&](std::size_t c) { return cols[c]; });
    for (const Json& row : j)
      line([&](std::size_t c) { return row.contains(cols[c]) ? scalar_text(row[cols[c]]) : ""; });
    return;
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_primitive()) {
        out << indent << k << ": " << scalar_text(v) << "\n";
      } else if (v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), flat_object)) {
        out << indent << k << ":\n";
        render_table(v, out, indent + "  ");
      } else {
        out << indent << k << ": " << v.dump() << "\n";
      }
    }
    return;
  }
  if (j.is_array()) {
    for (const Json& v : j) out << indent << v.dump() << "\n";
    return;
  }
  out << indent << scalar_text(j) << "\n";
}

inline Json report_with_coinvariants(const MoritaReport& m) {
  Json j = io::report_json(m.report);
  j["coinvariants_dim"] = m.coinvariants.dim;
  return j;
}

inline GMorphism checked_morphism(const std::string& file) {
  GMorphism m = io::morphism_from_json(io::read_file(file));
  std::vector<Violation> vs = validate(m);
  if (!vs.empty()) throw SchemaError("", file + ": invalid morphism: " + vs.front().subject + ": " + vs.front().message);
  return m;
}

inline Json class_json(const GraphClass& c) {
  return {{"graph", io::graph_json(c.graph)}, {"automorphisms", c.automorphism_order}};
}

inline EnumFlavor free_flavor(const std::string& s) {
  std::optional<EnumFlavor> f = parse_enum_flavor(s);
  if (!f) throw PreconditionError("unknown flavor '" + s + "'");
  return *f;
}

inline std::optional<std::vector<std::size_t>> parse_order(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw SchemaError("", "--edge-order: '" + item + "' is not an edge index");
    }
  }
  return out;
}

inline Json matrix_output(const SparseMatrix& m) {
  if (m.rows() != 0 && m.cols() > 4'000'000 / m.rows()) {
    throw LimitError("matrix of size " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     " is too large to print");
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"matrix", io::matrix_json(m.dense())}};
}

}  // namespace detail

// ---------------------------------------------------------------- commands

inline Outcome cmd_validate(const std::string& file) {
  Json j = io::read_file(file);
  Outcome o;
  if (!j.is_object()) throw SchemaError("", "expected an object");
  auto finish = [&](const char* kind, Json body, bool ok) {
    body["kind"] = kind;
    body["valid"] = ok;
    o.json = std::move(body);
    o.code = ok ? kOk : kCheckFailed;
    o.summary = std::string(kind) + (ok ? " valid" : " invalid");
  };
  if (j.contains("entries")) {
    Report r = check_equivariance(io::smodule_from_json(j));
    finish("smodule", io::report_json(r), r.ok());
  } else if (j.contains("source")) {
    std::vector<Violation> vs = validate(io::morphism_from_json(j));
    finish("morphism", {{"violations", io::violations_json(vs)}}, vs.empty());
  } else if (j.contains("flags")) {
    std::vector<Violation> vs = validate(io::graph_from_json(j));
    finish("graph", {{"violations", io::violations_json(vs)}}, vs.empty());
  } else if (j.contains("Q")) {
    MoritaReport m = check_morita(io::morita_from_json(j));
    finish("morita", detail::report_with_coinvariants(m), m.report.ok());
  } else if (j.contains("tr")) {
    io::OneDimOperad d = io::one_dim_from_json(j);
    Report r = check_1d_operad(d.A, d.M, d.tr);
    finish("one-dimensional operad", io::report_json(r), r.ok());
  } else if (j.contains("form") || j.contains("pairing")) {
    io::SpaceFile s = io::space_from_json(j);
    Json body;
    if (s.space) body["nondegenerate"] = s.space->nondegenerate();
    finish(s.space ? "space" : "directed pair", body, true);
  } else {
    throw SchemaError("", "cannot determine the kind of document");
  }
  return o;
}

inline Outcome cmd_canon(const std::string& file, bool fix_legs) {
  DualGraph g = io::graph_from_json(io::read_file(file));
  std::vector<Violation> vs = validate(g);
  if (!vs.empty()) throw SchemaError("", "invalid graph: " + vs.front().subject + ": " + vs.front().message);
  CanonicalForm c = canonical_form(g, fix_legs);
  std::size_t aut = automorphisms(g, fix_legs).size();
  Outcome o;
  o.json = {{"graph", io::graph_json(c.graph)},
            {"iso", io::iso_json(g, c.graph, c.iso)},
            {"automorphisms", aut}};
  o.summary = "canonical form with |Aut| = " + std::to_string(aut);
  return o;
}

inline Outcome cmd_compose(const std::string& f_file, const std::string& h_file) {
  GMorphism f = detail::checked_morphism(f_file);
  GMorphism h = detail::checked_morphism(h_file);
  Outcome o;
  o.json = io::morphism_json(compose(f, h));
  o.summary = "composed h o f";
  return o;
}

inline Outcome cmd_tensor(const std::vector<std::string>& files) {
  std::vector<GMorphism> ms;
  for (const std::string& f : files) ms.push_back(detail::checked_morphism(f));
  Outcome o;
  o.json = io::morphism_json(tensor(ms));
  o.summary = "tensor of " + std::to_string(ms.size()) + " morphisms";
  return o;
}

inline Outcome cmd_check_flavor(const std::string& file, const std::string& flavor_name) {
  std::optional<Flavor> flavor = parse_flavor(flavor_name);
  if (!flavor) throw PreconditionError("unknown flavor '" + flavor_name + "'");
  GMorphism m = detail::checked_morphism(file);
  bool member = in_flavor(m, *flavor);
  Outcome o;
  o.json = {{"flavor", to_string(*flavor)}, {"member", member}};
  o.code = member ? kOk : kCheckFailed;
  o.summary = std::string(member ? "in " : "not in ") + to_string(*flavor);
  return o;
}

inline Outcome cmd_enumerate(Genus g, std::optional<std::size_t> n, std::optional<std::size_t> n_out,
                             std::optional<std::size_t> n_in, const std::string& flavor_name,
                             std::optional<std::size_t> max_vertices) {
  EnumFlavor flavor = detail::free_flavor(flavor_name);
  EnumerateOptions opt;
  opt.max_vertices = max_vertices;
  std::vector<GraphClass> classes;
  if (is_directed(flavor)) {
    if (!n_out || !n_in) throw PreconditionError("directed flavors need --n-out and --n-in");
    classes = enumerate_directed(g, *n_out, *n_in, flavor, opt);
  } else {
    if (!n) throw PreconditionError("--n is required");
    classes = enumerate_graphs({g, *n}, flavor, opt);
  }
  Outcome o;
  o.json = Json::array();
  for (const GraphClass& c : classes) o.json.push_back(detail::class_json(c));
  o.summary = std::to_string(classes.size()) + " graph classes";
  return o;
}

inline Outcome cmd_free(const std::string& smodule_file, Genus g, std::optional<std::size_t> n,
                        std::optional<std::size_t> n_out, std::optional<std::size_t> n_in,
                        const std::string& flavor_name) {
  EnumFlavor flavor = detail::free_flavor(flavor_name);
  Outcome o;
  if (is_directed(flavor)) {
    // Directed free values are taken on the one-point module in every
    // stable arity, so they count graph classes.
    if (!smodule_file.empty()) throw PreconditionError("directed flavors take no --smodule");
    if (!n_out || !n_in) throw PreconditionError("directed flavors need --n-out and --n-in");
    if (!GNKey{g, *n_out + *n_in}.stable()) throw PreconditionError("free values need a stable key");
    std::vector<GraphClass> classes = enumerate_directed(g, *n_out, *n_in, flavor);
    Json reps = Json::array();
    for (const GraphClass& c : classes) reps.push_back(io::graph_json(c.graph));
    o.json = {{"count", classes.size()}, {"representatives", reps}};
    o.summary = std::to_string(classes.size()) + " decorated classes";
    return o;
  }
  if (smodule_file.empty()) throw PreconditionError("--smodule is required");
  if (!n) throw PreconditionError("--n is required");
  GNKey key{g, *n};
  if (!key.stable()) throw PreconditionError("free values need a stable key");
  SModule p = io::smodule_from_json(io::read_file(smodule_file));
  auto registry = std::make_shared<ClassRegistry>();
  if (p.base() == Base::vect) {
    std::vector<CoinvariantSummand> parts = free_value_vect(p, key, *registry, flavor);
    std::size_t total = 0;
    Json summands = Json::array();
    for (const CoinvariantSummand& s : parts) {
      total += s.dim;
      summands.push_back({{"graph", io::graph_json(s.cls->graph)},
                          {"tensor_dim", s.tensor_dim},
                          {"dim", s.dim}});
    }
    o.json = {{"dim", total}, {"summands", summands}};
    o.summary = "free value of dimension " + std::to_string(total);
    return o;
  }
  ModuleSpecies species(p);
  FreeOperad<ModuleSpecies> t(species, registry, FreeOptions{flavor, true});
  Json reps = Json::array();
  std::vector<Decorated<std::size_t>> els = t.elements(key);
  for (const auto& x : els) {
    Json deco = Json::object();
    for (std::size_t v = 0; v < x.deco.size(); ++v)
      deco[x.cls->graph.vertex_name(v)] = species.name(x.cls->vertex_keys[v], x.deco[v]);
    reps.push_back({{"graph", io::graph_json(x.cls->graph)}, {"decorations", deco}});
  }
  o.json = {{"count", els.size()}, {"representatives", reps}};
  o.summary = std::to_string(els.size()) + " decorated classes";
  return o;
}

inline Outcome cmd_monad_check(const std::string& smodule_file, long long bound,
                               const std::string& flavor_name, std::optional<std::size_t> sample,
                               std::uint64_t seed) {
  EnumFlavor flavor = detail::free_flavor(flavor_name);
  SModule p = io::smodule_from_json(io::read_file(smodule_file));
  if (!p.stable()) throw PreconditionError("the free operad needs a module marked stable");
  auto registry = std::make_shared<ClassRegistry>();
  FreeOperad<ModuleSpecies> t(ModuleSpecies(std::move(p)), registry, FreeOptions{flavor, true});
  Report r = check_monad_laws(t, keys_up_to(bound), SampleOptions{sample, seed});
  Outcome o;
  o.json = io::report_json(r);
  if (sample) o.json["seed"] = seed;
  o.code = r.ok() ? kOk : kCheckFailed;
  o.summary = "monad laws: " + std::string(r.ok() ? "pass" : "FAIL") + " (" +
              std::to_string(r.checked) + " checks)";
  return o;
}

inline Outcome cmd_end_action(const std::string& space_file, const std::string& morphism_file,
                              const std::string& order_text) {
  io::SpaceFile s = io::space_from_json(io::read_file(space_file));
  GMorphism m = detail::checked_morphism(morphism_file);
  auto order = detail::parse_order(order_text);
  SparseMatrix a = s.space ? end_action(*s.space, m, order) : end_dir_action(*s.pair, m, order);
  Outcome o;
  o.json = detail::matrix_output(a);
  o.summary = "matrix " + std::to_string(a.rows()) + "x" + std::to_string(a.cols());
  return o;
}

inline Outcome cmd_algebra_check(const std::string& algebra_file, const std::string& space_file,
                                 std::optional<long long> bound) {
  Outcome o;
  Report r;
  if (!algebra_file.empty()) {
    io::OneDimOperad d = io::one_dim_from_json(io::read_file(algebra_file));
    r = check_1d_operad(d.A, d.M, d.tr);
  } else if (!space_file.empty()) {
    if (!bound) throw PreconditionError("--end-space needs --bound");
    io::SpaceFile s = io::space_from_json(io::read_file(space_file));
    if (!s.space) throw PreconditionError("--end-space needs a symmetric form, not a pairing");
    BilinearSpace space = *s.space;
    r = check_vect_algebra(
        space, keys_up_to(*bound),
        [space](const DecoratedClass& c, const std::vector<Vector>& d) { return end_structure(space, c, d); },
        std::make_shared<ClassRegistry>());
  } else {
    throw PreconditionError("one of --algebra or --end-space is required");
  }
  o.json = io::report_json(r);
  o.code = r.ok() ? kOk : kCheckFailed;
  o.summary = "algebra laws: " + std::string(r.ok() ? "pass" : "FAIL");
  return o;
}

inline Outcome cmd_morita_check(const std::string& file) {
  MoritaReport m = check_morita(io::morita_from_json(io::read_file(file)));
  Outcome o;
  o.json = detail::report_with_coinvariants(m);
  o.code = m.report.ok() ? kOk : kCheckFailed;
  o.summary = "Morita context: " + std::string(m.report.ok() ? "pass" : "FAIL");
  for (const Finding& f : m.report.failures) o.summary += "\n  " + f.check + ": " + f.detail;
  return o;
}

inline Outcome cmd_census(long long bound, const std::string& flavor_name) {
  EnumFlavor flavor = detail::free_flavor(flavor_name);
  if (is_directed(flavor)) throw PreconditionError("census covers the stable and cyclic flavors");
  Outcome o;
  o.json = Json::array();
  for (GNKey k : keys_up_to(bound)) {
    o.json.push_back({{"g", k.g}, {"n", k.n}, {"count", enumerate_graphs(k, flavor).size()}});
  }
  o.summary = std::to_string(o.json.size()) + " keys";
  return o;
}

// ---------------------------------------------------------------- entry point

// Parses `args` (without the program name), runs one subcommand and writes
// its JSON or table to `out` and a one-line summary or error to `err`.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual graphs, free operads, endomorphism operads and Morita contexts"};
  app.require_subcommand(1);
  std::string format = "json";
  std::uint64_t seed = 0;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--seed", seed, "Seed for sampled checks");

  std::string file, file2, flavor, smodule, space, morphism, order, algebra, end_space;
  std::vector<std::string> files;
  bool fix_legs = false;
  Genus g = 0;
  std::optional<std::size_t> n, n_out, n_in, max_vertices, sample;
  std::optional<long long> bound;
  std::function<Outcome()> action;

  auto* validate_cmd = app.add_subcommand("validate", "Validate a document of any supported kind");
  validate_cmd->add_option("file", file)->required();
  validate_cmd->callback([&] { action = [&] { return cmd_validate(file); }; });

  auto* canon_cmd = app.add_subcommand("canon", "Canonical form of a graph");
  canon_cmd->add_option("file", file)->required();
  canon_cmd->add_flag("--fix-legs", fix_legs, "Keep leg names fixed");
  canon_cmd->callback([&] { action = [&] { return cmd_canon(file, fix_legs); }; });

  auto* compose_cmd = app.add_subcommand("compose", "Composite h o f of two morphisms");
  compose_cmd->add_option("inner", file, "Morphism f")->required();
  compose_cmd->add_option("outer", file2, "Morphism h applied after f")->required();
  compose_cmd->callback([&] { action = [&] { return cmd_compose(file, file2); }; });

  auto* tensor_cmd = app.add_subcommand("tensor", "Disjoint union of morphisms");
  tensor_cmd->add_option("files", files)->required();
  tensor_cmd->callback([&] { action = [&] { return cmd_tensor(files); }; });

  auto* flavor_cmd = app.add_subcommand("check-flavor", "Membership of a morphism in a flavor");
  flavor_cmd->add_option("file", file)->required();
  flavor_cmd->add_option("--flavor", flavor)->required();
  flavor_cmd->callback([&] { action = [&] { return cmd_check_flavor(file, flavor); }; });

  auto* enum_cmd = app.add_subcommand("enumerate", "Connected graphs of a given type");
  enum_cmd->add_option("--g", g)->required();
  enum_cmd->add_option("--n", n);
  enum_cmd->add_option("--n-out", n_out);
  enum_cmd->add_option("--n-in", n_in);
  enum_cmd->add_option("--flavor", flavor);
  enum_cmd->add_option("--max-vertices", max_vertices);
  enum_cmd->callback([&] {
    if (flavor.empty()) flavor = "stable";
    action = [&] { return cmd_enumerate(g, n, n_out, n_in, flavor, max_vertices); };
  });

  auto* free_cmd = app.add_subcommand("free", "Value of the free operad at one key");
  free_cmd->add_option("--smodule", smodule);
  free_cmd->add_option("--g", g)->required();
  free_cmd->add_option("--n", n);
  free_cmd->add_option("--n-out", n_out);
  free_cmd->add_option("--n-in", n_in);
  free_cmd->add_option("--flavor", flavor);
  free_cmd->callback([&] {
    if (flavor.empty()) flavor = "stable";
    action = [&] { return cmd_free(smodule, g, n, n_out, n_in, flavor); };
  });

  auto* monad_cmd = app.add_subcommand("monad-check", "Unit and associativity laws of the free operad monad");
  monad_cmd->add_option("--smodule", smodule)->required();
  monad_cmd->add_option("--bound", bound)->required();
  monad_cmd->add_option("--flavor", flavor);
  monad_cmd->add_option("--sample", sample, "Check at most this many elements per key and law");
  monad_cmd->callback([&] {
    if (flavor.empty()) flavor = "stable";
    action = [&] { return cmd_monad_check(smodule, *bound, flavor, sample, seed); };
  });

  auto* end_cmd = app.add_subcommand("end-action", "Matrix of a morphism in the endomorphism operad");
  end_cmd->add_option("--space", space)->required();
  end_cmd->add_option("--morphism", morphism)->required();
  end_cmd->add_option("--edge-order", order, "Comma-separated contraction order of glue edges");
  end_cmd->callback([&] { action = [&] { return cmd_end_action(space, morphism, order); }; });

  auto* alg_cmd = app.add_subcommand("algebra-check", "Algebra laws of a 1-d operad or of End(M,t)");
  auto* alg_opt = alg_cmd->add_option("--algebra", algebra);
  auto* end_opt = alg_cmd->add_option("--end-space", end_space);
  alg_opt->excludes(end_opt);
  alg_cmd->add_option("--bound", bound);
  alg_cmd->callback([&] { action = [&] { return cmd_algebra_check(algebra, end_space, bound); }; });

  auto* morita_cmd = app.add_subcommand("morita-check", "Axioms of a Morita context with trace");
  morita_cmd->add_option("--file", file)->required();
  morita_cmd->callback([&] { action = [&] { return cmd_morita_check(file); }; });

  auto* census_cmd = app.add_subcommand("census", "Graph counts for all keys up to a bound");
  census_cmd->add_option("--bound", bound)->required();
  census_cmd->add_option("--flavor", flavor);
  census_cmd->callback([&] {
    if (flavor.empty()) flavor = "stable";
    action = [&] { return cmd_census(*bound, flavor); };
  });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kInputError;
  }
  try {
    Outcome o = action();
    if (format == "table") detail::render_table(o.json, out);
    else out << o.json.dump(2) << "\n";
    err << o.summary << "\n";
    return o.code;
  } catch (const SchemaError& e) {
    err << "input error at " << (e.path().empty() ? "/" : e.path()) << ": " << e.message() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kInputError;
}

}  // namespace modop::cli

#endif  // MODOP_CLI_HPP_
