#pragma once

// Command-line front end. run() is kept separate from main() so the tests can
// drive it with captured streams.
//
// Exit codes: 0 success, 1 invalid graph or failed check, 2 usage error.

#include "plumbing/swcore.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace plumbing::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct Config {
  std::string command;
  std::string graph_path;
  std::string h;
  std::string reduce;
  std::optional<long> box;
  std::string method = "all";
  int samples = 5;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "text";
  std::string shape = "concave";
  std::string dilation;
  std::string boundary = "closed";
  std::string positivity = "positive";
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

using json = nlohmann::ordered_json;

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  return out;
}

inline VertexSet parse_reduce(const Lattice& L, const std::string& s) {
  if (s.empty()) return route_variables(L);
  std::vector<std::size_t> ids;
  for (const auto& id : split_list(s)) {
    auto i = L.graph().index_of(id);
    if (!i) throw UsageError("--reduce: unknown vertex '" + id + "'");
    ids.push_back(*i);
  }
  auto I = make_vertex_set(ids);
  if (I.empty()) throw UsageError("--reduce: empty vertex list");
  return I;
}

inline LatticeVector parse_full_vector(const Lattice& L, const std::string& s, const char* flag) {
  LatticeVector x;
  try {
    x = parse_vector(s);
  } catch (const std::exception& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
  if (x.size() != L.rank())
    throw UsageError(std::string(flag) + ": expected " + std::to_string(L.rank()) + " coordinates");
  return x;
}

inline std::optional<HClass> parse_h(const Lattice& L, const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto x = parse_full_vector(L, s, "--h");
  if (!L.in_dual(x)) throw UsageError("--h: " + x.to_string() + " is not in L'");
  return L.class_of(x);
}

inline std::string ids(const Lattice& L, const VertexSet& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + L.graph().vertex(s[k]).id;
  return out + "}";
}

inline json ids_json(const Lattice& L, const VertexSet& s) {
  json a = json::array();
  for (auto v : s) a.push_back(L.graph().vertex(v).id);
  return a;
}

inline json terms_json(const TermMap& t, std::int64_t scale) {
  json a = json::array();
  std::vector<std::pair<LatticeVector, Coeff>> rows;
  for (const auto& [e, c] : t) {
    std::vector<Rational> v;
    for (auto x : e) v.push_back(make_rational(Integer(static_cast<long>(x)), Integer(static_cast<long>(scale))));
    rows.emplace_back(LatticeVector(std::move(v)), c);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [e, c] : rows) a.push_back({{"exponent", e.to_string()}, {"coeff", c}});
  return a;
}

class Output {
 public:
  Output(std::ostream& out, bool json_lines) : out_(out), json_(json_lines) {}
  bool json_lines() const { return json_; }
  /// Emits either the text line or the json record.
  void emit(const std::string& text, const json& record) {
    if (json_) out_ << record.dump() << "\n";
    else out_ << text << "\n";
  }
  std::ostream& raw() { return out_; }

 private:
  std::ostream& out_;
  bool json_;
};

inline int cmd_validate(const PlumbingGraph& g, Output& o) {
  const auto r = validate(g);
  std::string minors;
  for (std::size_t i = 0; i < r.minors.size(); ++i) minors += (i ? "," : "") + r.minors[i].get_str();
  json rec{{"command", "validate"}, {"connected", r.connected}, {"tree", r.tree},
           {"negative_definite", r.negative_definite}, {"ok", r.ok()}, {"messages", r.messages}};
  std::string text = std::string("connected=") + (r.connected ? "yes" : "no") + " tree=" + (r.tree ? "yes" : "no") +
                     " negative_definite=" + (r.negative_definite ? "yes" : "no") + " minors=(" + minors + ")";
  for (const auto& m : r.messages) text += "\n" + m;
  text += r.ok() ? "\nvalid" : "\ninvalid";
  o.emit(text, rec);
  return r.ok() ? 0 : 1;
}

inline int cmd_invariants(const Lattice& L, Output& o) {
  const auto& zk = L.canonical_cycle();
  json rec{{"command", "invariants"},
           {"vertices", ids_json(L, [&] {
              VertexSet a;
              for (std::size_t v = 0; v < L.rank(); ++v) a.push_back(v);
              return a;
            }())},
           {"h_order", L.order()},
           {"nodes", ids_json(L, L.nodes())},
           {"ends", ids_json(L, L.ends())},
           {"Z_K", zk.to_string()},
           {"K2", to_string(L.pairing(zk, zk))},
           {"l_top", L.l_top().to_string()}};
  json es = json::object();
  for (std::size_t v = 0; v < L.rank(); ++v) es[L.graph().vertex(v).id] = L.e_star(v).to_string();
  rec["E_star"] = es;
  if (o.json_lines()) {
    o.emit("", rec);
    return 0;
  }
  auto& os = o.raw();
  os << "|H| = " << L.order() << "\n";
  os << "nodes = " << ids(L, L.nodes()) << "\n";
  os << "ends = " << ids(L, L.ends()) << "\n";
  os << "Z_K = " << zk.to_string() << "\n";
  os << "K^2 = " << to_string(L.pairing(zk, zk)) << "\n";
  os << "l_top = " << L.l_top().to_string() << "\n";
  for (std::size_t v = 0; v < L.rank(); ++v) os << "E*_" << L.graph().vertex(v).id << " = " << L.e_star(v).to_string() << "\n";
  return 0;
}

inline int cmd_zeta(const Lattice& L, const HGroup& H, const Config& c, Output& o) {
  const auto F = zeta(L);
  const auto I = parse_reduce(L, c.reduce);
  const auto h = parse_h(L, c.h);
  json factors = json::array();
  std::ostringstream text;
  for (const auto& f : F.factors) {
    factors.push_back({{"exponent", f.exponent.to_string()}, {"multiplicity", f.multiplicity}});
    text << "factor (1-t^" << f.exponent.to_string() << ")^" << f.multiplicity << "\n";
  }
  const auto R = reduce(L, F, I);
  text << "reduced to " << ids(L, I) << ": " << to_string(L, R);
  json rec{{"command", "zeta"}, {"factors", factors}, {"reduce", ids_json(L, I)}, {"reduced", to_string(L, R)}};
  if (c.box) {
    const auto w = Window::box(I, *c.box);
    const auto T = taylor_closed(L, H, w, h);
    rec["box"] = *c.box;
    if (h) rec["h"] = h->to_string();
    rec["series"] = terms_json(T.terms(), T.scale());
    text << "\nseries on " << ids(L, I) << " up to " << *c.box << (h ? " for h=" + h->to_string() : "") << ":\n"
         << T.to_string();
  }
  std::string t = text.str();
  if (!t.empty() && t.back() == '\n') t.pop_back();
  o.emit(t, rec);
  return 0;
}

inline std::vector<HClass> selected_classes(const HGroup& H, const std::optional<HClass>& h) {
  if (h) return {*h};
  return H.classes();
}

inline int cmd_polypart(const Lattice& L, const HGroup& H, const Config& c, Output& o) {
  const auto I = parse_reduce(L, c.reduce);
  const auto only = parse_h(L, c.h);
  bool ok = true;
  auto parts = equivariant_split(L, reduce(L, zeta(L), I));
  for (const auto& h : selected_classes(H, only)) {
    const auto dual = polypart_dual_terms(L, H, h, I);
    const auto div = euclid_divide(parts.at(h));
    const auto check = dual_polypart(L, H, h, I);
    const bool agree = dual == div.poly_part && dual_relation_holds(L, I, dual, check) && certificate_valid(div);
    ok = ok && agree;
    json rec{{"command", "polypart"},
             {"h", h.to_string()},
             {"reduce", ids_json(L, I)},
             {"P_plus_duality", terms_json(dual, L.order())},
             {"P_plus_division", terms_json(div.poly_part, L.order())},
             {"P_check", terms_json(check, L.order())},
             {"P_plus_at_one", evaluate_at_one(dual)},
             {"agree", agree}};
    std::ostringstream t;
    t << "h=" << h.to_string() << "\n";
    t << "duality:  P+ = " << terms_to_string(dual, L.order()) << "\n";
    t << "division: " << to_string(div);
    t << "dual P+ = " << terms_to_string(check, L.order()) << "\n";
    t << "P+(1) = " << evaluate_at_one(dual) << " agree=" << (agree ? "true" : "false");
    o.emit(t.str(), rec);
  }
  return ok ? 0 : 1;
}

inline int cmd_sw(const Lattice& L, const HGroup& H, const Config& c, Output& o) {
  SWOptions opt;
  opt.method = parse_method(c.method);
  const auto only = parse_h(L, c.h);
  const auto rep = sw_report(L, H, opt);
  bool ok = true;
  for (const auto& e : rep.entries) {
    if (only && e.h != *only) continue;
    ok = ok && e.agree;
    const auto v = e.value();
    json rec{{"command", "sw"}, {"h", e.h.to_string()}};
    auto put = [&](const char* k, const std::optional<Coeff>& x) {
      if (x) rec[k] = *x;
      else rec[k] = nullptr;
    };
    put("duality", e.duality);
    put("polypart", e.polypart);
    put("division", e.division);
    put("lattice", e.lattice);
    put("topological", e.topological);
    put("neg_sw_norm", v);
    rec["sw_raw"] = e.raw ? json(to_string(*e.raw)) : json(nullptr);
    rec["agree"] = e.agree;
    rec["errors"] = e.errors;
    std::string text = "h=" + e.h.to_string() + " -sw_norm=" + (v ? std::to_string(*v) : std::string("?")) +
                       " agree=" + (e.agree ? "true" : "false");
    o.emit(text, rec);
  }
  return ok ? 0 : 1;
}

inline int cmd_count(const Lattice& L, const HGroup& H, const Config& c, Output& o) {
  PolytopeQuery q;
  if (c.shape == "convex") q.shape = Shape::Convex;
  else if (c.shape == "concave") q.shape = Shape::Concave;
  else throw UsageError("--shape must be convex or concave");
  if (c.boundary == "closed") q.boundary = Boundary::Closed;
  else if (c.boundary == "drop-facets") q.boundary = Boundary::DropFacets;
  else throw UsageError("--boundary must be closed or drop-facets");
  if (c.positivity == "positive") q.positivity = Positivity::StrictlyPositive;
  else if (c.positivity == "nonneg") q.positivity = Positivity::NonNegative;
  else throw UsageError("--positivity must be positive or nonneg");
  q.I = parse_reduce(L, c.reduce);
  q.dilation = c.dilation.empty() ? L.l_top() : parse_full_vector(L, c.dilation, "--dilation");
  q.fiber = parse_h(L, c.h);
  const auto n = count(L, H, q);
  json rec{{"command", "count"}, {"shape", c.shape}, {"reduce", ids_json(L, q.I)}, {"dilation", q.dilation.to_string()},
           {"boundary", c.boundary}, {"positivity", c.positivity}, {"fiber", q.fiber ? json(q.fiber->to_string()) : json(nullptr)},
           {"count", n}};
  o.emit("count = " + std::to_string(n), rec);
  return 0;
}

inline int cmd_verify(const Lattice& L, const HGroup& H, const Config& c, Output& o) {
  bool ok = true;
  auto report = [&](const std::string& name, bool pass, const std::string& detail = "") {
    ok = ok && pass;
    json rec{{"command", "verify"}, {"check", name}, {"pass", pass}};
    if (!detail.empty()) rec["detail"] = detail;
    o.emit(name + (detail.empty() ? "" : " (" + detail + ")") + ": " + (pass ? "PASS" : "FAIL"), rec);
  };
  const auto I = parse_reduce(L, c.reduce);

  LatticeVector sum = L.zero(), top = L.zero();
  for (std::size_t v = 0; v < L.rank(); ++v) {
    sum += Rational(L.valency(v) - 2) * L.e_star(v);
    if (L.valency(v) >= 3) top += Rational(L.valency(v) - 2) * L.e_star(v);
  }
  report("Z_K - E = sum (delta_v - 2) E*_v", L.canonical_cycle() - L.sum_e() == sum);
  report("l'_top = sum over nodes (delta_v - 2) E*_v", L.l_top() == top);

  auto parts = equivariant_split(L, reduce(L, zeta(L), I));
  Window w{WindowKind::AboveSome, false, I, LatticeVector(I.size())};
  bool sym = true, ie = true, pp = true;
  for (const auto& h : H.classes()) {
    const auto a = taylor_infinity(parts.at(h), w);
    const auto b = taylor_infinity_closed(L, H, w, h);
    sym = sym && a.terms() == b.terms();
    const auto x = L.canonical_cycle() + h.rep();
    ie = ie && inclusion_exclusion_check(L, H, L.class_of(x), I, x);
    pp = pp && polypart_dual_terms(L, H, h, I) == euclid_divide(parts.at(h)).poly_part;
  }
  report("symmetry at infinity", sym, "reduce " + ids(L, I));
  report("inclusion-exclusion", ie, "reduce " + ids(L, I));
  report("division = duality polynomial part", pp, "reduce " + ids(L, I));
  report("route agreement", sw_report(L, H).all_agree());
  const auto q = quadratic_check(L, H, c.samples, c.seed);
  report("quadratic identity", q.all_pass(), std::to_string(q.samples.size()) + " samples, seed " + std::to_string(c.seed));
  return ok ? 0 : 1;
}

inline void add_common(CLI::App* sub, Config& c, bool graph_only = false) {
  sub->add_option("graph", c.graph_path, "plumbing graph file")->required();
  if (graph_only) {
    sub->add_option("--format", c.format, "text or json-lines")->check(CLI::IsMember({"text", "json-lines"}));
    return;
  }
  sub->add_option("--h", c.h, "L' representative of a class, comma-separated rationals in E-basis order");
  sub->add_option("--reduce", c.reduce, "comma-separated vertex ids (default: nodes, or all vertices)");
  sub->add_option("--box", c.box, "window bound for truncated series");
  sub->add_option("--method", c.method, "duality|polypart|division|lattice|all")
      ->check(CLI::IsMember({"duality", "polypart", "division", "lattice", "all"}));
  sub->add_option("--samples", c.samples, "quadratic check samples")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", c.seed, "random seed (default " + std::to_string(kDefaultSeed) + ")");
  sub->add_option("--format", c.format, "text or json-lines")->check(CLI::IsMember({"text", "json-lines"}));
  sub->add_option("--shape", c.shape, "count: convex or concave");
  sub->add_option("--dilation", c.dilation, "count: dilation vector (default l'_top)");
  sub->add_option("--boundary", c.boundary, "count: closed or drop-facets");
  sub->add_option("--positivity", c.positivity, "count: positive or nonneg");
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Plumbing graph invariants: Poincare series, polynomial parts, Seiberg-Witten invariants"};
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  app.require_subcommand(1);
  struct Cmd {
    const char* name;
    const char* help;
  };
  const Cmd cmds[] = {{"validate", "check tree shape and negative definiteness"},
                      {"invariants", "|H|, Z_K, E*_v, nodes and ends, l'_top"},
                      {"zeta", "factored and reduced zeta function, truncated series"},
                      {"polypart", "polynomial part by duality and by division"},
                      {"sw", "normalized Seiberg-Witten invariants by every route"},
                      {"count", "lattice points of a dilated polytope"},
                      {"verify", "property checks"}};
  for (const auto& cmd : cmds) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    detail::add_common(sub, c, std::string(cmd.name) == "validate");
    sub->callback([&c, name = cmd.name] { c.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  std::ifstream probe(c.graph_path);
  if (!probe) {
    err << "error: cannot read " << c.graph_path << "\n";
    return 2;
  }
  detail::Output o(out, c.format == "json-lines");
  try {
    auto g = load_graph(c.graph_path);
    if (c.command == "validate") return detail::cmd_validate(g, o);
    const Lattice L(std::move(g));
    const HGroup H(L);
    if (c.command == "invariants") return detail::cmd_invariants(L, o);
    if (c.command == "zeta") return detail::cmd_zeta(L, H, c, o);
    if (c.command == "polypart") return detail::cmd_polypart(L, H, c, o);
    if (c.command == "sw") return detail::cmd_sw(L, H, c, o);
    if (c.command == "count") return detail::cmd_count(L, H, c, o);
    if (c.command == "verify") return detail::cmd_verify(L, H, c, o);
    err << "error: unknown command\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << c.graph_path << ": " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace plumbing::cli
