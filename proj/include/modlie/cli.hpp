#pragma once

// Command-line front end. run() parses arguments, executes one command and returns the
// exit code: 0 all asserted checks passed, 1 a check produced a counterexample, 2 usage or
// configuration error, 3 inconclusive verdicts present.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modlie/chevalley.hpp"
#include "modlie/error.hpp"
#include "modlie/expr.hpp"
#include "modlie/leebasis.hpp"
#include "modlie/pbw.hpp"
#include "modlie/redenv.hpp"
#include "modlie/roots.hpp"

namespace modlie::cli {

using json = nlohmann::ordered_json;

enum ExitCode { kPass = 0, kCounterexample = 1, kUsage = 2, kInconclusive = 3 };

struct RunConfig {
  std::string family = "B";
  int rank = 2;
  std::int64_t p = 7;
  bool allow_small_p = false;
  std::string lee_case = "I";
  /// "regular", "zero", or comma-separated basis=value pairs such as "x(-e1)=1".
  std::string chi = "regular";
  /// Empty (first compatible weight), "v1,v2,...", or "h(1)=v,...".
  std::string lambda;
  /// Comma-separated root=value pairs such as "-e1=3"; unlisted constants are chosen automatically.
  std::string c_beta;
  unsigned bound = 2;
  std::uint64_t seed = 1;
  std::string out;
  std::string export_path;
  /// auto, baby-verma or adjoint.
  std::string rep = "auto";
  unsigned budget = 50;
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

inline std::int64_t to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(Errc::Config, key + ": expected an integer, got '" + v + "'");
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(Errc::Config, key + ": expected true or false, got '" + v + "'");
}

}  // namespace detail

inline void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  using detail::to_int;
  if (key == "family") cfg.family = value;
  else if (key == "rank") cfg.rank = static_cast<int>(to_int(key, value));
  else if (key == "p") cfg.p = to_int(key, value);
  else if (key == "allow_small_p") cfg.allow_small_p = detail::to_bool(key, value);
  else if (key == "case") cfg.lee_case = value;
  else if (key == "chi") cfg.chi = value;
  else if (key == "lambda") cfg.lambda = value;
  else if (key == "c_beta") cfg.c_beta = value;
  else if (key == "bound") cfg.bound = static_cast<unsigned>(to_int(key, value));
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
  else if (key == "out") cfg.out = value;
  else if (key == "export") cfg.export_path = value;
  else if (key == "rep") cfg.rep = value;
  else if (key == "budget") cfg.budget = static_cast<unsigned>(to_int(key, value));
  else throw Error(Errc::Config, "unknown config key '" + key + "'");
}

/// Flat "key = value" lines; '#' starts a comment. Unknown keys are errors.
inline void load_config(RunConfig& cfg, std::istream& in, const std::string& name = "config") {
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::Config, name + ":" + std::to_string(n) + ": expected key = value");
    set_key(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Config, "cannot open config file '" + path + "'");
  load_config(cfg, in, path);
}

inline void validate(const RunConfig& cfg) {
  family_from_string(cfg.family);
  if (cfg.rank < 1) throw Error(Errc::Config, "rank must be positive");
  lee_case_from_string(cfg.lee_case);
  if (cfg.rep != "auto" && cfg.rep != "baby-verma" && cfg.rep != "adjoint")
    throw Error(Errc::Config, "rep must be auto, baby-verma or adjoint");
}

inline json config_json(const RunConfig& cfg) {
  return json{{"family", cfg.family}, {"rank", cfg.rank},     {"p", cfg.p},       {"case", cfg.lee_case},
              {"chi", cfg.chi},       {"lambda", cfg.lambda}, {"c_beta", cfg.c_beta}, {"bound", cfg.bound},
              {"seed", cfg.seed},     {"rep", cfg.rep},       {"budget", cfg.budget}};
}

struct Outcome {
  int code = kPass;
  json report;
  std::string summary;
};

// Shared construction helpers.

struct Context {
  RootSystem rs;
  LieAlgebra L;
};

inline Context make_context(const RunConfig& cfg) {
  validate(cfg);
  RootSystem rs = build_root_system(family_from_string(cfg.family), cfg.rank);
  LieAlgebra L(rs, cfg.p, cfg.allow_small_p);
  return {rs, std::move(L)};
}

inline Character parse_character(const std::string& text, const LieAlgebra& L) {
  std::string t = detail::trim(text);
  if (t.empty() || t == "regular") return Character::regular_nilpotent(L);
  if (t == "zero") return Character::zero(L);
  Character chi = Character::zero(L);
  for (const auto& item : detail::split(t, ',')) {
    auto eq = item.rfind('=');
    if (eq == std::string::npos) throw Error(Errc::Config, "chi entry '" + item + "' needs basis=value");
    ExprPtr key = parse(detail::trim(item.substr(0, eq)), &L.root_system());
    chi.values[basis_index(*key, L)] = L.field().reduce(detail::to_int("chi", detail::trim(item.substr(eq + 1))));
  }
  return chi;
}

inline std::vector<Coeff> parse_lambda(const std::string& text, const LieAlgebra& L, const Character& chi) {
  std::string t = detail::trim(text);
  if (t.empty()) {
    auto all = compatible_weights(L, chi);
    if (all.empty()) throw Error(Errc::IncompatibleWeight, "no weight is compatible with chi");
    return all.front();
  }
  std::vector<Coeff> lam(L.rank(), 0);
  auto items = detail::split(t, ',');
  bool keyed = t.find('=') != std::string::npos;
  if (!keyed && items.size() != L.rank())
    throw Error(Errc::Config, "lambda needs " + std::to_string(L.rank()) + " values");
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!keyed) {
      lam[i] = L.field().reduce(detail::to_int("lambda", items[i]));
      continue;
    }
    auto eq = items[i].rfind('=');
    if (eq == std::string::npos) throw Error(Errc::Config, "lambda entry '" + items[i] + "' needs key=value");
    std::string k = detail::trim(items[i].substr(0, eq));
    if (!k.empty() && std::isdigit(static_cast<unsigned char>(k[0]))) k = "h(" + k + ")";
    std::size_t idx = basis_index(*parse(k, &L.root_system()), L);
    if (!L.is_coroot(idx)) throw Error(Errc::Config, "lambda key " + k + " is not a simple coroot");
    lam[idx - L.num_positive()] = L.field().reduce(detail::to_int("lambda", detail::trim(items[i].substr(eq + 1))));
  }
  return lam;
}

inline std::map<Root, Coeff> parse_constants(const std::string& text, const LieAlgebra& L) {
  std::map<Root, Coeff> out;
  if (detail::trim(text).empty()) return out;
  for (const auto& item : detail::split(text, ',')) {
    auto eq = item.rfind('=');
    if (eq == std::string::npos) throw Error(Errc::Config, "c_beta entry '" + item + "' needs root=value");
    ExprPtr r = parse("x(" + detail::trim(item.substr(0, eq)) + ")", &L.root_system());
    out[Parser::resolve_root(*r, L.root_system())] =
        L.field().reduce(detail::to_int("c_beta", detail::trim(item.substr(eq + 1))));
  }
  return out;
}

inline std::string weight_text(const std::vector<Coeff>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

inline json character_json(const Character& chi, const LieAlgebra& L) {
  json j = json::object();
  for (std::size_t i = 0; i < L.dim(); ++i)
    if (chi.at(i)) j[L.basis(i).label] = chi.at(i);
  return j;
}

/// The representation used for matrix cross-checks.
inline MatrixRep select_rep(const RunConfig& cfg, const LieAlgebra& L, std::string* why) {
  std::string mode = cfg.rep;
  if (mode == "auto") {
    double d = 1;
    for (std::size_t k = 0; k < L.num_positive(); ++k) d *= static_cast<double>(L.field().p);
    mode = d <= 4096 ? "baby-verma" : "adjoint";
    if (why) *why = mode == "adjoint" ? "baby Verma module too large; adjoint representation used" : "baby Verma module";
  } else if (why) {
    *why = mode;
  }
  if (mode == "adjoint") return adjoint_rep(L);
  Character chi = parse_character(cfg.chi, L);
  return baby_verma(L, chi, parse_lambda(cfg.lambda, L, chi));
}

inline json rep_json(const MatrixRep& rep, const LieAlgebra& L) {
  json j{{"kind", rep.kind}, {"dim", rep.dim}};
  if (rep.kind == "baby-verma") {
    j["chi"] = character_json(rep.chi, L);
    j["lambda"] = rep.lambda;
  }
  return j;
}

// Commands.

inline Outcome cmd_roots(const RunConfig& cfg) {
  validate(cfg);
  RootSystem rs = build_root_system(family_from_string(cfg.family), cfg.rank);
  Outcome o;
  json roots = json::array();
  for (const Root& r : rs.roots()) roots.push_back({{"root", label(r)}, {"height", rs.height(r)}, {"norm2", r.norm2()}});
  json base = json::array();
  for (const Root& r : rs.base()) base.push_back(label(r));
  std::vector<std::vector<Root>> orbits;
  for (const Root& r : rs.roots()) {
    bool seen = false;
    for (const auto& orb : orbits)
      if (std::find(orb.begin(), orb.end(), r) != orb.end()) seen = true;
    if (!seen) orbits.push_back(weyl_orbit(r, rs));
  }
  json orb = json::array();
  for (const auto& o2 : orbits) orb.push_back({{"representative", label(o2.front())}, {"size", o2.size()}, {"norm2", o2.front().norm2()}});
  o.report = {{"schema", 1},
              {"command", "roots"},
              {"system", rs.name()},
              {"count", rs.roots().size()},
              {"positive", rs.num_positive()},
              {"base", base},
              {"orbits", orb},
              {"roots", roots}};
  std::ostringstream s;
  s << rs.name() << ": " << rs.roots().size() << " roots, " << rs.num_positive() << " positive\nbase:";
  for (const Root& r : rs.base()) s << " " << label(r);
  s << "\nWeyl orbits: " << orbits.size() << "\n";
  for (const auto& o2 : orbits) s << "  " << label(o2.front()) << " (|.|^2 = " << o2.front().norm2() << "): " << o2.size() << " roots\n";
  o.summary = s.str();
  return o;
}

/// One line per nonzero bracket of basis elements i < j: "<b_i> <b_j> : <c> <b_k> ...".
inline std::string struct_table_text(const LieAlgebra& L) {
  std::ostringstream s;
  s << "# " << L.root_system().name() << " p=" << L.characteristic() << " dim=" << L.dim() << "\n";
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t j = i + 1; j < L.dim(); ++j) {
      const auto& terms = L.field().modular() ? L.bracket_basis(i, j) : L.integer_bracket(i, j);
      if (terms.empty()) continue;
      s << L.basis(i).label << " " << L.basis(j).label << " :";
      for (auto [k, c] : terms) s << " " << (L.field().modular() ? L.field().balanced(c) : c) << " " << L.basis(k).label;
      s << "\n";
    }
  return s.str();
}

inline Outcome cmd_struct_table(const RunConfig& cfg) {
  Context ctx = make_context(cfg);
  const LieAlgebra& L = ctx.L;
  Outcome o;
  json basis = json::array();
  for (const auto& b : L.basis()) basis.push_back(b.label);
  json table = json::array();
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t j = i + 1; j < L.dim(); ++j) {
      const auto& terms = L.field().modular() ? L.bracket_basis(i, j) : L.integer_bracket(i, j);
      if (terms.empty()) continue;
      json t = json::array();
      for (auto [k, c] : terms) t.push_back({L.basis(k).label, L.field().modular() ? L.field().balanced(c) : c});
      table.push_back({{"x", L.basis(i).label}, {"y", L.basis(j).label}, {"bracket", t}});
    }
  o.report = {{"schema", 1}, {"command", "struct-table"}, {"system", ctx.rs.name()}, {"p", cfg.p}, {"basis", basis}, {"table", table}};
  o.summary = struct_table_text(L);
  return o;
}

inline Outcome cmd_normalform(const RunConfig& cfg, const std::string& text) {
  Context ctx = make_context(cfg);
  Enveloping E(ctx.L);
  ExprPtr e = parse(text, &ctx.rs);
  UEElement u = eval(*e, E);
  WeightResult w = E.weight(u);
  Outcome o;
  o.report = {{"schema", 1},
              {"command", "normalform"},
              {"system", ctx.rs.name()},
              {"p", cfg.p},
              {"input", text},
              {"parsed", to_string(*e)},
              {"normal_form", E.to_string(u)},
              {"terms", u.terms.size()},
              {"degree", u.degree()},
              {"weight", w.kind == WeightResult::Kind::Homogeneous ? json(label(w.weight))
                         : w.kind == WeightResult::Kind::Zero     ? json(nullptr)
                                                                  : json("inhomogeneous")}};
  o.summary = E.to_string(u) + "\n";
  return o;
}

inline Outcome cmd_central(const RunConfig& cfg, const std::string& text) {
  Context ctx = make_context(cfg);
  Enveloping E(ctx.L);
  UEElement u = eval(*parse(text, &ctx.rs), E);
  Outcome o;
  o.report = {{"schema", 1}, {"command", "central"}, {"system", ctx.rs.name()}, {"p", cfg.p}, {"input", text},
              {"normal_form", E.to_string(u)}};
  for (std::size_t g = 0; g < ctx.L.dim(); ++g) {
    UEElement c = E.commutator(E.generator(g), u);
    if (!c.is_zero()) {
      o.code = kCounterexample;
      o.report["central"] = false;
      o.report["certificate"] = {{"generator", ctx.L.basis(g).label}, {"commutator", E.to_string(c)}};
      o.summary = "false: [" + ctx.L.basis(g).label + ", u] = " + E.to_string(c) + "\n";
      return o;
    }
  }
  o.report["central"] = true;
  o.summary = "true\n";
  return o;
}

inline Outcome cmd_baby_verma(const RunConfig& cfg) {
  Context ctx = make_context(cfg);
  const LieAlgebra& L = ctx.L;
  Character chi = parse_character(cfg.chi, L);
  std::vector<Coeff> lam = parse_lambda(cfg.lambda, L, chi);
  MatrixRep rep = baby_verma(L, chi, lam);
  auto br = bracket_failures(rep, L);
  auto rs = restrictedness_failures(rep, L);
  Outcome o;
  json brj = json::array(), rsj = json::array();
  for (auto [i, j] : br) brj.push_back({L.basis(i).label, L.basis(j).label});
  for (auto i : rs) rsj.push_back(L.basis(i).label);
  o.report = {{"schema", 1},
              {"command", "baby-verma"},
              {"system", ctx.rs.name()},
              {"p", cfg.p},
              {"chi", character_json(chi, L)},
              {"lambda", lam},
              {"dim", rep.dim},
              {"expected_dim", "p^" + std::to_string(L.num_positive())},
              {"bracket_failures", brj},
              {"restrictedness_failures", rsj}};
  if (!br.empty() || !rs.empty()) o.code = kCounterexample;
  if (!cfg.export_path.empty()) {
    std::ofstream f(cfg.export_path);
    if (!f) throw Error(Errc::Config, "cannot write '" + cfg.export_path + "'");
    write_rep(f, rep);
    o.report["export"] = cfg.export_path;
  }
  std::ostringstream s;
  s << "baby Verma " << ctx.rs.name() << " p=" << cfg.p << " lambda=" << weight_text(lam) << ": dim " << rep.dim
    << "\nbracket compatibility: " << (br.empty() ? "ok" : std::to_string(br.size()) + " failures")
    << "\nrestrictedness: " << (rs.empty() ? "ok" : std::to_string(rs.size()) + " failures") << "\n";
  o.summary = s.str();
  return o;
}

inline json verdict_json(const IrreducibilityVerdict& v) {
  json j{{"verdict", to_string(v.kind)}, {"method", v.method}};
  if (v.algebra_dim) j["algebra_dim"] = v.algebra_dim;
  if (v.kind == IrreducibilityVerdict::Kind::Submodule) j["witness_dim"] = v.witness.size();
  return j;
}

inline int verdict_code(const IrreducibilityVerdict& v) {
  switch (v.kind) {
    case IrreducibilityVerdict::Kind::Irreducible: return kPass;
    case IrreducibilityVerdict::Kind::Submodule: return kCounterexample;
    case IrreducibilityVerdict::Kind::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

inline Outcome cmd_irreducible(const RunConfig& cfg) {
  Context ctx = make_context(cfg);
  const LieAlgebra& L = ctx.L;
  Character chi = parse_character(cfg.chi, L);
  std::vector<Coeff> lam = parse_lambda(cfg.lambda, L, chi);
  MatrixRep rep = baby_verma(L, chi, lam);
  IrreducibilityOptions opt;
  opt.budget = cfg.budget;
  opt.seed = cfg.seed;
  IrreducibilityVerdict v = is_irreducible(rep, opt);
  Outcome o;
  o.code = verdict_code(v);
  o.report = {{"schema", 1}, {"command", "irreducible"}, {"system", ctx.rs.name()}, {"p", cfg.p},
              {"chi", character_json(chi, L)}, {"lambda", lam}, {"dim", rep.dim}};
  o.report.update(verdict_json(v));
  if (v.kind == IrreducibilityVerdict::Kind::Submodule)
    o.report["witness_invariant"] = is_invariant(v.witness, rep);
  o.summary = std::string(to_string(v.kind)) + " (dim " + std::to_string(rep.dim) + ", " + v.method +
              (v.kind == IrreducibilityVerdict::Kind::Submodule ? ", invariant subspace of dim " +
                                                                      std::to_string(v.witness.size())
                                                                : std::string()) +
              ")\n";
  return o;
}

inline json signs_json(const std::vector<int>& s) {
  std::string t;
  for (int x : s) t += x > 0 ? '+' : '-';
  return t;
}

inline Outcome cmd_verify_lee(const RunConfig& cfg) {
  Context ctx = make_context(cfg);
  const LieAlgebra& L = ctx.L;
  require_modular(L);
  Enveloping E(L);
  LeeCase lc = lee_case_from_string(cfg.lee_case);
  std::vector<ABSpec> specs = build_case(L, E, lc);
  std::string rep_note;
  MatrixRep rep = select_rep(cfg, L, &rep_note);
  auto given = parse_constants(cfg.c_beta, L);
  const Root alpha = specs.front().alpha;
  const SparseMatrix& xa = rep.generators[L.index_of_root(alpha)];

  Outcome o;
  json items = json::array();
  std::size_t n_slots = 0, n_solved = 0, n_nosol = 0, n_impossible = 0, n_uncovered = 0, n_indep = 0, n_corr = 0;
  std::size_t n_inconsistent = 0, n_unstable = 0;
  json variants = json::array();
  for (const ABSpec& s : specs) {
    json it{{"target", label(s.target)}, {"family", s.family},  {"role", to_string(s.role)},
            {"shape", to_string(s.shape)}, {"marker", to_string(s.marker)}, {"template", s.printed}};
    if (!s.note.empty()) it["note"] = s.note;
    if (s.role == Role::Slot) ++n_slots;
    if (s.marker == Marker::ImpossibleForRank) {
      if (s.role == Role::Slot || s.role == Role::Unplaced) ++n_impossible;
      it["verdict"] = "NotApplicable";
      items.push_back(it);
      continue;
    }
    if (s.marker == Marker::Uncovered && s.role == Role::Slot) ++n_uncovered;
    SignVerdict v = solve_signs(s, E, 0);
    SignVerdict v1 = solve_signs(s, E, 1);
    bool stable = v.status == v1.status && v.independent_solutions == v1.independent_solutions;
    if (!stable) ++n_unstable;
    it["verdict"] = to_string(v.status);
    it["stable_under_c"] = stable;
    json interp{{"independent", json::array()}, {"correlated", json::array()}};
    for (auto i : v.independent_solutions) interp["independent"].push_back(signs_json(v.assignments[i]));
    for (auto i : v.correlated_solutions) interp["correlated"].push_back(signs_json(v.assignments[i]));
    it["interpretations"] = interp;
    if (!v.independent_solutions.empty()) ++n_indep;
    if (!v.correlated_solutions.empty()) ++n_corr;
    json assigns = json::array();
    bool consistent = true;
    bool matrix_certificate = false;
    for (std::size_t i = 0; i < v.assignments.size(); ++i) {
      SparseMatrix a = evaluate(expand(s, E, v.assignments[i]), rep);
      bool mat_zero = commutator(xa, a).is_zero();
      bool sym_zero = v.residues[i].is_zero();
      if (sym_zero && !mat_zero) consistent = false;
      if (!sym_zero && !mat_zero) matrix_certificate = true;
      json aj{{"signs", signs_json(v.assignments[i])}, {"commutes", sym_zero}, {"matrix_commutes", mat_zero}};
      if (!sym_zero) {
        aj["residue"] = E.to_string(v.residues[i]);
        WeightResult w = E.weight(v.residues[i]);
        aj["residue_weight"] = w.homogeneous() ? json(label(w.weight)) : json("inhomogeneous");
      }
      assigns.push_back(aj);
    }
    it["assignments"] = assigns;
    if (!consistent) ++n_inconsistent;
    json cross{{"consistent", consistent}};
    if (v.status == SignVerdict::Status::NoSolution)
      cross["certificate"] = matrix_certificate ? "matrix" : "weight";
    it["rep_cross_check"] = cross;
    if (v.solved()) {
      it["solved_signs"] = signs_json(v.signs());
      it["machine_form"] = machine_form(s, v.signs(), 0);
    } else if (v.status == SignVerdict::Status::NoSolution) {
      it["machine_form"] = machine_form(s, v.assignments.front(), 0);
    }
    if (s.role == Role::Slot && (s.shape == Shape::Casimir || s.shape == Shape::PrefactorParen)) {
      const auto& signs = v.solved() ? v.signs() : v.assignments.front();
      InvertibilityScan scan = invertibility_scan(s, signs, rep, E);
      auto g = given.find(s.target);
      Coeff c = g != given.end() ? g->second : choose_constant(scan, L.field().p);
      it["invertibility"] = {{"singular_c", scan.singular}, {"c", c},
                             {"invertible", std::find(scan.singular.begin(), scan.singular.end(), c) == scan.singular.end()}};
    }
    if (s.role == Role::Slot) {
      if (v.solved()) ++n_solved;
      else ++n_nosol;
    }
    if (s.role == Role::Variant) variants.push_back({{"target", label(s.target)}, {"template", s.printed}, {"verdict", to_string(v.status)}});
    items.push_back(it);
  }

  json bi;
  try {
    BiFamily fam = gen_Bi(L, alpha, n_slots, cfg.seed);
    bi = {{"method", fam.method}, {"vectors", fam.vectors}, {"alpha_values", fam.alpha_values},
          {"subsets_checked", fam.subsets_checked}};
    if (!fam.params.empty()) bi["params"] = fam.params;
  } catch (const Error& e) {
    if (e.code() != Errc::ExhaustedField) throw;
    bi = {{"error", e.what()}};
  }
  bi["general_position"] = "every min(l, n)-subset independent in F^l (surrogate for the projective condition)";

  o.report = {{"schema", 1},
              {"command", "verify-lee"},
              {"summary",
               {{"case", to_string(lc)},
                {"family", cfg.family},
                {"rank", cfg.rank},
                {"p", cfg.p},
                {"seed", cfg.seed},
                {"alpha", label(alpha)},
                {"counts",
                 {{"slots", n_slots},
                  {"solved", n_solved},
                  {"no_solution", n_nosol},
                  {"impossible_for_rank", n_impossible},
                  {"uncovered", n_uncovered},
                  {"admit_independent_signs", n_indep},
                  {"admit_correlated_signs", n_corr},
                  {"oracle_inconsistent", n_inconsistent},
                  {"unstable_under_c", n_unstable}}}}},
              {"rep", rep_json(rep, L)},
              {"rep_note", rep_note},
              {"specs", items},
              {"variants", variants},
              {"B_i", bi}};
  if (n_nosol || n_uncovered || n_inconsistent) o.code = kCounterexample;
  std::ostringstream s;
  s << "verify-lee case " << to_string(lc) << " on " << ctx.rs.name() << " p=" << cfg.p << " (alpha = " << label(alpha)
    << ")\n  slots " << n_slots << ": solved " << n_solved << ", no solution " << n_nosol << ", impossible for rank "
    << n_impossible << ", uncovered " << n_uncovered << "\n  matrix oracle (" << rep.kind << ", dim " << rep.dim
    << "): " << (n_inconsistent ? std::to_string(n_inconsistent) + " inconsistent" : std::string("consistent")) << "\n";
  for (const auto& it : items)
    if (it["role"] == "slot")
      s << "  " << it["target"].get<std::string>() << ": " << it["verdict"].get<std::string>() << "  "
        << it["template"].get<std::string>() << "\n";
  o.summary = s.str();
  return o;
}

inline Outcome cmd_independence(const RunConfig& cfg) {
  Context ctx = make_context(cfg);
  const LieAlgebra& L = ctx.L;
  require_modular(L);
  Enveloping E(L);
  LeeCase lc = lee_case_from_string(cfg.lee_case);
  std::vector<ABSpec> specs;
  std::vector<SignVerdict> verdicts;
  json skipped = json::array();
  for (const ABSpec& s : slot_specs(build_case(L, E, lc))) {
    if (s.marker == Marker::ImpossibleForRank || s.marker == Marker::Uncovered) {
      skipped.push_back({{"target", label(s.target)}, {"marker", to_string(s.marker)}});
      continue;
    }
    specs.push_back(s);
    verdicts.push_back(solve_signs(s, E));
  }
  std::string rep_note;
  MatrixRep rep = select_rep(cfg, L, &rep_note);
  auto given = parse_constants(cfg.c_beta, L);
  std::vector<Coeff> cs;
  json slots = json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    Coeff c = 0;
    auto g = given.find(specs[i].target);
    if (g != given.end()) {
      c = g->second;
    } else if (specs[i].shape != Shape::RootPower) {
      const auto& signs = verdicts[i].solved() ? verdicts[i].signs() : verdicts[i].assignments.front();
      c = choose_constant(invertibility_scan(specs[i], signs, rep, E), L.field().p);
    }
    cs.push_back(c);
    slots.push_back({{"target", label(specs[i].target)}, {"verdict", to_string(verdicts[i].status)}, {"c", c}});
  }
  Outcome o;
  o.report = {{"schema", 1}, {"command", "independence"}, {"system", ctx.rs.name()}, {"p", cfg.p},
              {"case", to_string(lc)}, {"seed", cfg.seed}, {"bound", cfg.bound}, {"rep", rep_json(rep, L)},
              {"slots", slots}, {"skipped", skipped}};
  BiFamily fam;
  try {
    fam = gen_Bi(L, specs.front().alpha, specs.size(), cfg.seed);
  } catch (const Error& e) {
    if (e.code() != Errc::ExhaustedField) throw;
    o.code = kCounterexample;
    o.report["error"] = e.what();
    o.summary = std::string(e.what()) + "\n";
    return o;
  }
  LeeCandidate cand = assemble(specs, fam, verdicts, cs, E, AssemblePolicy::AsPrinted);
  IndependenceReport r = verify_independence_truncated(cand, rep, cfg.bound, E, cfg.seed);
  json deps = json::array();
  for (const auto& d : r.dependencies) {
    json dj = json::array();
    for (auto [i, c] : d) dj.push_back({{"element", i}, {"coeff", c}});
    deps.push_back(dj);
  }
  o.report["B_i"] = fam.vectors;
  o.report["independence"] = {{"count", r.count},
                              {"rank", r.rank},
                              {"permuted_rank", r.permuted_rank},
                              {"distinct_normal_forms", r.distinct_normal_forms},
                              {"full_rank", r.rank == r.count},
                              {"dependencies", deps}};
  if (r.rank != r.count || r.permuted_rank != r.rank || !r.distinct_normal_forms) o.code = kCounterexample;
  std::ostringstream s;
  s << "independence case " << to_string(lc) << " on " << ctx.rs.name() << " p=" << cfg.p << ", " << specs.size()
    << " slots, bound " << cfg.bound << ": " << r.count << " elements, rank " << r.rank << " (permuted " << r.permuted_rank
    << "), normal forms " << (r.distinct_normal_forms ? "distinct" : "colliding") << "\n";
  o.summary = s.str();
  return o;
}

/// Fixpoint closure of a span under brackets; returns its dimension.
inline std::size_t closure_dim(std::vector<LieElement> span, const LieAlgebra& L) {
  DenseEchelon ech(L.dim(), L.field());
  std::vector<LieElement> basis;
  for (auto& u : span)
    if (ech.insert(dense(u, L.dim()))) basis.push_back(u);
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) {
      LieElement br = L.bracket(basis[a], basis[b]);
      if (ech.insert(dense(br, L.dim()))) basis.push_back(br);
    }
  return ech.rank();
}

inline Outcome cmd_check_subalgebra(const RunConfig& cfg, const std::vector<std::string>& elems) {
  Context ctx = make_context(cfg);
  const LieAlgebra& L = ctx.L;
  Enveloping E(L);
  const RootSystem& rs = ctx.rs;
  Outcome o;
  o.report = {{"schema", 1}, {"command", "check-subalgebra"}, {"system", rs.name()}, {"p", cfg.p}};
  json checks = json::array();
  auto record = [&](const std::string& name, const std::vector<LieElement>& span) {
    SubalgebraVerdict v = check_subalgebra(span, L);
    std::size_t fix = closure_dim(span, L);
    json j{{"name", name}, {"span_dim", v.span_dim}, {"closed", v.closed}, {"fixpoint_dim", fix},
           {"fixpoint_agrees", v.closed == (fix == v.span_dim)}};
    if (!v.closed) {
      j["witness"] = {v.witness->first, v.witness->second};
      json wb = json::array();
      for (auto [k, c] : v.witness_bracket.terms) wb.push_back({L.basis(k).label, L.field().balanced(c)});
      j["witness_bracket"] = wb;
      o.code = kCounterexample;
    }
    if (v.closed != (fix == v.span_dim)) o.code = kCounterexample;
    checks.push_back(j);
  };
  if (!elems.empty()) {
    std::vector<LieElement> span;
    for (const auto& text : elems) {
      UEElement u = eval(*parse(text, &rs), E);
      LieElement x = L.zero();
      for (const auto& [m, c] : u.terms) {
        if (degree(m) != 1) throw Error(Errc::Config, "'" + text + "' is not an element of L");
        for (std::size_t i = 0; i < m.size(); ++i)
          if (m[i]) x.add_term(i, c);
      }
      span.push_back(x);
    }
    record("input", span);
  } else {
    if (rs.family() != Family::B || rs.rank() < 3)
      throw Error(Errc::UnsupportedRank, "default embeddings need B_l with l >= 3; pass elements instead");
    const int l = rs.rank();
    // B_{l-1} on e2..e_l and on e1..e_{l-1}.
    for (int skip : {1, l}) {
      std::vector<LieElement> sub;
      for (const Root& r : rs.roots())
        if (r.coords[skip - 1] == 0) sub.push_back(L.root_vector(r));
      for (const Root& r : rs.roots())
        if (r.coords[skip - 1] == 0 && rs.is_positive(r)) sub.push_back(L.coroot_expand(r));
      std::string name = "B" + std::to_string(l - 1) + " without e" + std::to_string(skip);
      record(name, sub);
      for (std::size_t i = 0; i < rs.base().size(); ++i) {
        CartanExtension ext = extend_by_cartan(sub, L.element(L.index_of_coroot(static_cast<int>(i))), L);
        record(name + " + " + L.basis(L.index_of_coroot(static_cast<int>(i))).label, ext.span);
      }
      std::vector<LieElement> full = sub;
      for (std::size_t i = 0; i < rs.base().size(); ++i) full.push_back(L.element(L.index_of_coroot(static_cast<int>(i))));
      record(name + " + H", full);
    }
  }
  o.report["checks"] = checks;
  std::ostringstream s;
  for (const auto& c : checks)
    s << c["name"].get<std::string>() << ": " << (c["closed"].get<bool>() ? "closed" : "not closed") << " (dim "
      << c["span_dim"].get<std::size_t>() << ", fixpoint " << c["fixpoint_dim"].get<std::size_t>() << ")\n";
  o.summary = s.str();
  return o;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"modlie: modular Lie algebra calculator", "modlie"};
  app.require_subcommand(1);
  RunConfig flags;
  std::string config_path, family, lee_case, chi, lambda, c_beta, out_path, export_path, rep;
  int rank = 0;
  std::int64_t p = 0;
  unsigned bound = 0, budget = 0;
  std::uint64_t seed = 0;
  bool json_stdout = false, small_p = false;
  std::vector<std::pair<std::string, CLI::Option*>> opts;
  opts.emplace_back("family", app.add_option("--family", family, "A, B, C or D"));
  opts.emplace_back("rank", app.add_option("--rank", rank, "rank l"));
  opts.emplace_back("p", app.add_option("--p", p, "characteristic (0 or a prime)"));
  opts.emplace_back("case", app.add_option("--case", lee_case, "I or II"));
  opts.emplace_back("chi", app.add_option("--chi", chi, "regular, zero, or basis=value,..."));
  opts.emplace_back("lambda", app.add_option("--lambda", lambda, "v1,v2,... or h(i)=v,..."));
  opts.emplace_back("c_beta", app.add_option("--c-beta", c_beta, "root=value,..."));
  opts.emplace_back("bound", app.add_option("--bound", bound, "degree bound"));
  opts.emplace_back("seed", app.add_option("--seed", seed, "random seed"));
  opts.emplace_back("out", app.add_option("--out", out_path, "JSON report path"));
  opts.emplace_back("export", app.add_option("--export", export_path, "sparse matrix export path"));
  opts.emplace_back("rep", app.add_option("--rep", rep, "auto, baby-verma or adjoint"));
  opts.emplace_back("budget", app.add_option("--budget", budget, "randomized trial budget"));
  auto* small_flag = app.add_flag("--allow-small-p", small_p, "permit primes below 7");
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_flag("--json", json_stdout, "print the JSON report on standard output");

  std::string expr_text;
  std::vector<std::string> elems;
  std::vector<CLI::App*> subs;
  auto add = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    subs.push_back(s);
    return s;
  };
  add("roots", "root system data");
  add("struct-table", "structure constants of the Chevalley basis");
  add("normalform", "PBW normal form of an expression")->add_option("expr", expr_text)->required();
  add("central", "test whether an expression is central in U(L)")->add_option("expr", expr_text)->required();
  add("verify-lee", "A_beta templates, sign solving and oracle cross-checks");
  add("baby-verma", "build a baby Verma module and check its identities");
  add("irreducible", "irreducibility verdict for a baby Verma module");
  add("independence", "truncated independence of the candidate product set");
  add("check-subalgebra", "subalgebra closure checks")->add_option("elements", elems);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) load_config_file(cfg, config_path);
    auto given = [&](const std::string& k) {
      for (auto& [name, opt] : opts)
        if (name == k) return opt->count() > 0;
      return false;
    };
    if (given("family")) cfg.family = family;
    if (given("rank")) cfg.rank = rank;
    if (given("p")) cfg.p = p;
    if (given("case")) cfg.lee_case = lee_case;
    if (given("chi")) cfg.chi = chi;
    if (given("lambda")) cfg.lambda = lambda;
    if (given("c_beta")) cfg.c_beta = c_beta;
    if (given("bound")) cfg.bound = bound;
    if (given("seed")) cfg.seed = seed;
    if (given("out")) cfg.out = out_path;
    if (given("export")) cfg.export_path = export_path;
    if (given("rep")) cfg.rep = rep;
    if (given("budget")) cfg.budget = budget;
    if (small_flag->count()) cfg.allow_small_p = true;

    std::string cmd = app.get_subcommands().front()->get_name();
    Outcome o;
    if (cmd == "roots") o = cmd_roots(cfg);
    else if (cmd == "struct-table") o = cmd_struct_table(cfg);
    else if (cmd == "normalform") o = cmd_normalform(cfg, expr_text);
    else if (cmd == "central") o = cmd_central(cfg, expr_text);
    else if (cmd == "verify-lee") o = cmd_verify_lee(cfg);
    else if (cmd == "baby-verma") o = cmd_baby_verma(cfg);
    else if (cmd == "irreducible") o = cmd_irreducible(cfg);
    else if (cmd == "independence") o = cmd_independence(cfg);
    else o = cmd_check_subalgebra(cfg, elems);
    o.report["config"] = config_json(cfg);
    o.report["exit_code"] = o.code;
    std::string text = o.report.dump(2) + "\n";
    if (!cfg.out.empty()) {
      std::ofstream f(cfg.out);
      if (!f) throw Error(Errc::Config, "cannot write '" + cfg.out + "'");
      f << text;
    }
    out << (json_stdout ? text : o.summary);
    return o.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace modlie::cli
