// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
// Time limits are part of each criterion and are checked against wall-clock time.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modlie/cli.hpp"
#include "support.hpp"

using namespace modlie;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

LieAlgebra algebra(Family f, int l, std::int64_t p, bool small = false) {
  return LieAlgebra(build_root_system(f, l), p, small);
}

std::string join(const std::vector<Coeff>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

// 1
Verdict root_data() {
  Verdict v;
  const std::vector<std::vector<std::string>> bases = {
      {"+e1-e2", "+e2"}, {"+e1-e2", "+e2-e3", "+e3"}, {"+e1-e2", "+e2-e3", "+e3-e4", "+e4"}};
  for (int l : {2, 3, 4}) {
    RootSystem rs = build_root_system(Family::B, l);
    v.require(rs.roots().size() == static_cast<std::size_t>(2 * l * l), "|Phi(B" + std::to_string(l) + ")|");
    std::vector<std::string> base;
    for (const Root& r : rs.base()) base.push_back(label(r));
    v.require(base == bases[l - 2], "base of B" + std::to_string(l));
    std::set<std::vector<Root>> orbits;
    for (const Root& r : rs.roots()) orbits.insert(weyl_orbit(r, rs));
    std::set<int> lengths;
    for (const auto& o : orbits) {
      lengths.insert(o.front().norm2());
      for (const Root& r : o) v.require(r.norm2() == o.front().norm2(), "orbit of mixed length");
    }
    v.require(orbits.size() == 2 && lengths == std::set<int>{1, 2}, "two orbits (short/long) in B" + std::to_string(l));
    v.note("B" + std::to_string(l) + ": " + std::to_string(rs.roots().size()) + " roots, " +
           std::to_string(orbits.size()) + " orbits");
  }
  return v;
}

// 2
Verdict chevalley_integrity() {
  Verdict v;
  std::size_t triples = 0;
  for (auto [f, l] : {std::pair{Family::A, 1}, std::pair{Family::A, 2}, std::pair{Family::B, 2},
                      std::pair{Family::B, 3}, std::pair{Family::C, 2}})
    for (std::int64_t p : {0, 7}) {
      LieAlgebra L = algebra(f, l, p);
      const std::size_t n = L.dim();
      const Field F = L.field();
      auto br = [&](std::size_t i, const std::vector<Coeff>& x) {
        std::vector<Coeff> out(n, 0);
        for (std::size_t j = 0; j < n; ++j)
          if (x[j])
            for (auto [k, c] : L.bracket_basis(i, j)) out[k] = F.add(out[k], F.mul(x[j], c));
        return out;
      };
      auto unit = [&](std::size_t i) {
        std::vector<Coeff> e(n, 0);
        e[i] = 1;
        return e;
      };
      std::size_t bad_anti = 0, bad_jacobi = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          auto a = br(i, unit(j)), b = br(j, unit(i));
          for (std::size_t k = 0; k < n; ++k) bad_anti += F.add(a[k], b[k]) != 0;
        }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) {
            auto t1 = br(i, br(j, unit(k))), t2 = br(j, br(k, unit(i))), t3 = br(k, br(i, unit(j)));
            for (std::size_t m = 0; m < n; ++m) bad_jacobi += F.add(F.add(t1[m], t2[m]), t3[m]) != 0;
            ++triples;
          }
      std::string name = L.root_system().name() + " p=" + std::to_string(p);
      v.require(bad_anti == 0, "antisymmetry in " + name);
      v.require(bad_jacobi == 0, "Jacobi in " + name);
    }
  v.note(std::to_string(triples) + " triples checked");
  return v;
}

// 3
Verdict casimir_centrality() {
  Verdict v;
  const std::string text = "(h(e1)+1)^2 + 4 x(-e1) x(+e1)";
  for (std::int64_t p : {0, 7}) {
    LieAlgebra A1 = algebra(Family::A, 1, p);
    Enveloping E(A1);
    v.require(E.is_central(eval(*parse(text, &A1.root_system()), E)), "A1 p=" + std::to_string(p));
    LieAlgebra B2 = algebra(Family::B, 2, p);
    Enveloping EB(B2);
    UEElement c = eval(*parse(text, &B2.root_system()), EB);
    for (const char* g : {"x(+e1)", "x(-e1)", "h(e1)"})
      v.require(EB.commutator(eval(*parse(g, &B2.root_system()), EB), c).is_zero(),
                std::string("[") + g + ", C] in B2 p=" + std::to_string(p));
  }
  v.note("central in A1 and in the e1-sl2 of B2, p in {0,7}");
  return v;
}

// 4
Verdict rudakov_shafarevich() {
  Verdict v;
  for (std::int64_t p : {5, 7}) {
    LieAlgebra L = algebra(Family::A, 1, p, true);
    Character chi = Character::zero(L);
    chi.values[L.index_of_root(Root({-1}))] = 1;
    auto weights = compatible_weights(L, chi);
    v.require(weights.size() == static_cast<std::size_t>(p), "p compatible weights");
    std::size_t irreducible = 0;
    for (const auto& lam : weights) {
      MatrixRep rep = baby_verma(L, chi, lam);
      IrreducibilityVerdict iv = is_irreducible(rep);
      v.require(rep.dim == static_cast<std::size_t>(p), "dimension p");
      bool ok = iv.kind == IrreducibilityVerdict::Kind::Irreducible && iv.method.find("burnside") == 0 &&
                iv.algebra_dim == rep.dim * rep.dim;
      v.require(ok, "Burnside Irreducible at p=" + std::to_string(p) + " lambda=" + std::to_string(lam[0]));
      irreducible += ok;
    }
    MatrixRep zero = baby_verma(L, Character::zero(L), {0});
    IrreducibilityVerdict iz = is_irreducible(zero);
    bool sub = iz.kind == IrreducibilityVerdict::Kind::Submodule && !iz.witness.empty() &&
               iz.witness.size() < zero.dim && is_invariant(iz.witness, zero);
    v.require(sub, "chi=0 submodule at p=" + std::to_string(p));
    v.note("p=" + std::to_string(p) + ": " + std::to_string(irreducible) + "/" + std::to_string(weights.size()) +
           " irreducible, chi=0 witness dim " + std::to_string(iz.witness.size()));
  }
  return v;
}

// 5
Verdict b2_dimension() {
  Verdict v;
  LieAlgebra L = algebra(Family::B, 2, 7);
  Character chi = Character::regular_nilpotent(L);
  v.require(chi.standard(L), "standard character");
  auto lam = compatible_weights(L, chi).front();
  MatrixRep rep = baby_verma(L, chi, lam);
  const std::size_t n = L.dim(), l = L.rank();
  std::size_t expect = 1;
  for (std::size_t k = 0; k < (n - l) / 2; ++k) expect *= 7;
  v.require(rep.dim == 2401 && rep.dim == expect, "dimension 7^4");
  auto br = bracket_failures(rep, L);
  auto rs = restrictedness_failures(rep, L);
  v.require(br.empty(), std::to_string(br.size()) + " bracket failures");
  v.require(rs.empty(), std::to_string(rs.size()) + " restrictedness failures");
  v.note("dim " + std::to_string(rep.dim) + ", " + std::to_string(n * (n - 1) / 2) + " brackets and " +
         std::to_string(n) + " p-th powers checked");
  return v;
}

// 6
Verdict sign_ledger() {
  Verdict v;
  std::size_t specs = 0, solved = 0, nosol = 0;
  for (int l : {2, 3}) {
    LieAlgebra L = algebra(Family::B, l, 7);
    Enveloping E(L);
    MatrixRep rep = l == 2 ? baby_verma(L, Character::regular_nilpotent(L), {0, 0}) : adjoint_rep(L);
    for (LeeCase c : {LeeCase::I, LeeCase::II}) {
      for (const ABSpec& s : build_case(L, E, c)) {
        SignVerdict sv = solve_signs(s, E);
        if (sv.status == SignVerdict::Status::NotApplicable) continue;
        ++specs;
        const SparseMatrix& xa = rep.generators[L.index_of_root(s.alpha)];
        std::string where = "B" + std::to_string(l) + " case " + to_string(c) + " " + s.printed;
        if (sv.solved()) {
          ++solved;
          for (auto i : sv.independent_solutions)
            v.require(commutator(xa, evaluate(expand(s, E, sv.assignments[i]), rep)).is_zero(), where);
        } else {
          ++nosol;
          bool certified = false;
          for (std::size_t i = 0; i < sv.assignments.size() && !certified; ++i) {
            if (!evaluate(sv.residues[i], rep).is_zero()) certified = true;
            WeightResult w = E.weight(sv.residues[i]);
            if (!sv.residues[i].is_zero() && w.homogeneous() && w.weight == s.alpha + s.weight) certified = true;
          }
          v.require(certified, "uncertified NoSolution " + where);
        }
      }
      // Report determinism, with B_i generated at p = 11.
      for (std::int64_t p : {7, 11}) {
        cli::RunConfig cfg;
        cfg.rank = l;
        cfg.p = p;
        cfg.lee_case = to_string(c);
        std::string a = cli::cmd_verify_lee(cfg).report.dump(), b = cli::cmd_verify_lee(cfg).report.dump();
        v.require(a == b, "report determinism B" + std::to_string(l) + " case " + to_string(c) + " p=" +
                              std::to_string(p));
        if (p == 11) {
          auto j = nlohmann::json::parse(a);
          v.note("B" + std::to_string(l) + "/" + to_string(c) + " B_i at p=11: " +
                 (j["B_i"].contains("error") ? std::string("ExhaustedField")
                                             : j["B_i"]["method"].get<std::string>()));
        }
      }
    }
  }
  v.note(std::to_string(specs) + " specs: " + std::to_string(solved) + " Solved, " + std::to_string(nosol) +
         " NoSolution, all consistent with the matrix oracle");
  return v;
}

// 7
Verdict truncated_independence() {
  Verdict v;
  LieAlgebra L = algebra(Family::B, 2, 7);
  Enveloping E(L);
  MatrixRep rep = baby_verma(L, Character::regular_nilpotent(L), {0, 0});
  std::vector<ABSpec> specs;
  std::vector<SignVerdict> verdicts;
  std::vector<Coeff> cs;
  for (const ABSpec& s : slot_specs(build_case_I(L, E))) {
    if (s.marker == Marker::ImpossibleForRank) continue;
    specs.push_back(s);
    verdicts.push_back(solve_signs(s, E));
    const SignVerdict& sv = verdicts.back();
    const auto& signs = sv.solved() ? sv.signs() : sv.assignments.front();
    cs.push_back(s.shape == Shape::RootPower ? 0 : choose_constant(invertibility_scan(s, signs, rep, E), 7));
  }
  BiFamily bi = gen_Bi(L, Root({1, 0}), specs.size(), 1);
  LeeCandidate cand = assemble(specs, bi, verdicts, cs, E, AssemblePolicy::AsPrinted);
  IndependenceReport r = verify_independence_truncated(cand, rep, 2, E, 1);
  IndependenceReport again = verify_independence_truncated(cand, rep, 2, E, 1);
  v.require(r.count == 28, "28 elements with sum <= 2 over 6 slots");
  v.require(r.distinct_normal_forms, "pairwise distinct normal forms");
  v.require(r.permuted_rank == r.rank, "rank invariant under permutation");
  v.require(again.rank == r.rank && again.dependencies == r.dependencies && again.tuples == r.tuples,
            "reproducible under the same seed");
  v.note(std::to_string(specs.size()) + " slots, " + std::to_string(r.count) + " elements, rank " +
         std::to_string(r.rank) + (r.rank == r.count ? " (full rank)" : " (deficient, reproduced)"));
  return v;
}

// 8
Verdict pbw_properties() {
  Verdict v;
  LieAlgebra L = algebra(Family::B, 2, 7);
  Enveloping E(L);
  std::mt19937_64 rng(20240);
  std::size_t bad_assoc = 0;
  for (int t = 0; t < 1000; ++t) {
    UEElement a = testing::random_element(E, rng, 4), b = testing::random_element(E, rng, 4),
              c = testing::random_element(E, rng, 4);
    bad_assoc += !(E.multiply(E.multiply(a, b), c) == E.multiply(a, E.multiply(b, c)));
  }
  MatrixRep ad = adjoint_rep(L);
  std::size_t bad_hom = 0;
  for (int t = 0; t < 200; ++t) {
    UEElement a = testing::random_element(E, rng, 4), b = testing::random_element(E, rng, 4);
    bad_hom += !(evaluate(E.multiply(a, b), ad) == evaluate(a, ad) * evaluate(b, ad));
  }
  v.require(bad_assoc == 0, std::to_string(bad_assoc) + " associativity failures");
  v.require(bad_hom == 0, std::to_string(bad_hom) + " homomorphism failures");
  v.note("1000 triples, 200 pairs in the adjoint representation");
  return v;
}

// 9
Verdict bi_conditions() {
  Verdict v;
  LieAlgebra L = algebra(Family::B, 2, 11);
  const Field F = L.field();
  for (const Root& alpha : {Root({1, 0}), Root({1, -1})}) {
    BiFamily f = gen_Bi(L, alpha, 8, 1);
    std::size_t pairs = 0, nonzero = 0;
    for (std::size_t i = 0; i < f.vectors.size(); ++i) {
      for (std::size_t j = i + 1; j < f.vectors.size(); ++j) {
        const auto &a = f.vectors[i], &b = f.vectors[j];
        pairs += F.sub(F.mul(a[0], b[1]), F.mul(a[1], b[0])) != 0;
      }
      LieElement br = L.bracket(bi_element(L, f.vectors[i]), L.root_vector(alpha));
      nonzero += !br.is_zero();
    }
    v.require(f.vectors.size() == 8, "8 vectors for " + label(alpha));
    v.require(pairs == 28, "C(8,2) independent pairs for " + label(alpha));
    v.require(nonzero == 8, "alpha(B_i) != 0 for " + label(alpha));
    v.note(label(alpha) + ": " + f.method + ", " + std::to_string(pairs) + "/28 pairs, " + std::to_string(nonzero) +
           "/8 nonzero");
  }
  return v;
}

// 10
Verdict invertibility() {
  Verdict v;
  auto scan_one = [&](const LieAlgebra& L, Enveloping& E, LeeCase c, const Root& target, const std::string& name) {
    MatrixRep rep = baby_verma(L, Character::regular_nilpotent(L), compatible_weights(L, Character::regular_nilpotent(L)).front());
    for (const ABSpec& s : slot_specs(build_case(L, E, c))) {
      if (s.target != target) continue;
      SignVerdict sv = solve_signs(s, E);
      InvertibilityScan scan = invertibility_scan(s, sv.solved() ? sv.signs() : sv.assignments.front(), rep, E);
      v.require(scan.singular.size() <= 2, name + " singular for " + std::to_string(scan.singular.size()) + " values");
      v.note(name + " singular c = " + join(scan.singular));
    }
  };
  LieAlgebra A1 = algebra(Family::A, 1, 7);
  Enveloping EA(A1);
  scan_one(A1, EA, LeeCase::I, Root({-1}), "A1 A_{-e1}");
  LieAlgebra B2 = algebra(Family::B, 2, 7);
  Enveloping EB(B2);
  scan_one(B2, EB, LeeCase::I, Root({-1, 0}), "B2 case I A_{-e1}");
  scan_one(B2, EB, LeeCase::II, Root({-1, 1}), "B2 case II A_{e2-e1}");
  return v;
}

// 11
Verdict subalgebra_closure() {
  Verdict v;
  for (std::int64_t p : {0, 7}) {
    LieAlgebra L = algebra(Family::B, 3, p);
    const RootSystem& rs = L.root_system();
    auto fixpoint = [&](std::vector<LieElement> span) {
      DenseEchelon ech(L.dim(), L.field());
      std::vector<LieElement> basis;
      for (const auto& u : span)
        if (ech.insert(dense(u, L.dim()))) basis.push_back(u);
      bool grew = true;
      while (grew) {
        grew = false;
        for (std::size_t a = 0; a < basis.size() && !grew; ++a)
          for (std::size_t b = 0; b < basis.size() && !grew; ++b) {
            LieElement c = L.bracket(basis[a], basis[b]);
            if (ech.insert(dense(c, L.dim()))) {
              basis.push_back(c);
              grew = true;
            }
          }
      }
      return ech.rank();
    };
    std::size_t checks = 0;
    for (int skip : {1, 3}) {
      std::vector<LieElement> sub;
      for (const Root& r : rs.roots())
        if (r.coords[skip - 1] == 0) sub.push_back(L.root_vector(r));
      for (const Root& r : rs.roots())
        if (r.coords[skip - 1] == 0 && rs.is_positive(r)) sub.push_back(L.coroot_expand(r));
      std::vector<std::vector<LieElement>> spans{sub};
      for (std::size_t i = 0; i < L.rank(); ++i) spans.push_back(extend_by_cartan(sub, L.element(L.index_of_coroot(static_cast<int>(i))), L).span);
      std::vector<LieElement> all = sub;
      for (std::size_t i = 0; i < L.rank(); ++i) all.push_back(L.element(L.index_of_coroot(static_cast<int>(i))));
      spans.push_back(all);
      for (const auto& s : spans) {
        SubalgebraVerdict sv = check_subalgebra(s, L);
        v.require(sv.closed, "closure of a B2 embedding without e" + std::to_string(skip));
        v.require(fixpoint(s) == sv.span_dim, "fixpoint closure agrees");
        ++checks;
      }
      std::vector<LieElement> broken = sub;
      broken.push_back(L.root_vector(skip == 1 ? Root({1, 0, 0}) : Root({0, 0, 1})));
      SubalgebraVerdict bv = check_subalgebra(broken, L);
      v.require(!bv.closed && fixpoint(broken) > bv.span_dim, "a non-closed span is detected");
    }
    v.note("p=" + std::to_string(p) + ": " + std::to_string(checks) + " spans closed");
  }
  return v;
}

// 12
Verdict cli_contract() {
  Verdict v;
  testing::ExprGen gen(77);
  RootSystem rs = build_root_system(Family::B, 2);
  std::size_t ok = 0;
  for (int i = 0; i < 200; ++i) {
    ExprPtr e = gen.gen(4);
    ExprPtr p1 = parse(to_string(*e), &rs);
    ExprPtr p2 = parse(to_string(*p1), &rs);
    ok += *p1 == *p2 && *p1 == *e;
  }
  v.require(ok == 200, "round trip " + std::to_string(ok) + "/200");

  auto run = [](std::vector<std::string> args) {
    args.insert(args.begin(), "modlie");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  };
  namespace fs = std::filesystem;
  for (const char* c : {"I", "II"}) {
    std::vector<std::string> outs;
    for (int k = 0; k < 2; ++k) {
      fs::path path = fs::current_path() / ("acceptance_verify_lee_" + std::to_string(k) + ".json");
      run({"verify-lee", "--family", "B", "--rank", "2", "--p", "11", "--case", c, "--seed", "3", "--out", path.string()});
      std::ifstream in(path);
      std::stringstream ss;
      ss << in.rdbuf();
      outs.push_back(ss.str());
      fs::remove(path);
    }
    v.require(!outs[0].empty() && outs[0] == outs[1], std::string("byte-identical verify-lee case ") + c);
  }

  struct Fixture {
    std::vector<std::string> args;
    int code;
  };
  const std::vector<Fixture> fixtures = {
      {{"central", "(h(e1)+1)^2 + 4 x(-e1) x(+e1)", "--family", "A", "--rank", "1"}, 0},
      {{"central", "x(+e1) x(-e1)", "--family", "A", "--rank", "1"}, 1},
      {{"irreducible", "--family", "A", "--rank", "1", "--p", "7", "--chi", "zero"}, 1},
      {{"irreducible", "--family", "B", "--rank", "2", "--p", "7", "--budget", "0"}, 3},
      {{"roots", "--family", "B", "--rank", "0"}, 2},
      {{"roots", "--no-such-flag"}, 2},
  };
  std::size_t passed = 0;
  for (const auto& f : fixtures) {
    int got = run(f.args);
    v.require(got == f.code, f.args[0] + " exited " + std::to_string(got) + ", expected " + std::to_string(f.code));
    passed += got == f.code;
  }
  v.note("200 round trips, 2 determinism pairs, " + std::to_string(passed) + "/" + std::to_string(fixtures.size()) +
         " exit-code fixtures");
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "root data", 1, root_data},
      {2, "Chevalley integrity", 30, chevalley_integrity},
      {3, "Casimir centrality", 10, casimir_centrality},
      {4, "sl2 baby Verma modules", 10, rudakov_shafarevich},
      {5, "B2 baby Verma dimension", 300, b2_dimension},
      {6, "sign ledger consistency", 600, sign_ledger},
      {7, "truncated independence", 600, truncated_independence},
      {8, "PBW engine properties", 60, pbw_properties},
      {9, "B_i conditions", 1, bi_conditions},
      {10, "invertibility scan", 60, invertibility},
      {11, "subalgebra closure", 10, subalgebra_closure},
      {12, "CLI contract", 120, cli_contract},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) v.require(false, "time limit " + std::to_string(c.limit_s) + " s");
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << timing << "): " << v.detail
              << std::endl;
    failures += !v.pass;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures ? 1 : 0;
}
