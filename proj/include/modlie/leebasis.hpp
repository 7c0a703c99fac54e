#pragma once

// Candidate bases of U(L)/M_chi for type B: the A_beta templates of the short-root case (I)
// and the long-root case (II), sign solving by symbolic commutation with x_alpha, the B_i
// coefficient family, assembly of the product set, and matrix-level verification.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "modlie/chevalley.hpp"
#include "modlie/error.hpp"
#include "modlie/linalg.hpp"
#include "modlie/pbw.hpp"
#include "modlie/redenv.hpp"
#include "modlie/roots.hpp"
#include "modlie/sparse.hpp"

namespace modlie {

enum class LeeCase { I, II };

inline const char* to_string(LeeCase c) { return c == LeeCase::I ? "I" : "II"; }

inline LeeCase lee_case_from_string(const std::string& s) {
  if (s == "I" || s == "i" || s == "1") return LeeCase::I;
  if (s == "II" || s == "ii" || s == "2") return LeeCase::II;
  throw Error(Errc::Config, "case must be I or II, got '" + s + "'");
}

enum class Shape { RootPower, Casimir, PrefactorParen };

/// Slot: part of the product set. Alternate: a printed template displaced by another for the
/// same target. Variant: a correction candidate for a suspected misprint. Unplaced: a template
/// whose target does not exist at this rank.
enum class Role { Slot, Alternate, Variant, Unplaced };

enum class Marker { None, ImpossibleForRank, Square, Cube, Borrowed, Uncovered };

inline const char* to_string(Shape s) {
  switch (s) {
    case Shape::RootPower: return "root-power";
    case Shape::Casimir: return "casimir";
    case Shape::PrefactorParen: return "prefactor-paren";
  }
  return "?";
}
inline const char* to_string(Role r) {
  switch (r) {
    case Role::Slot: return "slot";
    case Role::Alternate: return "alternate";
    case Role::Variant: return "variant";
    case Role::Unplaced: return "unplaced";
  }
  return "?";
}
inline const char* to_string(Marker m) {
  switch (m) {
    case Marker::None: return "none";
    case Marker::ImpossibleForRank: return "ImpossibleForRank";
    case Marker::Square: return "fallback-square";
    case Marker::Cube: return "fallback-cube";
    case Marker::Borrowed: return "fallback-borrowed";
    case Marker::Uncovered: return "uncovered";
  }
  return "?";
}

/// One summand x_left x_right inside a parenthesis. slot < 0 means a fixed '+'.
struct ParenTerm {
  Root left, right;
  int slot = -1;
};

struct ABSpec {
  LeeCase lee_case = LeeCase::I;
  Root alpha;
  Root target;
  Shape shape = Shape::RootPower;
  /// RootPower: x_prefactor^power. PrefactorParen: x_prefactor^power (c + paren).
  Root prefactor;
  unsigned power = 1;
  std::vector<ParenTerm> paren;
  int slots = 0;
  std::string constant;
  std::string printed;
  std::string family;
  Role role = Role::Slot;
  Marker marker = Marker::None;
  std::string note;
  /// Weight of every monomial of the expansion.
  Root weight;
};

namespace detail {

// Roots are built in a padded ambient space so that templates mentioning e3 or e_k can be
// written down at any rank and then tested for membership.
struct TemplateSpace {
  const RootSystem& rs;
  int pad;

  Root e(int i) const { return eps(pad, i); }

  std::optional<Root> fit(const Root& r) const {
    for (int i = rs.ambient_dim(); i < pad; ++i)
      if (r.coords[i]) return std::nullopt;
    Root out(std::vector<int>(r.coords.begin(), r.coords.begin() + rs.ambient_dim()));
    if (!rs.contains(out)) return std::nullopt;
    return out;
  }
};

inline std::string xlabel(const Root& r) { return "x(" + label(r) + ")"; }

inline std::string hlabel(const Root& r) {
  std::string s = label(r);
  if (s[0] == '+') s.erase(0, 1);
  return "h(" + s + ")";
}

struct RawParen {
  Root target;
  Root prefactor;
  unsigned power;
  std::string constant_root;
  std::vector<std::pair<Root, Root>> terms;  // first fixed '+', the rest signed
  std::string family;
};

inline ABSpec make_paren(const TemplateSpace& ts, LeeCase c, const Root& alpha, const RawParen& raw) {
  ABSpec s;
  s.lee_case = c;
  s.alpha = alpha;
  s.shape = Shape::PrefactorParen;
  s.family = raw.family;
  s.power = raw.power;
  s.constant = "c(" + raw.constant_root + ")";
  std::string printed = xlabel(raw.prefactor) + (raw.power > 1 ? "^" + std::to_string(raw.power) : "") + " (" +
                        s.constant;
  std::vector<std::string> missing;
  auto need = [&](const Root& r) -> Root {
    auto f = ts.fit(r);
    if (!f) {
      missing.push_back(label(r));
      return Root(std::vector<int>(ts.rs.ambient_dim(), 0));
    }
    return *f;
  };
  auto tgt = ts.fit(raw.target);
  s.target = tgt ? *tgt : Root(std::vector<int>(ts.rs.ambient_dim(), 0));
  s.prefactor = need(raw.prefactor);
  for (std::size_t i = 0; i < raw.terms.size(); ++i) {
    ParenTerm t;
    t.left = need(raw.terms[i].first);
    t.right = need(raw.terms[i].second);
    t.slot = i == 0 ? -1 : s.slots++;
    printed += (i == 0 ? " + " : " ± ") + xlabel(raw.terms[i].first) + " " + xlabel(raw.terms[i].second);
    s.paren.push_back(t);
  }
  s.printed = printed + ")";
  s.weight = s.prefactor;
  if (raw.power > 1) s.weight = static_cast<int>(raw.power) * s.prefactor;
  if (!tgt) {
    s.role = Role::Unplaced;
    s.marker = Marker::ImpossibleForRank;
    s.note = "target " + label(raw.target) + " is not a root of " + ts.rs.name();
  } else if (!missing.empty()) {
    s.marker = Marker::ImpossibleForRank;
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    s.note = "references non-roots:";
    for (const auto& m : missing) s.note += " " + m;
  }
  return s;
}

inline ABSpec make_power(LeeCase c, const Root& alpha, const Root& target, const Root& base, unsigned k,
                         const std::string& family) {
  ABSpec s;
  s.lee_case = c;
  s.alpha = alpha;
  s.target = target;
  s.shape = Shape::RootPower;
  s.prefactor = base;
  s.power = k;
  s.family = family;
  s.printed = xlabel(base) + (k > 1 ? "^" + std::to_string(k) : "");
  s.weight = static_cast<int>(k) * base;
  return s;
}

inline ABSpec make_casimir(LeeCase c, const Root& alpha) {
  ABSpec s;
  s.lee_case = c;
  s.alpha = alpha;
  s.target = -alpha;
  s.shape = Shape::Casimir;
  s.constant = "c(" + label(-alpha) + ")";
  s.family = "A_{" + label(-alpha) + "}";
  s.printed = s.constant + " + (" + hlabel(alpha) + " + 1)^2 + 4 " + xlabel(-alpha) + " " + xlabel(alpha);
  s.weight = Root(std::vector<int>(alpha.size(), 0));
  return s;
}

}  // namespace detail

/// Expansion of a spec with the given signs (one per slot, +1 or -1) and constant c.
inline UEElement expand(const ABSpec& s, Enveloping& E, const std::vector<int>& signs, Coeff c = 0) {
  if (s.marker == Marker::ImpossibleForRank || s.marker == Marker::Uncovered)
    throw Error(Errc::UnsolvedSpec, "cannot expand " + s.family + ": " + s.note);
  if (static_cast<int>(signs.size()) != s.slots)
    throw Error(Errc::ArityMismatch, "spec has " + std::to_string(s.slots) + " sign slots");
  const LieAlgebra& L = E.algebra();
  switch (s.shape) {
    case Shape::RootPower:
      return E.power(E.root_vector(s.prefactor), s.power);
    case Shape::Casimir: {
      UEElement h = E.from_lie(L.coroot_expand(s.alpha)) + E.one();
      UEElement fe = E.multiply(E.root_vector(-s.alpha), E.root_vector(s.alpha));
      return E.scalar(c) + E.multiply(h, h) + scaled(fe, 4);
    }
    case Shape::PrefactorParen: {
      UEElement paren = E.scalar(c);
      for (const auto& t : s.paren) {
        int sign = t.slot < 0 ? 1 : signs[t.slot];
        paren = paren + scaled(E.multiply(E.root_vector(t.left), E.root_vector(t.right)), sign);
      }
      return E.multiply(E.power(E.root_vector(s.prefactor), s.power), paren);
    }
  }
  return E.zero();
}

/// The parenthesis alone (PrefactorParen), or the whole element otherwise.
inline UEElement expand_paren(const ABSpec& s, Enveloping& E, const std::vector<int>& signs, Coeff c = 0) {
  if (s.shape != Shape::PrefactorParen) return expand(s, E, signs, c);
  ABSpec bare = s;
  bare.power = 0;
  return expand(bare, E, signs, c);
}

/// Machine-readable form of an expansion in the CLI grammar.
inline std::string machine_form(const ABSpec& s, const std::vector<int>& signs, Coeff c) {
  using detail::hlabel;
  using detail::xlabel;
  std::string cs = std::to_string(c);
  switch (s.shape) {
    case Shape::RootPower:
      return xlabel(s.prefactor) + (s.power > 1 ? "^" + std::to_string(s.power) : "");
    case Shape::Casimir:
      return cs + " + (" + hlabel(s.alpha) + " + 1)^2 + 4 " + xlabel(-s.alpha) + " " + xlabel(s.alpha);
    case Shape::PrefactorParen: {
      std::string out = xlabel(s.prefactor) + (s.power > 1 ? "^" + std::to_string(s.power) : "") + " (" + cs;
      for (const auto& t : s.paren) {
        int sign = t.slot < 0 ? 1 : signs[t.slot];
        out += (sign > 0 ? " + " : " - ") + xlabel(t.left) + " " + xlabel(t.right);
      }
      return out + ")";
    }
  }
  return "";
}

/// All 2^k assignments, all-plus first; slot 0 is the most significant choice.
inline std::vector<std::vector<int>> sign_assignments(int k) {
  std::vector<std::vector<int>> out;
  for (unsigned a = 0; a < (1u << k); ++a) {
    std::vector<int> s(k);
    for (int i = 0; i < k; ++i) s[i] = ((a >> (k - 1 - i)) & 1u) ? -1 : 1;
    out.push_back(s);
  }
  return out;
}

inline bool is_diagonal(const std::vector<int>& s) {
  return std::all_of(s.begin(), s.end(), [&](int v) { return v == s.front(); });
}

struct SignVerdict {
  enum class Status { Solved, NoSolution, NotApplicable };
  Status status = Status::NotApplicable;
  std::vector<std::vector<int>> assignments;
  /// [x_alpha, A] in normal form for each assignment (zero when that assignment commutes).
  std::vector<UEElement> residues;
  std::vector<std::size_t> independent_solutions;
  std::vector<std::size_t> correlated_solutions;
  std::size_t chosen = 0;

  bool solved() const { return status == Status::Solved; }
  const std::vector<int>& signs() const { return assignments.at(chosen); }
};

inline const char* to_string(SignVerdict::Status s) {
  switch (s) {
    case SignVerdict::Status::Solved: return "Solved";
    case SignVerdict::Status::NoSolution: return "NoSolution";
    case SignVerdict::Status::NotApplicable: return "NotApplicable";
  }
  return "?";
}

inline SignVerdict solve_signs(const ABSpec& s, Enveloping& E, Coeff c = 0) {
  SignVerdict v;
  if (s.marker == Marker::ImpossibleForRank || s.marker == Marker::Uncovered) return v;
  UEElement xa = E.root_vector(s.alpha);
  v.assignments = sign_assignments(s.slots);
  for (std::size_t i = 0; i < v.assignments.size(); ++i) {
    UEElement r = E.commutator(xa, expand(s, E, v.assignments[i], c));
    if (r.is_zero()) {
      v.independent_solutions.push_back(i);
      if (is_diagonal(v.assignments[i])) v.correlated_solutions.push_back(i);
    }
    v.residues.push_back(std::move(r));
  }
  if (v.independent_solutions.empty()) {
    v.status = SignVerdict::Status::NoSolution;
  } else {
    v.status = SignVerdict::Status::Solved;
    v.chosen = v.correlated_solutions.empty() ? v.independent_solutions.front() : v.correlated_solutions.front();
  }
  return v;
}

namespace detail {

inline void require_type_b(const LieAlgebra& L) {
  const RootSystem& rs = L.root_system();
  bool sl2 = rs.family() == Family::A && rs.rank() == 1;
  if (!sl2 && rs.family() != Family::B)
    throw Error(Errc::UnsupportedRank, "candidate bases are implemented for type B (and A1), not " + rs.name());
}

/// Slot targets in printed order: the two leading slots, simple pairs, e_l pair, then the rest.
inline std::vector<Root> slot_order(const RootSystem& rs, LeeCase c) {
  const int l = rs.rank();
  const int d = rs.ambient_dim();
  std::vector<Root> order;
  auto push = [&](const Root& r) {
    if (std::find(order.begin(), order.end(), r) == order.end()) order.push_back(r);
  };
  if (c == LeeCase::I) {
    push(eps(d, 1));
    push(-eps(d, 1));
  }
  for (int i = 1; i < l; ++i) {
    push(eps(d, i) - eps(d, i + 1));
    push(eps(d, i + 1) - eps(d, i));
  }
  if (rs.family() == Family::B) {
    push(eps(d, l));
    push(-eps(d, l));
  }
  for (const Root& r : rs.roots()) push(r);
  return order;
}

inline bool commutes_in_lie(const LieAlgebra& L, const Root& a, const Root& b) {
  return L.bracket_basis(L.index_of_root(a), L.index_of_root(b)).empty();
}

/// Fallback for a target with no printed template.
inline ABSpec fallback(const LieAlgebra& L, Enveloping& E, LeeCase c, const Root& alpha, const Root& beta,
                       const std::vector<ABSpec>& placed) {
  UEElement xa = E.root_vector(alpha);
  std::string fam = "A_{" + label(beta) + "}";
  for (unsigned k : {2u, 3u}) {
    ABSpec s = make_power(c, alpha, beta, beta, k, fam);
    s.marker = k == 2 ? Marker::Square : Marker::Cube;
    if (E.commutator(xa, expand(s, E, {})).is_zero()) return s;
  }
  for (const ABSpec& src : placed) {
    if (src.target != -beta || src.shape != Shape::PrefactorParen || src.marker != Marker::None) continue;
    const RootSystem& rs = L.root_system();
    std::optional<Root> best;
    for (const Root& g : rs.roots()) {
      if (!commutes_in_lie(L, alpha, g)) continue;
      if (!best || (g - beta).norm2() < (*best - beta).norm2()) best = g;
    }
    if (!best) break;
    ABSpec s = src;
    s.target = beta;
    s.prefactor = *best;
    s.power = 2;
    s.family = fam;
    s.constant = "c(" + label(beta) + ")";
    s.marker = Marker::Borrowed;
    s.note = "parenthesis of A_{" + label(-beta) + "} with a commuting prefactor";
    s.weight = 2 * *best;
    std::string inner = src.printed.substr(src.printed.find(" (") + 2);
    inner = inner.substr(inner.find(' '));
    s.printed = xlabel(*best) + "^2 (" + s.constant + inner;
    return s;
  }
  ABSpec s = make_power(c, alpha, beta, beta, 2, fam);
  s.marker = Marker::Uncovered;
  s.note = "no power of x_beta commutes with x_alpha and A_{-beta} has no parenthesis";
  return s;
}

inline std::vector<ABSpec> place(const LieAlgebra& L, Enveloping& E, LeeCase c, const Root& alpha,
                                 std::vector<ABSpec> templates) {
  const RootSystem& rs = L.root_system();
  std::vector<ABSpec> slots;
  std::vector<ABSpec> extra;
  std::vector<Root> order = slot_order(rs, c);
  std::vector<bool> used(templates.size(), false);
  std::vector<Root> pending;
  for (const Root& r : order) {
    bool found = false;
    for (std::size_t i = 0; i < templates.size() && !found; ++i)
      if (!used[i] && templates[i].role == Role::Slot && templates[i].target == r) {
        used[i] = true;
        slots.push_back(templates[i]);
        found = true;
      }
    if (!found) {
      slots.push_back(ABSpec{});
      pending.push_back(r);
    }
  }
  std::size_t pi = 0;
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (slots[i].printed.empty()) slots[i] = fallback(L, E, c, alpha, pending[pi++], slots);
  for (std::size_t i = 0; i < templates.size(); ++i) {
    if (used[i]) continue;
    if (templates[i].role == Role::Slot) templates[i].role = Role::Alternate;
    extra.push_back(templates[i]);
  }
  slots.insert(slots.end(), extra.begin(), extra.end());
  return slots;
}

}  // namespace detail

/// Short-root case, alpha = e1. Slots first (in product order), then alternates, variants and
/// unplaced templates.
inline std::vector<ABSpec> build_case_I(const LieAlgebra& L, Enveloping& E) {
  detail::require_type_b(L);
  const RootSystem& rs = L.root_system();
  const int l = rs.rank();
  detail::TemplateSpace ts{rs, std::max(l, 3) + 1};
  auto e = [&](int i) { return ts.e(i); };
  const Root alpha = eps(rs.ambient_dim(), 1);
  const LeeCase C = LeeCase::I;
  std::vector<ABSpec> t;
  t.push_back(detail::make_power(C, alpha, alpha, alpha, 1, "A_{e1}"));
  t.push_back(detail::make_casimir(C, alpha));
  if (rs.family() == Family::B) {
    for (int s : {1, -1}) {
      Root pe2 = s * e(2);
      t.push_back(detail::make_paren(ts, C, alpha,
                                     {-e(1) + pe2, e(1) + pe2, 1, label(-e(1) + pe2),
                                      {{-e(1) + pe2, -(-e(1) + pe2)}, {pe2, -pe2}, {e(1) + pe2, -(e(1) + pe2)}},
                                      "A_{-e1±e2}"}));
    }
    for (int j = 3; j <= l; ++j)
      for (int s : {1, -1}) {
        Root pj = s * e(j);
        detail::RawParen raw{-e(1) + pj, -e(2) + pj, 1, label(e(1) + pj),
                             {{pj - e(1), -(pj - e(1))}, {pj, -pj}, {e(1) + pj, -(e(1) + pj)}},
                             "A_{-e1±e_j}"};
        t.push_back(detail::make_paren(ts, C, alpha, raw));
        for (const Root& pre : {e(1) + pj, e(2) + pj}) {
          detail::RawParen var = raw;
          var.prefactor = pre;
          ABSpec v = detail::make_paren(ts, C, alpha, var);
          v.role = Role::Variant;
          v.note = "prefactor " + detail::xlabel(pre) + " in place of the printed " + detail::xlabel(raw.prefactor);
          t.push_back(v);
        }
      }
    for (int s : {1, -1}) {
      Root pe2 = s * e(2);
      t.push_back(detail::make_paren(
          ts, C, alpha,
          {pe2, e(3) + pe2, 2, label(pe2),
           {{e(2), -e(2)}, {e(1) + e(2), -(e(1) + e(2))}, {e(2) - e(1), e(1) - e(2)}},
           "A_{±e2}"}));
    }
    for (int j = 3; j <= l; ++j) {
      t.push_back(detail::make_paren(
          ts, C, alpha,
          {e(j), e(2) + e(j), 1, label(e(j)),
           {{e(j), -e(j)}, {e(1) + e(j), -(e(1) + e(j))}, {e(j) - e(1), e(1) - e(j)}},
           "A_{e_j}"}));
      t.push_back(detail::make_paren(
          ts, C, alpha,
          {-e(j), e(2) - e(j), 1, label(-e(j)),
           {{-e(j), e(j)}, {e(1) - e(j), -(e(1) - e(j))}, {-e(j) - e(1), e(1) + e(j)}},
           "A_{-e_j}"}));
    }
  }
  return detail::place(L, E, C, alpha, std::move(t));
}

/// Long-root case, alpha = e1 - e2.
inline std::vector<ABSpec> build_case_II(const LieAlgebra& L, Enveloping& E) {
  detail::require_type_b(L);
  const RootSystem& rs = L.root_system();
  if (rs.family() != Family::B)
    throw Error(Errc::UnsupportedRank, "the long-root case needs type B of rank >= 2");
  const int l = rs.rank();
  const int d = rs.ambient_dim();
  detail::TemplateSpace ts{rs, std::max(l, 3) + 1};
  auto e = [&](int i) { return ts.e(i); };
  const Root alpha = eps(d, 1) - eps(d, 2);
  const LeeCase C = LeeCase::II;
  std::vector<ABSpec> t;
  t.push_back(detail::make_power(C, alpha, alpha, alpha, 1, "A_{e1-e2}"));
  t.push_back(detail::make_casimir(C, alpha));
  // A_{e_l} and A_{-e_l} come first among the templates so that at rank 2 they take the e2
  // slot and the A_{e2} template is kept as an alternate.
  t.push_back(detail::make_power(C, alpha, eps(d, l), eps(d, l), 2, "A_{e_l}"));
  t.push_back(detail::make_power(C, alpha, -eps(d, l), -eps(d, l), 2, "A_{-e_l}"));
  for (int s : {1, -1}) {
    Root p3 = s * e(3);
    t.push_back(detail::make_paren(
        ts, C, alpha,
        {e(2) + p3, p3, 1, label(e(2) + p3), {{e(2) + p3, -(e(2) + p3)}, {e(1) + p3, -(e(1) + p3)}}, "A_{e2±e3}"}));
  }
  for (int k = 4; k <= l; ++k)
    for (int s : {1, -1}) {
      Root pk = s * e(k);
      t.push_back(detail::make_paren(
          ts, C, alpha,
          {e(2) + pk, e(3) + pk, 1, label(e(2) + pk), {{e(2) + pk, -(e(2) + pk)}, {e(1) + pk, -(e(1) + pk)}},
           "A_{e2±e_k}"}));
    }
  t.push_back(detail::make_paren(ts, C, alpha,
                                 {e(2), e(1), 1, label(e(2)), {{e(2), -e(2)}, {e(1), -e(1)}}, "A_{e2}"}));
  t.push_back(detail::make_paren(ts, C, alpha,
                                 {-e(1), -e(2), 1, label(-e(1)), {{-e(1), e(1)}, {-e(2), e(2)}}, "A_{-e1}"}));
  for (int s : {1, -1}) {
    Root p3 = s * e(3);
    t.push_back(detail::make_paren(ts, C, alpha,
                                   {-(e(1) + p3), -p3, 1, label(-(e(1) + p3)),
                                    {{e(2) + p3, -(e(2) + p3)}, {e(1) + p3, -(e(1) + p3)}},
                                    "A_{-(e1±e3)}"}));
  }
  for (int k = 4; k <= l; ++k)
    for (int s : {1, -1}) {
      Root pk = s * e(k);
      t.push_back(detail::make_paren(ts, C, alpha,
                                     {-(e(1) + pk), -(e(3) + pk), 1, label(-(e(1) + pk)),
                                      {{e(2) + pk, -(e(2) + pk)}, {e(1) + pk, -(e(1) + pk)}},
                                      "A_{-(e1±e_k)}"}));
    }
  return detail::place(L, E, C, alpha, std::move(t));
}

inline std::vector<ABSpec> build_case(const LieAlgebra& L, Enveloping& E, LeeCase c) {
  return c == LeeCase::I ? build_case_I(L, E) : build_case_II(L, E);
}

inline std::vector<ABSpec> slot_specs(const std::vector<ABSpec>& specs) {
  std::vector<ABSpec> out;
  for (const auto& s : specs)
    if (s.role == Role::Slot) out.push_back(s);
  return out;
}

// B_i coefficient family.

struct BiFamily {
  Root alpha;
  std::int64_t p = 0;
  std::vector<std::vector<Coeff>> vectors;
  /// Moment-curve parameters (empty when the greedy search was used).
  std::vector<Coeff> params;
  std::vector<Coeff> alpha_values;
  std::string method;
  std::size_t subsets_checked = 0;
};

/// alpha(B) for B = sum b_j h_j over the simple coroots.
inline Coeff alpha_value(const LieAlgebra& L, const Root& alpha, const std::vector<Coeff>& b) {
  const auto& base = L.root_system().base();
  Coeff s = 0;
  for (std::size_t j = 0; j < base.size(); ++j) s = L.field().add(s, L.field().mul(b[j], L.field().reduce(cartan_integer(alpha, base[j]))));
  return s;
}

namespace detail {

template <class F>
inline bool for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return true;
  while (true) {
    if (!f(idx)) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline void seeded_shuffle(std::vector<Coeff>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

}  // namespace detail

/// Every min(l, n)-subset of the vectors is linearly independent over F_p. Counts the subsets.
inline bool general_position(const std::vector<std::vector<Coeff>>& vs, std::size_t l, const Field& F,
                             std::size_t* checked = nullptr) {
  std::size_t k = std::min(l, vs.size());
  std::size_t count = 0;
  bool ok = detail::for_each_subset(vs.size(), k, [&](const std::vector<std::size_t>& idx) {
    ++count;
    DenseEchelon ech(l, F);
    for (auto i : idx)
      if (!ech.insert(vs[i])) return false;
    return true;
  });
  if (checked) *checked = count;
  return ok;
}

inline BiFamily gen_Bi(const LieAlgebra& L, const Root& alpha, std::size_t count, std::uint64_t seed) {
  require_modular(L);
  const Field& F = L.field();
  const std::size_t l = L.rank();
  BiFamily fam;
  fam.alpha = alpha;
  fam.p = F.p;
  auto curve = [&](Coeff t) {
    std::vector<Coeff> v(l);
    Coeff x = 1;
    for (std::size_t j = 0; j < l; ++j) {
      v[j] = x;
      x = F.mul(x, t);
    }
    return v;
  };
  std::vector<Coeff> admissible;
  for (Coeff t = l == 1 ? 1 : 0; t < F.p; ++t)
    if (alpha_value(L, alpha, l == 1 ? std::vector<Coeff>{t} : curve(t))) admissible.push_back(t);
  detail::seeded_shuffle(admissible, seed);
  if (admissible.size() >= count) {
    fam.method = "moment-curve";
    for (std::size_t i = 0; i < count; ++i) {
      fam.params.push_back(admissible[i]);
      fam.vectors.push_back(l == 1 ? std::vector<Coeff>{admissible[i]} : curve(admissible[i]));
    }
  } else {
    fam.method = "greedy-search";
    std::vector<Coeff> order;
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < l; ++j) total *= static_cast<std::uint64_t>(F.p);
    for (std::uint64_t code = 1; code < total; ++code) order.push_back(static_cast<Coeff>(code));
    detail::seeded_shuffle(order, seed);
    for (Coeff code : order) {
      if (fam.vectors.size() == count) break;
      std::vector<Coeff> v(l);
      std::uint64_t c = static_cast<std::uint64_t>(code);
      for (std::size_t j = 0; j < l; ++j) {
        v[j] = static_cast<Coeff>(c % static_cast<std::uint64_t>(F.p));
        c /= static_cast<std::uint64_t>(F.p);
      }
      if (!alpha_value(L, alpha, v)) continue;
      fam.vectors.push_back(v);
      if (!general_position(fam.vectors, l, F)) fam.vectors.pop_back();
    }
    if (fam.vectors.size() < count)
      throw Error(Errc::ExhaustedField, "found only " + std::to_string(fam.vectors.size()) + " of " +
                                            std::to_string(count) + " vectors in general position over F_" +
                                            std::to_string(F.p) + " with alpha(B) != 0");
  }
  if (!general_position(fam.vectors, l, F, &fam.subsets_checked))
    throw Error(Errc::Internal, "B_i family failed its general-position check");
  for (const auto& v : fam.vectors) {
    fam.alpha_values.push_back(alpha_value(L, alpha, v));
    if (!fam.alpha_values.back()) throw Error(Errc::Internal, "B_i family has alpha(B) = 0");
  }
  return fam;
}

inline LieElement bi_element(const LieAlgebra& L, const std::vector<Coeff>& b) {
  LieElement h = L.zero();
  for (std::size_t j = 0; j < b.size(); ++j) h.add_term(L.index_of_coroot(static_cast<int>(j)), b[j]);
  return h;
}

// Assembly.

struct LeePair {
  Root target;
  UEElement B;
  UEElement A;
};

struct LeeCandidate {
  std::vector<LeePair> pairs;
  std::int64_t p = 0;

  /// Number of exponent tuples 0 <= i_j <= p-1, i.e. p^{|pairs|}.
  std::string monomial_count() const {
    boost::multiprecision::cpp_int n = 1;
    for (std::size_t i = 0; i < pairs.size(); ++i) n *= p;
    return n.str();
  }

  UEElement element(const std::vector<unsigned>& exps, Enveloping& E) const {
    if (exps.size() != pairs.size()) throw Error(Errc::ArityMismatch, "exponent tuple length");
    UEElement u = E.one();
    for (std::size_t j = 0; j < pairs.size(); ++j)
      if (exps[j]) u = E.multiply(u, E.power(pairs[j].B + pairs[j].A, exps[j]));
    return u;
  }
};

/// Strict: every spec must be Solved. AsPrinted: a NoSolution spec enters with its all-plus
/// assignment, for independence experiments on the formulas exactly as written.
enum class AssemblePolicy { Strict, AsPrinted };

/// Pairs (B_i, A_i) in slot order, using each verdict's chosen signs and the constants cs.
inline LeeCandidate assemble(const std::vector<ABSpec>& specs, const BiFamily& bi,
                             const std::vector<SignVerdict>& verdicts, const std::vector<Coeff>& cs,
                             Enveloping& E, AssemblePolicy policy = AssemblePolicy::Strict) {
  if (specs.size() != bi.vectors.size() || specs.size() != verdicts.size() || specs.size() != cs.size())
    throw Error(Errc::ArityMismatch, std::to_string(specs.size()) + " specs, " + std::to_string(bi.vectors.size()) +
                                         " B_i vectors, " + std::to_string(verdicts.size()) + " verdicts");
  LeeCandidate cand;
  cand.p = E.field().p;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const SignVerdict& v = verdicts[i];
    bool usable = v.solved() || (policy == AssemblePolicy::AsPrinted && v.status == SignVerdict::Status::NoSolution);
    if (!usable) throw Error(Errc::UnsolvedSpec, specs[i].family + " for " + label(specs[i].target));
    const std::vector<int>& signs = v.solved() ? v.signs() : v.assignments.front();
    cand.pairs.push_back({specs[i].target, E.from_lie(bi_element(E.algebra(), bi.vectors[i])),
                          expand(specs[i], E, signs, cs[i])});
  }
  return cand;
}

/// Exponent tuples with sum <= bound, ordered by total degree, then lexicographically descending.
inline std::vector<std::vector<unsigned>> truncated_tuples(std::size_t n, unsigned bound, std::int64_t p) {
  std::vector<std::vector<unsigned>> out;
  for (unsigned deg = 0; deg <= bound; ++deg) {
    std::vector<std::vector<unsigned>> level;
    std::vector<unsigned> cur(n, 0);
    auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
      if (i == n) {
        if (!left) level.push_back(cur);
        return;
      }
      for (unsigned e = std::min<unsigned>(left, static_cast<unsigned>(p - 1)) + 1; e-- > 0;) {
        cur[i] = e;
        self(self, i + 1, left - e);
      }
      cur[i] = 0;
    };
    if (n == 0) {
      if (deg == 0) level.push_back({});
    } else {
      rec(rec, 0, deg);
    }
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

struct IndependenceReport {
  unsigned bound = 0;
  std::size_t count = 0;
  std::size_t rank = 0;
  std::size_t permuted_rank = 0;
  std::uint64_t permutation_seed = 0;
  bool distinct_normal_forms = true;
  std::vector<std::pair<std::size_t, std::size_t>> equal_pairs;
  std::vector<std::vector<unsigned>> tuples;
  /// Dependencies among the evaluated elements (indices into tuples), when rank < count.
  std::vector<SparseVec> dependencies;
};

inline IndependenceReport verify_independence_truncated(const LeeCandidate& cand, const MatrixRep& rep,
                                                        unsigned bound, Enveloping& E, std::uint64_t seed = 1) {
  check_same(rep.algebra, E.algebra().id());
  IndependenceReport r;
  r.bound = bound;
  r.permutation_seed = seed;
  r.tuples = truncated_tuples(cand.pairs.size(), bound, cand.p);
  r.count = r.tuples.size();
  std::vector<UEElement> symbolic;
  for (const auto& t : r.tuples) symbolic.push_back(cand.element(t, E));
  for (std::size_t a = 0; a < symbolic.size(); ++a)
    for (std::size_t b = a + 1; b < symbolic.size(); ++b)
      if (symbolic[a] == symbolic[b]) {
        r.distinct_normal_forms = false;
        r.equal_pairs.emplace_back(a, b);
      }
  std::vector<SparseMatrix> factors;
  for (const auto& pr : cand.pairs) factors.push_back(evaluate(pr.B + pr.A, rep));
  std::vector<SparseVec> images;
  for (const auto& t : r.tuples) {
    SparseMatrix m = SparseMatrix::identity(rep.dim, rep.field);
    for (std::size_t j = 0; j < t.size(); ++j)
      for (unsigned e = 0; e < t[j]; ++e) m = m * factors[j];
    images.push_back(m.vectorize());
  }
  SparseEchelon ech(rep.field, true);
  for (const auto& v : images)
    if (!ech.insert(v)) r.dependencies.push_back(ech.last_dependency());
  r.rank = ech.rank();
  std::vector<Coeff> perm(images.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<Coeff>(i);
  detail::seeded_shuffle(perm, seed);
  SparseEchelon ech2(rep.field);
  for (Coeff i : perm) ech2.insert(images[static_cast<std::size_t>(i)]);
  r.permuted_rank = ech2.rank();
  return r;
}

struct InvertibilityScan {
  Root target;
  std::string family;
  /// Values of c for which the parenthesis (or the Casimir-shaped element) is singular.
  std::vector<Coeff> singular;
};

/// Scans c over F_p for the element c + P0, where P0 is the parenthesis at c = 0.
inline InvertibilityScan invertibility_scan(const ABSpec& s, const std::vector<int>& signs, const MatrixRep& rep,
                                            Enveloping& E) {
  InvertibilityScan scan;
  scan.target = s.target;
  scan.family = s.family;
  SparseMatrix p0 = evaluate(expand_paren(s, E, signs, 0), rep);
  for (Coeff c = 0; c < rep.field.p; ++c) {
    SparseMatrix m = linear_combination(p0, 1, SparseMatrix::identity(rep.dim, rep.field), c);
    if (rank(m) < rep.dim) scan.singular.push_back(c);
  }
  return scan;
}

/// Smallest c in F_p making the parenthesis invertible in rep (0 when none does).
inline Coeff choose_constant(const InvertibilityScan& scan, std::int64_t p) {
  for (Coeff c = 0; c < p; ++c)
    if (std::find(scan.singular.begin(), scan.singular.end(), c) == scan.singular.end()) return c;
  return 0;
}

struct LeeConditionReport {
  std::size_t rep_dim = 0;
  std::string expected_dim;
  bool dim_matches = false;
  std::string algebra_dim;
  IrreducibilityVerdict irreducibility;
  bool condition_i_established = false;
  IndependenceReport independence;
  std::vector<InvertibilityScan> invertibility;
};

inline LeeConditionReport check_lee_conditions(const LeeCandidate& cand, const std::vector<ABSpec>& specs,
                                               const std::vector<SignVerdict>& verdicts, const MatrixRep& rep,
                                               Enveloping& E, unsigned bound,
                                               const IrreducibilityOptions& opt = {}) {
  LeeConditionReport r;
  const LieAlgebra& L = E.algebra();
  r.rep_dim = rep.dim;
  boost::multiprecision::cpp_int pm = 1;
  for (std::size_t i = 0; i < L.num_positive(); ++i) pm *= L.field().p;
  r.expected_dim = pm.str();
  r.dim_matches = pm == rep.dim;
  r.algebra_dim = boost::multiprecision::cpp_int(pm * pm).str();
  r.irreducibility = is_irreducible(rep, opt);
  r.condition_i_established = r.dim_matches && r.irreducibility.kind == IrreducibilityVerdict::Kind::Irreducible;
  r.independence = verify_independence_truncated(cand, rep, bound, E, opt.seed);
  for (std::size_t i = 0; i < specs.size() && i < verdicts.size(); ++i)
    if (verdicts[i].solved() && (specs[i].shape == Shape::Casimir || specs[i].shape == Shape::PrefactorParen))
      r.invertibility.push_back(invertibility_scan(specs[i], verdicts[i].signs(), rep, E));
  return r;
}

}  // namespace modlie
