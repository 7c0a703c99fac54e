#pragma once

// Expression language for Lie and enveloping-algebra terms.
//
//   element := ('+'|'-')? term (('+'|'-') term)*
//   term    := factor ('*'? factor)*
//   factor  := atom ('^' nat)?
//   atom    := 'x(' roots ')' | 'h(' roots ')' | 'h(' nat ')' | int
//            | '[' element ',' element ']' | '(' element ')'
//   roots   := ('+'|'-')? nat? 'e' nat (('+'|'-') nat? 'e' nat)*
//
// Juxtaposition multiplies. Parentheses are not kept in the tree; the printer re-inserts
// them from precedence, so parse(print(e)) == e.

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "modlie/chevalley.hpp"
#include "modlie/error.hpp"
#include "modlie/pbw.hpp"
#include "modlie/roots.hpp"

namespace modlie {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Int, X, H, HIndex, Neg, Add, Sub, Mul, Pow, Bracket };
  Kind kind = Kind::Int;
  std::int64_t value = 0;  // Int literal, Pow exponent, HIndex index
  /// (epsilon index, coefficient) with nonzero coefficients, sorted by index.
  std::vector<std::pair<int, int>> root;
  ExprPtr lhs, rhs;
  int line = 1, column = 1;

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.value != b.value || a.root != b.root) return false;
    auto same = [](const ExprPtr& x, const ExprPtr& y) { return (!x && !y) || (x && y && *x == *y); };
    return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
  }
};

namespace expr {

inline ExprPtr make(Expr::Kind k, ExprPtr l = nullptr, ExprPtr r = nullptr, std::int64_t v = 0) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  e->value = v;
  return e;
}

inline ExprPtr integer(std::int64_t v) { return make(Expr::Kind::Int, nullptr, nullptr, v); }

inline ExprPtr root_atom(Expr::Kind k, std::vector<std::pair<int, int>> coords) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->root = std::move(coords);
  return e;
}

inline std::vector<std::pair<int, int>> coords_of(const Root& r) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < r.size(); ++i)
    if (r.coords[i]) out.emplace_back(i + 1, r.coords[i]);
  return out;
}

inline std::string root_text(const std::vector<std::pair<int, int>>& coords, bool plus_first) {
  std::string out;
  for (auto [i, c] : coords) {
    if (c < 0) out += '-';
    else if (plus_first || !out.empty()) out += '+';
    if (std::abs(c) != 1) out += std::to_string(std::abs(c));
    out += "e" + std::to_string(i);
  }
  return out;
}

}  // namespace expr

namespace detail {

// Precedence: 1 sum, 2 product, 3 power, 4 atom.
inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Neg: return 1;
    case Expr::Kind::Mul: return 2;
    case Expr::Kind::Pow: return 3;
    default: return 4;
  }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  using K = Expr::Kind;
  auto wrap = [](const Expr& sub, int min_prec) {
    std::string s = to_string(sub);
    return detail::precedence(sub) < min_prec ? "(" + s + ")" : s;
  };
  switch (e.kind) {
    case K::Int: return std::to_string(e.value);
    case K::X: return "x(" + expr::root_text(e.root, true) + ")";
    case K::H: return "h(" + expr::root_text(e.root, false) + ")";
    case K::HIndex: return "h(" + std::to_string(e.value) + ")";
    case K::Neg: return "-" + wrap(*e.lhs, 2);
    // A Neg on the left of a sum is printed bare; anywhere else it needs parentheses.
    case K::Add: return wrap(*e.lhs, 1) + " + " + wrap(*e.rhs, 2);
    case K::Sub: return wrap(*e.lhs, 1) + " - " + wrap(*e.rhs, 2);
    case K::Mul: return wrap(*e.lhs, 2) + " " + wrap(*e.rhs, 3);
    case K::Pow: return wrap(*e.lhs, 4) + "^" + std::to_string(e.value);
    case K::Bracket: return "[" + to_string(*e.lhs) + ", " + to_string(*e.rhs) + "]";
  }
  return "";
}

class Parser {
 public:
  /// With rs set, root atoms are checked against the system (UnknownRoot otherwise).
  explicit Parser(std::string text, const RootSystem* rs = nullptr) : s_(std::move(text)), rs_(rs) {}

  ExprPtr parse() {
    ExprPtr e = element();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }

  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    auto [line, col] = where(at);
    throw Error(Errc::SyntaxError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }

  std::pair<int, int> where(std::size_t at) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c, std::size_t opened) {
    if (!peek(c)) {
      if (pos_ >= s_.size()) fail_at(opened, std::string("unclosed '") + s_[opened] + "'");
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  ExprPtr located(ExprPtr e, std::size_t at) const {
    auto [line, col] = where(at);
    auto m = std::const_pointer_cast<Expr>(e);
    m->line = line;
    m->column = col;
    return e;
  }

  ExprPtr element() {
    skip();
    std::size_t start = pos_;
    ExprPtr e;
    if (peek('-')) {
      ++pos_;
      e = located(expr::make(Expr::Kind::Neg, term()), start);
    } else {
      if (peek('+')) ++pos_;
      e = term();
    }
    while (true) {
      skip();
      std::size_t at = pos_;
      if (peek('+')) {
        ++pos_;
        e = located(expr::make(Expr::Kind::Add, e, term()), at);
      } else if (peek('-')) {
        ++pos_;
        e = located(expr::make(Expr::Kind::Sub, e, term()), at);
      } else {
        return e;
      }
    }
  }

  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'x' || c == 'h' || c == '(' || c == '[';
  }

  ExprPtr term() {
    skip();
    std::size_t at = pos_;
    ExprPtr e = factor();
    while (true) {
      if (peek('*')) {
        ++pos_;
        e = located(expr::make(Expr::Kind::Mul, e, factor()), at);
      } else if (starts_factor()) {
        e = located(expr::make(Expr::Kind::Mul, e, factor()), at);
      } else {
        return e;
      }
    }
  }

  ExprPtr factor() {
    skip();
    std::size_t at = pos_;
    ExprPtr a = atom();
    if (peek('^')) {
      ++pos_;
      skip();
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected exponent");
      return located(expr::make(Expr::Kind::Pow, a, nullptr, natural()), at);
    }
    return a;
  }

  std::int64_t natural() {
    std::size_t start = pos_;
    std::int64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      if (v > (INT64_MAX - 9) / 10) fail_at(start, "integer too large");
      v = v * 10 + (s_[pos_++] - '0');
    }
    if (pos_ == start) fail("expected a number");
    return v;
  }

  ExprPtr atom() {
    skip();
    std::size_t at = pos_;
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return located(expr::integer(natural()), at);
    if (c == '(') {
      ++pos_;
      ExprPtr e = element();
      expect(')', at);
      return e;
    }
    if (c == '[') {
      ++pos_;
      ExprPtr a = element();
      if (!peek(',')) fail("expected ','");
      ++pos_;
      ExprPtr b = element();
      expect(']', at);
      return located(expr::make(Expr::Kind::Bracket, a, b), at);
    }
    if ((c == 'x' || c == 'h') && pos_ + 1 < s_.size() && s_[pos_ + 1] == '(') {
      pos_ += 2;
      skip();
      if (c == 'h' && pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        std::size_t save = pos_;
        std::int64_t idx = natural();
        skip();
        if (pos_ < s_.size() && s_[pos_] == ')') {
          ++pos_;
          if (rs_ && (idx < 1 || idx > rs_->rank()))
            throw Error(Errc::UnknownRoot, "h(" + std::to_string(idx) + "): no such simple coroot in " + rs_->name());
          return located(expr::make(Expr::Kind::HIndex, nullptr, nullptr, idx), at);
        }
        pos_ = save;
      }
      auto coords = roots(at);
      expect(')', at + 1);
      ExprPtr e = located(expr::root_atom(c == 'x' ? Expr::Kind::X : Expr::Kind::H, coords), at);
      if (rs_) resolve_root(*e, *rs_);
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::vector<std::pair<int, int>> roots(std::size_t at) {
    std::map<int, int> acc;
    bool first = true;
    while (true) {
      skip();
      int sign = 1;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        break;
      }
      skip();
      int coef = 1;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) coef = static_cast<int>(natural());
      if (pos_ >= s_.size() || s_[pos_] != 'e') {
        if (pos_ >= s_.size()) fail_at(at + 1, "unclosed '('");
        fail("expected 'e'");
      }
      ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected an index after 'e'");
      int idx = static_cast<int>(natural());
      if (idx < 1) fail("epsilon indices start at 1");
      acc[idx] += sign * coef;
      first = false;
    }
    std::vector<std::pair<int, int>> out;
    for (auto [i, c] : acc)
      if (c) out.emplace_back(i, c);
    if (out.empty()) fail("zero root");
    return out;
  }

 public:
  /// Converts a root atom to a Root of rs (UnknownRoot if absent).
  static Root resolve_root(const Expr& e, const RootSystem& rs) {
    Root r(std::vector<int>(rs.ambient_dim(), 0));
    std::string text = expr::root_text(e.root, true);
    for (auto [i, c] : e.root) {
      if (i > rs.ambient_dim()) throw Error(Errc::UnknownRoot, text + " is not a root of " + rs.name());
      r.coords[i - 1] = c;
    }
    if (!rs.contains(r)) throw Error(Errc::UnknownRoot, text + " is not a root of " + rs.name());
    return r;
  }

 private:
  std::string s_;
  const RootSystem* rs_;
  std::size_t pos_ = 0;
};

inline ExprPtr parse(const std::string& text, const RootSystem* rs = nullptr) { return Parser(text, rs).parse(); }

/// Value of an expression in U(L).
inline UEElement eval(const Expr& e, Enveloping& E) {
  using K = Expr::Kind;
  const LieAlgebra& L = E.algebra();
  switch (e.kind) {
    case K::Int: return E.scalar(E.field().reduce(e.value));
    case K::X: return E.root_vector(Parser::resolve_root(e, L.root_system()));
    case K::H: return E.from_lie(L.coroot_expand(Parser::resolve_root(e, L.root_system())));
    case K::HIndex:
      if (e.value < 1 || e.value > static_cast<std::int64_t>(L.rank()))
        throw Error(Errc::UnknownRoot, "h(" + std::to_string(e.value) + ")");
      return E.generator(L.index_of_coroot(static_cast<int>(e.value - 1)));
    case K::Neg: return scaled(eval(*e.lhs, E), -1);
    case K::Add: return eval(*e.lhs, E) + eval(*e.rhs, E);
    case K::Sub: return eval(*e.lhs, E) - eval(*e.rhs, E);
    case K::Mul: return E.multiply(eval(*e.lhs, E), eval(*e.rhs, E));
    case K::Pow: return E.power(eval(*e.lhs, E), static_cast<unsigned>(e.value));
    case K::Bracket: return E.commutator(eval(*e.lhs, E), eval(*e.rhs, E));
  }
  return E.zero();
}

/// Basis index named by an atom: x(root) or a simple coroot h(...).
inline std::size_t basis_index(const Expr& e, const LieAlgebra& L) {
  const RootSystem& rs = L.root_system();
  if (e.kind == Expr::Kind::X) return L.index_of_root(Parser::resolve_root(e, rs));
  if (e.kind == Expr::Kind::HIndex) {
    if (e.value < 1 || e.value > rs.rank()) throw Error(Errc::UnknownRoot, "h(" + std::to_string(e.value) + ")");
    return L.index_of_coroot(static_cast<int>(e.value - 1));
  }
  if (e.kind == Expr::Kind::H) {
    Root r = Parser::resolve_root(e, rs);
    for (std::size_t i = 0; i < rs.base().size(); ++i)
      if (rs.base()[i] == r) return L.index_of_coroot(static_cast<int>(i));
    throw Error(Errc::Config, to_string(e) + " is not a simple coroot");
  }
  throw Error(Errc::Config, to_string(e) + " does not name a basis element");
}

}  // namespace modlie
