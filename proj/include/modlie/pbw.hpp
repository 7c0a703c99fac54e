#pragma once

// Exact arithmetic in the universal enveloping algebra U(L) in PBW normal form.
//
// Monomials are exponent vectors over the ordered Chevalley basis
// (negative root vectors < coroots < positive root vectors). Products are
// straightened one generator at a time: for a monomial u*x_k with k > j,
//   u x_k x_j = (u x_j) x_k + u [x_k, x_j],
// where the correction has strictly smaller degree and the main term has fewer
// inversions, so the rewriting terminates. Rewrites of (monomial, generator) pairs
// are memoized per engine.

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "modlie/chevalley.hpp"
#include "modlie/error.hpp"
#include "modlie/field.hpp"
#include "modlie/roots.hpp"

namespace modlie {

using Monomial = std::vector<std::uint16_t>;

inline unsigned degree(const Monomial& m) {
  unsigned d = 0;
  for (auto e : m) d += e;
  return d;
}

/// Printing order: higher total degree first, then lexicographically larger exponent vector first.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = degree(a), db = degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto e : m) {
      h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Element of U(L): sparse map from PBW monomials to coefficients, no zero entries.
struct UEElement {
  std::uint64_t algebra = 0;
  Field field;
  std::map<Monomial, Coeff, MonomialOrder> terms;

  bool is_zero() const { return terms.empty(); }

  void add_term(const Monomial& m, Coeff c) {
    c = field.reduce(c);
    if (!c) return;
    auto [it, fresh] = terms.emplace(m, c);
    if (fresh) return;
    it->second = field.add(it->second, c);
    if (!it->second) terms.erase(it);
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms) d = std::max(d, modlie::degree(m));
    return d;
  }

  friend bool operator==(const UEElement& a, const UEElement& b) {
    return a.algebra == b.algebra && a.terms == b.terms;
  }
};

inline UEElement operator+(UEElement a, const UEElement& b) {
  check_same(a.algebra, b.algebra);
  for (const auto& [m, c] : b.terms) a.add_term(m, c);
  return a;
}

inline UEElement scaled(const UEElement& a, Coeff s) {
  UEElement out{a.algebra, a.field, {}};
  s = a.field.reduce(s);
  for (const auto& [m, c] : a.terms) out.add_term(m, a.field.mul(c, s));
  return out;
}

inline UEElement operator-(UEElement a, const UEElement& b) { return a + scaled(b, -1); }

/// Result of weight(): the common weight of all monomials, if any.
struct WeightResult {
  enum class Kind { Zero, Homogeneous, NonHomogeneous };
  Kind kind = Kind::Zero;
  Root weight;

  bool homogeneous() const { return kind == Kind::Homogeneous; }
};

/// Multiplication context for U(L). Holds a rewrite memo, so one engine should not be
/// shared between threads; create one per thread instead.
class Enveloping {
 public:
  explicit Enveloping(const LieAlgebra& L) : L_(&L) {}

  const LieAlgebra& algebra() const { return *L_; }
  const Field& field() const { return L_->field(); }
  std::size_t memo_size() const { return memo_.size(); }

  UEElement zero() const { return UEElement{L_->id(), L_->field(), {}}; }
  UEElement scalar(Coeff c) const {
    UEElement u = zero();
    u.add_term(Monomial(L_->dim(), 0), c);
    return u;
  }
  UEElement one() const { return scalar(1); }
  UEElement monomial(const Monomial& m, Coeff c = 1) const {
    if (m.size() != L_->dim()) throw Error(Errc::Internal, "monomial length mismatch");
    UEElement u = zero();
    u.add_term(m, c);
    return u;
  }
  UEElement generator(std::size_t i) const {
    Monomial m(L_->dim(), 0);
    m.at(i) = 1;
    return monomial(m);
  }
  UEElement root_vector(const Root& r) const { return generator(L_->index_of_root(r)); }
  UEElement from_lie(const LieElement& x) const {
    check_same(x.algebra, L_->id());
    UEElement u = zero();
    for (auto [i, c] : x.terms) {
      Monomial m(L_->dim(), 0);
      m[i] = 1;
      u.add_term(m, c);
    }
    return u;
  }

  UEElement multiply(const UEElement& u, const UEElement& v) {
    check_same(u.algebra, L_->id());
    check_same(v.algebra, L_->id());
    const Field& F = field();
    Acc result;
    for (const auto& [mv, cv] : v.terms) {
      Acc cur;
      for (const auto& [mu, cu] : u.terms) acc_add(cur, mu, F.mul(cu, cv));
      for (std::size_t g = 0; g < mv.size(); ++g)
        for (unsigned e = 0; e < mv[g]; ++e) {
          Acc next;
          for (const auto& [t, c] : cur) mul_gen(t, g, c, next);
          cur = std::move(next);
        }
      for (const auto& [t, c] : cur) acc_add(result, t, c);
    }
    return to_element(result);
  }

  UEElement power(const UEElement& u, unsigned k) {
    UEElement r = one();
    for (unsigned i = 0; i < k; ++i) r = multiply(r, u);
    return r;
  }

  UEElement commutator(const UEElement& u, const UEElement& v) { return multiply(u, v) - multiply(v, u); }

  /// Central iff it commutes with every basis element of L (these generate U(L)).
  bool is_central(const UEElement& u) {
    for (std::size_t g = 0; g < L_->dim(); ++g)
      if (!commutator(generator(g), u).is_zero()) return false;
    return true;
  }

  WeightResult weight(const UEElement& u) const {
    WeightResult r;
    for (const auto& [m, c] : u.terms) {
      Root w(std::vector<int>(L_->root_system().ambient_dim(), 0));
      for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] && !L_->is_coroot(i)) w += static_cast<int>(m[i]) * L_->basis(i).root;
      if (r.kind == WeightResult::Kind::Zero) {
        r.kind = WeightResult::Kind::Homogeneous;
        r.weight = w;
      } else if (r.weight != w) {
        r.kind = WeightResult::Kind::NonHomogeneous;
        return r;
      }
    }
    return r;
  }

  /// Deterministic text form, e.g. "x(-e1) x(+e1) + h(e1)" or "2 x(-e1)^2 - 3".
  std::string to_string(const UEElement& u) const {
    if (u.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : u.terms) {
      std::int64_t v = field().balanced(c);
      bool neg = v < 0;
      std::int64_t a = neg ? -v : v;
      if (first) out += neg ? "-" : "";
      else out += neg ? " - " : " + ";
      first = false;
      std::string mono = monomial_string(m);
      if (mono.empty()) out += std::to_string(a);
      else if (a == 1) out += mono;
      else out += std::to_string(a) + " " + mono;
    }
    return out;
  }

  std::string monomial_string(const Monomial& m) const {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      if (!out.empty()) out += ' ';
      out += L_->basis(i).label;
      if (m[i] > 1) out += "^" + std::to_string(m[i]);
    }
    return out;
  }

 private:
  using Acc = std::unordered_map<Monomial, Coeff, MonomialHash>;
  using Terms = std::vector<std::pair<Monomial, Coeff>>;

  void acc_add(Acc& acc, const Monomial& m, Coeff c) const {
    if (!c) return;
    auto [it, fresh] = acc.emplace(m, c);
    if (fresh) return;
    it->second = field().add(it->second, c);
    if (!it->second) acc.erase(it);
  }

  UEElement to_element(const Acc& acc) const {
    UEElement u = zero();
    for (const auto& [m, c] : acc) u.terms.emplace(m, c);
    return u;
  }

  // acc += c * (m x_j), in normal form.
  void mul_gen(const Monomial& m, std::size_t j, Coeff c, Acc& acc) {
    std::size_t k = m.size();
    while (k > 0 && m[k - 1] == 0) --k;
    if (k == 0 || k - 1 <= j) {
      Monomial out = m;
      ++out[j];
      acc_add(acc, out, c);
      return;
    }
    const Terms& r = straighten(m, j, k - 1);
    const Field& F = field();
    for (const auto& [t, ct] : r) acc_add(acc, t, F.mul(c, ct));
  }

  // Normal form of m x_j where k = max index of m exceeds j.
  const Terms& straighten(const Monomial& m, std::size_t j, std::size_t k) {
    Monomial key = m;
    key.push_back(static_cast<std::uint16_t>(j));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    Monomial u = m;
    --u[k];
    Acc head;
    mul_gen(u, j, 1, head);
    Acc res;
    for (const auto& [t, ct] : head) mul_gen(t, k, ct, res);
    for (auto [idx, b] : L_->bracket_basis(k, j)) mul_gen(u, idx, b, res);
    Terms out(res.begin(), res.end());
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  const LieAlgebra* L_;
  std::unordered_map<Monomial, Terms, MonomialHash> memo_;
};

}  // namespace modlie
