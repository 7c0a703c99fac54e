#pragma once

// Chevalley bases of the classical Lie algebras with exact structure constants.
//
// The basis is produced inside the natural matrix realization (sl_{l+1}, so_{2l+1},
// sp_{2l}, so_{2l}; A1 is realized as so_3 so that its root is e1). Simple root
// vectors e_i, f_i are normalized so that [e_i, f_i] = h_i with alpha_i(h_i) = 2.
// Every other positive root xi is reached through its extraspecial pair
// (alpha_i, xi - alpha_i) with i minimal, and e_xi = [e_i, e_{xi-alpha_i}] / (q + 1).
// Negative root vectors are built the same way and their sign is fixed by
// [e_xi, f_xi] = h_xi. Structure constants are then read off from matrix commutators.

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modlie/error.hpp"
#include "modlie/field.hpp"
#include "modlie/linalg.hpp"
#include "modlie/roots.hpp"

namespace modlie {

enum class BasisKind { Negative, Coroot, Positive };

struct BasisElement {
  BasisKind kind;
  Root root;        // root for root vectors; the simple root for coroots
  int coroot = -1;  // 0-based simple index for coroots
  std::string label;
};

using SparseTerms = std::vector<std::pair<std::size_t, Coeff>>;

/// Element of L as a sparse combination of basis indices. No zero coefficients are stored.
struct LieElement {
  std::uint64_t algebra = 0;
  Field field;
  std::map<std::size_t, Coeff> terms;

  bool is_zero() const { return terms.empty(); }
  Coeff coeff(std::size_t i) const {
    auto it = terms.find(i);
    return it == terms.end() ? 0 : it->second;
  }
  void add_term(std::size_t i, Coeff c) {
    c = field.reduce(c);
    if (!c) return;
    auto [it, fresh] = terms.emplace(i, c);
    if (fresh) return;
    it->second = field.add(it->second, c);
    if (!it->second) terms.erase(it);
  }
  friend bool operator==(const LieElement& a, const LieElement& b) {
    return a.algebra == b.algebra && a.terms == b.terms;
  }
};

inline void check_same(std::uint64_t a, std::uint64_t b) {
  if (a != b) throw Error(Errc::MixedAlgebras, "operands belong to different algebras");
}

inline LieElement operator+(LieElement a, const LieElement& b) {
  check_same(a.algebra, b.algebra);
  for (auto [i, c] : b.terms) a.add_term(i, c);
  return a;
}

inline LieElement scaled(LieElement a, Coeff s) {
  LieElement out{a.algebra, a.field, {}};
  for (auto [i, c] : a.terms) out.add_term(i, a.field.mul(c, a.field.reduce(s)));
  return out;
}

inline LieElement operator-(LieElement a, const LieElement& b) { return a + scaled(b, -1); }

namespace detail {

inline std::atomic<std::uint64_t>& algebra_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

struct NaturalRealization {
  std::vector<Root> weights;  // weight of each standard basis vector
  std::optional<QMatrix> form;
  std::optional<QMatrix> form_inv;
};

inline NaturalRealization natural_realization(const RootSystem& rs) {
  NaturalRealization nat;
  const int l = rs.rank();
  const int d = rs.ambient_dim();
  auto e = [d](int i) { return eps(d, i); };
  if (rs.family() == Family::A && l >= 2) {
    for (int i = 1; i <= l + 1; ++i) nat.weights.push_back(e(i));
    return nat;
  }
  const bool odd = rs.family() == Family::B || rs.family() == Family::A;
  const int n = odd ? 2 * l + 1 : 2 * l;
  for (int i = 1; i <= l; ++i) nat.weights.push_back(e(i));
  if (odd) nat.weights.push_back(Root(std::vector<int>(d, 0)));
  for (int i = 1; i <= l; ++i) nat.weights.push_back(-e(i));
  QMatrix j = q_zero(n);
  const int shift = odd ? l + 1 : l;
  for (int i = 0; i < l; ++i) {
    j[i][i + shift] = 1;
    j[i + shift][i] = rs.family() == Family::C ? -1 : 1;
  }
  if (odd) j[l][l] = 1;
  nat.form = j;
  // J^2 = +-1 for every form used here.
  nat.form_inv = rs.family() == Family::C ? q_scale(j, -1) : j;
  return nat;
}

inline QMatrix natural_root_matrix(const NaturalRealization& nat, const Root& alpha) {
  const std::size_t n = nat.weights.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || nat.weights[a] - nat.weights[b] != alpha) continue;
      QMatrix m = q_zero(n);
      m[a][b] = 1;
      if (nat.form) m = q_add(m, q_mul(q_mul(*nat.form_inv, q_transpose(m)), *nat.form), -1);
      if (!q_is_zero(m)) return m;
    }
  throw Error(Errc::Internal, "no natural matrix for root " + label(alpha));
}

}  // namespace detail

class LieAlgebra {
 public:
  LieAlgebra() = default;

  /// p = 0 selects integer coefficients. Otherwise p must be a prime >= 7, or any prime >= 3
  /// when allow_small_p is set (flagged through small_p_override()).
  LieAlgebra(RootSystem rs, std::int64_t p, bool allow_small_p = false)
      : rs_(std::move(rs)), field_{p}, id_(++detail::algebra_counter()) {
    if (p != 0) {
      if (!is_prime(p)) throw Error(Errc::BadCharacteristic, std::to_string(p) + " is not prime");
      if (p < 7) {
        if (!allow_small_p || p < 3)
          throw Error(Errc::BadCharacteristic, "p = " + std::to_string(p) + " below 7 without override");
        small_p_ = true;
      }
    }
    build();
  }

  const RootSystem& root_system() const { return rs_; }
  std::int64_t characteristic() const { return field_.p; }
  const Field& field() const { return field_; }
  bool small_p_override() const { return small_p_; }
  std::uint64_t id() const { return id_; }

  std::size_t dim() const { return basis_.size(); }
  std::size_t rank() const { return static_cast<std::size_t>(rs_.rank()); }
  /// Number of positive roots m; dim = 2m + l.
  std::size_t num_positive() const { return rs_.num_positive(); }

  const BasisElement& basis(std::size_t i) const { return basis_.at(i); }
  const std::vector<BasisElement>& basis() const { return basis_; }
  bool is_negative(std::size_t i) const { return i < num_positive(); }
  bool is_coroot(std::size_t i) const { return i >= num_positive() && i < num_positive() + rank(); }
  bool is_positive(std::size_t i) const { return i >= num_positive() + rank(); }

  std::size_t index_of_root(const Root& r) const {
    auto it = root_index_.find(r);
    if (it == root_index_.end()) throw Error(Errc::RootNotInSystem, label(r) + " in " + rs_.name());
    return it->second;
  }
  std::size_t index_of_coroot(int i) const { return num_positive() + static_cast<std::size_t>(i); }

  /// Weight (root, or zero for coroots) of a basis element.
  Root weight_of(std::size_t i) const {
    return is_coroot(i) ? Root(std::vector<int>(rs_.ambient_dim(), 0)) : basis_[i].root;
  }

  /// [b_i, b_j] over the coefficient field.
  const SparseTerms& bracket_basis(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }
  /// [b_i, b_j] with the integer structure constants (before reduction mod p).
  const SparseTerms& integer_bracket(std::size_t i, std::size_t j) const { return int_table_[i * dim() + j]; }

  LieElement zero() const { return LieElement{id_, field_, {}}; }
  LieElement element(std::size_t i) const {
    LieElement e = zero();
    e.add_term(i, 1);
    return e;
  }
  LieElement root_vector(const Root& r) const { return element(index_of_root(r)); }

  LieElement bracket(const LieElement& u, const LieElement& v) const {
    check_same(u.algebra, id_);
    check_same(v.algebra, id_);
    LieElement out = zero();
    for (auto [i, a] : u.terms)
      for (auto [j, b] : v.terms) {
        Coeff ab = field_.mul(a, b);
        for (auto [k, c] : bracket_basis(i, j)) out.add_term(k, field_.mul(ab, c));
      }
    return out;
  }

  /// Integer expansion of h_alpha over the simple coroots (alpha^vee = sum c_j alpha_j^vee).
  std::vector<int> coroot_coefficients(const Root& alpha) const {
    const auto& k = rs_.base_coefficients(alpha);
    std::vector<int> c(rank());
    for (std::size_t j = 0; j < rank(); ++j) {
      int num = k[j] * rs_.base()[j].norm2();
      if (num % alpha.norm2() != 0) throw Error(Errc::Internal, "non-integral coroot expansion");
      c[j] = num / alpha.norm2();
    }
    return c;
  }

  /// h_alpha as an element of L, with [x_alpha, x_-alpha] = h_alpha.
  LieElement coroot_expand(const Root& alpha) const {
    LieElement h = zero();
    auto c = coroot_coefficients(alpha);
    for (std::size_t j = 0; j < rank(); ++j) h.add_term(index_of_coroot(static_cast<int>(j)), c[j]);
    return h;
  }

  /// The restricted p-map on basis elements: x_alpha -> 0, h_i -> h_i.
  LieElement p_map(std::size_t i) const { return is_coroot(i) ? element(i) : zero(); }

  /// N_{alpha,beta} with [x_alpha, x_beta] = N x_{alpha+beta} (integer, 0 if alpha+beta is not a root).
  int structure_constant(const Root& alpha, const Root& beta) const {
    Root s = alpha + beta;
    if (!rs_.contains(s)) return 0;
    std::size_t k = index_of_root(s);
    for (auto [idx, c] : integer_bracket(index_of_root(alpha), index_of_root(beta)))
      if (idx == k) return static_cast<int>(c);
    return 0;
  }

  /// Dense matrix of ad(b_i) acting on L (columns indexed by the basis).
  std::vector<std::vector<Coeff>> ad_matrix(std::size_t i) const {
    std::vector<std::vector<Coeff>> m(dim(), std::vector<Coeff>(dim(), 0));
    for (std::size_t j = 0; j < dim(); ++j)
      for (auto [k, c] : bracket_basis(i, j)) m[k][j] = c;
    return m;
  }

 private:
  void build() {
    const std::size_t l = static_cast<std::size_t>(rs_.rank());
    for (const Root& r : rs_.negative_roots())
      basis_.push_back({BasisKind::Negative, r, -1, "x(" + label(r) + ")"});
    for (std::size_t i = 0; i < l; ++i) {
      std::string lab = label(rs_.base()[i]);
      if (lab[0] == '+') lab.erase(0, 1);
      basis_.push_back({BasisKind::Coroot, rs_.base()[i], static_cast<int>(i), "h(" + lab + ")"});
    }
    for (const Root& r : rs_.positive_roots())
      basis_.push_back({BasisKind::Positive, r, -1, "x(" + label(r) + ")"});
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i].kind != BasisKind::Coroot) root_index_[basis_[i].root] = i;

    auto mats = construct_matrices();
    const std::size_t n = basis_.size();
    int_table_.assign(n * n, {});
    table_.assign(n * n, {});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        SparseTerms t = decompose(i, j, mats);
        SparseTerms red;
        for (auto [k, c] : t) {
          Coeff r = field_.reduce(c);
          if (r) red.emplace_back(k, r);
        }
        int_table_[i * n + j] = std::move(t);
        table_[i * n + j] = std::move(red);
      }
  }

  std::vector<QMatrix> construct_matrices() const {
    const auto nat = detail::natural_realization(rs_);
    const std::size_t l = rank();
    std::map<Root, QMatrix> pos, neg;
    std::vector<QMatrix> h(l);
    for (std::size_t i = 0; i < l; ++i) {
      const Root& a = rs_.base()[i];
      QMatrix e = detail::natural_root_matrix(nat, a);
      QMatrix f = detail::natural_root_matrix(nat, -a);
      QMatrix t = q_commutator(e, f);
      auto s = q_ratio(q_commutator(t, e), e);
      if (!s || s->numerator() == 0) throw Error(Errc::Internal, "degenerate simple triple");
      f = q_scale(f, Rational(2) / *s);
      h[i] = q_commutator(e, f);
      pos[a] = e;
      neg[-a] = f;
    }
    for (const Root& xi : rs_.positive_roots()) {
      if (pos.count(xi)) continue;
      std::size_t i = 0;
      while (!rs_.contains(xi - rs_.base()[i]) || !rs_.is_positive(xi - rs_.base()[i])) ++i;
      const Root& a = rs_.base()[i];
      Root eta = xi - a;
      int q = root_string(eta, a, rs_).first;
      QMatrix e = q_scale(q_commutator(pos.at(a), pos.at(eta)), Rational(1, q + 1));
      QMatrix f = q_scale(q_commutator(neg.at(-a), neg.at(-eta)), Rational(1, q + 1));
      QMatrix target = q_zero(e.size());
      auto c = coroot_coefficients(xi);
      for (std::size_t j = 0; j < l; ++j) target = q_add(target, h[j], c[j]);
      auto s = q_ratio(q_commutator(e, f), target);
      if (!s || s->denominator() != 1 || (s->numerator() != 1 && s->numerator() != -1)) throw Error(Errc::Internal, "extraspecial normalization failed at " + label(xi));
      if (s->numerator() == -1) f = q_scale(f, -1);
      pos[xi] = e;
      neg[-xi] = f;
    }
    std::vector<QMatrix> out;
    for (const auto& b : basis_) {
      if (b.kind == BasisKind::Negative) out.push_back(neg.at(b.root));
      else if (b.kind == BasisKind::Positive) out.push_back(pos.at(b.root));
      else out.push_back(h[b.coroot]);
    }
    return out;
  }

  SparseTerms decompose(std::size_t i, std::size_t j, const std::vector<QMatrix>& mats) const {
    const auto& bi = basis_[i];
    const auto& bj = basis_[j];
    QMatrix c = q_commutator(mats[i], mats[j]);
    SparseTerms out;
    auto as_int = [](Rational r) {
      if (r.denominator() != 1) throw Error(Errc::Internal, "non-integral structure constant");
      return static_cast<Coeff>(r.numerator());
    };
    if (bi.kind == BasisKind::Coroot && bj.kind == BasisKind::Coroot) {
      if (!q_is_zero(c)) throw Error(Errc::Internal, "Cartan subalgebra not abelian");
      return out;
    }
    Root w = weight_of(i) + weight_of(j);
    if (w.is_zero()) {
      // [x_a, x_-a] = h_a
      QMatrix acc = q_zero(c.size());
      auto co = coroot_coefficients(bi.root);
      for (std::size_t k = 0; k < rank(); ++k) {
        if (!co[k]) continue;
        acc = q_add(acc, mats[index_of_coroot(static_cast<int>(k))], co[k]);
        out.emplace_back(index_of_coroot(static_cast<int>(k)), co[k]);
      }
      if (!q_is_zero(q_add(c, acc, -1))) throw Error(Errc::Internal, "[x_a, x_-a] != h_a at " + label(bi.root));
      return out;
    }
    if (!rs_.contains(w)) {
      if (!q_is_zero(c)) throw Error(Errc::Internal, "bracket outside the root spaces");
      return out;
    }
    std::size_t k = index_of_root(w);
    auto s = q_ratio(c, mats[k]);
    if (!s) throw Error(Errc::Internal, "bracket not proportional to root vector " + label(w));
    if (s->numerator() != 0) out.emplace_back(k, as_int(*s));
    return out;
  }

  RootSystem rs_;
  Field field_;
  bool small_p_ = false;
  std::uint64_t id_ = 0;
  std::vector<BasisElement> basis_;
  std::map<Root, std::size_t> root_index_;
  std::vector<SparseTerms> int_table_;
  std::vector<SparseTerms> table_;
};

inline LieAlgebra build_chevalley(const RootSystem& rs, std::int64_t p, bool allow_small_p = false) {
  return LieAlgebra(rs, p, allow_small_p);
}

inline LieElement bracket(const LieElement& u, const LieElement& v, const LieAlgebra& L) { return L.bracket(u, v); }

// ---------------------------------------------------------------------------
// Subalgebra closure.

struct SubalgebraVerdict {
  bool closed = true;
  /// Indices (into the input list) of a pair whose bracket leaves the span.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  LieElement witness_bracket;
  std::size_t span_dim = 0;
};

inline std::vector<Coeff> dense(const LieElement& u, std::size_t n) {
  std::vector<Coeff> v(n, 0);
  for (auto [i, c] : u.terms) v[i] = c;
  return v;
}

inline SubalgebraVerdict check_subalgebra(const std::vector<LieElement>& span, const LieAlgebra& ambient) {
  DenseEchelon ech(ambient.dim(), ambient.field());
  std::vector<std::size_t> independent;
  for (std::size_t i = 0; i < span.size(); ++i) {
    check_same(span[i].algebra, ambient.id());
    if (ech.insert(dense(span[i], ambient.dim()))) independent.push_back(i);
  }
  SubalgebraVerdict v;
  v.span_dim = ech.rank();
  v.witness_bracket = ambient.zero();
  for (std::size_t a = 0; a < independent.size(); ++a)
    for (std::size_t b = a + 1; b < independent.size(); ++b) {
      LieElement br = ambient.bracket(span[independent[a]], span[independent[b]]);
      if (!ech.contains(dense(br, ambient.dim()))) {
        v.closed = false;
        v.witness = std::make_pair(independent[a], independent[b]);
        v.witness_bracket = br;
        return v;
      }
    }
  return v;
}

struct CartanExtension {
  std::vector<LieElement> span;
  SubalgebraVerdict verdict;
};

/// span(L_sub) + F h_extra, the linear-span reading of "L with h adjoined".
inline CartanExtension extend_by_cartan(const std::vector<LieElement>& sub, const LieElement& h_extra,
                                        const LieAlgebra& ambient) {
  check_same(h_extra.algebra, ambient.id());
  for (auto [i, c] : h_extra.terms)
    if (!ambient.is_coroot(i)) throw Error(Errc::NotCartanElement, "component along " + ambient.basis(i).label);
  CartanExtension ext;
  ext.span = sub;
  ext.span.push_back(h_extra);
  ext.verdict = check_subalgebra(ext.span, ambient);
  return ext;
}

}  // namespace modlie
