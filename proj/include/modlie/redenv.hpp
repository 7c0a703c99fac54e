#pragma once

// Reduced enveloping algebras U_chi(L), baby Verma modules as sparse matrix
// representations over F_p, and irreducibility / invertibility tests.

#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "modlie/chevalley.hpp"
#include "modlie/error.hpp"
#include "modlie/field.hpp"
#include "modlie/pbw.hpp"
#include "modlie/sparse.hpp"

namespace modlie {

/// A p-character: its value on each Chevalley basis element.
struct Character {
  std::vector<Coeff> values;

  Coeff at(std::size_t i) const { return i < values.size() ? values[i] : 0; }

  static Character zero(const LieAlgebra& L) { return Character{std::vector<Coeff>(L.dim(), 0)}; }

  /// chi(x_{-alpha_i}) = 1 on the simple roots, zero elsewhere.
  static Character regular_nilpotent(const LieAlgebra& L) {
    Character chi = zero(L);
    for (const Root& a : L.root_system().base()) chi.values[L.index_of_root(-a)] = 1;
    return chi;
  }

  /// Vanishes on every positive root vector.
  bool standard(const LieAlgebra& L) const {
    for (std::size_t i = 0; i < L.dim(); ++i)
      if (L.is_positive(i) && L.field().reduce(at(i))) return false;
    return true;
  }
};

/// Elements of U_chi(L) are represented as UEElements whose exponents are all below p.
using ReducedElement = UEElement;

inline void require_modular(const LieAlgebra& L) {
  if (!L.field().modular()) throw Error(Errc::NotModP, "operation needs a prime characteristic");
}

inline bool is_reduced(const UEElement& u) {
  for (const auto& [m, c] : u.terms)
    for (auto e : m)
      if (static_cast<std::int64_t>(e) >= u.field.p) return false;
  return true;
}

/// Rewrites every x^e with e >= p using x^p = x^{[p]} + chi(x)^p.
inline ReducedElement reduce(const UEElement& u, const Character& chi, const LieAlgebra& L) {
  require_modular(L);
  check_same(u.algebra, L.id());
  const Field& F = L.field();
  const auto p = static_cast<std::uint16_t>(F.p);
  ReducedElement out{u.algebra, u.field, {}};
  std::vector<std::pair<Monomial, Coeff>> work(u.terms.begin(), u.terms.end());
  while (!work.empty()) {
    auto [m, c] = std::move(work.back());
    work.pop_back();
    std::size_t i = 0;
    while (i < m.size() && m[i] < p) ++i;
    if (i == m.size()) {
      out.add_term(m, c);
      continue;
    }
    Coeff z = F.pow(chi.at(i), static_cast<std::uint64_t>(F.p));
    Monomial lower = m;
    lower[i] = static_cast<std::uint16_t>(m[i] - p);
    if (z) work.emplace_back(lower, F.mul(c, z));
    if (L.is_coroot(i)) {
      ++lower[i];
      work.emplace_back(lower, c);
    }
  }
  return out;
}

/// All lambda in F_p with lambda^p - lambda = c^p.
inline std::vector<Coeff> artin_schreier_solutions(Coeff c, const Field& F) {
  std::vector<Coeff> out;
  Coeff rhs = F.pow(c, static_cast<std::uint64_t>(F.p));
  for (Coeff x = 0; x < F.p; ++x)
    if (F.sub(F.pow(x, static_cast<std::uint64_t>(F.p)), x) == rhs) out.push_back(x);
  return out;
}

/// Every weight (one value per simple coroot) compatible with chi, in lexicographic order.
inline std::vector<std::vector<Coeff>> compatible_weights(const LieAlgebra& L, const Character& chi) {
  require_modular(L);
  std::vector<std::vector<Coeff>> out{{}};
  for (std::size_t i = 0; i < L.rank(); ++i) {
    auto sols = artin_schreier_solutions(chi.at(L.index_of_coroot(static_cast<int>(i))), L.field());
    std::vector<std::vector<Coeff>> next;
    for (const auto& w : out)
      for (Coeff s : sols) {
        next.push_back(w);
        next.back().push_back(s);
      }
    out = std::move(next);
  }
  return out;
}

/// A representation given by one sparse matrix per Chevalley basis element.
struct MatrixRep {
  std::uint64_t algebra = 0;
  Field field;
  std::size_t dim = 0;
  std::vector<SparseMatrix> generators;
  std::vector<std::string> labels;
  Character chi;
  std::vector<Coeff> lambda;
  std::string kind;
};

namespace detail {

class BabyVermaBuilder {
 public:
  BabyVermaBuilder(const LieAlgebra& L, const Character& chi, const std::vector<Coeff>& lambda)
      : L_(L), F_(L.field()), chi_(chi), lambda_(lambda), m_(L.num_positive()) {
    dim_ = 1;
    for (std::size_t k = 0; k < m_; ++k) {
      place_.push_back(dim_);
      dim_ *= static_cast<std::uint64_t>(F_.p);
    }
    memo_.resize(L.dim() * dim_);
    state_.assign(L.dim() * dim_, 0);
    for (std::size_t k = 0; k < m_; ++k) chi_p_.push_back(F_.pow(chi.at(k), static_cast<std::uint64_t>(F_.p)));
  }

  std::uint64_t dim() const { return dim_; }

  const SparseVec& act(std::size_t g, std::uint64_t s) {
    std::size_t key = g * dim_ + s;
    if (state_[key] == 2) return memo_[key];
    if (state_[key] == 1) throw Error(Errc::Internal, "cyclic module action");
    state_[key] = 1;
    memo_[key] = compute(g, s);
    state_[key] = 2;
    return memo_[key];
  }

 private:
  std::uint64_t digit(std::uint64_t s, std::size_t k) const { return (s / place_[k]) % static_cast<std::uint64_t>(F_.p); }

  SparseVec compute(std::size_t g, std::uint64_t s) {
    if (s == 0) {
      if (L_.is_negative(g)) return {{place_[g], 1}};
      if (L_.is_coroot(g)) {
        Coeff l = F_.reduce(lambda_[g - m_]);
        return l ? SparseVec{{0, l}} : SparseVec{};
      }
      return {};
    }
    std::size_t k = 0;
    while (digit(s, k) == 0) ++k;
    if (L_.is_negative(g) && g < k) return {{s + place_[g], 1}};
    if (g == k) {
      if (digit(s, k) + 1 < static_cast<std::uint64_t>(F_.p)) return {{s + place_[k], 1}};
      Coeff z = chi_p_[k];
      return z ? SparseVec{{s - (static_cast<std::uint64_t>(F_.p) - 1) * place_[k], z}} : SparseVec{};
    }
    // b_g f_k v' = f_k (b_g v') + [b_g, f_k] v'
    std::uint64_t rest = s - place_[k];
    SparseAccumulator acc(F_);
    SparseVec first = act(g, rest);
    for (auto [t, c] : first) acc.add(act(k, t), c);
    for (auto [idx, b] : L_.bracket_basis(g, k)) acc.add(act(idx, rest), b);
    return acc.take();
  }

  const LieAlgebra& L_;
  Field F_;
  const Character& chi_;
  const std::vector<Coeff>& lambda_;
  std::size_t m_;
  std::uint64_t dim_ = 1;
  std::vector<std::uint64_t> place_;
  std::vector<Coeff> chi_p_;
  std::vector<SparseVec> memo_;
  std::vector<std::uint8_t> state_;
};

}  // namespace detail

/// Largest baby Verma this library will build.
inline constexpr std::uint64_t kMaxRepDim = 1u << 21;

/// Z_chi(lambda): basis f_1^{a_1} ... f_m^{a_m} v_0 (0 <= a_k < p) over the negative root
/// vectors in basis order, indexed by sum a_k p^{k}.
inline MatrixRep baby_verma(const LieAlgebra& L, const Character& chi, const std::vector<Coeff>& lambda) {
  require_modular(L);
  const Field& F = L.field();
  for (std::size_t i = 0; i < L.dim(); ++i)
    if (L.is_positive(i) && F.reduce(chi.at(i)))
      throw Error(Errc::NonStandardCharacter, "chi(" + L.basis(i).label + ") != 0");
  if (lambda.size() != L.rank())
    throw Error(Errc::IncompatibleWeight, "weight needs " + std::to_string(L.rank()) + " values");
  for (std::size_t i = 0; i < L.rank(); ++i) {
    std::size_t h = L.index_of_coroot(static_cast<int>(i));
    Coeff lhs = F.sub(F.pow(lambda[i], static_cast<std::uint64_t>(F.p)), F.reduce(lambda[i]));
    if (lhs != F.pow(chi.at(h), static_cast<std::uint64_t>(F.p)))
      throw Error(Errc::IncompatibleWeight, L.basis(h).label);
  }
  double est = 1;
  for (std::size_t k = 0; k < L.num_positive(); ++k) est *= static_cast<double>(F.p);
  if (est > static_cast<double>(kMaxRepDim))
    throw Error(Errc::UnsupportedRank, "baby Verma module of dimension p^" + std::to_string(L.num_positive()) +
                                           " is too large");
  detail::BabyVermaBuilder builder(L, chi, lambda);
  MatrixRep rep;
  rep.algebra = L.id();
  rep.field = F;
  rep.dim = builder.dim();
  rep.chi = chi;
  rep.lambda = lambda;
  rep.kind = "baby-verma";
  for (std::size_t g = 0; g < L.dim(); ++g) {
    SparseMatrix m = SparseMatrix::zero(rep.dim, F);
    for (std::uint64_t s = 0; s < rep.dim; ++s) m.cols[s] = builder.act(g, s);
    rep.generators.push_back(std::move(m));
    rep.labels.push_back(L.basis(g).label);
  }
  return rep;
}

/// The adjoint representation (character zero).
inline MatrixRep adjoint_rep(const LieAlgebra& L) {
  require_modular(L);
  MatrixRep rep;
  rep.algebra = L.id();
  rep.field = L.field();
  rep.dim = L.dim();
  rep.chi = Character::zero(L);
  rep.kind = "adjoint";
  for (std::size_t g = 0; g < L.dim(); ++g) {
    SparseMatrix m = SparseMatrix::zero(rep.dim, rep.field);
    for (std::size_t j = 0; j < L.dim(); ++j) {
      for (auto [k, c] : L.bracket_basis(g, j)) m.cols[j].emplace_back(k, c);
      std::sort(m.cols[j].begin(), m.cols[j].end());
    }
    rep.generators.push_back(std::move(m));
    rep.labels.push_back(L.basis(g).label);
  }
  return rep;
}

/// rho(u), the image of u under the homomorphism extending the generator matrices.
inline SparseMatrix evaluate(const UEElement& u, const MatrixRep& rep) {
  check_same(u.algebra, rep.algebra);
  if (!u.field.modular()) throw Error(Errc::NotModP, "evaluate needs a prime characteristic");
  std::map<std::pair<std::size_t, unsigned>, SparseMatrix> powers;
  auto power = [&](std::size_t g, unsigned e) -> const SparseMatrix& {
    auto key = std::make_pair(g, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    return powers.emplace(key, matrix_power(rep.generators[g], e)).first->second;
  };
  SparseMatrix total = SparseMatrix::zero(rep.dim, rep.field);
  for (const auto& [m, c] : u.terms) {
    SparseMatrix t = SparseMatrix::identity(rep.dim, rep.field);
    bool first = true;
    for (std::size_t g = 0; g < m.size(); ++g) {
      if (!m[g]) continue;
      t = first ? power(g, m[g]) : t * power(g, m[g]);
      first = false;
    }
    total = linear_combination(total, 1, t, c);
  }
  return total;
}

/// u acting on a single vector (cheaper than evaluate for large reps).
inline SparseVec apply(const UEElement& u, const MatrixRep& rep, const SparseVec& v) {
  check_same(u.algebra, rep.algebra);
  SparseAccumulator acc(rep.field);
  for (const auto& [m, c] : u.terms) {
    SparseVec w = v;
    for (std::size_t g = m.size(); g-- > 0;)
      for (unsigned e = 0; e < m[g]; ++e) w = rep.generators[g].apply(w);
    acc.add(w, c);
  }
  return acc.take();
}

inline bool invertible_in_rep(const UEElement& u, const MatrixRep& rep) {
  return rank(evaluate(u, rep)) == rep.dim;
}

/// Pairs (i, j) of basis indices where rho([b_i, b_j]) != [rho(b_i), rho(b_j)].
inline std::vector<std::pair<std::size_t, std::size_t>> bracket_failures(const MatrixRep& rep, const LieAlgebra& L) {
  check_same(rep.algebra, L.id());
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t j = i + 1; j < L.dim(); ++j) {
      SparseMatrix lhs = SparseMatrix::zero(rep.dim, rep.field);
      for (auto [k, c] : L.bracket_basis(i, j)) lhs = linear_combination(lhs, 1, rep.generators[k], c);
      if (!(lhs == commutator(rep.generators[i], rep.generators[j]))) bad.emplace_back(i, j);
    }
  return bad;
}

/// Basis indices x where rho(x)^p != rho(x^{[p]}) + chi(x)^p I.
inline std::vector<std::size_t> restrictedness_failures(const MatrixRep& rep, const LieAlgebra& L) {
  check_same(rep.algebra, L.id());
  const Field& F = rep.field;
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < L.dim(); ++i) {
    SparseMatrix lhs = matrix_power(rep.generators[i], static_cast<std::uint64_t>(F.p));
    SparseMatrix rhs = SparseMatrix::scalar(rep.dim, F, F.pow(rep.chi.at(i), static_cast<std::uint64_t>(F.p)));
    for (auto [k, c] : L.p_map(i).terms) rhs = linear_combination(rhs, 1, rep.generators[k], c);
    if (!(lhs == rhs)) bad.push_back(i);
  }
  return bad;
}

/// Sparse text export: a header line "dim <d> p <p>", then "<label> <row> <col> <value>" per entry.
inline void write_rep(std::ostream& os, const MatrixRep& rep) {
  os << "dim " << rep.dim << " p " << rep.field.p << "\n";
  for (std::size_t g = 0; g < rep.generators.size(); ++g)
    for (std::size_t col = 0; col < rep.dim; ++col)
      for (auto [row, v] : rep.generators[g].cols[col])
        os << rep.labels[g] << " " << row << " " << col << " " << v << "\n";
}

// Irreducibility.

struct IrreducibilityOptions {
  std::size_t burnside_max_dim = 64;
  unsigned budget = 50;
  std::uint64_t seed = 1;
};

struct IrreducibilityVerdict {
  enum class Kind { Irreducible, Submodule, Inconclusive };
  Kind kind = Kind::Inconclusive;
  /// Basis of a proper nonzero invariant subspace (Submodule only).
  std::vector<SparseVec> witness;
  std::string method;
  /// Dimension of the associative span of the generators (Burnside only).
  std::size_t algebra_dim = 0;
};

inline const char* to_string(IrreducibilityVerdict::Kind k) {
  switch (k) {
    case IrreducibilityVerdict::Kind::Irreducible: return "Irreducible";
    case IrreducibilityVerdict::Kind::Submodule: return "Submodule";
    case IrreducibilityVerdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

/// Basis of the smallest subspace containing seeds and stable under gens.
inline std::vector<SparseVec> spin(const std::vector<SparseVec>& seeds, const std::vector<SparseMatrix>& gens,
                                   std::size_t dim, Field F) {
  SparseEchelon ech(F);
  std::vector<SparseVec> basis;
  std::vector<SparseVec> queue(seeds.begin(), seeds.end());
  while (!queue.empty() && ech.rank() < dim) {
    SparseVec v = std::move(queue.back());
    queue.pop_back();
    if (!ech.insert(v)) continue;
    for (const auto& g : gens) {
      SparseVec w = g.apply(v);
      if (!w.empty()) queue.push_back(std::move(w));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

/// True if span(vs) is stable under every generator.
inline bool is_invariant(const std::vector<SparseVec>& vs, const MatrixRep& rep) {
  SparseEchelon ech(rep.field);
  for (const auto& v : vs) ech.insert(v);
  for (const auto& g : rep.generators)
    for (const auto& v : vs)
      if (!ech.contains(g.apply(v))) return false;
  return true;
}

namespace detail {

class SubmoduleSearch {
 public:
  SubmoduleSearch(const MatrixRep& rep, std::uint64_t seed) : rep_(rep), rng_(seed) {
    for (const auto& g : rep.generators) dual_.push_back(g.transpose());
  }

  Coeff random_coeff() { return static_cast<Coeff>(rng_() % static_cast<std::uint64_t>(rep_.field.p)); }
  std::uint64_t random_index(std::uint64_t n) { return rng_() % n; }

  /// Proper invariant subspace generated by v, if any.
  std::optional<std::vector<SparseVec>> try_vector(const SparseVec& v) {
    if (v.empty()) return std::nullopt;
    auto b = spin({v}, rep_.generators, rep_.dim, rep_.field);
    if (b.size() < rep_.dim) return b;
    return std::nullopt;
  }

  /// Proper invariant subspace of the dual generated by w, turned into its annihilator in V.
  std::optional<std::vector<SparseVec>> try_dual(const SparseVec& w) {
    if (w.empty()) return std::nullopt;
    auto b = spin({w}, dual_, rep_.dim, rep_.field);
    if (b.size() < rep_.dim) return annihilator(b, rep_.dim, rep_.field);
    return std::nullopt;
  }

  bool spans_dual(const SparseVec& w) {
    return spin({w}, dual_, rep_.dim, rep_.field).size() == rep_.dim;
  }

  SparseVec random_vector() {
    SparseVec v;
    for (std::uint64_t i = 0; i < rep_.dim; ++i) {
      Coeff c = random_coeff();
      if (c) v.emplace_back(i, c);
    }
    return v;
  }

 private:
  const MatrixRep& rep_;
  std::mt19937_64 rng_;
  std::vector<SparseMatrix> dual_;
};

inline SparseMatrix restrict_to(const SparseMatrix& a, const std::vector<std::uint64_t>& idx) {
  std::map<std::uint64_t, std::uint64_t> pos;
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = i;
  SparseMatrix r = SparseMatrix::zero(idx.size(), a.field);
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (auto [i, c] : a.cols[idx[j]]) {
      auto it = pos.find(i);
      if (it == pos.end()) throw Error(Errc::Internal, "element does not preserve the weight block");
      r.cols[j].emplace_back(it->second, c);
    }
  return r;
}

inline SparseVec lift(const SparseVec& v, const std::vector<std::uint64_t>& idx) {
  SparseVec out;
  for (auto [i, c] : v) out.emplace_back(idx[i], c);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Burnside test for small dimensions; otherwise a seeded search for invariant subspaces
/// combined with Norton's irreducibility criterion on a weight block.
inline IrreducibilityVerdict is_irreducible(const MatrixRep& rep, const IrreducibilityOptions& opt = {}) {
  using Kind = IrreducibilityVerdict::Kind;
  const Field& F = rep.field;
  const std::size_t d = rep.dim;
  IrreducibilityVerdict out;
  if (d <= 1) {
    out.kind = Kind::Irreducible;
    out.method = "trivial";
    return out;
  }
  detail::SubmoduleSearch search(rep, opt.seed);
  auto found = [&](std::vector<SparseVec> w, const std::string& how) {
    out.kind = Kind::Submodule;
    out.witness = std::move(w);
    out.method += how;
    return out;
  };

  if (d <= opt.burnside_max_dim) {
    out.method = "burnside";
    SparseEchelon ech(F);
    std::vector<SparseMatrix> words;
    std::vector<SparseMatrix> queue{SparseMatrix::identity(d, F)};
    while (!queue.empty() && ech.rank() < d * d) {
      SparseMatrix m = std::move(queue.back());
      queue.pop_back();
      if (!ech.insert(m.vectorize())) continue;
      for (const auto& g : rep.generators) queue.push_back(m * g);
      words.push_back(std::move(m));
    }
    out.algebra_dim = ech.rank();
    if (out.algebra_dim == d * d) {
      out.kind = Kind::Irreducible;
      return out;
    }
    for (std::uint64_t i = 0; i < d; ++i)
      if (auto w = search.try_vector({{i, 1}})) return found(*w, "+basis-spin");
    for (std::uint64_t i = 0; i < d; ++i)
      if (auto w = search.try_dual({{i, 1}})) return found(*w, "+dual-spin");
    for (unsigned t = 0; t < opt.budget; ++t) {
      SparseMatrix a = SparseMatrix::zero(d, F);
      for (const auto& w : words) a = linear_combination(a, 1, w, search.random_coeff());
      for (Coeff c = 0; c < F.p; ++c) {
        SparseMatrix shifted = linear_combination(a, 1, SparseMatrix::identity(d, F), -c);
        for (const auto& v : kernel(shifted))
          if (auto w = search.try_vector(v)) return found(*w, "+kernel-spin");
        for (const auto& v : kernel(shifted.transpose()))
          if (auto w = search.try_dual(v)) return found(*w, "+dual-kernel-spin");
      }
    }
    out.kind = Kind::Inconclusive;
    out.method += "+no-witness";
    return out;
  }

  out.method = "randomized";
  // Weight blocks from the diagonal coroot action, when all coroots act diagonally.
  std::vector<std::size_t> diag_gens;
  for (std::size_t g = 0; g < rep.generators.size(); ++g) {
    const auto& m = rep.generators[g];
    bool diag = true;
    for (std::size_t j = 0; j < d && diag; ++j)
      for (auto [i, c] : m.cols[j])
        if (i != j) diag = false;
    bool nonzero_weight = false;
    for (std::size_t h = 0; h < rep.generators.size(); ++h)
      if (h != g && !commutator(rep.generators[h], m).is_zero()) nonzero_weight = true;
    if (diag && nonzero_weight) diag_gens.push_back(g);
  }
  std::map<std::vector<Coeff>, std::vector<std::uint64_t>> blocks;
  for (std::uint64_t j = 0; j < d; ++j) {
    std::vector<Coeff> w;
    for (auto g : diag_gens) w.push_back(rep.generators[g].at(j, j));
    blocks[w].push_back(j);
  }
  // Weight-zero generators: those commuting with every diagonal generator.
  std::vector<std::size_t> neutral;
  for (std::size_t g = 0; g < rep.generators.size(); ++g) {
    bool commutes = true;
    for (auto h : diag_gens)
      if (!commutator(rep.generators[h], rep.generators[g]).is_zero()) commutes = false;
    if (commutes) neutral.push_back(g);
  }
  std::vector<SparseMatrix> weight_zero;
  for (auto g : neutral) weight_zero.push_back(rep.generators[g]);
  for (std::size_t a = 0; a < rep.generators.size(); ++a)
    for (std::size_t b = 0; b < rep.generators.size(); ++b) {
      if (a == b) continue;
      SparseMatrix prod = rep.generators[a] * rep.generators[b];
      bool ok = true;
      for (auto h : diag_gens)
        if (!commutator(rep.generators[h], prod).is_zero()) ok = false;
      if (ok && std::find(neutral.begin(), neutral.end(), a) == neutral.end()) weight_zero.push_back(std::move(prod));
    }
  const std::vector<std::uint64_t>* smallest = &blocks.begin()->second;
  for (const auto& [w, idx] : blocks)
    if (idx.size() < smallest->size()) smallest = &idx;
  const std::vector<std::uint64_t>& block = *smallest;
  for (unsigned t = 0; t < opt.budget; ++t) {
    std::uint64_t probe = search.random_index(d);
    if (auto w = search.try_vector({{probe, 1}})) return found(*w, "+basis-spin");
    SparseMatrix u1 = SparseMatrix::zero(d, F), u2 = SparseMatrix::zero(d, F);
    for (const auto& w : weight_zero) {
      u1 = linear_combination(u1, 1, w, search.random_coeff());
      u2 = linear_combination(u2, 1, w, search.random_coeff());
    }
    SparseMatrix u = detail::restrict_to(u1 * u2 + u1, block);
    for (Coeff c = 0; c < F.p; ++c) {
      SparseMatrix shifted = linear_combination(u, 1, SparseMatrix::identity(u.dim, F), -c);
      auto ker = kernel(shifted);
      if (ker.empty()) continue;
      for (const auto& v : ker)
        if (auto w = search.try_vector(detail::lift(v, block))) return found(*w, "+kernel-spin");
      auto coker = kernel(shifted.transpose());
      for (const auto& v : coker)
        if (auto w = search.try_dual(detail::lift(v, block))) return found(*w, "+dual-kernel-spin");
      if (ker.size() == 1 && coker.size() == 1) {
        // Norton: the unique kernel vector generates V and the unique dual kernel vector
        // generates V*, for an algebra element whose kernel is confined to this block.
        out.kind = Kind::Irreducible;
        out.method += "+norton";
        return out;
      }
    }
  }
  out.kind = Kind::Inconclusive;
  out.method += "+budget-exhausted";
  return out;
}

}  // namespace modlie
