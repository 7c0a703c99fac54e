#pragma once

// Helpers shared by the unit tests and the acceptance runner.

#include <map>
#include <random>
#include <vector>

#include "modlie/chevalley.hpp"
#include "modlie/expr.hpp"
#include "modlie/pbw.hpp"

namespace modlie::testing {

/// Random element with up to `terms` monomials of degree <= max_degree.
inline UEElement random_element(Enveloping& E, std::mt19937_64& rng, unsigned max_degree, unsigned terms = 3) {
  const LieAlgebra& L = E.algebra();
  const std::int64_t p = L.field().p ? L.field().p : 5;
  UEElement u = E.zero();
  std::uniform_int_distribution<unsigned> nterm(1, terms), deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> gen(0, L.dim() - 1);
  std::uniform_int_distribution<std::int64_t> coeff(1, p - 1);
  for (unsigned t = nterm(rng); t > 0; --t) {
    Monomial m(L.dim(), 0);
    for (unsigned d = deg(rng); d > 0; --d) ++m[gen(rng)];
    u.add_term(m, coeff(rng));
  }
  return u;
}

/// Noncommutative words in basis indices, straightened by repeated adjacent swaps
/// b_j b_i = b_i b_j + [b_j, b_i] for j > i. Independent of the memoized engine.
class WordStraightener {
 public:
  using Word = std::vector<std::size_t>;

  explicit WordStraightener(const LieAlgebra& L) : L_(L) {}

  std::map<Word, Coeff> straighten(std::map<Word, Coeff> in) const {
    const Field F = L_.field();
    std::map<Word, Coeff> done;
    while (!in.empty()) {
      auto it = in.begin();
      Word w = it->first;
      Coeff c = it->second;
      in.erase(it);
      if (!c) continue;
      std::size_t k = 0;
      while (k + 1 < w.size() && w[k] <= w[k + 1]) ++k;
      if (k + 1 >= w.size()) {
        add(done, w, c, F);
        continue;
      }
      Word swapped = w;
      std::swap(swapped[k], swapped[k + 1]);
      add(in, swapped, c, F);
      for (auto [idx, s] : L_.bracket_basis(w[k], w[k + 1])) {
        Word shorter(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
        shorter.push_back(idx);
        shorter.insert(shorter.end(), w.begin() + static_cast<std::ptrdiff_t>(k) + 2, w.end());
        add(in, shorter, F.mul(c, s), F);
      }
    }
    return done;
  }

  /// Sorted words as PBW elements.
  UEElement to_element(const std::map<Word, Coeff>& sorted, const Enveloping& E) const {
    UEElement u = E.zero();
    for (const auto& [w, c] : sorted) {
      Monomial m(L_.dim(), 0);
      for (auto i : w) ++m[i];
      u.add_term(m, c);
    }
    return u;
  }

  static std::map<Word, Coeff> from_element(const UEElement& u) {
    std::map<Word, Coeff> out;
    for (const auto& [m, c] : u.terms) {
      Word w;
      for (std::size_t i = 0; i < m.size(); ++i)
        for (unsigned e = 0; e < m[i]; ++e) w.push_back(i);
      out[w] = c;
    }
    return out;
  }

  /// Product of two PBW elements via concatenation and straightening.
  UEElement multiply(const UEElement& a, const UEElement& b, const Enveloping& E) const {
    std::map<Word, Coeff> words;
    const Field F = L_.field();
    for (const auto& [wa, ca] : from_element(a))
      for (const auto& [wb, cb] : from_element(b)) {
        Word w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
        add(words, w, F.mul(ca, cb), F);
      }
    return to_element(straighten(std::move(words)), E);
  }

 private:
  static void add(std::map<Word, Coeff>& m, const Word& w, Coeff c, const Field& F) {
    c = F.reduce(c);
    if (!c) return;
    auto [it, fresh] = m.emplace(w, c);
    if (fresh) return;
    it->second = F.add(it->second, c);
    if (!it->second) m.erase(it);
  }

  const LieAlgebra& L_;
};

// Random expression trees over the B2 roots.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed), rs_(build_root_system(Family::B, 2)) {}

  ExprPtr gen(int depth) {
    using K = Expr::Kind;
    int pick = depth <= 0 ? static_cast<int>(rng_() % 4) : static_cast<int>(rng_() % 10);
    switch (pick) {
      case 0: return expr::integer(static_cast<std::int64_t>(rng_() % 12));
      case 1: return expr::root_atom(K::X, expr::coords_of(root()));
      case 2: return expr::root_atom(K::H, expr::coords_of(root()));
      case 3: return expr::make(K::HIndex, nullptr, nullptr, 1 + static_cast<std::int64_t>(rng_() % 2));
      case 4: return expr::make(K::Neg, gen(depth - 1));
      case 5: return expr::make(K::Add, gen(depth - 1), gen(depth - 1));
      case 6: return expr::make(K::Sub, gen(depth - 1), gen(depth - 1));
      case 7: return expr::make(K::Mul, gen(depth - 1), gen(depth - 1));
      case 8: return expr::make(K::Pow, gen(depth - 1), nullptr, 1 + static_cast<std::int64_t>(rng_() % 3));
      default: return expr::make(K::Bracket, gen(depth - 1), gen(depth - 1));
    }
  }

 private:
  Root root() { return rs_.roots()[rng_() % rs_.roots().size()]; }

  std::mt19937_64 rng_;
  RootSystem rs_;
};

}  // namespace modlie::testing
