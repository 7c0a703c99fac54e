#pragma once

// Root systems of the classical families in exact integer epsilon-coordinates.

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "modlie/error.hpp"

namespace modlie {

enum class Family { A, B, C, D };

inline char to_char(Family f) { return "ABCD"[static_cast<int>(f)]; }

inline Family family_from_string(const std::string& s) {
  if (s == "A" || s == "a") return Family::A;
  if (s == "B" || s == "b") return Family::B;
  if (s == "C" || s == "c") return Family::C;
  if (s == "D" || s == "d") return Family::D;
  throw Error(Errc::Config, "unknown family '" + s + "'");
}

/// A vector of the root lattice in the epsilon basis. Also used for weights.
struct Root {
  std::vector<int> coords;

  Root() = default;
  explicit Root(std::vector<int> c) : coords(std::move(c)) {}

  int size() const { return static_cast<int>(coords.size()); }
  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](int c) { return c == 0; });
  }
  int norm2() const {
    int s = 0;
    for (int c : coords) s += c * c;
    return s;
  }

  Root operator-() const {
    Root r = *this;
    for (int& c : r.coords) c = -c;
    return r;
  }
  Root& operator+=(const Root& o) {
    for (int i = 0; i < size(); ++i) coords[i] += o.coords[i];
    return *this;
  }
  Root& operator-=(const Root& o) {
    for (int i = 0; i < size(); ++i) coords[i] -= o.coords[i];
    return *this;
  }
  friend Root operator+(Root a, const Root& b) { return a += b; }
  friend Root operator-(Root a, const Root& b) { return a -= b; }
  friend Root operator*(int k, Root a) {
    for (int& c : a.coords) c *= k;
    return a;
  }

  auto operator<=>(const Root&) const = default;
};

/// Unit vector epsilon_i (1-based) in an ambient space of dimension dim.
inline Root eps(int dim, int i) {
  Root r(std::vector<int>(dim, 0));
  r.coords.at(i - 1) = 1;
  return r;
}

inline int inner(const Root& a, const Root& b) {
  int s = 0;
  for (int i = 0; i < a.size(); ++i) s += a.coords[i] * b.coords[i];
  return s;
}

/// Label in the CLI grammar: "+e1-e2", "-e3", "+2e1".
inline std::string label(const Root& r) {
  std::string out;
  for (int i = 0; i < r.size(); ++i) {
    int c = r.coords[i];
    if (!c) continue;
    out += c > 0 ? '+' : '-';
    if (std::abs(c) != 1) out += std::to_string(std::abs(c));
    out += "e" + std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

/// <beta, alpha^vee> = 2(beta, alpha)/(alpha, alpha).
inline int cartan_integer(const Root& beta, const Root& alpha) {
  int a2 = alpha.norm2();
  if (a2 == 0) throw Error(Errc::RootNotInSystem, "cartan_integer against the zero vector");
  int num = 2 * inner(beta, alpha);
  if (num % a2 != 0) throw Error(Errc::Internal, "non-integral Cartan integer " + label(beta) + " vs " + label(alpha));
  return num / a2;
}

inline Root reflect(const Root& beta, const Root& alpha) {
  return beta - cartan_integer(beta, alpha) * alpha;
}

class RootSystem {
 public:
  RootSystem() = default;

  static RootSystem build(Family family, int rank) {
    int min_rank = family == Family::A ? 1 : family == Family::D ? 3 : 2;
    if (rank < min_rank)
      throw Error(Errc::UnsupportedRank, std::string(1, to_char(family)) + std::to_string(rank) +
                                             " (minimum rank " + std::to_string(min_rank) + ")");
    RootSystem rs;
    rs.family_ = family;
    rs.rank_ = rank;
    const int l = rank;
    std::vector<Root> all;
    if (family == Family::A && l == 1) {
      // Rank-one realization: roots +-e1, so that sl2 is written x(+e1), h(e1), x(-e1).
      rs.dim_ = 1;
      all = {eps(1, 1), -eps(1, 1)};
      rs.base_ = {eps(1, 1)};
    } else if (family == Family::A) {
      rs.dim_ = l + 1;
      for (int i = 1; i <= l + 1; ++i)
        for (int j = 1; j <= l + 1; ++j)
          if (i != j) all.push_back(eps(l + 1, i) - eps(l + 1, j));
      for (int i = 1; i <= l; ++i) rs.base_.push_back(eps(l + 1, i) - eps(l + 1, i + 1));
    } else {
      rs.dim_ = l;
      for (int i = 1; i <= l; ++i)
        for (int j = i + 1; j <= l; ++j)
          for (int s : {1, -1})
            for (int t : {1, -1}) all.push_back(s * eps(l, i) + t * eps(l, j));
      for (int i = 1; i <= l; ++i) {
        if (family == Family::B) {
          all.push_back(eps(l, i));
          all.push_back(-eps(l, i));
        } else if (family == Family::C) {
          all.push_back(2 * eps(l, i));
          all.push_back(-2 * eps(l, i));
        }
      }
      for (int i = 1; i < l; ++i) rs.base_.push_back(eps(l, i) - eps(l, i + 1));
      if (family == Family::B) rs.base_.push_back(eps(l, l));
      if (family == Family::C) rs.base_.push_back(2 * eps(l, l));
      if (family == Family::D) rs.base_.push_back(eps(l, l - 1) + eps(l, l));
    }
    rs.init_gram();
    for (const Root& r : all) rs.coeffs_[r] = rs.solve_base(r);
    std::sort(all.begin(), all.end(), [&rs](const Root& a, const Root& b) {
      int ha = rs.height(a), hb = rs.height(b);
      return ha != hb ? ha < hb : a < b;
    });
    rs.roots_ = std::move(all);
    for (std::size_t i = 0; i < rs.roots_.size(); ++i) {
      rs.index_[rs.roots_[i]] = i;
      if (rs.height(rs.roots_[i]) > 0) rs.positive_.push_back(rs.roots_[i]);
      else rs.negative_.push_back(rs.roots_[i]);
    }
    return rs;
  }

  Family family() const { return family_; }
  int rank() const { return rank_; }
  /// Dimension of the ambient epsilon space.
  int ambient_dim() const { return dim_; }
  std::string name() const { return std::string(1, to_char(family_)) + std::to_string(rank_); }

  /// All roots, ordered by height then lexicographically by coordinates.
  const std::vector<Root>& roots() const { return roots_; }
  const std::vector<Root>& base() const { return base_; }
  const std::vector<Root>& positive_roots() const { return positive_; }
  const std::vector<Root>& negative_roots() const { return negative_; }
  std::size_t num_positive() const { return positive_.size(); }

  bool contains(const Root& r) const { return index_.count(r) != 0; }

  std::size_t index_of(const Root& r) const {
    auto it = index_.find(r);
    if (it == index_.end()) throw Error(Errc::RootNotInSystem, label(r) + " in " + name());
    return it->second;
  }

  /// Integer coefficients of a root over the base.
  const std::vector<int>& base_coefficients(const Root& r) const {
    auto it = coeffs_.find(r);
    if (it == coeffs_.end()) throw Error(Errc::RootNotInSystem, label(r) + " in " + name());
    return it->second;
  }

  int height(const Root& r) const {
    int h = 0;
    for (int c : base_coefficients(r)) h += c;
    return h;
  }
  bool is_positive(const Root& r) const { return height(r) > 0; }

  /// Coefficients of an arbitrary lattice vector over the base (exact; throws if not integral).
  std::vector<int> lattice_coefficients(const Root& v) const { return solve_base(v); }

 private:
  using Q = boost::rational<long long>;

  void init_gram() {
    const int l = static_cast<int>(base_.size());
    gram_.assign(l, std::vector<Q>(l));
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) gram_[i][j] = inner(base_[i], base_[j]);
  }

  std::vector<int> solve_base(const Root& v) const {
    const int l = static_cast<int>(base_.size());
    std::vector<std::vector<Q>> m = gram_;
    std::vector<Q> rhs(l);
    for (int i = 0; i < l; ++i) rhs[i] = inner(base_[i], v);
    for (int col = 0; col < l; ++col) {
      int piv = col;
      while (m[piv][col].numerator() == 0) ++piv;
      std::swap(m[piv], m[col]);
      std::swap(rhs[piv], rhs[col]);
      for (int r = 0; r < l; ++r) {
        if (r == col || m[r][col].numerator() == 0) continue;
        Q f = m[r][col] / m[col][col];
        for (int c = col; c < l; ++c) m[r][c] -= f * m[col][c];
        rhs[r] -= f * rhs[col];
      }
    }
    std::vector<int> out(l);
    for (int i = 0; i < l; ++i) {
      Q c = rhs[i] / m[i][i];
      if (c.denominator() != 1) throw Error(Errc::RootNotInSystem, label(v) + " is not in the root lattice");
      out[i] = static_cast<int>(c.numerator());
    }
    return out;
  }

  Family family_ = Family::A;
  int rank_ = 0;
  int dim_ = 0;
  std::vector<Root> roots_, base_, positive_, negative_;
  std::map<Root, std::size_t> index_;
  std::map<Root, std::vector<int>> coeffs_;
  std::vector<std::vector<Q>> gram_;
};

inline RootSystem build_root_system(Family family, int rank) { return RootSystem::build(family, rank); }

/// Closure of {beta} under the simple reflections, in canonical order.
inline std::vector<Root> weyl_orbit(const Root& beta, const RootSystem& rs) {
  if (!rs.contains(beta)) throw Error(Errc::RootNotInSystem, label(beta) + " in " + rs.name());
  std::set<Root> seen{beta};
  std::deque<Root> queue{beta};
  while (!queue.empty()) {
    Root r = queue.front();
    queue.pop_front();
    for (const Root& a : rs.base()) {
      Root s = reflect(r, a);
      if (seen.insert(s).second) queue.push_back(s);
    }
  }
  std::vector<Root> out;
  for (const Root& r : rs.roots())
    if (seen.count(r)) out.push_back(r);
  return out;
}

/// (q_down, q_up): the alpha-string through beta is beta - q_down*alpha, ..., beta + q_up*alpha.
inline std::pair<int, int> root_string(const Root& beta, const Root& alpha, const RootSystem& rs) {
  int down = 0, up = 0;
  while (rs.contains(beta - (down + 1) * alpha)) ++down;
  while (rs.contains(beta + (up + 1) * alpha)) ++up;
  return {down, up};
}

}  // namespace modlie
