#pragma once

// Sparse vectors and matrices over F_p, with incremental sparse echelon forms for
// rank, kernel and span-membership computations.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "modlie/error.hpp"
#include "modlie/field.hpp"

namespace modlie {

/// Sorted (index, nonzero value) pairs.
using SparseVec = std::vector<std::pair<std::uint64_t, Coeff>>;

class SparseAccumulator {
 public:
  explicit SparseAccumulator(Field f) : field_(f) {}
  void add(std::uint64_t i, Coeff c) {
    if (!c) return;
    auto [it, fresh] = map_.emplace(i, c);
    if (!fresh) it->second = field_.add(it->second, c);
  }
  void add(const SparseVec& v, Coeff s) {
    if (!s) return;
    for (auto [i, c] : v) add(i, field_.mul(c, s));
  }
  SparseVec take() {
    SparseVec out;
    out.reserve(map_.size());
    for (auto [i, c] : map_)
      if (c) out.emplace_back(i, c);
    std::sort(out.begin(), out.end());
    map_.clear();
    return out;
  }

 private:
  Field field_;
  std::unordered_map<std::uint64_t, Coeff> map_;
};

/// Square sparse matrix stored by columns.
struct SparseMatrix {
  std::size_t dim = 0;
  Field field;
  std::vector<SparseVec> cols;

  static SparseMatrix zero(std::size_t n, Field f) { return SparseMatrix{n, f, std::vector<SparseVec>(n)}; }
  static SparseMatrix identity(std::size_t n, Field f) { return scalar(n, f, 1); }
  static SparseMatrix scalar(std::size_t n, Field f, Coeff c) {
    SparseMatrix m = zero(n, f);
    c = f.reduce(c);
    if (c)
      for (std::size_t j = 0; j < n; ++j) m.cols[j] = {{j, c}};
    return m;
  }

  std::size_t nnz() const {
    std::size_t s = 0;
    for (const auto& c : cols) s += c.size();
    return s;
  }
  bool is_zero() const {
    return std::all_of(cols.begin(), cols.end(), [](const SparseVec& c) { return c.empty(); });
  }

  Coeff at(std::size_t r, std::size_t c) const {
    for (auto [i, v] : cols[c])
      if (i == r) return v;
    return 0;
  }

  SparseVec apply(const SparseVec& v) const {
    SparseAccumulator acc(field);
    for (auto [j, c] : v) acc.add(cols[j], c);
    return acc.take();
  }

  SparseMatrix transpose() const {
    SparseMatrix t = zero(dim, field);
    for (std::size_t j = 0; j < dim; ++j)
      for (auto [i, c] : cols[j]) t.cols[i].emplace_back(j, c);
    return t;
  }

  /// Row-major flattening index (col * dim + row) of every entry; used to vectorize.
  SparseVec vectorize() const {
    SparseVec out;
    out.reserve(nnz());
    for (std::size_t j = 0; j < dim; ++j)
      for (auto [i, c] : cols[j]) out.emplace_back(static_cast<std::uint64_t>(j) * dim + i, c);
    return out;
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) { return a.dim == b.dim && a.cols == b.cols; }
};

inline SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.dim != b.dim) throw Error(Errc::Internal, "matrix size mismatch");
  SparseMatrix c = SparseMatrix::zero(a.dim, a.field);
  std::vector<Coeff> dense(a.dim, 0);
  std::vector<std::uint64_t> touched;
  for (std::size_t j = 0; j < b.dim; ++j) {
    touched.clear();
    for (auto [k, bk] : b.cols[j])
      for (auto [i, aik] : a.cols[k]) {
        if (!dense[i]) touched.push_back(i);
        dense[i] = a.field.add(dense[i], a.field.mul(aik, bk));
        if (!dense[i]) dense[i] = 0;
      }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (auto i : touched) {
      if (dense[i]) c.cols[j].emplace_back(i, dense[i]);
      dense[i] = 0;
    }
  }
  return c;
}

inline SparseMatrix linear_combination(const SparseMatrix& a, Coeff sa, const SparseMatrix& b, Coeff sb) {
  SparseMatrix c = SparseMatrix::zero(a.dim, a.field);
  SparseAccumulator acc(a.field);
  for (std::size_t j = 0; j < a.dim; ++j) {
    acc.add(a.cols[j], a.field.reduce(sa));
    acc.add(b.cols[j], a.field.reduce(sb));
    c.cols[j] = acc.take();
  }
  return c;
}

inline SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return linear_combination(a, 1, b, 1); }
inline SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return linear_combination(a, 1, b, -1); }
inline SparseMatrix scaled(const SparseMatrix& a, Coeff s) {
  return linear_combination(a, s, SparseMatrix::zero(a.dim, a.field), 0);
}

inline SparseMatrix matrix_power(const SparseMatrix& a, std::uint64_t e) {
  SparseMatrix r = SparseMatrix::identity(a.dim, a.field);
  SparseMatrix b = a;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

inline SparseMatrix commutator(const SparseMatrix& a, const SparseMatrix& b) { return a * b - b * a; }

/// Sparse semi-echelon basis: every stored row has leading entry 1 at its pivot, and no
/// two rows share a pivot. Optionally tracks each row as a combination of inserted vectors
/// so that dependencies can be reported.
class SparseEchelon {
 public:
  explicit SparseEchelon(Field f, bool track = false) : field_(f), track_(track) {}

  std::size_t rank() const { return rows_.size(); }

  /// Inserts v (the count-th inserted vector). Returns true if it enlarged the span; otherwise,
  /// when tracking, the dependency (combination of inserted vectors equal to zero) is
  /// available from last_dependency().
  bool insert(const SparseVec& v) {
    auto [rem, combo] = reduce(v, track_ ? SparseVec{{inserted_, 1}} : SparseVec{});
    ++inserted_;
    if (rem.empty()) {
      last_dependency_ = std::move(combo);
      return false;
    }
    Coeff inv = field_.inv(rem.front().second);
    for (auto& [i, c] : rem) c = field_.mul(c, inv);
    for (auto& [i, c] : combo) c = field_.mul(c, inv);
    std::uint64_t piv = rem.front().first;
    rows_.emplace(piv, Row{std::move(rem), std::move(combo)});
    return true;
  }

  bool contains(const SparseVec& v) const { return reduce(v, {}).first.empty(); }

  /// Remainder of v after elimination (empty iff v is in the span).
  SparseVec remainder(const SparseVec& v) const { return reduce(v, {}).first; }

  const SparseVec& last_dependency() const { return last_dependency_; }

  std::vector<SparseVec> basis() const {
    std::vector<SparseVec> out;
    for (const auto& [piv, row] : rows_) out.push_back(row.v);
    return out;
  }

 private:
  struct Row {
    SparseVec v;
    SparseVec combo;
  };

  std::pair<SparseVec, SparseVec> reduce(const SparseVec& v, SparseVec combo_in) const {
    std::map<std::uint64_t, Coeff> work;
    for (auto [i, c] : v) {
      Coeff r = field_.reduce(c);
      if (r) work[i] = r;
    }
    std::map<std::uint64_t, Coeff> combo;
    for (auto [i, c] : combo_in) combo[i] = c;
    auto it = work.begin();
    while (it != work.end()) {
      auto row = rows_.find(it->first);
      if (row == rows_.end()) {
        ++it;
        continue;
      }
      Coeff c = it->second;
      std::uint64_t at = it->first;
      for (auto [i, rc] : row->second.v) {
        Coeff nv = field_.sub(work[i], field_.mul(c, rc));
        if (nv) work[i] = nv;
        else work.erase(i);
      }
      if (track_)
        for (auto [i, rc] : row->second.combo) {
          Coeff nv = field_.sub(combo[i], field_.mul(c, rc));
          if (nv) combo[i] = nv;
          else combo.erase(i);
        }
      it = work.upper_bound(at);
    }
    SparseVec rem(work.begin(), work.end());
    SparseVec cmb(combo.begin(), combo.end());
    return {std::move(rem), std::move(cmb)};
  }

  Field field_;
  bool track_;
  std::uint64_t inserted_ = 0;
  std::map<std::uint64_t, Row> rows_;
  SparseVec last_dependency_;
};

inline std::size_t rank(const SparseMatrix& m) {
  SparseEchelon ech(m.field);
  for (const auto& c : m.cols) ech.insert(c);
  return ech.rank();
}

/// Basis of {v : m v = 0}.
inline std::vector<SparseVec> kernel(const SparseMatrix& m) {
  SparseEchelon ech(m.field, true);
  std::vector<SparseVec> out;
  for (const auto& c : m.cols)
    if (!ech.insert(c)) out.push_back(ech.last_dependency());
  return out;
}

/// Basis of {v : w . v = 0 for all w in ws} in dimension n.
inline std::vector<SparseVec> annihilator(const std::vector<SparseVec>& ws, std::size_t n, Field f) {
  // Columns of the |ws| x n matrix whose rows are ws.
  std::vector<SparseVec> cols(n);
  for (std::size_t r = 0; r < ws.size(); ++r)
    for (auto [j, c] : ws[r]) cols[j].emplace_back(r, c);
  SparseEchelon ech(f, true);
  std::vector<SparseVec> out;
  for (const auto& c : cols)
    if (!ech.insert(c)) out.push_back(ech.last_dependency());
  return out;
}

}  // namespace modlie
