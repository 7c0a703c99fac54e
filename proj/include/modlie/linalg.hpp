#pragma once

// Small exact dense linear algebra used by the construction and closure checks.

#include <cstddef>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "modlie/error.hpp"
#include "modlie/field.hpp"

namespace modlie {

using Rational = boost::rational<long long>;
using QMatrix = std::vector<std::vector<Rational>>;

inline QMatrix q_zero(std::size_t n) { return QMatrix(n, std::vector<Rational>(n, Rational(0))); }

inline QMatrix q_mul(const QMatrix& a, const QMatrix& b) {
  const std::size_t n = a.size();
  QMatrix c = q_zero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k].numerator() == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (b[k][j].numerator() != 0) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

inline QMatrix q_add(QMatrix a, const QMatrix& b, Rational s = 1) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) a[i][j] += s * b[i][j];
  return a;
}

inline QMatrix q_scale(QMatrix a, Rational s) {
  for (auto& row : a)
    for (auto& v : row) v *= s;
  return a;
}

inline QMatrix q_transpose(const QMatrix& a) {
  QMatrix t = q_zero(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline QMatrix q_commutator(const QMatrix& a, const QMatrix& b) { return q_add(q_mul(a, b), q_mul(b, a), -1); }

inline bool q_is_zero(const QMatrix& a) {
  for (const auto& row : a)
    for (const auto& v : row)
      if (v.numerator() != 0) return false;
  return true;
}

/// Scalar s with a == s * b, or nullopt if a is not a multiple of b (b must be nonzero).
inline std::optional<Rational> q_ratio(const QMatrix& a, const QMatrix& b) {
  std::optional<Rational> s;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (b[i][j].numerator() == 0) {
        if (a[i][j].numerator() != 0) return std::nullopt;
        continue;
      }
      Rational r = a[i][j] / b[i][j];
      if (s && *s != r) return std::nullopt;
      s = r;
    }
  return s;
}

/// Incremental row-echelon basis over F_p (p > 0) or Q (p = 0).
/// insert() reports whether the vector enlarged the span.
class DenseEchelon {
 public:
  DenseEchelon(std::size_t width, Field field) : width_(width), field_(field) {}

  std::size_t rank() const { return rows_.size(); }

  bool contains(const std::vector<Coeff>& v) const { return !reduce(v).has_value(); }

  bool insert(const std::vector<Coeff>& v) {
    auto r = reduce(v);
    if (!r) return false;
    rows_.push_back(std::move(*r));
    return true;
  }

 private:
  struct Row {
    std::size_t pivot;
    std::vector<Rational> v;
  };

  // Arithmetic runs in Q; for p > 0 entries are kept as residues so Q is exact mod p
  // once every step is followed by normalize().
  Rational normalize(Rational x) const {
    if (!field_.modular()) return x;
    Coeff num = field_.reduce(x.numerator());
    Coeff den = field_.reduce(x.denominator());
    return Rational(field_.mul(num, field_.inv(den)));
  }

  std::optional<Row> reduce(const std::vector<Coeff>& in) const {
    if (in.size() != width_) throw Error(Errc::Internal, "echelon width mismatch");
    std::vector<Rational> v(width_);
    for (std::size_t i = 0; i < width_; ++i) v[i] = normalize(Rational(in[i]));
    for (const Row& row : rows_) {
      Rational c = v[row.pivot];
      if (c.numerator() == 0) continue;
      for (std::size_t i = row.pivot; i < width_; ++i)
        if (row.v[i].numerator() != 0) v[i] = normalize(v[i] - c * row.v[i]);
    }
    for (std::size_t i = 0; i < width_; ++i)
      if (v[i].numerator() != 0) {
        Rational inv = normalize(Rational(1) / v[i]);
        for (std::size_t j = i; j < width_; ++j) v[j] = normalize(v[j] * inv);
        return Row{i, std::move(v)};
      }
    return std::nullopt;
  }

  std::size_t width_;
  Field field_;
  std::vector<Row> rows_;
};

}  // namespace modlie
