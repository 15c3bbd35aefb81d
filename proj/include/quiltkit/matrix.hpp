#pragma once

#include <algorithm>
#include <cassert>
#include <vector>

#include "quiltkit/rational.hpp"

namespace quiltkit {

/// Dense matrix over an exact scalar type (Rational or Int).
/// Zero-row / zero-column matrices are first-class values.
template <typename T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols) {
    assert(rows >= 0 && cols >= 0);
  }
  Mat(int rows, int cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    assert(data_.size() == size_t(rows) * cols);
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int r, int c) { return data_[size_t(r) * cols_ + c]; }
  const T& operator()(int r, int c) const { return data_[size_t(r) * cols_ + c]; }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const auto& v : data_)
      if (v != 0) return false;
    return true;
  }

  Mat transposed() const {
    Mat m(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
    return m;
  }

  Mat operator*(const Mat& o) const {
    assert(cols_ == o.rows_);
    Mat m(rows_, o.cols_);
    for (int r = 0; r < rows_; ++r)
      for (int k = 0; k < cols_; ++k) {
        const T& a = (*this)(r, k);
        if (a == 0) continue;
        for (int c = 0; c < o.cols_; ++c) {
          if (o(k, c) == 0) continue;
          m(r, c) += a * o(k, c);
        }
      }
    return m;
  }

  Mat operator+(const Mat& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Mat m = *this;
    for (size_t i = 0; i < data_.size(); ++i) m.data_[i] += o.data_[i];
    return m;
  }

  Mat operator-() const {
    Mat m = *this;
    for (auto& v : m.data_) v = -v;
    return m;
  }

  Mat operator-(const Mat& o) const { return *this + (-o); }

  Mat col(int c) const {
    Mat m(rows_, 1);
    for (int r = 0; r < rows_; ++r) m(r, 0) = (*this)(r, c);
    return m;
  }

  /// Rows [r0, r1) as a new matrix.
  Mat row_slice(int r0, int r1) const {
    Mat m(r1 - r0, cols_);
    for (int r = r0; r < r1; ++r)
      for (int c = 0; c < cols_; ++c) m(r - r0, c) = (*this)(r, c);
    return m;
  }

  /// [A | B] side by side.
  static Mat hcat(const Mat& a, const Mat& b) {
    assert(a.rows_ == b.rows_);
    Mat m(a.rows_, a.cols_ + b.cols_);
    for (int r = 0; r < a.rows_; ++r) {
      for (int c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
      for (int c = 0; c < b.cols_; ++c) m(r, a.cols_ + c) = b(r, c);
    }
    return m;
  }

  /// [A; B] stacked.
  static Mat vcat(const Mat& a, const Mat& b) {
    assert(a.cols_ == b.cols_);
    Mat m(a.rows_ + b.rows_, a.cols_);
    for (int r = 0; r < a.rows_; ++r)
      for (int c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
    for (int r = 0; r < b.rows_; ++r)
      for (int c = 0; c < a.cols_; ++c) m(a.rows_ + r, c) = b(r, c);
    return m;
  }

  static Mat block_diag(const Mat& a, const Mat& b) {
    Mat m(a.rows_ + b.rows_, a.cols_ + b.cols_);
    for (int r = 0; r < a.rows_; ++r)
      for (int c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
    for (int r = 0; r < b.rows_; ++r)
      for (int c = 0; c < b.cols_; ++c) m(a.rows_ + r, a.cols_ + c) = b(r, c);
    return m;
  }

 private:
  int rows_, cols_;
  std::vector<T> data_;
};

using QMat = Mat<Rational>;
using ZMat = Mat<Int>;

/// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<int> rref_in_place(QMat& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int pr = -1;
    for (int r = row; r < m.rows(); ++r)
      if (m(r, col) != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    if (pr != row)
      for (int c = 0; c < m.cols(); ++c) std::swap(m(pr, c), m(row, c));
    Rational inv = m(row, col);
    for (int c = 0; c < m.cols(); ++c) m(row, c) /= inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      Rational f = m(r, col);
      for (int c = 0; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline int rank(QMat m) { return int(rref_in_place(m).size()); }

/// Canonical form of the column span: reduced row echelon form of the
/// transpose with zero rows dropped. Two matrices have equal column span
/// iff their canonical forms are equal.
inline QMat column_span_canonical(const QMat& m) {
  QMat t = m.transposed();
  auto pivots = rref_in_place(t);
  QMat out(int(pivots.size()), t.cols());
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) = t(r, c);
  return out;
}

inline bool same_column_span(const QMat& a, const QMat& b) {
  return a.rows() == b.rows() &&
         column_span_canonical(a) == column_span_canonical(b);
}

/// Basis of the null space {x : m x = 0}, one column per basis vector.
inline QMat kernel_basis(QMat m) {
  int n = m.cols();
  auto pivots = rref_in_place(m);
  std::vector<bool> is_pivot(n, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  QMat k(n, int(free_cols.size()));
  for (int j = 0; j < int(free_cols.size()); ++j) {
    int fc = free_cols[j];
    k(fc, j) = 1;
    for (int r = 0; r < int(pivots.size()); ++r) k(pivots[r], j) = -m(r, fc);
  }
  return k;
}

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  int value() const { return positive - negative; }
};

/// Signature of a symmetric matrix by exact congruence diagonalization.
/// Degenerate forms are fine: zero eigenvalue directions are counted as zero.
inline Signature symmetric_signature(QMat s) {
  assert(s.rows() == s.cols());
  const int n = s.rows();
  Signature sig;
  std::vector<bool> done(n, false);
  for (int step = 0; step < n; ++step) {
    int piv = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && s(i, i) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) {
      // no nonzero diagonal: look for an off-diagonal entry and symmetrize
      int oi = -1, oj = -1;
      for (int i = 0; i < n && oi < 0; ++i) {
        if (done[i]) continue;
        for (int j = i + 1; j < n; ++j) {
          if (done[j]) continue;
          if (s(i, j) != 0) {
            oi = i;
            oj = j;
            break;
          }
        }
      }
      if (oi < 0) break;  // remaining block is zero
      // row/col op: i += j makes s(i,i) = 2 s(i,j) != 0
      for (int c = 0; c < n; ++c) s(oi, c) += s(oj, c);
      for (int r = 0; r < n; ++r) s(r, oi) += s(r, oj);
      piv = oi;
    }
    const Rational d = s(piv, piv);
    if (d > 0)
      ++sig.positive;
    else
      ++sig.negative;
    // clear pivot row/column on the not-yet-processed block
    for (int r = 0; r < n; ++r) {
      if (r == piv || done[r] || s(r, piv) == 0) continue;
      Rational f = s(r, piv) / d;
      for (int c = 0; c < n; ++c) s(r, c) -= f * s(piv, c);
      for (int c = 0; c < n; ++c) s(c, r) -= f * s(c, piv);
    }
    done[piv] = true;
  }
  int handled = sig.positive + sig.negative;
  sig.zero = n - handled;
  return sig;
}

struct SmithForm {
  std::vector<Int> invariant_factors;  // positive, d1 | d2 | ...
  int rank() const { return int(invariant_factors.size()); }
};

/// Smith normal form over the integers with arbitrary-precision pivots.
inline SmithForm smith_normal_form(ZMat m) {
  const int R = m.rows(), C = m.cols();
  SmithForm out;
  int t = 0;
  auto abs_of = [](const Int& v) { return v < 0 ? Int(-v) : v; };
  while (t < R && t < C) {
    // locate minimal nonzero |entry| in the trailing block
    int pr = -1, pc = -1;
    Int best = 0;
    for (int r = t; r < R; ++r)
      for (int c = t; c < C; ++c) {
        if (m(r, c) == 0) continue;
        Int a = abs_of(m(r, c));
        if (pr < 0 || a < best) {
          best = a;
          pr = r;
          pc = c;
        }
      }
    if (pr < 0) break;
    for (int c = 0; c < C; ++c) std::swap(m(pr, c), m(t, c));
    for (int r = 0; r < R; ++r) std::swap(m(r, pc), m(r, t));
    bool reduced = false;
    while (!reduced) {
      reduced = true;
      for (int r = t + 1; r < R; ++r) {
        if (m(r, t) == 0) continue;
        Int q = m(r, t) / m(t, t);
        for (int c = 0; c < C; ++c) m(r, c) -= q * m(t, c);
        if (m(r, t) != 0) {
          for (int c = 0; c < C; ++c) std::swap(m(r, c), m(t, c));
          reduced = false;
        }
      }
      for (int c = t + 1; c < C; ++c) {
        if (m(t, c) == 0) continue;
        Int q = m(t, c) / m(t, t);
        for (int r = 0; r < R; ++r) m(r, c) -= q * m(r, t);
        if (m(t, c) != 0) {
          for (int r = 0; r < R; ++r) std::swap(m(r, c), m(r, t));
          reduced = false;
        }
      }
    }
    ++t;
  }
  for (int i = 0; i < t; ++i)
    out.invariant_factors.push_back(abs_of(m(i, i)));
  // enforce the divisibility chain d_i | d_{i+1}
  auto& d = out.invariant_factors;
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = i + 1; j < d.size(); ++j) {
      if (d[j] % d[i] == 0) continue;
      Int g = gcd(d[i], d[j]);
      Int l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  return out;
}

inline int rank_mod2(ZMat m) {
  const int R = m.rows(), C = m.cols();
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c) m(r, c) = ((m(r, c) % 2) + 2) % 2;
  int rk = 0;
  for (int c = 0; c < C && rk < R; ++c) {
    int pr = -1;
    for (int r = rk; r < R; ++r)
      if (m(r, c) != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    for (int cc = 0; cc < C; ++cc) std::swap(m(pr, cc), m(rk, cc));
    for (int r = 0; r < R; ++r) {
      if (r == rk || m(r, c) == 0) continue;
      for (int cc = 0; cc < C; ++cc) m(r, cc) = (m(r, cc) + m(rk, cc)) % 2;
    }
    ++rk;
  }
  return rk;
}

}  // namespace quiltkit
