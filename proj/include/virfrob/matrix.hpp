#pragma once

#include <stdexcept>
#include <vector>

#include "virfrob/rational.hpp"

namespace virfrob {

// Dense matrix over Q, row-major.  M.at(i,j) is the entry M^i_j: the row is
// the upper index throughout, so (M*v)^i = sum_j M^i_j v^j.
class QMat {
 public:
  QMat() = default;
  QMat(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, Rat(0)) {}

  static QMat identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static QMat diag(const std::vector<Rat>& d) {
    QMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < m.rows_; ++i) m.at(i, i) = d[i];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rat& at(int i, int j) { return a_[i * cols_ + j]; }
  const Rat& at(int i, int j) const { return a_[i * cols_ + j]; }

  bool operator==(const QMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool is_zero() const {
    for (const auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  QMat operator+(const QMat& o) const {
    check_same_shape(o);
    QMat r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
  }
  QMat operator-(const QMat& o) const {
    check_same_shape(o);
    QMat r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
  }
  QMat operator*(const QMat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
    QMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rat& x = at(i, k);
        if (x == 0) continue;
        for (int j = 0; j < o.cols_; ++j) r.at(i, j) += x * o.at(k, j);
      }
    return r;
  }
  QMat operator*(const Rat& s) const {
    QMat r = *this;
    for (auto& x : r.a_) x *= s;
    return r;
  }
  friend QMat operator*(const Rat& s, const QMat& m) { return m * s; }

  std::vector<Rat> operator*(const std::vector<Rat>& v) const {
    if (static_cast<int>(v.size()) != cols_)
      throw std::invalid_argument("matrix/vector shape mismatch");
    std::vector<Rat> r(rows_, Rat(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
  }

  QMat transpose() const {
    QMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  Rat trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace of non-square");
    Rat t(0);
    for (int i = 0; i < rows_; ++i) t += at(i, i);
    return t;
  }

 private:
  void check_same_shape(const QMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("matrix shape mismatch");
  }
  int rows_ = 0, cols_ = 0;
  std::vector<Rat> a_;
};

// Raised by the square exact solver on rank-deficient input.
struct RankDeficiency : std::domain_error {
  int rank;
  RankDeficiency(int got, int need)
      : std::domain_error("singular system: rank " + std::to_string(got) +
                          " of " + std::to_string(need)),
        rank(got) {}
};

inline int rank_exact(QMat m) {
  const int nr = m.rows(), nc = m.cols();
  int row = 0;
  for (int col = 0; col < nc && row < nr; ++col) {
    int piv = -1;
    for (int r = row; r < nr; ++r)
      if (m.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < nc; ++j) std::swap(m.at(piv, j), m.at(row, j));
    for (int r = row + 1; r < nr; ++r) {
      if (m.at(r, col) == 0) continue;
      Rat f = m.at(r, col) / m.at(row, col);
      for (int j = col; j < nc; ++j) m.at(r, j) -= f * m.at(row, j);
    }
    ++row;
  }
  return row;
}

// Gaussian elimination over Q for a square system, followed by a
// back-substitution check of A*x == b.  Singular A -> RankDeficiency.
inline std::vector<Rat> solve_linear_exact(const QMat& A,
                                           const std::vector<Rat>& b) {
  if (A.rows() != A.cols() || static_cast<int>(b.size()) != A.rows())
    throw std::invalid_argument("solve_linear_exact expects square A, matching b");
  const int n = A.rows();
  QMat m = A;
  std::vector<Rat> rhs = b;

  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (m.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw RankDeficiency(rank_exact(A), n);
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
      std::swap(rhs[piv], rhs[col]);
    }
    Rat p = m.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (m.at(r, col) == 0) continue;
      Rat f = m.at(r, col) / p;
      m.at(r, col) = 0;
      for (int j = col + 1; j < n; ++j) m.at(r, j) -= f * m.at(col, j);
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Rat> x(n, Rat(0));
  for (int i = n - 1; i >= 0; --i) {
    Rat s = rhs[i];
    for (int j = i + 1; j < n; ++j) s -= m.at(i, j) * x[j];
    x[i] = s / m.at(i, i);
  }
  std::vector<Rat> check = A * x;
  for (int i = 0; i < n; ++i)
    if (check[i] != b[i]) throw std::logic_error("back-substitution check failed");
  return x;
}

inline QMat inverse_exact(const QMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square");
  const int n = a.rows();
  QMat inv(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<Rat> e(n, Rat(0));
    e[j] = 1;
    std::vector<Rat> col = solve_linear_exact(a, e);
    for (int i = 0; i < n; ++i) inv.at(i, j) = col[i];
  }
  return inv;
}

// Row reduction for a general rectangular system.  Free variables are set to
// zero in x; `unique` reports whether there were none.
struct LinSolveResult {
  bool consistent = false;
  bool unique = false;
  std::vector<Rat> x;
};

inline LinSolveResult solve_linear_system(QMat A, std::vector<Rat> b) {
  if (static_cast<int>(b.size()) != A.rows())
    throw std::invalid_argument("solve_linear_system shape mismatch");
  const int nr = A.rows(), nc = A.cols();
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < nc && row < nr; ++col) {
    int piv = -1;
    for (int r = row; r < nr; ++r)
      if (A.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != row) {
      for (int j = 0; j < nc; ++j) std::swap(A.at(piv, j), A.at(row, j));
      std::swap(b[piv], b[row]);
    }
    Rat p = A.at(row, col);
    for (int j = col; j < nc; ++j) A.at(row, j) /= p;
    b[row] /= p;
    for (int r = 0; r < nr; ++r) {
      if (r == row || A.at(r, col) == 0) continue;
      Rat f = A.at(r, col);
      for (int j = col; j < nc; ++j) A.at(r, j) -= f * A.at(row, j);
      b[r] -= f * b[row];
    }
    pivot_col.push_back(col);
    ++row;
  }
  LinSolveResult res;
  for (int r = row; r < nr; ++r)
    if (b[r] != 0) return res;  // inconsistent
  res.consistent = true;
  res.unique = (static_cast<int>(pivot_col.size()) == nc);
  res.x.assign(nc, Rat(0));
  for (int r = 0; r < static_cast<int>(pivot_col.size()); ++r) res.x[pivot_col[r]] = b[r];
  return res;
}

}  // namespace virfrob
