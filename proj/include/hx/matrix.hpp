#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hx/rational.hpp"

namespace hx {

// Dense matrix over Q(i).  Fibers in scenarios are tiny (<= 4x4); the exact
// elimination routines also get used on coordinate matrices up to a few
// hundred rows.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Scalar& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const Scalar& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  bool is_zero() const {
    for (const auto& v : a_)
      if (!v.is_zero()) return false;
    return true;
  }

  friend Mat operator+(const Mat& x, const Mat& y) {
    require(x.rows_ == y.rows_ && x.cols_ == y.cols_, "ShapeMismatch",
            "matrix add " + x.shape_str() + " vs " + y.shape_str());
    Mat r(x.rows_, x.cols_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
    return r;
  }
  friend Mat operator-(const Mat& x, const Mat& y) {
    require(x.rows_ == y.rows_ && x.cols_ == y.cols_, "ShapeMismatch",
            "matrix sub " + x.shape_str() + " vs " + y.shape_str());
    Mat r(x.rows_, x.cols_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
    return r;
  }
  friend Mat operator*(const Mat& x, const Mat& y) {
    require(x.cols_ == y.rows_, "ShapeMismatch",
            "matrix mul " + x.shape_str() + " vs " + y.shape_str());
    Mat r(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int k = 0; k < x.cols_; ++k) {
        if (x(i, k).is_zero()) continue;
        for (int j = 0; j < y.cols_; ++j) {
          if (y(k, j).is_zero()) continue;
          r(i, j) += x(i, k) * y(k, j);
        }
      }
    return r;
  }
  friend Mat operator*(const Scalar& s, const Mat& x) {
    Mat r(x.rows_, x.cols_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = s * x.a_[k];
    return r;
  }
  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }
  friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

  // Conjugate transpose.
  Mat adjoint() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j).conj();
    return r;
  }

  std::string shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < rows_; ++i) {
      s += i ? "; " : "";
      for (int j = 0; j < cols_; ++j) s += (j ? "," : "") + (*this)(i, j).str();
    }
    return s + "]";
  }

 private:
  int rows_, cols_;
  std::vector<Scalar> a_;
};

// Row-echelon elimination in place; returns pivot column per pivot row.
inline std::vector<int> row_reduce(Mat& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int p = -1;
    for (int i = r; i < m.rows(); ++i)
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Scalar inv = Scalar(1) / m(r, c);
    for (int j = c; j < m.cols(); ++j) m(r, j) = inv * m(r, j);
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Scalar f = m(i, c);
      for (int j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline int rank(Mat m) { return int(row_reduce(m).size()); }

// Basis of the right null space {v : m v = 0}, one column vector each.
inline std::vector<std::vector<Scalar>> kernel_basis(Mat m) {
  std::vector<int> pivots = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Scalar>> basis;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Scalar> v(m.cols());
    v[free] = Scalar(1);
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(int(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solves m x = b exactly; empty when inconsistent.
inline std::optional<std::vector<Scalar>> solve(const Mat& m,
                                                const std::vector<Scalar>& b) {
  Mat aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[static_cast<size_t>(i)];
  }
  std::vector<int> pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  std::vector<Scalar> x(m.cols());
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(int(r), m.cols());
  return x;
}

// Exact LDL* of a Hermitian matrix.  Succeeds iff the matrix is positive
// semidefinite over Q(i): diagonal stays nonnegative rational and a vanishing
// pivot forces a vanishing row.  Returns D's diagonal on success.
inline std::optional<std::vector<Rational>> ldl_psd(Mat m) {
  int n = m.rows();
  if (m != m.adjoint()) return std::nullopt;
  std::vector<Rational> diag;
  for (int k = 0; k < n; ++k) {
    Scalar d = m(k, k);
    if (!d.is_real() || d.re().sign() < 0) return std::nullopt;
    diag.push_back(d.re());
    if (d.is_zero()) {
      for (int j = k; j < n; ++j)
        if (!m(k, j).is_zero() || !m(j, k).is_zero()) return std::nullopt;
      continue;
    }
    for (int i = k + 1; i < n; ++i) {
      Scalar f = m(i, k) / d;
      for (int j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
    for (int j = k + 1; j < n; ++j) m(k, j) = Scalar(0);
  }
  return diag;
}

}  // namespace hx
