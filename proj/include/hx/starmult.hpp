#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hx/matrix.hpp"

namespace hx {

// At finite dimension every pre-*-representation lands in bounded operators,
// so the bounded multiplier subalgebra coincides with M(A) here and is not
// constructed separately; extend_rep always returns honest matrices.

// Finite-dimensional *-algebra over Q(i) given by structure constants:
// e_i e_j = sum_k mul[i][j][k] e_k, star(e_i) = sum_k star[i][k] e_k (star
// extends conjugate-linearly).  Associativity and the involution axioms are
// verified at construction.
class StarAlgebra {
 public:
  StarAlgebra(std::vector<std::vector<std::vector<Scalar>>> mul,
              std::vector<std::vector<Scalar>> star_mat,
              std::vector<std::string> names = {})
      : mul_(std::move(mul)), star_(std::move(star_mat)), names_(std::move(names)) {
    n_ = int(mul_.size());
    if (names_.empty())
      for (int i = 0; i < n_; ++i) names_.push_back("b" + std::to_string(i));
    validate();
  }

  static StarAlgebra matrix_algebra(int m) {
    // basis E_{pq}, index p*m+q
    int n = m * m;
    std::vector mul(static_cast<size_t>(n), std::vector(static_cast<size_t>(n), std::vector<Scalar>(static_cast<size_t>(n))));
    std::vector star(static_cast<size_t>(n), std::vector<Scalar>(static_cast<size_t>(n)));
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q)
        for (int r = 0; r < m; ++r)
          for (int s = 0; s < m; ++s)
            if (q == r) mul[static_cast<size_t>(p * m + q)][static_cast<size_t>(r * m + s)][static_cast<size_t>(p * m + s)] = Scalar(1);
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) star[static_cast<size_t>(p * m + q)][static_cast<size_t>(q * m + p)] = Scalar(1);
    return StarAlgebra(mul, star);
  }

  // C[X]/<X^m> with X* = X; basis 1, X, ..., X^{m-1}.
  static StarAlgebra truncated_polynomials(int m) {
    std::vector mul(static_cast<size_t>(m), std::vector(static_cast<size_t>(m), std::vector<Scalar>(static_cast<size_t>(m))));
    std::vector star(static_cast<size_t>(m), std::vector<Scalar>(static_cast<size_t>(m)));
    for (int i = 0; i < m; ++i) {
      star[static_cast<size_t>(i)][static_cast<size_t>(i)] = Scalar(1);
      for (int j = 0; j < m; ++j)
        if (i + j < m) mul[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(i + j)] = Scalar(1);
    }
    return StarAlgebra(mul, star);
  }

  // Algebra with zero product on a 1-dim space, x* = x.
  static StarAlgebra zero_product_line() {
    return StarAlgebra({{{Scalar(0)}}}, {{Scalar(1)}});
  }

  static StarAlgebra direct_sum(const StarAlgebra& a, const StarAlgebra& b) {
    int n = a.n_ + b.n_;
    std::vector mul(static_cast<size_t>(n), std::vector(static_cast<size_t>(n), std::vector<Scalar>(static_cast<size_t>(n))));
    std::vector star(static_cast<size_t>(n), std::vector<Scalar>(static_cast<size_t>(n)));
    for (int i = 0; i < a.n_; ++i) {
      for (int j = 0; j < a.n_; ++j)
        for (int k = 0; k < a.n_; ++k) mul[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)] = a.mul_[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)];
      for (int k = 0; k < a.n_; ++k) star[static_cast<size_t>(i)][static_cast<size_t>(k)] = a.star_[static_cast<size_t>(i)][static_cast<size_t>(k)];
    }
    for (int i = 0; i < b.n_; ++i) {
      for (int j = 0; j < b.n_; ++j)
        for (int k = 0; k < b.n_; ++k)
          mul[static_cast<size_t>(a.n_ + i)][static_cast<size_t>(a.n_ + j)][static_cast<size_t>(a.n_ + k)] = b.mul_[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)];
      for (int k = 0; k < b.n_; ++k) star[static_cast<size_t>(a.n_ + i)][static_cast<size_t>(a.n_ + k)] = b.star_[static_cast<size_t>(i)][static_cast<size_t>(k)];
    }
    return StarAlgebra(mul, star);
  }

  int dim() const { return n_; }
  const std::string& name(int i) const { return names_[static_cast<size_t>(i)]; }

  std::vector<Scalar> mul(const std::vector<Scalar>& a,
                          const std::vector<Scalar>& b) const {
    std::vector<Scalar> r(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      if (a[static_cast<size_t>(i)].is_zero()) continue;
      for (int j = 0; j < n_; ++j) {
        if (b[static_cast<size_t>(j)].is_zero()) continue;
        Scalar c = a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
        for (int k = 0; k < n_; ++k) r[static_cast<size_t>(k)] += c * mul_[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)];
      }
    }
    return r;
  }

  std::vector<Scalar> star(const std::vector<Scalar>& a) const {
    std::vector<Scalar> r(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      if (a[static_cast<size_t>(i)].is_zero()) continue;
      for (int k = 0; k < n_; ++k)
        r[static_cast<size_t>(k)] += a[static_cast<size_t>(i)].conj() * star_[static_cast<size_t>(i)][static_cast<size_t>(k)];
    }
    return r;
  }

  std::vector<Scalar> basis_vec(int i) const {
    std::vector<Scalar> v(static_cast<size_t>(n_));
    v[static_cast<size_t>(i)] = Scalar(1);
    return v;
  }

  // Matrix of left multiplication by a.
  Mat left_mult(const std::vector<Scalar>& a) const {
    Mat m(n_, n_);
    for (int j = 0; j < n_; ++j) {
      auto col = mul(a, basis_vec(j));
      for (int k = 0; k < n_; ++k) m(k, j) = col[static_cast<size_t>(k)];
    }
    return m;
  }

  std::optional<std::vector<Scalar>> unit() const {
    // solve u e_j = e_j and e_j u = e_j for all j
    Mat sys(2 * n_ * n_, n_);
    std::vector<Scalar> rhs(static_cast<size_t>(2 * n_ * n_));
    int row = 0;
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        for (int i = 0; i < n_; ++i) {
          sys(row, i) = mul_[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)];
          sys(row + 1, i) = mul_[static_cast<size_t>(j)][static_cast<size_t>(i)][static_cast<size_t>(k)];
        }
        rhs[static_cast<size_t>(row)] = rhs[static_cast<size_t>(row) + 1] = (j == k) ? Scalar(1) : Scalar(0);
        row += 2;
      }
    return solve(sys, rhs);
  }

 private:
  void validate() {
    require(n_ > 0 && int(star_.size()) == n_, "ShapeMismatch",
            "structure constant shapes");
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          auto lhs = mul(mul(basis_vec(i), basis_vec(j)), basis_vec(k));
          auto rhs = mul(basis_vec(i), mul(basis_vec(j), basis_vec(k)));
          require(lhs == rhs, "NonAssociative",
                  "basis triple (" + std::to_string(i) + "," + std::to_string(j) +
                      "," + std::to_string(k) + ")");
        }
    for (int i = 0; i < n_; ++i) {
      require(star(star(basis_vec(i))) == basis_vec(i), "ShapeMismatch",
              "star not involutive");
      for (int j = 0; j < n_; ++j)
        require(star(mul(basis_vec(i), basis_vec(j))) ==
                    mul(star(basis_vec(j)), star(basis_vec(i))),
                "ShapeMismatch", "star not anti-multiplicative");
    }
  }

  int n_ = 0;
  std::vector<std::vector<std::vector<Scalar>>> mul_;
  std::vector<std::vector<Scalar>> star_;
  std::vector<std::string> names_;
};

struct EssentialReport {
  bool essential = true;
  std::vector<Scalar> witness;  // a != 0 with aA = 0
};

inline EssentialReport is_essential(const StarAlgebra& a) {
  int n = a.dim();
  Mat sys(n * n, n);
  for (int j = 0; j < n; ++j) {
    // rows (j,k): coefficient of e_k in e_i e_j, as a function of i
    for (int i = 0; i < n; ++i) {
      auto prod = a.mul(a.basis_vec(i), a.basis_vec(j));
      for (int k = 0; k < n; ++k) sys(j * n + k, i) = prod[static_cast<size_t>(k)];
    }
  }
  auto ker = kernel_basis(sys);
  if (ker.empty()) return {};
  return {false, ker.front()};
}

struct SemiprimeReport {
  bool semiprime = true;
  std::vector<Scalar> witness;  // a != 0 with a A a = 0 (and a a a = 0)
};

// Radical route: over a characteristic-zero field the radical of the
// unitization is the kernel of the trace form (b, c) -> tr(L_b L_c); a last
// nonzero power of the radical yields a witness with a A a = 0.
inline SemiprimeReport is_semiprime(const StarAlgebra& a) {
  int n = a.dim();
  int m = n + 1;  // unitization, unit appended as index n
  auto umul = [&](const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
    std::vector<Scalar> r(static_cast<size_t>(m));
    std::vector<Scalar> xa(x.begin(), x.begin() + n), ya(y.begin(), y.begin() + n);
    auto prod = a.mul(xa, ya);
    for (int k = 0; k < n; ++k)
      r[static_cast<size_t>(k)] = prod[static_cast<size_t>(k)] + x[static_cast<size_t>(n)] * y[static_cast<size_t>(k)] + y[static_cast<size_t>(n)] * x[static_cast<size_t>(k)];
    r[static_cast<size_t>(n)] = x[static_cast<size_t>(n)] * y[static_cast<size_t>(n)];
    return r;
  };
  auto ubasis = [&](int i) {
    std::vector<Scalar> v(static_cast<size_t>(m));
    v[static_cast<size_t>(i)] = Scalar(1);
    return v;
  };
  auto left_mat = [&](const std::vector<Scalar>& x) {
    Mat t(m, m);
    for (int j = 0; j < m; ++j) {
      auto col = umul(x, ubasis(j));
      for (int k = 0; k < m; ++k) t(k, j) = col[static_cast<size_t>(k)];
    }
    return t;
  };
  std::vector<Mat> lmats;
  for (int i = 0; i < m; ++i) lmats.push_back(left_mat(ubasis(i)));
  Mat gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Mat p = lmats[static_cast<size_t>(i)] * lmats[static_cast<size_t>(j)];
      Scalar tr(0);
      for (int k = 0; k < m; ++k) tr += p(k, k);
      gram(i, j) = tr;
    }
  auto rad = kernel_basis(gram);
  if (rad.empty()) return {};
  for (const auto& v : rad)
    require(v[static_cast<size_t>(n)].is_zero(), "ShapeMismatch",
            "radical escaped the non-unital part");

  // successive powers of the radical until they vanish
  auto span_reduce = [&](std::vector<std::vector<Scalar>> vecs) {
    Mat rows(int(vecs.size()), m);
    for (size_t r = 0; r < vecs.size(); ++r)
      for (int c = 0; c < m; ++c) rows(int(r), c) = vecs[r][static_cast<size_t>(c)];
    auto pivots = row_reduce(rows);
    std::vector<std::vector<Scalar>> basis;
    for (size_t r = 0; r < pivots.size(); ++r) {
      std::vector<Scalar> v(static_cast<size_t>(m));
      for (int c = 0; c < m; ++c) v[static_cast<size_t>(c)] = rows(int(r), c);
      basis.push_back(v);
    }
    return basis;
  };
  std::vector<std::vector<Scalar>> power = span_reduce(rad), last = power;
  while (!power.empty()) {
    last = power;
    std::vector<std::vector<Scalar>> next;
    for (const auto& x : power)
      for (const auto& y : rad) next.push_back(umul(x, y));
    power = span_reduce(next);
  }
  std::vector<Scalar> w = last.front();
  // verify the witness: w e_k w = 0 for all k, and w (unit) w = w^2 = 0
  for (int k = 0; k <= n; ++k) {
    auto p = umul(umul(w, ubasis(k)), w);
    for (const auto& c : p)
      require(c.is_zero(), "ShapeMismatch", "semiprime witness failed verification");
  }
  return {false, std::vector<Scalar>(w.begin(), w.begin() + n)};
}

// A multiplier as a pair of linear maps on A with <T a, b> = <a, T* b> for
// the pairing <a, b> = a* b.
struct AdjointableMap {
  Mat t;
  Mat t_star;
};

// Solves the adjointability constraints as an exact linear system and
// returns a complex basis of M(A) as (T, T*) pairs.  The unknowns are split
// into real and imaginary parts because star conjugates T; the resulting
// real solution space is then reduced to a Q(i)-basis (it is closed under
// (T,S) -> (iT,-iS), so the real span of the T's is already a complex space).
inline std::vector<AdjointableMap> multiplier_algebra(const StarAlgebra& a) {
  auto ess = is_essential(a);
  require(ess.essential, "NotEssential", "multiplier algebra of a non-essential algebra");
  int n = a.dim();
  int nt = n * n;
  int cols = 4 * nt;
  auto t_re = [&](int k, int i) { return k * n + i; };
  auto t_im = [&](int k, int i) { return nt + k * n + i; };
  auto s_re = [&](int k, int i) { return 2 * nt + k * n + i; };
  auto s_im = [&](int k, int i) { return 3 * nt + k * n + i; };

  // pairings P[k][j] = star(e_k) e_j in coordinates
  std::vector<std::vector<std::vector<Scalar>>> p(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      p[static_cast<size_t>(k)].push_back(a.mul(a.star(a.basis_vec(k)), a.basis_vec(j)));

  // constraint (i,j): sum_k conj(T_{ki}) star(e_k) e_j = sum_k S_{kj} star(e_i) e_k
  Mat sys(2 * n * n * n, cols);
  int row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int comp = 0; comp < n; ++comp) {
        for (int k = 0; k < n; ++k) {
          Scalar c = p[static_cast<size_t>(k)][static_cast<size_t>(j)][static_cast<size_t>(comp)];
          sys(row, t_re(k, i)) += Scalar(c.re());
          sys(row, t_im(k, i)) += Scalar(c.im());
          sys(row + 1, t_re(k, i)) += Scalar(c.im());
          sys(row + 1, t_im(k, i)) -= Scalar(c.re());
          Scalar d = p[static_cast<size_t>(i)][static_cast<size_t>(k)][static_cast<size_t>(comp)];
          sys(row, s_re(k, j)) -= Scalar(d.re());
          sys(row, s_im(k, j)) += Scalar(d.im());
          sys(row + 1, s_re(k, j)) -= Scalar(d.im());
          sys(row + 1, s_im(k, j)) -= Scalar(d.re());
        }
        row += 2;
      }
  auto ker = kernel_basis(sys);

  // complex row-reduction of the T parts
  Mat tstack(int(ker.size()), nt);
  for (size_t r = 0; r < ker.size(); ++r)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        tstack(int(r), k * n + i) = Scalar(ker[r][static_cast<size_t>(t_re(k, i))].re(),
                                           ker[r][static_cast<size_t>(t_im(k, i))].re());
  auto pivots = row_reduce(tstack);

  std::vector<AdjointableMap> basis;
  for (size_t r = 0; r < pivots.size(); ++r) {
    AdjointableMap m{Mat(n, n), Mat(n, n)};
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) m.t(k, i) = tstack(int(r), k * n + i);
    // the adjoint is the unique solution of the S-linear system given T
    Mat ssys(n * n * n, nt);
    std::vector<Scalar> rhs(static_cast<size_t>(n * n * n));
    int rr = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int comp = 0; comp < n; ++comp) {
          for (int k = 0; k < n; ++k) {
            ssys(rr, k * n + j) += p[static_cast<size_t>(i)][static_cast<size_t>(k)][static_cast<size_t>(comp)];
            rhs[static_cast<size_t>(rr)] += m.t(k, i).conj() * p[static_cast<size_t>(k)][static_cast<size_t>(j)][static_cast<size_t>(comp)];
          }
          ++rr;
        }
    auto sol = solve(ssys, rhs);
    require(sol.has_value(), "NotEssential", "adjoint reconstruction failed");
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) m.t_star(k, i) = (*sol)[static_cast<size_t>(k * n + i)];
    basis.push_back(std::move(m));
  }
  return basis;
}

// Exact nondegenerate *-representation of A on Q(i)^d: basis element -> Mat.
struct ExactRep {
  std::vector<Mat> images;  // one d x d matrix per basis element
  int space_dim = 0;
};

// pi-tilde(T) on V = pi(A) H, via pi~(T)[sum pi(a_i) xi_i] = sum pi(T a_i) xi_i.
// Returns the unique matrix when the extension is well-defined (which
// nondegeneracy guarantees); verified by exact residual and a second
// spanning-set ordering.
inline Mat extend_rep(const StarAlgebra& a, const ExactRep& rep, const Mat& t_on_a) {
  int n = a.dim(), d = rep.space_dim;
  // spanning set: columns pi(e_i) delta_j
  Mat s(d, n * d), st(d, n * d);
  for (int i = 0; i < n; ++i) {
    // T e_i as coordinates
    std::vector<Scalar> tei(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) tei[static_cast<size_t>(k)] = t_on_a(k, i);
    Mat pit(d, d);
    for (int k = 0; k < n; ++k)
      if (!tei[static_cast<size_t>(k)].is_zero()) pit = pit + tei[static_cast<size_t>(k)] * rep.images[static_cast<size_t>(k)];
    for (int j = 0; j < d; ++j)
      for (int r = 0; r < d; ++r) {
        s(r, i * d + j) = rep.images[static_cast<size_t>(i)](r, j);
        st(r, i * d + j) = pit(r, j);
      }
  }
  require(rank(s) == d, "Degenerate", "pi(A)H does not span the space");
  // solve X s = st exactly, i.e. s^T X^T = st^T column by column
  Mat strans(n * d, d), sttrans(n * d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < n * d; ++c) {
      strans(c, r) = s(r, c);
      sttrans(c, r) = st(r, c);
    }
  Mat x(d, d);
  for (int col = 0; col < d; ++col) {
    std::vector<Scalar> b(static_cast<size_t>(n * d));
    for (int r = 0; r < n * d; ++r) b[static_cast<size_t>(r)] = sttrans(r, col);
    auto sol = solve(strans, b);
    require(sol.has_value(), "Degenerate", "extension is not well-defined");
    for (int c = 0; c < d; ++c) x(col, c) = (*sol)[static_cast<size_t>(c)];
  }
  require(x * s == st, "Degenerate", "exact residual nonzero");
  return x;
}

// Lazily evaluated finitely supported functions on a countable index set:
// the shipped non-unital essential backend.  Elements are finite maps; a
// multiplier is any pointwise symbol, recovered from an adjointable map by
// probing delta functions.
namespace fin_supp {

using Fn = std::map<long, Scalar>;

inline Fn delta(long i, Scalar c = Scalar(1)) { return {{i, c}}; }

inline Fn mul(const Fn& a, const Fn& b) {
  Fn r;
  for (const auto& [i, c] : a) {
    auto it = b.find(i);
    if (it != b.end() && !(c * it->second).is_zero()) r[i] = c * it->second;
  }
  return r;
}

inline Fn star(const Fn& a) {
  Fn r;
  for (const auto& [i, c] : a) r[i] = c.conj();
  return r;
}

// <a, b> = a* b
inline Fn pairing(const Fn& a, const Fn& b) { return mul(star(a), b); }

using Operator = std::function<Fn(const Fn&)>;

// The diagonal symbol of an adjointable map, one point at a time.
inline Scalar multiplier_symbol(const Operator& t, long i) {
  Fn image = t(delta(i));
  auto it = image.find(i);
  return it == image.end() ? Scalar(0) : it->second;
}

// Checks adjointability of (t, t_star) on delta functions over a window.
inline bool adjointable_on(const Operator& t, const Operator& t_star, long lo,
                           long hi) {
  for (long i = lo; i <= hi; ++i)
    for (long j = lo; j <= hi; ++j)
      if (pairing(t(delta(i)), delta(j)) != pairing(delta(i), t_star(delta(j))))
        return false;
  return true;
}

}  // namespace fin_supp

}  // namespace hx
