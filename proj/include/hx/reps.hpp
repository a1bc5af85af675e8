#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "hx/crossed.hpp"

// Numeric representation theory over complex doubles with tolerance 1e-9.
// Every operator in sight is a finite matrix, so boundedness of the blocks
// pi~([a]) mu(...) pi~(1_...) holds automatically and is not checked.
namespace hx::reps {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline std::complex<double> to_c(const Scalar& s) {
  return {s.re().to_double(), s.im().to_double()};
}

inline double max_norm(const CMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

constexpr double kTol = 1e-9;
constexpr double kRankCutoff = 1e-9;

// Sparse structure constants of one of the exact algebras, in a fixed basis.
// Unlike StarAlgebra this skips re-validation: the source objects already
// verify their axioms exactly.
struct AlgebraTable {
  int dim = 0;
  std::vector<std::vector<std::vector<std::pair<int, Scalar>>>> prod;
  std::vector<std::vector<std::pair<int, Scalar>>> star;  // conjugate-linear
  std::vector<Scalar> trace;  // positive trace functional (for regular reps)
};

inline AlgebraTable hecke_algebra_table(const HeckePairPtr& pair) {
  AlgebraTable t;
  auto reps_list = pair->double_coset_reps();
  t.dim = int(reps_list.size());
  std::map<int, int> pos;
  for (int i = 0; i < t.dim; ++i) pos[reps_list[static_cast<size_t>(i)]] = i;
  t.prod.assign(static_cast<size_t>(t.dim), {});
  t.star.assign(static_cast<size_t>(t.dim), {});
  t.trace.assign(static_cast<size_t>(t.dim), Scalar(0));
  for (int i = 0; i < t.dim; ++i) {
    t.prod[static_cast<size_t>(i)].assign(static_cast<size_t>(t.dim), {});
    for (int j = 0; j < t.dim; ++j) {
      auto p = hecke_mul(HeckeElement::basis(pair, reps_list[static_cast<size_t>(i)]),
                         HeckeElement::basis(pair, reps_list[static_cast<size_t>(j)]));
      for (const auto& [rep, c] : p.coeffs())
        t.prod[static_cast<size_t>(i)][static_cast<size_t>(j)].push_back({pos.at(rep), c});
    }
    auto st = hecke_star(HeckeElement::basis(pair, reps_list[static_cast<size_t>(i)]));
    for (const auto& [rep, c] : st.coeffs())
      t.star[static_cast<size_t>(i)].push_back({pos.at(rep), c});
  }
  int e = pair->group()->identity();
  // tau(f) = f(Gamma); <f1,f2> = tau(f1* f2) = sum L(g) conj(f1) f2
  for (int i = 0; i < t.dim; ++i)
    t.trace[static_cast<size_t>(i)] = (reps_list[static_cast<size_t>(i)] == pair->dcoset_rep(e))
                             ? Scalar(1)
                             : Scalar(0);
  return t;
}

// Basis of C_c(A/H): (orbit, row, col), orbit-major then row-major.
struct OrbitBasis {
  OrbitBundlePtr bundle;
  std::vector<std::tuple<int, int, int>> items;
  std::vector<int> offset;  // per orbit

  explicit OrbitBasis(OrbitBundlePtr b) : bundle(std::move(b)) {
    int n = bundle->orbits()->num_orbits();
    offset.assign(static_cast<size_t>(n) + 1, 0);
    for (int o = 0; o < n; ++o) {
      offset[static_cast<size_t>(o) + 1] =
          offset[static_cast<size_t>(o)] + bundle->fiber_rows(o) * bundle->fiber_cols(o);
      for (int i = 0; i < bundle->fiber_rows(o); ++i)
        for (int j = 0; j < bundle->fiber_cols(o); ++j) items.push_back({o, i, j});
    }
  }

  int dim() const { return int(items.size()); }

  OrbitSection element(int idx) const {
    auto [o, i, j] = items[static_cast<size_t>(idx)];
    Mat m(bundle->fiber_rows(o), bundle->fiber_cols(o));
    m(i, j) = Scalar(1);
    OrbitSection s(bundle);
    s.set(o, m);
    return s;
  }

  std::vector<Scalar> coords(const OrbitSection& s) const {
    std::vector<Scalar> v(static_cast<size_t>(dim()));
    for (const auto& [o, m] : s.data())
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
          v[static_cast<size_t>(offset[static_cast<size_t>(o)] + i * m.cols() + j)] = m(i, j);
    return v;
  }
};

inline AlgebraTable orbit_section_table(const OrbitBundlePtr& bundle) {
  OrbitBasis basis(bundle);
  AlgebraTable t;
  t.dim = basis.dim();
  t.prod.assign(static_cast<size_t>(t.dim), {});
  t.star.assign(static_cast<size_t>(t.dim), {});
  t.trace.assign(static_cast<size_t>(t.dim), Scalar(0));
  for (int i = 0; i < t.dim; ++i) {
    t.prod[static_cast<size_t>(i)].assign(static_cast<size_t>(t.dim), {});
    OrbitSection ei = basis.element(i);
    for (int j = 0; j < t.dim; ++j) {
      auto coords = basis.coords(ei * basis.element(j));
      for (int k = 0; k < t.dim; ++k)
        if (!coords[static_cast<size_t>(k)].is_zero()) t.prod[static_cast<size_t>(i)][static_cast<size_t>(j)].push_back({k, coords[static_cast<size_t>(k)]});
    }
    auto st = basis.coords(ei.star());
    for (int k = 0; k < t.dim; ++k)
      if (!st[static_cast<size_t>(k)].is_zero()) t.star[static_cast<size_t>(i)].push_back({k, st[static_cast<size_t>(k)]});
    auto [o, r, c] = basis.items[static_cast<size_t>(i)];
    if (bundle->orbits()->groupoid()->is_unit(o) && r == c)
      t.trace[static_cast<size_t>(i)] = Scalar(1);
  }
  return t;
}

// Crossed product on the canonical span basis.
struct CrossedTable {
  SystemPtr sys;
  std::vector<CrossedBasisItem> items;
  AlgebraTable alg;

  explicit CrossedTable(SystemPtr s) : sys(std::move(s)) {
    items = crossed_basis(sys);
    alg.dim = int(items.size());
    alg.prod.assign(static_cast<size_t>(alg.dim), {});
    alg.star.assign(static_cast<size_t>(alg.dim), {});
    alg.trace.assign(static_cast<size_t>(alg.dim), Scalar(0));
    std::vector<CrossedElement> basis_elems;
    for (const auto& it : items) basis_elems.push_back(basis_element(sys, it));
    for (int i = 0; i < alg.dim; ++i) {
      alg.prod[static_cast<size_t>(i)].assign(static_cast<size_t>(alg.dim), {});
      for (int j = 0; j < alg.dim; ++j) {
        auto coords = crossed_coords(sys, conv(basis_elems[static_cast<size_t>(i)], basis_elems[static_cast<size_t>(j)]));
        for (int k = 0; k < alg.dim; ++k)
          if (!coords[static_cast<size_t>(k)].is_zero())
            alg.prod[static_cast<size_t>(i)][static_cast<size_t>(j)].push_back({k, coords[static_cast<size_t>(k)]});
      }
      auto st = crossed_coords(sys, star(basis_elems[static_cast<size_t>(i)]));
      for (int k = 0; k < alg.dim; ++k)
        if (!st[static_cast<size_t>(k)].is_zero()) alg.star[static_cast<size_t>(i)].push_back({k, st[static_cast<size_t>(k)]});
    }
  }

  int index_of(int g, int orbit, int i, int j) const {
    for (size_t k = 0; k < items.size(); ++k) {
      const auto& it = items[k];
      if (it.g == g && it.orbit == orbit && it.i == i && it.j == j) return int(k);
    }
    fail("ScenarioMismatch", "crossed basis item not found");
  }
};

// Numeric *-representation: one complex matrix per basis element of an exact
// algebra, checked against the structure constants within tolerance.
struct Rep {
  std::vector<CMat> images;
  int space_dim = 0;

  CMat apply(const std::vector<Scalar>& coeffs) const {
    CMat m = CMat::Zero(space_dim, space_dim);
    for (size_t i = 0; i < images.size(); ++i)
      if (!coeffs[i].is_zero()) m += to_c(coeffs[i]) * images[i];
    return m;
  }
};

inline double star_homo_residual(const AlgebraTable& t, const Rep& rep) {
  double r = 0;
  for (int i = 0; i < t.dim; ++i) {
    for (int j = 0; j < t.dim; ++j) {
      CMat rhs = CMat::Zero(rep.space_dim, rep.space_dim);
      for (const auto& [k, c] : t.prod[static_cast<size_t>(i)][static_cast<size_t>(j)])
        rhs += to_c(c) * rep.images[static_cast<size_t>(k)];
      r = std::max(r, max_norm(rep.images[static_cast<size_t>(i)] * rep.images[static_cast<size_t>(j)] - rhs));
    }
    CMat st = CMat::Zero(rep.space_dim, rep.space_dim);
    for (const auto& [k, c] : t.star[static_cast<size_t>(i)]) st += to_c(c) * rep.images[static_cast<size_t>(k)];
    r = std::max(r, max_norm(rep.images[static_cast<size_t>(i)].adjoint() - st));
  }
  return r;
}

// Orthonormal basis of pi(A)H, by rank-revealing SVD with cutoff 1e-9.
inline CMat image_space_basis(const Rep& rep) {
  int d = rep.space_dim, n = int(rep.images.size());
  CMat stacked(d, n * d);
  for (int i = 0; i < n; ++i) stacked.middleCols(i * d, d) = rep.images[static_cast<size_t>(i)];
  Eigen::JacobiSVD<CMat> svd(stacked, Eigen::ComputeThinU);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > kRankCutoff) ++r;
  return svd.matrixU().leftCols(r);
}

inline bool nondegenerate(const Rep& rep) {
  return image_space_basis(rep).cols() == rep.space_dim;
}

// Least-squares extension of the representation to a multiplier whose action
// on the algebra is given in basis coordinates (column k = coordinates of
// T e_k).  This is the pi-tilde recipe: pi~(T)[sum pi(a_i) xi] = sum pi(T a_i) xi.
inline CMat pi_tilde(const Rep& rep, const std::vector<std::vector<Scalar>>& t_action,
                     double* residual = nullptr) {
  int d = rep.space_dim, n = int(rep.images.size());
  CMat s(d, n * d), st(d, n * d);
  for (int i = 0; i < n; ++i) {
    s.middleCols(i * d, d) = rep.images[static_cast<size_t>(i)];
    st.middleCols(i * d, d) = rep.apply(t_action[static_cast<size_t>(i)]);
  }
  // minimal-norm X with X s = st
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(s.transpose());
  CMat x = cod.solve(st.transpose()).transpose();
  if (residual) *residual = max_norm(x * s - st);
  return x;
}

// Regular pre-representation of the Hecke algebra on C[G/Gamma]: the
// transpose of the right-translation action, mu(Gamma g Gamma) delta_u =
// sum over left-coset reps r of delta_{u r^-1 Gamma}.
inline std::map<int, CMat> regular_rep(const HeckePairPtr& pair) {
  const auto& g = pair->group();
  const auto& cosets = pair->coset_reps();
  int n = int(cosets.size());
  std::map<int, int> pos;
  for (int i = 0; i < n; ++i) pos[cosets[static_cast<size_t>(i)]] = i;
  std::map<int, CMat> mu;
  for (int rep : pair->double_coset_reps()) {
    CMat right = CMat::Zero(n, n);  // right-translation matrix R
    for (int u = 0; u < n; ++u)
      for (int r : pair->left_coset_reps_of(rep)) {
        int w = pos.at(pair->coset_rep(g->mul(cosets[static_cast<size_t>(u)], r)));
        right(w, u) += 1.0;
      }
    mu[rep] = right.transpose();
  }
  return mu;
}

struct CovarianceReport {
  bool ok = true;
  double max_residual = 0;
  double mu_homo_residual = 0;
  double unital_residual = 0;
  bool free_forms_agree = true;
  std::vector<std::tuple<int, int, int>> failures;  // (g, s, basis index)
};

// Covariant pair: pi is a Rep of C_c(A/Gamma) in the OrbitBasis order; mu
// maps each double-coset rep to an operator on W = pi(C_c(A/Gamma))H.
struct CovariantPair {
  Rep pi;
  std::map<int, CMat> mu;
};

// pi-tilde of 1_{unit orbit of u under Gamma}: multiplication action computed
// exactly in C_c(A/Gamma), then extended by least squares.
inline CMat pi_tilde_unit(const OrbitBasis& basis, const Rep& pi, int unit,
                          double* residual = nullptr) {
  OrbitSection ind(basis.bundle);
  const auto& orbits = basis.bundle->orbits();
  int uo = orbits->orbit_of(unit);
  ind.set(uo, Mat::identity(basis.bundle->fiber_rows(uo)));
  std::vector<std::vector<Scalar>> action;
  for (int k = 0; k < basis.dim(); ++k)
    action.push_back(basis.coords(ind * basis.element(k)));
  return pi_tilde(pi, action, residual);
}

inline double project_residual(const CMat& w, const CMat& diff) {
  return max_norm(w.adjoint() * diff * w);
}

// pi~(1_{u Gamma}) for every unit, computed once.
class UnitExtensionCache {
 public:
  UnitExtensionCache(const OrbitBasis& basis, const Rep& pi)
      : basis_(basis), pi_(pi) {}

  const CMat& at(int unit) {
    int key = basis_.bundle->orbits()->orbit_of(unit);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, pi_tilde_unit(basis_, pi_, unit)).first->second;
  }

 private:
  const OrbitBasis& basis_;
  const Rep& pi_;
  std::map<int, CMat> cache_;
};

// Left regular representation of an exact algebra on itself, with the inner
// product <a,b> = tau(a* b).  The canonical bases used here are orthonormal
// for their trace functionals, which is asserted rather than fixed up.
inline Rep left_regular(const AlgebraTable& t) {
  auto tau = [&](const std::vector<Scalar>& v) {
    Scalar s(0);
    for (int k = 0; k < t.dim; ++k) s += t.trace[static_cast<size_t>(k)] * v[static_cast<size_t>(k)];
    return s;
  };
  auto mul_coords = [&](int i, const std::vector<Scalar>& v) {
    std::vector<Scalar> r(static_cast<size_t>(t.dim));
    for (int a = 0; a < t.dim; ++a) {
      if (v[static_cast<size_t>(a)].is_zero()) continue;
      for (const auto& [k, c] : t.prod[static_cast<size_t>(i)][static_cast<size_t>(a)]) r[static_cast<size_t>(k)] += v[static_cast<size_t>(a)] * c;
    }
    return r;
  };
  for (int i = 0; i < t.dim; ++i)
    for (int j = 0; j < t.dim; ++j) {
      std::vector<Scalar> star_i(static_cast<size_t>(t.dim)), ej(static_cast<size_t>(t.dim));
      for (const auto& [k, c] : t.star[static_cast<size_t>(i)]) star_i[static_cast<size_t>(k)] = c;
      ej[static_cast<size_t>(j)] = Scalar(1);
      std::vector<Scalar> prod(static_cast<size_t>(t.dim));
      for (int a = 0; a < t.dim; ++a) {
        if (star_i[static_cast<size_t>(a)].is_zero()) continue;
        for (const auto& [k, c] : t.prod[static_cast<size_t>(a)][static_cast<size_t>(j)]) prod[static_cast<size_t>(k)] += star_i[static_cast<size_t>(a)] * c;
      }
      Scalar g = tau(prod);
      require(g == ((i == j) ? Scalar(1) : Scalar(0)), "Degenerate",
              "canonical basis is not orthonormal for the trace functional");
    }
  Rep out;
  out.space_dim = t.dim;
  for (int i = 0; i < t.dim; ++i) {
    CMat m = CMat::Zero(t.dim, t.dim);
    for (int j = 0; j < t.dim; ++j) {
      std::vector<Scalar> ej(static_cast<size_t>(t.dim));
      ej[static_cast<size_t>(j)] = Scalar(1);
      auto col = mul_coords(i, ej);
      for (int k = 0; k < t.dim; ++k) m(k, j) = to_c(col[static_cast<size_t>(k)]);
    }
    out.images.push_back(m);
  }
  return out;
}

// Matrix of alpha-bar_g on the C_c(A/Gamma) basis; requires that alpha-bar_g
// preserves C_c(A/Gamma), which holds when Gamma is normal.
inline CMat alpha_bar_matrix(const SystemPtr& sys, const OrbitBasis& basis, int g) {
  CMat m = CMat::Zero(basis.dim(), basis.dim());
  const auto& act = *sys->action()->groupoid_action();
  for (int j = 0; j < basis.dim(); ++j) {
    auto [o, ei, ej] = basis.items[static_cast<size_t>(j)];
    int x = basis.bundle->orbits()->rep(o);
    Mat a(basis.bundle->fiber_rows(o), basis.bundle->fiber_cols(o));
    a(ei, ej) = Scalar(1);
    OrbitSection moved = OrbitSection::elementary(
        basis.bundle, act.act(x, sys->group()->inv(g)), sys->action()->alpha(g, x, a));
    auto col = basis.coords(moved);
    for (int k = 0; k < basis.dim(); ++k) m(k, j) = to_c(col[static_cast<size_t>(k)]);
  }
  return m;
}

// Checks the covariance identity
//   mu(GgG) pi([a]_{xG}) mu(GsG) =
//     sum_{u,v,gamma} Delta(g) N_{u^-1,v}^{s(x)gamma} / L(u^-1 v)
//       pi~([alpha_{u^-1 gamma^-1}(a)]_{x gamma u G}) mu(G u^-1 v G)
//       pi~(1_{s(x) gamma v G})
// for all double-coset pairs and all section basis elements; on free
// scenarios the simplified free-action form is evaluated as well and both
// must agree.
inline CovarianceReport check_covariant(const SystemPtr& sys,
                                        const CovariantPair& pair,
                                        double tol = kTol) {
  CovarianceReport rep;
  const auto& grp = sys->group();
  const auto& act = *sys->action()->groupoid_action();
  const auto& gd = sys->bundle()->base();
  auto gamma_e_bundle = sys->gamma_bundle(grp->identity());
  OrbitBasis basis(gamma_e_bundle);
  require(int(pair.pi.images.size()) == basis.dim(), "ShapeMismatch",
          "pi images do not match the C_c(A/Gamma) basis");
  require(nondegenerate(pair.pi), "Degenerate", "pi is degenerate");
  CMat w = image_space_basis(pair.pi);

  // unitality of mu: the identity double coset must act as the identity on W
  auto hecke_tab = hecke_algebra_table(sys->pair());
  {
    int erep = sys->pair()->dcoset_rep(grp->identity());
    CMat i_w = CMat::Identity(pair.pi.space_dim, pair.pi.space_dim);
    rep.unital_residual = project_residual(w, pair.mu.at(erep) - i_w);
    require(rep.unital_residual <= tol, "NotUnital", "mu(Gamma) != id on W");
  }
  // mu must be a pre-*-homomorphism of the Hecke algebra on W
  {
    auto dreps = sys->pair()->double_coset_reps();
    for (size_t i = 0; i < dreps.size(); ++i)
      for (size_t j = 0; j < dreps.size(); ++j) {
        CMat rhs = CMat::Zero(pair.pi.space_dim, pair.pi.space_dim);
        for (const auto& [k, c] : hecke_tab.prod[i][j])
          rhs += to_c(c) * pair.mu.at(dreps[static_cast<size_t>(k)]);
        rep.mu_homo_residual =
            std::max(rep.mu_homo_residual,
                     project_residual(w, pair.mu.at(dreps[i]) * pair.mu.at(dreps[j]) - rhs));
      }
    for (size_t i = 0; i < dreps.size(); ++i) {
      CMat st = CMat::Zero(pair.pi.space_dim, pair.pi.space_dim);
      for (const auto& [k, c] : hecke_tab.star[i]) st += to_c(c) * pair.mu.at(dreps[static_cast<size_t>(k)]);
      rep.mu_homo_residual = std::max(
          rep.mu_homo_residual,
          max_norm((w.adjoint() * pair.mu.at(dreps[i]) * w).adjoint() -
                   w.adjoint() * st * w));
    }
  }

  UnitExtensionCache units(basis, pair.pi);
  bool free_units = sys->free_on_units();
  for (int g : sys->pair()->double_coset_reps())
    for (int s : sys->pair()->double_coset_reps())
      for (int bi = 0; bi < basis.dim(); ++bi) {
        auto [o, ei, ej] = basis.items[static_cast<size_t>(bi)];
        int x = gamma_e_bundle->orbits()->rep(o);
        Mat a(gamma_e_bundle->fiber_rows(o), gamma_e_bundle->fiber_cols(o));
        a(ei, ej) = Scalar(1);
        int y = gd->src(x);
        CMat lhs = pair.mu.at(g) * pair.pi.images[static_cast<size_t>(bi)] * pair.mu.at(s);

        auto term_sum = [&](bool use_general_formula) {
          CMat acc = CMat::Zero(pair.pi.space_dim, pair.pi.space_dim);
          for (int u : sys->pair()->left_coset_reps_of(sys->pair()->dcoset_rep(grp->inv(g))))
            for (int v : sys->pair()->left_coset_reps_of(sys->pair()->dcoset_rep(s))) {
              int uv = grp->mul(grp->inv(u), v);
              if (!use_general_formula) {
                OrbitSection sec = OrbitSection::elementary(
                    gamma_e_bundle, act.act(x, u),
                    sys->action()->alpha(grp->inv(u), x, a));
                CMat t1 = pair.pi.apply(basis.coords(sec));
                const CMat& t3 = units.at(act.act(y, v));
                // coefficient is exactly 1 on the free path
                acc += t1 * pair.mu.at(sys->pair()->dcoset_rep(uv)) * t3;
                continue;
              }
              CountingData cd = counting(*sys, u, v, y);
              for (int c : cd.E) {
                CountingData nd = counting(*sys, grp->inv(u), v, act.act(y, c));
                double coeff = (Rational(sys->pair()->delta(g)) * nd.N /
                                Rational(sys->pair()->stats(uv).L))
                                   .to_double();
                int cu = grp->mul(c, u);
                OrbitSection sec = OrbitSection::elementary(
                    gamma_e_bundle, act.act(x, cu),
                    sys->action()->alpha(grp->mul(grp->inv(u), grp->inv(c)), x, a));
                CMat t1 = pair.pi.apply(basis.coords(sec));
                const CMat& t3 = units.at(act.act(y, grp->mul(c, v)));
                acc += coeff * t1 * pair.mu.at(sys->pair()->dcoset_rep(uv)) * t3;
              }
            }
          return acc;
        };

        CMat rhs = term_sum(true);
        double res = project_residual(w, lhs - rhs);
        if (free_units) {
          CMat rhs_free = term_sum(false);  // simplified free-action form
          double agree = project_residual(w, rhs - rhs_free);
          if (agree > tol) rep.free_forms_agree = false;
        }
        rep.max_residual = std::max(rep.max_residual, res);
        if (res > tol) {
          rep.ok = false;
          rep.failures.push_back({g, s, bi});
        }
      }
  return rep;
}

// Integrated form: Phi([a]_{xG} * GgG * 1_{s(x)gG}) =
//   pi~([a]_{xG}) mu(GgG) pi~(1_{s(x) g G}), extended linearly over the
// canonical basis.
inline Rep integrated_form(const SystemPtr& sys, const CovariantPair& pair,
                           const CrossedTable& ct) {
  const auto& grp = sys->group();
  const auto& act = *sys->action()->groupoid_action();
  const auto& gd = sys->bundle()->base();
  auto gamma_e_bundle = sys->gamma_bundle(grp->identity());
  OrbitBasis basis(gamma_e_bundle);
  Rep out;
  out.space_dim = pair.pi.space_dim;
  UnitExtensionCache units(basis, pair.pi);
  for (const auto& it : ct.items) {
    Mat a(sys->gamma_bundle(it.g)->fiber_rows(it.orbit),
          sys->gamma_bundle(it.g)->fiber_cols(it.orbit));
    a(it.i, it.j) = Scalar(1);
    OrbitSection sec = OrbitSection::elementary(gamma_e_bundle, it.x, a);
    CMat t1 = pair.pi.apply(basis.coords(sec));
    const CMat& t3 = units.at(act.act(gd->src(it.x), it.g));
    out.images.push_back(t1 * pair.mu.at(it.g) * t3);
  }
  return out;
}

// From a nondegenerate representation of the crossed product back to a
// covariant pair: restrict to the embedded C_c(A/Gamma) and extend to the
// Hecke algebra as multipliers by least squares.
inline CovariantPair restrict_rep(const SystemPtr& sys, const Rep& phi,
                                  const CrossedTable& ct) {
  require(nondegenerate(phi), "Degenerate", "Phi is degenerate");
  const auto& grp = sys->group();
  auto gamma_e_bundle = sys->gamma_bundle(grp->identity());
  OrbitBasis basis(gamma_e_bundle);
  CovariantPair out;
  out.pi.space_dim = phi.space_dim;
  int erep = sys->pair()->dcoset_rep(grp->identity());
  for (int k = 0; k < basis.dim(); ++k) {
    auto [o, i, j] = basis.items[static_cast<size_t>(k)];
    out.pi.images.push_back(phi.images[static_cast<size_t>(ct.index_of(erep, o, i, j))]);
  }
  std::vector<CrossedElement> belems;
  for (const auto& it : ct.items) belems.push_back(basis_element(sys, it));
  for (int g : sys->pair()->double_coset_reps()) {
    CrossedElement hecke_g =
        embed_hecke(sys, HeckeElement::basis(sys->pair(), g));
    std::vector<std::vector<Scalar>> action;
    for (const auto& bk : belems)
      action.push_back(crossed_coords(sys, conv(hecke_g, bk)));
    out.mu[g] = pi_tilde(phi, action);
  }
  return out;
}

}  // namespace hx::reps
