#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "hx/hecke.hpp"
#include "hx/section.hpp"

namespace hx {

// A Hecke pair together with a Gamma-good bundle action satisfying the
// Gamma-intersection property: everything a crossed product needs.  Orbit
// bundles A/H for the subgroups that show up (Gamma^g and friends) are built
// on demand and cached by member set.
class CrossedSystem {
 public:
  CrossedSystem(BundleActionPtr action, HeckePairPtr pair)
      : action_(std::move(action)), pair_(std::move(pair)) {
    require(action_->group() == pair_->group(), "ScenarioMismatch",
            "action and Hecke pair use different groups");
    auto good = check_h_good_bundle(*action_, pair_->gamma());
    if (!good.holds)
      fail("NotHGood", "witness arrow " + std::to_string(good.witness_x) +
                           ", h = " + group()->name(good.witness_h));
    auto inter = check_h_intersection(*action_->groupoid_action(), pair_->gamma());
    if (!inter.holds)
      fail("NotIntersection", "witness unit " + std::to_string(inter.witness_u) +
                                  ", g = " + group()->name(inter.witness_g));
  }

  const BundleActionPtr& action() const { return action_; }
  const HeckePairPtr& pair() const { return pair_; }
  const GroupPtr& group() const { return pair_->group(); }
  const Subgroup& gamma() const { return pair_->gamma(); }
  const BundlePtr& bundle() const { return action_->bundle(); }

  Subgroup gamma_of(int g) const { return gamma_g(gamma(), g); }

  // cached per member set; guarded so concurrent checks can share a system
  OrbitBundlePtr orbit_bundle(const Subgroup& h) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(h.members());
    if (it != cache_.end()) return it->second;
    auto ob = std::make_shared<OrbitBundle>(action_, h);
    cache_[h.members()] = ob;
    return ob;
  }

  OrbitBundlePtr gamma_bundle(int g) const { return orbit_bundle(gamma_of(g)); }

  Subgroup unit_stabilizer(int unit) const {
    std::vector<int> m;
    for (int a = 0; a < group()->order(); ++a)
      if (action_->groupoid_action()->act(unit, a) == unit) m.push_back(a);
    return Subgroup(group(), std::move(m));
  }

  MultiplierOp unit_indicator(int unit, const Subgroup& h) const {
    return unit_orbit_indicator(bundle(), *action_->groupoid_action(), h, unit);
  }

  bool free_on_units() const {
    return action_->groupoid_action()->unit_action_free(Subgroup::full(group()));
  }

 private:
  BundleActionPtr action_;
  HeckePairPtr pair_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::vector<int>, OrbitBundlePtr> cache_;
};

using SystemPtr = std::shared_ptr<const CrossedSystem>;

// Element of B(A, G, Gamma): finitely supported function G/Gamma ->
// M(C_c(A)) subject to f(gamma g Gamma) = alpha-bar_gamma(f(g Gamma)).  Only
// the value at the canonical double-coset representative is stored; the rest
// of the double coset is reconstructed through the compatibility condition.
class BElement {
 public:
  explicit BElement(SystemPtr sys) : sys_(std::move(sys)) {}

  const SystemPtr& system() const { return sys_; }
  const std::map<int, MultiplierOp>& values() const { return values_; }
  bool is_zero() const { return values_.empty(); }

  // Sets f(rep Gamma); rep must be canonical and the value Gamma^rep-fixed.
  void set_value(int rep, const MultiplierOp& v) {
    require(rep == sys_->pair()->dcoset_rep(rep), "ScenarioMismatch",
            "value must be stored at the canonical double-coset representative");
    if (v.is_zero()) {
      values_.erase(rep);
      return;
    }
    Subgroup invariance_group = sys_->gamma_of(rep);
    for (int c : invariance_group.members())
      require(alpha_bar(*sys_->action(), c, v) == v, "NotInvariant",
              "value at " + sys_->group()->name(rep) +
                  " not fixed by alpha-bar of " + sys_->group()->name(c));
    values_.erase(rep);
    values_.emplace(rep, v);
  }

  // f(h Gamma) for arbitrary h, via f(gamma g Gamma) = alpha-bar_gamma(f(g Gamma)).
  MultiplierOp value_at(int h) const {
    int rep = sys_->pair()->dcoset_rep(h);
    auto it = values_.find(rep);
    if (it == values_.end()) return MultiplierOp::zero(sys_->bundle());
    int tr = sys_->pair()->translator(h);
    return alpha_bar(*sys_->action(), tr, it->second);
  }

  friend BElement operator+(const BElement& a, const BElement& b) {
    require(a.sys_ == b.sys_, "ScenarioMismatch", "B-element add across systems");
    BElement r = a;
    for (const auto& [rep, v] : b.values_) {
      auto it = r.values_.find(rep);
      MultiplierOp sum = it == r.values_.end() ? v : it->second + v;
      if (it != r.values_.end()) r.values_.erase(it);
      if (!sum.is_zero()) r.values_.emplace(rep, sum);
    }
    return r;
  }
  friend BElement operator*(const Scalar& c, const BElement& a) {
    BElement r(a.sys_);
    for (const auto& [rep, v] : a.values_)
      if (!(c * v).is_zero()) r.values_.emplace(rep, c * v);
    return r;
  }
  friend bool operator==(const BElement& a, const BElement& b) {
    return a.sys_ == b.sys_ && a.values_ == b.values_;
  }
  friend bool operator!=(const BElement& a, const BElement& b) { return !(a == b); }

 private:
  SystemPtr sys_;
  std::map<int, MultiplierOp> values_;
};

// Convolution in B(A, G, Gamma):
// (f1 * f2)(g Gamma) = sum over [h] in G/Gamma of
//   f1(h Gamma) alpha-bar_h(f2(h^-1 g Gamma)).
inline BElement conv(const BElement& f1, const BElement& f2) {
  require(f1.system() == f2.system(), "ScenarioMismatch", "conv across systems");
  const auto& sys = f1.system();
  const auto& pair = sys->pair();
  const auto& g = sys->group();
  BElement out(sys);
  for (int rep : pair->double_coset_reps()) {
    MultiplierOp acc = MultiplierOp::zero(sys->bundle());
    for (int h : pair->coset_reps()) {
      if (!f1.values().count(pair->dcoset_rep(h))) continue;
      MultiplierOp right = f2.value_at(g->mul(g->inv(h), rep));
      if (right.is_zero()) continue;
      acc = acc + f1.value_at(h) * alpha_bar(*sys->action(), h, right);
    }
    out.set_value(rep, acc);
  }
  return out;
}

// Involution: f*(g Gamma) = Delta(g^-1) alpha-bar_g(f(g^-1 Gamma))*.
inline BElement star(const BElement& f) {
  const auto& sys = f.system();
  const auto& pair = sys->pair();
  const auto& g = sys->group();
  BElement out(sys);
  for (int rep : pair->double_coset_reps()) {
    MultiplierOp inner = f.value_at(g->inv(rep));
    if (inner.is_zero()) continue;
    MultiplierOp v = alpha_bar(*sys->action(), rep, inner).adjoint();
    out.set_value(rep, Scalar(pair->delta(g->inv(rep))) * v);
  }
  return out;
}

inline BElement b_identity(const SystemPtr& sys) {
  BElement e(sys);
  e.set_value(sys->pair()->dcoset_rep(sys->group()->identity()),
              MultiplierOp::one(sys->bundle()));
  return e;
}

// Element of the crossed product C_c(A/Gamma) x_alg G/Gamma: a B-element
// whose value at each double coset g Gamma lies in C_c(A/Gamma^g).  Both the
// orbit-section form and the multiplier form are kept.
class CrossedElement {
 public:
  explicit CrossedElement(SystemPtr sys)
      : sys_(std::move(sys)), b_(BElement(sys_)) {}

  static CrossedElement from_b(const BElement& b) {
    CrossedElement r(b.system());
    r.b_ = b;
    for (const auto& [rep, v] : b.values())
      r.sections_[rep] = multiplier_to_section(v, r.sys_->gamma_bundle(rep));
    return r;
  }

  const SystemPtr& system() const { return sys_; }
  const BElement& b() const { return b_; }
  const std::map<int, OrbitSection>& sections() const { return sections_; }
  bool is_zero() const { return sections_.empty(); }

  OrbitSection section_at(int rep) const {
    auto it = sections_.find(rep);
    if (it != sections_.end()) return it->second;
    return OrbitSection(sys_->gamma_bundle(rep));
  }

  friend CrossedElement operator+(const CrossedElement& a, const CrossedElement& b) {
    return from_b(a.b_ + b.b_);
  }
  friend CrossedElement operator-(const CrossedElement& a, const CrossedElement& b) {
    return from_b(a.b_ + (Scalar(-1) * b.b_));
  }
  friend CrossedElement operator*(const Scalar& c, const CrossedElement& a) {
    return from_b(c * a.b_);
  }
  friend bool operator==(const CrossedElement& a, const CrossedElement& b) {
    return a.b_ == b.b_;
  }
  friend bool operator!=(const CrossedElement& a, const CrossedElement& b) {
    return !(a == b);
  }

 private:
  SystemPtr sys_;
  BElement b_;
  std::map<int, OrbitSection> sections_;
};

inline CrossedElement conv(const CrossedElement& a, const CrossedElement& b) {
  return CrossedElement::from_b(conv(a.b(), b.b()));
}
inline CrossedElement star(const CrossedElement& a) {
  return CrossedElement::from_b(star(a.b()));
}

// Builds an element from explicit per-coset assignments (g, section over
// A/Gamma^g).  Non-canonical g is translated onto the canonical rep.
inline CrossedElement make_element(
    const SystemPtr& sys, const std::vector<std::pair<int, OrbitSection>>& parts) {
  BElement b(sys);
  std::map<int, MultiplierOp> acc;
  for (const auto& [g, sec] : parts) {
    require(sec.bundle() == sys->orbit_bundle(sys->gamma_of(g)), "WrongOrbitBundle",
            "section at " + sys->group()->name(g) + " is not over A/Gamma^g");
    int rep = sys->pair()->dcoset_rep(g);
    int tr = sys->pair()->translator(g);  // g Gamma = tr * rep Gamma
    MultiplierOp v =
        alpha_bar(*sys->action(), sys->group()->inv(tr), as_multiplier(sec));
    auto it = acc.find(rep);
    if (it == acc.end())
      acc.emplace(rep, v);
    else
      it->second = it->second + v;
  }
  for (const auto& [rep, v] : acc) b.set_value(rep, v);
  return CrossedElement::from_b(b);
}

// Canonical spanning element [a]_{x Gamma} * Gamma g Gamma * 1_{s(x) g Gamma},
// realized directly from its closed form: support Gamma g Gamma, value
// [a]_{x Gamma^g} at g Gamma, alpha-bar translates elsewhere.
inline CrossedElement span_element(const SystemPtr& sys, const Mat& a, int x, int g) {
  require(sys->bundle()->shape_ok(x, a), "ShapeMismatch",
          "fiber value at arrow " + std::to_string(x));
  BElement b(sys);
  if (!a.is_zero()) {
    int rep = sys->pair()->dcoset_rep(g);
    int tr = sys->pair()->translator(g);  // g Gamma = tr * rep Gamma
    // value at rep Gamma = [alpha_{tr^-1}(a)]_{x tr Gamma^rep}
    int ti = sys->group()->inv(tr);
    Mat moved = sys->action()->alpha(ti, x, a);
    int arrow = sys->action()->groupoid_action()->act(x, tr);
    b.set_value(rep, as_multiplier(OrbitSection::elementary(
                         sys->gamma_bundle(rep), arrow, moved)));
  }
  return CrossedElement::from_b(b);
}

// Inverse of the spanning decomposition: f as a list of (a, x, g) with
// f = sum of span_element(a, x, g).
struct SpanTerm {
  Mat a;
  int x;
  int g;
};

inline std::vector<SpanTerm> span_decompose(const CrossedElement& f) {
  std::vector<SpanTerm> out;
  for (const auto& [rep, sec] : f.sections()) {
    const auto& orbits = sec.bundle()->orbits();
    for (const auto& [o, v] : sec.data()) out.push_back({v, orbits->rep(o), rep});
  }
  return out;
}

// Identity, Hecke-algebra, section and unit-function embeddings into B.  At
// desk scale C_c(A) is unital, so all land inside the crossed product.
inline CrossedElement embed_section(const SystemPtr& sys, const OrbitSection& f) {
  require(f.bundle() == sys->gamma_bundle(sys->group()->identity()),
          "WrongOrbitBundle", "section must be over A/Gamma");
  // iota(f) is Gamma-invariant, so storing it at the canonical representative
  // of the identity double coset satisfies the compatibility condition as is.
  BElement b(sys);
  b.set_value(sys->pair()->dcoset_rep(sys->group()->identity()), as_multiplier(f));
  return CrossedElement::from_b(b);
}

inline CrossedElement embed_hecke(const SystemPtr& sys, const HeckeElement& h) {
  require(h.pair() == sys->pair(), "PairMismatch", "Hecke element of another pair");
  BElement b(sys);
  for (const auto& [rep, c] : h.coeffs())
    b.set_value(rep, c * MultiplierOp::one(sys->bundle()));
  return CrossedElement::from_b(b);
}

// 1_{u Gamma} in C_c(X^0/Gamma), embedded with support Gamma.
inline CrossedElement embed_unit_orbit(const SystemPtr& sys, int unit) {
  BElement b(sys);
  b.set_value(sys->pair()->dcoset_rep(sys->group()->identity()),
              sys->unit_indicator(unit, sys->gamma()));
  return CrossedElement::from_b(b);
}

// Coset-counting data entering the triple-product coefficients.
struct CountingData {
  int n = 0;
  int d = 0;
  Rational N;
  std::vector<int> E;  // reps of S_y \ Gamma / (w Gamma w^-1 ∩ v Gamma v^-1)
};

inline CountingData counting(const CrossedSystem& sys, int w, int v, int y) {
  const auto& g = sys.group();
  const auto& gamma = sys.gamma();
  const auto& act = *sys.action()->groupoid_action();
  require(sys.bundle()->base()->is_unit(y), "ShapeMismatch",
          "counting base point must be a unit");
  CountingData out;
  int wv = g->mul(w, v);
  Subgroup gamma_wv = sys.gamma_of(wv);
  int vrep = sys.pair()->dcoset_rep(v);
  for (int r : sys.pair()->left_coset_reps_of(sys.pair()->dcoset_rep(w))) {
    int rwv = g->mul(g->inv(r), wv);
    if (sys.pair()->dcoset_rep(rwv) != vrep) continue;
    int yw = act.act(y, g->inv(w));
    bool in_n = false, in_d = false;
    for (int c : gamma.members()) {
      if (act.act(y, g->mul(c, g->inv(r))) == yw) in_n = true;
      for (int t : gamma_wv.members())
        if (act.act(y, g->mul(g->mul(c, g->inv(r)), t)) == yw) in_d = true;
    }
    out.n += in_n ? 1 : 0;
    out.d += in_d ? 1 : 0;
  }
  require(out.d >= 1, "ScenarioMismatch", "counting denominator vanished");
  out.N = Rational(out.n, out.d);
  Subgroup conj_both = gamma.conjugate(w).intersect(gamma.conjugate(v));
  Subgroup stab = sys.unit_stabilizer(y);
  for (const auto& dc : double_cosets(g, stab, conj_both, &gamma))
    out.E.push_back(dc.rep);
  return out;
}

// Middle factor of a triple product: either [a]_{x Gamma} or 1_{y Gamma}.
struct TripleMiddle {
  bool is_unit = false;
  int arrow = -1;  // x, or the unit y itself
  Mat a;           // ignored for unit middles

  static TripleMiddle section(int x, Mat value) { return {false, x, std::move(value)}; }
  static TripleMiddle unit(int y) { return {true, y, Mat()}; }
};

// Gamma g Gamma * mid * Gamma s Gamma via the closed product formula; when the
// unit action is free, the simplified expansion with unit coefficients is
// used instead.
inline CrossedElement triple_product(const SystemPtr& sys, int g,
                                     const TripleMiddle& mid, int s,
                                     bool force_general = false) {
  const auto& grp = sys->group();
  const auto& act = *sys->action()->groupoid_action();
  const auto& gd = sys->bundle()->base();
  int y = mid.is_unit ? mid.arrow : gd->src(mid.arrow);
  require(gd->is_unit(y), "ShapeMismatch", "middle factor base point");

  auto u_reps = sys->pair()->left_coset_reps_of(sys->pair()->dcoset_rep(grp->inv(g)));
  auto v_reps = sys->pair()->left_coset_reps_of(sys->pair()->dcoset_rep(s));

  CrossedElement out(sys);
  bool free_path = sys->free_on_units() && !force_general;
  for (int u : u_reps)
    for (int v : v_reps) {
      int uv = grp->mul(grp->inv(u), v);
      if (free_path) {
        CrossedElement term =
            mid.is_unit
                ? span_element(sys, Mat::identity(sys->bundle()->unit_dim(act.act(y, u))),
                               act.act(y, u), uv)
                : span_element(sys, sys->action()->alpha(grp->inv(u), mid.arrow, mid.a),
                               act.act(mid.arrow, u), uv);
        out = out + term;
        continue;
      }
      CountingData cd = counting(*sys, u, v, y);
      for (int c : cd.E) {
        CountingData nd = counting(*sys, grp->inv(u), v, act.act(y, c));
        Scalar coeff = Scalar(Rational(sys->pair()->delta(g)) * nd.N /
                              Rational(sys->pair()->stats(uv).L));
        int cu = grp->mul(c, u);
        CrossedElement term =
            mid.is_unit
                ? span_element(sys,
                               Mat::identity(sys->bundle()->unit_dim(act.act(y, cu))),
                               act.act(y, cu), uv)
                : span_element(sys,
                               sys->action()->alpha(grp->mul(grp->inv(u), grp->inv(c)),
                                                    mid.arrow, mid.a),
                               act.act(mid.arrow, cu), uv);
        out = out + (coeff * term);
      }
    }
  return out;
}

// Fixed enumeration of the canonical linear basis of the crossed product:
// double-coset rep, then orbit rep, then row-major fiber entry.  Each basis
// vector is itself a spanning element.
struct CrossedBasisItem {
  int g;      // canonical double-coset rep
  int orbit;  // orbit index in A/Gamma^g
  int x;      // canonical arrow rep of the orbit
  int i, j;   // fiber entry
};

inline std::vector<CrossedBasisItem> crossed_basis(const SystemPtr& sys) {
  std::vector<CrossedBasisItem> out;
  for (int rep : sys->pair()->double_coset_reps()) {
    auto ob = sys->gamma_bundle(rep);
    for (int o = 0; o < ob->orbits()->num_orbits(); ++o)
      for (int i = 0; i < ob->fiber_rows(o); ++i)
        for (int j = 0; j < ob->fiber_cols(o); ++j)
          out.push_back({rep, o, ob->orbits()->rep(o), i, j});
  }
  return out;
}

inline CrossedElement basis_element(const SystemPtr& sys, const CrossedBasisItem& it) {
  auto ob = sys->gamma_bundle(it.g);
  Mat a(ob->fiber_rows(it.orbit), ob->fiber_cols(it.orbit));
  a(it.i, it.j) = Scalar(1);
  return span_element(sys, a, it.x, it.g);
}

// Coordinates of an element in the canonical basis (exact, by direct lookup).
inline std::vector<Scalar> crossed_coords(const SystemPtr& sys,
                                          const CrossedElement& f) {
  std::vector<Scalar> v;
  for (int rep : sys->pair()->double_coset_reps()) {
    auto ob = sys->gamma_bundle(rep);
    OrbitSection sec = f.section_at(rep);
    for (int o = 0; o < ob->orbits()->num_orbits(); ++o) {
      Mat m = sec.at(o);
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    }
  }
  return v;
}

}  // namespace hx
