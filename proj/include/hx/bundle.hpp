#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hx/groupoid.hpp"
#include "hx/matrix.hpp"

namespace hx {

// Finite-model Fell bundle: the fiber over an arrow x is the full space of
// n_{r(x)} x n_{s(x)} matrices over Q(i), with matrix product over composable
// arrows and conjugate transpose as involution.  The unit fibers are then
// matrix *-algebras, so the algebraic Fell-bundle axioms hold by construction.
// The Banach norm on fibers is deliberately not modeled; positivity of a*a is
// certified instead by exact LDL* (see ldl_psd).
class FellBundle {
 public:
  FellBundle(GroupoidPtr base, std::map<int, int> unit_dims)
      : base_(std::move(base)) {
    dims_.assign(static_cast<size_t>(base_->arrows()), 0);
    for (int u : base_->units()) {
      auto it = unit_dims.find(u);
      int d = it == unit_dims.end() ? 1 : it->second;
      require(d >= 1, "ZeroFiber", "unit " + std::to_string(u) + " has dim < 1");
      dims_[static_cast<size_t>(u)] = d;
    }
    // fixed basis of C_c(A): arrow-major, then row-major matrix entries
    offsets_.assign(static_cast<size_t>(base_->arrows()) + 1, 0);
    for (int x = 0; x < base_->arrows(); ++x)
      offsets_[static_cast<size_t>(x) + 1] =
          offsets_[static_cast<size_t>(x)] + fiber_rows(x) * fiber_cols(x);
  }

  const GroupoidPtr& base() const { return base_; }
  int fiber_rows(int x) const { return dims_[static_cast<size_t>(base_->rng(x))]; }
  int fiber_cols(int x) const { return dims_[static_cast<size_t>(base_->src(x))]; }
  int unit_dim(int u) const { return dims_[static_cast<size_t>(u)]; }
  int section_dim() const { return offsets_.back(); }
  int basis_offset(int x) const { return offsets_[static_cast<size_t>(x)]; }

  Mat zero_fiber(int x) const { return Mat(fiber_rows(x), fiber_cols(x)); }
  bool shape_ok(int x, const Mat& a) const {
    return a.rows() == fiber_rows(x) && a.cols() == fiber_cols(x);
  }

 private:
  GroupoidPtr base_;
  std::vector<int> dims_;     // per unit; 0 on non-unit arrows
  std::vector<int> offsets_;  // prefix sums of fiber sizes
};

using BundlePtr = std::shared_ptr<const FellBundle>;

// Action of G on a Fell bundle via a unitary cocycle V: alpha_g maps the
// fiber over x onto the fiber over x g^-1 by a |-> V(g, r(x)) a V(g, s(x))*.
// Cocycle law and exact unitarity are verified at construction, which makes
// every alpha_g a bundle automorphism.
class BundleAction {
 public:
  BundleAction(BundlePtr bundle, std::shared_ptr<const GroupoidAction> action,
               std::map<std::pair<int, int>, Mat> unitaries)
      : bundle_(std::move(bundle)), action_(std::move(action)) {
    require(bundle_->base() == action_->groupoid(), "ShapeMismatch",
            "bundle and action live over different groupoids");
    const auto& x = bundle_->base();
    const auto& g = action_->group();
    // fiber dimensions must be constant along G-orbits of units
    for (int u : x->units())
      for (int a = 0; a < g->order(); ++a)
        require(bundle_->unit_dim(action_->act(u, a)) == bundle_->unit_dim(u),
                "ShapeMismatch",
                "unit dims not constant on the orbit of unit " + std::to_string(u));
    v_.assign(static_cast<size_t>(g->order()), {});
    for (auto& row : v_) row.assign(x->units().size(), Mat());
    std::map<int, int> upos;
    for (size_t i = 0; i < x->units().size(); ++i) upos[x->units()[i]] = int(i);
    upos_ = upos;
    for (int a = 0; a < g->order(); ++a)
      for (int u : x->units()) {
        Mat m;
        auto it = unitaries.find({a, u});
        if (it == unitaries.end())
          m = Mat::identity(bundle_->unit_dim(u));
        else
          m = it->second;
        require(m.rows() == bundle_->unit_dim(u) && m.cols() == bundle_->unit_dim(u),
                "ShapeMismatch",
                "V(" + g->name(a) + ", unit " + std::to_string(u) + ") has shape " +
                    m.shape_str());
        require(m.adjoint() * m == Mat::identity(m.rows()), "NotUnitary",
                "V(" + g->name(a) + ", unit " + std::to_string(u) + ")");
        v_[static_cast<size_t>(a)][static_cast<size_t>(upos.at(u))] = m;
      }
    for (int u : x->units())
      require(v(g->identity(), u) == Mat::identity(bundle_->unit_dim(u)),
              "CocycleFailure", "V(e, u) must be the identity");
    for (int a = 0; a < g->order(); ++a)
      for (int b = 0; b < g->order(); ++b)
        for (int u : x->units())
          require(v(g->mul(a, b), u) ==
                      v(a, action_->act(u, g->inv(b))) * v(b, u),
                  "CocycleFailure",
                  "V(g1 g2, u) != V(g1, u g2^-1) V(g2, u) at g1=" + g->name(a) +
                      ", g2=" + g->name(b) + ", unit " + std::to_string(u));
  }

  static BundleAction identity_cocycle(BundlePtr bundle,
                                       std::shared_ptr<const GroupoidAction> action) {
    return BundleAction(std::move(bundle), std::move(action), {});
  }

  const BundlePtr& bundle() const { return bundle_; }
  const std::shared_ptr<const GroupoidAction>& groupoid_action() const {
    return action_;
  }
  const GroupPtr& group() const { return action_->group(); }

  const Mat& v(int g, int unit) const {
    return v_[static_cast<size_t>(g)][static_cast<size_t>(upos_.at(unit))];
  }

  // alpha_g: fiber(x) -> fiber(x g^-1)
  Mat alpha(int g, int x, const Mat& a) const {
    const auto& gd = bundle_->base();
    require(bundle_->shape_ok(x, a), "ShapeMismatch",
            "alpha input not in fiber over arrow " + std::to_string(x));
    return v(g, gd->rng(x)) * a * v(g, gd->src(x)).adjoint();
  }
  int alpha_target(int g, int x) const {
    return action_->act(x, group()->inv(g));
  }

 private:
  BundlePtr bundle_;
  std::shared_ptr<const GroupoidAction> action_;
  std::vector<std::vector<Mat>> v_;
  std::map<int, int> upos_;
};

using BundleActionPtr = std::shared_ptr<const BundleAction>;

struct BundleGoodnessReport {
  bool holds = true;
  int witness_x = -1;
  int witness_h = -1;
  bool fiber_level = false;  // true when the groupoid part held but a fiber moved
};

// Bundle-level H-goodness: s(x)h = s(x) forces alpha_{h^-1} to fix the whole
// fiber over x (checked on the elementary-matrix basis).
inline BundleGoodnessReport check_h_good_bundle(const BundleAction& ba,
                                                const Subgroup& h) {
  const auto& x = ba.bundle()->base();
  const auto& act = *ba.groupoid_action();
  for (int a : h.members())
    for (int arr = 0; arr < x->arrows(); ++arr) {
      if (act.act(x->src(arr), a) != x->src(arr)) continue;
      if (act.act(arr, a) != arr) return {false, arr, a, false};
      int ai = ba.group()->inv(a);
      for (int i = 0; i < ba.bundle()->fiber_rows(arr); ++i)
        for (int j = 0; j < ba.bundle()->fiber_cols(arr); ++j) {
          Mat e = ba.bundle()->zero_fiber(arr);
          e(i, j) = Scalar(1);
          if (!(ba.alpha(ai, arr, e) == e)) return {false, arr, a, true};
        }
    }
  return {};
}

// Orbit Fell bundle A/H over X/H.  The fiber over an orbit is the fiber over
// its canonical representative; products transport the left factor with a
// witness from H_{x,y}.
class OrbitBundle {
 public:
  OrbitBundle(BundleActionPtr action, Subgroup h)
      : action_(std::move(action)), h_(std::move(h)) {
    auto rep = check_h_good_bundle(*action_, h_);
    if (!rep.holds)
      fail("NotHGood", std::string(rep.fiber_level ? "fiber" : "groupoid") +
                           "-level witness arrow " + std::to_string(rep.witness_x) +
                           ", h = " + action_->group()->name(rep.witness_h));
    orbits_ = std::make_shared<OrbitGroupoid>(action_->groupoid_action(), h_);
  }

  const BundleActionPtr& action() const { return action_; }
  const Subgroup& subgroup() const { return h_; }
  const std::shared_ptr<const OrbitGroupoid>& orbits() const { return orbits_; }
  const BundlePtr& base_bundle() const { return action_->bundle(); }

  int fiber_rows(int orbit) const {
    return base_bundle()->fiber_rows(orbits_->rep(orbit));
  }
  int fiber_cols(int orbit) const {
    return base_bundle()->fiber_cols(orbits_->rep(orbit));
  }

  // Unique representative of [a] in the fiber over y, for y in the orbit of x
  // (a lives over x).  This is alpha_{h^-1}(a) for any h with xh = y.
  Mat transport(int x, const Mat& a, int y) const {
    const auto& g = action_->group();
    for (int t : h_.members())
      if (action_->groupoid_action()->act(x, t) == y)
        return action_->alpha(g->inv(t), x, a);
    fail("NotInOrbit", "arrow " + std::to_string(y) + " not in the H-orbit of " +
                           std::to_string(x));
  }

  // Orbit product: [a][b] = [alpha_{h~^-1}(a) b], result expressed at the
  // canonical representative of the product orbit.  Returns the orbit index
  // and the representative value; composability is required.
  std::pair<int, Mat> multiply(int orbit_a, const Mat& a, int orbit_b,
                               const Mat& b) const {
    const auto& gd = base_bundle()->base();
    int x = orbits_->rep(orbit_a), y = orbits_->rep(orbit_b);
    int hw = orbits_->h_witness(orbit_a, orbit_b);
    require(hw >= 0, "CompositionIllTyped", "orbit pair not composable");
    const auto& g = action_->group();
    Mat left = action_->alpha(g->inv(hw), x, a);  // lives over x*hw
    int xh = action_->groupoid_action()->act(x, hw);
    int prod = gd->comp(xh, y);
    int orbit = orbits_->orbit_of(prod);
    return {orbit, transport(prod, left * b, orbits_->rep(orbit))};
  }

  // Orbit involution: [a]* = [a*] at the inverse orbit's representative.
  std::pair<int, Mat> star(int orbit, const Mat& a) const {
    const auto& gd = base_bundle()->base();
    int x = orbits_->rep(orbit);
    int xi = gd->inv(x);
    int target = orbits_->orbit_of(xi);
    return {target, transport(xi, a.adjoint(), orbits_->rep(target))};
  }

 private:
  BundleActionPtr action_;
  Subgroup h_;
  std::shared_ptr<const OrbitGroupoid> orbits_;
};

using OrbitBundlePtr = std::shared_ptr<const OrbitBundle>;

}  // namespace hx
