#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hx/bundle.hpp"

namespace hx {

// Finitely supported section of the base bundle: an element of C_c(A).
// Convolution follows the groupoid: a_x b_y = (ab)_{xy} when s(x) = r(y).
class Section {
 public:
  Section() = default;
  explicit Section(BundlePtr bundle) : bundle_(std::move(bundle)) {}

  static Section delta(BundlePtr bundle, int arrow, const Mat& value) {
    Section s(std::move(bundle));
    s.set(arrow, value);
    return s;
  }

  // Identity of C_c(A): identity matrix at every unit.
  static Section one(BundlePtr bundle) {
    Section s(bundle);
    for (int u : bundle->base()->units())
      s.set(u, Mat::identity(bundle->unit_dim(u)));
    return s;
  }

  const BundlePtr& bundle() const { return bundle_; }
  const std::map<int, Mat>& data() const { return data_; }
  bool is_zero() const { return data_.empty(); }

  Mat at(int arrow) const {
    auto it = data_.find(arrow);
    return it == data_.end() ? bundle_->zero_fiber(arrow) : it->second;
  }

  void set(int arrow, const Mat& value) {
    require(bundle_->shape_ok(arrow, value), "ShapeMismatch",
            "value " + value.shape_str() + " at arrow " + std::to_string(arrow));
    if (value.is_zero())
      data_.erase(arrow);
    else
      data_[arrow] = value;
  }

  void accumulate(int arrow, const Mat& value) { set(arrow, at(arrow) + value); }

  friend Section operator+(const Section& a, const Section& b) {
    require(a.bundle_ == b.bundle_, "BundleMismatch", "section add across bundles");
    Section r = a;
    for (const auto& [x, v] : b.data_) r.accumulate(x, v);
    return r;
  }
  friend Section operator-(const Section& a, const Section& b) {
    return a + (Scalar(-1) * b);
  }
  friend Section operator*(const Scalar& c, const Section& a) {
    Section r(a.bundle_);
    for (const auto& [x, v] : a.data_) r.set(x, c * v);
    return r;
  }
  friend Section operator*(const Section& a, const Section& b) {
    require(a.bundle_ == b.bundle_, "BundleMismatch", "section mul across bundles");
    const auto& gd = a.bundle_->base();
    Section r(a.bundle_);
    for (const auto& [x, va] : a.data_)
      for (const auto& [y, vb] : b.data_)
        if (gd->composable(x, y)) r.accumulate(gd->comp(x, y), va * vb);
    return r;
  }
  friend bool operator==(const Section& a, const Section& b) {
    return a.bundle_ == b.bundle_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Section& a, const Section& b) { return !(a == b); }

  Section star() const {
    const auto& gd = bundle_->base();
    Section r(bundle_);
    for (const auto& [x, v] : data_) r.set(gd->inv(x), v.adjoint());
    return r;
  }

  // Coordinates in the fixed basis (arrow-major, then row-major entries).
  std::vector<Scalar> coords() const {
    std::vector<Scalar> v(static_cast<size_t>(bundle_->section_dim()));
    for (const auto& [x, m] : data_) {
      int off = bundle_->basis_offset(x);
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) v[static_cast<size_t>(off + i * m.cols() + j)] = m(i, j);
    }
    return v;
  }

 private:
  BundlePtr bundle_;
  std::map<int, Mat> data_;
};

// alpha-bar on C_c(A): (alpha-bar_g f)(x) = alpha_g(f(xg)).
inline Section alpha_bar(const BundleAction& ba, int g, const Section& f) {
  require(f.bundle() == ba.bundle(), "BundleMismatch", "alpha_bar across bundles");
  Section r(f.bundle());
  for (const auto& [w, v] : f.data())
    r.set(ba.alpha_target(g, w), ba.alpha(g, w, v));
  return r;
}

// Element of C_c(A/H): finitely supported on orbit indices, each value stored
// at the orbit's canonical representative arrow.
class OrbitSection {
 public:
  OrbitSection() = default;
  explicit OrbitSection(OrbitBundlePtr bundle) : bundle_(std::move(bundle)) {}

  // [a]_{xH} with a in the fiber over arrow x (any orbit member).
  static OrbitSection elementary(OrbitBundlePtr bundle, int arrow, const Mat& a) {
    OrbitSection s(bundle);
    int orbit = bundle->orbits()->orbit_of(arrow);
    s.set(orbit, bundle->transport(arrow, a, bundle->orbits()->rep(orbit)));
    return s;
  }

  static OrbitSection one(const OrbitBundlePtr& bundle) {
    OrbitSection s(bundle);
    const auto& q = bundle->orbits()->groupoid();
    for (int ou : q->units())
      s.set(ou, Mat::identity(bundle->fiber_rows(ou)));
    return s;
  }

  const OrbitBundlePtr& bundle() const { return bundle_; }
  const std::map<int, Mat>& data() const { return data_; }
  bool is_zero() const { return data_.empty(); }

  Mat at(int orbit) const {
    auto it = data_.find(orbit);
    if (it != data_.end()) return it->second;
    return Mat(bundle_->fiber_rows(orbit), bundle_->fiber_cols(orbit));
  }

  void set(int orbit, const Mat& value) {
    require(value.rows() == bundle_->fiber_rows(orbit) &&
                value.cols() == bundle_->fiber_cols(orbit),
            "ShapeMismatch", "orbit value shape");
    if (value.is_zero())
      data_.erase(orbit);
    else
      data_[orbit] = value;
  }

  void accumulate(int orbit, const Mat& value) { set(orbit, at(orbit) + value); }

  friend OrbitSection operator+(const OrbitSection& a, const OrbitSection& b) {
    require(a.bundle_ == b.bundle_, "BundleMismatch", "orbit add across bundles");
    OrbitSection r = a;
    for (const auto& [o, v] : b.data_) r.accumulate(o, v);
    return r;
  }
  friend OrbitSection operator-(const OrbitSection& a, const OrbitSection& b) {
    return a + (Scalar(-1) * b);
  }
  friend OrbitSection operator*(const Scalar& c, const OrbitSection& a) {
    OrbitSection r(a.bundle_);
    for (const auto& [o, v] : a.data_) r.set(o, c * v);
    return r;
  }
  friend OrbitSection operator*(const OrbitSection& a, const OrbitSection& b) {
    require(a.bundle_ == b.bundle_, "BundleMismatch", "orbit mul across bundles");
    const auto& q = a.bundle_->orbits()->groupoid();
    OrbitSection r(a.bundle_);
    for (const auto& [oa, va] : a.data_)
      for (const auto& [ob, vb] : b.data_) {
        if (!q->composable(oa, ob)) continue;
        auto [oc, vc] = a.bundle_->multiply(oa, va, ob, vb);
        r.accumulate(oc, vc);
      }
    return r;
  }
  friend bool operator==(const OrbitSection& a, const OrbitSection& b) {
    return a.bundle_ == b.bundle_ && a.data_ == b.data_;
  }
  friend bool operator!=(const OrbitSection& a, const OrbitSection& b) {
    return !(a == b);
  }

  OrbitSection star() const {
    OrbitSection r(bundle_);
    for (const auto& [o, v] : data_) {
      auto [oi, vi] = bundle_->star(o, v);
      r.accumulate(oi, vi);
    }
    return r;
  }

 private:
  OrbitBundlePtr bundle_;
  std::map<int, Mat> data_;
};

// iota: C_c(A/H) -> C_c(A), spreading each orbit value over the whole orbit
// by transport.  The image is exactly the H-invariant sections, and left
// multiplication by iota(f) acts column-wise by
// iota([a]_{xH}) b_y = (alpha_{h~^-1}(a) b)_{x h~ y}.
inline Section iota(const OrbitSection& f) {
  const auto& ob = f.bundle();
  Section r(ob->base_bundle());
  const auto& orbits = ob->orbits();
  const auto& act = orbits->action();
  for (const auto& [o, v] : f.data()) {
    int x = orbits->rep(o);
    for (int t : orbits->subgroup().members()) {
      int w = act->act(x, t);
      if (r.data().count(w)) continue;  // orbit revisit under non-free H
      r.set(w, ob->transport(x, v, w));
    }
  }
  return r;
}

// An adjointable operator on the finite-dimensional C_c(A).  Every multiplier
// at desk scale is left convolution by a section (C_c(A) is unital), which is
// what gets stored; the dense-matrix view is available for audits.
class MultiplierOp {
 public:
  explicit MultiplierOp(Section m) : m_(std::move(m)) {}

  static MultiplierOp zero(const BundlePtr& b) { return MultiplierOp(Section(b)); }
  static MultiplierOp one(const BundlePtr& b) {
    return MultiplierOp(Section::one(b));
  }

  const Section& section() const { return m_; }
  const BundlePtr& bundle() const { return m_.bundle(); }
  bool is_zero() const { return m_.is_zero(); }

  Section apply(const Section& f) const { return m_ * f; }
  MultiplierOp adjoint() const { return MultiplierOp(m_.star()); }

  friend MultiplierOp operator*(const MultiplierOp& a, const MultiplierOp& b) {
    return MultiplierOp(a.m_ * b.m_);
  }
  friend MultiplierOp operator+(const MultiplierOp& a, const MultiplierOp& b) {
    return MultiplierOp(a.m_ + b.m_);
  }
  friend MultiplierOp operator*(const Scalar& c, const MultiplierOp& a) {
    return MultiplierOp(c * a.m_);
  }
  friend bool operator==(const MultiplierOp& a, const MultiplierOp& b) {
    return a.m_ == b.m_;
  }
  friend bool operator!=(const MultiplierOp& a, const MultiplierOp& b) {
    return !(a == b);
  }

  // Dense matrix on the C_c(A) basis, column by column.
  Mat matrix() const {
    const auto& b = m_.bundle();
    int n = b->section_dim();
    Mat out(n, n);
    for (int x = 0; x < b->base()->arrows(); ++x)
      for (int i = 0; i < b->fiber_rows(x); ++i)
        for (int j = 0; j < b->fiber_cols(x); ++j) {
          Mat e = b->zero_fiber(x);
          e(i, j) = Scalar(1);
          auto col = apply(Section::delta(b, x, e)).coords();
          int c = b->basis_offset(x) + i * b->fiber_cols(x) + j;
          for (int r = 0; r < n; ++r) out(r, c) = col[static_cast<size_t>(r)];
        }
    return out;
  }

 private:
  Section m_;
};

// iota(f) as a multiplier.
inline MultiplierOp as_multiplier(const OrbitSection& f) {
  return MultiplierOp(iota(f));
}

// Diagonal multiplier from a function on the unit space: iota(f) b_y =
// f(r(y)) b_y.  The function is given by its values on selected units.
inline MultiplierOp unit_multiplier(const BundlePtr& b,
                                    const std::map<int, Scalar>& values) {
  Section m(b);
  for (const auto& [u, c] : values) {
    require(b->base()->is_unit(u), "ShapeMismatch",
            "unit function value at non-unit arrow " + std::to_string(u));
    m.set(u, c * Mat::identity(b->unit_dim(u)));
  }
  return MultiplierOp(m);
}

// Indicator of the H-orbit of a unit, as a multiplier (an element of
// C_c(X^0/H) inside M(C_c(A))).
inline MultiplierOp unit_orbit_indicator(const BundlePtr& b,
                                         const GroupoidAction& act,
                                         const Subgroup& h, int unit) {
  std::map<int, Scalar> vals;
  for (int t : h.members()) vals[act.act(unit, t)] = Scalar(1);
  return unit_multiplier(b, vals);
}

// Reads an H-invariant multiplier back as an element of C_c(A/H); fails with
// NotInImage when T does not lie in iota(C_c(A/H)).
inline OrbitSection multiplier_to_section(const MultiplierOp& t,
                                          const OrbitBundlePtr& ob) {
  require(t.bundle() == ob->base_bundle(), "BundleMismatch",
          "multiplier over a different base bundle");
  const auto& orbits = ob->orbits();
  OrbitSection out(ob);
  for (const auto& [w, v] : t.section().data()) {
    int o = orbits->orbit_of(w);
    if (w == orbits->rep(o)) out.set(o, v);
  }
  require(iota(out) == t.section(), "NotInImage",
          "multiplier is not an H-invariant section");
  return out;
}

// alpha-bar on multipliers: conjugation by the C_c(A) automorphism, which for
// a left multiplication is again a left multiplication by alpha_bar of the
// symbol.
inline MultiplierOp alpha_bar(const BundleAction& ba, int g, const MultiplierOp& t) {
  return MultiplierOp(alpha_bar(ba, g, t.section()));
}

}  // namespace hx
