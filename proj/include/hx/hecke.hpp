#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hx/group.hpp"
#include "hx/rational.hpp"

namespace hx {

// Coset data a Hecke pair must answer.  The finite backend below is the only
// one shipped; the interface keeps the door open for pairs whose double-coset
// structure is produced by something other than exhaustive enumeration.
class CosetOracle {
 public:
  virtual ~CosetOracle() = default;
  virtual std::vector<int> double_coset_reps() const = 0;
  virtual std::vector<int> left_coset_reps_of(int dc_rep) const = 0;
  virtual int L(int g) const = 0;
  virtual int R(int g) const = 0;
};

// Finite Hecke pair (G, Gamma) with every table cached eagerly.
class HeckePair : public CosetOracle {
 public:
  HeckePair(GroupPtr g, Subgroup gamma) : g_(std::move(g)), gamma_(std::move(gamma)) {
    require(gamma_.parent() == g_, "NotSubgroup", "Gamma not a subgroup of G");
    int n = g_->order();
    // left cosets hGamma
    coset_rep_of_.assign(static_cast<size_t>(n), -1);
    for (int x = 0; x < n; ++x) {
      if (coset_rep_of_[static_cast<size_t>(x)] >= 0) continue;
      coset_reps_.push_back(x);
      for (int c : gamma_.members()) coset_rep_of_[static_cast<size_t>(g_->mul(x, c))] = x;
    }
    // double cosets Gamma g Gamma
    dcosets_ = hx::double_cosets(g_, gamma_, gamma_);
    dcoset_rep_of_.assign(static_cast<size_t>(n), -1);
    for (size_t i = 0; i < dcosets_.size(); ++i) {
      for (int m : dcosets_[i].members) dcoset_rep_of_[static_cast<size_t>(m)] = dcosets_[i].rep;
      dc_index_[dcosets_[i].rep] = int(i);
      stats_.push_back(coset_stats(g_, gamma_, dcosets_[i].rep));
      // translator gamma per left coset: r Gamma = gamma * rep Gamma
      std::vector<int> tr;
      for (int r : dcosets_[i].left_coset_reps) {
        int found = -1;
        for (int c : gamma_.members())
          if (coset_rep_of_[static_cast<size_t>(g_->mul(c, dcosets_[i].rep))] ==
              coset_rep_of_[static_cast<size_t>(r)]) {
            found = c;
            break;
          }
        require(found >= 0, "NotSubgroup", "left coset without Gamma-translator");
        tr.push_back(found);
      }
      translators_.push_back(std::move(tr));
    }
  }

  const GroupPtr& group() const { return g_; }
  const Subgroup& gamma() const { return gamma_; }

  int num_dcosets() const { return int(dcosets_.size()); }
  const DoubleCoset& dcoset(int i) const { return dcosets_[static_cast<size_t>(i)]; }
  int dcoset_rep(int g) const { return dcoset_rep_of_[static_cast<size_t>(g)]; }
  int dcoset_index(int g) const { return dc_index_.at(dcoset_rep(g)); }
  int coset_rep(int g) const { return coset_rep_of_[static_cast<size_t>(g)]; }
  const std::vector<int>& coset_reps() const { return coset_reps_; }
  const CosetStats& stats(int g) const { return stats_[static_cast<size_t>(dcoset_index(g))]; }

  // gamma in Gamma with h Gamma = gamma * rep(Gamma h Gamma) Gamma
  int translator(int h) const {
    int di = dcoset_index(h);
    const auto& lcr = dcosets_[static_cast<size_t>(di)].left_coset_reps;
    for (size_t k = 0; k < lcr.size(); ++k)
      if (coset_rep(lcr[k]) == coset_rep(h)) return translators_[static_cast<size_t>(di)][k];
    fail("NotSubgroup", "element outside its own double coset");
  }

  // modular function Delta(g) = L(g)/R(g)
  Rational delta(int g) const { return stats(g).delta; }

  std::vector<int> double_coset_reps() const override {
    std::vector<int> r;
    for (const auto& dc : dcosets_) r.push_back(dc.rep);
    return r;
  }
  std::vector<int> left_coset_reps_of(int dc_rep) const override {
    return dcosets_[static_cast<size_t>(dc_index_.at(dcoset_rep(dc_rep)))].left_coset_reps;
  }
  int L(int g) const override { return stats(g).L; }
  int R(int g) const override { return stats(g).R; }

 private:
  GroupPtr g_;
  Subgroup gamma_;
  std::vector<int> coset_reps_;
  std::vector<int> coset_rep_of_;
  std::vector<DoubleCoset> dcosets_;
  std::vector<int> dcoset_rep_of_;
  std::map<int, int> dc_index_;
  std::vector<CosetStats> stats_;
  std::vector<std::vector<int>> translators_;
};

using HeckePairPtr = std::shared_ptr<const HeckePair>;

// Element of the Hecke algebra H(G, Gamma): finitely supported map from
// canonical double-coset representatives to Q(i) scalars.
class HeckeElement {
 public:
  explicit HeckeElement(HeckePairPtr pair) : pair_(std::move(pair)) {}

  static HeckeElement basis(HeckePairPtr pair, int g) {
    HeckeElement e(std::move(pair));
    e.add(g, Scalar(1));
    return e;
  }
  static HeckeElement unit(HeckePairPtr pair) {
    int e = pair->group()->identity();
    return basis(std::move(pair), e);
  }

  const HeckePairPtr& pair() const { return pair_; }
  const std::map<int, Scalar>& coeffs() const { return coeffs_; }

  Scalar at(int g) const {
    auto it = coeffs_.find(pair_->dcoset_rep(g));
    return it == coeffs_.end() ? Scalar(0) : it->second;
  }

  void add(int g, const Scalar& c) {
    int rep = pair_->dcoset_rep(g);
    Scalar v = (coeffs_.count(rep) ? coeffs_[rep] : Scalar(0)) + c;
    if (v.is_zero())
      coeffs_.erase(rep);
    else
      coeffs_[rep] = v;
  }

  friend HeckeElement operator+(const HeckeElement& a, const HeckeElement& b) {
    require(a.pair_ == b.pair_, "PairMismatch", "Hecke elements of different pairs");
    HeckeElement r = a;
    for (const auto& [rep, c] : b.coeffs_) r.add(rep, c);
    return r;
  }
  friend HeckeElement operator*(const Scalar& s, const HeckeElement& a) {
    HeckeElement r(a.pair_);
    for (const auto& [rep, c] : a.coeffs_)
      if (!(s * c).is_zero()) r.coeffs_[rep] = s * c;
    return r;
  }
  friend bool operator==(const HeckeElement& a, const HeckeElement& b) {
    return a.pair_ == b.pair_ && a.coeffs_ == b.coeffs_;
  }

 private:
  HeckePairPtr pair_;
  std::map<int, Scalar> coeffs_;
};

// (f1*f2)(Gamma g Gamma) = sum over h Gamma in G/Gamma of
// f1(Gamma h Gamma) f2(Gamma h^-1 g Gamma).
inline HeckeElement hecke_mul(const HeckeElement& f1, const HeckeElement& f2) {
  require(f1.pair() == f2.pair(), "PairMismatch", "Hecke product across pairs");
  const auto& pair = f1.pair();
  const auto& g = pair->group();
  HeckeElement out(pair);
  for (const auto& dc : pair->double_coset_reps()) {
    Scalar acc(0);
    for (int h : pair->coset_reps()) {
      Scalar a = f1.at(h);
      if (a.is_zero()) continue;
      acc += a * f2.at(g->mul(g->inv(h), dc));
    }
    if (!acc.is_zero()) out.add(dc, acc);
  }
  return out;
}

// f*(Gamma g Gamma) = Delta(g^-1) conj(f(Gamma g^-1 Gamma)).
inline HeckeElement hecke_star(const HeckeElement& f) {
  const auto& pair = f.pair();
  const auto& g = pair->group();
  HeckeElement out(pair);
  for (const auto& dc : pair->double_coset_reps()) {
    Scalar v = f.at(g->inv(dc));
    if (v.is_zero()) continue;
    out.add(dc, Scalar(pair->delta(g->inv(dc))) * v.conj());
  }
  return out;
}

// Second presentation: Gamma-left-invariant functions on G/Gamma with the
// same convolution; used as an independent route to the structure constants.
inline std::map<int, Scalar> hecke_mul_invariant_functions(const HeckePair& pair,
                                                           int g1, int g2) {
  const auto& g = pair.group();
  // f_i = indicator of Gamma g_i Gamma as a function on G/Gamma
  auto f1 = [&](int h) { return pair.dcoset_rep(h) == pair.dcoset_rep(g1) ? 1 : 0; };
  auto f2 = [&](int h) { return pair.dcoset_rep(h) == pair.dcoset_rep(g2) ? 1 : 0; };
  std::map<int, Scalar> by_coset;
  for (int t : pair.coset_reps()) {
    long long acc = 0;
    for (int h : pair.coset_reps()) acc += f1(h) * f2(g->mul(g->inv(h), t));
    if (acc) by_coset[t] = Scalar(acc);
  }
  // the result must be Gamma-left-invariant; collapse cosets to double cosets
  std::map<int, Scalar> out;
  for (const auto& dc : pair.double_coset_reps()) {
    Scalar ref(0);
    bool first = true;
    for (int h : pair.coset_reps()) {
      if (pair.dcoset_rep(h) != dc) continue;
      Scalar v = by_coset.count(h) ? by_coset[h] : Scalar(0);
      if (first) {
        ref = v;
        first = false;
      } else {
        require(v == ref, "PairMismatch",
                "convolution of invariant functions is not Gamma-invariant");
      }
    }
    if (!ref.is_zero()) out[dc] = ref;
  }
  return out;
}

struct HeckeTableEntry {
  int left, right;                    // double-coset reps being multiplied
  std::map<int, Scalar> coefficients;  // rep -> coefficient
};

inline std::vector<HeckeTableEntry> hecke_structure_table(const HeckePairPtr& pair) {
  std::vector<HeckeTableEntry> rows;
  for (int a : pair->double_coset_reps())
    for (int b : pair->double_coset_reps()) {
      HeckeElement prod =
          hecke_mul(HeckeElement::basis(pair, a), HeckeElement::basis(pair, b));
      rows.push_back({a, b, prod.coeffs()});
    }
  return rows;
}

}  // namespace hx
