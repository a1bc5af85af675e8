#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hx/group.hpp"

namespace hx {

// Finite discrete groupoid.  Units are arrows with src = rng = self; comp is
// total exactly on pairs with src(x) = rng(y), stored as a dense table with
// -1 for undefined.
class Groupoid {
 public:
  Groupoid(int arrows, std::vector<int> src, std::vector<int> rng,
           std::vector<int> inv, std::vector<std::vector<int>> comp)
      : n_(arrows),
        src_(std::move(src)),
        rng_(std::move(rng)),
        inv_(std::move(inv)),
        comp_(std::move(comp)) {
    validate();
  }

  static std::shared_ptr<const Groupoid> trivial_set(int points) {
    std::vector<int> id(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) id[static_cast<size_t>(i)] = i;
    std::vector<std::vector<int>> comp(static_cast<size_t>(points),
                                       std::vector<int>(static_cast<size_t>(points), -1));
    for (int i = 0; i < points; ++i) comp[static_cast<size_t>(i)][static_cast<size_t>(i)] = i;
    return std::make_shared<Groupoid>(points, id, id, id, comp);
  }

  // A group as a groupoid with a single unit (the identity arrow).
  static std::shared_ptr<const Groupoid> one_unit_group(const GroupPtr& g) {
    int n = g->order();
    std::vector<int> src(static_cast<size_t>(n), g->identity()), rng = src, inv(static_cast<size_t>(n));
    std::vector<std::vector<int>> comp(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int a = 0; a < n; ++a) {
      inv[static_cast<size_t>(a)] = g->inv(a);
      for (int b = 0; b < n; ++b) comp[static_cast<size_t>(a)][static_cast<size_t>(b)] = g->mul(a, b);
    }
    return std::make_shared<Groupoid>(n, src, rng, inv, comp);
  }

  // Transformation groupoid G x G: (s,tr)(t,r) = (st,r), (s,t)^-1 = (s^-1,st),
  // s(s,t) = (e,t), r(s,t) = (e,st).  Arrow (s,t) has index s*|G| + t.
  static std::shared_ptr<const Groupoid> transformation(const GroupPtr& g) {
    int n = g->order();
    int m = n * n;
    int e = g->identity();
    auto idx = [n](int s, int t) { return s * n + t; };
    std::vector<int> src(static_cast<size_t>(m)), rng(static_cast<size_t>(m)), inv(static_cast<size_t>(m));
    std::vector<std::vector<int>> comp(static_cast<size_t>(m), std::vector<int>(static_cast<size_t>(m), -1));
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        int x = idx(s, t);
        src[static_cast<size_t>(x)] = idx(e, t);
        rng[static_cast<size_t>(x)] = idx(e, g->mul(s, t));
        inv[static_cast<size_t>(x)] = idx(g->inv(s), g->mul(s, t));
      }
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        for (int r = 0; r < n; ++r)
          comp[static_cast<size_t>(idx(s, g->mul(t, r)))][static_cast<size_t>(idx(t, r))] =
              idx(g->mul(s, t), r);
    return std::make_shared<Groupoid>(m, src, rng, inv, comp);
  }

  int arrows() const { return n_; }
  int src(int x) const { return src_[static_cast<size_t>(x)]; }
  int rng(int x) const { return rng_[static_cast<size_t>(x)]; }
  int inv(int x) const { return inv_[static_cast<size_t>(x)]; }
  bool composable(int x, int y) const { return src(x) == rng(y); }
  int comp(int x, int y) const {
    int z = comp_[static_cast<size_t>(x)][static_cast<size_t>(y)];
    require(z >= 0, "CompositionIllTyped",
            "comp(" + std::to_string(x) + "," + std::to_string(y) + ") undefined");
    return z;
  }
  bool is_unit(int x) const { return src(x) == x && rng(x) == x; }
  const std::vector<int>& units() const { return units_; }

 private:
  void validate() {
    require(n_ > 0, "CompositionIllTyped", "empty groupoid");
    require(int(src_.size()) == n_ && int(rng_.size()) == n_ &&
                int(inv_.size()) == n_ && int(comp_.size()) == n_,
            "CompositionIllTyped", "table sizes disagree with arrow count");
    for (int x = 0; x < n_; ++x)
      require(int(comp_[static_cast<size_t>(x)].size()) == n_, "CompositionIllTyped",
              "ragged composition table");
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y) {
        bool defined = comp_[static_cast<size_t>(x)][static_cast<size_t>(y)] >= 0;
        require(defined == composable(x, y), "CompositionIllTyped",
                "comp defined iff src=rng fails at (" + std::to_string(x) + "," +
                    std::to_string(y) + ")");
      }
    for (int x = 0; x < n_; ++x) {
      int xi = inv(x);
      require(inv(xi) == x, "InverseFailure",
              "inv not involutive at " + std::to_string(x));
      require(src(xi) == rng(x) && rng(xi) == src(x), "InverseFailure",
              "inv swaps src/rng fails at " + std::to_string(x));
      require(comp(x, xi) == rng(x) && comp(xi, x) == src(x), "InverseFailure",
              "x*inv(x) is not the range unit at " + std::to_string(x));
    }
    for (int u = 0; u < n_; ++u)
      if (is_unit(u)) units_.push_back(u);
    for (int u : units_)
      require(comp(u, u) == u, "InverseFailure",
              "unit not idempotent at " + std::to_string(u));
    for (int x = 0; x < n_; ++x) {
      require(is_unit(src(x)) && is_unit(rng(x)), "CompositionIllTyped",
              "src/rng of " + std::to_string(x) + " is not a unit");
      require(comp(rng(x), x) == x && comp(x, src(x)) == x, "CompositionIllTyped",
              "units do not act neutrally at " + std::to_string(x));
    }
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y) {
        if (!composable(x, y)) continue;
        for (int z = 0; z < n_; ++z) {
          if (!composable(y, z)) continue;
          require(comp(comp(x, y), z) == comp(x, comp(y, z)), "AssociativityFailure",
                  "triple (" + std::to_string(x) + "," + std::to_string(y) + "," +
                      std::to_string(z) + ")");
        }
      }
  }

  int n_;
  std::vector<int> src_, rng_, inv_;
  std::vector<std::vector<int>> comp_;
  std::vector<int> units_;
};

using GroupoidPtr = std::shared_ptr<const Groupoid>;

// Right action of G on a groupoid by groupoid automorphisms, exhaustively
// verified: identity, compatibility, (xg)(yg) = (xy)g and inv(xg) = inv(x)g.
class GroupoidAction {
 public:
  GroupoidAction(GroupoidPtr groupoid, GroupPtr group,
                 std::vector<std::vector<int>> table)
      : x_(std::move(groupoid)), g_(std::move(group)), act_(std::move(table)) {
    int m = x_->arrows(), n = g_->order();
    require(int(act_.size()) == m, "NotAnAction", "action table rows");
    for (const auto& row : act_)
      require(int(row.size()) == n, "NotAnAction", "action table cols");
    for (int x = 0; x < m; ++x) {
      require(act(x, g_->identity()) == x, "NotAnAction",
              "identity moves arrow " + std::to_string(x));
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
          require(act(act(x, a), b) == act(x, g_->mul(a, b)), "NotAnAction",
                  "right-action law fails at arrow " + std::to_string(x));
        require(act(x_->inv(x), a) == x_->inv(act(x, a)), "BreaksComposition",
                "inv(xg) != inv(x)g at arrow " + std::to_string(x));
      }
    }
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) {
        if (!x_->composable(x, y)) continue;
        for (int a = 0; a < n; ++a) {
          require(x_->composable(act(x, a), act(y, a)), "BreaksComposition",
                  "composability not preserved at (" + std::to_string(x) + "," +
                      std::to_string(y) + ")");
          require(x_->comp(act(x, a), act(y, a)) == act(x_->comp(x, y), a),
                  "BreaksComposition",
                  "(xg)(yg) != (xy)g at (" + std::to_string(x) + "," +
                      std::to_string(y) + "," + g_->name(a) + ")");
        }
      }
  }

  static GroupoidAction trivial(GroupoidPtr groupoid, GroupPtr group) {
    std::vector<std::vector<int>> act(static_cast<size_t>(groupoid->arrows()),
                                      std::vector<int>(static_cast<size_t>(group->order())));
    for (int x = 0; x < groupoid->arrows(); ++x)
      for (int a = 0; a < group->order(); ++a) act[static_cast<size_t>(x)][static_cast<size_t>(a)] = x;
    return GroupoidAction(std::move(groupoid), std::move(group), std::move(act));
  }

  // Translation action (s,t)g = (s,tg) on the transformation groupoid of G.
  static GroupoidAction translation(GroupoidPtr groupoid, GroupPtr group) {
    int n = group->order();
    require(groupoid->arrows() == n * n, "NotAnAction",
            "translation action needs the transformation groupoid of G");
    std::vector<std::vector<int>> act(static_cast<size_t>(n * n), std::vector<int>(static_cast<size_t>(n)));
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        for (int a = 0; a < n; ++a)
          act[static_cast<size_t>(s * n + t)][static_cast<size_t>(a)] = s * n + group->mul(t, a);
    return GroupoidAction(std::move(groupoid), std::move(group), std::move(act));
  }

  const GroupoidPtr& groupoid() const { return x_; }
  const GroupPtr& group() const { return g_; }
  int act(int x, int g) const { return act_[static_cast<size_t>(x)][static_cast<size_t>(g)]; }

  bool unit_action_free(const Subgroup& h) const {
    for (int u : x_->units())
      for (int a : h.members())
        if (a != g_->identity() && act(u, a) == u) return false;
    return true;
  }

  // Restriction to the unit space as a GroupSetAction (units keep their
  // arrow indices as point labels via the returned index maps).
  GroupSetAction unit_action() const {
    const auto& units = x_->units();
    std::map<int, int> pos;
    for (size_t i = 0; i < units.size(); ++i) pos[units[i]] = int(i);
    std::vector<std::vector<int>> table(units.size(),
                                        std::vector<int>(static_cast<size_t>(g_->order())));
    for (size_t i = 0; i < units.size(); ++i)
      for (int a = 0; a < g_->order(); ++a)
        table[i][static_cast<size_t>(a)] = pos.at(act(units[i], a));
    return GroupSetAction(g_, int(units.size()), std::move(table));
  }

  // H_{x,y} = {h in H : s(x)h = r(y)}
  std::vector<int> h_between(const Subgroup& h, int x, int y) const {
    std::vector<int> out;
    for (int a : h.members())
      if (act(x_->src(x), a) == x_->rng(y)) out.push_back(a);
    return out;
  }

 private:
  GroupoidPtr x_;
  GroupPtr g_;
  std::vector<std::vector<int>> act_;
};

struct GoodnessReport {
  bool holds = true;
  int witness_x = -1;
  int witness_h = -1;
};

// Groupoid-level H-goodness: s(x)h = s(x) implies xh = x.
inline GoodnessReport check_h_good(const GroupoidAction& action, const Subgroup& h) {
  const auto& x = action.groupoid();
  for (int a : h.members())
    for (int arr = 0; arr < x->arrows(); ++arr)
      if (action.act(x->src(arr), a) == x->src(arr) && action.act(arr, a) != arr)
        return {false, arr, a};
  return {};
}

struct IntersectionReport {
  bool holds = true;
  int witness_u = -1;
  int witness_g = -1;
};

// H-intersection property: uH ∩ u gHg^-1 = u H^g for all units u and g in G.
inline IntersectionReport check_h_intersection(const GroupoidAction& action,
                                               const Subgroup& h) {
  const auto& x = action.groupoid();
  const auto& g = action.group();
  for (int u : x->units())
    for (int a = 0; a < g->order(); ++a) {
      std::set<int> lhs, rhs;
      std::set<int> orbit_h, orbit_conj;
      Subgroup conj = h.conjugate(a);
      Subgroup hg = gamma_g(h, a);
      for (int t : h.members()) orbit_h.insert(action.act(u, t));
      for (int t : conj.members()) orbit_conj.insert(action.act(u, t));
      for (int p : orbit_h)
        if (orbit_conj.count(p)) lhs.insert(p);
      for (int t : hg.members()) rhs.insert(action.act(u, t));
      if (lhs != rhs) return {false, u, a};
    }
  return {};
}

// Orbit groupoid X/H of an H-good action.  Arrows are H-orbits with the least
// arrow index as canonical representative; composition goes through a stored
// witness h in H_{x,y}.
class OrbitGroupoid {
 public:
  OrbitGroupoid(std::shared_ptr<const GroupoidAction> action, Subgroup h)
      : action_(std::move(action)), h_(std::move(h)) {
    auto good = check_h_good(*action_, h_);
    if (!good.holds)
      fail("NotHGood", "witness arrow " + std::to_string(good.witness_x) +
                           ", h = " + action_->group()->name(good.witness_h));
    const auto& x = action_->groupoid();
    orbit_of_.assign(static_cast<size_t>(x->arrows()), -1);
    for (int arr = 0; arr < x->arrows(); ++arr) {
      if (orbit_of_[static_cast<size_t>(arr)] >= 0) continue;
      int id = int(reps_.size());
      reps_.push_back(arr);
      for (int a : h_.members()) orbit_of_[static_cast<size_t>(action_->act(arr, a))] = id;
    }
    int m = int(reps_.size());
    std::vector<int> src(static_cast<size_t>(m)), rng(static_cast<size_t>(m)), inv(static_cast<size_t>(m));
    std::vector<std::vector<int>> comp(static_cast<size_t>(m), std::vector<int>(static_cast<size_t>(m), -1));
    witness_.assign(static_cast<size_t>(m), std::vector<int>(static_cast<size_t>(m), -1));
    for (int i = 0; i < m; ++i) {
      src[static_cast<size_t>(i)] = orbit_of_[static_cast<size_t>(x->src(reps_[static_cast<size_t>(i)]))];
      rng[static_cast<size_t>(i)] = orbit_of_[static_cast<size_t>(x->rng(reps_[static_cast<size_t>(i)]))];
      inv[static_cast<size_t>(i)] = orbit_of_[static_cast<size_t>(x->inv(reps_[static_cast<size_t>(i)]))];
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        auto hs = action_->h_between(h_, reps_[static_cast<size_t>(i)], reps_[static_cast<size_t>(j)]);
        if (hs.empty()) continue;
        witness_[static_cast<size_t>(i)][static_cast<size_t>(j)] = hs.front();
        int xi = action_->act(reps_[static_cast<size_t>(i)], hs.front());
        comp[static_cast<size_t>(i)][static_cast<size_t>(j)] = orbit_of_[static_cast<size_t>(x->comp(xi, reps_[static_cast<size_t>(j)]))];
      }
    // units of X/H come out as orbits of units; all axioms re-verified here
    quotient_ = std::make_shared<Groupoid>(m, src, rng, inv, comp);
    // sanity: src/rng of orbit ids point at unit orbits mapped consistently,
    // i.e. s(xH) = s(x)H
    for (int i = 0; i < m; ++i) {
      require(quotient_->src(i) == orbit_of_[static_cast<size_t>(x->src(reps_[static_cast<size_t>(i)]))] &&
                  quotient_->rng(i) == orbit_of_[static_cast<size_t>(x->rng(reps_[static_cast<size_t>(i)]))],
              "NotHGood", "quotient source/range mismatch");
    }
  }

  const std::shared_ptr<const GroupoidAction>& action() const { return action_; }
  const Subgroup& subgroup() const { return h_; }
  const GroupoidPtr& groupoid() const { return quotient_; }
  int num_orbits() const { return int(reps_.size()); }
  int orbit_of(int arrow) const { return orbit_of_[static_cast<size_t>(arrow)]; }
  int rep(int orbit) const { return reps_[static_cast<size_t>(orbit)]; }
  // some element of H_{rep(i), rep(j)}; -1 if not composable
  int h_witness(int i, int j) const { return witness_[static_cast<size_t>(i)][static_cast<size_t>(j)]; }

 private:
  std::shared_ptr<const GroupoidAction> action_;
  Subgroup h_;
  GroupoidPtr quotient_;
  std::vector<int> reps_;
  std::vector<int> orbit_of_;
  std::vector<std::vector<int>> witness_;
};

}  // namespace hx
