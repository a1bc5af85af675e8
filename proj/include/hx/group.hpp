#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hx/error.hpp"
#include "hx/rational.hpp"

namespace hx {

using Perm = std::vector<int>;  // images: p -> perm[p]

inline Perm perm_compose(const Perm& first, const Perm& then) {
  Perm r(first.size());
  for (size_t p = 0; p < first.size(); ++p) r[p] = then[static_cast<size_t>(first[p])];
  return r;
}

inline std::string perm_cycles(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == int(i)) continue;
    s += "(";
    size_t j = i;
    bool head = true;
    while (!seen[j]) {
      seen[j] = true;
      s += (head ? "" : " ") + std::to_string(j + 1);
      head = false;
      j = static_cast<size_t>(p[j]);
    }
    s += ")";
  }
  return s.empty() ? "e" : s;
}

// Finite group as validated Cayley data.  Elements are indices 0..order-1;
// permutation-built groups are ordered lexicographically by image tuple so the
// identity lands at index 0 and canonical representatives are reproducible.
class FiniteGroup {
 public:
  static std::shared_ptr<const FiniteGroup> from_cayley(
      const std::vector<std::vector<int>>& table) {
    auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
    int n = int(table.size());
    require(n > 0, "NotClosed", "empty Cayley table");
    g->order_ = n;
    g->mul_ = table;
    for (const auto& row : table) {
      require(int(row.size()) == n, "NotClosed", "ragged Cayley table");
      for (int v : row)
        require(0 <= v && v < n, "NotClosed",
                "Cayley entry " + std::to_string(v) + " out of range");
    }
    g->finish_validation();
    for (int i = 0; i < n; ++i) g->names_.push_back("g" + std::to_string(i));
    g->names_[static_cast<size_t>(g->identity_)] = "e";
    return g;
  }

  static std::shared_ptr<const FiniteGroup> from_permutations(
      int degree, const std::vector<Perm>& generators) {
    for (const auto& p : generators) {
      require(int(p.size()) == degree, "NotClosed", "generator degree mismatch");
      std::vector<bool> hit(degree, false);
      for (int v : p) {
        require(0 <= v && v < degree && !hit[static_cast<size_t>(v)], "NotClosed",
                "generator is not a permutation");
        hit[static_cast<size_t>(v)] = true;
      }
    }
    Perm id(degree);
    for (int i = 0; i < degree; ++i) id[static_cast<size_t>(i)] = i;
    std::set<Perm> closure{id};
    std::vector<Perm> frontier{id};
    while (!frontier.empty()) {
      std::vector<Perm> next;
      for (const auto& x : frontier)
        for (const auto& gen : generators) {
          Perm y = perm_compose(x, gen);
          if (closure.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
    std::vector<Perm> elems(closure.begin(), closure.end());  // lex-sorted
    std::map<Perm, int> index;
    for (size_t i = 0; i < elems.size(); ++i) index[elems[i]] = int(i);
    auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
    int n = int(elems.size());
    g->order_ = n;
    g->mul_.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        g->mul_[static_cast<size_t>(a)][static_cast<size_t>(b)] = index.at(perm_compose(elems[static_cast<size_t>(a)], elems[static_cast<size_t>(b)]));
    g->perms_ = elems;
    g->finish_validation();
    for (const auto& p : elems) g->names_.push_back(perm_cycles(p));
    return g;
  }

  static std::shared_ptr<const FiniteGroup> symmetric(int n) {
    std::vector<Perm> gens;
    Perm t(n);
    for (int i = 0; i < n; ++i) t[static_cast<size_t>(i)] = i;
    std::swap(t[0], t[1]);
    gens.push_back(t);
    Perm c(n);
    for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)] = (i + 1) % n;
    gens.push_back(c);
    return from_permutations(n, gens);
  }

  static std::shared_ptr<const FiniteGroup> cyclic(int n) {
    std::vector<std::vector<int>> table(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) table[static_cast<size_t>(a)][static_cast<size_t>(b)] = (a + b) % n;
    return from_cayley(table);
  }

  int order() const { return order_; }
  int mul(int a, int b) const { return mul_[static_cast<size_t>(a)][static_cast<size_t>(b)]; }
  int inv(int a) const { return inv_[static_cast<size_t>(a)]; }
  int identity() const { return identity_; }
  int conj(int g, int h) const { return mul(mul(g, h), inv(g)); }  // g h g^-1
  const std::string& name(int a) const { return names_[static_cast<size_t>(a)]; }
  const std::vector<Perm>& perms() const { return perms_; }

  // Index of a permutation element; -1 when absent or not a perm group.
  int index_of(const Perm& p) const {
    for (size_t i = 0; i < perms_.size(); ++i)
      if (perms_[i] == p) return int(i);
    return -1;
  }

 private:
  FiniteGroup() = default;

  void finish_validation() {
    int n = order_;
    identity_ = -1;
    for (int e = 0; e < n; ++e) {
      bool ok = true;
      for (int a = 0; a < n && ok; ++a)
        ok = mul(e, a) == a && mul(a, e) == a;
      if (ok) {
        identity_ = e;
        break;
      }
    }
    require(identity_ >= 0, "NoIdentity", "no two-sided identity in table");
    inv_.assign(static_cast<size_t>(n), -1);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b)
        if (mul(a, b) == identity_ && mul(b, a) == identity_) {
          inv_[static_cast<size_t>(a)] = b;
          break;
        }
      require(inv_[static_cast<size_t>(a)] >= 0, "NotClosed",
              "element " + std::to_string(a) + " has no two-sided inverse");
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          require(mul(mul(a, b), c) == mul(a, mul(b, c)), "NonAssociative",
                  "triple (" + std::to_string(a) + "," + std::to_string(b) + "," +
                      std::to_string(c) + ")");
  }

  int order_ = 0;
  std::vector<std::vector<int>> mul_;
  std::vector<int> inv_;
  int identity_ = 0;
  std::vector<Perm> perms_;
  std::vector<std::string> names_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

class Subgroup {
 public:
  Subgroup() = default;
  Subgroup(GroupPtr parent, std::vector<int> members)
      : parent_(std::move(parent)), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    mask_.assign(static_cast<size_t>(parent_->order()), false);
    for (int m : members_) {
      require(0 <= m && m < parent_->order(), "NotSubgroup", "member out of range");
      mask_[static_cast<size_t>(m)] = true;
    }
    require(!members_.empty() && mask_[static_cast<size_t>(parent_->identity())], "NotSubgroup",
            "subgroup must contain the identity");
    for (int a : members_) {
      require(mask_[static_cast<size_t>(parent_->inv(a))], "NotSubgroup",
              "not inverse-closed at " + parent_->name(a));
      for (int b : members_)
        require(mask_[static_cast<size_t>(parent_->mul(a, b))], "NotSubgroup",
                "not product-closed at " + parent_->name(a) + "*" + parent_->name(b));
    }
  }

  static Subgroup generated(GroupPtr g, const std::vector<int>& gens) {
    std::set<int> closure{g->identity()};
    std::vector<int> frontier{g->identity()};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int x : frontier)
        for (int gen : gens) {
          for (int y : {g->mul(x, gen), g->mul(x, g->inv(gen))})
            if (closure.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
    return Subgroup(g, std::vector<int>(closure.begin(), closure.end()));
  }

  static Subgroup trivial(GroupPtr g) { return Subgroup(g, {g->identity()}); }
  static Subgroup full(GroupPtr g) {
    std::vector<int> all(static_cast<size_t>(g->order()));
    for (int i = 0; i < g->order(); ++i) all[static_cast<size_t>(i)] = i;
    return Subgroup(std::move(g), all);
  }

  const GroupPtr& parent() const { return parent_; }
  const std::vector<int>& members() const { return members_; }
  int size() const { return int(members_.size()); }
  bool contains(int g) const { return mask_[static_cast<size_t>(g)]; }

  Subgroup conjugate(int g) const {  // g H g^-1
    std::vector<int> m;
    for (int h : members_) m.push_back(parent_->conj(g, h));
    return Subgroup(parent_, std::move(m));
  }

  Subgroup intersect(const Subgroup& other) const {
    std::vector<int> m;
    for (int h : members_)
      if (other.contains(h)) m.push_back(h);
    return Subgroup(parent_, std::move(m));
  }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.members_ == b.members_;
  }

 private:
  GroupPtr parent_;
  std::vector<int> members_;
  std::vector<bool> mask_;
};

// Gamma^g = Gamma ∩ g Gamma g^-1.
inline Subgroup gamma_g(const Subgroup& gamma, int g) {
  return gamma.intersect(gamma.conjugate(g));
}

struct DoubleCoset {
  int rep = 0;                       // least member index
  std::vector<int> left_coset_reps;  // BgC = disjoint union of r*C
  std::vector<int> members;          // sorted
};

// Partition of A (or all of G) into double cosets B g C.  A, when given, is
// an arbitrary subgroup whose elements index the classes; the classes
// themselves are full subsets B a C of G.
inline std::vector<DoubleCoset> double_cosets(const GroupPtr& g, const Subgroup& b,
                                              const Subgroup& c,
                                              const Subgroup* a = nullptr) {
  require(b.parent() == g && c.parent() == g && (!a || a->parent() == g),
          "NotSubgroup", "subgroups belong to a different group");
  std::vector<int> domain;
  if (a)
    domain = a->members();
  else
    for (int i = 0; i < g->order(); ++i) domain.push_back(i);

  std::vector<bool> done(static_cast<size_t>(g->order()), false);
  std::vector<DoubleCoset> out;
  for (int x : domain) {
    if (done[static_cast<size_t>(x)]) continue;
    DoubleCoset dc;
    std::set<int> mem;
    for (int bb : b.members())
      for (int cc : c.members()) mem.insert(g->mul(g->mul(bb, x), cc));
    dc.members.assign(mem.begin(), mem.end());
    dc.rep = dc.members.front();
    for (int m : dc.members) done[static_cast<size_t>(m)] = true;
    // left cosets r*C inside the class, least rep each, in increasing order
    std::set<int> covered;
    for (int m : dc.members) {
      if (covered.count(m)) continue;
      dc.left_coset_reps.push_back(m);
      for (int cc : c.members()) covered.insert(g->mul(m, cc));
    }
    out.push_back(std::move(dc));
  }
  return out;
}

struct CosetStats {
  int L = 0;
  int R = 0;
  Rational delta;
  Subgroup gamma_g;
};

// L(g) = |Gamma g Gamma / Gamma| = [Gamma : Gamma^g]; R(g) = L(g^-1);
// Delta = L/R.  Both routes to L and R are computed and compared.
inline CosetStats coset_stats(const GroupPtr& g, const Subgroup& gamma, int x) {
  require(gamma.parent() == g, "NotSubgroup", "Gamma not a subgroup of G");
  CosetStats st;
  st.gamma_g = hx::gamma_g(gamma, x);

  std::set<int> members;
  for (int a : gamma.members())
    for (int b : gamma.members()) members.insert(g->mul(g->mul(a, x), b));
  std::set<int> left_reps, right_reps;
  {
    std::set<int> covered;
    for (int m : members) {
      if (covered.count(m)) continue;
      left_reps.insert(m);
      for (int c : gamma.members()) covered.insert(g->mul(m, c));
    }
    covered.clear();
    for (int m : members) {
      if (covered.count(m)) continue;
      right_reps.insert(m);
      for (int c : gamma.members()) covered.insert(g->mul(c, m));
    }
  }
  st.L = int(left_reps.size());
  st.R = int(right_reps.size());
  require(st.L * st.gamma_g.size() == gamma.size(), "NotSubgroup",
          "index formula [Gamma:Gamma^g] disagrees with coset count");
  require(st.R * hx::gamma_g(gamma, g->inv(x)).size() == gamma.size(), "NotSubgroup",
          "index formula [Gamma:Gamma^{g^-1}] disagrees with coset count");
  st.delta = Rational(st.L, st.R);
  return st;
}

// Right action of a group on a finite point set, as a validated table.
class GroupSetAction {
 public:
  GroupSetAction(GroupPtr group, int num_points,
                 std::vector<std::vector<int>> table)
      : group_(std::move(group)), n_(num_points), act_(std::move(table)) {
    require(int(act_.size()) == n_, "NotAnAction", "action table row count");
    for (const auto& row : act_)
      require(int(row.size()) == group_->order(), "NotAnAction",
              "action table column count");
    for (int p = 0; p < n_; ++p)
      require(act_[static_cast<size_t>(p)][static_cast<size_t>(group_->identity())] == p, "NotAnAction",
              "identity moves point " + std::to_string(p));
    for (int p = 0; p < n_; ++p)
      for (int a = 0; a < group_->order(); ++a)
        for (int b = 0; b < group_->order(); ++b)
          require(act(act(p, a), b) == act(p, group_->mul(a, b)), "NotAnAction",
                  "compatibility fails at point " + std::to_string(p));
  }

  const GroupPtr& group() const { return group_; }
  int points() const { return n_; }
  int act(int p, int g) const { return act_[static_cast<size_t>(p)][static_cast<size_t>(g)]; }

 private:
  GroupPtr group_;
  int n_;
  std::vector<std::vector<int>> act_;
};

inline Subgroup stabilizer(const GroupSetAction& action, int p) {
  std::vector<int> m;
  for (int g = 0; g < action.group()->order(); ++g)
    if (action.act(p, g) == p) m.push_back(g);
  return Subgroup(action.group(), std::move(m));
}

}  // namespace hx
