#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "hx/group.hpp"

using namespace hx;

namespace {

// Independent closure oracle used to pin the expected generated orders.
std::set<Perm> brute_force_closure(int degree, const std::vector<Perm>& gens) {
  Perm id(static_cast<size_t>(degree));
  for (int i = 0; i < degree; ++i) id[static_cast<size_t>(i)] = i;
  std::set<Perm> out{id};
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<Perm> next = out;
    for (const auto& a : out)
      for (const auto& g : gens)
        if (next.insert(perm_compose(a, g)).second) grew = true;
    out = next;
  }
  return out;
}

}  // namespace

TEST_CASE("group construction from generators and tables") {
  auto s3 = FiniteGroup::from_permutations(3, {{1, 0, 2}, {1, 2, 0}});
  CHECK(s3->order() == 6);
  CHECK(s3->order() == int(brute_force_closure(3, {{1, 0, 2}, {1, 2, 0}}).size()));

  auto z2 = FiniteGroup::from_cayley({{0, 1}, {1, 0}});
  CHECK(z2->order() == 2);
  CHECK(z2->inv(0) == 0);
  CHECK(z2->inv(1) == 1);

  auto klein =
      FiniteGroup::from_permutations(4, {{1, 0, 3, 2}, {2, 3, 0, 1}});
  CHECK(klein->order() == 4);
  CHECK(klein->order() ==
        int(brute_force_closure(4, {{1, 0, 3, 2}, {2, 3, 0, 1}}).size()));
  for (int a = 0; a < 4; ++a) CHECK(klein->inv(a) == a);
}

TEST_CASE("invalid cayley data is rejected with a witness") {
  // not associative: 2x2 table with a*a = a pattern broken
  CHECK_THROWS_AS(FiniteGroup::from_cayley({{0, 1}, {0, 0}}), Error);
  try {
    FiniteGroup::from_cayley({{1, 0}, {0, 0}});
  } catch (const Error& e) {
    CHECK((e.code() == "NoIdentity" || e.code() == "NonAssociative" ||
           e.code() == "NotClosed"));
  }
  CHECK_THROWS_AS(FiniteGroup::from_cayley({{0, 2}, {1, 0}}), Error);
}

TEST_CASE("double cosets partition the group") {
  auto s3 = FiniteGroup::symmetric(3);
  Subgroup gamma = Subgroup::generated(s3, {s3->index_of({1, 0, 2})});
  REQUIRE(gamma.size() == 2);

  auto dcs = double_cosets(s3, gamma, gamma);
  REQUIRE(dcs.size() == 2);
  // brute-force partition of the 6 elements
  std::set<std::set<int>> classes;
  for (int g = 0; g < 6; ++g) {
    std::set<int> cls;
    for (int a : gamma.members())
      for (int b : gamma.members()) cls.insert(s3->mul(s3->mul(a, g), b));
    classes.insert(cls);
  }
  REQUIRE(classes.size() == 2);
  for (const auto& dc : dcs) {
    std::set<int> mem(dc.members.begin(), dc.members.end());
    CHECK(classes.count(mem) == 1);
  }
  CHECK(dcs[0].members.size() + dcs[1].members.size() == 6);
  for (const auto& dc : dcs)
    if (dc.members.size() == 4) CHECK(dc.left_coset_reps.size() == 2);

  auto singles = double_cosets(s3, Subgroup::trivial(s3), Subgroup::trivial(s3));
  CHECK(singles.size() == 6);
  auto whole = double_cosets(s3, Subgroup::full(s3), Subgroup::full(s3));
  REQUIRE(whole.size() == 1);
  CHECK(whole[0].members.size() == 6);

  CHECK_THROWS_AS(Subgroup(s3, {0, 1, 2}), Error);  // not closed in general
}

TEST_CASE("coset stats: L, R, Delta and Gamma^g") {
  auto s3 = FiniteGroup::symmetric(3);
  Subgroup gamma = Subgroup::generated(s3, {s3->index_of({1, 0, 2})});
  int g13 = s3->index_of({2, 1, 0});
  REQUIRE(g13 >= 0);

  auto st = coset_stats(s3, gamma, g13);
  CHECK(st.L == 2);
  CHECK(st.R == 2);
  CHECK(st.delta == Rational(1));
  CHECK(st.gamma_g.size() == 1);

  for (int m : gamma.members()) {
    auto sm = coset_stats(s3, gamma, m);
    CHECK(sm.L == 1);
    CHECK(sm.R == 1);
    CHECK(sm.gamma_g == gamma);
  }
  for (int g = 0; g < 6; ++g) {
    CHECK(coset_stats(s3, gamma, g).delta == Rational(1));
    CHECK(coset_stats(s3, gamma, g).L == coset_stats(s3, gamma, s3->inv(g)).R);
  }
}

TEST_CASE("stabilizers of set actions") {
  auto s3 = FiniteGroup::symmetric(3);
  // right translation of G on itself
  std::vector<std::vector<int>> tr(6, std::vector<int>(6));
  for (int p = 0; p < 6; ++p)
    for (int g = 0; g < 6; ++g) tr[static_cast<size_t>(p)][static_cast<size_t>(g)] = s3->mul(p, g);
  GroupSetAction right(s3, 6, tr);
  CHECK(stabilizer(right, 0).size() == 1);

  std::vector<std::vector<int>> fix(6, std::vector<int>(6));
  for (int p = 0; p < 6; ++p)
    for (int g = 0; g < 6; ++g) fix[static_cast<size_t>(p)][static_cast<size_t>(g)] = p;
  GroupSetAction trivial(s3, 6, fix);
  CHECK(stabilizer(trivial, 2).size() == 6);

  // S3 on K\S3, K = <(123)>: stabilizer of Ke is K
  Subgroup k = Subgroup::generated(s3, {s3->index_of({1, 2, 0})});
  REQUIRE(k.size() == 3);
  // points: 0 = K (even), 1 = K(12) (odd); enumerate fixing elements directly
  std::vector<std::vector<int>> cosets(2, std::vector<int>(6));
  for (int g = 0; g < 6; ++g) {
    bool even = k.contains(g);
    cosets[0][static_cast<size_t>(g)] = even ? 0 : 1;
    cosets[1][static_cast<size_t>(g)] = even ? 1 : 0;
  }
  GroupSetAction coset_action(s3, 2, cosets);
  Subgroup stab = stabilizer(coset_action, 0);
  CHECK(stab == k);
}
