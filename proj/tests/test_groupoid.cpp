#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "hx/groupoid.hpp"

using namespace hx;

TEST_CASE("groupoid constructors") {
  auto s3 = FiniteGroup::symmetric(3);
  auto transf = Groupoid::transformation(s3);
  CHECK(transf->arrows() == 36);
  CHECK(transf->units().size() == 6);

  auto pt = Groupoid::trivial_set(1);
  CHECK(pt->arrows() == 1);
  CHECK(pt->units().size() == 1);

  auto z3 = Groupoid::one_unit_group(FiniteGroup::cyclic(3));
  CHECK(z3->arrows() == 3);
  CHECK(z3->units().size() == 1);
}

TEST_CASE("explicit groupoid tables are validated with witnesses") {
  // pair groupoid on 2 points: arrows (i,j) indexed 2*i+j
  auto idx = [](int i, int j) { return 2 * i + j; };
  std::vector<int> src{0, 3, 0, 3}, rng{0, 0, 3, 3}, inv{0, 2, 1, 3};
  std::vector<std::vector<int>> comp(4, std::vector<int>(4, -1));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) comp[static_cast<size_t>(idx(i, j))][static_cast<size_t>(idx(j, k))] = idx(i, k);
  CHECK_NOTHROW(Groupoid(4, src, rng, inv, comp));

  // break composability typing
  auto bad = comp;
  bad[0][1] = 0;
  CHECK_THROWS_AS(Groupoid(4, src, rng, inv, bad), Error);

  // break the inverse
  auto binv = inv;
  binv[1] = 1;
  CHECK_THROWS_AS(Groupoid(4, src, rng, binv, comp), Error);
}

TEST_CASE("group actions on groupoids") {
  auto s3 = FiniteGroup::symmetric(3);
  auto transf = Groupoid::transformation(s3);
  auto translation = GroupoidAction::translation(transf, s3);
  Subgroup gamma = Subgroup::generated(s3, {s3->index_of({1, 0, 2})});
  CHECK(translation.unit_action_free(Subgroup::full(s3)));
  CHECK(check_h_good(translation, gamma).holds);
  CHECK(check_h_intersection(translation, gamma).holds);

  auto z3 = Groupoid::one_unit_group(FiniteGroup::cyclic(3));
  auto z2 = FiniteGroup::cyclic(2);
  auto trivial = GroupoidAction::trivial(z3, z2);
  CHECK(check_h_good(trivial, Subgroup::full(z2)).holds);
  CHECK(check_h_intersection(trivial, Subgroup::full(z2)).holds);

  // Z2 inverting Z3: a valid action that is not Z2-good
  GroupoidAction flip(z3, z2, {{0, 0}, {1, 2}, {2, 1}});
  auto rep = check_h_good(flip, Subgroup::full(z2));
  REQUIRE_FALSE(rep.holds);
  CHECK((rep.witness_x == 1 || rep.witness_x == 2));
  CHECK(rep.witness_h == 1);
  // the witness is genuine: s(x)h = s(x) but xh != x
  CHECK(flip.act(z3->src(rep.witness_x), rep.witness_h) == z3->src(rep.witness_x));
  CHECK(flip.act(rep.witness_x, rep.witness_h) != rep.witness_x);

  // an inconsistent table is rejected
  CHECK_THROWS_AS(GroupoidAction(z3, z2, {{0, 0}, {1, 1}, {2, 1}}), Error);
}

TEST_CASE("the coset-space scenario fails the intersection property") {
  auto s3 = FiniteGroup::symmetric(3);
  Subgroup k = Subgroup::generated(s3, {s3->index_of({1, 2, 0})});  // A3
  auto points = Groupoid::trivial_set(2);
  std::vector<std::vector<int>> map(2, std::vector<int>(6));
  for (int g = 0; g < 6; ++g) {
    bool even = k.contains(g);
    map[0][static_cast<size_t>(g)] = even ? 0 : 1;
    map[1][static_cast<size_t>(g)] = even ? 1 : 0;
  }
  GroupoidAction action(points, s3, map);
  Subgroup gamma = Subgroup::generated(s3, {s3->index_of({1, 0, 2})});
  CHECK(check_h_good(action, gamma).holds);
  auto rep = check_h_intersection(action, gamma);
  REQUIRE_FALSE(rep.holds);
  // verify the witness: uH ∩ u gHg^-1 has 2 points, u H^g only one
  std::set<int> lhs, uh, uconj, rhs;
  Subgroup conj = gamma.conjugate(rep.witness_g);
  Subgroup gg = gamma_g(gamma, rep.witness_g);
  for (int t : gamma.members()) uh.insert(action.act(rep.witness_u, t));
  for (int t : conj.members()) uconj.insert(action.act(rep.witness_u, t));
  for (int p : uh)
    if (uconj.count(p)) lhs.insert(p);
  for (int t : gg.members()) rhs.insert(action.act(rep.witness_u, t));
  CHECK(lhs != rhs);
}

TEST_CASE("orbit groupoids") {
  auto s3 = FiniteGroup::symmetric(3);
  auto transf = Groupoid::transformation(s3);
  auto action =
      std::make_shared<GroupoidAction>(GroupoidAction::translation(transf, s3));
  Subgroup gamma = Subgroup::generated(s3, {s3->index_of({1, 0, 2})});

  OrbitGroupoid og(action, gamma);
  CHECK(og.num_orbits() == 18);  // |G| * |G/Gamma| = 6 * 3
  CHECK(og.groupoid()->units().size() == 3);

  OrbitGroupoid trivial_h(action, Subgroup::trivial(s3));
  CHECK(trivial_h.num_orbits() == 36);

  auto z3 = Groupoid::one_unit_group(FiniteGroup::cyclic(3));
  auto z2 = FiniteGroup::cyclic(2);
  auto fix = std::make_shared<GroupoidAction>(GroupoidAction::trivial(z3, z2));
  OrbitGroupoid fixed(fix, Subgroup::full(z2));
  CHECK(fixed.num_orbits() == 3);  // trivial action: X/H = X

  auto flip = std::make_shared<GroupoidAction>(
      GroupoidAction(z3, z2, {{0, 0}, {1, 2}, {2, 1}}));
  CHECK_THROWS_AS(OrbitGroupoid(flip, Subgroup::full(z2)), Error);
}
