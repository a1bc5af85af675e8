#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>

#include "hx/section.hpp"

using namespace hx;

namespace {

struct LineScenario {
  GroupPtr g;
  GroupoidPtr x;
  std::shared_ptr<const GroupoidAction> act;
  BundlePtr bundle;
  BundleActionPtr ba;
  Subgroup gamma;
  OrbitBundlePtr orbit;
};

LineScenario line_scenario() {
  LineScenario s;
  s.g = FiniteGroup::symmetric(3);
  s.x = Groupoid::transformation(s.g);
  s.act = std::make_shared<GroupoidAction>(GroupoidAction::translation(s.x, s.g));
  s.bundle = std::make_shared<FellBundle>(s.x, std::map<int, int>{});
  s.ba = std::make_shared<BundleAction>(BundleAction::identity_cocycle(s.bundle, s.act));
  s.gamma = Subgroup::generated(s.g, {s.g->index_of({1, 0, 2})});
  s.orbit = std::make_shared<OrbitBundle>(s.ba, s.gamma);
  return s;
}

Section random_section(std::mt19937& rng, const BundlePtr& b) {
  Section s(b);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int x = 0; x < b->base()->arrows(); ++x) {
    if (rng() % 2) continue;
    Mat m(b->fiber_rows(x), b->fiber_cols(x));
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        m(i, j) = Scalar(Rational(coef(rng)), Rational(coef(rng), 2));
    s.accumulate(x, m);
  }
  return s;
}

}  // namespace

TEST_CASE("C_c(A) is a unital *-algebra under convolution") {
  auto sc = line_scenario();
  std::mt19937 rng(12);
  Section one = Section::one(sc.bundle);
  for (int t = 0; t < 5; ++t) {
    Section f = random_section(rng, sc.bundle);
    CHECK(one * f == f);
    CHECK(f * one == f);
    CHECK(f.star().star() == f);
    Section g = random_section(rng, sc.bundle);
    CHECK((f * g).star() == g.star() * f.star());
    Section h = random_section(rng, sc.bundle);
    CHECK((f * g) * h == f * (g * h));
  }
}

TEST_CASE("orbit sections over the trivial subgroup reproduce C_c(A)") {
  auto sc = line_scenario();
  auto trivial_orbit = std::make_shared<OrbitBundle>(
      sc.ba, Subgroup::trivial(sc.g));
  std::mt19937 rng(13);
  for (int t = 0; t < 5; ++t) {
    Section f = random_section(rng, sc.bundle), g = random_section(rng, sc.bundle);
    OrbitSection fo(trivial_orbit), go(trivial_orbit);
    for (const auto& [x, v] : f.data()) fo.set(trivial_orbit->orbits()->orbit_of(x), v);
    for (const auto& [x, v] : g.data()) go.set(trivial_orbit->orbits()->orbit_of(x), v);
    CHECK(iota(fo * go) == f * g);
    CHECK(iota(fo.star()) == f.star());
  }
}

TEST_CASE("orbit section algebra has the expected unit and involution") {
  auto sc = line_scenario();
  std::mt19937 rng(16);
  OrbitSection one = OrbitSection::one(sc.orbit);
  for (int t = 0; t < 4; ++t) {
    OrbitSection f(sc.orbit);
    std::uniform_int_distribution<int> pick(0, sc.orbit->orbits()->num_orbits() - 1);
    for (int k = 0; k < 3; ++k) {
      Mat m(1, 1);
      m(0, 0) = Scalar(Rational(int(rng() % 9) - 4, 2), Rational(int(rng() % 5) - 2));
      f.accumulate(pick(rng), m);
    }
    CHECK(one * f == f);
    CHECK(f * one == f);
    CHECK(f.star().star() == f);
  }
}

TEST_CASE("as_multiplier realizes the displayed column formula") {
  auto sc = line_scenario();
  const auto& gd = sc.x;
  Mat one(1, 1);
  one(0, 0) = Scalar(1);
  for (int x : {0, 7, 20}) {
    MultiplierOp t = as_multiplier(OrbitSection::elementary(sc.orbit, x, one));
    for (int y = 0; y < gd->arrows(); ++y) {
      Section col = t.apply(Section::delta(sc.bundle, y, one));
      auto hs = sc.act->h_between(sc.gamma, x, y);
      if (hs.empty()) {
        CHECK(col.is_zero());
      } else {
        int h = hs.front();
        int target = gd->comp(sc.act->act(x, h), y);
        Mat expect = sc.ba->alpha(sc.g->inv(h), x, one);  // alpha_{h^-1}(a) b
        REQUIRE(col.data().size() == 1);
        CHECK(col.at(target) == expect);
      }
    }
  }
}

TEST_CASE("unit multipliers are diagonal projections") {
  auto sc = line_scenario();
  // f = 1 everywhere is the identity operator
  std::map<int, Scalar> all;
  for (int u : sc.x->units()) all[u] = Scalar(1);
  CHECK(unit_multiplier(sc.bundle, all) == MultiplierOp::one(sc.bundle));

  // 1_{u Gamma}: projection onto arrows whose range lies in the orbit
  int u = sc.x->units().front();
  MultiplierOp p = unit_orbit_indicator(sc.bundle, *sc.act, sc.gamma, u);
  Mat dense = p.matrix();
  CHECK(dense * dense == dense);
  int expected_rank = 0;
  std::set<int> orbit;
  for (int t : sc.gamma.members()) orbit.insert(sc.act->act(u, t));
  for (int y = 0; y < sc.x->arrows(); ++y)
    if (orbit.count(sc.x->rng(y))) ++expected_rank;
  CHECK(rank(dense) == expected_rank);
}

TEST_CASE("point bundle multipliers are scalars") {
  auto pt = Groupoid::trivial_set(1);
  auto g = FiniteGroup::symmetric(3);
  auto act = std::make_shared<GroupoidAction>(GroupoidAction::trivial(pt, g));
  auto bundle = std::make_shared<FellBundle>(pt, std::map<int, int>{});
  auto ba = std::make_shared<BundleAction>(BundleAction::identity_cocycle(bundle, act));
  auto orbit = std::make_shared<OrbitBundle>(
      ba, Subgroup::generated(g, {g->index_of({1, 0, 2})}));
  Mat lam(1, 1);
  lam(0, 0) = Scalar(Rational(3, 7));
  MultiplierOp t = as_multiplier(OrbitSection::elementary(orbit, 0, lam));
  CHECK(t.matrix()(0, 0) == Scalar(Rational(3, 7)));
}

TEST_CASE("multiplier round trip and NotInImage") {
  auto sc = line_scenario();
  std::mt19937 rng(14);
  for (int t = 0; t < 6; ++t) {
    OrbitSection f(sc.orbit);
    std::uniform_int_distribution<int> pick(0, sc.orbit->orbits()->num_orbits() - 1);
    Mat m(1, 1);
    m(0, 0) = Scalar(Rational(int(rng() % 7) - 3), Rational(1, 2));
    f.set(pick(rng), m);
    CHECK(multiplier_to_section(as_multiplier(f), sc.orbit) == f);
  }
  CHECK(multiplier_to_section(MultiplierOp::zero(sc.bundle), sc.orbit).is_zero());

  // a non-invariant section is not in the image
  Mat one(1, 1);
  one(0, 0) = Scalar(1);
  MultiplierOp bad(Section::delta(sc.bundle, 0, one));
  CHECK_THROWS_AS(multiplier_to_section(bad, sc.orbit), Error);
}

TEST_CASE("alpha-bar on multipliers") {
  auto sc = line_scenario();
  std::mt19937 rng(15);
  Section f = random_section(rng, sc.bundle);
  MultiplierOp t(f);
  CHECK(alpha_bar(*sc.ba, sc.g->identity(), t) == t);

  // conjugate-orbit identity: alpha-bar_g iota([a]_{xH}) = iota([alpha_g(a)]_{(xg^-1)(gHg^-1)})
  Mat one(1, 1);
  one(0, 0) = Scalar(1);
  for (int g = 0; g < 6; ++g) {
    auto conj_bundle = std::make_shared<OrbitBundle>(sc.ba, sc.gamma.conjugate(g));
    for (int x : {3, 11}) {
      MultiplierOp lhs =
          alpha_bar(*sc.ba, g, as_multiplier(OrbitSection::elementary(sc.orbit, x, one)));
      MultiplierOp rhs = as_multiplier(OrbitSection::elementary(
          conj_bundle, sc.act->act(x, sc.g->inv(g)), sc.ba->alpha(g, x, one)));
      CHECK(lhs == rhs);
    }
  }

  // trivial action leaves every multiplier fixed
  auto z3 = Groupoid::one_unit_group(FiniteGroup::cyclic(3));
  auto z2 = FiniteGroup::cyclic(2);
  auto fix = std::make_shared<GroupoidAction>(GroupoidAction::trivial(z3, z2));
  auto zb = std::make_shared<FellBundle>(z3, std::map<int, int>{});
  auto zba = std::make_shared<BundleAction>(BundleAction::identity_cocycle(zb, fix));
  Section zf(zb);
  Mat m(1, 1);
  m(0, 0) = Scalar(Rational(5, 3));
  zf.set(1, m);
  CHECK(alpha_bar(*zba, 1, MultiplierOp(zf)) == MultiplierOp(zf));
}
