#include <catch2/catch_amalgamated.hpp>
#include <map>

#include "hx/hecke.hpp"

using namespace hx;

namespace {

HeckePairPtr s3_pair() {
  auto s3 = FiniteGroup::symmetric(3);
  return std::make_shared<HeckePair>(
      s3, Subgroup::generated(s3, {s3->index_of({1, 0, 2})}));
}

// Independent convolution oracle: f1, f2 as explicit functions on double
// cosets, sum over the 3 left cosets of G/Gamma by brute force.
Scalar oracle_conv_at(const HeckePair& pair, const std::map<int, Scalar>& f1,
                      const std::map<int, Scalar>& f2, int g) {
  const auto& grp = pair.group();
  Scalar acc(0);
  for (int h : pair.coset_reps()) {
    auto a = f1.find(pair.dcoset_rep(h));
    if (a == f1.end()) continue;
    auto b = f2.find(pair.dcoset_rep(grp->mul(grp->inv(h), g)));
    if (b == f2.end()) continue;
    acc += a->second * b->second;
  }
  return acc;
}

}  // namespace

TEST_CASE("T*T = 2 + T for (S3, <(12)>)") {
  auto pair = s3_pair();
  REQUIRE(pair->num_dcosets() == 2);
  int e_rep = pair->dcoset_rep(pair->group()->identity());
  int t_rep = -1;
  for (int rep : pair->double_coset_reps())
    if (rep != e_rep) t_rep = rep;
  REQUIRE(t_rep >= 0);
  CHECK(pair->stats(t_rep).L == 2);

  HeckeElement t = HeckeElement::basis(pair, t_rep);
  HeckeElement tt = hecke_mul(t, t);
  // frozen from the brute-force oracle below
  CHECK(tt.at(e_rep) == Scalar(2));
  CHECK(tt.at(t_rep) == Scalar(1));
  std::map<int, Scalar> ft{{t_rep, Scalar(1)}};
  CHECK(oracle_conv_at(*pair, ft, ft, e_rep) == Scalar(2));
  CHECK(oracle_conv_at(*pair, ft, ft, t_rep) == Scalar(1));

  HeckeElement unit = HeckeElement::unit(pair);
  CHECK(hecke_mul(unit, tt) == tt);
  CHECK(hecke_mul(tt, unit) == tt);
}

TEST_CASE("degenerate pair (G, G) is one-dimensional") {
  auto s3 = FiniteGroup::symmetric(3);
  auto pair = std::make_shared<HeckePair>(s3, Subgroup::full(s3));
  REQUIRE(pair->num_dcosets() == 1);
  HeckeElement a = Scalar(Rational(2, 3)) * HeckeElement::unit(pair);
  HeckeElement b = Scalar(Rational(3, 5)) * HeckeElement::unit(pair);
  CHECK(hecke_mul(a, b) == Scalar(Rational(2, 5)) * HeckeElement::unit(pair));
}

TEST_CASE("star is the Delta-twisted anti-involution") {
  auto pair = s3_pair();
  const auto& g = pair->group();
  HeckeElement unit = HeckeElement::unit(pair);
  CHECK(hecke_star(unit) == unit);
  for (int rep : pair->double_coset_reps()) {
    HeckeElement e = HeckeElement::basis(pair, rep);
    // finite pair: Delta = 1, so star is plain inversion plus conjugation
    CHECK(hecke_star(e) == HeckeElement::basis(pair, g->inv(rep)));
    CHECK(hecke_star(Scalar::i() * e) ==
          Scalar(Rational(0), Rational(-1)) * HeckeElement::basis(pair, g->inv(rep)));
    CHECK(hecke_star(hecke_star(e)) == e);
  }
  for (int a : pair->double_coset_reps())
    for (int b : pair->double_coset_reps()) {
      HeckeElement ea = HeckeElement::basis(pair, a), eb = HeckeElement::basis(pair, b);
      CHECK(hecke_star(hecke_mul(ea, eb)) ==
            hecke_mul(hecke_star(eb), hecke_star(ea)));
    }
}

TEST_CASE("pair mismatch is rejected") {
  auto p1 = s3_pair();
  auto s3 = FiniteGroup::symmetric(3);
  auto p2 = std::make_shared<HeckePair>(s3, Subgroup::full(s3));
  CHECK_THROWS_AS(hecke_mul(HeckeElement::unit(p1), HeckeElement::unit(p2)), Error);
}

TEST_CASE("structure tables") {
  auto pair = s3_pair();
  auto table = hecke_structure_table(pair);
  REQUIRE(table.size() == 4);
  int e_rep = pair->dcoset_rep(pair->group()->identity());
  bool found_tt = false;
  for (const auto& row : table)
    if (row.left != e_rep && row.right != e_rep) {
      found_tt = true;
      CHECK(row.coefficients.at(e_rep) == Scalar(2));
      CHECK(row.coefficients.at(row.left) == Scalar(1));
    }
  CHECK(found_tt);

  auto s3 = FiniteGroup::symmetric(3);
  auto full = std::make_shared<HeckePair>(s3, Subgroup::full(s3));
  auto t1 = hecke_structure_table(full);
  REQUIRE(t1.size() == 1);
  CHECK(t1[0].coefficients.at(t1[0].left) == Scalar(1));

  // (S3, A3): Gamma\G/Gamma = G/Gamma = Z2, the group algebra of Z2
  auto a3 = std::make_shared<HeckePair>(
      s3, Subgroup::generated(s3, {s3->index_of({1, 2, 0})}));
  REQUIRE(a3->num_dcosets() == 2);
  int e2 = a3->dcoset_rep(s3->identity());
  int t2 = -1;
  for (int rep : a3->double_coset_reps())
    if (rep != e2) t2 = rep;
  HeckeElement tau = HeckeElement::basis(a3, t2);
  CHECK(hecke_mul(tau, tau) == HeckeElement::unit(a3));  // tau^2 = 1
}

TEST_CASE("the two presentations produce the same structure constants") {
  auto s4 = FiniteGroup::symmetric(4);
  HeckePairPtr s4_pair = std::make_shared<HeckePair>(
      s4, Subgroup::generated(s4, {s4->index_of({1, 0, 3, 2})}));
  for (const auto& pair : {s3_pair(), s4_pair}) {
    for (int a : pair->double_coset_reps())
      for (int b : pair->double_coset_reps()) {
        auto p1 =
            hecke_mul(HeckeElement::basis(pair, a), HeckeElement::basis(pair, b));
        CHECK(p1.coeffs() == hecke_mul_invariant_functions(*pair, a, b));
      }
  }
}
