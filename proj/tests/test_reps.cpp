#include <catch2/catch_amalgamated.hpp>

#include "hx/reps_io.hpp"

using namespace hx;
namespace nr = hx::reps;

namespace {

Scenario load(const std::string& name) { return load_scenario("scenarios/" + name); }

nr::CovariantPair point_pair(const SystemPtr& sys) {
  nr::CovariantPair pair;
  int n = int(sys->pair()->coset_reps().size());
  pair.pi.space_dim = n;
  pair.pi.images.push_back(nr::CMat::Identity(n, n));
  pair.mu = nr::regular_rep(sys->pair());
  return pair;
}

nr::CovariantPair normal_pair(const SystemPtr& sys) {
  nr::CovariantPair pair;
  auto gamma_e = sys->gamma_bundle(sys->group()->identity());
  nr::OrbitBasis basis(gamma_e);
  pair.pi = nr::left_regular(nr::orbit_section_table(gamma_e));
  for (int rep : sys->pair()->double_coset_reps())
    pair.mu[rep] = nr::alpha_bar_matrix(sys, basis, rep);
  return pair;
}

}  // namespace

TEST_CASE("regular representation of the Hecke algebra on C[G/Gamma]") {
  auto sc = load("point_s3.json");
  auto mu = nr::regular_rep(sc.pair);
  int e_rep = sc.pair->dcoset_rep(sc.group->identity());
  int t_rep = -1;
  for (int rep : sc.pair->double_coset_reps())
    if (rep != e_rep) t_rep = rep;

  CHECK(nr::max_norm(mu.at(e_rep) - nr::CMat::Identity(3, 3)) < 1e-14);
  // mu(T)^2 = 2 I + mu(T), frozen against the exact structure constants
  nr::CMat lhs = mu.at(t_rep) * mu.at(t_rep);
  nr::CMat rhs = 2.0 * nr::CMat::Identity(3, 3) + mu.at(t_rep);
  CHECK(nr::max_norm(lhs - rhs) < 1e-12);
  // *-property: mu(f*) = mu(f)^dagger (T is self-adjoint here)
  CHECK(nr::max_norm(mu.at(t_rep).adjoint() - mu.at(t_rep)) < 1e-14);

  // full check against the structure table
  auto table = nr::hecke_algebra_table(sc.pair);
  nr::Rep rep;
  rep.space_dim = 3;
  for (int r : sc.pair->double_coset_reps()) rep.images.push_back(mu.at(r));
  CHECK(nr::star_homo_residual(table, rep) < 1e-12);
}

TEST_CASE("point scenario covariant pair") {
  auto sc = load("point_s3.json");
  auto pair = point_pair(sc.system);
  auto report = nr::check_covariant(sc.system, pair);
  CHECK(report.ok);
  CHECK(report.max_residual < 1e-12);
  CHECK(report.mu_homo_residual < 1e-12);

  // a perturbed mu fails with a named witness
  auto broken = pair;
  int t_rep = -1;
  for (int rep : sc.pair->double_coset_reps())
    if (rep != sc.pair->dcoset_rep(sc.group->identity())) t_rep = rep;
  broken.mu[t_rep](0, 0) += 0.1;
  auto bad = nr::check_covariant(sc.system, broken);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.failures.empty());
}

TEST_CASE("point scenario: integrated form is mu itself") {
  auto sc = load("point_s3.json");
  auto pair = point_pair(sc.system);
  nr::CrossedTable ct(sc.system);
  auto phi = nr::integrated_form(sc.system, pair, ct);
  CHECK(nr::star_homo_residual(ct.alg, phi) < 1e-12);
  // the crossed basis of the point scenario is the Hecke basis
  REQUIRE(ct.items.size() == size_t(sc.pair->num_dcosets()));
  for (size_t k = 0; k < ct.items.size(); ++k)
    CHECK(nr::max_norm(phi.images[k] - pair.mu.at(ct.items[k].g)) < 1e-12);
}

TEST_CASE("normal scenario: classical covariant pair from a Z2 unitary") {
  auto sc = load("normal_s3a3.json");
  auto pair = normal_pair(sc.system);
  CHECK(nr::star_homo_residual(nr::orbit_section_table(
                                   sc.system->gamma_bundle(sc.group->identity())),
                               pair.pi) < 1e-12);
  auto report = nr::check_covariant(sc.system, pair);
  CHECK(report.ok);
  CHECK(report.max_residual < 1e-9);
  CHECK(report.free_forms_agree);
}

TEST_CASE("round trips between covariant pairs and representations") {
  for (const std::string name : {"point_s3.json", "normal_s3a3.json"}) {
    auto sc = load(name);
    auto pair = name == "point_s3.json" ? point_pair(sc.system) : normal_pair(sc.system);
    nr::CrossedTable ct(sc.system);
    auto phi = nr::integrated_form(sc.system, pair, ct);
    REQUIRE(nr::star_homo_residual(ct.alg, phi) < 1e-9);

    auto back = nr::restrict_rep(sc.system, phi, ct);
    double res = 0;
    for (size_t i = 0; i < pair.pi.images.size(); ++i)
      res = std::max(res, nr::max_norm(back.pi.images[i] - pair.pi.images[i]));
    nr::CMat w = nr::image_space_basis(pair.pi);
    for (const auto& [rep, m] : pair.mu)
      res = std::max(res, nr::project_residual(w, back.mu.at(rep) - m));
    CHECK(res < 1e-9);

    auto phi2 = nr::integrated_form(sc.system, back, ct);
    double res2 = 0;
    for (size_t i = 0; i < phi.images.size(); ++i)
      res2 = std::max(res2, nr::max_norm(phi2.images[i] - phi.images[i]));
    CHECK(res2 < 1e-9);

    // Phi(f*) = Phi(f)^dagger within tolerance, via the star table
    for (int i = 0; i < ct.alg.dim; ++i) {
      nr::CMat st = nr::CMat::Zero(phi.space_dim, phi.space_dim);
      for (const auto& [k, c] : ct.alg.star[static_cast<size_t>(i)])
        st += nr::to_c(c) * phi.images[static_cast<size_t>(k)];
      CHECK(nr::max_norm(phi.images[static_cast<size_t>(i)].adjoint() - st) < 1e-9);
    }
  }
}

TEST_CASE("covariant pairs satisfy the two auxiliary exchange identities") {
  for (const std::string name : {"point_s3.json", "normal_s3a3.json"}) {
    auto sc = load(name);
    const auto& sys = sc.system;
    const auto& g = sc.group;
    const auto& act = *sys->action()->groupoid_action();
    const auto& gd = sc.groupoid;
    auto pair = name == "point_s3.json" ? point_pair(sys) : normal_pair(sys);
    auto gamma_e = sys->gamma_bundle(g->identity());
    nr::OrbitBasis basis(gamma_e);
    nr::CMat w = nr::image_space_basis(pair.pi);

    for (int grep : sys->pair()->double_coset_reps())
      for (int o = 0; o < gamma_e->orbits()->num_orbits(); ++o) {
        int x = gamma_e->orbits()->rep(o);
        Mat a(gamma_e->fiber_rows(o), gamma_e->fiber_cols(o));
        a(0, 0) = Scalar(1);
        nr::CMat pi_a = pair.pi.apply(basis.coords(OrbitSection::elementary(gamma_e, x, a)));

        // pi~(1_{r(x)G}) mu(GgG) pi~([alpha_{g^-1}(a)]_{xgG}) =
        //   pi~([a]_{xG}) mu(GgG) pi~(1_{s(x)gG})
        nr::CMat lhs = nr::pi_tilde_unit(basis, pair.pi, gd->rng(x)) *
                       pair.mu.at(grep) *
                       pair.pi.apply(basis.coords(OrbitSection::elementary(
                           gamma_e, act.act(x, grep),
                           sys->action()->alpha(g->inv(grep), x, a))));
        nr::CMat rhs = pi_a * pair.mu.at(grep) *
                       nr::pi_tilde_unit(basis, pair.pi, act.act(gd->src(x), grep));
        CHECK(nr::project_residual(w, lhs - rhs) < 1e-9);

        // mu(GgG) pi~([a]_{xG}) = sum over [c] in E^{s(x)}_{g^-1,e} of
        //   pi~(1_{r(x) c g^-1 G}) mu(GgG) pi~([a]_{xG})
        nr::CMat left = pair.mu.at(grep) * pi_a;
        nr::CMat sum = nr::CMat::Zero(pair.pi.space_dim, pair.pi.space_dim);
        auto cd = counting(*sys, g->inv(grep), g->identity(), gd->src(x));
        for (int c : cd.E)
          sum += nr::pi_tilde_unit(basis, pair.pi,
                                   act.act(gd->rng(x), g->mul(c, g->inv(grep)))) *
                 pair.mu.at(grep) * pi_a;
        CHECK(nr::project_residual(w, left - sum) < 1e-9);
      }
  }
}

TEST_CASE("column spaces of pi(C_c(A/Gamma)) and pi~(C_c(X0/Gamma)) agree") {
  auto sc = load("normal_s3a3.json");
  auto pair = normal_pair(sc.system);
  auto gamma_e = sc.system->gamma_bundle(sc.group->identity());
  nr::OrbitBasis basis(gamma_e);
  nr::CMat w_pi = nr::image_space_basis(pair.pi);

  // stack pi~(1_{u Gamma}) over unit orbits
  std::vector<nr::CMat> projs;
  for (int u : sc.groupoid->units())
    projs.push_back(nr::pi_tilde_unit(basis, pair.pi, u));
  nr::CMat stacked(pair.pi.space_dim, int(projs.size()) * pair.pi.space_dim);
  for (size_t i = 0; i < projs.size(); ++i)
    stacked.middleCols(int(i) * pair.pi.space_dim, pair.pi.space_dim) = projs[i];
  Eigen::JacobiSVD<nr::CMat> svd(stacked, Eigen::ComputeThinU);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9) ++r;
  nr::CMat w_units = svd.matrixU().leftCols(r);

  // equal projectors onto the two column spaces
  nr::CMat p1 = w_pi * w_pi.adjoint();
  nr::CMat p2 = w_units * w_units.adjoint();
  CHECK(nr::max_norm(p1 - p2) < 1e-9);
}

TEST_CASE("covariant pairs round-trip through JSON") {
  auto sc = load("point_s3.json");
  auto pair = point_pair(sc.system);
  Json j = nr::covariant_pair_to_json(pair);
  auto back = nr::covariant_pair_from_json(sc.system, j);
  REQUIRE(back.pi.space_dim == pair.pi.space_dim);
  for (size_t i = 0; i < pair.pi.images.size(); ++i)
    CHECK(nr::max_norm(back.pi.images[i] - pair.pi.images[i]) == 0.0);
  for (const auto& [rep, m] : pair.mu)
    CHECK(nr::max_norm(back.mu.at(rep) - m) == 0.0);

  // the shipped fixture with an explicit representation block is covariant
  auto with_rep = load("point_s3_with_rep.json");
  REQUIRE_FALSE(with_rep.representation.is_null());
  auto parsed = nr::covariant_pair_from_json(with_rep.system, with_rep.representation);
  auto report = nr::check_covariant(with_rep.system, parsed);
  CHECK(report.ok);
  CHECK(report.max_residual < 1e-12);
}

TEST_CASE("degenerate representations are flagged") {
  auto sc = load("point_s3.json");
  nr::CovariantPair pair;
  pair.pi.space_dim = 3;
  pair.pi.images.push_back(nr::CMat::Zero(3, 3));
  pair.mu = nr::regular_rep(sc.pair);
  CHECK_THROWS_AS(nr::check_covariant(sc.system, pair), Error);
}
