// hx: scenario validation, Hecke and crossed-product tables, identity and
// representation audits for finite Hecke-pair crossed products.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "hx/identities.hpp"
#include "hx/io.hpp"
#include "hx/reps_io.hpp"

namespace {

int g_threads = 1;

void init_threads() {
  if (const char* env = std::getenv("HX_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) g_threads = v;
  }
}

void write_artifact(const std::string& out_dir, const std::string& file,
                    const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream os(out_dir + "/" + file);
  os << content;
  std::cout << "wrote " << out_dir << "/" << file << "\n";
}

int cmd_hecke_table(const std::string& path, const std::string& out,
                    const std::string& format) {
  hx::Scenario sc = hx::load_scenario(path);
  std::string content = format == "json" ? hx::hecke_table_json(sc.pair)
                                         : hx::hecke_table_csv(sc.pair);
  write_artifact(out, sc.name + "_hecke." + format, content);
  return 0;
}

int cmd_crossed_table(const std::string& path, const std::string& out,
                      const std::string& format) {
  hx::Scenario sc = hx::load_scenario(path);
  std::string content = format == "json" ? hx::crossed_table_json(sc.system)
                                         : hx::crossed_table_csv(sc.system);
  write_artifact(out, sc.name + "_crossed." + format, content);
  return 0;
}

int cmd_check_action(const std::string& path) {
  try {
    hx::Scenario sc = hx::load_scenario(path);
    std::cout << "scenario '" << sc.name << "': all validation stages passed\n"
              << "  group order " << sc.group->order() << ", |Gamma| = "
              << sc.gamma.size() << ", double cosets " << sc.pair->num_dcosets()
              << "\n  groupoid arrows " << sc.groupoid->arrows() << ", units "
              << sc.groupoid->units().size() << "\n  C_c(A) dimension "
              << sc.bundle->section_dim() << "\n";
    return 0;
  } catch (const hx::AxiomError& e) {
    std::cout << "validation failed at stage '" << e.stage() << "'\n  " << e.what()
              << "\n";
    return 1;
  }
}

int cmd_verify_identities(const std::string& path, const std::string& out) {
  hx::Scenario sc = hx::load_scenario(path);
  using Family = std::function<void(const hx::Scenario&, const hx::checks::Emit&)>;
  std::vector<std::pair<std::string, Family>> families = {
      {"groups", hx::checks::groups_checks},     {"hecke", hx::checks::hecke_checks},
      {"groupoids", hx::checks::groupoid_checks}, {"bundles", hx::checks::bundle_checks},
      {"sections", hx::checks::section_checks},  {"crossed", hx::checks::crossed_checks}};

  std::vector<std::vector<hx::CheckResult>> results(families.size());
  auto run_family = [&](size_t i) {
    auto emit = [&results, i](const std::string& name, bool pass,
                              const std::string& detail) {
      results[i].push_back({name, pass, detail});
    };
    families[i].second(sc, emit);
  };
  if (g_threads > 1) {
    std::vector<std::future<void>> futs;
    for (size_t i = 0; i < families.size(); ++i) {
      futs.push_back(std::async(std::launch::async, run_family, i));
      if (int(futs.size()) >= g_threads) {
        for (auto& f : futs) f.get();
        futs.clear();
      }
    }
    for (auto& f : futs) f.get();
  } else {
    for (size_t i = 0; i < families.size(); ++i) run_family(i);
  }

  bool all = true;
  std::ostringstream report;
  for (const auto& fam : results)
    for (const auto& r : fam) {
      all = all && r.pass;
      report << (r.pass ? "PASS" : "FAIL") << "  " << r.name
             << (r.detail.empty() ? "" : "  [" + r.detail + "]") << "\n";
    }
  report << (all ? "all identities hold\n" : "identity failures detected\n");
  std::cout << report.str();
  if (!out.empty()) write_artifact(out, sc.name + "_identities.txt", report.str());
  return all ? 0 : 1;
}

int cmd_product_oracle(const std::string& path) {
  hx::Scenario sc = hx::load_scenario(path);
  const auto& sys = sc.system;
  const auto& g = sc.group;
  auto gamma_e = sys->gamma_bundle(g->identity());
  int checked = 0, failed = 0;
  for (int grep : sys->pair()->double_coset_reps())
    for (int srep : sys->pair()->double_coset_reps()) {
      hx::CrossedElement hg =
          hx::embed_hecke(sys, hx::HeckeElement::basis(sys->pair(), grep));
      hx::CrossedElement hs =
          hx::embed_hecke(sys, hx::HeckeElement::basis(sys->pair(), srep));
      for (int o = 0; o < gamma_e->orbits()->num_orbits(); ++o)
        for (int i = 0; i < gamma_e->fiber_rows(o); ++i)
          for (int j = 0; j < gamma_e->fiber_cols(o); ++j) {
            hx::Mat a(gamma_e->fiber_rows(o), gamma_e->fiber_cols(o));
            a(i, j) = hx::Scalar(1);
            int x = gamma_e->orbits()->rep(o);
            auto formula = hx::triple_product(
                sys, grep, hx::TripleMiddle::section(x, a), srep);
            auto bydef = hx::conv(
                hg, hx::conv(hx::embed_section(
                                 sys, hx::OrbitSection::elementary(gamma_e, x, a)),
                             hs));
            ++checked;
            if (!(formula == bydef)) ++failed;
          }
      for (int u : sc.groupoid->units()) {
        auto formula = hx::triple_product(sys, grep, hx::TripleMiddle::unit(u), srep);
        auto bydef = hx::conv(hg, hx::conv(hx::embed_unit_orbit(sys, u), hs));
        ++checked;
        if (!(formula == bydef)) ++failed;
      }
    }
  std::cout << "product-oracle: " << checked << " triple products checked, "
            << failed << " differences (exact comparison)\n";
  return failed == 0 ? 0 : 1;
}

int cmd_reps_check(const std::string& path, double tol) {
  hx::Scenario sc = hx::load_scenario(path);
  const auto& sys = sc.system;
  const auto& g = sc.group;
  namespace nr = hx::reps;

  bool gamma_normal = true;
  for (int t = 0; t < g->order() && gamma_normal; ++t)
    gamma_normal = hx::gamma_g(sc.gamma, t).size() == sc.gamma.size();
  auto gamma_e = sys->gamma_bundle(g->identity());
  nr::OrbitBasis basis(gamma_e);

  nr::CovariantPair pair;
  if (!sc.representation.is_null()) {
    pair = nr::covariant_pair_from_json(sys, sc.representation);
    std::cout << "covariant pair loaded from the scenario file\n";
  } else if (basis.dim() == 1) {
    // point-like scenario: pi(lambda) = lambda on C[G/Gamma], mu regular
    int n = int(sys->pair()->coset_reps().size());
    pair.pi.space_dim = n;
    pair.pi.images.push_back(nr::CMat::Identity(n, n));
    pair.mu = nr::regular_rep(sys->pair());
    std::cout << "constructor: trivial pi on C, regular mu on C[G/Gamma]\n";
  } else if (gamma_normal) {
    pair.pi = nr::left_regular(nr::orbit_section_table(gamma_e));
    for (int rep : sys->pair()->double_coset_reps())
      pair.mu[rep] = nr::alpha_bar_matrix(sys, basis, rep);
    std::cout << "constructor: left-regular pi, alpha-bar unitaries for mu\n";
  } else {
    std::cout << "reps-check: no canonical covariant pair constructor for this "
                 "scenario (needs a point-like bundle or normal Gamma)\n";
    return 1;
  }

  auto report = nr::check_covariant(sys, pair, tol);
  std::cout << "covariance residual " << report.max_residual << " (tolerance " << tol
            << "), mu residual " << report.mu_homo_residual << "\n";
  bool ok = report.ok && report.free_forms_agree;

  nr::CrossedTable ct(sys);
  nr::Rep phi = nr::integrated_form(sys, pair, ct);
  double phi_res = nr::star_homo_residual(ct.alg, phi);
  std::cout << "integrated form *-homomorphism residual " << phi_res << "\n";
  ok = ok && phi_res <= tol;

  auto back = nr::restrict_rep(sys, phi, ct);
  double round1 = 0;
  for (size_t i = 0; i < pair.pi.images.size(); ++i)
    round1 = std::max(round1, nr::max_norm(back.pi.images[i] - pair.pi.images[i]));
  nr::CMat w = nr::image_space_basis(pair.pi);
  for (const auto& [rep, m] : pair.mu)
    round1 = std::max(round1, nr::project_residual(w, back.mu.at(rep) - m));
  std::cout << "restrict(integrate(pair)) round-trip residual " << round1 << "\n";
  ok = ok && round1 <= tol;

  nr::Rep phi2 = nr::integrated_form(sys, back, ct);
  double round2 = 0;
  for (size_t i = 0; i < phi.images.size(); ++i)
    round2 = std::max(round2, nr::max_norm(phi2.images[i] - phi.images[i]));
  std::cout << "integrate(restrict(Phi)) round-trip residual " << round2 << "\n";
  ok = ok && round2 <= tol;

  std::cout << (ok ? "reps-check passed\n" : "reps-check FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  init_threads();
  CLI::App app{"exact Hecke-pair crossed product toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, format = "csv";
  double tolerance = 1e-9;

  auto add_common = [&](CLI::App* cmd, bool with_format = false) {
    cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    cmd->add_option("--out", out_dir, "output directory for artifacts");
    if (with_format)
      cmd->add_option("--format", format, "csv or json")
          ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* hecke = app.add_subcommand("hecke-table", "structure constants of H(G,Gamma)");
  add_common(hecke, true);
  auto* action = app.add_subcommand("check-action", "run the validation pipeline");
  action->add_option("scenario", scenario_path, "scenario JSON file")->required();
  auto* crossed =
      app.add_subcommand("crossed-table", "structure constants on the span basis");
  add_common(crossed, true);
  auto* verify =
      app.add_subcommand("verify-identities", "run every invariant suite");
  add_common(verify);
  auto* oracle = app.add_subcommand(
      "product-oracle", "triple-product formula vs definitional convolution");
  oracle->add_option("scenario", scenario_path, "scenario JSON file")->required();
  auto* reps = app.add_subcommand("reps-check", "covariance and round-trip audit");
  reps->add_option("scenario", scenario_path, "scenario JSON file")->required();
  reps->add_option("--tolerance", tolerance, "numeric tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (hecke->parsed()) return cmd_hecke_table(scenario_path, out_dir, format);
    if (action->parsed()) return cmd_check_action(scenario_path);
    if (crossed->parsed()) return cmd_crossed_table(scenario_path, out_dir, format);
    if (verify->parsed()) return cmd_verify_identities(scenario_path, out_dir);
    if (oracle->parsed()) return cmd_product_oracle(scenario_path);
    if (reps->parsed()) return cmd_reps_check(scenario_path, tolerance);
  } catch (const hx::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
