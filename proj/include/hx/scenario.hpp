#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hx/crossed.hpp"

namespace hx {

using Json = nlohmann::json;

// Structured validation failure: the first failing pipeline stage plus a
// witness string.
class AxiomError : public Error {
 public:
  AxiomError(std::string stage, const std::string& witness)
      : Error("AxiomError", stage + ": " + witness), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

namespace detail {

inline void reject_unknown(const Json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
  require(j.is_object(), "SchemaError", where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    require(allowed.count(it.key()) > 0, "SchemaError",
            "unknown field '" + it.key() + "' in " + where);
}

inline Scalar scalar_from_json(const Json& j, const std::string& where) {
  require(j.is_array() && j.size() == 4, "SchemaError",
          where + ": scalar must be [re_num, re_den, im_num, im_den]");
  return Scalar(Rational(j[0].get<long long>(), j[1].get<long long>()),
                Rational(j[2].get<long long>(), j[3].get<long long>()));
}

inline GroupPtr group_from_json(const Json& j) {
  reject_unknown(j, {"type", "n", "degree", "generators", "table"}, "group");
  std::string type = j.at("type").get<std::string>();
  if (type == "symmetric") return FiniteGroup::symmetric(j.at("n").get<int>());
  if (type == "cyclic") return FiniteGroup::cyclic(j.at("n").get<int>());
  if (type == "permutation") {
    std::vector<Perm> gens;
    for (const auto& g : j.at("generators")) gens.push_back(g.get<Perm>());
    return FiniteGroup::from_permutations(j.at("degree").get<int>(), gens);
  }
  if (type == "cayley")
    return FiniteGroup::from_cayley(j.at("table").get<std::vector<std::vector<int>>>());
  fail("SchemaError", "unknown group type '" + type + "'");
}

inline Subgroup subgroup_from_json(const GroupPtr& g, const Json& j) {
  reject_unknown(j, {"members", "generators", "perm_generators"}, "subgroup");
  if (j.contains("members"))
    return Subgroup(g, j.at("members").get<std::vector<int>>());
  if (j.contains("generators"))
    return Subgroup::generated(g, j.at("generators").get<std::vector<int>>());
  if (j.contains("perm_generators")) {
    std::vector<int> gens;
    for (const auto& p : j.at("perm_generators")) {
      int idx = g->index_of(p.get<Perm>());
      require(idx >= 0, "SchemaError", "perm generator not an element of the group");
      gens.push_back(idx);
    }
    return Subgroup::generated(g, gens);
  }
  fail("SchemaError", "subgroup needs members, generators or perm_generators");
}

inline GroupoidPtr groupoid_from_json(const GroupPtr& g, const Json& j) {
  reject_unknown(j, {"type", "points", "group", "arrows", "src", "rng", "inv", "comp"},
                 "groupoid");
  std::string type = j.at("type").get<std::string>();
  if (type == "transformation") return Groupoid::transformation(g);
  if (type == "trivial_set") return Groupoid::trivial_set(j.at("points").get<int>());
  if (type == "one_unit_group")
    return Groupoid::one_unit_group(group_from_json(j.at("group")));
  if (type == "explicit")
    return std::make_shared<Groupoid>(
        j.at("arrows").get<int>(), j.at("src").get<std::vector<int>>(),
        j.at("rng").get<std::vector<int>>(), j.at("inv").get<std::vector<int>>(),
        j.at("comp").get<std::vector<std::vector<int>>>());
  fail("SchemaError", "unknown groupoid type '" + type + "'");
}

inline std::shared_ptr<const GroupoidAction> action_from_json(const GroupoidPtr& x,
                                                              const GroupPtr& g,
                                                              const Json& j) {
  reject_unknown(j, {"type", "map"}, "action");
  std::string type = j.at("type").get<std::string>();
  if (type == "trivial")
    return std::make_shared<GroupoidAction>(GroupoidAction::trivial(x, g));
  if (type == "translation")
    return std::make_shared<GroupoidAction>(GroupoidAction::translation(x, g));
  if (type == "table")
    return std::make_shared<GroupoidAction>(
        x, g, j.at("map").get<std::vector<std::vector<int>>>());
  fail("SchemaError", "unknown action type '" + type + "'");
}

}  // namespace detail

struct Scenario {
  std::string name;
  GroupPtr group;
  Subgroup gamma;
  GroupoidPtr groupoid;
  std::shared_ptr<const GroupoidAction> action;
  BundlePtr bundle;
  BundleActionPtr bundle_action;
  HeckePairPtr pair;
  SystemPtr system;
  Json representation;  // optional block for reps-check; null when absent
};

// Runs the full validation pipeline on parsed JSON: group axioms, groupoid
// axioms, action axioms, Gamma-goodness, Gamma-intersection.  The first
// failing stage raises AxiomError with its witness.
inline Scenario scenario_from_json(const Json& j) {
  detail::reject_unknown(j,
                         {"schema", "name", "group", "subgroup", "groupoid",
                          "action", "dims", "unitaries", "representation"},
                         "scenario");
  require(j.contains("schema") && j.at("schema").get<int>() == 1, "SchemaError",
          "missing or unsupported schema version (expected 1)");
  Scenario sc;
  sc.name = j.value("name", "unnamed");
  try {
    sc.group = detail::group_from_json(j.at("group"));
  } catch (const Error& e) {
    throw AxiomError("group", e.what());
  }
  try {
    sc.gamma = detail::subgroup_from_json(sc.group, j.at("subgroup"));
  } catch (const Error& e) {
    throw AxiomError("subgroup", e.what());
  }
  try {
    sc.groupoid = detail::groupoid_from_json(sc.group, j.at("groupoid"));
  } catch (const Error& e) {
    throw AxiomError("groupoid", e.what());
  }
  try {
    sc.action = detail::action_from_json(sc.groupoid, sc.group, j.at("action"));
  } catch (const Error& e) {
    throw AxiomError("action", e.what());
  }
  try {
    std::map<int, int> dims;
    if (j.contains("dims")) {
      detail::reject_unknown(j.at("dims"), {"default", "per_unit"}, "dims");
      int dflt = j.at("dims").value("default", 1);
      for (int u : sc.groupoid->units()) dims[u] = dflt;
      if (j.at("dims").contains("per_unit"))
        for (auto it = j.at("dims").at("per_unit").begin();
             it != j.at("dims").at("per_unit").end(); ++it)
          dims[std::stoi(it.key())] = it.value().get<int>();
    }
    sc.bundle = std::make_shared<FellBundle>(sc.groupoid, dims);
  } catch (const Error& e) {
    throw AxiomError("bundle", e.what());
  }
  try {
    std::map<std::pair<int, int>, Mat> v;
    if (j.contains("unitaries")) {
      detail::reject_unknown(j.at("unitaries"), {"type", "entries"}, "unitaries");
      std::string type = j.at("unitaries").at("type").get<std::string>();
      if (type == "triples") {
        for (const auto& e : j.at("unitaries").at("entries")) {
          detail::reject_unknown(e, {"g", "u", "triples"}, "unitaries entry");
          int gg = e.at("g").get<int>(), uu = e.at("u").get<int>();
          require(sc.bundle->base()->is_unit(uu), "SchemaError",
                  "unitary attached to non-unit arrow");
          Mat m(sc.bundle->unit_dim(uu), sc.bundle->unit_dim(uu));
          for (const auto& t : e.at("triples"))
            m(t[0].get<int>(), t[1].get<int>()) =
                detail::scalar_from_json(t[2], "unitary entry");
          v[{gg, uu}] = m;
        }
      } else {
        require(type == "identity", "SchemaError",
                "unknown unitaries type '" + type + "'");
      }
    }
    sc.bundle_action = std::make_shared<BundleAction>(sc.bundle, sc.action, v);
  } catch (const Error& e) {
    throw AxiomError("unitaries", e.what());
  }
  sc.pair = std::make_shared<HeckePair>(sc.group, sc.gamma);
  {
    auto good = check_h_good_bundle(*sc.bundle_action, sc.gamma);
    if (!good.holds)
      throw AxiomError("gamma-good",
                       "witness arrow " + std::to_string(good.witness_x) + ", h = " +
                           sc.group->name(good.witness_h) +
                           (good.fiber_level ? " (fiber level)" : ""));
    auto inter = check_h_intersection(*sc.action, sc.gamma);
    if (!inter.holds)
      throw AxiomError("gamma-intersection",
                       "witness unit " + std::to_string(inter.witness_u) + ", g = " +
                           sc.group->name(inter.witness_g));
  }
  sc.system = std::make_shared<CrossedSystem>(sc.bundle_action, sc.pair);
  if (j.contains("representation")) sc.representation = j.at("representation");
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "SchemaError", "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail("SchemaError", std::string("invalid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace hx
