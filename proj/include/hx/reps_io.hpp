#pragma once

#include "hx/reps.hpp"
#include "hx/scenario.hpp"

namespace hx::reps {

// Dense complex matrices in JSON: row-major list of [re, im] pairs plus the
// dimension.  Used for representation data inside scenario files.

inline Json cmat_to_json(const CMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      rows.push_back({m(i, j).real(), m(i, j).imag()});
  return rows;
}

inline CMat cmat_from_json(const Json& j, int rows, int cols,
                           const std::string& where) {
  require(j.is_array() && int(j.size()) == rows * cols, "SchemaError",
          where + ": expected " + std::to_string(rows * cols) + " entries");
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) {
      const Json& e = j[size_t(i * cols + c)];
      require(e.is_array() && e.size() == 2, "SchemaError",
              where + ": entries must be [re, im]");
      m(i, c) = std::complex<double>(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

inline Json covariant_pair_to_json(const CovariantPair& pair) {
  Json j;
  j["space_dim"] = pair.pi.space_dim;
  j["pi"] = Json::array();
  for (const auto& m : pair.pi.images) j["pi"].push_back(cmat_to_json(m));
  j["mu"] = Json::array();
  for (const auto& [rep, m] : pair.mu) {
    Json entry;
    entry["rep"] = rep;
    entry["matrix"] = cmat_to_json(m);
    j["mu"].push_back(entry);
  }
  return j;
}

// Reads a covariant pair: pi images in the C_c(A/Gamma) basis order (orbit
// index, then row-major fiber entry), mu keyed by canonical double-coset
// representatives.
inline CovariantPair covariant_pair_from_json(const SystemPtr& sys, const Json& j) {
  detail::reject_unknown(j, {"space_dim", "pi", "mu"}, "representation");
  CovariantPair pair;
  pair.pi.space_dim = j.at("space_dim").get<int>();
  OrbitBasis basis(sys->gamma_bundle(sys->group()->identity()));
  require(int(j.at("pi").size()) == basis.dim(), "SchemaError",
          "representation: pi must list " + std::to_string(basis.dim()) +
              " matrices (one per C_c(A/Gamma) basis element)");
  for (const auto& m : j.at("pi"))
    pair.pi.images.push_back(
        cmat_from_json(m, pair.pi.space_dim, pair.pi.space_dim, "pi"));
  for (const auto& entry : j.at("mu")) {
    detail::reject_unknown(entry, {"rep", "matrix"}, "mu entry");
    int rep = entry.at("rep").get<int>();
    require(rep == sys->pair()->dcoset_rep(rep), "SchemaError",
            "mu keys must be canonical double-coset representatives");
    pair.mu[rep] = cmat_from_json(entry.at("matrix"), pair.pi.space_dim,
                                  pair.pi.space_dim, "mu");
  }
  for (int rep : sys->pair()->double_coset_reps())
    require(pair.mu.count(rep) > 0, "SchemaError",
            "mu is missing the double coset of " + sys->group()->name(rep));
  return pair;
}

}  // namespace hx::reps
