#pragma once

#include <sstream>
#include <string>

#include "hx/identities.hpp"

namespace hx {

// Deterministic table emission: map iteration order is already sorted, and
// scalars print as exact rationals (p/q, p/q+r/s*i).

inline std::string hecke_table_csv(const HeckePairPtr& pair) {
  std::ostringstream os;
  os << "left,right,result,coefficient\n";
  for (const auto& row : hecke_structure_table(pair))
    for (const auto& [rep, c] : row.coefficients)
      os << pair->group()->name(row.left) << "," << pair->group()->name(row.right)
         << "," << pair->group()->name(rep) << "," << c.str() << "\n";
  return os.str();
}

inline std::string hecke_table_json(const HeckePairPtr& pair) {
  Json j;
  j["basis"] = Json::array();
  for (int rep : pair->double_coset_reps()) {
    Json b;
    b["rep"] = pair->group()->name(rep);
    b["L"] = pair->stats(rep).L;
    b["R"] = pair->stats(rep).R;
    b["delta"] = pair->stats(rep).delta.str();
    j["basis"].push_back(b);
  }
  j["products"] = Json::array();
  for (const auto& row : hecke_structure_table(pair)) {
    Json r;
    r["left"] = pair->group()->name(row.left);
    r["right"] = pair->group()->name(row.right);
    r["coefficients"] = Json::object();
    for (const auto& [rep, c] : row.coefficients)
      r["coefficients"][pair->group()->name(rep)] = c.str();
    j["products"].push_back(r);
  }
  return j.dump(2) + "\n";
}

inline std::string basis_label(const SystemPtr& sys, const CrossedBasisItem& it) {
  std::ostringstream os;
  os << "g=" << sys->group()->name(it.g) << ";x=" << it.x << ";e=" << it.i << ","
     << it.j;
  return os.str();
}

// Structure table of the crossed product on the canonical span basis
// (double-coset rep, then orbit rep, then fiber entry).
inline std::string crossed_table_csv(const SystemPtr& sys) {
  auto items = crossed_basis(sys);
  std::vector<CrossedElement> basis;
  for (const auto& it : items) basis.push_back(basis_element(sys, it));
  std::ostringstream os;
  os << "left,right,result,coefficient\n";
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = 0; j < basis.size(); ++j) {
      auto coords = crossed_coords(sys, conv(basis[i], basis[j]));
      for (size_t k = 0; k < coords.size(); ++k)
        if (!coords[k].is_zero())
          os << basis_label(sys, items[i]) << "," << basis_label(sys, items[j]) << ","
             << basis_label(sys, items[k]) << "," << coords[k].str() << "\n";
    }
  return os.str();
}

inline std::string crossed_table_json(const SystemPtr& sys) {
  auto items = crossed_basis(sys);
  std::vector<CrossedElement> basis;
  for (const auto& it : items) basis.push_back(basis_element(sys, it));
  Json j;
  j["dimension"] = items.size();
  j["basis"] = Json::array();
  for (const auto& it : items) j["basis"].push_back(basis_label(sys, it));
  j["products"] = Json::array();
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t jx = 0; jx < basis.size(); ++jx) {
      auto coords = crossed_coords(sys, conv(basis[i], basis[jx]));
      Json entry;
      entry["left"] = int(i);
      entry["right"] = int(jx);
      entry["coefficients"] = Json::object();
      for (size_t k = 0; k < coords.size(); ++k)
        if (!coords[k].is_zero())
          entry["coefficients"][std::to_string(k)] = coords[k].str();
      if (!entry["coefficients"].empty()) j["products"].push_back(entry);
    }
  return j.dump(2) + "\n";
}

// Sparse-triple JSON dump of a multiplier (debugging aid; not a stable format).
inline Json multiplier_json(const MultiplierOp& t) {
  Json j = Json::array();
  for (const auto& [arrow, m] : t.section().data())
    for (int i = 0; i < m.rows(); ++i)
      for (int jj = 0; jj < m.cols(); ++jj)
        if (!m(i, jj).is_zero())
          j.push_back({arrow, i, jj, m(i, jj).str()});
  return j;
}

}  // namespace hx
