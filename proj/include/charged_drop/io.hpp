#pragma once

// JSON and CSV serialization of solver records.  Numbers in CSV are written
// with 17 significant digits through fmt, which never consults the locale.

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "charged_drop/charges.hpp"
#include "charged_drop/error.hpp"
#include "charged_drop/regime.hpp"
#include "charged_drop/two_charge.hpp"

namespace charged_drop::io {

using nlohmann::ordered_json;

inline std::string num(double v) { return fmt::format("{:.17g}", v); }

inline ordered_json to_json(const two_charge::TwoChargeSolution& s) {
  ordered_json j;
  j["eps"] = s.eps;
  j["gamma"] = s.gamma;
  j["exists"] = s.exists;
  j["case"] = two_charge::to_string(s.case_kind);
  j["h_star"] = s.h_star;
  j["c_star"] = s.c_star;
  j["L_star"] = s.L_star;
  j["E_perimeter"] = s.energy.perimeter;
  j["E_coulomb"] = s.energy.coulomb;
  j["E_total"] = s.energy.total;
  j["h_asym"] = s.asymptotic.h;
  j["L_asym"] = s.asymptotic.L;
  j["E_asym"] = s.asymptotic.E;
  return j;
}

inline ordered_json to_json(const charges::ChargeConfig& c) {
  ordered_json j;
  j["eps"] = c.eps;
  j["R"] = c.host.radius;
  ordered_json centers = ordered_json::array();
  for (const auto& x : c.centers) centers.push_back({x.x(), x.y(), x.z()});
  j["centers"] = std::move(centers);
  return j;
}

inline charges::ChargeConfig config_from_json(const nlohmann::json& j) {
  charges::ChargeConfig c;
  c.eps = j.at("eps").get<double>();
  c.host.radius = j.at("R").get<double>();
  for (const auto& p : j.at("centers")) {
    if (p.size() != 3) throw DomainError("config_from_json: center needs 3 coordinates");
    c.centers.emplace_back(p[0].get<double>(), p[1].get<double>(),
                           p[2].get<double>());
  }
  return c;
}

inline ordered_json to_json(const regime::RegimeCell& cell) {
  ordered_json j;
  j["eps"] = cell.eps;
  j["gamma"] = cell.gamma;
  j["n"] = cell.n;
  j["label"] = regime::to_string(cell.label);
  if (cell.witness) {
    j["split_energy"] = cell.witness->split_energy;
    j["classical_estimate"] = cell.witness->classical_estimate;
  } else {
    j["split_energy"] = nullptr;
    j["classical_estimate"] = nullptr;
  }
  return j;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_csv(std::ostream& os,
                      const std::vector<two_charge::TwoChargeSolution>& rows) {
  os << "eps,gamma,exists,case,h_star,c_star,L_star,E_perimeter,E_coulomb,"
        "E_total,h_asym,L_asym,E_asym\n";
  for (const auto& s : rows)
    os << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(s.eps),
                      num(s.gamma), s.exists ? "true" : "false",
                      two_charge::to_string(s.case_kind), num(s.h_star),
                      num(s.c_star), num(s.L_star), num(s.energy.perimeter),
                      num(s.energy.coulomb), num(s.energy.total),
                      num(s.asymptotic.h), num(s.asymptotic.L),
                      num(s.asymptotic.E));
}

inline void write_csv(std::ostream& os,
                      const std::vector<regime::RegimeCell>& rows) {
  os << "eps,gamma,n,label,split_energy,classical_estimate\n";
  for (const auto& c : rows) {
    const std::string split = c.witness ? num(c.witness->split_energy) : "";
    const std::string est = c.witness ? num(c.witness->classical_estimate) : "";
    os << fmt::format("{},{},{},{},{},{}\n", num(c.eps), num(c.gamma), c.n,
                      regime::to_string(c.label), split, est);
  }
}

inline void write_csv(std::ostream& os,
                      const std::vector<regime::BoundaryPoint>& rows) {
  os << "eps,gamma_c,gamma_c_eps\n";
  for (const auto& p : rows)
    os << fmt::format("{},{},{}\n", num(p.eps), num(p.gamma_c), num(p.product));
}

inline void write_centers_csv(std::ostream& os,
                              const charges::ChargeConfig& c) {
  os << "x,y,z\n";
  for (const auto& x : c.centers)
    os << fmt::format("{},{},{}\n", num(x.x()), num(x.y()), num(x.z()));
}

/// One row of a charges convergence sweep.
struct UniformityRow {
  std::size_t n{};
  double eps{};
  double energy{};  ///< sum of inverse distances
  double projected_gradient{};
  charges::UniformityStats stats{};
};

inline ordered_json to_json(const UniformityRow& r) {
  ordered_json j;
  j["n"] = r.n;
  j["eps"] = r.eps;
  j["energy"] = r.energy;
  j["projected_gradient"] = r.projected_gradient;
  j["shell_fraction"] = r.stats.shell_fraction;
  j["riesz_gap"] = r.stats.riesz_gap;
  j["cap_discrepancy"] = r.stats.cap_discrepancy;
  return j;
}

inline ordered_json to_json(const regime::BoundaryPoint& p) {
  ordered_json j;
  j["eps"] = p.eps;
  j["gamma_c"] = p.gamma_c;
  j["gamma_c_eps"] = p.product;
  return j;
}

inline void write_csv(std::ostream& os, const std::vector<UniformityRow>& rows) {
  os << "n,eps,energy,projected_gradient,shell_fraction,riesz_gap,"
        "cap_discrepancy\n";
  for (const auto& r : rows)
    os << fmt::format("{},{},{},{},{},{},{}\n", r.n, num(r.eps), num(r.energy),
                      num(r.projected_gradient), num(r.stats.shell_fraction),
                      num(r.stats.riesz_gap), num(r.stats.cap_discrepancy));
}

template <class Row>
ordered_json to_json_array(const std::vector<Row>& rows) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) out.push_back(to_json(r));
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  if (!f) throw IoError("failed writing " + path);
}

}  // namespace charged_drop::io
