#pragma once

#include "lohe/simulate.hpp"
#include "lohe/stability.hpp"

#include <json.hpp>

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>

namespace lohe::io {

using Json = nlohmann::ordered_json;

// 17 significant digits, '.' decimal point, independent of the C++ locale.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

inline Json to_json(const Configuration& x) {
  Json pts = Json::array();
  for (int i = 0; i < x.size(); ++i) {
    Json p = Json::array();
    for (int k = 0; k < x.dim(); ++k) p.push_back(x.point(i)[k]);
    pts.push_back(std::move(p));
  }
  return pts;
}

inline Json to_json(const DispersedReport& d) {
  Json j;
  j["dispersed"] = d.dispersed;
  j["hull_min_norm"] = d.hull_min_norm;
  if (d.witness) {
    Json w = Json::array();
    for (Eigen::Index k = 0; k < d.witness->size(); ++k) w.push_back((*d.witness)[k]);
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline Json spectrum_json(const std::vector<std::complex<double>>& spectrum) {
  Json s = Json::array();
  for (const auto& z : spectrum) s.push_back(Json::array({z.real(), z.imag()}));
  return s;
}

inline Json to_json(const LinearizationReport& r) {
  Json j;
  j["beta"] = r.beta;
  j["alpha_re"] = r.alpha_re;
  j["kahan_gap"] = r.kahan_gap;
  j["omega_norm"] = r.omega_norm;
  j["spectrum_A"] = spectrum_json(r.spectrum_A);
  return j;
}

// Merged linearization + bound report.
inline Json to_json(const BoundReport& r) {
  Json j;
  j["beta"] = r.beta;
  j["alpha_re"] = r.alpha_re;
  j["kahan_gap"] = r.kahan_gap;
  j["omega_norm"] = r.omega_norm;
  j["theorem_rhs"] = r.theorem_rhs;
  j["premise_holds"] = r.premise_holds;
  j["conclusion_holds"] = r.conclusion_holds;
  j["f_value"] = r.f_value;
  j["residual"] = r.residual;
  j["dispersed"] = to_json(r.dispersion);
  j["chain"] = {{"beta_ge_f", r.beta_ge_f},
                {"kahan_holds", r.kahan_holds},
                {"f_ge_theorem_rhs", r.f_ge_rhs ? Json(*r.f_ge_rhs) : Json(nullptr)}};
  j["violations"] = r.violations;
  j["spectrum_A"] = spectrum_json(r.linearization.spectrum_A);
  return j;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,V,sync_radius,min_edge_angle,max_edge_angle,norm_drift\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& d = traj.diagnostics[k];
    os << format_double(traj.times[k]) << ',' << format_double(d.disagreement) << ','
       << format_double(d.sync_radius) << ',' << format_double(d.min_edge_angle) << ','
       << format_double(d.max_edge_angle) << ',' << format_double(d.norm_drift) << '\n';
  }
}

}  // namespace lohe::io
