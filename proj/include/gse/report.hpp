#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"

namespace gse {

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline nlohmann::json report_to_json(const BoundReport& r) {
  nlohmann::json j;
  j["potential"] = r.potential;
  j["dim"] = r.dim;
  j["theta"] = r.theta;
  j["mu_A"] = r.mu_A_hat;
  j["mu_B"] = r.mu_B_hat;
  j["ratio"] = r.ratio;
  j["mu_A_converged"] = r.mu_A_converged;
  j["mu_B_converged"] = r.mu_B_converged;
  j["thm11"] = {{"holds", r.thm11_holds}, {"margin", r.thm11_margin}};
  j["thm31"] = {{"q", r.q},
                {"applicable", r.thm31.applicable},
                {"rhs", r.thm31.value},
                {"reason", r.thm31.reason},
                {"holds", r.thm31_holds}};
  j["thm41"] = {{"a_exists", r.thm41.a_exists},
                {"a", r.thm41.a},
                {"c_d", r.thm41.c_d},
                {"margin", r.thm41.margin},
                {"rescale", r.thm41.rescale},
                {"holds", r.thm41.holds}};
  return j;
}

inline void write_json(const std::vector<BoundReport>& rs, const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rs) arr.push_back(report_to_json(r));
  std::ofstream out(path);
  out << arr.dump(2) << "\n";
}

inline const char* kCsvHeader =
    "# gse-compare v1\n"
    "potential,dim,theta,mu_A,mu_B,ratio,thm11_holds,thm11_margin,"
    "thm31_applicable,thm31_rhs,thm31_holds,a_exists,a,c_d,thm41_margin,"
    "thm41_holds,mu_A_converged,mu_B_converged\n";

inline std::string report_csv_row(const BoundReport& r) {
  std::string s;
  s += r.potential + ",";
  s += std::to_string(r.dim) + ",";
  s += fmt_g(r.theta) + ",";
  s += fmt_g(r.mu_A_hat) + ",";
  s += fmt_g(r.mu_B_hat) + ",";
  s += fmt_g(r.ratio) + ",";
  s += std::string(r.thm11_holds ? "1" : "0") + ",";
  s += fmt_g(r.thm11_margin) + ",";
  s += std::string(r.thm31.applicable ? "1" : "0") + ",";
  s += fmt_g(r.thm31.value) + ",";
  s += std::string(r.thm31_holds ? "1" : "0") + ",";
  s += std::string(r.thm41.a_exists ? "1" : "0") + ",";
  s += fmt_g(r.thm41.a) + ",";
  s += fmt_g(r.thm41.c_d) + ",";
  s += fmt_g(r.thm41.margin) + ",";
  s += std::string(r.thm41.holds ? "1" : "0") + ",";
  s += std::string(r.mu_A_converged ? "1" : "0") + ",";
  s += r.mu_B_converged ? "1" : "0";
  s += "\n";
  return s;
}

inline void write_csv(const std::vector<BoundReport>& rs, const std::string& path) {
  std::ofstream out(path);
  out << kCsvHeader;
  for (const auto& r : rs) out << report_csv_row(r);
}

}  // namespace gse
