#include "pvell/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pvell/error.hpp"

namespace pvell {

namespace {

using nlohmann::json;

template <typename T>
void pick(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

Tolerances tolerances_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(Err::InvalidInput, std::string("config parse: ") + e.what());
  }
  Tolerances t;
  pick(j, "tol_degenerate", t.tol_degenerate);
  pick(j, "tol_pole", t.tol_pole);
  pick(j, "tol_zero", t.tol_zero);
  pick(j, "theta_rel", t.theta_rel);
  pick(j, "theta_max_terms", t.theta_max_terms);
  pick(j, "theta_qmax", t.theta_qmax);
  pick(j, "tol_imtau", t.tol_imtau);
  pick(j, "quad_order", t.quad_order);
  pick(j, "quad_panels", t.quad_panels);
  pick(j, "tol_identity", t.tol_identity);
  pick(j, "tol_boutroux", t.tol_boutroux);
  pick(j, "max_iters", t.max_iters);
  pick(j, "phi_min", t.phi_min);
  pick(j, "continuation_step0", t.continuation_step0);
  pick(j, "tol_manifold", t.tol_manifold);
  pick(j, "tol_generic", t.tol_generic);
  pick(j, "t_inf", t.t_inf);
  pick(j, "kappa0", t.kappa0);
  pick(j, "delta0_factor", t.delta0_factor);
  pick(j, "tol_tail", t.tol_tail);
  pick(j, "xref_factor", t.xref_factor);
  pick(j, "x_far", t.x_far);
  pick(j, "detour_radius_factor", t.detour_radius_factor);
  pick(j, "ode_rtol", t.ode_rtol);
  pick(j, "ode_atol", t.ode_atol);
  pick(j, "pole_y_big", t.pole_y_big);
  pick(j, "pole_y_small", t.pole_y_small);
  pick(j, "ode_detour_radius", t.ode_detour_radius);
  pick(j, "max_detours", t.max_detours);
  pick(j, "max_steps", t.max_steps);
  pick(j, "r_max", t.r_max);
  pick(j, "tol_hit_factor", t.tol_hit_factor);
  pick(j, "tol_sep", t.tol_sep);
  return t;
}

std::string tolerances_to_json_text(const Tolerances& t) {
  json j;
  j["tol_degenerate"] = t.tol_degenerate;
  j["tol_pole"] = t.tol_pole;
  j["tol_zero"] = t.tol_zero;
  j["theta_rel"] = t.theta_rel;
  j["theta_max_terms"] = t.theta_max_terms;
  j["theta_qmax"] = t.theta_qmax;
  j["tol_imtau"] = t.tol_imtau;
  j["quad_order"] = t.quad_order;
  j["quad_panels"] = t.quad_panels;
  j["tol_identity"] = t.tol_identity;
  j["tol_boutroux"] = t.tol_boutroux;
  j["max_iters"] = t.max_iters;
  j["phi_min"] = t.phi_min;
  j["continuation_step0"] = t.continuation_step0;
  j["tol_manifold"] = t.tol_manifold;
  j["tol_generic"] = t.tol_generic;
  j["t_inf"] = t.t_inf;
  j["kappa0"] = t.kappa0;
  j["delta0_factor"] = t.delta0_factor;
  j["tol_tail"] = t.tol_tail;
  j["xref_factor"] = t.xref_factor;
  j["x_far"] = t.x_far;
  j["detour_radius_factor"] = t.detour_radius_factor;
  j["ode_rtol"] = t.ode_rtol;
  j["ode_atol"] = t.ode_atol;
  j["pole_y_big"] = t.pole_y_big;
  j["pole_y_small"] = t.pole_y_small;
  j["ode_detour_radius"] = t.ode_detour_radius;
  j["max_detours"] = t.max_detours;
  j["max_steps"] = t.max_steps;
  j["r_max"] = t.r_max;
  j["tol_hit_factor"] = t.tol_hit_factor;
  j["tol_sep"] = t.tol_sep;
  return j.dump(2);
}

Tolerances load_tolerances(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::InvalidInput, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return tolerances_from_json_text(ss.str());
}

}  // namespace pvell
