#pragma once

#include <iosfwd>
#include <string>

#include "pvell/types.hpp"

namespace pvell {

// All numeric knobs in one place.  Every field has its documented default;
// a JSON config file may override any subset by name.
struct Tolerances {
  // elliptic / theta kernel
  Real tol_degenerate = 1e-12;   // modulus distance to A in {0,1} treated as degenerate
  Real tol_pole = 1e-8;          // distance (in u) to the sn pole lattice
  Real tol_zero = 1e-12;         // |theta| below this counts as a theta zero
  Real theta_rel = 1e-16;        // series truncation: next term < theta_rel * |partial sum|
  int theta_max_terms = 64;      // hard cap on theta series terms
  Real theta_qmax = 0.97;        // reject nome |q| above this
  Real tol_imtau = 1e-10;        // require Im tau above this
  int quad_order = 32;           // Gauss-Legendre order per panel
  int quad_panels = 14;          // graded panels for the cycle integrals
  Real tol_identity = 1e-9;      // E_a*Omega_b - E_b*Omega_a = 4 pi i check

  // boutroux solver
  Real tol_boutroux = 1e-11;     // residual_norm target
  int max_iters = 25;            // Newton iteration cap
  Real phi_min = 1e-6;           // below this distance to 0 or pi/2 return boundary values
  Real continuation_step0 = kPi / 200;  // initial continuation step in phi

  // monodromy layer
  Real tol_manifold = 1e-9;      // accepted violation of the manifold relations on input
  Real tol_generic = 1e-12;      // genericity threshold on the entry product

  // cheese-like strip defaults
  Real t_inf = 30.0;             // half-strip starts at Re t > t_inf
  Real kappa0 = 0.0;             // 0 = auto: max(|Omega_a|, |Omega_b|)
  Real delta0_factor = 0.12;     // delta0 = factor * min(|Omega_a|, |Omega_b|)

  // error-term machinery
  Real tol_tail = 1e-6;          // accepted tail bound
  Real xref_factor = 4.0;        // |X_ref| >= xref_factor * |x|
  Real x_far = 2500.0;           // far reference radius for the tail
  Real detour_radius_factor = 2.0;  // detour radius = factor * delta0

  // Painleve V integrator
  Real ode_rtol = 1e-10;
  Real ode_atol = 1e-12;
  Real pole_y_big = 1e6;         // |y| beyond this triggers a detour
  Real pole_y_small = 1e-6;      // |y| or |y-1| below this triggers a detour
  Real ode_detour_radius = 0.3;  // detour radius in t
  int max_detours = 2;           // consecutive attempts before StepUnderflow
  long max_steps = 2000000;

  // stokes geometry
  Real r_max = 12.0;             // tracing stops beyond this radius
  Real tol_hit_factor = 1e-3;    // hit radius = factor * |lambda1 - lambda2|
  Real tol_sep = 1e-6;           // coalescence threshold for turning points
};

Tolerances tolerances_from_json_text(const std::string& text);
std::string tolerances_to_json_text(const Tolerances& tol);
Tolerances load_tolerances(const std::string& path);

}  // namespace pvell
