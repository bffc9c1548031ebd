#pragma once

#include <vector>

#include "pvell/config.hpp"
#include "pvell/error_term.hpp"
#include "pvell/monodromy.hpp"
#include "pvell/types.hpp"

namespace pvell {

struct RaySolutionState {
  Cplx x;
  Cplx y;
  Cplx yprime;
  Cplx a_phi;
  Cplx b;
  Cplx L;
  bool detour_flag = false;
};

// Right-hand side of the second-order equation: y'' as a function of
// (x, y, y').
Cplx pv_rhs(Cplx x, Cplx y, Cplx yprime, const ThetaParams& th, const Tolerances& tol = {});

struct StepControl {
  Real rtol = 1e-10;
  Real atol = 1e-12;
  Real h0 = 0.05;
  bool adaptive = true;
  Real fixed_h = 0.01;  // used when adaptive = false
  long max_steps = 2000000;
};

struct IntegrateResult {
  std::vector<RaySolutionState> samples;
  int detours = 0;
  long steps = 0;
};

// Integrate along x = e^{i phi} t from the start state to t_end, emitting
// states at the requested sample parameters.  When |y| or 1/|y| or 1/|y-1|
// crosses the pole thresholds the path detours by an upper semicircle in t;
// two failed attempts raise StepUnderflow.
IntegrateResult integrate_ray(const RaySolutionState& start, Real phi, Real t_end,
                              const std::vector<Real>& sample_ts, const StepControl& ctl,
                              const ThetaParams& th, const Tolerances& tol = {});

// a_phi from the (y, y') form, b = x (a_phi - A), L from the psi-form.
void diagnostics(RaySolutionState& s, Real phi, const ThetaParams& th, Cplx A,
                 const Tolerances& tol = {});

// Corrected-asymptotics seed (y, y') at x, with the h'-term folded into y'.
RaySolutionState seed_from_asymptotics(Cplx x, const AsymptoticParams& p,
                                       const ThetaParams& th, const Tolerances& tol = {});

// Cross-validation run: seed at |x| = r0 from the (optionally corrected)
// asymptotics, integrate to |x| = r1, compare psi and b along the way.
struct CompareReport {
  Real sup_dev_psi = 0;       // over in-strip samples
  Real sup_dev_b = 0;
  Real window_lo_dev = 0;     // [r0, r0+10]
  Real window_hi_dev = 0;     // [r1-10, r1]
  Real slope_res65 = 0;       // fitted decay slope of the defect column
  int n_samples = 0;
  std::vector<RaySolutionState> ode_samples;
  std::vector<Cplx> psi_asym;
  std::vector<Cplx> b_asym;
  std::vector<Real> res65;    // |(6.5)-type defect| of the asymptotic family
  std::vector<bool> in_strip_flag;
};

CompareReport compare_asymptotics_ode(const AsymptoticParams& p, const ThetaParams& th,
                                      Real r0, Real r1, bool correction,
                                      const Tolerances& tol = {});

// Least-squares slope of log|v| against log t over window maxima.
Real decay_slope(const std::vector<Real>& t, const std::vector<Real>& v, int bins = 8);

}  // namespace pvell
