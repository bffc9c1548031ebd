#pragma once

#include <vector>

#include "pvell/config.hpp"
#include "pvell/elliptic_rep.hpp"
#include "pvell/monodromy.hpp"
#include "pvell/types.hpp"

namespace pvell {

struct Ffuncs {
  Cplx F0, G0, F1, F2;
};

// F0 = 2(t0+t1) psi / (A - psi^2), G0 = b / (2(A - psi^2)), F1 = F0 - G0,
// F2 = 2(2(t0-t1) tinf psi + (t0-t1)^2 + tinf^2) / ((1-psi^2)(A-psi^2)).
Ffuncs F_functions(Cplx psi, Cplx b, const ThetaParams& th, Cplx A,
                   const Tolerances& tol = {});

// All error-term outputs are conditional on the supposition that the sn
// argument correction is << 1/x; the flag travels with the record.
struct CorrectionResult {
  Cplx x;
  Cplx chi0;
  Cplx h;
  Real tail_bound = 0;
  long quad_nodes = 0;
  bool conditional = true;
  bool accepted = false;  // tail_bound < tol_tail
};

// Ray path from t_lo to t_hi with upper semicircular detours around the
// excluded lattice points; Re t is monotone along the path.
class RayPath {
 public:
  RayPath(Real t_lo, Real t_hi, const AsymptoticParams& p, const CheeseStrip& strip,
          Real detour_radius);
  Real length() const { return total_; }
  Cplx t_of(Real s) const;
  Cplx dt_ds(Real s) const;
  Real s_of_treal(Real tr) const;  // inverse of Re t(s)
  Real phi() const { return phi_; }
  Cplx x_of(Real s) const { return expi(phi_) * t_of(s); }
  Cplx dx_ds(Real s) const { return expi(phi_) * dt_ds(s); }
  int detour_count() const { return n_arcs_; }
  bool in_detour(Real s) const;

 private:
  struct Piece {
    bool arc;
    Real a, b;  // real-axis interval
    Real R;     // arc radius (arc pieces)
    Real s0;    // arc length at piece start
  };
  std::vector<Piece> pieces_;
  Real total_ = 0;
  Real phi_ = 0;
  int n_arcs_ = 0;
};

// Backward sweep of the correction system from a far reference along the
// detoured ray; evaluates chi0 and h at the requested ray points.
class CorrectionSweep {
 public:
  CorrectionSweep(const AsymptoticParams& p, const ThetaParams& th, const CheeseStrip& strip,
                  const Tolerances& tol);

  // ts ascending, each t in-strip; production path (linear correction ODE).
  std::vector<CorrectionResult> evaluate(const std::vector<Real>& ts) const;
  // verification path: cumulative quadrature of the explicit integral form.
  std::vector<CorrectionResult> evaluate_quadrature(const std::vector<Real>& ts) const;

  Real far_reference() const { return t_far_; }

 private:
  AsymptoticParams p_;
  ThetaParams th_;
  CheeseStrip strip_;
  Tolerances tol_;
  mutable Real t_far_ = 0;
  mutable Real tail_I1_ = 0, tail_h_ = 0;
  mutable bool tail_ready_ = false;

  void ensure_far(Real t_need) const;

  template <typename Mode>
  std::vector<CorrectionResult> run(const std::vector<Real>& ts, Mode mode) const;
};

CorrectionResult chi0(Cplx x, const AsymptoticParams& p, const ThetaParams& th,
                      const Tolerances& tol = {});
CorrectionResult h_correction(Cplx x, const AsymptoticParams& p, const ThetaParams& th,
                              const Tolerances& tol = {});
// h from the explicit triple-integral representation (verification path).
CorrectionResult h_quadrature(Cplx x, const AsymptoticParams& p, const ThetaParams& th,
                              const Tolerances& tol = {});

// psi = k sn((x - x0)/2 + h/2), y = (psi + 1)/(psi - 1).
Cplx y_corrected(Cplx x, const AsymptoticParams& p, const ThetaParams& th,
                 const Tolerances& tol = {});

enum class Lemma62Kind { u0, v0, u1, v1, u2, v2 };

// Closed-form primitives of 1/(1-sn^2), sn/(1-sn^2), 1/(1-A sn^2),
// sn/(1-A sn^2), 1/(1-sn^2)^2, sn/(1-sn^2)^2 in u, normalized to vanish at
// u = 0.
Cplx primitives_lemma62(Lemma62Kind kind, Cplx u, const EllipticData& ell,
                        const Tolerances& tol = {});

// The energy-like function of psi and its x-derivative defect.
Cplx L_of(Cplx x, Cplx psi, Cplx psip, const ThetaParams& th);
// Defect of dL/dx = -2L/x - (psi^2-1)/(2x) + (t0+t1-1)(1-psi)/x^2 given
// (y, y', y''); zero identically along exact solutions.
Cplx L_residual(Cplx x, Cplx y, Cplx yprime, Cplx ysecond, const ThetaParams& th,
                const Tolerances& tol = {});
// Defect between the psi-form of L and its algebraic rewriting through
// a_phi(y, y'); an identity, zero at any (y, y').
Cplx L_identity_defect(Cplx x, Cplx y, Cplx yprime, const ThetaParams& th,
                       const Tolerances& tol = {});

// a_phi in the x-form with y' = dy/dx.
Cplx a_phi_of(Cplx x, Cplx y, Cplx yprime, const ThetaParams& th,
              const Tolerances& tol = {});

}  // namespace pvell
