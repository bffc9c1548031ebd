#pragma once

#include <functional>
#include <utility>

#include "pvell/config.hpp"
#include "pvell/types.hpp"

namespace pvell {

// Elliptic data attached to a modulus-squared A on the curve
// w^2 = (1 - z^2)(A - z^2):
//   k         square root of A with Re k >= 0 (Im k > 0 when Re k = 0)
//   omega_a   a-period of dz/w, equal to 4 K(k)
//   omega_b   b-period of dz/w, equal to 2 i K(k') with k'^2 = 1 - A
//   E_a, E_b  cycle integrals of sqrt((A - z^2)/(1 - z^2)) over the same
//             oriented cycles, so that E_a omega_b - E_b omega_a = 4 pi i
//   tau0      omega_b / omega_a, Im tau0 > 0
struct EllipticData {
  Cplx A;
  Cplx k;
  Cplx omega_a;
  Cplx omega_b;
  Cplx E_a;
  Cplx E_b;
  Cplx tau0;
};

enum class Sheet { upper, lower };

struct SheetedPoint {
  Cplx z;
  Sheet sheet = Sheet::upper;
};

// Square root with Re >= 0, and Im > 0 on the boundary Re = 0.
// Counts boundary hits so callers can report them.
Cplx sqrt_re_nonneg(Cplx A);
long sqrt_branch_edge_count() noexcept;

// Complete elliptic integral of the first kind, complex modulus, via the
// arithmetic-geometric mean.  Analytic in k^2 off the cut [1, inf).
Cplx complete_K(Cplx k, const Tolerances& tol = {});

EllipticData elliptic_data(Cplx A, const Tolerances& tol = {});

// Cycle integrals I_a, I_b of the Boutroux integrand in the orientation
// pinned by I_a(0) = 0, I_b(0) = 2i, I_a(1) = 4, I_b(1) = 0; exact boundary
// values at A in {0, 1}.  Note I_a = E_a while I_b = -E_b: the b-cycle here
// is traversed with the opposite orientation from EllipticData's.
std::pair<Cplx, Cplx> cycle_I(Cplx A, const Tolerances& tol = {});

// w(A, z) on the given sheet: w^2 = (1 - z^2)(A - z^2), fixed so that
// w / k -> +1 as z -> 0 on the upper sheet (equivalently z^-2 w -> -1 at
// infinity there).  Continuous off the cuts joining +-k to +-1.
Cplx w_branch(Cplx A, const SheetedPoint& p, const Tolerances& tol = {});

// Jacobi elliptic functions with complex modulus, evaluated through theta
// quotients with the nome from tau = i K(k')/K(k).  Arguments are reduced
// into the fundamental cell (4K, 2iK') first.
class SnEvaluator {
 public:
  explicit SnEvaluator(Cplx k, const Tolerances& tol = {});
  static SnEvaluator from_elliptic(const EllipticData& ell, const Tolerances& tol = {});

  struct Val {
    Cplx sn, cn, dn;
  };
  Val at(Cplx u) const;
  Cplx sn(Cplx u) const { return at(u).sn; }

  Cplx k() const { return k_; }
  Cplx K() const { return K_; }
  Cplx Kp() const { return Kp_; }
  Cplx tau() const { return tau_; }
  // Distance from u to the pole lattice 2mK + (2n+1) i K'.
  Real pole_distance(Cplx u) const;

 private:
  Cplx k_, K_, Kp_, tau_;
  Cplx t2_, t3_, t4_;  // theta constants at z = 0
  Tolerances tol_;
  bool trig_ = false;  // k = 0 degenerates to sin/cos
};

// One-shot sn; throws PoleProximity within tol.tol_pole of the pole lattice.
Cplx jacobi_sn(Cplx u, Cplx k, const Tolerances& tol = {});

// Cycle integrals of w-odd integrands f(z, w) over the oriented a- and
// b-cycles consistent with EllipticData (so cycle_a(1/w) = omega_a and
// cycle_b(1/w) = omega_b).  The a-path bulges off the segment [-k, k]; any
// z = 0 pole of f must have zero residue (true for even integrands).
Cplx cycle_a_integral(Cplx A, const std::function<Cplx(Cplx, Cplx)>& f,
                      const Tolerances& tol = {});
Cplx cycle_b_integral(Cplx A, const std::function<Cplx(Cplx, Cplx)>& f,
                      const Tolerances& tol = {});

}  // namespace pvell
