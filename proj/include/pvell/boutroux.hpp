#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <utility>
#include <vector>

#include "pvell/config.hpp"
#include "pvell/elliptic.hpp"
#include "pvell/types.hpp"

namespace pvell {

struct BoutrouxPoint {
  Real phi = 0;
  Cplx A;
  Real residual_norm = 0;
  int newton_iters = 0;
};

struct Trajectory {
  std::vector<BoutrouxPoint> points;  // ordered by increasing phi
};

// Residuals of the direction equations: (Re e^{i phi} E_a, Re e^{i phi} E_b)
// with the paired cycle orientation of EllipticData (E_b = -I_b; the zero set
// is unchanged and the Jacobian below then has the documented negative
// determinant).  Exact boundary values at A in {0, 1}.
std::pair<Real, Real> boutroux_residual(Cplx A, Real phi, const Tolerances& tol = {});

// Exact Jacobian of the t-form system (u - v t, U - V t), t = tan(phi),
// in the real coordinates (Re A, Im A), assembled from dE/dA = omega/2.
// det = -(1/4)(1+t^2) |omega_a|^2 Im(omega_b/omega_a) < 0 off A in {0, 1}.
Eigen::Matrix2d boutroux_jacobian(Cplx A, Real phi, const Tolerances& tol = {});

// Leading-order seed: the small-A law for phi < pi/4 and the A-near-1 law
// for phi >= pi/4 (phi in (0, pi/2)).
Cplx boutroux_seed(Real phi);

// Newton solve with continuation fallback.  phi is first reduced by the
// symmetries A_{phi +- pi} = A_phi and A_{-phi} = conj A_phi; within phi_min
// of 0 or pi/2 the exact boundary value is returned.
BoutrouxPoint solve_A(Real phi, const Tolerances& tol = {});

// n points on [0, pi/2] by predictor-corrector continuation, mirrored to
// [-pi/2, 0] by conjugation; 2n - 1 points total, increasing phi.
Trajectory boutroux_trajectory(int n, const Tolerances& tol = {});

// CSV columns: phi, re_A, im_A, re_omega_a, im_omega_a, re_omega_b,
// im_omega_b, re_Ea, im_Ea, re_Eb, im_Eb, residual.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Tolerances& tol = {});

}  // namespace pvell
