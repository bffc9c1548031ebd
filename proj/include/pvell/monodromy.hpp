#pragma once

#include <Eigen/Dense>
#include <string>

#include "pvell/config.hpp"
#include "pvell/elliptic.hpp"
#include "pvell/types.hpp"

namespace pvell {

struct ThetaParams {
  Cplx theta0, theta1, theta_inf;
};

// Pair of unimodular loop monodromies tied to the theta parameters through
// tr M0 = 2 cos(pi theta0), tr M1 = 2 cos(pi theta1),
// (M1 M0)_{11} = e^{-pi i theta_inf}.
struct MonodromyData {
  Eigen::Matrix2cd M0, M1;
  ThetaParams theta;
};

struct StokesPair {
  Cplx s1, s2;  // S1 lower-unitriangular, S2 upper-unitriangular
};

// Three-parameter chart of the monodromy manifold.
MonodromyData from_parameters(const ThetaParams& th, Cplx q0, Cplx q1, Cplx r,
                              const Tolerances& tol = {});

// Largest defect among det, trace and (M1 M0)_{11} relations.
Real manifold_violation(const MonodromyData& m);

StokesPair stokes_multipliers(const MonodromyData& m, Cplx q0, Cplx q1, Cplx r,
                              const Tolerances& tol = {});

// Stokes pair recovered from the matrices alone through the cyclic relation
// M1 M0 = S1^-1 e^{-pi i theta_inf s3} S2^-1.
StokesPair stokes_from_monodromy(const MonodromyData& m, const Tolerances& tol = {});

// S_k for any integer k via S_{k+2} = e^{i pi theta_inf s3} S_k e^{-i pi theta_inf s3}.
Eigen::Matrix2cd stokes_matrix(int k, const StokesPair& s, Cplx theta_inf);

MonodromyData gauge_conjugate(const MonodromyData& m, Cplx d0);

// Reduction of an arbitrary ray angle into the base sector: phi = 2 p pi +
// phi_hat (breve = false) or phi = 2 p pi + pi + phi_hat (breve = true) with
// |phi_hat| < pi/2, the matrices conjugated by the sector product U_p or
// breve-U_p of Stokes factors.
struct SectorReduction {
  Eigen::Matrix2cd M0, M1;
  ThetaParams theta;
  int p = 0;
  bool breve = false;
  Real phi_hat = 0;
};

SectorReduction sector_reduce(const MonodromyData& m, const StokesPair& s, Real phi,
                              const Tolerances& tol = {});

// Sector-appropriate nonvanishing product: m^0_{11} m^1_{11} m^0_{21} m^1_{12}
// in the plain sectors, the 12/21/22/22 variant in breve sectors.
bool genericity_check(const SectorReduction& red, const Tolerances& tol = {});

// log argument P of the phase-shift formula: m^0_{21} m^1_{12}, inverted
// through the breve substitution when applicable.
Cplx log_product_arg(const SectorReduction& red);

// Connection multiplier selected by the sign of the reduced angle.
Cplx m_frak(const SectorReduction& red);

// Canonical phase shift: the representative of
//   -(1/pi i)(omega_b log P + omega_a log m_frak)
//     - (omega_a/2 + omega_b)(theta_inf + 1)
// inside the fundamental cell of 2 omega_a Z + 2 omega_b Z.
Cplx phase_shift(const SectorReduction& red, const EllipticData& ell,
                 const Tolerances& tol = {});

// beta0 = -(8/omega_a)(log P + pi i (theta_inf + 1)) on the principal log
// branch; branch_index receives the recorded branch integer (0 here, carried
// for reproducibility).
Cplx beta0(const SectorReduction& red, const EllipticData& ell, int* branch_index = nullptr);

// Everything needed to evaluate the representation along arg x = phi.
struct AsymptoticParams {
  Real phi = 0;
  EllipticData ell;
  Cplx x0;       // canonical cell representative
  Cplx beta0;
  int p = 0;
  bool breve = false;
  int log_branch = 0;
};

AsymptoticParams make_asymptotic_params(const MonodromyData& m, const StokesPair& s, Real phi,
                                        const Tolerances& tol = {});

// Reduce x into the fundamental cell of (2 omega_a, 2 omega_b).  The integer
// steps taken are reported when requested: x_can = x + 2 a omega_a + 2 b omega_b.
Cplx lattice_canonical(Cplx x, const EllipticData& ell, long* a_steps = nullptr,
                       long* b_steps = nullptr);

// JSON wire format:
// {"theta":{"t0":[re,im],"t1":[re,im],"tinf":[re,im]},
//  "M0":[[[re,im],[re,im]],[[re,im],[re,im]]], "M1":[...]}
MonodromyData monodromy_from_json_text(const std::string& text);
std::string monodromy_to_json_text(const MonodromyData& m);

}  // namespace pvell
