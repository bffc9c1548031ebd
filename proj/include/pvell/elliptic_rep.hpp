#pragma once

#include "pvell/config.hpp"
#include "pvell/monodromy.hpp"
#include "pvell/types.hpp"

namespace pvell {

// Half-strip along arg x = phi with disks of radius delta0 removed around
// the excluded lattice (the sn pole lattice P0, optionally also the
// quarter-shifted lattice Q of sn = +-1, +-1/k points).
struct CheeseStrip {
  Real phi = 0;
  Real t_inf = 30.0;
  Real kappa0 = 7.0;
  Real delta0 = 0.15;
  bool exclude_Q = false;
};

CheeseStrip default_strip(Real phi, const EllipticData& ell, const Tolerances& tol = {});

// Leading sn term psi0(x) = k sn((x - x0)/2; k) and its x-derivative
// (k/2) cn dn.
Cplx psi0(Cplx x, const AsymptoticParams& p, const Tolerances& tol = {});
Cplx psi0_prime(Cplx x, const AsymptoticParams& p, const Tolerances& tol = {});

// y with (y+1)/(y-1) = psi.
Cplx y_of_psi(Cplx psi, const Tolerances& tol = {});
Cplx y_leading(Cplx x, const AsymptoticParams& p, const Tolerances& tol = {});

// b0(x) = beta0 - (2 E_a/omega_a) x - (8/omega_a) theta'/theta((x-x0)/(2 omega_a), tau0).
Cplx b0(Cplx x, const AsymptoticParams& p, const Tolerances& tol = {});
// d b0/dx, equal to 2(psi0^2 - A) + 4 psi0' identically.
Cplx b0_prime(Cplx x, const AsymptoticParams& p, const Tolerances& tol = {});

enum class LatticeClass { clear, near_P0, near_Q };

struct LatticeInfo {
  LatticeClass cls = LatticeClass::clear;
  Cplx nearest_P0;
  Real dist_P0 = 0;
  Cplx nearest_Q;
  Real dist_Q = 0;
};

// Nearest points of P0 = x0 + omega_a Z + omega_b (2Z + 1) and of
// Q = x0 + omega_a (Z + 1/2) + omega_b Z, with distances; classification
// against near_tol.
LatticeInfo lattice_membership(Cplx x, const AsymptoticParams& p, Real near_tol);

bool in_strip(Cplx x, const CheeseStrip& s, const AsymptoticParams& p);

// Translate the canonical x0 by lattice vectors of 2 omega_a Z + 2 omega_b Z
// into the strip interior (Re t > t_inf + margin, |Im t| < kappa0, clear of
// the excluded disks).
Cplx strip_representative(Cplx x0_canonical, const CheeseStrip& s, const AsymptoticParams& p);

// (y'^2 - y^2) / (y (y-1)^2) - (1 - A)/4, the secondary limit relation.
Cplx second_relation_residual(Cplx x, const AsymptoticParams& p, Cplx y, Cplx yprime,
                              const Tolerances& tol = {});

}  // namespace pvell
