#include "pvell/elliptic_rep.hpp"

#include <cmath>

#include "pvell/error.hpp"
#include "pvell/theta.hpp"

namespace pvell {

CheeseStrip default_strip(Real phi, const EllipticData& ell, const Tolerances& tol) {
  CheeseStrip s;
  s.phi = phi;
  s.t_inf = tol.t_inf;
  const Real oa = std::abs(ell.omega_a), ob = std::abs(ell.omega_b);
  s.kappa0 = tol.kappa0 > 0 ? tol.kappa0 : std::max(oa, ob);
  s.delta0 = tol.delta0_factor * std::min(oa, ob);
  return s;
}

namespace {

SnEvaluator evaluator(const AsymptoticParams& p, const Tolerances& tol) {
  return SnEvaluator::from_elliptic(p.ell, tol);
}

}  // namespace

Cplx psi0(Cplx x, const AsymptoticParams& p, const Tolerances& tol) {
  SnEvaluator ev = evaluator(p, tol);
  const Cplx u = 0.5 * (x - p.x0);
  if (ev.pole_distance(u) < tol.tol_pole)
    fail(Err::PoleProximity, "x within tol_pole of the pole lattice");
  return p.ell.k * ev.sn(u);
}

Cplx psi0_prime(Cplx x, const AsymptoticParams& p, const Tolerances& tol) {
  SnEvaluator ev = evaluator(p, tol);
  const Cplx u = 0.5 * (x - p.x0);
  if (ev.pole_distance(u) < tol.tol_pole)
    fail(Err::PoleProximity, "x within tol_pole of the pole lattice");
  auto v = ev.at(u);
  return 0.5 * p.ell.k * v.cn * v.dn;
}

Cplx y_of_psi(Cplx psi, const Tolerances& tol) {
  if (std::abs(psi - 1.0) < tol.tol_zero)
    fail(Err::UnitValue, "psi = 1 is a pole of y (excluded 1-point)");
  return (psi + 1.0) / (psi - 1.0);
}

Cplx y_leading(Cplx x, const AsymptoticParams& p, const Tolerances& tol) {
  return y_of_psi(psi0(x, p, tol), tol);
}

Cplx b0(Cplx x, const AsymptoticParams& p, const Tolerances& tol) {
  const Cplx arg = (x - p.x0) / (2.0 * p.ell.omega_a);
  const Cplx ld = theta_logderiv(arg, p.ell.tau0, tol);
  return p.beta0 - (2.0 * p.ell.E_a / p.ell.omega_a) * x - (8.0 / p.ell.omega_a) * ld;
}

Cplx b0_prime(Cplx x, const AsymptoticParams& p, const Tolerances& tol) {
  const Cplx arg = (x - p.x0) / (2.0 * p.ell.omega_a);
  const Cplx ld1 = theta_logderiv_deriv(arg, p.ell.tau0, 1, tol);
  return -(2.0 * p.ell.E_a / p.ell.omega_a) -
         (4.0 / (p.ell.omega_a * p.ell.omega_a)) * ld1;
}

namespace {

// Coefficients of v in the basis (ba, bb).
std::pair<Real, Real> basis_coords(Cplx v, Cplx ba, Cplx bb) {
  const Real det = ba.real() * bb.imag() - ba.imag() * bb.real();
  return {(v.real() * bb.imag() - v.imag() * bb.real()) / det,
          (ba.real() * v.imag() - ba.imag() * v.real()) / det};
}

}  // namespace

LatticeInfo lattice_membership(Cplx x, const AsymptoticParams& p, Real near_tol) {
  const Cplx d = x - p.x0;
  const Cplx oa = p.ell.omega_a, ob = p.ell.omega_b;
  auto [al, be] = basis_coords(d, oa, ob);
  LatticeInfo info;
  // P0: alpha integer, beta odd
  {
    Real am = std::round(al);
    Real bm = 2.0 * std::round(0.5 * (be - 1.0)) + 1.0;
    info.nearest_P0 = p.x0 + am * oa + bm * ob;
    info.dist_P0 = std::abs(x - info.nearest_P0);
  }
  // Q: alpha half-integer, beta integer
  {
    Real am = std::round(al - 0.5) + 0.5;
    Real bm = std::round(be);
    info.nearest_Q = p.x0 + am * oa + bm * ob;
    info.dist_Q = std::abs(x - info.nearest_Q);
  }
  if (info.dist_P0 < near_tol)
    info.cls = LatticeClass::near_P0;
  else if (info.dist_Q < near_tol)
    info.cls = LatticeClass::near_Q;
  else
    info.cls = LatticeClass::clear;
  return info;
}

bool in_strip(Cplx x, const CheeseStrip& s, const AsymptoticParams& p) {
  const Cplx t = x * expi(-s.phi);
  if (!(t.real() > s.t_inf)) return false;
  if (!(std::abs(t.imag()) < s.kappa0)) return false;
  LatticeInfo info = lattice_membership(x, p, s.delta0);
  if (info.cls == LatticeClass::near_P0) return false;
  if (s.exclude_Q && info.cls == LatticeClass::near_Q) return false;
  return true;
}

Cplx strip_representative(Cplx x0_canonical, const CheeseStrip& s, const AsymptoticParams& p) {
  const Cplx pa = 2.0 * p.ell.omega_a, pb = 2.0 * p.ell.omega_b;
  const Cplx dir = expi(s.phi);
  // target a point a little inside the half-strip on the ray
  const Cplx target = dir * (s.t_inf + 6.0) - x0_canonical;
  auto [al, be] = basis_coords(target, pa, pb);
  const long a0 = std::lround(al), b0_ = std::lround(be);
  Real best = 1e300;
  Cplx best_x = x0_canonical;
  for (long da = -3; da <= 3; ++da)
    for (long db = -3; db <= 3; ++db) {
      Cplx cand = x0_canonical + Real(a0 + da) * pa + Real(b0_ + db) * pb;
      Cplx t = cand * expi(-s.phi);
      if (!(t.real() > s.t_inf)) continue;
      if (!(std::abs(t.imag()) < s.kappa0)) continue;
      LatticeInfo info = lattice_membership(cand, p, s.delta0);
      if (info.cls != LatticeClass::clear) continue;
      if (t.real() < best) {
        best = t.real();
        best_x = cand;
      }
    }
  if (best == 1e300)
    fail(Err::StripViolation, "no strip-interior lattice translate found near the ray");
  return best_x;
}

Cplx second_relation_residual(Cplx x, const AsymptoticParams& p, Cplx y, Cplx yprime,
                              const Tolerances& tol) {
  (void)x;
  if (std::abs(y) < tol.tol_zero || std::abs(y - 1.0) < tol.tol_zero)
    fail(Err::SingularY, "relation undefined at y in {0, 1}");
  const Cplx lhs = (yprime * yprime - y * y) / (y * (y - 1.0) * (y - 1.0));
  return lhs - 0.25 * (1.0 - p.ell.A);
}

}  // namespace pvell
