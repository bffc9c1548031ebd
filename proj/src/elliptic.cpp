#include "pvell/elliptic.hpp"

#include <atomic>
#include <cmath>

#include "pvell/error.hpp"
#include "pvell/gauss.hpp"
#include "pvell/theta.hpp"

namespace pvell {

namespace {
std::atomic<long> branch_edge_hits{0};
}

Cplx sqrt_re_nonneg(Cplx A) {
  Cplx r = std::sqrt(A);
  if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) r = -r;
  if (r.real() == 0.0 && r != Cplx(0.0)) branch_edge_hits.fetch_add(1, std::memory_order_relaxed);
  return r;
}

long sqrt_branch_edge_count() noexcept { return branch_edge_hits.load(std::memory_order_relaxed); }

Cplx complete_K(Cplx k, const Tolerances& tol) {
  const Cplx k2 = k * k;
  if (std::abs(k2 - 1.0) < tol.tol_degenerate)
    fail(Err::DegenerateModulus, "K diverges at k^2 = 1");
  if (!std::isfinite(std::abs(k))) fail(Err::InvalidInput, "non-finite modulus");
  // AGM(1, k') with the standard right-choice square root.
  Cplx a = 1.0, b = std::sqrt(1.0 - k2);
  for (int it = 0; it < 64; ++it) {
    Cplx a1 = 0.5 * (a + b);
    Cplx b1 = std::sqrt(a * b);
    if (std::abs(a1 - b1) > std::abs(a1 + b1)) b1 = -b1;
    a = a1;
    b = b1;
    if (std::abs(a - b) <= 1e-17 * std::abs(a)) break;
  }
  return kPi / (2.0 * a);
}

namespace {

// E_a integrand after z = k sin(theta):  4A cos^2 / sqrt(1 - A sin^2).
Cplx Ia_integral(Cplx A, const Tolerances& tol) {
  auto f = [&](Real th) -> Cplx {
    Real c = std::cos(th), s = std::sin(th);
    return c * c / std::sqrt(1.0 - A * s * s);
  };
  // Feature scale sqrt(|1-A|) sits at theta = pi/2.
  return 4.0 * A * graded_quad(f, 0.0, 0.5 * kPi, /*toward_a=*/false, tol.quad_panels,
                               tol.quad_order);
}

// I_b integrand after z^2 = A + (1-A) sin^2:  2i(1-A) sin^2 / z.
Cplx Ib_integral(Cplx A, const Tolerances& tol) {
  auto f = [&](Real th) -> Cplx {
    Real s = std::sin(th);
    return s * s / std::sqrt(A + (1.0 - A) * s * s);
  };
  // Feature scale sqrt(|A|) sits at theta = 0.
  return Cplx(0.0, 2.0) * (1.0 - A) *
         graded_quad(f, 0.0, 0.5 * kPi, /*toward_a=*/true, tol.quad_panels, tol.quad_order);
}

}  // namespace

std::pair<Cplx, Cplx> cycle_I(Cplx A, const Tolerances& tol) {
  if (std::abs(A) < tol.tol_degenerate) return {Cplx(0.0), Cplx(0.0, 2.0)};
  if (std::abs(A - 1.0) < tol.tol_degenerate) return {Cplx(4.0), Cplx(0.0)};
  return {Ia_integral(A, tol), Ib_integral(A, tol)};
}

EllipticData elliptic_data(Cplx A, const Tolerances& tol) {
  if (std::abs(A) < tol.tol_degenerate || std::abs(A - 1.0) < tol.tol_degenerate)
    fail(Err::DegenerateModulus, "elliptic data undefined at A in {0, 1}");
  EllipticData e;
  e.A = A;
  e.k = sqrt_re_nonneg(A);
  const Cplx kp = std::sqrt(1.0 - A);
  e.omega_a = 4.0 * complete_K(e.k, tol);
  e.omega_b = Cplx(0.0, 2.0) * complete_K(kp, tol);
  e.tau0 = e.omega_b / e.omega_a;
  e.E_a = Ia_integral(A, tol);
  e.E_b = -Ib_integral(A, tol);
  return e;
}

Cplx w_branch(Cplx A, const SheetedPoint& p, const Tolerances& tol) {
  const Cplx z = p.z;
  const Cplx k = sqrt_re_nonneg(A);
  if (std::abs(z - 1.0) < tol.tol_degenerate || std::abs(z + 1.0) < tol.tol_degenerate ||
      std::abs(z - k) < tol.tol_degenerate || std::abs(z + k) < tol.tol_degenerate)
    fail(Err::BranchPoint, "w has a branch point here");
  // (1 - z^2) * principal sqrt of the ratio gives w/k -> +1 at z = 0 and
  // z^-2 w -> -1 at infinity on the upper sheet, with cuts exactly along
  // the arcs where (A - z^2)/(1 - z^2) is negative real.
  Cplx w = (1.0 - z * z) * std::sqrt((A - z * z) / (1.0 - z * z));
  return p.sheet == Sheet::upper ? w : -w;
}

// ---------------------------------------------------------------------------
// Jacobi functions via theta quotients.

SnEvaluator::SnEvaluator(Cplx k, const Tolerances& tol) : k_(k), tol_(tol) {
  if (std::abs(k) < 1e-14) {
    trig_ = true;
    K_ = 0.5 * kPi;
    Kp_ = 0.0;
    tau_ = 0.0;
    return;
  }
  if (std::abs(k * k - 1.0) < tol.tol_degenerate)
    fail(Err::DegenerateModulus, "sn undefined at k^2 = 1");
  K_ = complete_K(k, tol);
  Kp_ = complete_K(std::sqrt(1.0 - k * k), tol);
  tau_ = kImag * Kp_ / K_;
  if (!(tau_.imag() > tol.tol_imtau)) fail(Err::NonconvergentNome, "Im tau <= 0 for modulus");
  t2_ = theta2(0.0, tau_, tol_);
  t3_ = theta(0.0, tau_, 0, tol_);
  t4_ = theta4(0.0, tau_, tol_);
}

SnEvaluator SnEvaluator::from_elliptic(const EllipticData& ell, const Tolerances& tol) {
  return SnEvaluator(ell.k, tol);
}

SnEvaluator::Val SnEvaluator::at(Cplx u) const {
  if (trig_) return {std::sin(u), std::cos(u), Cplx(1.0)};
  // Reduce u modulo the period lattice (4K, 2iK'); cn and dn flip sign under
  // an odd number of 2iK' steps.
  const Cplx pa = 4.0 * K_, pb = 2.0 * kImag * Kp_;
  const Real det = pa.real() * pb.imag() - pa.imag() * pb.real();
  const Real al = (u.real() * pb.imag() - u.imag() * pb.real()) / det;
  const Real be = (pa.real() * u.imag() - pa.imag() * u.real()) / det;
  const long na = std::lround(al);
  const long nb = std::lround(be);
  const Cplx ur = u - Real(na) * pa - Real(nb) * pb;
  const Real flip = (nb % 2 == 0) ? 1.0 : -1.0;
  const Cplx w = ur / (2.0 * K_);
  const Cplx th4 = theta4(w, tau_, tol_);
  const Cplx th1 = theta1(w, tau_, tol_);
  const Cplx th2 = theta2(w, tau_, tol_);
  const Cplx th3 = theta(w, tau_, 0, tol_);
  Val v;
  v.sn = (t3_ / t2_) * (th1 / th4);
  v.cn = flip * (t4_ / t2_) * (th2 / th4);
  v.dn = flip * (t4_ / t3_) * (th3 / th4);
  return v;
}

Real SnEvaluator::pole_distance(Cplx u) const {
  if (trig_) return 1e300;  // no poles in the trigonometric limit
  // Poles at 2mK + (2n+1) i K'.
  const Cplx pa = 2.0 * K_, pb = 2.0 * kImag * Kp_;
  const Cplx off = kImag * Kp_;
  const Cplx v = u - off;
  const Real det = pa.real() * pb.imag() - pa.imag() * pb.real();
  const Real al = (v.real() * pb.imag() - v.imag() * pb.real()) / det;
  const Real be = (pa.real() * v.imag() - pa.imag() * v.real()) / det;
  Real best = 1e300;
  for (long da = -1; da <= 1; ++da)
    for (long db = -1; db <= 1; ++db) {
      Cplx p = Real(std::lround(al) + da) * pa + Real(std::lround(be) + db) * pb + off;
      best = std::min(best, std::abs(u - p));
    }
  return best;
}

Cplx jacobi_sn(Cplx u, Cplx k, const Tolerances& tol) {
  SnEvaluator ev(k, tol);
  if (ev.pole_distance(u) < tol.tol_pole)
    fail(Err::PoleProximity, "sn argument within tol_pole of the pole lattice");
  return ev.sn(u);
}

// ---------------------------------------------------------------------------
// Oriented cycle quadrature.
//
// a-cycle: z = k sin(theta) along the complex path theta = s + i eta cos^2 s,
// s in [-pi/2, pi/2]; w = k cos(theta) sqrt(1 - A sin^2 theta) carries the
// branch analytically and matches w(0) = +k.  The bulge keeps z away from the
// z = 0 pole of 1/z^2-type integrands (zero residue there, so the side does
// not matter).
Cplx cycle_a_integral(Cplx A, const std::function<Cplx(Cplx, Cplx)>& f, const Tolerances& tol) {
  const Cplx k = sqrt_re_nonneg(A);
  const Real eta = 0.35;
  auto g = [&](Real s) -> Cplx {
    const Real cs = std::cos(s), sn = std::sin(s);
    const Cplx th = Cplx(s, eta * cs * cs);
    const Cplx dth = 1.0 - Cplx(0.0, 2.0 * eta) * cs * sn;
    const Cplx sz = std::sin(th), cz = std::cos(th);
    const Cplx z = k * sz;
    const Cplx w = k * cz * std::sqrt(1.0 - A * sz * sz);
    return f(z, w) * (k * cz * dth);
  };
  const int pan = 16;
  Cplx sum = 0.0;
  for (int i = 0; i < pan; ++i) {
    Real a = -0.5 * kPi + kPi * i / pan;
    Real b = -0.5 * kPi + kPi * (i + 1) / pan;
    sum += gauss_quad(g, a, b, tol.quad_order);
  }
  return 2.0 * sum;
}

// b-cycle: z = sqrt(A + (1-A) sin^2 theta), w = -i (1-A) sin theta cos theta;
// this orientation yields cycle_b(1/w) = omega_b = 2iK'.
Cplx cycle_b_integral(Cplx A, const std::function<Cplx(Cplx, Cplx)>& f, const Tolerances& tol) {
  auto g = [&](Real t) -> Cplx {
    const Real s = std::sin(t), c = std::cos(t);
    const Cplx z = std::sqrt(A + (1.0 - A) * s * s);
    const Cplx w = Cplx(0.0, -1.0) * (1.0 - A) * s * c;
    const Cplx dz = (1.0 - A) * s * c / z;
    return f(z, w) * dz;
  };
  const int pan = 16;
  Cplx sum = 0.0;
  for (int i = 0; i < pan; ++i) {
    Real a = 0.5 * kPi * i / pan;
    Real b = 0.5 * kPi * (i + 1) / pan;
    sum += gauss_quad(g, a, b, tol.quad_order);
  }
  return 2.0 * sum;
}

}  // namespace pvell
