#include "pvell/boutroux.hpp"

#include <cmath>
#include <ostream>

#include "pvell/error.hpp"

namespace pvell {

namespace {

// E_a and E_b without constructing the full EllipticData (valid at A = 0, 1).
std::pair<Cplx, Cplx> energies(Cplx A, const Tolerances& tol) {
  auto [ia, ib] = cycle_I(A, tol);
  return {ia, -ib};
}

std::pair<Cplx, Cplx> periods(Cplx A, const Tolerances& tol) {
  Cplx k = sqrt_re_nonneg(A);
  return {4.0 * complete_K(k, tol), Cplx(0.0, 2.0) * complete_K(std::sqrt(1.0 - A), tol)};
}

struct NewtonResult {
  Cplx A;
  Real resid;
  int iters;
  bool ok;
};

NewtonResult newton(Cplx A, Real phi, const Tolerances& tol) {
  const Cplx e = expi(phi);
  Real resid = 1e300;
  for (int it = 0; it <= tol.max_iters; ++it) {
    auto [Ea, Eb] = energies(A, tol);
    Real r1 = (e * Ea).real(), r2 = (e * Eb).real();
    resid = std::max(std::abs(r1), std::abs(r2));
    if (resid < tol.tol_boutroux) return {A, resid, it, true};
    if (std::abs(A) < 2.0 * tol.tol_degenerate || std::abs(A - 1.0) < 2.0 * tol.tol_degenerate)
      return {A, resid, it, false};  // Jacobian degenerates
    auto [Oa, Ob] = periods(A, tol);
    const Cplx ja = 0.5 * e * Oa, jb = 0.5 * e * Ob;
    Eigen::Matrix2d J;
    J << ja.real(), -ja.imag(), jb.real(), -jb.imag();
    Eigen::Vector2d rhs(-r1, -r2);
    Eigen::Vector2d d = J.fullPivLu().solve(rhs);
    if (!d.allFinite()) return {A, resid, it, false};
    // Damp steps that would leave the bounded solution region.
    Cplx step(d(0), d(1));
    Real lim = 0.5;
    if (std::abs(step) > lim) step *= lim / std::abs(step);
    A += step;
  }
  return {A, resid, tol.max_iters, false};
}

}  // namespace

std::pair<Real, Real> boutroux_residual(Cplx A, Real phi, const Tolerances& tol) {
  auto [Ea, Eb] = energies(A, tol);
  const Cplx e = expi(phi);
  return {(e * Ea).real(), (e * Eb).real()};
}

Eigen::Matrix2d boutroux_jacobian(Cplx A, Real phi, const Tolerances& tol) {
  if (std::abs(A) < tol.tol_degenerate || std::abs(A - 1.0) < tol.tol_degenerate)
    fail(Err::DegenerateModulus, "Jacobian undefined at A in {0, 1}");
  auto [Oa, Ob] = periods(A, tol);
  const Real t = std::tan(phi);
  // rows: d(u - v t), d(U - V t) over (Re A, Im A) with E' = omega/2
  const Cplx da = 0.5 * Oa, db = 0.5 * Ob;
  Eigen::Matrix2d J;
  J << da.real() - t * da.imag(), -da.imag() - t * da.real(),
       db.real() - t * db.imag(), -db.imag() - t * db.real();
  return J;
}

Cplx boutroux_seed(Real phi) {
  if (phi < 0.25 * kPi) {
    const Real lg = std::log(phi);
    return Cplx(-4.0 * phi * phi / lg, -4.0 * phi / lg);
  }
  const Real pt = phi - 0.5 * kPi;
  const Real lg = std::log(std::abs(pt));
  return Cplx(1.0 + 4.0 * pt * pt / lg, 4.0 * pt / lg);
}

namespace {

// Solve on the reduced interval (0, pi/2), continuation if a direct Newton
// from the asymptotic seed fails.
BoutrouxPoint solve_reduced(Real phi, const Tolerances& tol) {
  NewtonResult direct = newton(boutroux_seed(phi), phi, tol);
  if (direct.ok) return {phi, direct.A, direct.resid, direct.iters};

  // Continuation from whichever end is closer, adaptive step, halving on
  // Newton failure.
  const bool from_low = phi < 0.25 * kPi;
  Real cur = from_low ? 0.02 : 0.5 * kPi - 0.02;
  NewtonResult state = newton(boutroux_seed(cur), cur, tol);
  if (!state.ok) fail(Err::NoConvergence, "seed failure at continuation start");
  Real step = from_low ? tol.continuation_step0 : -tol.continuation_step0;
  int total_iters = state.iters;
  Cplx prevA = state.A;
  Real prev_phi = cur;
  while (std::abs(cur - phi) > 1e-15) {
    Real next = cur + step;
    if ((step > 0 && next > phi) || (step < 0 && next < phi)) next = phi;
    // secant predictor
    Cplx pred = state.A;
    if (std::abs(cur - prev_phi) > 0) {
      pred = state.A + (state.A - prevA) * ((next - cur) / (cur - prev_phi));
    }
    NewtonResult trial = newton(pred, next, tol);
    if (!trial.ok) {
      step *= 0.5;
      if (std::abs(step) < 1e-9)
        fail(Err::NoConvergence, "continuation stalled at phi = " + std::to_string(cur));
      continue;
    }
    prevA = state.A;
    prev_phi = cur;
    state = trial;
    cur = next;
    total_iters += trial.iters;
    step *= 1.4;
    Real cap = tol.continuation_step0 * 4;
    if (std::abs(step) > cap) step = step > 0 ? cap : -cap;
  }
  return {phi, state.A, state.resid, total_iters};
}

}  // namespace

BoutrouxPoint solve_A(Real phi, const Tolerances& tol) {
  // reduce modulo pi, then reflect
  Real r = std::remainder(phi, kPi);  // in [-pi/2, pi/2]
  const bool conj = r < 0;
  Real pr = std::abs(r);
  if (pr < tol.phi_min) return {phi, Cplx(0.0), 0.0, 0};
  if (std::abs(pr - 0.5 * kPi) < tol.phi_min) return {phi, Cplx(1.0), 0.0, 0};
  BoutrouxPoint p = solve_reduced(pr, tol);
  if (conj) p.A = std::conj(p.A);
  p.phi = phi;
  return p;
}

Trajectory boutroux_trajectory(int n, const Tolerances& tol) {
  if (n < 3) fail(Err::InvalidInput, "trajectory needs n >= 3");
  std::vector<BoutrouxPoint> half;
  half.reserve(n);
  half.push_back({0.0, Cplx(0.0), 0.0, 0});
  Cplx prevA;
  Real prev_phi = 0;
  bool have_prev = false;
  for (int j = 1; j < n - 1; ++j) {
    Real phi = 0.5 * kPi * j / (n - 1);
    Cplx seed = have_prev && j > 1
                    ? half.back().A + (half.back().A - prevA) * ((phi - half.back().phi) /
                                                                 (half.back().phi - prev_phi))
                    : boutroux_seed(phi);
    NewtonResult r = newton(seed, phi, tol);
    BoutrouxPoint p;
    if (r.ok) {
      p = {phi, r.A, r.resid, r.iters};
    } else {
      p = solve_reduced(phi, tol);  // adaptive fallback
    }
    prevA = half.back().A;
    prev_phi = half.back().phi;
    have_prev = true;
    half.push_back(p);
  }
  half.push_back({0.5 * kPi, Cplx(1.0), 0.0, 0});

  // monotonicity of Re A along the half trajectory
  for (std::size_t i = 0; i + 1 < half.size(); ++i) {
    if (!(half[i + 1].A.real() > half[i].A.real() - 1e-14))
      fail(Err::NoConvergence, "Re A not increasing along the continuation");
  }

  Trajectory traj;
  traj.points.reserve(2 * half.size() - 1);
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    if (it->phi == 0.0) continue;
    traj.points.push_back({-it->phi, std::conj(it->A), it->residual_norm, it->newton_iters});
  }
  for (const auto& p : half) traj.points.push_back(p);
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Tolerances& tol) {
  os << "# Boutroux trajectory: A solves Re e^{i phi} E_a = Re e^{i phi} E_b = 0;\n";
  os << "# omega_a = 4K(k), omega_b = 2iK(k'), E_a/E_b the paired cycle energies.\n";
  os << "phi,re_A,im_A,re_omega_a,im_omega_a,re_omega_b,im_omega_b,re_Ea,im_Ea,re_Eb,im_Eb,"
        "residual\n";
  os.precision(17);
  for (const auto& p : traj.points) {
    Cplx Oa(0.0), Ob(0.0), Ea(0.0), Eb(0.0);
    const bool degen = std::abs(p.A) < tol.tol_degenerate ||
                       std::abs(p.A - 1.0) < tol.tol_degenerate;
    if (!degen) {
      EllipticData e = elliptic_data(p.A, tol);
      Oa = e.omega_a;
      Ob = e.omega_b;
      Ea = e.E_a;
      Eb = e.E_b;
    } else {
      auto [ia, ib] = cycle_I(p.A, tol);
      Ea = ia;
      Eb = -ib;
    }
    os << p.phi << ',' << p.A.real() << ',' << p.A.imag() << ',' << Oa.real() << ','
       << Oa.imag() << ',' << Ob.real() << ',' << Ob.imag() << ',' << Ea.real() << ','
       << Ea.imag() << ',' << Eb.real() << ',' << Eb.imag() << ',' << p.residual_norm << '\n';
  }
}

}  // namespace pvell
