#include "pvell/painleve.hpp"

#include <algorithm>
#include <cmath>

#include "pvell/boutroux.hpp"
#include "pvell/elliptic_rep.hpp"
#include "pvell/error.hpp"
#include "pvell/rk45.hpp"

namespace pvell {

Cplx pv_rhs(Cplx x, Cplx y, Cplx yprime, const ThetaParams& th, const Tolerances& tol) {
  if (std::abs(x) < tol.tol_zero) fail(Err::SingularPoint, "x = 0 is singular");
  if (std::abs(y) < tol.tol_zero || std::abs(y - 1.0) < tol.tol_zero)
    fail(Err::SingularPoint, "y in {0, 1} is singular");
  const Cplx dp = th.theta0 - th.theta1 + th.theta_inf;
  const Cplx dm = th.theta0 - th.theta1 - th.theta_inf;
  const Cplx ym1 = y - 1.0;
  return (0.5 / y + 1.0 / ym1) * yprime * yprime - yprime / x +
         ym1 * ym1 / (8.0 * x * x) * (dp * dp * y - dm * dm / y) +
         (1.0 - th.theta0 - th.theta1) * y / x - y * (y + 1.0) / (2.0 * ym1);
}

namespace {

bool near_pole(const Cplx& y, const Tolerances& tol) {
  return std::abs(y) > tol.pole_y_big || std::abs(y) < tol.pole_y_small ||
         std::abs(y - 1.0) < tol.pole_y_small;
}

}  // namespace

IntegrateResult integrate_ray(const RaySolutionState& start, Real phi, Real t_end,
                              const std::vector<Real>& sample_ts, const StepControl& ctl,
                              const ThetaParams& th, const Tolerances& tol) {
  IntegrateResult out;
  const Cplx dir = expi(phi);
  const Real t_start = (start.x * expi(-phi)).real();
  const Real sgn = (t_end >= t_start) ? 1.0 : -1.0;

  // position state: t-plane point follows the real axis except on detours
  Cplx tc(t_start, 0.0);
  Eigen::Vector2cd Y;
  Y << start.y, start.yprime;

  std::vector<Real> samples = sample_ts;
  std::sort(samples.begin(), samples.end());
  if (sgn < 0) std::reverse(samples.begin(), samples.end());
  std::size_t next_sample = 0;

  auto rhs_along = [&](Cplx a, Cplx b) {
    // derivative with respect to the segment parameter in [0, 1]
    return [&th, &tol, a, b, dir](Real s, const Eigen::Vector2cd& y) -> Eigen::Vector2cd {
      const Cplx t = a + (b - a) * s;
      const Cplx x = dir * t;
      const Cplx dxds = dir * (b - a);
      Eigen::Vector2cd d;
      d << dxds * y[1], dxds * pv_rhs(x, y[0], y[1], th, tol);
      return d;
    };
  };

  RkControl rk;
  rk.rtol = ctl.rtol;
  rk.atol = ctl.atol;
  rk.h0 = ctl.adaptive ? 0.2 : ctl.fixed_h;
  rk.max_steps = ctl.max_steps;

  int consecutive_detours = 0;
  // rewind anchor: detours launch from a little before the detection point,
  // so the arc keeps real clearance from the pole
  Cplx tc_anchor = tc;
  Eigen::Vector2cd Y_anchor = Y;
  std::size_t sample_anchor = 0;

  auto integrate_segment = [&](Cplx a, Cplx b, bool detour_piece) -> bool {
    // returns false when a pole was detected inside; Y, tc updated up to the
    // detection point
    auto f = rhs_along(a, b);
    Real s = 0.0;
    Real h = ctl.adaptive ? std::min(0.05, 1.0 / std::max(1.0, std::abs(b - a)))
                          : ctl.fixed_h / std::max(1e-12, std::abs(b - a));
    const bool on_axis = std::abs(a.imag()) < 1e-12 && std::abs(b.imag()) < 1e-12;
    while (s < 1.0 - 1e-13) {
      if (s + h > 1.0) h = 1.0 - s;
      if (on_axis && next_sample < samples.size()) {
        // land exactly on the next sample parameter
        const Real stgt = (samples[next_sample] - a.real()) / (b - a).real();
        if (stgt > s + 1e-15 && s + h > stgt) h = stgt - s;
      }
      Eigen::Vector2cd y5;
      Real err;
      dp45_step(f, s, Y, h, y5, err, rk.atol, rk.rtol);
      // a trial state across a pole, or a collapsing step, is a pole hit
      if (near_pole(y5[0], tol) || !std::isfinite(err)) return false;
      const bool accept = !ctl.adaptive || err <= 1.0;
      if (accept) {
        s += h;
        Y = y5;
        tc = a + (b - a) * s;
        ++out.steps;
        if (out.steps > ctl.max_steps) fail(Err::MaxSteps, "step budget exhausted");
        if (near_pole(Y[0], tol)) return false;
        if (!detour_piece && std::abs(tc.imag()) < 1e-12 &&
            sgn * (tc.real() - tc_anchor.real()) >= 0.6 * tol.ode_detour_radius) {
          tc_anchor = tc;
          Y_anchor = Y;
          sample_anchor = next_sample;
        }
        // emit samples crossed by this step (on-axis pieces only)
        while (next_sample < samples.size()) {
          const Real tgt = samples[next_sample];
          const Real reached = tc.real();
          const bool crossed = sgn > 0 ? reached >= tgt - 1e-12 : reached <= tgt + 1e-12;
          if (!crossed) break;
          RaySolutionState st;
          st.x = dir * tc;
          st.y = Y[0];
          st.yprime = Y[1];
          st.detour_flag = detour_piece;
          out.samples.push_back(st);
          ++next_sample;
        }
      }
      if (ctl.adaptive) {
        Real fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, fac));
        if (h * std::abs(b - a) < 1e-11) return false;  // stalled against a pole
      }
    }
    return true;
  };

  while (sgn * (t_end - tc.real()) > 1e-12) {
    const Cplx leg_end(t_end, 0.0);
    if (integrate_segment(tc, leg_end, false)) break;
    // pole hit: rewind to the anchor and detour by an upper semicircle
    ++out.detours;
    if (++consecutive_detours > tol.max_detours)
      fail(Err::StepUnderflow, "pole not cleared after the allowed detours");
    const Real r = tol.ode_detour_radius * consecutive_detours;
    tc = tc_anchor;
    Y = Y_anchor;
    next_sample = std::min(next_sample, sample_anchor);
    const Cplx c = tc + sgn * Cplx(r, 0.0);
    // upper semicircle, entered at the rewound point, walked in 24 chords
    bool ok = true;
    for (int j = 0; j < 24 && ok; ++j) {
      const Real th0 = sgn > 0 ? kPi - kPi * j / 24.0 : kPi * j / 24.0;
      const Real th1 = sgn > 0 ? kPi - kPi * (j + 1) / 24.0 : kPi * (j + 1) / 24.0;
      const Cplx a = c + r * Cplx(std::cos(th0), std::sin(th0));
      const Cplx b = c + r * Cplx(std::cos(th1), std::sin(th1));
      ok = integrate_segment(j == 0 ? tc : a, b, true);
    }
    if (ok) {
      consecutive_detours = 0;
      tc_anchor = tc;
      Y_anchor = Y;
      sample_anchor = next_sample;
    }
    // if not ok, the loop comes round and detours again with a wider arc
  }
  return out;
}

void diagnostics(RaySolutionState& s, Real phi, const ThetaParams& th, Cplx A,
                 const Tolerances& tol) {
  (void)phi;  // a_phi is evaluated in the x-form, the ray factor already folded in
  s.a_phi = a_phi_of(s.x, s.y, s.yprime, th, tol);
  s.b = s.x * (s.a_phi - A);
  const Cplx ym1 = s.y - 1.0;
  const Cplx psi = (s.y + 1.0) / ym1;
  const Cplx psip = -2.0 * s.yprime / (ym1 * ym1);
  s.L = L_of(s.x, psi, psip, th);
}

RaySolutionState seed_from_asymptotics(Cplx x, const AsymptoticParams& p,
                                       const ThetaParams& th, const Tolerances& tol) {
  CorrectionResult c = h_correction(x, p, th, tol);
  SnEvaluator ev = SnEvaluator::from_elliptic(p.ell, tol);
  const Cplx u = 0.5 * (x - p.x0) + 0.5 * c.h;
  auto v = ev.at(u);
  const Cplx psi = p.ell.k * v.sn;
  // h' from the correction system, so the seed is consistent through the
  // first subleading order
  const Cplx b0v = b0(x, p, tol);
  Ffuncs f = F_functions(p.ell.k * ev.sn(0.5 * (x - p.x0)), b0v, th, p.ell.A, tol);
  const Cplx psi0v = p.ell.k * ev.sn(0.5 * (x - p.x0));
  const Cplx F1psi = (2.0 * (th.theta0 + th.theta1) + 2.0 * psi0v * f.F1) /
                     (p.ell.A - psi0v * psi0v);
  const Cplx psi0p = psi0_prime(x, p, tol);
  const Cplx hp = -f.F1 / x + (f.F2 - 0.5 * f.F1 * f.F1) / (x * x) -
                  F1psi * psi0p * c.h / x;
  const Cplx psip = 0.5 * p.ell.k * v.cn * v.dn * (1.0 + hp);
  RaySolutionState s;
  s.x = x;
  s.y = y_of_psi(psi, tol);
  s.yprime = -2.0 * psip / ((psi - 1.0) * (psi - 1.0));
  return s;
}

Real decay_slope(const std::vector<Real>& t, const std::vector<Real>& v, int bins) {
  // window maxima against the bin-center abscissa, then least squares in
  // log-log coordinates
  const Real lo = t.front(), hi = t.back();
  std::vector<Real> bx, by;
  for (int b = 0; b < bins; ++b) {
    Real a = lo + (hi - lo) * b / bins, c = lo + (hi - lo) * (b + 1) / bins;
    Real m = 0, tm = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] >= a && t[i] < c && v[i] > m) {
        m = v[i];
        tm = t[i];
      }
    if (m > 0) {
      bx.push_back(std::log(tm));
      by.push_back(std::log(m));
    }
  }
  if (bx.size() < 2) return 0.0;
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < bx.size(); ++i) {
    sx += bx[i];
    sy += by[i];
    sxx += bx[i] * bx[i];
    sxy += bx[i] * by[i];
  }
  const Real n = (Real)bx.size();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CompareReport compare_asymptotics_ode(const AsymptoticParams& p, const ThetaParams& th,
                                      Real r0, Real r1, bool correction,
                                      const Tolerances& tol) {
  CompareReport rep;
  CheeseStrip strip = default_strip(p.phi, p.ell, tol);
  strip.exclude_Q = true;

  // choose an in-strip seed parameter at |x| = r0, away from the wide
  // quadratic neighbourhoods of the psi = +-1 points where y degenerates
  SnEvaluator ev0 = SnEvaluator::from_elliptic(p.ell, tol);
  Real t0 = r0;
  for (;; t0 += 0.13) {
    if (!in_strip(expi(p.phi) * t0, strip, p)) continue;
    if (lattice_membership(expi(p.phi) * t0, p, 1.6 * strip.delta0).cls !=
        LatticeClass::clear)
      continue;
    const Cplx ps = p.ell.k * ev0.sn(0.5 * (expi(p.phi) * t0 - p.x0));
    if (std::abs(ps - 1.0) > 0.35 && std::abs(ps + 1.0) > 0.35 && std::abs(ps) < 3.0)
      break;
  }

  // sample grid (skip the excluded disks), plus the correction sweep values
  std::vector<Real> ts;
  for (Real t = t0; t <= r1; t += 0.8) ts.push_back(t);
  CorrectionSweep sweep(p, th, strip, tol);
  std::vector<CorrectionResult> corr = sweep.evaluate(ts);

  SnEvaluator ev = SnEvaluator::from_elliptic(p.ell, tol);
  RaySolutionState s0 = correction
                            ? seed_from_asymptotics(expi(p.phi) * t0, p, th, tol)
                            : RaySolutionState{};
  if (!correction) {
    const Cplx x = expi(p.phi) * t0;
    const Cplx psi = p.ell.k * ev.sn(0.5 * (x - p.x0));
    const Cplx psip = psi0_prime(x, p, tol);
    s0.x = x;
    s0.y = y_of_psi(psi, tol);
    s0.yprime = -2.0 * psip / ((psi - 1.0) * (psi - 1.0));
  }

  StepControl ctl;
  ctl.rtol = tol.ode_rtol;
  ctl.atol = tol.ode_atol;
  IntegrateResult run = integrate_ray(s0, p.phi, r1, ts, ctl, th, tol);

  rep.n_samples = (int)run.samples.size();
  for (auto& s : run.samples) {
    diagnostics(s, p.phi, th, p.ell.A, tol);
    rep.ode_samples.push_back(s);
    const Real tval = (s.x * expi(-p.phi)).real();
    const bool ok = in_strip(s.x, strip, p) && !s.detour_flag;
    rep.in_strip_flag.push_back(ok);

    // asymptotic values at the same x
    std::size_t idx = 0;
    Real best = 1e300;
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (std::abs(ts[i] - tval) < best) {
        best = std::abs(ts[i] - tval);
        idx = i;
      }
    const Cplx h = correction ? corr[idx].h : Cplx(0.0);
    const Cplx chi = correction ? corr[idx].chi0 : Cplx(0.0);
    const Cplx u = 0.5 * (s.x - p.x0) + 0.5 * h;
    auto vv = ev.at(u);
    const Cplx psi_a = p.ell.k * vv.sn;
    const Cplx b_a = b0(s.x, p, tol) + b0_prime(s.x, p, tol) * h + chi;
    rep.psi_asym.push_back(psi_a);
    rep.b_asym.push_back(b_a);

    // (6.5)-type defect of the leading family at this x
    auto v0 = ev.at(0.5 * (s.x - p.x0));
    const Cplx psi0v = p.ell.k * v0.sn;
    const Cplx psi0p = 0.5 * p.ell.k * v0.cn * v0.dn;
    const Cplx psi0pp = -0.25 * p.ell.k * v0.sn *
                        (v0.dn * v0.dn + p.ell.A * v0.cn * v0.cn);
    Real res = 1e300;
    try {
      const Cplx ya = y_of_psi(psi0v, tol);
      const Cplx om = psi0v - 1.0;
      const Cplx ypa = -2.0 * psi0p / (om * om);
      const Cplx yppa = -2.0 * psi0pp / (om * om) + 4.0 * psi0p * psi0p / (om * om * om);
      res = std::abs(L_residual(s.x, ya, ypa, yppa, th, tol));
    } catch (const Error&) {
    }
    rep.res65.push_back(res);

    if (ok) {
      const Cplx psi_o = (s.y + 1.0) / (s.y - 1.0);
      const Real dev = std::abs(psi_o - psi_a);
      const Real devb = std::abs(s.b - b_a);
      rep.sup_dev_psi = std::max(rep.sup_dev_psi, dev);
      rep.sup_dev_b = std::max(rep.sup_dev_b, devb);
      if (tval <= t0 + 10.0) rep.window_lo_dev = std::max(rep.window_lo_dev, dev);
      if (tval >= r1 - 10.0) rep.window_hi_dev = std::max(rep.window_hi_dev, dev);
    }
  }

  // defect decay slope over clear samples
  std::vector<Real> tv, rv;
  for (std::size_t i = 0; i < rep.ode_samples.size(); ++i) {
    if (!rep.in_strip_flag[i] || rep.res65[i] > 1e100) continue;
    tv.push_back((rep.ode_samples[i].x * expi(-p.phi)).real());
    rv.push_back(rep.res65[i]);
  }
  if (tv.size() > 8) rep.slope_res65 = decay_slope(tv, rv);
  return rep;
}

}  // namespace pvell
