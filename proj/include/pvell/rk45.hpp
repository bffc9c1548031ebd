#pragma once

#include <cmath>
#include <complex>

#include "pvell/error.hpp"
#include "pvell/types.hpp"

namespace pvell {

// Dormand-Prince 5(4) embedded pair on a complex state vector (any Eigen-like
// fixed-size vector with array-wise abs).  One step of size h from (s, y);
// returns the 5th-order solution and an error estimate.
template <typename Vec, typename F>
void dp45_step(F&& f, Real s, const Vec& y, Real h, Vec& y5, Real& err, Real atol, Real rtol) {
  static const Real c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  const Vec k1 = f(s, y);
  const Vec k2 = f(s + c2 * h, Vec(y + h * (0.2 * k1)));
  const Vec k3 = f(s + c3 * h, Vec(y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2)));
  const Vec k4 = f(s + c4 * h, Vec(y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3)));
  const Vec k5 = f(s + c5 * h,
                   Vec(y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                                64448.0 / 6561 * k3 - 212.0 / 729 * k4)));
  const Vec k6 = f(s + h, Vec(y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                                       46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                                       5103.0 / 18656 * k5)));
  y5 = y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                2187.0 / 6784 * k5 + 11.0 / 84 * k6);
  const Vec k7 = f(s + h, y5);
  const Vec y4 = y + h * (5179.0 / 57600 * k1 + 7571.0 / 16695 * k3 + 393.0 / 640 * k4 -
                          92097.0 / 339200 * k5 + 187.0 / 2100 * k6 + 1.0 / 40 * k7);
  err = 0.0;
  for (int i = 0; i < y.size(); ++i) {
    Real sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
    err = std::max(err, std::abs(y5[i] - y4[i]) / sc);
  }
}

struct RkControl {
  Real rtol = 1e-10;
  Real atol = 1e-12;
  Real h0 = 0.05;
  Real hmin = 1e-12;
  long max_steps = 2000000;
};

// Integrate from s0 to s1 (either direction); calls watch(s, y) after each
// accepted step when provided.
template <typename Vec, typename F, typename Watch>
Vec rk45_integrate(F&& f, Real s0, Real s1, Vec y, const RkControl& ctl, Watch&& watch,
                   long* steps_taken = nullptr) {
  const Real dir = (s1 >= s0) ? 1.0 : -1.0;
  // floating-point exact landing is not reachable in general; stop within
  // an ulp-scale margin of the target
  const Real s_eps = 1e-12 * (1.0 + std::abs(s0) + std::abs(s1));
  Real s = s0;
  Real h = dir * std::min(ctl.h0, std::abs(s1 - s0));
  long steps = 0;
  while (dir * (s1 - s) > s_eps) {
    if (std::abs(h) > std::abs(s1 - s)) h = s1 - s;
    Vec y5;
    Real err;
    dp45_step(f, s, y, h, y5, err, ctl.atol, ctl.rtol);
    if (err <= 1.0) {
      s += h;
      y = y5;
      watch(s, y);
    }
    Real fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    fac = std::min(5.0, std::max(0.2, fac));
    h *= fac;
    if (std::abs(h) < ctl.hmin * (1.0 + std::abs(s)))
      fail(Err::StepUnderflow, "step size underflow");
    if (++steps > ctl.max_steps) fail(Err::MaxSteps, "step budget exhausted");
  }
  if (steps_taken) *steps_taken += steps;
  return y;
}

template <typename Vec, typename F>
Vec rk45_integrate(F&& f, Real s0, Real s1, Vec y, const RkControl& ctl,
                   long* steps_taken = nullptr) {
  return rk45_integrate(std::forward<F>(f), s0, s1, std::move(y), ctl,
                        [](Real, const Vec&) {}, steps_taken);
}

}  // namespace pvell
