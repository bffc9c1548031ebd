#include "pvell/theta.hpp"

#include <cmath>

#include "pvell/error.hpp"

namespace pvell {

namespace detail {

// Series at a reduced argument, all derivative orders at once.
void theta_series(Cplx z, Cplx tau, int max_order, Cplx out[4], const Tolerances& tol) {
  const Cplx q = std::exp(kImag * kPi * tau);
  if (std::abs(q) > tol.theta_qmax)
    fail(Err::NonconvergentNome, "|q| too close to 1");
  for (int d = 0; d <= max_order; ++d) out[d] = (d == 0) ? Cplx(1.0) : Cplx(0.0);
  const Cplx e2 = std::exp(Cplx(0.0, 2.0 * kPi) * z);
  const Cplx e2i = 1.0 / e2;
  Cplx qpow = 1.0;        // q^{n^2}
  Cplx qodd = q;          // q^{2n-1}
  Cplx ep = 1.0, em = 1.0;
  const Cplx q2 = q * q;
  for (int n = 1; n <= tol.theta_max_terms; ++n) {
    qpow *= qodd;
    qodd *= q2;
    ep *= e2;
    em *= e2i;
    const Cplx c = Cplx(0.0, 2.0 * kPi) * Real(n);
    Cplx cp = 1.0, cm = 1.0;
    Real mag = 0.0;
    for (int d = 0; d <= max_order; ++d) {
      Cplx term = qpow * (cp * ep + cm * em);
      out[d] += term;
      mag = std::max(mag, std::abs(term));
      cp *= c;
      cm *= -c;
    }
    Real scale = std::max(Real(1.0), std::abs(out[0]));
    if (mag < tol.theta_rel * scale && n > 2) return;
  }
}

void theta_all(Cplx z, Cplx tau, int max_order, Cplx out[4], const Tolerances& tol) {
  if (!(tau.imag() > tol.tol_imtau)) fail(Err::NonconvergentNome, "Im tau too small");
  // Reduce z into the fundamental cell; the quasi-period multiplier and the
  // shift of the derivative orders are restored afterwards.
  long n = std::lround(z.imag() / tau.imag());
  Cplx zh = z - Real(n) * tau;
  long m = std::lround(zh.real());
  zh -= Real(m);
  Cplx th[4];
  theta_series(zh, tau, max_order, th, tol);
  if (n == 0) {
    for (int d = 0; d <= max_order; ++d) out[d] = th[d];
    return;
  }
  const Cplx E = std::exp(-kImag * kPi * (Real(n) * Real(n) * tau + 2.0 * Real(n) * zh));
  const Cplx c = Cplx(0.0, -2.0 * kPi) * Real(n);
  static const int binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int d = 0; d <= max_order; ++d) {
    Cplx s = 0.0, cj = 1.0;
    for (int j = 0; j <= d; ++j) {
      s += Real(binom[d][j]) * cj * th[d - j];
      cj *= c;
    }
    out[d] = E * s;
  }
}

}  // namespace detail

Cplx theta(Cplx z, Cplx tau, int order, const Tolerances& tol) {
  if (order < 0 || order > 2) fail(Err::InvalidInput, "theta derivative order must be 0..2");
  Cplx out[4];
  detail::theta_all(z, tau, order, out, tol);
  return out[order];
}

Cplx theta_logderiv(Cplx z, Cplx tau, const Tolerances& tol) {
  return theta_logderiv_deriv(z, tau, 0, tol);
}

// The quasi-period multiplier cancels in theta'/theta and is dropped before
// it can overflow: only the -2 pi i n shift of the order-0 value survives
// the reduction; higher orders are shift-invariant.
Cplx theta_logderiv_deriv(Cplx z, Cplx tau, int n, const Tolerances& tol) {
  if (n < 0 || n > 2) fail(Err::InvalidInput, "log-derivative order must be 0..2");
  if (!(tau.imag() > tol.tol_imtau)) fail(Err::NonconvergentNome, "Im tau too small");
  const long nred = std::lround(z.imag() / tau.imag());
  Cplx zh = z - Real(nred) * tau;
  zh -= Real(std::lround(zh.real()));
  Cplx out[4];
  detail::theta_series(zh, tau, n + 1, out, tol);
  if (std::abs(out[0]) < tol.tol_zero) fail(Err::NearThetaZero, "theta vanishes at argument");
  Cplx L = out[1] / out[0];
  if (n == 0) return L - Cplx(0.0, 2.0 * kPi) * Real(nred);
  Cplx L1 = out[2] / out[0] - L * L;
  if (n == 1) return L1;
  return out[3] / out[0] - 3.0 * (out[2] / out[0]) * L + 2.0 * L * L * L;
}

namespace {

// q^{(n+1/2)^2} ladder shared by theta1/theta2.
template <typename Term>
Cplx half_series(Cplx tau, const Tolerances& tol, Term&& term_of) {
  const Cplx q = std::exp(kImag * kPi * tau);
  if (std::abs(q) > tol.theta_qmax) fail(Err::NonconvergentNome, "|q| too close to 1");
  Cplx qpow = std::pow(q, Cplx(0.25));  // q^{(n+1/2)^2}, stepping by q^{2n+2}
  const Cplx q2 = q * q;
  Cplx qstep = q2;
  Cplx s = 0.0;
  for (int n = 0; n < tol.theta_max_terms; ++n) {
    Cplx term = term_of(n, qpow);
    s += term;
    if (n > 1 && std::abs(term) < tol.theta_rel * std::max(Real(1.0), std::abs(s))) break;
    qpow *= qstep;
    qstep *= q2;
  }
  return s;
}

}  // namespace

Cplx theta1(Cplx z, Cplx tau, const Tolerances& tol) {
  return 2.0 * half_series(tau, tol, [&](int n, Cplx qp) {
    Real sgn = (n % 2 == 0) ? 1.0 : -1.0;
    return sgn * qp * std::sin(Real(2 * n + 1) * kPi * z);
  });
}

Cplx theta2(Cplx z, Cplx tau, const Tolerances& tol) {
  return 2.0 * half_series(tau, tol, [&](int n, Cplx qp) {
    return qp * std::cos(Real(2 * n + 1) * kPi * z);
  });
}

Cplx theta4(Cplx z, Cplx tau, const Tolerances& tol) {
  Cplx out[4];
  detail::theta_all(z + Cplx(0.5), tau, 0, out, tol);
  return out[0];
}

}  // namespace pvell
