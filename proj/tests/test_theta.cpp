#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles.hpp"
#include "pvell/error.hpp"
#include "pvell/theta.hpp"

using namespace pvell;
using pvell::Real;

namespace {
const Cplx tau_a(0.13, 0.62);
const Cplx tau_b(-0.31, 0.38);
}  // namespace

TEST_CASE("theta is one-periodic in z") {
  for (Cplx tau : {tau_a, tau_b}) {
    for (int i = 0; i < 8; ++i) {
      Cplx z = oracle::crand(1.4);
      Real scale = std::max(1.0, std::abs(theta(z, tau)));
      CHECK(std::abs(theta(z + 1.0, tau) - theta(z, tau)) < 1e-13 * scale);
      CHECK(std::abs(theta(z - 1.0, tau) - theta(z, tau)) < 1e-13 * scale);
    }
  }
}

TEST_CASE("theta quasi-periodicity under z -> z + tau") {
  for (Cplx tau : {tau_a, tau_b}) {
    for (int i = 0; i < 8; ++i) {
      Cplx z = oracle::crand(1.2);
      Cplx lhs = theta(z + tau, tau) * std::exp(kImag * kPi * (tau + 2.0 * z));
      CHECK(std::abs(lhs - theta(z, tau)) < 1e-12 * std::max(1.0, std::abs(theta(z, tau))));
    }
  }
}

TEST_CASE("theta'(0) = 0 and theta is even") {
  CHECK(theta(Cplx(0.0), tau_a, 1) == Cplx(0.0));
  for (int i = 0; i < 6; ++i) {
    Cplx z = oracle::crand(0.8);
    CHECK(std::abs(theta(z, tau_a) - theta(-z, tau_a)) < 1e-13);
  }
}

TEST_CASE("theta derivative orders agree with finite differences") {
  Cplx z(0.21, 0.17);
  auto f = [&](Cplx u) { return theta(u, tau_a); };
  CHECK(std::abs(theta(z, tau_a, 1) - oracle::fd5(f, z, 1e-3)) < 1e-9);
  CHECK(std::abs(theta(z, tau_a, 2) - oracle::fd5_second(f, z, 1e-3)) < 1e-7);
}

TEST_CASE("log-derivative: value, 1-periodicity, quasi-period jump") {
  for (Cplx tau : {tau_a, tau_b}) {
    CHECK(std::abs(theta_logderiv(Cplx(0.0), tau)) == 0.0);
    for (int i = 0; i < 6; ++i) {
      Cplx z = oracle::crand(1.1);
      Cplx L = theta_logderiv(z, tau);
      CHECK(std::abs(theta_logderiv(z + 1.0, tau) - L) < 1e-13);
      Cplx jump = theta_logderiv(z + tau, tau) - L;
      CHECK(std::abs(jump - Cplx(0.0, -2.0 * kPi)) < 1e-12);
    }
  }
}

TEST_CASE("log-derivative higher orders match finite differences") {
  Cplx z(0.31, -0.05);
  auto f = [&](Cplx u) { return theta_logderiv(u, tau_a); };
  CHECK(std::abs(theta_logderiv_deriv(z, tau_a, 1) - oracle::fd5(f, z, 1e-3)) < 1e-8);
  CHECK(std::abs(theta_logderiv_deriv(z, tau_a, 2) - oracle::fd5_second(f, z, 1e-3)) < 1e-6);
}

TEST_CASE("half-characteristic thetas: classical identities at z = 0") {
  // theta2^4 + theta4^4 = theta3^4 (Jacobi), and theta1(0) = 0.
  for (Cplx tau : {tau_a, Cplx(0.0, 0.9)}) {
    Cplx t2 = theta2(0.0, tau), t3 = theta(Cplx(0.0), tau), t4 = theta4(0.0, tau);
    CHECK(std::abs(std::pow(t2, 4) + std::pow(t4, 4) - std::pow(t3, 4)) < 1e-12);
    CHECK(std::abs(theta1(0.0, tau)) < 1e-15);
  }
}

TEST_CASE("rejects bad nome") {
  CHECK_THROWS_AS((void)theta(Cplx(0.1), Cplx(0.2, 1e-13)), Error);
  CHECK_THROWS_AS((void)theta(Cplx(0.1), Cplx(0.2, 1e-3)), Error);  // |q| ~ 0.997
}

TEST_CASE("reduction matches direct series far from the cell") {
  // Large imaginary shift exercises the quasi-period multiplier.
  Cplx z(0.37, 4.9), tau = tau_a;
  Cplx direct = 0.0;  // brute force with many terms, shifted manually
  // theta(z) = sum q^{n^2} e^{2 pi i n z}; for Im z = 4.9 the peak sits near
  // n0 = -Im z / Im tau; sum a wide window around it.
  Cplx q = std::exp(kImag * kPi * tau);
  int n0 = (int)std::lround(-z.imag() / tau.imag());
  for (int n = n0 - 60; n <= n0 + 60; ++n)
    direct += std::exp(kImag * kPi * tau * Real(n) * Real(n) + Cplx(0, 2) * kPi * Real(n) * z);
  CHECK(std::abs(theta(z, tau) - direct) < 1e-10 * std::abs(direct));
}
