#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pvell/boutroux.hpp"
#include "pvell/error.hpp"
#include <sstream>

#include "pvell/stokes.hpp"

using namespace pvell;

namespace {
const ThetaParams th_gen{Cplx(0.3), Cplx(0.1), Cplx(0.2)};
}

TEST_CASE("mu at the limit: branch normalization and sheet flip") {
  const Real phi = kPi / 5;
  Cplx a = solve_A(phi).A;
  // at lambda -> 0 on the upper sheet: mu -> a^{1/2}/4
  Cplx m0 = stokes_mu(Cplx(1e-14), -1.0, phi, a, th_gen, Sheet::upper);
  CHECK(std::abs(m0 - 0.25 * sqrt_re_nonneg(a)) < 1e-10);
  for (int i = 0; i < 6; ++i) {
    Cplx lam = oracle::crand(1.5);
    Cplx up = stokes_mu(lam, -1.0, phi, a, th_gen, Sheet::upper);
    Cplx lo = stokes_mu(lam, -1.0, phi, a, th_gen, Sheet::lower);
    CHECK(up == -lo);
  }
  CHECK_THROWS_AS((void)stokes_mu(expi(phi), -1.0, phi, a, th_gen), Error);
}

TEST_CASE("turning points: limit values, asymptotic rate, reconstruction") {
  const Real phi = kPi / 5;
  Cplx a = solve_A(phi).A;
  TurningPoints inf = turning_points(-1.0, phi, a, th_gen);
  CHECK(std::abs(inf.lambda1 - expi(phi) * sqrt_re_nonneg(a)) < 1e-14);
  CHECK(std::abs(inf.lambda2 + expi(phi) * sqrt_re_nonneg(a)) < 1e-14);
  CHECK(std::abs(inf.lambda1_0 - expi(phi)) < 1e-14);

  // mu vanishes at the limit turning points
  CHECK(std::abs(stokes_mu(inf.lambda1, -1.0, phi, a, th_gen)) < 1e-10);
  CHECK(std::abs(stokes_mu(inf.lambda2, -1.0, phi, a, th_gen)) < 1e-10);

  // finite-t error against the first-order form shrinks by ~4 under t -> 2t
  auto defect = [&](Real t) {
    TurningPoints tp = turning_points(t, phi, a, th_gen);
    return std::abs(tp.lambda1 - expi(phi) * sqrt_re_nonneg(a) -
                    2.0 * th_gen.theta_inf / t);
  };
  Real d1 = defect(40.0), d2 = defect(80.0);
  CHECK(d1 / d2 > 3.0);
  CHECK(d1 / d2 < 5.0);

  // mu^2 from the four roots matches the rational form at random lambda
  TurningPoints tp = turning_points(50.0, phi, a, th_gen);
  for (int i = 0; i < 20; ++i) {
    Cplx lam = oracle::crand(1.4);
    Cplx e2 = expi(2.0 * phi);
    Cplx num = (lam - tp.lambda1) * (lam - tp.lambda2) * (lam - tp.lambda1_0) *
               (lam - tp.lambda2_0);
    Cplx ms = num / (16.0 * (lam - expi(phi)) * (lam - expi(phi)) * (lam + expi(phi)) *
                     (lam + expi(phi)));
    Cplx mu = stokes_mu(lam, 50.0, phi, a, th_gen);
    CHECK(std::abs(mu * mu - ms) < 1e-9 * std::max(1.0, std::abs(ms)));
    (void)e2;
  }
}

TEST_CASE("coalescence guard") {
  // a_phi = 1 puts lambda_1 on top of lambda_1^0 in the limit
  CHECK_THROWS_AS((void)turning_points(-1.0, 0.3, Cplx(1.0), th_gen, Tolerances{}), Error);
}

TEST_CASE("three-fold local ray structure") {
  const Real phi = kPi / 5;
  EllipticData ell = elliptic_data(solve_A(phi).A);
  StokesGraph g = limit_graph(phi, ell);
  // initial directions of the three curves from l1 differ by 2 pi / 3
  std::vector<Real> dirs;
  for (const auto& c : g.curves) {
    if (c.from != "l1") continue;
    REQUIRE(c.pts.size() > 2);
    dirs.push_back(std::arg(c.pts[1] - c.pts[0]));
  }
  REQUIRE(dirs.size() == 3);
  std::sort(dirs.begin(), dirs.end());
  CHECK(std::abs(dirs[1] - dirs[0] - 2.0 * kPi / 3.0) < 1e-3);
  CHECK(std::abs(dirs[2] - dirs[1] - 2.0 * kPi / 3.0) < 1e-3);
}

TEST_CASE("level drift stays small along traces") {
  const Real phi = -kPi / 3;
  EllipticData ell = elliptic_data(solve_A(phi).A);
  StokesGraph g = limit_graph(phi, ell);
  for (const auto& c : g.curves) {
    Real len = 0;
    for (std::size_t i = 1; i < c.pts.size(); ++i) len += std::abs(c.pts[i] - c.pts[i - 1]);
    CHECK(c.max_level_drift < 1e-8 * std::max(1.0, len) + 1e-9);
  }
}

TEST_CASE("limit graphs match the four sector families") {
  for (Real phi : {kPi / 5, -kPi / 5, kPi - kPi / 5, kPi + kPi / 5}) {
    EllipticData ell = elliptic_data(solve_A(phi).A);
    StokesGraph g = limit_graph(phi, ell);
    CHECK(g.adjacency == expected_limit_adjacency(phi));
    // saddle connection present
    CHECK(g.adjacency.count({"l1", "l2"}) == 1);
    // three curves from each turning point
    int n1 = 0, n2 = 0;
    for (const auto& c : g.curves) {
      if (c.from == "l1") ++n1;
      if (c.from == "l2") ++n2;
    }
    CHECK(n1 == 3);
    CHECK(n2 == 3);
  }
}

TEST_CASE("conjugation symmetry of the graph") {
  EllipticData ep = elliptic_data(solve_A(kPi / 5).A);
  EllipticData em = elliptic_data(solve_A(-kPi / 5).A);
  StokesGraph gp = limit_graph(kPi / 5, ep);
  StokesGraph gm = limit_graph(-kPi / 5, em);
  CHECK(std::abs(gm.tp.lambda1 - std::conj(gp.tp.lambda1)) < 1e-11);
  // the saddle curves are conjugate point sets
  const StokesCurve *sp = nullptr, *sm = nullptr;
  for (const auto& c : gp.curves)
    if (c.to == "l2" || c.to == "l1") sp = &c;
  for (const auto& c : gm.curves)
    if (c.to == "l2" || c.to == "l1") sm = &c;
  REQUIRE(sp);
  REQUIRE(sm);
  Real worst = 0;
  for (std::size_t i = 0; i < sp->pts.size(); i += 8) {
    // nearest conjugated point
    Real best = 1e300;
    for (std::size_t j = 0; j < sm->pts.size(); ++j)
      best = std::min(best, std::abs(std::conj(sm->pts[j]) - sp->pts[i]));
    worst = std::max(worst, best);
  }
  CHECK(worst < 5e-3);
}

TEST_CASE("saddle connection at the sampled angles") {
  for (Real phi : {kPi / 5, -kPi / 5, kPi / 3, -kPi / 3}) {
    EllipticData ell = elliptic_data(solve_A(phi).A);
    StokesGraph g = limit_graph(phi, ell);
    bool saddle = false;
    for (const auto& c : g.curves)
      if ((c.from == "l1" && c.to == "l2") || (c.from == "l2" && c.to == "l1"))
        saddle = true;
    CHECK(saddle);
  }
}

TEST_CASE("svg and adjacency emission") {
  EllipticData ell = elliptic_data(solve_A(kPi / 5).A);
  StokesGraph g = limit_graph(kPi / 5, ell);
  std::ostringstream os;
  write_stokes_svg(os, g);
  std::string svg = os.str();
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<path") != std::string::npos);
  std::string adj = adjacency_json(g);
  CHECK(adj.find("[\"l1\",\"l2\"]") != std::string::npos);
}
