#include "pvell/monodromy.hpp"

#include <cmath>

#include "json.hpp"
#include "pvell/boutroux.hpp"
#include "pvell/error.hpp"

namespace pvell {

namespace {

Cplx cospi(Cplx t) { return std::cos(kPi * t); }

Eigen::Matrix2cd diag_pow(Cplx d) {
  Eigen::Matrix2cd D;
  D << d, 0.0, 0.0, 1.0 / d;
  return D;
}

}  // namespace

MonodromyData from_parameters(const ThetaParams& th, Cplx q0, Cplx q1, Cplx r,
                              const Tolerances& tol) {
  const Cplx c0 = cospi(th.theta0), c1 = cospi(th.theta1);
  const Cplx rho = std::exp(-kImag * kPi * th.theta_inf) - (c0 - q0) * (c1 - q1);
  if (std::abs(r) < tol.tol_generic || std::abs(rho) < tol.tol_generic)
    fail(Err::SingularChart, "chart requires r != 0 and rho(q0, q1) != 0");
  MonodromyData m;
  m.theta = th;
  m.M0 << c0 - q0, r / rho * (c0 * c0 - q0 * q0 - 1.0), rho / r, c0 + q0;
  m.M1 << c1 - q1, r, (c1 * c1 - q1 * q1 - 1.0) / r, c1 + q1;
  return m;
}

Real manifold_violation(const MonodromyData& m) {
  const Cplx c0 = cospi(m.theta.theta0), c1 = cospi(m.theta.theta1);
  const Cplx einf = std::exp(-kImag * kPi * m.theta.theta_inf);
  Real v = 0;
  v = std::max(v, std::abs(m.M0.determinant() - 1.0));
  v = std::max(v, std::abs(m.M1.determinant() - 1.0));
  v = std::max(v, std::abs(m.M0.trace() - 2.0 * c0));
  v = std::max(v, std::abs(m.M1.trace() - 2.0 * c1));
  v = std::max(v, std::abs((m.M1 * m.M0)(0, 0) - einf));
  return v;
}

StokesPair stokes_multipliers(const MonodromyData& m, Cplx q0, Cplx q1, Cplx r,
                              const Tolerances& tol) {
  const Cplx c0 = cospi(m.theta.theta0), c1 = cospi(m.theta.theta1);
  const Cplx epi = std::exp(kImag * kPi * m.theta.theta_inf);
  const Cplx rho = std::exp(-kImag * kPi * m.theta.theta_inf) - (c0 - q0) * (c1 - q1);
  if (std::abs(r) < tol.tol_generic || std::abs(rho) < tol.tol_generic)
    fail(Err::SingularChart, "chart requires r != 0 and rho(q0, q1) != 0");
  StokesPair s;
  s.s1 = (epi * (c0 - q0) - (c1 + q1)) / r;
  s.s2 = r * (epi * (c1 - q1) - (c0 + q0)) / rho;
  return s;
}

StokesPair stokes_from_monodromy(const MonodromyData& m, const Tolerances& tol) {
  const Eigen::Matrix2cd P = m.M1 * m.M0;
  if (std::abs(P(0, 0)) < tol.tol_generic)
    fail(Err::SingularChart, "cyclic product has vanishing (1,1) entry");
  StokesPair s;
  s.s2 = -P(0, 1) / P(0, 0);
  s.s1 = -P(1, 0) / P(0, 0);
  return s;
}

Eigen::Matrix2cd stokes_matrix(int k, const StokesPair& s, Cplx theta_inf) {
  Eigen::Matrix2cd S = Eigen::Matrix2cd::Identity();
  if (k % 2 != 0) {  // lower-unitriangular family seeded by S1
    const Cplx f = std::exp(-kImag * kPi * theta_inf * Real(k - 1));
    S(1, 0) = s.s1 * f;
  } else {  // upper-unitriangular family seeded by S2
    const Cplx f = std::exp(kImag * kPi * theta_inf * Real(k - 2));
    S(0, 1) = s.s2 * f;
  }
  return S;
}

MonodromyData gauge_conjugate(const MonodromyData& m, Cplx d0) {
  if (d0 == Cplx(0.0)) fail(Err::ZeroGauge, "gauge factor must be nonzero");
  MonodromyData out = m;
  const Eigen::Matrix2cd D = diag_pow(d0), Di = diag_pow(1.0 / d0);
  out.M0 = Di * m.M0 * D;
  out.M1 = Di * m.M1 * D;
  return out;
}

SectorReduction sector_reduce(const MonodromyData& m, const StokesPair& s, Real phi,
                              const Tolerances& tol) {
  const Real phi_hat = std::remainder(phi, kPi);
  if (std::abs(phi_hat) < tol.phi_min || std::abs(std::abs(phi_hat) - 0.5 * kPi) < tol.phi_min)
    fail(Err::OnCriticalRay, "angle too close to the real or imaginary axis");
  const long k = std::lround((phi - phi_hat) / kPi);
  SectorReduction red;
  red.theta = m.theta;
  red.phi_hat = phi_hat;
  red.breve = (k % 2) != 0;
  const long p = red.breve ? (k - 1) / 2 : k / 2;
  red.p = (int)p;

  Eigen::Matrix2cd U = Eigen::Matrix2cd::Identity();
  if (p > 0) {
    for (long j = 2; j <= 2 * p + 1; ++j) U = U * stokes_matrix((int)j, s, m.theta.theta_inf);
  } else if (p < 0) {
    for (long j = 1; j >= 2 * p + 2; --j)
      U = U * stokes_matrix((int)j, s, m.theta.theta_inf).inverse();
  }
  if (red.breve) {
    if (p >= 0)
      U = U * stokes_matrix((int)(2 * p + 2), s, m.theta.theta_inf);
    else
      U = U * stokes_matrix((int)(2 * p + 1), s, m.theta.theta_inf).inverse();
  }
  const Eigen::Matrix2cd Ui = U.inverse();
  red.M0 = Ui * m.M0 * U;
  red.M1 = Ui * m.M1 * U;
  return red;
}

bool genericity_check(const SectorReduction& red, const Tolerances& tol) {
  const Cplx prod = red.breve
                        ? red.M0(0, 1) * red.M1(1, 0) * red.M0(1, 1) * red.M1(1, 1)
                        : red.M0(0, 0) * red.M1(0, 0) * red.M0(1, 0) * red.M1(0, 1);
  return std::abs(prod) > tol.tol_generic;
}

Cplx log_product_arg(const SectorReduction& red) {
  return red.breve ? 1.0 / (red.M0(0, 1) * red.M1(1, 0)) : red.M0(1, 0) * red.M1(0, 1);
}

Cplx m_frak(const SectorReduction& red) {
  const Cplx einf = std::exp(-kImag * kPi * red.theta.theta_inf);
  if (!red.breve) {
    return red.phi_hat < 0 ? red.M0(0, 0) : einf / red.M1(0, 0);
  }
  return red.phi_hat < 0 ? einf * red.M0(1, 1) : 1.0 / red.M1(1, 1);
}

Cplx lattice_canonical(Cplx x, const EllipticData& ell, long* a_steps, long* b_steps) {
  const Cplx pa = 2.0 * ell.omega_a, pb = 2.0 * ell.omega_b;
  const Real det = pa.real() * pb.imag() - pa.imag() * pb.real();
  Real al = (x.real() * pb.imag() - x.imag() * pb.real()) / det;
  Real be = (pa.real() * x.imag() - pa.imag() * x.real()) / det;
  const Real fa = std::floor(al), fb = std::floor(be);
  if (a_steps) *a_steps = -(long)fa;
  if (b_steps) *b_steps = -(long)fb;
  return (al - fa) * pa + (be - fb) * pb;
}

Cplx phase_shift(const SectorReduction& red, const EllipticData& ell, const Tolerances& tol) {
  if (!genericity_check(red, tol))
    fail(Err::NonGenericMonodromy, "vanishing entry product in the reduced sector");
  const Cplx P = log_product_arg(red);
  const Cplx mf = m_frak(red);
  const Cplx raw = (-1.0 / (kImag * kPi)) * (ell.omega_b * std::log(P) +
                                             ell.omega_a * std::log(mf)) -
                   (0.5 * ell.omega_a + ell.omega_b) * (red.theta.theta_inf + 1.0);
  return lattice_canonical(raw, ell);
}

Cplx beta0(const SectorReduction& red, const EllipticData& ell, int* branch_index) {
  const Cplx P = log_product_arg(red);
  if (std::abs(P) == 0.0) fail(Err::NonGenericMonodromy, "m0_21 m1_12 vanishes");
  if (branch_index) *branch_index = 0;  // principal branch
  return (-8.0 / ell.omega_a) * (std::log(P) + kImag * kPi * (red.theta.theta_inf + 1.0));
}

AsymptoticParams make_asymptotic_params(const MonodromyData& m, const StokesPair& s, Real phi,
                                        const Tolerances& tol) {
  SectorReduction red = sector_reduce(m, s, phi, tol);
  AsymptoticParams p;
  p.phi = phi;
  p.ell = elliptic_data(solve_A(red.phi_hat, tol).A, tol);
  if (!genericity_check(red, tol))
    fail(Err::NonGenericMonodromy, "vanishing entry product in the reduced sector");
  const Cplx P = log_product_arg(red);
  const Cplx mf = m_frak(red);
  const Cplx raw = (-1.0 / (kImag * kPi)) * (p.ell.omega_b * std::log(P) +
                                             p.ell.omega_a * std::log(mf)) -
                   (0.5 * p.ell.omega_a + p.ell.omega_b) * (red.theta.theta_inf + 1.0);
  long a_steps = 0, b_steps = 0;
  p.x0 = lattice_canonical(raw, p.ell, &a_steps, &b_steps);
  // the theta quasi-period from the 2 omega_b steps of the reduction is
  // compensated in beta0, so b0 is independent of the representative
  p.beta0 = beta0(red, p.ell, nullptr) +
            Cplx(0.0, 16.0 * kPi) * Real(b_steps) / p.ell.omega_a;
  p.log_branch = (int)b_steps;
  p.p = red.p;
  p.breve = red.breve;
  return p;
}

// JSON ------------------------------------------------------------------

namespace {

using nlohmann::json;

Cplx cplx_of(const json& j) {
  if (!j.is_array() || j.size() != 2) fail(Err::InvalidInput, "complex values are [re, im]");
  return Cplx(j[0].get<Real>(), j[1].get<Real>());
}

json cplx_to(Cplx z) { return json::array({z.real(), z.imag()}); }

Eigen::Matrix2cd mat_of(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2)
    fail(Err::InvalidInput, "matrices are 2x2 arrays of [re, im] pairs");
  Eigen::Matrix2cd M;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) M(i, k) = cplx_of(j[i][k]);
  return M;
}

json mat_to(const Eigen::Matrix2cd& M) {
  json rows = json::array();
  for (int i = 0; i < 2; ++i) {
    json row = json::array();
    for (int k = 0; k < 2; ++k) row.push_back(cplx_to(M(i, k)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

MonodromyData monodromy_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(Err::InvalidInput, std::string("monodromy JSON parse: ") + e.what());
  }
  MonodromyData m;
  if (!j.contains("theta") || !j.contains("M0") || !j.contains("M1"))
    fail(Err::InvalidInput, "monodromy JSON needs theta, M0, M1");
  m.theta.theta0 = cplx_of(j["theta"]["t0"]);
  m.theta.theta1 = cplx_of(j["theta"]["t1"]);
  m.theta.theta_inf = cplx_of(j["theta"]["tinf"]);
  m.M0 = mat_of(j["M0"]);
  m.M1 = mat_of(j["M1"]);
  return m;
}

std::string monodromy_to_json_text(const MonodromyData& m) {
  json j;
  j["theta"]["t0"] = cplx_to(m.theta.theta0);
  j["theta"]["t1"] = cplx_to(m.theta.theta1);
  j["theta"]["tinf"] = cplx_to(m.theta.theta_inf);
  j["M0"] = mat_to(m.M0);
  j["M1"] = mat_to(m.M1);
  return j.dump(2);
}

}  // namespace pvell
