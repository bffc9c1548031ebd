#include "pvell/stokes.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "pvell/error.hpp"

namespace pvell {

namespace {

// Monic quartic numerator of mu^2; t <= 0 encodes infinity.
std::array<Cplx, 4> quartic_coeffs(Real t, Real phi, Cplx a, const ThetaParams& th) {
  const Cplx e1 = expi(phi), e2 = e1 * e1, e4 = e2 * e2;
  Cplx c3 = 0.0, c2 = -e2 * (1.0 + a), c1 = 0.0, c0 = e4 * a;
  if (t > 0) {
    const Cplx ti = 1.0 / t;
    const Cplx t01 = th.theta1 * th.theta1 - th.theta0 * th.theta0;
    const Cplx t01s = th.theta0 * th.theta0 + th.theta1 * th.theta1;
    c3 = -4.0 * th.theta_inf * ti;
    c1 = 4.0 * th.theta_inf * e2 * ti + 8.0 * t01 * e1 * ti * ti;
    c0 += 8.0 * t01s * e2 * ti * ti;
  }
  return {c0, c1, c2, c3};
}

Cplx quartic_eval(const std::array<Cplx, 4>& c, Cplx z) {
  return (((z + c[3]) * z + c[2]) * z + c[1]) * z + c[0];
}

Cplx quartic_deriv(const std::array<Cplx, 4>& c, Cplx z) {
  return ((4.0 * z + 3.0 * c[3]) * z + 2.0 * c[2]) * z + c[1];
}

// mu^2 from the exact rational form.
Cplx mu_sq(const std::array<Cplx, 4>& c, Cplx lambda, Real phi) {
  const Cplx e2 = expi(2.0 * phi);
  const Cplx den = lambda * lambda - e2;
  return quartic_eval(c, lambda) / (16.0 * den * den);
}

// limit expression with the sheet normalization mu -> a^{1/2}/4 at lambda -> 0.
Cplx mu_limit(Cplx lambda, Real phi, Cplx a) {
  const Cplx z = expi(-phi) * lambda;
  return 0.25 * std::sqrt((a - z * z) / (1.0 - z * z));
}

}  // namespace

Cplx stokes_mu(Cplx lambda, Real t_or_inf, Real phi, Cplx a_phi, const ThetaParams& th,
               Sheet sheet, const Tolerances& tol) {
  const Cplx e2 = expi(2.0 * phi);
  if (std::abs(lambda * lambda - e2) < tol.tol_degenerate)
    fail(Err::SingularDenominator, "mu undefined at lambda = +-e^{i phi}");
  const Real sgn = (sheet == Sheet::upper) ? 1.0 : -1.0;
  if (t_or_inf <= 0) return sgn * mu_limit(lambda, phi, a_phi);
  // exact root magnitude, branch matched to the two-term truncation
  const Cplx z = expi(-phi) * lambda;
  const Cplx w = (1.0 - z * z) * std::sqrt((a_phi - z * z) / (1.0 - z * z));
  const Cplx two_term = mu_limit(lambda, phi, a_phi) +
                        expi(-phi) * th.theta_inf * z / (2.0 * w * t_or_inf);
  Cplx mu = std::sqrt(mu_sq(quartic_coeffs(t_or_inf, phi, a_phi, th), lambda, phi));
  if (std::abs(mu - two_term) > std::abs(mu + two_term)) mu = -mu;
  return sgn * mu;
}

TurningPoints turning_points(Real t_or_inf, Real phi, Cplx a_phi, const ThetaParams& th,
                             const Tolerances& tol) {
  if (std::abs(a_phi) < tol.tol_degenerate)
    fail(Err::DegenerateModulus, "turning points undefined at a_phi = 0");
  TurningPoints tp;
  tp.t = t_or_inf;
  tp.phi = phi;
  const Cplx e1 = expi(phi);
  const Cplx ra = sqrt_re_nonneg(a_phi);
  if (t_or_inf <= 0) {
    tp.lambda1 = e1 * ra;
    tp.lambda2 = -e1 * ra;
    tp.lambda1_0 = e1;
    tp.lambda2_0 = -e1;
    for (Cplx d : {tp.lambda1 - tp.lambda1_0, tp.lambda2 - tp.lambda2_0,
                   tp.lambda1 - tp.lambda2})
      if (std::abs(d) < tol.tol_sep)
        fail(Err::CoalescingTurningPoints, "turning points closer than tol_sep");
    return tp;
  }
  // exact quartic roots via the companion matrix
  const auto c = quartic_coeffs(t_or_inf, phi, a_phi, th);
  Eigen::Matrix4cd comp = Eigen::Matrix4cd::Zero();
  comp(0, 3) = -c[0];
  comp(1, 3) = -c[1];
  comp(2, 3) = -c[2];
  comp(3, 3) = -c[3];
  comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(comp, false);
  std::vector<Cplx> roots;
  for (int i = 0; i < 4; ++i) roots.push_back(es.eigenvalues()(i));
  // one Newton polish per root
  for (auto& r : roots) r -= quartic_eval(c, r) / quartic_deriv(c, r);
  // match to the asymptotic labels by proximity
  const Cplx ti = 1.0 / t_or_inf;
  std::array<Cplx, 4> targets = {e1 * ra + 2.0 * th.theta_inf * ti,
                                 -e1 * ra + 2.0 * th.theta_inf * ti, e1, -e1};
  std::array<Cplx, 4> out;
  std::vector<bool> used(4, false);
  for (int k = 0; k < 4; ++k) {
    int best = -1;
    Real bd = 1e300;
    for (int i = 0; i < 4; ++i) {
      if (used[i]) continue;
      Real d = std::abs(roots[i] - targets[k]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    used[best] = true;
    out[k] = roots[best];
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(out[i] - out[j]) < tol.tol_sep)
        fail(Err::CoalescingTurningPoints, "turning points closer than tol_sep");
  tp.lambda1 = out[0];
  tp.lambda2 = out[1];
  tp.lambda1_0 = out[2];
  tp.lambda2_0 = out[3];
  return tp;
}

namespace {

struct Tracer {
  Real phi;
  Cplx a;
  ThetaParams th;
  Real t;
  Tolerances tol;
  Cplx e1;

  Cplx mu_raw(Cplx lambda) const {
    // principal-branch value; the caller tracks the sheet sign
    if (t <= 0) return mu_limit(lambda, phi, a);
    return std::sqrt(mu_sq(quartic_coeffs(t, phi, a, th), lambda, phi));
  }
};

}  // namespace

StokesCurve trace_stokes(const TurningPoints& tp, int which, int ray_index, Cplx a_phi,
                         const ThetaParams& th, const Tolerances& tol) {
  Tracer tr{tp.phi, a_phi, th, tp.t, tol, expi(tp.phi)};
  const Cplx l_from = (which == 1) ? tp.lambda1 : tp.lambda2;
  const Cplx l_other = (which == 1) ? tp.lambda2 : tp.lambda1;
  StokesCurve cur;
  cur.from = (which == 1) ? "l1" : "l2";

  // local cube-root structure: mu ~ c sqrt(lambda - l*), three directions
  const auto coeffs = quartic_coeffs(tp.t <= 0 ? -1.0 : tp.t, tp.phi, a_phi, th);
  const Cplx den = l_from * l_from - expi(2.0 * tp.phi);
  const Cplx c2 = quartic_deriv(coeffs, l_from) / (16.0 * den * den);
  const Real argc = std::arg(std::sqrt(c2));
  const Real theta_dir = (2.0 / 3.0) * (0.5 * kPi + ray_index * kPi - argc);

  const Real scale = std::abs(tp.lambda1 - tp.lambda2);
  const Real tol_hit = tol.tol_hit_factor * scale;
  Real r0 = 1e-4 * scale;
  Cplx lam = l_from + r0 * expi(theta_dir);
  Cplx dir_prev = expi(theta_dir);
  Cplx mu_prev = tr.mu_raw(lam);
  Real sheet = 1.0;
  Cplx level = 0.5 * mu_prev * (lam - l_from);  // crude start segment
  cur.pts.push_back(l_from);
  cur.pts.push_back(lam);

  auto mu_cont = [&](Cplx l) {
    Cplx m = tr.mu_raw(l);
    if (std::abs(m * sheet - mu_prev) > std::abs(m * sheet + mu_prev)) sheet = -sheet;
    mu_prev = m * sheet;
    return mu_prev;
  };

  const long max_steps = 400000;
  for (long step = 0; step < max_steps; ++step) {
    // distances to the special points control the step
    Real dmin = 1e300;
    for (Cplx s : {tp.lambda1, tp.lambda2, tr.e1, -tr.e1})
      dmin = std::min(dmin, std::abs(lam - s));
    Real h = std::min(0.01, std::max(2e-4, 0.1 * dmin));
    // RK4 on d lambda/ds = unit tangent of the level curve
    Cplx m0 = mu_cont(lam);
    auto tangent = [&](Cplx m) {
      Cplx v = kImag / m;
      v /= std::abs(v);
      if ((std::conj(dir_prev) * v).real() < 0) v = -v;
      return v;
    };
    Cplx k1 = tangent(m0);
    Cplx k2 = tangent(mu_cont(lam + 0.5 * h * k1));
    Cplx k3 = tangent(mu_cont(lam + 0.5 * h * k2));
    Cplx k4 = tangent(mu_cont(lam + h * k3));
    Cplx lam_new = lam + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Cplx m_new = mu_cont(lam_new);
    level += 0.5 * (m0 + m_new) * (lam_new - lam);
    dir_prev = (lam_new - lam) / std::abs(lam_new - lam);
    lam = lam_new;

    // re-projection transverse to the curve (one Newton step on Re int mu)
    if (std::abs(m_new) > 1e-8) {
      Cplx corr = -level.real() * std::conj(m_new) / abs2(m_new);
      lam += corr;
      level += m_new * corr;  // first-order update of the running integral
      (void)mu_cont(lam);
    }
    cur.max_level_drift = std::max(cur.max_level_drift, std::abs(level.real()));
    if (step % 4 == 0) cur.pts.push_back(lam);

    // stop conditions
    if (std::abs(lam - l_other) < tol_hit && step > 10) {
      cur.pts.push_back(l_other);
      cur.to = (which == 1) ? "l2" : "l1";
      return cur;
    }
    if (std::abs(lam - tr.e1) < 0.02 * std::max(1.0, scale)) {
      cur.pts.push_back(tr.e1);
      cur.to = "+e";
      return cur;
    }
    if (std::abs(lam + tr.e1) < 0.02 * std::max(1.0, scale)) {
      cur.pts.push_back(-tr.e1);
      cur.to = "-e";
      return cur;
    }
    if (std::abs(lam) > tol.r_max) {
      cur.to = lam.imag() > 0 ? "+ioo" : "-ioo";
      return cur;
    }
  }
  fail(Err::TraceStall, "level curve did not reach an endpoint");
}

StokesGraph limit_graph(Real phi, const EllipticData& ell, const Tolerances& tol) {
  StokesGraph g;
  g.tp = turning_points(-1.0, phi, ell.A, ThetaParams{}, tol);
  for (int which : {1, 2})
    for (int ray = 0; ray < 3; ++ray) {
      StokesCurve c = trace_stokes(g.tp, which, ray, ell.A, ThetaParams{}, tol);
      std::string a = c.from, b = c.to;
      if (a > b) std::swap(a, b);
      g.adjacency.insert({a, b});
      g.curves.push_back(std::move(c));
    }
  return g;
}

std::set<std::pair<std::string, std::string>> expected_limit_adjacency(Real phi) {
  const Real phi_hat = std::remainder(phi, kPi);
  const long k = std::lround((phi - phi_hat) / kPi);
  const bool breve = (k % 2) != 0;
  const bool l1_up = (phi_hat > 0) != breve;
  std::set<std::pair<std::string, std::string>> adj;
  auto ins = [&](std::string a, std::string b) {
    if (a > b) std::swap(a, b);
    adj.insert({a, b});
  };
  ins("l1", "l2");
  ins("l1", "+e");
  ins("l2", "-e");
  ins("l1", l1_up ? "+ioo" : "-ioo");
  ins("l2", l1_up ? "-ioo" : "+ioo");
  return adj;
}

void write_stokes_svg(std::ostream& os, const StokesGraph& g) {
  const Real S = 160.0;
  auto X = [&](Cplx z) { return S * (z.real() + 2.0); };
  auto Y = [&](Cplx z) { return S * (2.0 - z.imag()); };  // Im axis up
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
        "viewBox=\"0 0 640 640\">\n";
  os << "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  os.precision(6);
  // cuts as double lines
  const Cplx e1 = expi(g.tp.phi);
  auto cutline = [&](Cplx a, Cplx b) {
    Cplx n = (b - a) / std::abs(b - a) * Cplx(0, 1) * 0.012;
    for (int s : {-1, 1}) {
      Cplx o = Real(s) * n;
      os << "<line x1=\"" << X(a + o) << "\" y1=\"" << Y(a + o) << "\" x2=\"" << X(b + o)
         << "\" y2=\"" << Y(b + o) << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    }
  };
  cutline(g.tp.lambda1, e1);
  cutline(g.tp.lambda2, -e1);
  for (const auto& c : g.curves) {
    os << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" d=\"M";
    for (std::size_t i = 0; i < c.pts.size(); ++i) {
      Cplx z = c.pts[i];
      if (std::abs(z.real()) > 2.2 || std::abs(z.imag()) > 2.2) break;
      os << (i ? " L" : "") << X(z) << ' ' << Y(z);
    }
    os << "\"/>\n";
  }
  auto dot = [&](Cplx z, const std::string& label) {
    os << "<circle cx=\"" << X(z) << "\" cy=\"" << Y(z)
       << "\" r=\"4\" fill=\"black\"/>\n";
    os << "<text x=\"" << X(z) + 7 << "\" y=\"" << Y(z) - 7
       << "\" font-size=\"16\" font-family=\"serif\">" << label << "</text>\n";
  };
  dot(g.tp.lambda1, "l1");
  dot(g.tp.lambda2, "l2");
  dot(e1, "+e");
  dot(-e1, "-e");
  os << "</svg>\n";
}

std::string adjacency_json(const StokesGraph& g) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& [a, b] : g.adjacency) {
    os << (first ? "" : ",") << "[\"" << a << "\",\"" << b << "\"]";
    first = false;
  }
  os << "]";
  return os.str();
}

}  // namespace pvell
