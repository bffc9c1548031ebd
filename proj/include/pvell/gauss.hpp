#pragma once

#include <functional>
#include <vector>

#include "pvell/types.hpp"

namespace pvell {

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussRule {
  std::vector<Real> x;
  std::vector<Real> w;
};

const GaussRule& gauss_rule(int order);

// \int_a^b f over a real interval, single panel.
template <typename F>
auto gauss_quad(F&& f, Real a, Real b, int order = 32) -> decltype(f(Real{})) {
  const GaussRule& g = gauss_rule(order);
  decltype(f(Real{})) s{};
  const Real mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(mid + half * g.x[i]);
  return half * s;
}

// Composite rule with geometric panels accumulating toward one endpoint,
// for integrands with an endpoint feature of small scale.
template <typename F>
auto graded_quad(F&& f, Real a, Real b, bool toward_a, int panels = 14, int order = 32,
                 Real ratio = 0.5) -> decltype(f(Real{})) {
  std::vector<Real> edges;
  edges.push_back(b);
  Real t = 1.0;
  for (int i = 0; i < panels - 1; ++i) {
    t *= ratio;
    edges.push_back(a + (b - a) * t);
  }
  edges.push_back(a);
  decltype(f(Real{})) s{};
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Real lo = edges[i + 1], hi = edges[i];
    if (!toward_a) {
      Real nlo = a + b - hi, nhi = a + b - lo;
      lo = nlo;
      hi = nhi;
    }
    s += gauss_quad(f, lo, hi, order);
  }
  return s;
}

// Adaptive Simpson on a real parameter interval, complex values.
Cplx adaptive_simpson(const std::function<Cplx(Real)>& f, Real a, Real b, Real tol,
                      int max_depth = 28);

}  // namespace pvell
