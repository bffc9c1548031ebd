#include "pvell/gauss.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace pvell {

namespace {

// Newton on the Legendre polynomial, standard node construction.
GaussRule make_rule(int n) {
  GaussRule g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    Real pp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      Real dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.x[i] = -x;
    g.x[n - 1 - i] = x;
    Real w = 2.0 / ((1.0 - x * x) * pp * pp);
    g.w[i] = w;
    g.w[n - 1 - i] = w;
  }
  return g;
}

std::map<int, GaussRule> cache;
std::mutex cache_mutex;

}  // namespace

const GaussRule& gauss_rule(int order) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
  return it->second;
}

namespace {

Cplx simpson(const std::function<Cplx(Real)>& f, Real a, Real m, Real b, Cplx fa, Cplx fm,
             Cplx fb, Cplx whole, Real tol, int depth) {
  Real lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  Cplx flm = f(lm), frm = f(rm);
  Cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  Cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  Cplx delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

Cplx adaptive_simpson(const std::function<Cplx(Real)>& f, Real a, Real b, Real tol,
                      int max_depth) {
  Real m = 0.5 * (a + b);
  Cplx fa = f(a), fm = f(m), fb = f(b);
  Cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace pvell
