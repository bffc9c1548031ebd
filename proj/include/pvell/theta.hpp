#pragma once

#include "pvell/config.hpp"
#include "pvell/types.hpp"

namespace pvell {

// theta(z, tau) = sum_n exp(pi i tau n^2 + 2 pi i z n), Im tau > 0.
// One-periodic in z; quasi-periodic under z -> z + tau.  `order` counts
// z-derivatives.  The public surface supports order 0..2; order 3 is used
// internally by the closed-form primitives.
Cplx theta(Cplx z, Cplx tau, int order = 0, const Tolerances& tol = {});

// theta'/theta.  Simple pole at the zeros of theta; throws NearThetaZero there.
Cplx theta_logderiv(Cplx z, Cplx tau, const Tolerances& tol = {});

// d^n/dz^n of theta'/theta for n = 0, 1, 2.
Cplx theta_logderiv_deriv(Cplx z, Cplx tau, int n, const Tolerances& tol = {});

namespace detail {
// All derivative orders 0..max_order at once, with z-reduction.  max_order <= 3.
void theta_all(Cplx z, Cplx tau, int max_order, Cplx out[4], const Tolerances& tol);
// Same at an already-reduced argument, no quasi-period multiplier.
void theta_series(Cplx z, Cplx tau, int max_order, Cplx out[4], const Tolerances& tol);
}  // namespace detail

// Half-integer characteristic thetas in the same period-1 convention
// (used by the Jacobi function quotients).  No argument reduction: the
// caller reduces into the fundamental cell first.
Cplx theta1(Cplx z, Cplx tau, const Tolerances& tol = {});
Cplx theta2(Cplx z, Cplx tau, const Tolerances& tol = {});
Cplx theta4(Cplx z, Cplx tau, const Tolerances& tol = {});

}  // namespace pvell
