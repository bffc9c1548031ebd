#pragma once

#include <complex>

namespace pvell {

using Real = double;
using Cplx = std::complex<double>;

inline constexpr Real kPi = 3.141592653589793238462643383279502884;
inline constexpr Cplx kImag{0.0, 1.0};

inline Cplx expi(Real phi) { return Cplx(std::cos(phi), std::sin(phi)); }

inline Real abs2(Cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

}  // namespace pvell
