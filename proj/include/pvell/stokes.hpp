#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "pvell/config.hpp"
#include "pvell/elliptic.hpp"
#include "pvell/monodromy.hpp"
#include "pvell/types.hpp"

namespace pvell {

// The four zeros of the characteristic root: lambda_1/2 near +-e^{i phi}
// a_phi^{1/2}, lambda^0_1/2 near +-e^{i phi}; t <= 0 encodes t = infinity.
struct TurningPoints {
  Cplx lambda1, lambda2, lambda1_0, lambda2_0;
  Real t = 0;  // <= 0 means the infinite-t limit
  Real phi = 0;
};

// Characteristic root on the given sheet.  At t = infinity the limit
// expression; at finite t the exact quartic-over-denominator form, with the
// sign matched to the asymptotic normalization at lambda -> 0.
Cplx stokes_mu(Cplx lambda, Real t_or_inf, Real phi, Cplx a_phi, const ThetaParams& th,
               Sheet sheet = Sheet::upper, const Tolerances& tol = {});

TurningPoints turning_points(Real t_or_inf, Real phi, Cplx a_phi, const ThetaParams& th,
                             const Tolerances& tol = {});

struct StokesCurve {
  std::vector<Cplx> pts;
  std::string from;  // "l1" or "l2"
  std::string to;    // "l1", "l2", "+e", "-e", "+ioo", "-ioo", "stall"
  Real max_level_drift = 0;  // sup |Re int mu| along the trace
};

struct StokesGraph {
  TurningPoints tp;
  std::vector<StokesCurve> curves;
  std::set<std::pair<std::string, std::string>> adjacency;  // lexicographic pairs
};

// Trace one of the three level curves emanating from lambda1 (which = 1) or
// lambda2 (which = 2).
StokesCurve trace_stokes(const TurningPoints& tp, int which, int ray_index, Cplx a_phi,
                         const ThetaParams& th, const Tolerances& tol = {});

// All six curves of the infinite-t graph and their endpoint adjacency.
StokesGraph limit_graph(Real phi, const EllipticData& ell, const Tolerances& tol = {});

// Expected limit adjacency for the four sector families.
std::set<std::pair<std::string, std::string>> expected_limit_adjacency(Real phi);

void write_stokes_svg(std::ostream& os, const StokesGraph& g);
std::string adjacency_json(const StokesGraph& g);

}  // namespace pvell
