#ifndef SECTORLAB_SIMPLEX_HPP
#define SECTORLAB_SIMPLEX_HPP

#include <optional>
#include <vector>

#include "sectorlab/numerics.hpp"

namespace sectorlab {

// Dense two-phase simplex for small LPs in standard form:
//
//     minimize c·x   subject to   A x = b,  x >= 0.
//
// Bland's rule throughout, so the solver never cycles and the chosen vertex
// is a deterministic function of the input.
struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  RealVector x;
  double objective = 0.0;
  // For unbounded problems: a feasible ray direction along which the
  // objective decreases without bound.
  RealVector ray;
};

LpResult solve_lp(const RealMatrix& a, const RealVector& b,
                  const RealVector& c, double feas_tol);

// Feasibility of A x = b, x >= 0: phase one only.
std::optional<RealVector> lp_feasible_point(const RealMatrix& a,
                                            const RealVector& b,
                                            double feas_tol);

}  // namespace sectorlab

#endif  // SECTORLAB_SIMPLEX_HPP
