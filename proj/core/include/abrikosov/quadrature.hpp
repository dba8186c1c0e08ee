#ifndef ABRIKOSOV_QUADRATURE_HPP
#define ABRIKOSOV_QUADRATURE_HPP

#include "abrikosov/lattice.hpp"
#include "abrikosov/theta.hpp"

namespace abrikosov {

/// Tensor-trapezoid grid on the unit square (u1, u2) -> z = u1 + u2 tau.
/// All integrands are smooth and doubly periodic, so the equal-weight rule
/// converges spectrally; evaluation doubles the resolution until the
/// grid-doubling difference falls below `tol` (QuadratureError past `max_n`).
struct QuadratureGrid {
  int n = 32;
  int max_n = 512;
  double tol = 1e-10;
};

/// <|phi_0|^2 |phi_q|^2> over the cell, both factors normalized to unit mean
/// square by the quadrature itself (independent of the c0 convention).
double avg_abs2_abs2(const ShapeParameter& tau, const Characteristic& chi,
                     const QuadratureGrid& grid, const ThetaSeriesParams& params);

/// <phi_0^2 conj(phi_q) conj(phi_-q)> over the cell, normalized as above.
Complex avg_cross(const ShapeParameter& tau, const Characteristic& chi,
                  const QuadratureGrid& grid, const ThetaSeriesParams& params);

/// <|phi_0|^4> over the cell (the Abrikosov constant), normalized as above.
double avg_abs4(const ShapeParameter& tau, const QuadratureGrid& grid,
                const ThetaSeriesParams& params);

}  // namespace abrikosov

#endif
