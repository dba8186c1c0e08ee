#ifndef ABRIKOSOV_LATTICE_HPP
#define ABRIKOSOV_LATTICE_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace abrikosov {

using Complex = std::complex<double>;

/// Lattice shape parameter: a point tau = re + i*im in the upper half-plane.
/// Equivalence classes of planar lattices under rotation and dilation
/// correspond to points of the SL(2,Z) fundamental domain
/// { |tau| >= 1, -1/2 < Re tau <= 1/2 }.
struct ShapeParameter {
  double re = 0.0;
  double im = 1.0;

  ShapeParameter() = default;
  ShapeParameter(double re_, double im_) : re(re_), im(im_) {}
  explicit ShapeParameter(Complex tau) : re(tau.real()), im(tau.imag()) {}

  Complex value() const { return {re, im}; }
  double abs2() const { return re * re + im * im; }
};

bool is_reduced(const ShapeParameter& tau);

/// Element of SL(2,Z) acting on the half-plane by Mobius transformations
/// tau -> (a*tau + b)/(c*tau + d).
struct SL2Z {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  Complex mobius(Complex tau) const;
  SL2Z times(const SL2Z& rhs) const;
  SL2Z inverse() const { return {d, -b, -c, a}; }
  std::int64_t det() const { return a * d - b * c; }

  static SL2Z identity() { return {}; }
  static SL2Z translation(std::int64_t n) { return {1, n, 0, 1}; }
  static SL2Z inversion() { return {0, -1, 1, 0}; }
};

struct ReductionResult {
  ShapeParameter tau;  ///< reduced shape, |tau| >= 1, -1/2 < Re tau <= 1/2
  SL2Z g;              ///< g.mobius(input) == tau
};

/// Gauss reduction to the fundamental domain, alternating T: tau -> tau +- 1
/// and S: tau -> -1/tau. Boundary ties resolve to Re tau = +1/2 and, on
/// |tau| = 1, to Re tau >= 0. Throws std::domain_error for Im tau <= 0.
ReductionResult reduce_to_fundamental_domain(const ShapeParameter& tau);

/// Normalized lattice data for L_tau = omega (Z + tau Z), omega = sqrt(2pi/Im tau).
/// The fundamental cell has area exactly 2pi; the dual lattice is i*L_tau with
/// generators kappa1 = omega*i, kappa2 = -omega*i*tau.
struct LatticeFrame {
  double omega;
  Complex nu1, nu2;        ///< direct generators (omega, omega*tau)
  Complex kappa1, kappa2;  ///< dual generators (omega*i, -omega*i*tau)

  double cell_area() const;
};

LatticeFrame frame(const ShapeParameter& tau);

/// Bloch-fiber label. (a, b) live in the centered cell (-1/2, 1/2]^2; the
/// derived quantities are q = b - a*tau and k = sqrt(2pi/Im tau) * i * q.
struct Characteristic {
  double a = 0.0;
  double b = 0.0;

  Characteristic() = default;
  Characteristic(double a_, double b_) : a(a_), b(b_) {}

  Complex q(const ShapeParameter& tau) const { return Complex(b, 0.0) - a * tau.value(); }
  Complex k(const ShapeParameter& tau) const;
  Characteristic negated() const { return {-a, -b}; }
  /// Wrap both components into (-1/2, 1/2].
  Characteristic wrapped() const;
  bool is_zero(double tol = 1e-12) const;
};

/// Recover the centered characteristic labeling a given q = b - a*tau.
Characteristic characteristic_from_q(Complex q, const ShapeParameter& tau);

/// Transport of a characteristic under reduction tau_r = g(tau): the value of
/// gamma_k is preserved, gamma_{(a,b)}(tau) = gamma_{transport(g,(a,b))}(tau_r).
Characteristic transport_characteristic(const SL2Z& g, const Characteristic& chi);

/// One vertex of the Wigner-Seitz (Brillouin) cell, in q coordinates, together
/// with its centered characteristic label (the label wraps q by a dual-lattice
/// vector when the literal vertex falls outside the centered cell).
struct WignerSeitzVertex {
  Complex q;
  Characteristic chi;
};

/// Vertex set of the Voronoi cell of the dual lattice about the origin,
/// expressed in q coordinates (where the dual lattice is Z + tau Z).
/// 4 vertices for rectangular lattices, 6 otherwise. Requires reduced tau.
std::vector<WignerSeitzVertex> wigner_seitz_vertices(const ShapeParameter& tau);

/// The four half-lattice points {(0,0), (1/2,0), (0,1/2), (1/2,1/2)}; these
/// are critical points of gamma_k in k.
std::array<Characteristic, 4> half_lattice_points();

/// Wrap a scalar into (-1/2, 1/2].
double wrap_centered(double x);

}  // namespace abrikosov

#endif
