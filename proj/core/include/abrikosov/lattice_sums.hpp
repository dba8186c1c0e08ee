#ifndef ABRIKOSOV_LATTICE_SUMS_HPP
#define ABRIKOSOV_LATTICE_SUMS_HPP

#include "abrikosov/lattice.hpp"

namespace abrikosov {

/// A numeric result with a rigorous truncation-remainder bound:
/// |value - exact| <= remainder_bound, monotone non-increasing in the radius.
template <typename T>
struct CertifiedValue {
  T value{};
  double remainder_bound = 0.0;
  int truncation_radius = 0;
};

/// Sign convention of the oscillatory factor in the gamma sums. The appendix
/// prints both cos 2pi(bm - an) and cos 2pi(bm + na); the quadrature oracle
/// pins `bm_minus_an` as the one matching the cell averages.
enum class PhaseConvention { bm_minus_an, bm_plus_an };

/// Hard cap on the summation radius (default 64, overridden by the
/// ABRIKOSOV_MAX_RADIUS environment variable).
int radius_cap();

/// Smallest shell radius N whose certified tail bound (worst case over the
/// three sums, any centered characteristic) meets `tol` at reduced tau.
/// Throws ToleranceError when the cap is insufficient.
int truncation_radius_for(double tol, const ShapeParameter& tau);

/// Certified tail bounds at shell radius N for reduced tau. The q2 bound
/// dominates and is the one used for radius selection.
double tail_bound_q1(const ShapeParameter& tau, int radius);
double tail_bound_q2(const ShapeParameter& tau, int radius);

/// gamma_q1(tau) = sum_{m,n} e^{-(pi/t2)|n - m tau|^2} cos[2pi(bm - an)].
/// Unreduced tau is reduced first and the characteristic transported.
CertifiedValue<double> gamma_q1(const ShapeParameter& tau, const Characteristic& chi, double tol,
                                PhaseConvention conv = PhaseConvention::bm_minus_an);

/// gamma_q2(tau) = sum_{m,n} e^{-(pi/t2)|n - m tau + q|^2 - 2 pi i [bm - an]}.
CertifiedValue<Complex> gamma_q2(const ShapeParameter& tau, const Characteristic& chi, double tol,
                                 PhaseConvention conv = PhaseConvention::bm_minus_an);

/// gamma_01(tau) = sum_{m,n} e^{-(pi/t2)|n - m tau|^2}  (= beta(tau)).
CertifiedValue<double> gamma_01(const ShapeParameter& tau, double tol);

/// Fixed-radius truncations with their certified bounds (no tolerance check);
/// used by the enclosure/refinement tests. Require reduced tau.
CertifiedValue<double> gamma_q1_at_radius(const ShapeParameter& tau, const Characteristic& chi,
                                          int radius,
                                          PhaseConvention conv = PhaseConvention::bm_minus_an);
CertifiedValue<Complex> gamma_q2_at_radius(const ShapeParameter& tau, const Characteristic& chi,
                                           int radius,
                                           PhaseConvention conv = PhaseConvention::bm_minus_an);
CertifiedValue<double> gamma_01_at_radius(const ShapeParameter& tau, int radius);

/// The few-term approximants of the appendix (third q1 term carried with the
/// sign consistent with the exact series; the printed form has a sign typo).
double gamma_q1_approximant(const ShapeParameter& tau, const Characteristic& chi);
Complex gamma_q2_approximant(const ShapeParameter& tau, const Characteristic& chi);
double gamma_01_approximant(const ShapeParameter& tau);

}  // namespace abrikosov

#endif
