#ifndef ABRIKOSOV_THETA_HPP
#define ABRIKOSOV_THETA_HPP

#include <vector>

#include "abrikosov/lattice.hpp"

namespace abrikosov {

/// Truncation control for the theta series. `m_max` is the half-width of the
/// summation index; the neglected tail, bounded by a geometric-Gaussian
/// estimate, stays below `target_tol` for every z in the closed fundamental
/// cell (evaluation reduces z to the centered cell first).
struct ThetaSeriesParams {
  int m_max = 16;
  double target_tol = 1e-12;

  /// Smallest m_max whose certified tail bound meets `tol` for the given
  /// shape, uniformly over characteristics in the centered cell.
  static ThetaSeriesParams for_cell(const ShapeParameter& tau, double tol = 1e-12);
};

/// Rigorous bound on the neglected tail of the theta series at half-width M,
/// uniform over the centered cell (|Im z| <= Im tau / 2, |a| <= 1/2).
double theta_tail_bound(const ShapeParameter& tau, int m_max);

/// Theta function with real characteristic (a, b), q = b - a*tau:
///   theta_q(z, tau) = e^{i pi (a^2 tau - 2ab - 2az)} sum_m e^{2 pi i q m + i pi m^2 tau + 2 pi i m z}.
/// The evaluation point is reduced modulo Z + tau Z and the quasi-periodicity
/// factor reapplied, so the truncation error is uniform in z.
Complex theta_q(Complex z, const ShapeParameter& tau, const Characteristic& chi,
                const ThetaSeriesParams& params);

/// d^j/dz^j theta_q for j = 0..order, same reduction scheme.
std::vector<Complex> theta_q_derivs(Complex z, const ShapeParameter& tau,
                                    const Characteristic& chi, int order,
                                    const ThetaSeriesParams& params);

/// Unnormalized cell function vphi_q(z) = e^{(pi/2 Im tau)(z^2 - |z|^2)} theta_q(z, tau).
/// Its |.|^2 is Z + tau Z periodic. Used by the quadrature oracle, which does
/// its own normalization.
Complex varphi_q(Complex z, const ShapeParameter& tau, const Characteristic& chi,
                 const ThetaSeriesParams& params);

/// Closed-form normalization constant: <|phi_k|^2> = 1 forces c0 = (2 Im tau)^{1/4},
/// independent of the characteristic (zero Fourier mode of |vphi_q|^2).
double c0_closed_form(const ShapeParameter& tau);

/// Normalized lowest-Landau-level Bloch function phi_k on the physical lattice
/// L_tau, with x identified with x1 + i x2 and z = x / omega.
///
/// Satisfies phi(x+s) = e^{i s^x/2} e^{i k.s} phi(x) for s in L_tau with
/// k = sqrt(2pi/Im tau) i q, and c phi = 0 for the annihilator
/// c = d_x1 + i d_x2 + (x1 + i x2)/2. The theta family with characteristic chi
/// carries Bloch momentum -omega*i*q, so this wrapper evaluates the family at
/// -chi to make the public label match the quasi-periodicity law.
class NormalizedCellFunction {
public:
  NormalizedCellFunction(const ShapeParameter& tau, const Characteristic& chi,
                         const ThetaSeriesParams& params);

  Complex operator()(Complex x) const;

  const ShapeParameter& tau() const { return tau_; }
  const Characteristic& chi() const { return chi_; }
  double c0() const { return c0_; }
  double omega() const { return omega_; }
  Complex bloch_momentum() const { return chi_.k(tau_); }
  const ThetaSeriesParams& params() const { return params_; }

private:
  ShapeParameter tau_;
  Characteristic chi_;
  ThetaSeriesParams params_;
  double c0_;
  double omega_;
};

inline Complex phi_k(Complex x, const ShapeParameter& tau, const Characteristic& chi,
                     const ThetaSeriesParams& params) {
  return NormalizedCellFunction(tau, chi, params)(x);
}

/// max over a test grid of |c phi_k| / max |phi_k|, with the annihilator applied
/// by analytic differentiation. Certifies the gauge sign convention: the wrong
/// sign of the symbol term gives an O(1) residual.
double annihilator_residual(const ShapeParameter& tau, const Characteristic& chi,
                            const ThetaSeriesParams& params, int grid_n = 24);

}  // namespace abrikosov

#endif
