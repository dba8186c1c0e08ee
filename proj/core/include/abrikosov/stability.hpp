#ifndef ABRIKOSOV_STABILITY_HPP
#define ABRIKOSOV_STABILITY_HPP

#include <map>
#include <string>
#include <vector>

#include "abrikosov/lattice.hpp"
#include "abrikosov/lattice_sums.hpp"

namespace abrikosov {

/// gamma_k(tau) = 2 gamma_q1 + |gamma_q2| - gamma_01 with the remainder bound
/// composed as 2 r1 + r2 + r0.
struct GammaResult {
  CertifiedValue<double> gamma_k;
  ShapeParameter tau;   ///< reduced shape actually evaluated
  Characteristic chi;   ///< transported, centered characteristic
};

GammaResult gamma_k(const ShapeParameter& tau, const Characteristic& chi, double tol);

/// Plain value at fixed radius, no reduction or wrapping. Used by the
/// minimizer inner loop and by transport tests that need the raw sums.
double gamma_k_value_raw(const ShapeParameter& tau, const Characteristic& chi, int radius);

struct MultistartRecord {
  Characteristic start;
  Characteristic converged;
  double value = 0.0;
  int evaluations = 0;
  bool converged_ok = false;
};

/// Result of the Brillouin-zone minimization gamma(tau) = inf_k gamma_k(tau).
struct GammaMin {
  CertifiedValue<double> value;
  Characteristic argmin;                 ///< centered (a, b) coordinates
  std::vector<MultistartRecord> trace;   ///< one entry per multistart
};

/// Global minimum over the centered (a, b) cell: coarse 24x24 grid, then
/// Nelder-Mead polish from the best grid point plus multistarts at the
/// Wigner-Seitz vertices and half-lattice points.
GammaMin gamma(const ShapeParameter& tau, double tol);

/// Same minimum computed over the Wigner-Seitz cell in raw q coordinates
/// (the two domains tile each other; minima must agree within bounds).
GammaMin gamma_min_wigner_seitz(const ShapeParameter& tau, double tol);

/// Abrikosov constant beta(tau) = <|phi_0|^4> = gamma_01(tau); beta >= 1.
CertifiedValue<double> beta(const ShapeParameter& tau, double tol);

/// kappa_c(tau) = sqrt((1 - 1/beta)/2), in [0, 1/sqrt 2). Interval-propagated
/// from the certified beta; PrecisionError if the beta interval dips below 1.
CertifiedValue<double> kappa_c(const ShapeParameter& tau, double tol);

enum class Verdict { AsymptoticallyStable, EnergeticallyUnstable, OutsideRegime };

/// Classification of the lattice (tau, kappa, b): asymptotically stable iff
/// kappa^2 > 1/2 and gamma(tau) > 0 (with certified sign), energetically
/// unstable otherwise, and outside the perturbative regime when
/// |kappa^2 - b| / (kappa^2 [(2 kappa^2 - 1) beta + 1]) exceeds the threshold.
struct StabilityVerdict {
  Verdict verdict = Verdict::OutsideRegime;
  bool indeterminate = false;  ///< gamma sign not certifiable at the radius cap
  CertifiedValue<double> gamma_value;
  Characteristic argmin;
  double kappa_sq_minus_half = 0.0;
  double bcond_ratio = 0.0;
  CertifiedValue<double> beta_value;
  double kappa_c_value = 0.0;
};

StabilityVerdict classify(const ShapeParameter& tau, double kappa, double b_field, double tol,
                          double bcond_threshold = 0.1);

struct ResidualEntry {
  double residual = 0.0;
  double bound = 0.0;
  bool pass() const { return residual <= bound; }
};

/// Residuals of the exact identities gamma_k(tau+1) = gamma_k(-1/tau) =
/// gamma_{conj k}(-conj tau) = gamma_{-k} = gamma_{k + kappa_i} = gamma_k and
/// the SL(2,Z) covariance with transported k. Both sides certified; the bound
/// column is the combined remainder.
std::map<std::string, ResidualEntry> symmetry_residuals(const ShapeParameter& tau,
                                                        const Characteristic& chi, double tol,
                                                        unsigned seed = 0);

/// Central finite-difference gradients: of gamma_k in (a, b) at the four
/// half-lattice points, and of gamma(tau) in (Re, Im) at the given tau,
/// plus one-sided Re derivatives (cusp probe).
std::map<std::string, double> critical_point_residuals(const ShapeParameter& tau,
                                                       double step = 1e-3);

}  // namespace abrikosov

#endif
