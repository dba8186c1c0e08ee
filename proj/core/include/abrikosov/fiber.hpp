#ifndef ABRIKOSOV_FIBER_HPP
#define ABRIKOSOV_FIBER_HPP

#include <Eigen/Dense>
#include <vector>

#include "abrikosov/lattice.hpp"
#include "abrikosov/lattice_sums.hpp"
#include "abrikosov/theta.hpp"

namespace abrikosov {

/// Perturbation parameter
///   eps = sqrt((kappa^2 - b) / (kappa^2 [(2 kappa^2 - 1) beta + 1])).
/// Throws RegimeError when the radicand is negative (wrong side of the
/// existence condition) or the denominator vanishes.
double epsilon_of(double kappa, double b_field, double beta);

struct PerturbationParams {
  double kappa = 1.0;
  double b_field = 1.0;
  double beta = 1.0;
  double epsilon = 0.0;
  double lambda1 = 0.0;  ///< [1/2 + (kappa^2 - 1/2) beta] <|phi_0|^2>
};

PerturbationParams make_perturbation(double kappa, double b_field, double beta);

/// Periodic correction field a^1 (complexified alpha = a_1 - i a_2) solving
///   i dbar a^1 = (<|phi_0|^2> - |phi_0|^2)/2,  zero cell mean,
/// via the closed-form Fourier coefficients of |phi_0|^2.
class A1Field {
public:
  A1Field(const ShapeParameter& tau, int shell_cutoff);

  Complex eval(Complex x) const;        ///< a^1(x)
  Complex dbar_eval(Complex x) const;   ///< dbar a^1(x)
  Complex laplace_eval(Complex x) const;///< Delta a^1(x)
  /// coefficient of e^{2 pi i (p u1 + n u2)}; zero mode is exactly 0
  Complex coefficient(int p, int n) const;
  int shell_cutoff() const { return shells_; }
  const ShapeParameter& tau() const { return tau_; }

private:
  struct Mode {
    int p, n;
    Complex t_std;  ///< dual vector omega i (n - p tau) as a complex number
    Complex coeff;
  };
  ShapeParameter tau_;
  double omega_;
  int shells_;
  std::vector<Mode> modes_;
};

inline A1Field a1_fourier(const ShapeParameter& tau, int shell_cutoff) {
  return A1Field(tau, shell_cutoff);
}

/// Second-order Feshbach-Schur block on the two Landau zero modes:
///   (kappa^2 - 1/2) [[2A - beta, B], [conj B, 2A - beta]] + delta_{k,0} I,
/// A = <|phi_0|^2 |phi_k|^2>, B = <phi_0^2 conj(phi_k) conj(phi_-k)>,
/// entries assembled from certified lattice sums.
struct F2Matrix {
  Eigen::Matrix2cd mat;
  double entry_bound = 0.0;
  bool k_is_zero = false;
};

F2Matrix f2_matrix(const ShapeParameter& tau, const Characteristic& chi, double kappa, double tol);

/// Leading eigenvalue pair mu_{tau kappa k +-} = (kappa^2 - 1/2){2A +- |B| - beta}
/// + delta_{k,0}. The labels follow the eigenvector branches (sorted for
/// kappa^2 >= 1/2), so mu_plus = (kappa^2 - 1/2) gamma_k + delta_{k,0} always.
struct MuPair {
  double minus = 0.0;
  double plus = 0.0;
  double bound = 0.0;
  bool k_is_zero = false;
};

MuPair mu_pm(const ShapeParameter& tau, const Characteristic& chi, double kappa, double tol);

/// Leading-order smallest Hessian eigenvalue mu(omega, kappa)
///   = b (kappa^2 - 1/2) gamma(tau) eps^2.
double mu_star(const ShapeParameter& tau, double kappa, double b_field, double tol);

/// Feshbach-Schur map F_P(lambda) = P H P - P H Pb (Pb H Pb - lambda)^{-1} Pb H P
/// restricted to Ran P, in the basis given by the orthonormal columns of
/// `p_basis`. Throws InvertibilityError when the complement block is singular
/// at lambda. Isospectrality: lambda in sigma(H) iff lambda in sigma(F_P(lambda)).
Eigen::MatrixXcd feshbach_map(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& p_basis,
                              double lambda);

/// Recover the `count` lowest eigenvalues of H below the complement block's
/// spectrum by fixed-point iteration of the Feshbach map.
std::vector<double> feshbach_recover_eigenvalues(const Eigen::MatrixXcd& H,
                                                 const Eigen::MatrixXcd& p_basis, int count,
                                                 double tol = 1e-13);

/// Eigenvector lift Q(lambda) phi = P phi - Pb (Pb H Pb - lambda)^{-1} Pb H P phi,
/// mapping an F-kernel vector (coordinates in the p_basis) to an H eigenvector.
Eigen::VectorXcd feshbach_lift(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& p_basis,
                               double lambda, const Eigen::VectorXcd& phi);

/// Truncated basis for the fiber operator K_k: Landau levels (c*)^n phi_k,
/// n = 0..landau_levels, in the two order-parameter slots, and plane waves
/// e^{i(k + t*) x} over dual-lattice shells max(|n1|,|n2|) <= fourier_shells
/// in the two field slots.
struct GalerkinBasis {
  int landau_levels = 6;
  int fourier_shells = 3;
  int grid_n = 64;  ///< cell quadrature resolution for matrix elements

  int plane_waves() const { return (2 * fourier_shells + 1) * (2 * fourier_shells + 1); }
  int dim() const { return 2 * (landau_levels + 1) + 2 * plane_waves(); }
};

struct GalerkinSpectrum {
  Eigen::VectorXd eigenvalues;  ///< sorted ascending, full truncated fiber matrix
  double lambda_minus = 0.0;    ///< Landau-branch pair (largest Null K0 overlap)
  double lambda_plus = 0.0;
  double f1_max_abs = 0.0;      ///< max |<v0_i, W1 v0_j>| (must vanish)
  double gram_residual = 0.0;   ///< basis orthonormality defect under quadrature
};

/// Assemble K(eps) = K0 + eps W1 + eps^2 W2 in the truncated basis and
/// diagonalize. At eps = 0 the matrix is diagonal with entries
/// {2n} u {|k + t*|^2} (each doubled). The two Landau-branch eigenvalues
/// behave as eps^2 mu_{tau kappa k -+} + O(eps^3).
GalerkinSpectrum galerkin_fiber_spectrum(const ShapeParameter& tau, const Characteristic& chi,
                                         double kappa, double eps, const GalerkinBasis& basis);

}  // namespace abrikosov

#endif
