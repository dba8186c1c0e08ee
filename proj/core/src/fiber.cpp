#include "abrikosov/fiber.hpp"

#include <cmath>
#include <stdexcept>

#include "abrikosov/errors.hpp"
#include "abrikosov/stability.hpp"

namespace abrikosov {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
const Complex kI(0.0, 1.0);
}  // namespace

double epsilon_of(double kappa, double b_field, double beta) {
  const double k2 = kappa * kappa;
  const double denom = k2 * ((2.0 * k2 - 1.0) * beta + 1.0);
  if (denom == 0.0) throw RegimeError("epsilon denominator vanishes");
  const double rad = (k2 - b_field) / denom;
  if (rad < 0.0)
    throw RegimeError("negative radicand: (kappa, b) on the wrong side of the existence condition");
  return std::sqrt(rad);
}

PerturbationParams make_perturbation(double kappa, double b_field, double beta) {
  PerturbationParams p;
  p.kappa = kappa;
  p.b_field = b_field;
  p.beta = beta;
  p.epsilon = epsilon_of(kappa, b_field, beta);
  p.lambda1 = 0.5 + (kappa * kappa - 0.5) * beta;
  return p;
}

A1Field::A1Field(const ShapeParameter& tau, int shell_cutoff) : tau_(tau), shells_(shell_cutoff) {
  if (shell_cutoff < 1) throw std::invalid_argument("a1 shell cutoff must be >= 1");
  ShapeParameter tr = is_reduced(tau) ? tau : reduce_to_fundamental_domain(tau).tau;
  tau_ = tr;
  omega_ = std::sqrt(2.0 * kPi / tau_.im);
  const Complex t = tau_.value();
  const double t2 = tau_.im;
  for (int p = -shells_; p <= shells_; ++p) {
    for (int n = -shells_; n <= shells_; ++n) {
      if (p == 0 && n == 0) continue;  // zero mean enforced
      // c_{pn}(|phi_0|^2) = (-1)^{np} e^{-pi |n - p tau|^2 / (2 t2)}
      double cpn = ((n * p) % 2 == 0 ? 1.0 : -1.0) *
                   std::exp(-kPi * std::norm(Complex(double(n), 0.0) - double(p) * t) / (2.0 * t2));
      Complex t_std = omega_ * kI * (Complex(double(n), 0.0) - double(p) * t);
      modes_.push_back({p, n, t_std, 0.5 * cpn / t_std});
    }
  }
}

Complex A1Field::coefficient(int p, int n) const {
  for (const Mode& m : modes_)
    if (m.p == p && m.n == n) return m.coeff;
  return {0.0, 0.0};
}

Complex A1Field::eval(Complex x) const {
  const Complex z = x / omega_;
  const double u2 = z.imag() / tau_.im;
  const double u1 = z.real() - u2 * tau_.re;
  Complex acc(0.0, 0.0);
  for (const Mode& m : modes_)
    acc += m.coeff * std::exp(2.0 * kPi * kI * (double(m.p) * u1 + double(m.n) * u2));
  return acc;
}

Complex A1Field::dbar_eval(Complex x) const {
  const Complex z = x / omega_;
  const double u2 = z.imag() / tau_.im;
  const double u1 = z.real() - u2 * tau_.re;
  Complex acc(0.0, 0.0);
  for (const Mode& m : modes_)
    acc += m.coeff * (kI * m.t_std) *
           std::exp(2.0 * kPi * kI * (double(m.p) * u1 + double(m.n) * u2));
  return acc;
}

Complex A1Field::laplace_eval(Complex x) const {
  const Complex z = x / omega_;
  const double u2 = z.imag() / tau_.im;
  const double u1 = z.real() - u2 * tau_.re;
  Complex acc(0.0, 0.0);
  for (const Mode& m : modes_)
    acc += m.coeff * (-std::norm(m.t_std)) *
           std::exp(2.0 * kPi * kI * (double(m.p) * u1 + double(m.n) * u2));
  return acc;
}

F2Matrix f2_matrix(const ShapeParameter& tau, const Characteristic& chi, double kappa,
                   double tol) {
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  GammaResult base = gamma_k(tau, chi, tol);  // reduces and transports once
  const ShapeParameter tr = base.tau;
  const Characteristic c = base.chi;
  CertifiedValue<double> A = gamma_q1(tr, c, tol);
  CertifiedValue<Complex> g2 = gamma_q2(tr, c, tol);
  CertifiedValue<double> b0 = gamma_01(tr, tol);
  // B = <phi_0^2 conj(phi_k) conj(phi_-k)> = e^{2 pi i a b} conj(gamma_q2)
  Complex B = std::exp(2.0 * kPi * kI * c.a * c.b) * std::conj(g2.value);
  const double pref = kappa * kappa - 0.5;
  F2Matrix out;
  out.k_is_zero = c.is_zero();
  double diag = pref * (2.0 * A.value - b0.value) + (out.k_is_zero ? 1.0 : 0.0);
  out.mat << Complex(diag, 0.0), pref * B, pref * std::conj(B), Complex(diag, 0.0);
  out.entry_bound =
      std::abs(pref) * (2.0 * A.remainder_bound + g2.remainder_bound + b0.remainder_bound);
  return out;
}

MuPair mu_pm(const ShapeParameter& tau, const Characteristic& chi, double kappa, double tol) {
  GammaResult base = gamma_k(tau, chi, tol);
  const ShapeParameter tr = base.tau;
  const Characteristic c = base.chi;
  CertifiedValue<double> A = gamma_q1(tr, c, tol);
  CertifiedValue<Complex> g2 = gamma_q2(tr, c, tol);
  CertifiedValue<double> b0 = gamma_01(tr, tol);
  const double pref = kappa * kappa - 0.5;
  MuPair out;
  out.k_is_zero = c.is_zero();
  const double delta = out.k_is_zero ? 1.0 : 0.0;
  out.plus = pref * (2.0 * A.value + std::abs(g2.value) - b0.value) + delta;
  out.minus = pref * (2.0 * A.value - std::abs(g2.value) - b0.value) + delta;
  out.bound =
      std::abs(pref) * (2.0 * A.remainder_bound + g2.remainder_bound + b0.remainder_bound);
  return out;
}

double mu_star(const ShapeParameter& tau, double kappa, double b_field, double tol) {
  CertifiedValue<double> b = beta(tau, tol);
  double eps = epsilon_of(kappa, b_field, b.value);
  GammaMin g = gamma(tau, tol);
  return b_field * (kappa * kappa - 0.5) * g.value.value * eps * eps;
}

namespace {

Eigen::MatrixXcd complement_basis(const Eigen::MatrixXcd& p_basis) {
  const auto n = p_basis.rows(), r = p_basis.cols();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(p_basis);
  Eigen::MatrixXcd Q = qr.householderQ();
  return Q.rightCols(n - r);
}

}  // namespace

Eigen::MatrixXcd feshbach_map(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& p_basis,
                              double lambda) {
  const Eigen::MatrixXcd Pb = complement_basis(p_basis);
  const Eigen::MatrixXcd Hpp = p_basis.adjoint() * H * p_basis;
  const Eigen::MatrixXcd Hpc = p_basis.adjoint() * H * Pb;
  const Eigen::MatrixXcd Hcc = Pb.adjoint() * H * Pb;
  Eigen::MatrixXcd shifted =
      Hcc - lambda * Eigen::MatrixXcd::Identity(Hcc.rows(), Hcc.cols());
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(shifted);
  if (!lu.isInvertible())
    throw InvertibilityError("complement block singular at the requested spectral parameter");
  return Hpp - Hpc * lu.solve(Hpc.adjoint());
}

std::vector<double> feshbach_recover_eigenvalues(const Eigen::MatrixXcd& H,
                                                 const Eigen::MatrixXcd& p_basis, int count,
                                                 double tol) {
  const int r = int(p_basis.cols());
  count = std::min(count, r);
  std::vector<double> out;
  for (int branch = 0; branch < count; ++branch) {
    double lambda = 0.0;
    {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(feshbach_map(H, p_basis, 0.0));
      lambda = es.eigenvalues()(branch);
    }
    for (int it = 0; it < 200; ++it) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(feshbach_map(H, p_basis, lambda));
      double next = es.eigenvalues()(branch);
      if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) {
        lambda = next;
        break;
      }
      lambda = next;
    }
    out.push_back(lambda);
  }
  return out;
}

Eigen::VectorXcd feshbach_lift(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& p_basis,
                               double lambda, const Eigen::VectorXcd& phi) {
  const Eigen::MatrixXcd Pb = complement_basis(p_basis);
  const Eigen::MatrixXcd Hcc = Pb.adjoint() * H * Pb;
  Eigen::MatrixXcd shifted =
      Hcc - lambda * Eigen::MatrixXcd::Identity(Hcc.rows(), Hcc.cols());
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(shifted);
  if (!lu.isInvertible())
    throw InvertibilityError("complement block singular at the requested spectral parameter");
  Eigen::VectorXcd x = p_basis * phi;
  return x - Pb * lu.solve(Pb.adjoint() * (H * x));
}

// ---------------------------------------------------------------------------
// Galerkin assembly
// ---------------------------------------------------------------------------

namespace {

// (c*)^n acting on the theta family, represented as sums
//   H_n(z, w) = sum_{j,l} C[j][l] w^j theta^{(l)}(z),  w = conj(z) - z,
// with c* = -(2/omega)(d_z - d_w) + omega w on this representation.
std::vector<std::vector<std::vector<double>>> ladder_coefficients(int n_max, double omega) {
  std::vector<std::vector<std::vector<double>>> out;
  std::vector<std::vector<double>> cur(1, std::vector<double>(1, 1.0));
  out.push_back(cur);
  for (int n = 0; n < n_max; ++n) {
    std::vector<std::vector<double>> nxt(n + 2, std::vector<double>(n + 2, 0.0));
    for (int j = 0; j <= n; ++j) {
      for (int l = 0; l <= n; ++l) {
        double v = cur[j][l];
        if (v == 0.0) continue;
        nxt[j][l + 1] += -(2.0 / omega) * v;
        if (j >= 1) nxt[j - 1][l] += (2.0 / omega) * double(j) * v;
        nxt[j + 1][l] += omega * v;
      }
    }
    out.push_back(nxt);
    cur = std::move(nxt);
  }
  return out;
}

struct CellGrid {
  int n;
  std::vector<Complex> z;  // z = u1 + u2 tau, row-major over (i, j)
  std::vector<Complex> x;  // omega z
};

CellGrid make_grid(const ShapeParameter& tau, double omega, int n) {
  CellGrid g;
  g.n = n;
  g.z.resize(size_t(n) * n);
  g.x.resize(size_t(n) * n);
  const Complex t = tau.value();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex z = double(i) / n + double(j) / n * t;
      g.z[size_t(i) * n + j] = z;
      g.x[size_t(i) * n + j] = omega * z;
    }
  return g;
}

using GridFn = std::vector<Complex>;

Complex inner(const GridFn& a, const GridFn& b) {
  Complex acc(0.0, 0.0);
  for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc / double(a.size());
}

// evaluate the ladder family (c*)^n fam_chi for n = 0..n_max on the grid
std::vector<GridFn> ladder_family(const CellGrid& grid, const ShapeParameter& tau,
                                  const Characteristic& chi_family, int n_max,
                                  const ThetaSeriesParams& params, double omega) {
  auto coef = ladder_coefficients(n_max, omega);
  const double t2 = tau.im;
  std::vector<GridFn> fam(n_max + 1, GridFn(grid.z.size()));
  for (size_t idx = 0; idx < grid.z.size(); ++idx) {
    const Complex z = grid.z[idx];
    auto th = theta_q_derivs(z, tau, chi_family, n_max, params);
    const Complex gauss = std::exp(kPi / (2.0 * t2) * (z * z - std::norm(z)));
    const Complex w = std::conj(z) - z;
    std::vector<Complex> wpow(n_max + 2, Complex(1.0, 0.0));
    for (int j = 1; j <= n_max + 1; ++j) wpow[j] = wpow[j - 1] * w;
    for (int n = 0; n <= n_max; ++n) {
      Complex acc(0.0, 0.0);
      for (int j = 0; j <= n; ++j)
        for (int l = 0; l <= n; ++l)
          if (coef[n][j][l] != 0.0) acc += coef[n][j][l] * wpow[j] * th[l];
      fam[n][idx] = gauss * acc;
    }
  }
  return fam;
}

}  // namespace

GalerkinSpectrum galerkin_fiber_spectrum(const ShapeParameter& tau, const Characteristic& chi,
                                         double kappa, double eps, const GalerkinBasis& basis) {
  if (basis.landau_levels < 4 || basis.fourier_shells < 2)
    throw std::invalid_argument("galerkin basis requires >= 4 Landau levels and >= 2 dual shells");
  if (eps * eps > 0.1 + 1e-12)
    throw RegimeError("eps^2 exceeds the perturbative window (b-condition ratio 0.1)");

  ShapeParameter tr = tau;
  Characteristic c = chi.wrapped();
  if (!is_reduced(tau)) {
    ReductionResult red = reduce_to_fundamental_domain(tau);
    tr = red.tau;
    c = transport_characteristic(red.g, chi);
  }
  const double omega = std::sqrt(2.0 * kPi / tr.im);
  const Complex t = tr.value();
  const int NL = basis.landau_levels;
  const int S = basis.fourier_shells;
  const ThetaSeriesParams params = ThetaSeriesParams::for_cell(tr, 1e-13);
  const CellGrid grid = make_grid(tr, omega, basis.grid_n);

  // slot-1 family: the phi_k ladder = theta family at -chi (public momentum k);
  // slot-2: conjugates of the theta family at +chi (the phi_{-k} ladder).
  auto famA = ladder_family(grid, tr, c.negated(), NL + 1, params, omega);
  auto famB = ladder_family(grid, tr, c, NL + 1, params, omega);
  auto fam0 = ladder_family(grid, tr, Characteristic{0.0, 0.0}, 1, params, omega);

  auto norm_of = [](const GridFn& f) {
    double acc = 0.0;
    for (Complex v : f) acc += std::norm(v);
    return std::sqrt(acc / double(f.size()));
  };
  std::vector<double> nA(NL + 2), nB(NL + 2);
  for (int n = 0; n <= NL + 1; ++n) {
    nA[n] = norm_of(famA[n]);
    nB[n] = norm_of(famB[n]);
  }
  const double n0 = norm_of(fam0[0]);

  GridFn phi0(grid.z.size()), Dphi0(grid.z.size());
  for (size_t i = 0; i < grid.z.size(); ++i) {
    phi0[i] = fam0[0][i] / n0;
    Dphi0[i] = -fam0[1][i] / n0;  // d_{a0} phi_0 = -c* phi_0
  }
  double beta_quad = 0.0;
  for (Complex v : phi0) beta_quad += std::norm(v) * std::norm(v);
  beta_quad /= double(phi0.size());
  const double lambda1 = 0.5 + (kappa * kappa - 0.5) * beta_quad;

  const A1Field a1(tr, std::max(6, S + 2));
  GridFn a1g(grid.z.size()), a1gc(grid.z.size());
  for (size_t i = 0; i < grid.z.size(); ++i) {
    a1g[i] = a1.eval(grid.x[i]);
    a1gc[i] = std::conj(a1g[i]);
  }

  // plane waves e^{i (k + t*) x}
  const Complex k_std = omega * kI * c.q(tr);
  struct Wave {
    double k2;
    GridFn f;
  };
  std::vector<Wave> waves;
  waves.reserve(basis.plane_waves());
  for (int n1 = -S; n1 <= S; ++n1) {
    for (int n2 = -S; n2 <= S; ++n2) {
      Complex kc = k_std + omega * kI * (Complex(double(n1), 0.0) - double(n2) * t);
      Wave w;
      w.k2 = std::norm(kc);
      w.f.resize(grid.z.size());
      for (size_t i = 0; i < grid.z.size(); ++i) {
        Complex x = grid.x[i];
        w.f[i] = std::exp(kI * (kc.real() * x.real() + kc.imag() * x.imag()));
      }
      waves.push_back(std::move(w));
    }
  }
  const int npw = int(waves.size());
  const int dim = 2 * (NL + 1) + 2 * npw;

  auto i1 = [&](int n) { return n; };
  auto i2 = [&](int n) { return NL + 1 + n; };
  auto i3 = [&](int j) { return 2 * (NL + 1) + j; };
  auto i4 = [&](int j) { return 2 * (NL + 1) + npw + j; };

  // normalized slot bases and their covariant derivatives
  std::vector<GridFn> fA(NL + 1), s2(NL + 1);
  for (int n = 0; n <= NL; ++n) {
    fA[n].resize(grid.z.size());
    s2[n].resize(grid.z.size());
    for (size_t i = 0; i < grid.z.size(); ++i) {
      fA[n][i] = famA[n][i] / nA[n];
      s2[n][i] = std::conj(famB[n][i] / nB[n]);
    }
  }
  auto dA = [&](int n) {  // d_{a0} on normalized famA member n
    GridFn g(grid.z.size());
    for (size_t i = 0; i < grid.z.size(); ++i) g[i] = -famA[n + 1][i] / nA[n];
    return g;
  };
  auto dstarA = [&](int n) {  // d*_{a0} = -c
    GridFn g(grid.z.size(), Complex(0.0, 0.0));
    if (n == 0) return g;
    for (size_t i = 0; i < grid.z.size(); ++i) g[i] = -2.0 * double(n) * famA[n - 1][i] / nA[n];
    return g;
  };
  auto dB = [&](int n) {
    GridFn g(grid.z.size());
    for (size_t i = 0; i < grid.z.size(); ++i) g[i] = -famB[n + 1][i] / nB[n];
    return g;
  };
  auto dstarB = [&](int n) {
    GridFn g(grid.z.size(), Complex(0.0, 0.0));
    if (n == 0) return g;
    for (size_t i = 0; i < grid.z.size(); ++i) g[i] = -2.0 * double(n) * famB[n - 1][i] / nB[n];
    return g;
  };

  Eigen::VectorXd K0d(dim);
  for (int n = 0; n <= NL; ++n) {
    K0d(i1(n)) = 2.0 * n;
    K0d(i2(n)) = 2.0 * n;
  }
  for (int j = 0; j < npw; ++j) {
    K0d(i3(j)) = waves[j].k2;
    K0d(i4(j)) = waves[j].k2;
  }

  Eigen::MatrixXcd W1 = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd W2 = Eigen::MatrixXcd::Zero(dim, dim);

  GridFn tmp(grid.z.size());
  for (int n = 0; n <= NL; ++n) {
    for (int j = 0; j < npw; ++j) {
      // (1,4) block: i (d phi_0) acting on the omega-slot
      for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = kI * Dphi0[i] * waves[j].f[i];
      W1(i1(n), i4(j)) = inner(fA[n], tmp);
      W1(i4(j), i1(n)) = std::conj(W1(i1(n), i4(j)));
      // (2,3) block: -i conj(d phi_0) acting on the alpha-slot
      for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = -kI * std::conj(Dphi0[i]) * waves[j].f[i];
      W1(i2(n), i3(j)) = inner(s2[n], tmp);
      W1(i3(j), i2(n)) = std::conj(W1(i2(n), i3(j)));
    }
  }

  const double pref22 = 2.0 * kappa * kappa + 0.5;
  const double prefod = kappa * kappa - 0.5;
  for (int m = 0; m <= NL; ++m) {
    for (int n = 0; n <= NL; ++n) {
      // B0 f = (2k^2 + 1/2)|phi_0|^2 f - i a1 (d* f) + i conj(a1) (d f) - lambda1 f
      GridFn dn = dA(n), dsn = dstarA(n);
      for (size_t i = 0; i < tmp.size(); ++i)
        tmp[i] = pref22 * std::norm(phi0[i]) * fA[n][i] - kI * a1g[i] * dsn[i] +
                 kI * a1gc[i] * dn[i] - lambda1 * fA[n][i];
      W2(i1(m), i1(n)) = inner(fA[m], tmp);
      // conj(B0) on slot 2: apply B0 to the unconjugated famB member, conjugate
      GridFn dnB = dB(n), dsnB = dstarB(n);
      for (size_t i = 0; i < tmp.size(); ++i) {
        Complex gB = famB[n][i] / nB[n];
        Complex b0g = pref22 * std::norm(phi0[i]) * gB - kI * a1g[i] * dsnB[i] +
                      kI * a1gc[i] * dnB[i] - lambda1 * gB;
        tmp[i] = std::conj(b0g);
      }
      W2(i2(m), i2(n)) = inner(s2[m], tmp);
      // off-diagonal (kappa^2 - 1/2) phi_0^2 coupling
      for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = prefod * phi0[i] * phi0[i] * s2[n][i];
      W2(i1(m), i2(n)) = inner(fA[m], tmp);
      for (size_t i = 0; i < tmp.size(); ++i)
        tmp[i] = prefod * std::conj(phi0[i] * phi0[i]) * fA[n][i];
      W2(i2(m), i1(n)) = inner(s2[m], tmp);
    }
  }
  for (int jm = 0; jm < npw; ++jm) {
    for (int jn = 0; jn < npw; ++jn) {
      for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = std::norm(phi0[i]) * waves[jn].f[i];
      Complex v = inner(waves[jm].f, tmp);
      W2(i3(jm), i3(jn)) = v;
      W2(i4(jm), i4(jn)) = v;
    }
  }

  GalerkinSpectrum out;
  out.f1_max_abs = std::max({std::abs(W1(i1(0), i1(0))), std::abs(W1(i1(0), i2(0))),
                             std::abs(W1(i2(0), i1(0))), std::abs(W1(i2(0), i2(0)))});
  {
    double g = 0.0;
    for (int m = 0; m <= NL; ++m)
      for (int n = 0; n <= NL; ++n) {
        double d = (m == n) ? 1.0 : 0.0;
        g = std::max(g, std::abs(inner(fA[m], fA[n]) - d));
        g = std::max(g, std::abs(inner(s2[m], s2[n]) - d));
      }
    out.gram_residual = g;
  }

  Eigen::MatrixXcd K = eps * W1 + eps * eps * W2;
  K += K0d.cast<Complex>().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((K + K.adjoint()) / 2.0);
  out.eigenvalues = es.eigenvalues();

  // Landau-branch pair: the two eigenvectors with the largest weight on the
  // Null K0 coordinates (v0 pair)
  const Eigen::MatrixXcd& V = es.eigenvectors();
  std::vector<std::pair<double, int>> weights;
  for (int col = 0; col < dim; ++col) {
    double w = std::norm(V(i1(0), col)) + std::norm(V(i2(0), col));
    weights.push_back({w, col});
  }
  std::sort(weights.begin(), weights.end(),
            [](const auto& l, const auto& r) { return l.first > r.first; });
  double e0 = out.eigenvalues(weights[0].second);
  double e1 = out.eigenvalues(weights[1].second);
  out.lambda_minus = std::min(e0, e1);
  out.lambda_plus = std::max(e0, e1);
  return out;
}

}  // namespace abrikosov
