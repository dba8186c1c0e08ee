#include "abrikosov/theta.hpp"

#include <cmath>
#include <stdexcept>

#include "abrikosov/errors.hpp"

namespace abrikosov {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
const Complex kI(0.0, 1.0);

struct ReducedPoint {
  Complex z0;      // z - p - r*tau, inside the centered cell
  long p = 0, r = 0;
};

ReducedPoint reduce_point(Complex z, Complex tau) {
  ReducedPoint rp;
  double r = std::nearbyint(z.imag() / tau.imag());
  double p = std::nearbyint(z.real() - r * tau.real());
  rp.r = long(r);
  rp.p = long(p);
  rp.z0 = z - p - r * tau;
  return rp;
}

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * double(n - k + i) / double(i);
  return v;
}

}  // namespace

double theta_tail_bound(const ShapeParameter& tau, int m_max) {
  // terms of the reduced series: |e^{2 pi i q m + i pi m^2 tau + 2 pi i m z0}|
  //   <= e^{-pi t2 m^2 + 2 pi w m},  w = |Im q| + |Im z0| <= t2/2 + t2/2 = t2
  // prefactor modulus <= e^{pi |a| t2 + ...} <= e^{pi t2} over the cell.
  const double t2 = tau.im;
  const double w = t2;  // worst case over centered chi and centered z0
  const int M = m_max;
  double log_t = -kPi * t2 * double(M + 1) * double(M + 1) + 2.0 * kPi * w * double(M + 1);
  double log_rho = -kPi * t2 * double(2 * M + 3) + 2.0 * kPi * w;
  if (log_rho >= 0.0) return HUGE_VAL;
  double tail = std::exp(log_t) / (1.0 - std::exp(log_rho));
  double prefactor = std::exp(kPi * t2);
  return 2.0 * prefactor * tail;
}

ThetaSeriesParams ThetaSeriesParams::for_cell(const ShapeParameter& tau, double tol) {
  if (!(tau.im > 0.0)) throw std::domain_error("theta series requires Im tau > 0");
  for (int m = 2; m <= 512; ++m) {
    double b = theta_tail_bound(tau, m);
    if (b <= tol) return {m, tol};
  }
  throw ToleranceError("theta series half-width exceeds cap 512", theta_tail_bound(tau, 512));
}

std::vector<Complex> theta_q_derivs(Complex z, const ShapeParameter& tau,
                                    const Characteristic& chi, int order,
                                    const ThetaSeriesParams& params) {
  const double bound = theta_tail_bound(tau, params.m_max);
  if (!(bound <= params.target_tol))
    throw ToleranceError("theta truncation cannot meet tolerance at given m_max", bound);

  const Complex t = tau.value();
  const double a = chi.a, b = chi.b;
  const Complex q = chi.q(tau);
  const ReducedPoint rp = reduce_point(z, t);
  const Complex z0 = rp.z0;

  // derivatives of the bare sum S(z0) = sum_m e^{2 pi i q m + i pi m^2 tau + 2 pi i m z0}
  std::vector<Complex> S(order + 1, Complex(0.0, 0.0));
  for (int m = -params.m_max; m <= params.m_max; ++m) {
    Complex e = std::exp(2.0 * kPi * kI * q * double(m) + kPi * kI * double(m) * double(m) * t +
                         2.0 * kPi * kI * double(m) * z0);
    Complex fac(1.0, 0.0);
    const Complex dm = 2.0 * kPi * kI * double(m);
    for (int s = 0; s <= order; ++s) {
      S[s] += fac * e;
      fac *= dm;
    }
  }

  // theta^{(l)}(z0) = e^{P(z0)} sum_s C(l,s) P'^{l-s} S^{(s)},  P' = -2 pi i a
  const Complex P = kPi * kI * (a * a * t - 2.0 * a * b - 2.0 * a * z0);
  const Complex Pp = -2.0 * kPi * kI * a;
  std::vector<Complex> th(order + 1);
  const Complex eP = std::exp(P);
  for (int l = 0; l <= order; ++l) {
    Complex acc(0.0, 0.0);
    Complex pw(1.0, 0.0);
    for (int s = l; s >= 0; --s) {
      acc += binom(l, s) * pw * S[s];
      pw *= Pp;
    }
    th[l] = eP * acc;
  }

  // compose with the quasi-periodicity factor of the reduction
  //   theta(z) = C e^{-2 pi i r z0} theta(z0),  C = e^{-2 pi i(ap + br) - i pi r^2 tau}
  const double p = double(rp.p), r = double(rp.r);
  const Complex C =
      std::exp(-2.0 * kPi * kI * (a * p + b * r) - kPi * kI * r * r * t - 2.0 * kPi * kI * r * z0);
  const Complex Rp = -2.0 * kPi * kI * r;
  std::vector<Complex> out(order + 1);
  for (int j = 0; j <= order; ++j) {
    Complex acc(0.0, 0.0);
    Complex pw(1.0, 0.0);
    for (int l = j; l >= 0; --l) {
      acc += binom(j, l) * pw * th[l];
      pw *= Rp;
    }
    out[j] = C * acc;
  }
  return out;
}

Complex theta_q(Complex z, const ShapeParameter& tau, const Characteristic& chi,
                const ThetaSeriesParams& params) {
  return theta_q_derivs(z, tau, chi, 0, params)[0];
}

Complex varphi_q(Complex z, const ShapeParameter& tau, const Characteristic& chi,
                 const ThetaSeriesParams& params) {
  const double t2 = tau.im;
  Complex g = kPi / (2.0 * t2) * (z * z - std::norm(z));
  return std::exp(g) * theta_q(z, tau, chi, params);
}

double c0_closed_form(const ShapeParameter& tau) {
  return std::pow(2.0 * tau.im, 0.25);
}

NormalizedCellFunction::NormalizedCellFunction(const ShapeParameter& tau,
                                               const Characteristic& chi,
                                               const ThetaSeriesParams& params)
    : tau_(tau), chi_(chi), params_(params), c0_(c0_closed_form(tau)) {
  omega_ = std::sqrt(2.0 * kPi / tau.im);
}

Complex NormalizedCellFunction::operator()(Complex x) const {
  Complex z = x / omega_;
  return c0_ * varphi_q(z, tau_, chi_.negated(), params_);
}

double annihilator_residual(const ShapeParameter& tau, const Characteristic& chi,
                            const ThetaSeriesParams& params, int grid_n) {
  NormalizedCellFunction phi(tau, chi, params);
  const double omega = phi.omega();
  const Complex t = tau.value();
  // c phi = (2/omega) d/dzbar[gaussian] * (c0 theta) + (x/2) phi; the first
  // factor equals -(pi/(omega t2)) z and must cancel the symbol term
  const double gauss_coef = -kPi / (omega * tau.im);
  double max_phi = 0.0, max_res = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      double u1 = (i + 0.31) / grid_n, u2 = (j + 0.47) / grid_n;
      Complex z = u1 + u2 * t;
      Complex x = omega * z;
      Complex v = phi(x);
      Complex cphi = gauss_coef * z * v + 0.5 * x * v;
      max_phi = std::max(max_phi, std::abs(v));
      max_res = std::max(max_res, std::abs(cphi));
    }
  }
  return max_res / max_phi;
}

}  // namespace abrikosov
