#include "abrikosov/lattice_sums.hpp"

#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "abrikosov/errors.hpp"

namespace abrikosov {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

struct Kahan {
  Complex sum{0.0, 0.0};
  Complex carry{0.0, 0.0};
  void add(Complex v) {
    Complex y = v - carry;
    Complex t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// sum_{j >= start} e^{-c (j + off)^2}, ratio-bounded
double gaussian_tail(double c, int start, double off) {
  double x0 = double(start) + off;
  double t0 = std::exp(-c * x0 * x0);
  double rho = std::exp(-c * (2.0 * x0 + 1.0));
  if (rho >= 1.0) return HUGE_VAL;
  return t0 / (1.0 - rho);
}

// sum over all integers of e^{-c (m + alpha)^2}, worst case over |alpha| <= 1/2
double gaussian_theta_shifted(double c) {
  return 1.0 + 2.0 * gaussian_tail(c, 1, -0.5);
}

double gaussian_theta(double c) { return 1.0 + 2.0 * gaussian_tail(c, 1, 0.0); }

struct SumResult {
  Complex value;
  double abs_sum;
};

enum class Kind { q1, q01, q2 };

// One square shell max(|m|,|n|) = s of the requested sum, Kahan-accumulated.
// q1/q01 pair (m,n) with (-m,-n) so imaginary parts cancel at rounding level.
SumResult shell_sum(Kind kind, const ShapeParameter& tau, const Characteristic& chi, int s,
                    PhaseConvention conv) {
  const Complex t = tau.value();
  const double t2 = tau.im;
  const Complex q = chi.q(tau);
  const double sgn = (conv == PhaseConvention::bm_minus_an) ? -1.0 : 1.0;
  Kahan acc;
  double abs_sum = 0.0;
  auto term = [&](int m, int n) -> Complex {
    Complex w = Complex(double(n), 0.0) - double(m) * t;
    if (kind == Kind::q2) w += q;
    double g = -(kPi / t2) * std::norm(w);
    double phase = (kind == Kind::q01) ? 0.0 : 2.0 * kPi * (chi.b * m + sgn * chi.a * n);
    Complex v = std::exp(Complex(g, -phase));
    abs_sum += std::abs(v);
    return v;
  };
  if (s == 0) {
    acc.add(term(0, 0));
    return {acc.sum, abs_sum};
  }
  auto visit = [&](int m, int n) {
    if (kind == Kind::q2) {
      acc.add(term(m, n));
    } else {
      acc.add(term(m, n) + term(-m, -n));
    }
  };
  // representatives of the +- pairs on the shell boundary for q1/q01;
  // the full boundary for q2
  const bool full = (kind == Kind::q2);
  for (int n = -s; n <= s; ++n) {
    if (full) {
      visit(s, n);
      visit(-s, n);
    } else {
      visit(s, n);
    }
  }
  for (int m = -s + 1; m <= s - 1; ++m) {
    if (full) {
      visit(m, s);
      visit(m, -s);
    } else if (m > 0) {
      visit(m, s);
      visit(m, -s);
    } else if (m == 0) {
      visit(0, s);
    }
  }
  return {acc.sum, abs_sum};
}

SumResult summed(Kind kind, const ShapeParameter& tau, const Characteristic& chi, int radius,
                 PhaseConvention conv) {
  std::vector<SumResult> shells(radius + 1);
  for (int s = 0; s <= radius; ++s) shells[s] = shell_sum(kind, tau, chi, s, conv);
  Kahan acc;
  double abs_sum = 0.0;
  for (int s = radius; s >= 0; --s) {  // outer shells first: ascending magnitude
    acc.add(shells[s].value);
    abs_sum += shells[s].abs_sum;
  }
  return {acc.sum, abs_sum};
}

double float_headroom(double abs_sum) { return 8.0 * DBL_EPSILON * abs_sum; }

struct ReducedInput {
  ShapeParameter tau;
  Characteristic chi;
};

ReducedInput reduce_input(const ShapeParameter& tau, const Characteristic& chi) {
  if (is_reduced(tau)) return {tau, chi.wrapped()};
  ReductionResult red = reduce_to_fundamental_domain(tau);
  return {red.tau, transport_characteristic(red.g, chi)};
}

}  // namespace

int radius_cap() {
  if (const char* env = std::getenv("ABRIKOSOV_MAX_RADIUS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 64;
}

double tail_bound_q1(const ShapeParameter& tau, int radius) {
  // |n - m tau|^2 >= (n^2 + m^2)/2 on the fundamental domain
  const double c = kPi / (2.0 * tau.im);
  return 4.0 * gaussian_tail(c, radius + 1, 0.0) * gaussian_theta(c);
}

double tail_bound_q2(const ShapeParameter& tau, int radius) {
  // shifted lattice: |m + a|, |n + b| with centered (a, b)
  const double c = kPi / (2.0 * tau.im);
  return 4.0 * gaussian_tail(c, radius + 1, -0.5) * gaussian_theta_shifted(c);
}

int truncation_radius_for(double tol, const ShapeParameter& tau) {
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  ShapeParameter tr = is_reduced(tau) ? tau : reduce_to_fundamental_domain(tau).tau;
  const int cap = radius_cap();
  for (int n = 1; n <= cap; ++n) {
    if (std::max(tail_bound_q1(tr, n), tail_bound_q2(tr, n)) <= tol) return n;
  }
  throw ToleranceError("lattice-sum radius cap reached",
                       std::max(tail_bound_q1(tr, cap), tail_bound_q2(tr, cap)));
}

CertifiedValue<double> gamma_q1_at_radius(const ShapeParameter& tau, const Characteristic& chi,
                                          int radius, PhaseConvention conv) {
  SumResult r = summed(Kind::q1, tau, chi.wrapped(), radius, conv);
  return {r.value.real(), tail_bound_q1(tau, radius) + float_headroom(r.abs_sum), radius};
}

CertifiedValue<Complex> gamma_q2_at_radius(const ShapeParameter& tau, const Characteristic& chi,
                                           int radius, PhaseConvention conv) {
  SumResult r = summed(Kind::q2, tau, chi.wrapped(), radius, conv);
  return {r.value, tail_bound_q2(tau, radius) + float_headroom(r.abs_sum), radius};
}

CertifiedValue<double> gamma_01_at_radius(const ShapeParameter& tau, int radius) {
  SumResult r = summed(Kind::q01, tau, Characteristic{0.0, 0.0}, radius,
                       PhaseConvention::bm_minus_an);
  return {r.value.real(), tail_bound_q1(tau, radius) + float_headroom(r.abs_sum), radius};
}

CertifiedValue<double> gamma_q1(const ShapeParameter& tau, const Characteristic& chi, double tol,
                                PhaseConvention conv) {
  ReducedInput in = reduce_input(tau, chi);
  return gamma_q1_at_radius(in.tau, in.chi, truncation_radius_for(tol, in.tau), conv);
}

CertifiedValue<Complex> gamma_q2(const ShapeParameter& tau, const Characteristic& chi, double tol,
                                 PhaseConvention conv) {
  ReducedInput in = reduce_input(tau, chi);
  return gamma_q2_at_radius(in.tau, in.chi, truncation_radius_for(tol, in.tau), conv);
}

CertifiedValue<double> gamma_01(const ShapeParameter& tau, double tol) {
  ShapeParameter tr = is_reduced(tau) ? tau : reduce_to_fundamental_domain(tau).tau;
  return gamma_01_at_radius(tr, truncation_radius_for(tol, tr));
}

double gamma_q1_approximant(const ShapeParameter& tau, const Characteristic& chi) {
  const double t2 = tau.im, a = chi.a, b = chi.b;
  const double tt = tau.abs2();
  const double d1 = std::norm(Complex(1.0, 0.0) - tau.value());
  return 1.0 + 2.0 * (std::exp(-kPi / t2) * std::cos(2.0 * kPi * a) +
                      std::exp(-kPi * tt / t2) * std::cos(2.0 * kPi * b) +
                      std::exp(-kPi * d1 / t2) * std::cos(2.0 * kPi * (b - a)));
}

Complex gamma_q2_approximant(const ShapeParameter& tau, const Characteristic& chi) {
  const double t2 = tau.im, a = chi.a, b = chi.b;
  const Complex t = tau.value();
  const Complex q = chi.q(tau);
  const Complex I(0.0, 1.0);
  auto e = [&](Complex w, double ph) {
    return std::exp(Complex(-kPi * std::norm(w) / t2, 0.0) + 2.0 * kPi * I * ph);
  };
  return e(q, 0.0) + e(t - q, b) + e(t + q, -b) + e(1.0 + q, -a) + e(1.0 - q, a);
}

double gamma_01_approximant(const ShapeParameter& tau) {
  return gamma_q1_approximant(tau, Characteristic{0.0, 0.0});
}

}  // namespace abrikosov
