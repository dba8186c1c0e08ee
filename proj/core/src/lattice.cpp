#include "abrikosov/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abrikosov {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double wrap_centered(double x) {
  double y = x - std::ceil(x - 0.5);
  // guard against -0.5 from rounding noise at the open boundary
  if (y <= -0.5) y += 1.0;
  return y;
}

bool is_reduced(const ShapeParameter& tau) {
  return tau.im > 0.0 && tau.abs2() >= 1.0 && tau.re > -0.5 && tau.re <= 0.5;
}

Complex SL2Z::mobius(Complex tau) const {
  return (double(a) * tau + double(b)) / (double(c) * tau + double(d));
}

SL2Z SL2Z::times(const SL2Z& r) const {
  return {a * r.a + b * r.c, a * r.b + b * r.d, c * r.a + d * r.c, c * r.b + d * r.d};
}

ReductionResult reduce_to_fundamental_domain(const ShapeParameter& tau0) {
  if (!(tau0.im > 0.0)) throw std::domain_error("shape parameter requires Im tau > 0");
  Complex tau = tau0.value();
  SL2Z g = SL2Z::identity();
  for (int iter = 0; iter < 128; ++iter) {
    double n = std::ceil(tau.real() - 0.5);  // shift into (-1/2, 1/2]
    if (n != 0.0) {
      tau -= n;
      g = SL2Z::translation(-std::int64_t(n)).times(g);
    }
    if (std::norm(tau) < 1.0) {
      tau = -1.0 / tau;
      g = SL2Z::inversion().times(g);
      continue;
    }
    break;
  }
  // on the unit circle prefer Re tau >= 0
  if (std::norm(tau) == 1.0 && tau.real() < 0.0) {
    tau = -1.0 / tau;
    g = SL2Z::inversion().times(g);
    double n = std::ceil(tau.real() - 0.5);
    if (n != 0.0) {
      tau -= n;
      g = SL2Z::translation(-std::int64_t(n)).times(g);
    }
  }
  return {ShapeParameter(tau), g};
}

double LatticeFrame::cell_area() const {
  return std::abs(std::imag(std::conj(nu1) * nu2));
}

LatticeFrame frame(const ShapeParameter& tau) {
  if (!(tau.im > 0.0)) throw std::domain_error("shape parameter requires Im tau > 0");
  LatticeFrame f;
  f.omega = std::sqrt(kTwoPi / tau.im);
  f.nu1 = Complex(f.omega, 0.0);
  f.nu2 = f.omega * tau.value();
  f.kappa1 = Complex(0.0, f.omega);
  f.kappa2 = -Complex(0.0, f.omega) * tau.value();
  return f;
}

Complex Characteristic::k(const ShapeParameter& tau) const {
  double omega = std::sqrt(kTwoPi / tau.im);
  return Complex(0.0, omega) * q(tau);
}

Characteristic Characteristic::wrapped() const {
  return {wrap_centered(a), wrap_centered(b)};
}

bool Characteristic::is_zero(double tol) const {
  Characteristic w = wrapped();
  return std::abs(w.a) <= tol && std::abs(w.b) <= tol;
}

Characteristic characteristic_from_q(Complex q, const ShapeParameter& tau) {
  double a = -q.imag() / tau.im;
  double b = q.real() + a * tau.re;
  return Characteristic{a, b}.wrapped();
}

Characteristic transport_characteristic(const SL2Z& g, const Characteristic& chi) {
  double a = double(g.d) * chi.a + double(g.c) * chi.b;
  double b = double(g.b) * chi.a + double(g.a) * chi.b;
  return Characteristic{a, b}.wrapped();
}

std::vector<WignerSeitzVertex> wigner_seitz_vertices(const ShapeParameter& tau) {
  const Complex t = tau.value();
  // candidate neighbors of 0 in the q-space dual lattice Z + tau Z
  std::vector<Complex> nbrs;
  for (int m = -2; m <= 2; ++m)
    for (int n = -2; n <= 2; ++n)
      if (m != 0 || n != 0) nbrs.push_back(double(n) + double(m) * t);

  const double tol = 1e-9;
  std::vector<Complex> verts;
  for (size_t i = 0; i < nbrs.size(); ++i) {
    for (size_t j = i + 1; j < nbrs.size(); ++j) {
      // intersect the bisectors 2 x.p = |p|^2 of nbrs[i], nbrs[j]
      const Complex p = nbrs[i], r = nbrs[j];
      double det = p.real() * r.imag() - p.imag() * r.real();
      if (std::abs(det) < 1e-12) continue;
      double rhs1 = 0.5 * std::norm(p), rhs2 = 0.5 * std::norm(r);
      double x = (rhs1 * r.imag() - rhs2 * p.imag()) / det;
      double y = (rhs2 * p.real() - rhs1 * r.real()) / det;
      Complex v(x, y);
      bool inside = true;
      for (const Complex& s : nbrs) {
        if (2.0 * (v.real() * s.real() + v.imag() * s.imag()) > std::norm(s) + tol) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      bool dup = false;
      for (const Complex& w : verts)
        if (std::abs(w - v) < tol) {
          dup = true;
          break;
        }
      if (!dup) verts.push_back(v);
    }
  }
  std::sort(verts.begin(), verts.end(), [](Complex l, Complex r) {
    return std::atan2(l.imag(), l.real()) < std::atan2(r.imag(), r.real());
  });
  std::vector<WignerSeitzVertex> out;
  out.reserve(verts.size());
  for (const Complex& v : verts) out.push_back({v, characteristic_from_q(v, tau)});
  return out;
}

std::array<Characteristic, 4> half_lattice_points() {
  return {Characteristic{0.0, 0.0}, Characteristic{0.5, 0.0}, Characteristic{0.0, 0.5},
          Characteristic{0.5, 0.5}};
}

}  // namespace abrikosov
