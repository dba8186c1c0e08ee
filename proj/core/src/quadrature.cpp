#include "abrikosov/quadrature.hpp"

#include <cmath>
#include <vector>

#include "abrikosov/errors.hpp"

namespace abrikosov {

namespace {

std::vector<Complex> varphi_grid(const ShapeParameter& tau, const Characteristic& chi, int n,
                                 const ThetaSeriesParams& params) {
  std::vector<Complex> out(size_t(n) * n);
  const Complex t = tau.value();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex z = double(i) / n + double(j) / n * t;
      out[size_t(i) * n + j] = varphi_q(z, tau, chi, params);
    }
  }
  return out;
}

template <typename F>
auto doubled_until_converged(const QuadratureGrid& grid, F&& eval) {
  using R = decltype(eval(16));
  int n = std::max(grid.n, 16);
  R prev = eval(n);
  while (2 * n <= grid.max_n) {
    n *= 2;
    R cur = eval(n);
    if (std::abs(cur - prev) <= grid.tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw QuadratureError("cell quadrature did not settle below the maximum grid");
}

}  // namespace

double avg_abs2_abs2(const ShapeParameter& tau, const Characteristic& chi,
                     const QuadratureGrid& grid, const ThetaSeriesParams& params) {
  auto eval = [&](int n) -> double {
    auto p0 = varphi_grid(tau, Characteristic{0.0, 0.0}, n, params);
    auto pq = varphi_grid(tau, chi, n, params);
    double n0 = 0.0, nq = 0.0, acc = 0.0;
    for (size_t i = 0; i < p0.size(); ++i) {
      double a0 = std::norm(p0[i]), aq = std::norm(pq[i]);
      n0 += a0;
      nq += aq;
      acc += a0 * aq;
    }
    double cnt = double(p0.size());
    return (acc / cnt) / ((n0 / cnt) * (nq / cnt));
  };
  return doubled_until_converged(grid, eval);
}

Complex avg_cross(const ShapeParameter& tau, const Characteristic& chi,
                  const QuadratureGrid& grid, const ThetaSeriesParams& params) {
  auto eval = [&](int n) -> Complex {
    auto p0 = varphi_grid(tau, Characteristic{0.0, 0.0}, n, params);
    auto pq = varphi_grid(tau, chi, n, params);
    auto pm = varphi_grid(tau, chi.negated(), n, params);
    double n0 = 0.0, nq = 0.0, nm = 0.0;
    Complex acc(0.0, 0.0);
    for (size_t i = 0; i < p0.size(); ++i) {
      n0 += std::norm(p0[i]);
      nq += std::norm(pq[i]);
      nm += std::norm(pm[i]);
      acc += p0[i] * p0[i] * std::conj(pq[i]) * std::conj(pm[i]);
    }
    double cnt = double(p0.size());
    return (acc / cnt) / ((n0 / cnt) * std::sqrt((nq / cnt) * (nm / cnt)));
  };
  return doubled_until_converged(grid, eval);
}

double avg_abs4(const ShapeParameter& tau, const QuadratureGrid& grid,
                const ThetaSeriesParams& params) {
  auto eval = [&](int n) -> double {
    auto p0 = varphi_grid(tau, Characteristic{0.0, 0.0}, n, params);
    double n0 = 0.0, acc = 0.0;
    for (size_t i = 0; i < p0.size(); ++i) {
      double a0 = std::norm(p0[i]);
      n0 += a0;
      acc += a0 * a0;
    }
    double cnt = double(p0.size());
    return (acc / cnt) / ((n0 / cnt) * (n0 / cnt));
  };
  return doubled_until_converged(grid, eval);
}

}  // namespace abrikosov
