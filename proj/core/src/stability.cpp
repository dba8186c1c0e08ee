#include "abrikosov/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "abrikosov/errors.hpp"

namespace abrikosov {

namespace {

struct NelderMeadResult {
  double x0 = 0.0, x1 = 0.0;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(double, double)>& f, double x0, double x1,
                             double scale, int max_iter = 400) {
  struct Pt {
    double x[2];
    double v;
  };
  int evals = 0;
  auto eval = [&](double a, double b) {
    ++evals;
    return f(a, b);
  };
  std::array<Pt, 3> s;
  s[0] = {{x0, x1}, eval(x0, x1)};
  s[1] = {{x0 + scale, x1}, eval(x0 + scale, x1)};
  s[2] = {{x0, x1 + scale}, eval(x0, x1 + scale)};
  auto order = [&] { std::sort(s.begin(), s.end(), [](const Pt& l, const Pt& r) { return l.v < r.v; }); };
  order();
  bool ok = false;
  for (int it = 0; it < max_iter; ++it) {
    double diam = std::max(std::hypot(s[1].x[0] - s[0].x[0], s[1].x[1] - s[0].x[1]),
                           std::hypot(s[2].x[0] - s[0].x[0], s[2].x[1] - s[0].x[1]));
    if (diam < 1e-10 && std::abs(s[2].v - s[0].v) < 1e-13) {
      ok = true;
      break;
    }
    double c0 = 0.5 * (s[0].x[0] + s[1].x[0]);
    double c1 = 0.5 * (s[0].x[1] + s[1].x[1]);
    double r0 = c0 + (c0 - s[2].x[0]), r1 = c1 + (c1 - s[2].x[1]);
    double fr = eval(r0, r1);
    if (fr < s[0].v) {
      double e0 = c0 + 2.0 * (c0 - s[2].x[0]), e1 = c1 + 2.0 * (c1 - s[2].x[1]);
      double fe = eval(e0, e1);
      s[2] = (fe < fr) ? Pt{{e0, e1}, fe} : Pt{{r0, r1}, fr};
    } else if (fr < s[1].v) {
      s[2] = {{r0, r1}, fr};
    } else {
      double k0 = c0 + 0.5 * (s[2].x[0] - c0), k1 = c1 + 0.5 * (s[2].x[1] - c1);
      double fk = eval(k0, k1);
      if (fk < s[2].v) {
        s[2] = {{k0, k1}, fk};
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].x[0] = s[0].x[0] + 0.5 * (s[i].x[0] - s[0].x[0]);
          s[i].x[1] = s[0].x[1] + 0.5 * (s[i].x[1] - s[0].x[1]);
          s[i].v = eval(s[i].x[0], s[i].x[1]);
        }
      }
    }
    order();
  }
  return {s[0].x[0], s[0].x[1], s[0].v, evals, ok};
}

GammaMin minimize_over(const ShapeParameter& tau_red, double tol,
                       const std::vector<Characteristic>& extra_starts, bool grid_scan,
                       const std::function<double(double, double)>& objective,
                       const std::function<Characteristic(double, double)>& to_chi) {
  std::vector<MultistartRecord> trace;
  std::vector<std::pair<double, double>> starts;

  if (grid_scan) {
    double best = HUGE_VAL;
    std::pair<double, double> bp{0.0, 0.0};
    const int g = 24;
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) {
        double a = -0.5 + (i + 0.5) / g, b = -0.5 + (j + 0.5) / g;
        double v = objective(a, b);
        if (v < best) {
          best = v;
          bp = {a, b};
        }
      }
    }
    starts.push_back(bp);
  }
  for (const Characteristic& c : extra_starts) starts.push_back({c.a, c.b});

  bool any_ok = false;
  double best = HUGE_VAL;
  std::pair<double, double> argmin{0.0, 0.0};
  for (auto [sa, sb] : starts) {
    NelderMeadResult r = nelder_mead(objective, sa, sb, 0.02);
    MultistartRecord rec;
    rec.start = Characteristic{sa, sb};
    rec.converged = to_chi(r.x0, r.x1);
    rec.value = r.value;
    rec.evaluations = r.evaluations;
    rec.converged_ok = r.converged;
    trace.push_back(rec);
    any_ok = any_ok || r.converged;
    if (r.value < best) {
      best = r.value;
      argmin = {r.x0, r.x1};
    }
  }
  if (!any_ok) {
    std::ostringstream os;
    for (const auto& r : trace)
      os << "start (" << r.start.a << ", " << r.start.b << ") -> " << r.value << " in "
         << r.evaluations << " evals" << (r.converged_ok ? "" : " [not converged]") << "\n";
    throw ConvergenceError("Brillouin-zone minimization did not converge from any start", os.str());
  }

  Characteristic chi_min = to_chi(argmin.first, argmin.second);
  GammaResult final = gamma_k(tau_red, chi_min, tol);
  return {final.gamma_k, final.chi, std::move(trace)};
}

}  // namespace

double gamma_k_value_raw(const ShapeParameter& tau, const Characteristic& chi, int radius) {
  CertifiedValue<double> g1 = gamma_q1_at_radius(tau, chi, radius);
  CertifiedValue<Complex> g2 = gamma_q2_at_radius(tau, chi, radius);
  CertifiedValue<double> g0 = gamma_01_at_radius(tau, radius);
  return 2.0 * g1.value + std::abs(g2.value) - g0.value;
}

GammaResult gamma_k(const ShapeParameter& tau, const Characteristic& chi, double tol) {
  ShapeParameter tr = tau;
  Characteristic c = chi.wrapped();
  if (!is_reduced(tau)) {
    ReductionResult red = reduce_to_fundamental_domain(tau);
    tr = red.tau;
    c = transport_characteristic(red.g, chi);
  }
  CertifiedValue<double> g1 = gamma_q1(tr, c, tol);
  CertifiedValue<Complex> g2 = gamma_q2(tr, c, tol);
  CertifiedValue<double> g0 = gamma_01(tr, tol);
  CertifiedValue<double> out;
  out.value = 2.0 * g1.value + std::abs(g2.value) - g0.value;
  out.remainder_bound = 2.0 * g1.remainder_bound + g2.remainder_bound + g0.remainder_bound;
  out.truncation_radius = std::max({g1.truncation_radius, g2.truncation_radius, g0.truncation_radius});
  return {out, tr, c};
}

GammaMin gamma(const ShapeParameter& tau, double tol) {
  ShapeParameter tr = is_reduced(tau) ? tau : reduce_to_fundamental_domain(tau).tau;
  const int radius = truncation_radius_for(tol, tr);
  auto objective = [&](double a, double b) {
    return gamma_k_value_raw(tr, Characteristic{a, b}.wrapped(), radius);
  };
  std::vector<Characteristic> starts;
  for (const auto& v : wigner_seitz_vertices(tr)) starts.push_back(v.chi);
  for (const auto& h : half_lattice_points())
    if (!h.is_zero()) starts.push_back(h);  // k = 0 is the global maximum
  auto to_chi = [](double a, double b) { return Characteristic{a, b}.wrapped(); };
  return minimize_over(tr, tol, starts, /*grid_scan=*/true, objective, to_chi);
}

GammaMin gamma_min_wigner_seitz(const ShapeParameter& tau, double tol) {
  ShapeParameter tr = is_reduced(tau) ? tau : reduce_to_fundamental_domain(tau).tau;
  const int radius = truncation_radius_for(tol, tr);
  // raw q coordinates; evaluation folds q back to a centered characteristic
  auto objective = [&](double qre, double qim) {
    return gamma_k_value_raw(tr, characteristic_from_q(Complex(qre, qim), tr), radius);
  };
  std::vector<Characteristic> starts;  // abused as raw (q_re, q_im) pairs below
  std::vector<std::pair<double, double>> qstarts;
  for (const auto& v : wigner_seitz_vertices(tr)) qstarts.push_back({v.q.real(), v.q.imag()});
  qstarts.push_back({0.25, 0.25});
  for (auto [x, y] : qstarts) starts.push_back(Characteristic{x, y});
  auto to_chi = [&](double qre, double qim) {
    return characteristic_from_q(Complex(qre, qim), tr);
  };
  return minimize_over(tr, tol, starts, /*grid_scan=*/false, objective, to_chi);
}

CertifiedValue<double> beta(const ShapeParameter& tau, double tol) {
  ShapeParameter tr = is_reduced(tau) ? tau : reduce_to_fundamental_domain(tau).tau;
  return gamma_01(tr, tol);
}

CertifiedValue<double> kappa_c(const ShapeParameter& tau, double tol) {
  CertifiedValue<double> b = beta(tau, tol);
  double lo = b.value - b.remainder_bound, hi = b.value + b.remainder_bound;
  if (lo < 1.0)
    throw PrecisionError("certified beta interval dips below 1; kappa_c undefined at this tolerance");
  auto kc = [](double bv) { return std::sqrt(0.5 * (1.0 - 1.0 / bv)); };
  double klo = kc(lo), khi = kc(hi);
  CertifiedValue<double> out;
  out.value = kc(b.value);
  out.remainder_bound = std::max(out.value - klo, khi - out.value);
  out.truncation_radius = b.truncation_radius;
  return out;
}

StabilityVerdict classify(const ShapeParameter& tau, double kappa, double b_field, double tol,
                          double bcond_threshold) {
  if (!(kappa > 0.0) || !(b_field > 0.0))
    throw std::domain_error("classify requires kappa > 0 and b > 0");
  StabilityVerdict out;
  out.beta_value = beta(tau, tol);
  out.kappa_c_value = kappa_c(tau, tol).value;
  out.kappa_sq_minus_half = kappa * kappa - 0.5;

  const double denom = kappa * kappa * ((2.0 * kappa * kappa - 1.0) * out.beta_value.value + 1.0);
  out.bcond_ratio = std::abs(kappa * kappa - b_field) / std::abs(denom);

  GammaMin g = gamma(tau, tol);
  // tighten until the sign of gamma is certified, up to the radius cap
  double t = tol;
  while (std::abs(g.value.value) <= g.value.remainder_bound) {
    t *= 1e-2;
    try {
      g = gamma(tau, t);
    } catch (const ToleranceError&) {
      break;
    }
    if (t < 1e-15) break;
  }
  out.gamma_value = g.value;
  out.argmin = g.argmin;
  out.indeterminate = std::abs(g.value.value) <= g.value.remainder_bound;

  if (out.bcond_ratio > bcond_threshold) {
    out.verdict = Verdict::OutsideRegime;
    return out;
  }
  if (out.indeterminate) {
    // never classify on noise; report the regime verdict with the flag set
    out.verdict = Verdict::OutsideRegime;
    return out;
  }
  const bool stable = out.kappa_sq_minus_half > 0.0 && g.value.value > 0.0;
  out.verdict = stable ? Verdict::AsymptoticallyStable : Verdict::EnergeticallyUnstable;
  return out;
}

std::map<std::string, ResidualEntry> symmetry_residuals(const ShapeParameter& tau,
                                                        const Characteristic& chi, double tol,
                                                        unsigned seed) {
  std::map<std::string, ResidualEntry> out;
  GammaResult base = gamma_k(tau, chi, tol);
  const ShapeParameter tr = base.tau;
  const Characteristic c = base.chi;

  auto entry = [&](const GammaResult& other) {
    ResidualEntry e;
    e.residual = std::abs(other.gamma_k.value - base.gamma_k.value);
    e.bound = other.gamma_k.remainder_bound + base.gamma_k.remainder_bound + 1e-12;
    return e;
  };

  // tau -> tau + 1 with the label transported along T
  {
    ShapeParameter t1(tr.re + 1.0, tr.im);
    Characteristic ct = transport_characteristic(SL2Z::translation(1), c);
    out["tau_translation"] = entry(gamma_k(t1, ct, tol));
  }
  // tau -> -1/tau with the label transported along S
  {
    Complex ti = -1.0 / tr.value();
    Characteristic ct = transport_characteristic(SL2Z::inversion(), c);
    out["tau_inversion"] = entry(gamma_k(ShapeParameter(ti), ct, tol));
  }
  // reflection: gamma_{conj k}(-conj tau) = gamma_k(tau); label (a, -b)
  {
    ShapeParameter tm(-tr.re, tr.im);
    out["reflection"] = entry(gamma_k(tm, Characteristic{c.a, -c.b}, tol));
  }
  // k -> -k
  out["k_negation"] = entry(gamma_k(tr, c.negated(), tol));

  // dual-lattice shifts evaluated raw (unwrapped label, enlarged radius);
  // the shifted window costs one shell of certified tail
  {
    const int radius = truncation_radius_for(tol, tr);
    double raw = gamma_k_value_raw(tr, c, radius);
    double s1 = gamma_k_value_raw(tr, Characteristic{c.a, c.b + 1.0}, radius + 2);
    double s2 = gamma_k_value_raw(tr, Characteristic{c.a + 1.0, c.b}, radius + 2);
    double bnd = 2.0 * (2.0 * tail_bound_q1(tr, radius) + 2.0 * tail_bound_q2(tr, radius)) + 1e-12;
    out["k_shift_kappa1"] = {std::abs(s1 - raw), bnd};
    out["k_shift_kappa2"] = {std::abs(s2 - raw), bnd};
  }

  // SL(2,Z) covariance against a raw large-radius evaluation at the unreduced
  // image point (no internal reduction on that side)
  {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 12345);
    SL2Z g = SL2Z::identity();
    std::uniform_int_distribution<int> pick(0, 2);
    for (int i = 0; i < 3; ++i) {
      int p = pick(rng);
      if (p == 0)
        g = g.times(SL2Z::translation(1));
      else if (p == 1)
        g = g.times(SL2Z::translation(-1));
      else
        g = g.times(SL2Z::inversion());
    }
    Complex tg = g.mobius(tr.value());
    if (tg.imag() > 0.25) {
      Characteristic cg = transport_characteristic(g, c);
      double raw = gamma_k_value_raw(ShapeParameter(tg), cg, 24);
      ResidualEntry e;
      e.residual = std::abs(raw - base.gamma_k.value);
      e.bound = base.gamma_k.remainder_bound + 1e-8;  // raw side: radius-24 Gaussian tail
      out["sl2z_transport_raw"] = e;
    }
  }
  return out;
}

std::map<std::string, double> critical_point_residuals(const ShapeParameter& tau, double step) {
  std::map<std::string, double> out;
  ShapeParameter tr = is_reduced(tau) ? tau : reduce_to_fundamental_domain(tau).tau;
  const int radius = truncation_radius_for(1e-10, tr);

  auto gk = [&](double a, double b) {
    return gamma_k_value_raw(tr, Characteristic{a, b}.wrapped(), radius);
  };
  const char* names[4] = {"grad_k_at_0_0", "grad_k_at_half_0", "grad_k_at_0_half",
                          "grad_k_at_half_half"};
  auto pts = half_lattice_points();
  for (int i = 0; i < 4; ++i) {
    double a = pts[i].a, b = pts[i].b;
    double da = (gk(a + step, b) - gk(a - step, b)) / (2.0 * step);
    double db = (gk(a, b + step) - gk(a, b - step)) / (2.0 * step);
    out[names[i]] = std::hypot(da, db);
  }

  auto gm = [&](Complex t) { return gamma(ShapeParameter(t), 1e-10).value.value; };
  Complex t0 = tr.value();
  double g_re =
      (gm(t0 + Complex(step, 0.0)) - gm(t0 - Complex(step, 0.0))) / (2.0 * step);
  double g_im =
      (gm(t0 + Complex(0.0, step)) - gm(t0 - Complex(0.0, step))) / (2.0 * step);
  out["grad_tau_re"] = std::abs(g_re);
  out["grad_tau_im"] = std::abs(g_im);
  double g0 = gm(t0);
  out["dgamma_dre_right"] = (gm(t0 + Complex(step, 0.0)) - g0) / step;
  out["dgamma_dre_left"] = (g0 - gm(t0 - Complex(step, 0.0))) / step;
  return out;
}

}  // namespace abrikosov
