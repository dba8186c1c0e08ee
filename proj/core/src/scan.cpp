#include "abrikosov/scan.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "abrikosov/errors.hpp"
#include "abrikosov/quadrature.hpp"
#include "abrikosov/stability.hpp"
#include "abrikosov/theta.hpp"

namespace abrikosov {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}
}  // namespace

ShapeParameter parse_tau(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(unsigned(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty shape parameter");

  if (auto at = s.find('@'); at != std::string::npos) {
    double r = std::stod(s.substr(0, at));
    double deg = std::stod(s.substr(at + 1));
    return {r * std::cos(deg * kPi / 180.0), r * std::sin(deg * kPi / 180.0)};
  }

  if (s.back() != 'i') throw std::invalid_argument("shape parameter must end in 'i' or use r@deg");
  s.pop_back();
  // split at the last +/- that is not leading and not an exponent sign
  size_t split = std::string::npos;
  for (size_t p = s.size(); p-- > 1;) {
    if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  auto to_num = [](const std::string& w, double empty_value) -> double {
    if (w.empty() || w == "+") return empty_value;
    if (w == "-") return -empty_value;
    size_t used = 0;
    double v = std::stod(w, &used);
    if (used != w.size()) throw std::invalid_argument("malformed number in shape parameter");
    return v;
  };
  if (split == std::string::npos) return {0.0, to_num(s, 1.0)};
  return {to_num(s.substr(0, split), 0.0), to_num(s.substr(split), 1.0)};
}

int ScanRange::count() const {
  if (step <= 0.0) throw std::invalid_argument("range step must be positive");
  if (stop < start) throw std::invalid_argument("range stop must be >= start");
  return int(std::floor((stop - start) / step + 1e-9)) + 1;
}

ScanRange parse_range(const std::string& text) {
  ScanRange r;
  auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    r.start = r.stop = std::stod(text);
    r.step = 1.0;
    return r;
  }
  auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw std::invalid_argument("range must be start:stop:step");
  r.start = std::stod(text.substr(0, c1));
  r.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  r.step = std::stod(text.substr(c2 + 1));
  return r;
}

ScanRecord scan_point(double tau_re, double tau_im, double tol) {
  ShapeParameter tau(tau_re, tau_im);
  if (!(tau.im > 0.0)) throw std::domain_error("scan grid point requires Im tau > 0");
  ScanRecord rec;
  rec.tau_re = tau_re;
  rec.tau_im = tau_im;
  ReductionResult red = reduce_to_fundamental_domain(tau);
  rec.was_reduced = !is_reduced(tau);
  rec.red_re = red.tau.re;
  rec.red_im = red.tau.im;
  GammaMin g = gamma(red.tau, tol);
  rec.gamma = g.value.value;
  rec.bound = g.value.remainder_bound;
  rec.argmin_a = g.argmin.a;
  rec.argmin_b = g.argmin.b;
  rec.beta = beta(red.tau, tol).value;
  rec.kappa_c = kappa_c(red.tau, tol).value;
  return rec;
}

namespace {

void compute_block(const ScanRange& re, const ScanRange& im, const RunConfig& cfg,
                   std::vector<ScanRecord>& records, size_t begin, size_t end) {
  const int nre = re.count();
  std::atomic<size_t> next(begin);
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < end; i = next.fetch_add(1)) {
      int ii = int(i) / nre, jj = int(i) % nre;  // im-major ordering
      records[i] = scan_point(re.at(jj), im.at(ii), cfg.tol);
    }
  };
  int nthreads = std::max(1, cfg.threads);
  if (nthreads == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

std::string config_stamp(const ScanRange& re, const ScanRange& im, const RunConfig& cfg) {
  std::ostringstream os;
  os << fmt(re.start, "%.17g") << ' ' << fmt(re.stop, "%.17g") << ' ' << fmt(re.step, "%.17g")
     << ' ' << fmt(im.start, "%.17g") << ' ' << fmt(im.stop, "%.17g") << ' '
     << fmt(im.step, "%.17g") << ' ' << fmt(cfg.tol, "%.17g") << ' ' << cfg.format;
  return os.str();
}

void record_to_ckpt(const ScanRecord& r, std::ostream& os) {
  os << fmt(r.tau_re, "%.17g") << ' ' << fmt(r.tau_im, "%.17g") << ' ' << int(r.was_reduced) << ' '
     << fmt(r.red_re, "%.17g") << ' ' << fmt(r.red_im, "%.17g") << ' ' << fmt(r.gamma, "%.17g")
     << ' ' << fmt(r.bound, "%.17g") << ' ' << fmt(r.argmin_a, "%.17g") << ' '
     << fmt(r.argmin_b, "%.17g") << ' ' << fmt(r.beta, "%.17g") << ' '
     << fmt(r.kappa_c, "%.17g") << '\n';
}

bool record_from_ckpt(std::istream& is, ScanRecord& r) {
  int wr = 0;
  if (!(is >> r.tau_re >> r.tau_im >> wr >> r.red_re >> r.red_im >> r.gamma >> r.bound >>
        r.argmin_a >> r.argmin_b >> r.beta >> r.kappa_c))
    return false;
  r.was_reduced = wr != 0;
  return true;
}

}  // namespace

ScanGrid run_scan(const ScanRange& re, const ScanRange& im, const RunConfig& cfg) {
  ScanGrid grid;
  grid.re = re;
  grid.im = im;
  size_t total = size_t(re.count()) * size_t(im.count());
  grid.records.resize(total);
  compute_block(re, im, cfg, grid.records, 0, total);
  return grid;
}

void run_scan_to_file(const ScanRange& re, const ScanRange& im, const RunConfig& cfg,
                      const std::string& out_path) {
  const std::string ckpt_path = out_path + ".ckpt";
  const std::string stamp = config_stamp(re, im, cfg);
  ScanGrid grid;
  grid.re = re;
  grid.im = im;
  const size_t total = size_t(re.count()) * size_t(im.count());
  grid.records.resize(total);

  size_t done = 0;
  {
    std::ifstream ck(ckpt_path);
    std::string line;
    if (ck && std::getline(ck, line) && line == stamp) {
      while (done < total && record_from_ckpt(ck, grid.records[done])) ++done;
    }
  }

  while (done < total) {
    size_t end = std::min(total, done + size_t(std::max(1, cfg.checkpoint_every)));
    compute_block(re, im, cfg, grid.records, done, end);
    done = end;
    if (done < total) {
      std::ofstream ck(ckpt_path, std::ios::trunc);
      if (!ck) throw std::ios_base::failure("cannot write checkpoint " + ckpt_path);
      ck << stamp << '\n';
      for (size_t i = 0; i < done; ++i) record_to_ckpt(grid.records[i], ck);
    }
  }

  std::ofstream out(out_path, std::ios::trunc | std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + out_path);
  if (cfg.format == "csv")
    write_scan_csv(grid, out);
  else
    write_scan_json(grid, out);
  out.flush();
  if (!out) throw std::ios_base::failure("write failed for " + out_path);
  std::remove(ckpt_path.c_str());
}

void write_scan_csv(const ScanGrid& grid, std::ostream& os) {
  os << "tau_re,tau_im,gamma,bound,argmin_a,argmin_b,beta,kappa_c\r\n";
  for (const ScanRecord& r : grid.records) {
    os << fmt(r.tau_re) << ',' << fmt(r.tau_im) << ',' << fmt(r.gamma) << ',' << fmt(r.bound)
       << ',' << fmt(r.argmin_a) << ',' << fmt(r.argmin_b) << ',' << fmt(r.beta) << ','
       << fmt(r.kappa_c) << "\r\n";
  }
}

void write_scan_json(const ScanGrid& grid, std::ostream& os) {
  os << "{\"points\":[";
  bool first = true;
  for (const ScanRecord& r : grid.records) {
    if (!first) os << ',';
    first = false;
    os << "{\"tau\":{\"re\":" << fmt(r.tau_re) << ",\"im\":" << fmt(r.tau_im) << "}";
    if (r.was_reduced)
      os << ",\"reduced_from\":{\"re\":" << fmt(r.tau_re) << ",\"im\":" << fmt(r.tau_im)
         << "},\"tau_reduced\":{\"re\":" << fmt(r.red_re) << ",\"im\":" << fmt(r.red_im) << "}";
    os << ",\"gamma\":{\"value\":" << fmt(r.gamma) << ",\"bound\":" << fmt(r.bound) << "}"
       << ",\"argmin\":{\"a\":" << fmt(r.argmin_a) << ",\"b\":" << fmt(r.argmin_b) << "}"
       << ",\"beta\":" << fmt(r.beta) << ",\"kappa_c\":" << fmt(r.kappa_c) << "}";
  }
  os << "]}\n";
}

namespace {

ZeroCrossing bisect_certified(const std::function<CertifiedValue<double>(double)>& certified,
                              double x_lo, double x_hi);

}  // namespace

ZeroCrossing zeroset_bisect_im(double re_fixed, double im_lo, double im_hi, double tol) {
  auto certified = [&](double im_v) -> CertifiedValue<double> {
    double t = tol;
    GammaMin g = gamma(ShapeParameter(re_fixed, im_v), t);
    while (std::abs(g.value.value) <= g.value.remainder_bound && t > 1e-14) {
      t *= 1e-2;
      try {
        g = gamma(ShapeParameter(re_fixed, im_v), t);
      } catch (const ToleranceError&) {
        break;
      }
    }
    return g.value;
  };
  return bisect_certified(certified, im_lo, im_hi);
}

ZeroCrossing zeroset_bisect_re(double im_fixed, double re_lo, double re_hi, double tol) {
  auto certified = [&](double re_v) -> CertifiedValue<double> {
    double t = tol;
    GammaMin g = gamma(ShapeParameter(re_v, im_fixed), t);
    while (std::abs(g.value.value) <= g.value.remainder_bound && t > 1e-14) {
      t *= 1e-2;
      try {
        g = gamma(ShapeParameter(re_v, im_fixed), t);
      } catch (const ToleranceError&) {
        break;
      }
    }
    return g.value;
  };
  return bisect_certified(certified, re_lo, re_hi);
}

namespace {

ZeroCrossing bisect_certified(const std::function<CertifiedValue<double>(double)>& certified,
                              double x_lo, double x_hi) {
  CertifiedValue<double> lo_v = certified(x_lo);
  CertifiedValue<double> hi_v = certified(x_hi);
  auto sign_of = [](const CertifiedValue<double>& v) -> int {
    if (std::abs(v.value) <= v.remainder_bound) return 0;
    return v.value > 0.0 ? 1 : -1;
  };
  int slo = sign_of(lo_v), shi = sign_of(hi_v);
  if (slo == 0 || shi == 0 || slo == shi)
    throw BracketError("gamma does not change certified sign across the bracket");

  ZeroCrossing out;
  double lo = x_lo, hi = x_hi;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    CertifiedValue<double> v = certified(mid);
    ++out.bisections;
    if (std::abs(v.value) <= 10.0 * v.remainder_bound || hi - lo < 1e-8) {
      out.location = mid;
      out.lo = lo;
      out.hi = hi;
      out.gamma_at = v.value;
      out.bound_at = v.remainder_bound;
      return out;
    }
    if ((v.value > 0.0 ? 1 : -1) == slo)
      lo = mid;
    else
      hi = mid;
  }
  double mid = 0.5 * (lo + hi);
  CertifiedValue<double> v = certified(mid);
  return {mid, lo, hi, v.value, v.remainder_bound, out.bisections};
}

}  // namespace

AuditReport audit(const ShapeParameter& tau, int samples, unsigned seed, double tol) {
  AuditReport rep;
  auto push = [&](const std::string& name, double residual, double bound) {
    bool ok = residual <= bound;
    rep.checks.push_back({name, residual, bound, ok});
    rep.all_pass = rep.all_pass && ok;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ure(-0.5, 0.5), uim(0.9, 2.0), uab(-0.5, 0.5);

  // symmetry identities at the requested tau and at random samples
  {
    auto merge = [&](const std::map<std::string, ResidualEntry>& res, const std::string& tag) {
      for (const auto& [name, e] : res) push("symmetry/" + tag + "/" + name, e.residual, e.bound);
    };
    merge(symmetry_residuals(tau, Characteristic{0.25, 0.25}, tol, seed), "tau0");
    for (int s = 0; s < samples; ++s) {
      ShapeParameter ts(ure(rng), uim(rng));
      Characteristic cs{uab(rng), uab(rng)};
      auto res = symmetry_residuals(ts, cs, tol, seed + s + 1);
      for (const auto& [name, e] : res) {
        // aggregate: report only failures individually, else the max
        push("symmetry/sample" + std::to_string(s) + "/" + name, e.residual, e.bound);
      }
    }
  }

  // half-lattice critical points at the requested tau
  {
    auto res = critical_point_residuals(tau);
    for (const char* key : {"grad_k_at_0_0", "grad_k_at_half_0", "grad_k_at_0_half",
                            "grad_k_at_half_half"})
      push(std::string("critical/") + key, res.at(key), 1e-4);
  }

  // oracle equivalence: lattice sums vs quadrature averages
  {
    QuadratureGrid grid;
    for (int s = 0; s < std::max(1, samples / 4); ++s) {
      ShapeParameter ts = s == 0 ? tau : ShapeParameter(ure(rng), uim(rng));
      ts = reduce_to_fundamental_domain(ts).tau;
      Characteristic cs = s == 0 ? Characteristic{0.25, 0.25}
                                 : Characteristic{uab(rng), uab(rng)};
      ThetaSeriesParams ps = ThetaSeriesParams::for_cell(ts, 1e-12);
      double A = avg_abs2_abs2(ts, cs, grid, ps);
      Complex B = avg_cross(ts, cs, grid, ps);
      double C = avg_abs4(ts, grid, ps);
      GammaResult g = gamma_k(ts, cs, tol);
      double lhs = g.gamma_k.value;
      double rhs = 2.0 * A + std::abs(B) - C;
      push("oracle/gamma_k_sample" + std::to_string(s), std::abs(lhs - rhs),
           std::max(1e-6, g.gamma_k.remainder_bound));
    }
  }
  return rep;
}

}  // namespace abrikosov
