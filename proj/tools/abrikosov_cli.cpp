// Batch front end: single-point evaluations, fundamental-domain grid scans,
// zero-set tracing, symmetry/critical-point audits and fiber-spectrum
// validation runs. Exit codes: 2 parse/domain error, 3 tolerance error,
// 4 I/O error, 5 audit failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "abrikosov/errors.hpp"
#include "abrikosov/fiber.hpp"
#include "abrikosov/lattice.hpp"
#include "abrikosov/scan.hpp"
#include "abrikosov/stability.hpp"

using json = nlohmann::ordered_json;
using namespace abrikosov;

namespace {

json tau_json(const ShapeParameter& t) { return {{"re", t.re}, {"im", t.im}}; }

template <typename T>
json certified_json(const CertifiedValue<T>& v) {
  if constexpr (std::is_same_v<T, Complex>)
    return {{"value", {{"re", v.value.real()}, {"im", v.value.imag()}}},
            {"bound", v.remainder_bound},
            {"radius", v.truncation_radius}};
  else
    return {{"value", v.value}, {"bound", v.remainder_bound}, {"radius", v.truncation_radius}};
}

Characteristic parse_q(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("--q expects \"a,b\"");
  return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::AsymptoticallyStable: return "AsymptoticallyStable";
    case Verdict::EnergeticallyUnstable: return "EnergeticallyUnstable";
    default: return "OutsideRegime";
  }
}

void emit_point_csv(const ScanRecord& r) {
  ScanGrid g;
  g.records.push_back(r);
  write_scan_csv(g, std::cout);
}

json minimize_doc(const ShapeParameter& tau, double tol, bool with_trace) {
  ReductionResult red = reduce_to_fundamental_domain(tau);
  GammaMin g = gamma(red.tau, tol);
  CertifiedValue<double> b = beta(red.tau, tol);
  CertifiedValue<double> kc = kappa_c(red.tau, tol);
  json doc;
  doc["tau"] = tau_json(tau);
  if (!is_reduced(tau)) {
    doc["reduced"] = true;
    doc["tau_reduced"] = tau_json(red.tau);
  }
  doc["gamma"] = certified_json(g.value);
  doc["argmin"] = {{"a", g.argmin.a}, {"b", g.argmin.b}};
  doc["beta"] = certified_json(b);
  doc["kappa_c"] = certified_json(kc);
  if (with_trace) {
    json tr = json::array();
    for (const auto& m : g.trace)
      tr.push_back({{"start", {{"a", m.start.a}, {"b", m.start.b}}},
                    {"converged", {{"a", m.converged.a}, {"b", m.converged.b}}},
                    {"value", m.value},
                    {"evaluations", m.evaluations},
                    {"converged_ok", m.converged_ok}});
    doc["multistart_trace"] = tr;
  }
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Abrikosov vortex-lattice stability landscape"};
  app.require_subcommand(1);

  std::string tau_s, q_s, format = "json", out_path, re_s, im_s, bracket_s, eps_s = "0.08,0.04,0.02";
  double tol = 1e-6, kappa = 1.0, b_field = 1.0, fixed = 0.0, bcond_threshold = 0.1;
  int threads = 1, samples = 8, landau = 6, shells = 3;
  unsigned seed = 0;

  auto add_common = [&](CLI::App* cmd, bool need_tau = true) {
    if (need_tau) cmd->add_option("--tau", tau_s, "shape parameter, RE+IMi or r@deg")->required();
    cmd->add_option("--tol", tol, "certified tolerance");
    cmd->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--threads", threads, "worker threads");
  };

  auto* c_reduce = app.add_subcommand("reduce", "reduce tau to the fundamental domain");
  add_common(c_reduce);

  auto* c_gamma = app.add_subcommand("gamma", "gamma_k at --q, or the BZ minimum gamma(tau)");
  add_common(c_gamma);
  c_gamma->add_option("--q", q_s, "characteristic a,b");

  auto* c_beta = app.add_subcommand("beta", "Abrikosov constant beta(tau)");
  add_common(c_beta);

  auto* c_kappac = app.add_subcommand("kappa-c", "critical GL parameter kappa_c(tau)");
  add_common(c_kappac);

  auto* c_classify = app.add_subcommand("classify", "stability verdict for (tau, kappa, b)");
  add_common(c_classify);
  c_classify->add_option("--kappa", kappa, "GL parameter")->required();
  c_classify->add_option("--b", b_field, "average flux per cell")->required();
  c_classify->add_option("--bcond-threshold", bcond_threshold, "regime ratio threshold");

  auto* c_minimize = app.add_subcommand("minimize", "BZ minimization with multistart trace");
  add_common(c_minimize);

  auto* c_scan = app.add_subcommand("scan", "grid scan over tau");
  add_common(c_scan, false);
  c_scan->add_option("--re", re_s, "re range start:stop:step")->required();
  c_scan->add_option("--im", im_s, "im range start:stop:step")->required();
  c_scan->add_option("--out", out_path, "output file")->required();

  auto* c_zeroset = app.add_subcommand("zeroset", "bisect the gamma = 0 boundary");
  add_common(c_zeroset, false);
  c_zeroset->add_option("--re-fixed", fixed, "fixed Re tau (bisect along Im)");
  double im_fixed = 0.0;
  auto* im_fixed_opt = c_zeroset->add_option("--im-fixed", im_fixed, "fixed Im tau (bisect along Re)");
  c_zeroset->add_option("--bracket", bracket_s, "lo:hi bracket")->required();

  auto* c_audit = app.add_subcommand("audit", "symmetry / critical-point / oracle audit");
  add_common(c_audit);
  c_audit->add_option("--samples", samples, "random sample count");

  auto* c_spectrum = app.add_subcommand("spectrum", "Galerkin fiber spectrum vs mu_+-");
  add_common(c_spectrum);
  c_spectrum->add_option("--q", q_s, "characteristic a,b")->required();
  c_spectrum->add_option("--kappa", kappa, "GL parameter");
  c_spectrum->add_option("--eps", eps_s, "comma-separated eps list");
  c_spectrum->add_option("--landau", landau, "Landau level cutoff");
  c_spectrum->add_option("--shells", shells, "dual-lattice shell cutoff");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*c_reduce) {
      ShapeParameter tau = parse_tau(tau_s);
      ReductionResult r = reduce_to_fundamental_domain(tau);
      emit({{"tau", tau_json(tau)},
            {"tau_reduced", tau_json(r.tau)},
            {"matrix", {{"a", r.g.a}, {"b", r.g.b}, {"c", r.g.c}, {"d", r.g.d}}}});
    } else if (*c_gamma) {
      ShapeParameter tau = parse_tau(tau_s);
      if (!q_s.empty()) {
        GammaResult g = gamma_k(tau, parse_q(q_s), tol);
        json doc{{"tau", tau_json(tau)}, {"q", {{"a", g.chi.a}, {"b", g.chi.b}}},
                 {"gamma_k", certified_json(g.gamma_k)}};
        if (!is_reduced(tau)) {
          doc["reduced"] = true;
          doc["tau_reduced"] = tau_json(g.tau);
        }
        emit(doc);
      } else if (format == "csv") {
        emit_point_csv(scan_point(tau.re, tau.im, tol));
      } else {
        emit(minimize_doc(tau, tol, false));
      }
    } else if (*c_beta) {
      ShapeParameter tau = parse_tau(tau_s);
      emit({{"tau", tau_json(tau)}, {"beta", certified_json(beta(tau, tol))}});
    } else if (*c_kappac) {
      ShapeParameter tau = parse_tau(tau_s);
      emit({{"tau", tau_json(tau)}, {"kappa_c", certified_json(kappa_c(tau, tol))}});
    } else if (*c_classify) {
      ShapeParameter tau = parse_tau(tau_s);
      StabilityVerdict v = classify(tau, kappa, b_field, tol, bcond_threshold);
      emit({{"tau", tau_json(tau)},
            {"kappa", kappa},
            {"b", b_field},
            {"verdict", verdict_name(v.verdict)},
            {"indeterminate", v.indeterminate},
            {"gamma", certified_json(v.gamma_value)},
            {"argmin", {{"a", v.argmin.a}, {"b", v.argmin.b}}},
            {"kappa_sq_minus_half", v.kappa_sq_minus_half},
            {"bcond_ratio", v.bcond_ratio},
            {"beta", certified_json(v.beta_value)},
            {"kappa_c", v.kappa_c_value}});
    } else if (*c_minimize) {
      emit(minimize_doc(parse_tau(tau_s), tol, true));
    } else if (*c_scan) {
      RunConfig cfg;
      cfg.tol = tol;
      cfg.format = format;
      cfg.threads = threads;
      cfg.seed = seed;
      run_scan_to_file(parse_range(re_s), parse_range(im_s), cfg, out_path);
      std::cout << "wrote " << out_path << "\n";
    } else if (*c_zeroset) {
      ScanRange br = parse_range(bracket_s + ":1");
      ZeroCrossing z = im_fixed_opt->count()
                           ? zeroset_bisect_re(im_fixed, br.start, br.stop, tol)
                           : zeroset_bisect_im(fixed, br.start, br.stop, tol);
      emit({{"axis", im_fixed_opt->count() ? "re" : "im"},
            {"fixed", im_fixed_opt->count() ? im_fixed : fixed},
            {"boundary", z.location},
            {"interval", {{"lo", z.lo}, {"hi", z.hi}}},
            {"gamma_at_boundary", z.gamma_at},
            {"bound_at_boundary", z.bound_at},
            {"bisections", z.bisections}});
    } else if (*c_audit) {
      ShapeParameter tau = parse_tau(tau_s);
      AuditReport rep = audit(tau, samples, seed, tol);
      json checks = json::array();
      for (const auto& c : rep.checks)
        checks.push_back(
            {{"name", c.name}, {"residual", c.residual}, {"bound", c.bound}, {"pass", c.pass}});
      emit({{"tau", tau_json(tau)}, {"all_pass", rep.all_pass}, {"checks", checks}});
      if (!rep.all_pass) return 5;
    } else if (*c_spectrum) {
      ShapeParameter tau = parse_tau(tau_s);
      Characteristic chi = parse_q(q_s);
      GalerkinBasis basis;
      basis.landau_levels = landau;
      basis.fourier_shells = shells;
      MuPair mu = mu_pm(tau, chi, kappa, tol);
      json rows = json::array();
      {
        GalerkinSpectrum s0 = galerkin_fiber_spectrum(tau, chi, kappa, 0.0, basis);
        json head = json::array();
        for (int i = 0; i < std::min<int>(8, int(s0.eigenvalues.size())); ++i)
          head.push_back(s0.eigenvalues(i));
        rows.push_back({{"eps", 0.0}, {"lowest", head}, {"f1_max", s0.f1_max_abs}});
      }
      std::string item;
      std::stringstream eps_in(eps_s);
      while (std::getline(eps_in, item, ',')) {
        double eps = std::stod(item);
        GalerkinSpectrum s = galerkin_fiber_spectrum(tau, chi, kappa, eps, basis);
        rows.push_back({{"eps", eps},
                        {"lambda_minus", s.lambda_minus},
                        {"lambda_plus", s.lambda_plus},
                        {"lambda_plus_over_eps2", s.lambda_plus / (eps * eps)},
                        {"mu_plus_ref", mu.plus},
                        {"deviation", std::abs(s.lambda_plus / (eps * eps) - mu.plus)}});
      }
      CertifiedValue<double> bv = beta(tau, tol);
      double eps_cl = 0.08;
      double b_from_eps =
          kappa * kappa -
          eps_cl * eps_cl * kappa * kappa * ((2.0 * kappa * kappa - 1.0) * bv.value + 1.0);
      StabilityVerdict v = classify(tau, kappa, b_from_eps, tol);
      emit({{"tau", tau_json(tau)},
            {"q", {{"a", chi.a}, {"b", chi.b}}},
            {"kappa", kappa},
            {"basis", {{"landau", landau}, {"shells", shells}}},
            {"mu", {{"minus", mu.minus}, {"plus", mu.plus}, {"bound", mu.bound}}},
            {"rows", rows},
            {"classify", {{"b", b_from_eps}, {"verdict", verdict_name(v.verdict)}}}});
    }
  } catch (const ToleranceError& e) {
    std::cerr << "tolerance error: " << e.what() << "\n";
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
