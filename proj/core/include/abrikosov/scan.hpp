#ifndef ABRIKOSOV_SCAN_HPP
#define ABRIKOSOV_SCAN_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "abrikosov/lattice.hpp"
#include "abrikosov/lattice_sums.hpp"

namespace abrikosov {

/// Batch-run configuration; the defaults are the documented CLI defaults.
struct RunConfig {
  double tol = 1e-6;
  std::string format = "json";  ///< "json" or "csv"
  int threads = 1;
  unsigned seed = 0;
  double bcond_threshold = 0.1;
  int checkpoint_every = 1000;
};

/// Parse a shape parameter from "RE+IMi" (e.g. "0.5+0.8660254i", "i", "2i")
/// or polar "r@deg" (e.g. "1@60"). Throws std::invalid_argument on malformed
/// input; the value is not validated against Im > 0 here.
ShapeParameter parse_tau(const std::string& text);

struct ScanRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  int count() const;
  double at(int i) const { return start + i * step; }
};

/// Parse "start:stop:step" (single value "x" means the degenerate range x:x:1).
ScanRange parse_range(const std::string& text);

struct ScanRecord {
  double tau_re = 0.0, tau_im = 0.0;  ///< requested grid point
  bool was_reduced = false;           ///< outside the fundamental domain
  double red_re = 0.0, red_im = 0.0;  ///< reduced representative
  double gamma = 0.0, bound = 0.0;
  double argmin_a = 0.0, argmin_b = 0.0;
  double beta = 0.0, kappa_c = 0.0;
};

/// Rectangular tau-grid scan. Rows are ordered by (im ascending, re ascending);
/// identical config yields byte-identical serialized output.
struct ScanGrid {
  ScanRange re, im;
  std::vector<ScanRecord> records;
};

ScanRecord scan_point(double tau_re, double tau_im, double tol);

ScanGrid run_scan(const ScanRange& re, const ScanRange& im, const RunConfig& cfg);

/// Scan with sidecar checkpointing (`out_path` + ".ckpt", rewritten every
/// `checkpoint_every` completed rows) and resume on config match. Writes the
/// final file in the configured format and removes the sidecar.
void run_scan_to_file(const ScanRange& re, const ScanRange& im, const RunConfig& cfg,
                      const std::string& out_path);

void write_scan_csv(const ScanGrid& grid, std::ostream& os);
void write_scan_json(const ScanGrid& grid, std::ostream& os);

/// Certified sign change of gamma along a vertical (re fixed) or horizontal
/// (im fixed) segment. Bisects until |gamma| <= 10 * remainder bound at the
/// midpoint (or the interval collapses); BracketError when the endpoint signs
/// agree.
struct ZeroCrossing {
  double location = 0.0;  ///< the varying coordinate at the boundary
  double lo = 0.0, hi = 0.0;
  double gamma_at = 0.0;
  double bound_at = 0.0;
  int bisections = 0;
};

ZeroCrossing zeroset_bisect_im(double re_fixed, double im_lo, double im_hi, double tol);
ZeroCrossing zeroset_bisect_re(double im_fixed, double re_lo, double re_hi, double tol);

struct AuditCheck {
  std::string name;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  bool all_pass = true;
};

/// Symmetry residuals, half-lattice critical-point gradients and the
/// sums-vs-quadrature oracle equivalence, at the given tau plus `samples`
/// seeded random (tau, q) draws.
AuditReport audit(const ShapeParameter& tau, int samples, unsigned seed, double tol);

}  // namespace abrikosov

#endif
