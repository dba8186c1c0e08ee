#ifndef ABRIKOSOV_ERRORS_HPP
#define ABRIKOSOV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace abrikosov {

/// Requested tolerance cannot be met; `achievable` is the best rigorous
/// bound reachable under the active truncation cap.
class ToleranceError : public std::runtime_error {
public:
  ToleranceError(const std::string& what, double achievable)
      : std::runtime_error(what + " (achievable bound " + std::to_string(achievable) + ")"),
        achievable_(achievable) {}
  double achievable() const { return achievable_; }

private:
  double achievable_;
};

/// Parameters lie on the wrong side of the existence condition
/// (e.g. negative radicand in the perturbation parameter).
class RegimeError : public std::domain_error {
  using std::domain_error::domain_error;
};

/// Iterative minimization failed to converge; carries a printable trace.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, std::string trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::string& trace() const { return trace_; }

private:
  std::string trace_;
};

/// Grid-doubling quadrature did not settle below the maximum grid size.
class QuadratureError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Root bracket endpoints do not have certified opposite signs.
class BracketError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Complement block of a projection split is singular at the requested
/// spectral parameter.
class InvertibilityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A certified interval is too wide to support the requested derived
/// quantity (e.g. beta interval dips below 1).
class PrecisionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace abrikosov

#endif
