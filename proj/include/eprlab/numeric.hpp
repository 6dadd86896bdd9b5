#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace epr {

/// Exact arithmetic scalar used by the "exact" evaluation mode.
using Rational = mpq_class;

/// Raised when an index or a vector length does not match the space it is
/// used with.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a documented precondition of an operation is violated.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a model is asked about a setting pair it has no kernel for.
struct MissingKernelError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when an enumeration guard (problem size limit) is exceeded.
struct SizeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised on malformed model files or scalar literals.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Properties of the two supported arithmetic modes.  Float mode compares
/// within tolerances; exact mode compares with zero slack.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  // eps_tol: general equality slack for derived quantities.
  static double default_tolerance() { return 1e-9; }
  // eps_norm: normalization slack at construction time.
  static double norm_tolerance() { return 1e-12; }
  // eps_det: slack for the {0,1} dichotomy in the extraction step.
  static double dichotomy_tolerance() { return 1e-6; }
  static double to_double(double v) { return v; }
  static double abs(double v) { return std::fabs(v); }
  static const char* mode_name() { return "float"; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational default_tolerance() { return Rational(0); }
  static Rational norm_tolerance() { return Rational(0); }
  static Rational dichotomy_tolerance() { return Rational(0); }
  static double to_double(const Rational& v) { return v.get_d(); }
  static Rational abs(const Rational& v) { return ::abs(v); }
  static const char* mode_name() { return "exact"; }
};

template <class S>
bool approx_eq(const S& a, const S& b, const S& tol) {
  return ScalarTraits<S>::abs(S(a - b)) <= tol;
}

/// num/den in canonical form (the raw two-argument mpq constructor does
/// not canonicalize, which would break comparisons).
inline Rational make_ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p/q", "-3", "0.25" into an exact rational.  Exponents are not
/// accepted; exact-mode files are expected to stay in plain decimal or
/// ratio form.
Rational parse_rational(const std::string& text);

/// Canonical text form "p/q" (or "p" when the denominator is 1).
std::string format_rational(const Rational& v);

std::string format_scalar(double v);
inline std::string format_scalar(const Rational& v) { return format_rational(v); }

}  // namespace epr
