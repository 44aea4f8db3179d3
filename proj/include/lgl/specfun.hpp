#pragma once

#include <limits>

namespace lgl::specfun {

/// Natural logarithm of a nonnegative quantity. Zero is stored as -infinity.
struct LogValue {
  double log_magnitude = -std::numeric_limits<double>::infinity();

  [[nodiscard]] double value() const;
  [[nodiscard]] bool is_zero() const;
};

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// log of the lower incomplete gamma function gamma(a, x) = int_0^x t^{a-1} e^{-t} dt.
/// Requires a > 0, x >= 0; gamma(a, 0) is returned as -infinity.
LogValue log_lower_gamma(double a, double x);

/// log of the upper incomplete gamma function Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt.
LogValue log_upper_gamma(double a, double x);

/// log of the series  sum_{n>=0} x^n / ((a+1)(a+2)...(a+n))  =  a x^{-a} e^{x} gamma(a, x).
///
/// This is the normalised form in which the counting-model ratio, the counting
/// PGF, the mean-field normalisations and the saturation bound all appear; it
/// stays O(1)-sized where gamma(a, x) itself under- or overflows. Equals 0 at x = 0.
double log_confluent_series(double a, double x);

/// Exponential integral Ei(x) = -PV int_{-x}^inf e^{-t}/t dt for x > 0.
/// Overflows to +infinity beyond x ~ 709.78.
double expint_ei(double x);

/// e^{-x} Ei(x), finite for every x > 0.
double expint_ei_scaled(double x);

/// Ei(x) - ln x = gamma_E + sum_{n>=1} x^n / (n n!), an entire function; x >= 0.
/// Intended for moderate x (the series is summed directly).
double expint_ei_minus_log(double x);

/// log(x^a e^{-x} / Gamma(a+1)) evaluated without forming the large terms separately.
double log_gamma_prefix(double a, double x);

}  // namespace lgl::specfun
