#include "lgl/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lgl/error.hpp"

namespace lgl::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Positive root of Ei rounded to double, and Ei evaluated exactly at that double.
constexpr double kEiRoot = 0.3725074107813666;
constexpr double kEiAtRoot = -5.119698936555684702e-17;

void require_gamma_args(double a, double x, const char* fn) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InvalidArgument(std::string(fn) + ": shape a must be positive and finite");
  }
  if (!(x >= 0.0)) {
    throw InvalidArgument(std::string(fn) + ": argument x must be nonnegative");
  }
}

// lgamma(a+1) - [(a+1/2) ln a - a + ln(2 pi)/2], valid for a >= 10.
double stirling_error(double a) {
  const double inv = 1.0 / a;
  const double inv2 = inv * inv;
  return inv *
         (1.0 / 12.0 -
          inv2 * (1.0 / 360.0 -
                  inv2 * (1.0 / 1260.0 -
                          inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0 - inv2 * (691.0 / 360360.0))))));
}

// log sum_{n>=0} x^n / ((a+1)...(a+n)); all terms positive. Caller keeps x < a + 1
// so the terms decrease from the start.
double log_series_direct(double a, double x) {
  if (x == 0.0) return 0.0;
  double term = 1.0;
  double sum = 1.0;
  // Terms behave like exp(-n^2 / 2a) once n exceeds x - a; budget generously.
  const long max_terms = 1000 + static_cast<long>(50.0 * std::sqrt(a + 1.0));
  for (long n = 1; n <= max_terms; ++n) {
    term *= x / (a + static_cast<double>(n));
    sum += term;
    if (term <= kEps * 0.5 * sum) return std::log(sum);
  }
  throw ConvergenceError("incomplete gamma series did not converge");
}

// Continued fraction for Gamma(a, x) e^{x} x^{-a}, modified Lentz; x >= a + 1.
double upper_gamma_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  const long max_iter = 1000 + static_cast<long>(50.0 * std::sqrt(a + 1.0));
  for (long i = 1; i <= max_iter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) return h;
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

// log P(a,x) and log Q(a,x) for the regularised incomplete gamma functions.
struct RegularisedLogs {
  double log_p;
  double log_q;
};

RegularisedLogs regularised_logs(double a, double x) {
  const double prefix = log_gamma_prefix(a, x);
  if (x < a + 1.0) {
    const double log_p = prefix + log_series_direct(a, x);
    return {log_p, std::log1p(-std::exp(log_p))};
  }
  const double log_q = prefix + std::log(a) + std::log(upper_gamma_fraction(a, x));
  return {std::log1p(-std::exp(log_q)), log_q};
}

}  // namespace

double LogValue::value() const { return std::exp(log_magnitude); }

bool LogValue::is_zero() const { return log_magnitude == kNegInf; }

double log_gamma_prefix(double a, double x) {
  if (x == 0.0) return kNegInf;
  if (a < 10.0) return a * std::log(x) - x - std::lgamma(a + 1.0);
  const double t = (x - a) / a;
  // Near t = -1 forming 1 + t would discard the digits of x/a.
  const double log_ratio = t < -0.5 ? std::log(x / a) : std::log1p(t);
  return a * (log_ratio - t) - 0.5 * std::log(2.0 * std::numbers::pi * a) -
         stirling_error(a);
}

LogValue log_lower_gamma(double a, double x) {
  require_gamma_args(a, x, "log_lower_gamma");
  if (x == 0.0) return {kNegInf};
  if (std::isinf(x)) return {std::lgamma(a)};
  return {std::lgamma(a) + regularised_logs(a, x).log_p};
}

LogValue log_upper_gamma(double a, double x) {
  require_gamma_args(a, x, "log_upper_gamma");
  if (x == 0.0) return {std::lgamma(a)};
  if (std::isinf(x)) return {kNegInf};
  return {std::lgamma(a) + regularised_logs(a, x).log_q};
}

double log_confluent_series(double a, double x) {
  require_gamma_args(a, x, "log_confluent_series");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return log_series_direct(a, x);
  return regularised_logs(a, x).log_p - log_gamma_prefix(a, x);
}

double expint_ei_minus_log(double x) {
  if (!(x >= 0.0)) throw InvalidArgument("expint_ei_minus_log: x must be nonnegative");
  double term = 1.0;
  double sum = 0.0;
  for (int n = 1; n < 1000; ++n) {
    term *= x / n;
    const double add = term / n;
    sum += add;
    if (add <= kEps * 0.25 * sum) break;
  }
  return kEulerGamma + sum;
}

double expint_ei(double x) {
  if (!(x > 0.0)) throw InvalidArgument("expint_ei: x must be positive");
  if (x < 6.0) {
    // Expansion about the positive root keeps relative accuracy where Ei vanishes:
    // Ei(x) = ln(x/x0) + sum_n (x^n - x0^n)/(n n!) + Ei(x0).
    const double dx = x - kEiRoot;
    double diff = 1.0;      // (x^n - x0^n) / (x - x0)
    double root_pow = 1.0;  // x0^(n-1)
    double fact = 1.0;
    double sum = 0.0;
    for (int n = 1; n < 200; ++n) {
      if (n > 1) {
        root_pow *= kEiRoot;
        diff = x * diff + root_pow;
      }
      fact *= n;
      const double add = diff / (n * fact);
      sum += add;
      if (add <= kEps * 0.25 * sum) break;
    }
    return std::log1p(dx / kEiRoot) + dx * sum + kEiAtRoot;
  }
  if (x <= 40.0) return std::log(x) + expint_ei_minus_log(x);
  if (x > 709.0) {
    const double scaled = expint_ei_scaled(x);
    return std::exp(x + std::log(scaled));
  }
  return std::exp(x) * expint_ei_scaled(x);
}

double expint_ei_scaled(double x) {
  if (!(x > 0.0)) throw InvalidArgument("expint_ei_scaled: x must be positive");
  if (x <= 40.0) return std::exp(-x) * expint_ei(x);
  // Asymptotic series, truncated at its smallest term.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * k / x;
    if (next > term) break;
    term = next;
    sum += term;
    if (term <= kEps * 0.25 * sum) break;
  }
  return sum / x;
}

}  // namespace lgl::specfun
