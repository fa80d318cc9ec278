#include "eemod/numerics.hpp"

#include <cmath>

#include "eemod/errors.hpp"

namespace eemod::numerics {
namespace {

constexpr double kInvSqrtPi = 0.5641895835477562869480794515607726;
constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

// erf(x) for 0 <= x < 1 via the all-positive series
//   erf(x) = 2 x e^{-x^2}/sqrt(pi) * sum_n (2x^2)^n / (1*3*...*(2n+1)).
// Unlike the alternating Maclaurin form this has no cancellation.
double erf_series(double x) {
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 80; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term <= sum * 0x1.0p-56) break;
  }
  return 2.0 * kInvSqrtPi * x * std::exp(-x2) * sum;
}

// erfc(x) for x >= 1 via the Laplace continued fraction
//   erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + (2/2)/(x + (3/2)/(...)))),
// evaluated with the modified Lentz algorithm. The e^{-x^2} factor goes
// denormal past x ~ 26.6 and underflows to zero only past x ~ 27.3.
double erfc_cf(double x) {
  constexpr double tiny = 1e-300;
  double f = tiny;
  double c = f;
  double d = 0.0;
  double a = 1.0;  // numerators run 1, 1/2, 1, 3/2, 2, ...
  for (int n = 1; n <= 400; ++n) {
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 0x1.0p-55) break;
    a = 0.5 * n;
  }
  return std::exp(-x * x) * kInvSqrtPi * f;
}

double erfc_pos(double x) { return x < 1.0 ? 1.0 - erf_series(x) : erfc_cf(x); }

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

double q_function(double x) {
  if (!std::isfinite(x)) throw DomainError("q_function: non-finite input");
  const double y = x * kInvSqrt2;
  if (x >= 0.0) return 0.5 * erfc_pos(y);
  return 1.0 - 0.5 * erfc_pos(-y);
}

double gaussian_pdf(double x) {
  if (!std::isfinite(x)) throw DomainError("gaussian_pdf: non-finite input");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootTolerance& tol) {
  if (!(tol.rel_x > 0.0) || tol.max_iter < 1)
    throw DomainError("find_root: invalid tolerance");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("find_root: non-finite bracket");
  double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if (!(lo < hi)) throw DomainError("find_root: requires lo < hi");
  if (sign_of(flo) == sign_of(fhi))
    throw BracketingError("find_root: f(lo) and f(hi) have the same sign");
  for (int it = 0; it < tol.max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol.rel_x * std::max(std::abs(mid), 1.0)) return mid;
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (sign_of(fmid) == sign_of(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("find_root: max_iter exceeded before tolerance");
}

std::pair<double, double> expand_bracket(const std::function<double(double)>& f,
                                         double x0) {
  if (!std::isfinite(x0) || !(x0 > 0.0))
    throw DomainError("expand_bracket: x0 must be positive and finite");
  constexpr int kMaxRounds = 200;
  const double f0 = f(x0);
  if (f0 == 0.0) return {x0, x0};
  double lo = x0;
  double hi = x0;
  double flo = f0;
  double fhi = f0;
  for (int k = 0; k < kMaxRounds; ++k) {
    const double up = hi * 2.0;
    if (!std::isfinite(up)) break;
    const double fup = f(up);
    if (sign_of(fup) != sign_of(fhi)) return {hi, up};
    hi = up;
    fhi = fup;
    const double down = lo * 0.5;
    if (down == 0.0) break;
    const double fdown = f(down);
    if (sign_of(fdown) != sign_of(flo)) return {down, lo};
    lo = down;
    flo = fdown;
  }
  throw BracketingError("expand_bracket: no sign change within expansion cap");
}

}  // namespace eemod::numerics
