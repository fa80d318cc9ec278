#pragma once

#include <cstdint>
#include <functional>
#include <utility>

namespace eemod::numerics {

// Stopping rule for the bracketed root finder.
struct RootTolerance {
  double rel_x = 1e-12;  // relative tolerance on the abscissa
  int max_iter = 200;
};

// Gaussian tail probability Q(x) = P(N(0,1) > x), computed as erfc(x/sqrt2)/2
// with an internal erfc (series below 1, continued fraction above). Stays
// nonzero down to the denormal range, i.e. for x up to ~38.5.
double q_function(double x);

// Standard normal density exp(-x^2/2)/sqrt(2 pi).
double gaussian_pdf(double x);

// Plain bisection on [lo, hi]; f(lo) and f(hi) must differ in sign. Exact
// zeros at probe points are returned immediately. Deterministic.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootTolerance& tol = {});

// Geometric expansion around x0 > 0, doubling upward and halving downward,
// until a sign change is bracketed. Throws BracketingError after 200 rounds.
std::pair<double, double> expand_bracket(const std::function<double(double)>& f,
                                         double x0);

// Small splittable PRNG (SplitMix64). Every stochastic path in this project
// draws from this generator so runs are reproducible from a single seed.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]; never zero, so log(uniform()) is always finite.
  double uniform() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform_in(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

}  // namespace eemod::numerics
