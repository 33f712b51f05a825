#pragma once

// Exact piecewise-linear Hasse-Herbrand calculus.

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "ramforge/nottingham.hpp"

namespace ramforge {

using Rational = boost::multiprecision::cpp_rational;

/// f(0) = 0; slope slopes[m] on [breakpoints[m], breakpoints[m+1]), the last
/// slope continuing to infinity (and the first one to the left of 0).
/// breakpoints[0] == 0 always. Redundant breakpoints are removed on
/// construction, so equal functions have equal representations.
class PiecewiseLinear {
 public:
  PiecewiseLinear();  // identity
  PiecewiseLinear(std::vector<Rational> breakpoints, std::vector<Rational> slopes);

  const std::vector<Rational>& breakpoints() const { return t_; }
  const std::vector<Rational>& slopes() const { return s_; }
  Rational operator()(const Rational& x) const;
  bool operator==(const PiecewiseLinear& o) const { return t_ == o.t_ && s_ == o.s_; }

 private:
  std::vector<Rational> t_, s_;
};

/// phi_G(s) = integral_0^s dt / (G : G[t]).
PiecewiseLinear phi_from_filtration(const FiniteFiltration& filt);

PiecewiseLinear pl_inverse(const PiecewiseLinear& f);

/// u_m = phi_G(l_m).
std::vector<Rational> upper_breaks(const FiniteFiltration& filt);

struct WindowRatios {
  Rational min_ratio;
  Rational max_ratio;
};

/// min and max of x / (G : G[x]) over every break x of every level.
WindowRatios criterion_window(const std::vector<FiniteFiltration>& levels);

/// Breaks q^l - 1 for l = r..l_max, index q^(l+1-r) after break q^l - 1:
/// the lower-numbering filtration of U^(r) read through t <-> log_q(t+1).
FiniteFiltration synthetic_filtration(long q, int r, int l_max);

}  // namespace ramforge
