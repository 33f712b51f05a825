#include "ramforge/herbrand.hpp"

#include <limits>

namespace ramforge {

PiecewiseLinear::PiecewiseLinear() : t_{0}, s_{1} {}

PiecewiseLinear::PiecewiseLinear(std::vector<Rational> breakpoints, std::vector<Rational> slopes) {
  if (breakpoints.empty() || breakpoints.size() != slopes.size())
    throw Error(ErrorCode::InvalidArgument, "breakpoints and slopes must be nonempty and of equal length");
  if (breakpoints[0] != 0) throw Error(ErrorCode::InvalidArgument, "first breakpoint must be 0");
  for (std::size_t m = 0; m < breakpoints.size(); ++m) {
    if (slopes[m] <= 0) throw Error(ErrorCode::InvalidArgument, "slopes must be positive");
    if (m > 0 && breakpoints[m] <= breakpoints[m - 1]) throw Error(ErrorCode::InvalidArgument, "breakpoints must increase");
  }
  for (std::size_t m = 0; m < breakpoints.size(); ++m) {
    if (m > 0 && slopes[m] == s_.back()) continue;
    t_.push_back(breakpoints[m]);
    s_.push_back(slopes[m]);
  }
}

Rational PiecewiseLinear::operator()(const Rational& x) const {
  if (x <= 0) return s_[0] * x;
  Rational v = 0;
  for (std::size_t m = 0; m < t_.size(); ++m) {
    const bool last = m + 1 == t_.size();
    if (last || x <= t_[m + 1]) return v + s_[m] * (x - t_[m]);
    v += s_[m] * (t_[m + 1] - t_[m]);
  }
  return v;
}

PiecewiseLinear phi_from_filtration(const FiniteFiltration& filt) {
  filt.validate();
  std::vector<Rational> t{0}, s{1};
  for (std::size_t m = 0; m < filt.breaks.size(); ++m) {
    if (filt.breaks[m] < 0) throw Error(ErrorCode::InvalidArgument, "breaks must be nonnegative");
    if (filt.breaks[m] == 0) {
      s[0] = Rational(1, filt.indices[m]);
      continue;
    }
    t.emplace_back(filt.breaks[m]);
    s.emplace_back(1, filt.indices[m]);
  }
  return PiecewiseLinear(std::move(t), std::move(s));
}

PiecewiseLinear pl_inverse(const PiecewiseLinear& f) {
  std::vector<Rational> t, s;
  for (std::size_t m = 0; m < f.breakpoints().size(); ++m) {
    t.push_back(f(f.breakpoints()[m]));
    s.push_back(1 / f.slopes()[m]);
  }
  return PiecewiseLinear(std::move(t), std::move(s));
}

std::vector<Rational> upper_breaks(const FiniteFiltration& filt) {
  const PiecewiseLinear phi = phi_from_filtration(filt);
  std::vector<Rational> u;
  for (long l : filt.breaks) u.push_back(phi(Rational(l)));
  return u;
}

WindowRatios criterion_window(const std::vector<FiniteFiltration>& levels) {
  bool any = false;
  WindowRatios w;
  for (const auto& f : levels)
    for (long x : f.breaks) {
      const Rational r(x, f.index_at(x));
      if (!any || r < w.min_ratio) w.min_ratio = r;
      if (!any || r > w.max_ratio) w.max_ratio = r;
      any = true;
    }
  if (!any) throw Error(ErrorCode::TooFewEntries, "no breaks in the window");
  return w;
}

FiniteFiltration synthetic_filtration(long q, int r, int l_max) {
  if (q < 2 || r < 1 || l_max < r) throw Error(ErrorCode::InvalidArgument, "synthetic filtration needs q >= 2 and 1 <= r <= l_max");
  FiniteFiltration f;
  f.level = l_max - r + 1;
  f.generators = 0;
  long pw = 1;
  for (int l = 1; l <= r; ++l) pw *= q;  // q^r
  long idx = q;
  for (int l = r; l <= l_max; ++l) {
    f.breaks.push_back(pw - 1);
    f.indices.push_back(idx);
    if (pw > std::numeric_limits<long>::max() / q) throw Error(ErrorCode::InvalidArgument, "synthetic filtration overflows");
    pw *= q;
    idx *= q;
  }
  f.order = f.indices.back();
  return f;
}

}  // namespace ramforge
