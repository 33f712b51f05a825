#include "ramforge/criterion.hpp"

#include "ramforge/parallel.hpp"

namespace ramforge {

namespace {

using boost::multiprecision::cpp_int;

std::optional<int> log_p(const cpp_int& v, int p) {
  if (v < 1) return std::nullopt;
  int k = 0;
  cpp_int x = v;
  while (x % p == 0) {
    x /= p;
    ++k;
  }
  if (x != 1) return std::nullopt;
  return k;
}

long to_long(const cpp_int& v) {
  if (v > cpp_int(std::numeric_limits<long>::max()) || v < cpp_int(std::numeric_limits<long>::min()))
    throw Error(ErrorCode::InvalidArgument, "value exceeds 64 bits");
  return static_cast<long>(v);
}

long ipow(long b, long k) {
  cpp_int r = 1;
  for (long i = 0; i < k; ++i) r *= b;
  return to_long(r);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CharZeroConsistent: return "CHAR_ZERO_CONSISTENT";
    case Verdict::CharPIndicated: return "CHAR_P_INDICATED";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

HeightValue height(const Series<OKElem>& g) {
  const MaybeInt v = g[1].valuation();
  if (!v || *v == 0) throw Error(ErrorCode::NotStable, "g'(0) must be a nonzero nonunit");
  const auto w = wideg(g);
  if (!w) throw Error(ErrorCode::InfiniteAtPrecision, "no unit coefficient up to the truncation");
  const auto k = log_p(*w, g.ring()->p());
  if (!k) throw Error(ErrorCode::NotPPower, "wideg " + std::to_string(*w) + " is not a power of p");
  return HeightValue{Rational(g.ring()->e() * *k, *v)};
}

bool sen_check(const RamProfile& prof) {
  const auto v = prof.finite_prefix();
  if (v.size() < 2) throw Error(ErrorCode::TooFewEntries, "need at least two finite entries");
  long pn = 1;
  for (std::size_t n = 1; n < v.size(); ++n) {
    pn *= prof.p;
    if (((v[n] - v[n - 1]) % pn + pn) % pn != 0) return false;
  }
  return true;
}

bool lower_bound_check(const RamProfile& prof) {
  long bound = 0, pn = 1;
  const auto v = prof.finite_prefix();
  for (std::size_t n = 0; n < v.size(); ++n) {
    bound += pn;
    pn *= prof.p;
    if (v[n] < bound) return false;
  }
  return true;
}

CriterionReport ratio_check(const RamProfile& prof, int d) {
  const auto v = prof.finite_prefix();
  if (v.size() < 3) throw Error(ErrorCode::TooFewEntries, "need at least three finite entries");
  CriterionReport rep;
  rep.profile = prof;
  rep.d_expected = d;
  for (std::size_t n = 0; n + 2 < v.size(); ++n) {
    const long den = v[n + 1] - v[n];
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "repeated ramification number");
    rep.ratios.push_back(Rational(v[n + 2] - v[n + 1], den));
  }
  const Rational target(ipow(prof.p, d));
  for (std::size_t k = rep.ratios.size(); k-- > 0;) {
    if (rep.ratios[k] != target) break;
    rep.kappa = static_cast<int>(k);
  }
  const std::size_t m = rep.ratios.size();
  if (rep.kappa) rep.verdict = Verdict::CharZeroConsistent;
  else if (m >= 2 && rep.ratios[m - 1] != rep.ratios[m - 2]) rep.verdict = Verdict::CharPIndicated;
  else rep.verdict = Verdict::Inconclusive;

  const Rational& last = rep.ratios.back();
  if (denominator(last) == 1 && (m == 1 || rep.ratios[m - 2] == last))
    if (auto k = log_p(numerator(last), prof.p)) rep.lambda_observed = Rational(*k);
  return rep;
}

long closed_form_predict(long i_kappa, long i_kappa1, int d, int p, int n, int kappa) {
  if (n < kappa) throw Error(ErrorCode::InvalidArgument, "n must be >= kappa");
  if (d < 1 || p < 2) throw Error(ErrorCode::InvalidArgument, "need d >= 1 and p >= 2");
  cpp_int pd = 1, pdn = 1;
  for (int i = 0; i < d; ++i) pd *= p;
  for (int i = 0; i < n - kappa; ++i) pdn *= pd;
  const cpp_int num = (pdn - 1) * (i_kappa1 - i_kappa);
  if (num % (pd - 1) != 0) throw Error(ErrorCode::NotIntegral, "closed form is not an integer");
  return to_long(i_kappa + num / (pd - 1));
}

long predict_in(int l, int n, const RingSpec& ring) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 0");
  if (static_cast<long>(l) * (ring.p - 1) <= ring.e)
    throw Error(ErrorCode::HypothesisViolated, "level " + std::to_string(l) + " is not above e/(p-1)");
  return ipow(ring.q(), l + static_cast<long>(n) * ring.e) - 1;
}

std::optional<long> unit_level(const OKElem& alpha) {
  const OKRing& R = *alpha.ring();
  return (alpha - R.one()).valuation();
}

std::vector<int> predicted_degrees(const RingSpec& ring, int l, int n_max) {
  std::vector<int> out;
  for (int n = 0; n <= n_max; ++n) {
    const long v = predict_in(l, n, ring) + 2;
    if (v > std::numeric_limits<int>::max()) throw Error(ErrorCode::BudgetExceeded, "truncation degree too large");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

RamProfile lt_profile(const FrobeniusSeries& f, const OKElem& alpha, const std::vector<int>& degrees) {
  const OKRingPtr& R = f.ring();
  if (degrees.empty()) throw Error(ErrorCode::InvalidArgument, "no truncation degrees given");
  for (int D : degrees)
    if (R->prec() < working_precision(1, R->q(), D))
      throw Error(ErrorCode::InsufficientPrecision, "ring precision " + std::to_string(R->prec()) + " too low for degree " + std::to_string(D));
  const auto a = R->convert(alpha);
  std::vector<OKElem> powers{a};
  for (std::size_t n = 1; n < degrees.size(); ++n) powers.push_back(powers.back().pow(static_cast<std::uint64_t>(R->p())));

  RamProfile prof;
  prof.p = R->p();
  prof.values.resize(degrees.size());
  parallel_for(degrees.size(), [&](std::size_t n) {
    const Series<FqElem> s = reduce(lt_endo(f, powers[n], degrees[n], 1));
    prof.values[n] = ram_number(NottElem(s));
  });
  // an identity entry hides every later one
  for (std::size_t n = 0; n < prof.values.size(); ++n)
    if (!prof.values[n])
      for (std::size_t k = n + 1; k < prof.values.size(); ++k) prof.values[k].reset();
  prof.trunc = *std::max_element(degrees.begin(), degrees.end());
  return prof;
}

long findin_predict(const Series<OKElem>& g, const Series<OKElem>& u, int n, int min_n) {
  if (n < min_n) throw Error(ErrorCode::InvalidArgument, "n below the configured constant R = " + std::to_string(min_n));
  const MaybeInt s = g[1].valuation();
  if (!s || *s == 0) throw Error(ErrorCode::NotStable, "g'(0) must be a nonzero nonunit");
  if (!u[1].is_unit()) throw Error(ErrorCode::NotInvertible, "u'(0) is not a unit");
  OKElem un = u[1];
  for (int i = 0; i < n; ++i) un = un.pow(static_cast<std::uint64_t>(g.ring()->p()));
  const MaybeInt val = (un - g.ring()->one()).valuation();
  if (!val) throw Error(ErrorCode::InfiniteAtPrecision, "u'(0)^(p^n) = 1 at precision");
  if (*val % *s != 0)
    throw Error(ErrorCode::NoMatchingM, "v(u'(0)^(p^n) - 1) = " + std::to_string(*val) + " is not a multiple of " + std::to_string(*s));
  const long m = *val / *s;
  const auto w = wideg(iterate(reduce(g), static_cast<std::uint64_t>(m)));
  if (!w) throw Error(ErrorCode::InfiniteAtPrecision, "g^(o m) has no nonzero coefficient up to the truncation");
  return *w - 1;
}

}  // namespace ramforge
