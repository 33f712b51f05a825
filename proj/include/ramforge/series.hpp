#pragma once

// Truncated power series over F_q or O_K/pi^N.
//
// Series<C>      c_1 x + ... + c_D x^D   (no constant term, ever)
// FullSeries<C>  c_0 + c_1 x + ... + c_D x^D (derivatives, u'(h), inverses)
// BiSeries<C>    sum c_ij x^i y^j, 1 <= i+j <= T
//
// Over O_K every coefficient carries its own pi-adic precision. A product
// coefficient c_k is given the min precision of every input coefficient that
// could contribute to it, even when the contributing term was skipped because
// its representative is zero.

#include <algorithm>
#include <climits>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "ramforge/error.hpp"
#include "ramforge/ring.hpp"

namespace ramforge {

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<FqElem> {
  using Ring = Fq;
  using RingPtr = FqPtr;
  using Acc = Fq::Raw;
  static constexpr bool kTracksPrecision = false;

  static FqElem zero(const Ring& k) { return k.zero(); }
  static FqElem one(const Ring& k) { return k.one(); }
  static FqElem from_int(const Ring& k, std::int64_t v) { return k.from_int(v); }
  static bool is_zero(const FqElem& a) { return a.is_zero(); }
  static bool is_unit(const FqElem& a) { return !a.is_zero(); }
  static FqElem inverse(const FqElem& a) { return a.inverse(); }
  static int prec(const FqElem&) { return INT_MAX; }
  static FqElem with_prec(const FqElem& a, int) { return a; }
  static int ring_prec(const Ring&) { return INT_MAX; }
  static bool same_ring(const Ring& a, const Ring& b) { return a.same_field(b); }

  static void fma(const Ring& k, Acc& acc, const FqElem& a, const FqElem& b) {
    Acc t{};
    k.mul(a.raw(), b.raw(), t);
    k.add(acc, t, acc);
  }
  static FqElem finish(const Ring& k, const Acc& acc, int) { return FqElem(&k, acc); }
};

template <>
struct CoeffTraits<OKElem> {
  using Ring = OKRing;
  using RingPtr = OKRingPtr;
  using Acc = OKRing::Raw;
  static constexpr bool kTracksPrecision = true;

  static OKElem zero(const Ring& R) { return R.zero(); }
  static OKElem one(const Ring& R) { return R.one(); }
  static OKElem from_int(const Ring& R, std::int64_t v) { return R.from_int(v); }
  static bool is_zero(const OKElem& a) { return a.is_zero(); }
  static bool is_unit(const OKElem& a) { return a.is_unit(); }
  static OKElem inverse(const OKElem& a) { return a.unit_inverse(); }
  static int prec(const OKElem& a) { return a.prec(); }
  static OKElem with_prec(const OKElem& a, int p) { return a.with_prec(p); }
  static int ring_prec(const Ring& R) { return R.prec(); }
  static bool same_ring(const Ring& a, const Ring& b) { return &a == &b || a.spec() == b.spec(); }

  static void fma(const Ring& R, Acc& acc, const OKElem& a, const OKElem& b) {
    Acc t{};
    R.raw_mul(a.raw(), b.raw(), t);
    R.raw_add(acc, t, acc);
  }
  static OKElem finish(const Ring& R, const Acc& acc, int prec) { return OKElem(&R, acc, prec); }
};

namespace detail {

// out[k] = sum_{i+j=k} a[i] b[j] for k <= D, where a[i] is structurally zero
// for i < lo_a (likewise b). Vectors are indexed by degree.
template <class C>
std::vector<C> mul_kernel(const typename CoeffTraits<C>::Ring& ring, const std::vector<C>& a, int lo_a,
                          const std::vector<C>& b, int lo_b, int D) {
  using T = CoeffTraits<C>;
  const int Da = static_cast<int>(a.size()) - 1, Db = static_cast<int>(b.size()) - 1;
  std::vector<typename T::Acc> acc(static_cast<std::size_t>(D) + 1, typename T::Acc{});
  std::vector<int> nz_b;
  for (int j = lo_b; j <= std::min(Db, D); ++j)
    if (!T::is_zero(b[static_cast<std::size_t>(j)])) nz_b.push_back(j);
  for (int i = lo_a; i <= std::min(Da, D - lo_b); ++i) {
    const C& ai = a[static_cast<std::size_t>(i)];
    if (T::is_zero(ai)) continue;
    for (int j : nz_b) {
      if (i + j > D) break;
      T::fma(ring, acc[static_cast<std::size_t>(i + j)], ai, b[static_cast<std::size_t>(j)]);
    }
  }
  std::vector<C> out;
  out.reserve(static_cast<std::size_t>(D) + 1);
  const int full = T::ring_prec(ring);
  if constexpr (T::kTracksPrecision) {
    // prefix minima of the input precisions
    std::vector<int> pa(static_cast<std::size_t>(D) + 1, full), pb(static_cast<std::size_t>(D) + 1, full);
    int m = full;
    for (int i = 0; i <= D; ++i) {
      if (i >= lo_a && i <= Da) m = std::min(m, T::prec(a[static_cast<std::size_t>(i)]));
      pa[static_cast<std::size_t>(i)] = m;
    }
    m = full;
    for (int j = 0; j <= D; ++j) {
      if (j >= lo_b && j <= Db) m = std::min(m, T::prec(b[static_cast<std::size_t>(j)]));
      pb[static_cast<std::size_t>(j)] = m;
    }
    for (int k = 0; k <= D; ++k) {
      int p = full;
      if (k - lo_b >= lo_a) p = std::min(pa[static_cast<std::size_t>(k - lo_b)], pb[static_cast<std::size_t>(k - lo_a)]);
      out.push_back(T::finish(ring, acc[static_cast<std::size_t>(k)], p));
    }
  } else {
    for (int k = 0; k <= D; ++k) out.push_back(T::finish(ring, acc[static_cast<std::size_t>(k)], full));
  }
  return out;
}

// sum_{k=0}^{D} outer[k] g^k truncated to degree D, g without constant term.
// Horner with progressive truncation: the k-th partial sum is only needed to
// degree D - k.
template <class C>
std::vector<C> horner(const typename CoeffTraits<C>::Ring& ring, const std::vector<C>& outer, const std::vector<C>& g,
                      int D) {
  using T = CoeffTraits<C>;
  const int Do = static_cast<int>(outer.size()) - 1;
  const int top = std::min(Do, D);
  std::vector<C> acc{outer[static_cast<std::size_t>(top)]};
  for (int k = top - 1; k >= 0; --k) {
    std::vector<C> next = mul_kernel<C>(ring, g, 1, acc, 0, D - k);
    next[0] = outer[static_cast<std::size_t>(k)];
    acc = std::move(next);
  }
  if (static_cast<int>(acc.size()) < D + 1) {
    // top < D: pad with zeros at the precision implied by the inputs
    const int full = T::ring_prec(ring);
    acc.resize(static_cast<std::size_t>(D) + 1, T::zero(ring));
    if constexpr (T::kTracksPrecision) {
      int m = full;
      for (const auto& c : g) m = std::min(m, T::prec(c));
      for (const auto& c : outer) m = std::min(m, T::prec(c));
      for (int k = top + 1; k <= D; ++k) acc[static_cast<std::size_t>(k)] = T::with_prec(acc[static_cast<std::size_t>(k)], m);
    }
  }
  return acc;
}

// A zero coefficient that is known to full ring precision contributes nothing,
// not even a precision bound, and can be skipped.
template <class C>
bool negligible(const typename CoeffTraits<C>::Ring& ring, const C& c) {
  using T = CoeffTraits<C>;
  return T::is_zero(c) && T::prec(c) >= T::ring_prec(ring);
}

}  // namespace detail

template <class C>
class FullSeries;

template <class C>
class Series {
 public:
  using Traits = CoeffTraits<C>;
  using Ring = typename Traits::Ring;
  using RingPtr = typename Traits::RingPtr;

  Series() = default;
  /// The zero series at truncation D.
  Series(RingPtr ring, int D) : ring_(std::move(ring)), D_(D) {
    if (!ring_) throw Error(ErrorCode::InvalidArgument, "series without a coefficient ring");
    if (D < 1) throw Error(ErrorCode::InvalidArgument, "truncation degree must be >= 1");
    c_.assign(static_cast<std::size_t>(D) + 1, Traits::zero(*ring_));
  }
  /// c[k-1] is the coefficient of x^k; missing coefficients are zero.
  Series(RingPtr ring, int D, const std::vector<C>& c) : Series(std::move(ring), D) {
    if (static_cast<int>(c.size()) > D) throw Error(ErrorCode::InvalidArgument, "more coefficients than the truncation degree");
    for (std::size_t k = 0; k < c.size(); ++k) set(static_cast<int>(k) + 1, c[k]);
  }
  static Series identity(RingPtr ring, int D) {
    Series s(ring, D);
    s.set(1, Traits::one(*s.ring_));
    return s;
  }
  static Series monomial(RingPtr ring, int D, int k, const C& c) {
    Series s(std::move(ring), D);
    s.set(k, c);
    return s;
  }
  /// Series with integer coefficients; ints[k-1] is the coefficient of x^k.
  static Series from_ints(RingPtr ring, int D, const std::vector<std::int64_t>& ints) {
    Series s(std::move(ring), D);
    if (static_cast<int>(ints.size()) > D) throw Error(ErrorCode::InvalidArgument, "more coefficients than the truncation degree");
    for (std::size_t k = 0; k < ints.size(); ++k) s.set(static_cast<int>(k) + 1, Traits::from_int(*s.ring_, ints[k]));
    return s;
  }
  /// Internal: adopt a degree-indexed coefficient vector (entry 0 is ignored).
  static Series adopt(RingPtr ring, std::vector<C> c) {
    Series s;
    s.ring_ = std::move(ring);
    s.D_ = static_cast<int>(c.size()) - 1;
    c[0] = Traits::zero(*s.ring_);
    s.c_ = std::move(c);
    return s;
  }

  const RingPtr& ring() const { return ring_; }
  int trunc() const { return D_; }
  const C& operator[](int k) const { return c_[index(k)]; }
  const C& coeff(int k) const { return c_[index(k)]; }
  void set(int k, const C& v) {
    if (ring_of(v) == nullptr || !Traits::same_ring(*ring_, *ring_of(v))) throw Error(ErrorCode::RingMismatch, "coefficient from a different ring");
    c_[index(k)] = v;
  }
  /// Degree-indexed storage; entry 0 is a structural zero.
  const std::vector<C>& data() const { return c_; }

  Series truncated(int D) const {
    if (D > D_) throw Error(ErrorCode::TruncationMismatch, "cannot extend truncation from " + std::to_string(D_) + " to " + std::to_string(D));
    std::vector<C> c(c_.begin(), c_.begin() + D + 1);
    return adopt(ring_, std::move(c));
  }

  /// Lowest degree with a nonzero representative; nullopt for the zero series.
  std::optional<int> order() const {
    for (int k = 1; k <= D_; ++k)
      if (!Traits::is_zero(c_[static_cast<std::size_t>(k)])) return k;
    return std::nullopt;
  }
  bool is_zero() const { return !order().has_value(); }
  /// Min coefficient precision (INT_MAX over F_q).
  int min_prec() const {
    int m = INT_MAX;
    for (int k = 1; k <= D_; ++k) m = std::min(m, Traits::prec(c_[static_cast<std::size_t>(k)]));
    return m;
  }

  Series operator+(const Series& b) const {
    check_compatible(b);
    Series r = *this;
    for (int k = 1; k <= D_; ++k) r.c_[static_cast<std::size_t>(k)] = c_[static_cast<std::size_t>(k)] + b.c_[static_cast<std::size_t>(k)];
    return r;
  }
  Series operator-(const Series& b) const {
    check_compatible(b);
    Series r = *this;
    for (int k = 1; k <= D_; ++k) r.c_[static_cast<std::size_t>(k)] = c_[static_cast<std::size_t>(k)] - b.c_[static_cast<std::size_t>(k)];
    return r;
  }
  Series operator-() const {
    Series r = *this;
    for (int k = 1; k <= D_; ++k) r.c_[static_cast<std::size_t>(k)] = -c_[static_cast<std::size_t>(k)];
    return r;
  }
  Series scaled(const C& s) const {
    Series r = *this;
    for (int k = 1; k <= D_; ++k) r.c_[static_cast<std::size_t>(k)] = s * c_[static_cast<std::size_t>(k)];
    return r;
  }
  bool operator==(const Series& b) const {
    if (D_ != b.D_ || !Traits::same_ring(*ring_, *b.ring_)) return false;
    for (int k = 1; k <= D_; ++k)
      if (!(c_[static_cast<std::size_t>(k)] == b.c_[static_cast<std::size_t>(k)])) return false;
    return true;
  }

  void check_compatible(const Series& b) const {
    if (!ring_ || !b.ring_) throw Error(ErrorCode::InvalidArgument, "uninitialized series");
    if (!Traits::same_ring(*ring_, *b.ring_)) throw Error(ErrorCode::RingMismatch, "series over different rings");
    if (D_ != b.D_) throw Error(ErrorCode::TruncationMismatch, "truncations " + std::to_string(D_) + " and " + std::to_string(b.D_) + " differ");
  }

  std::string to_string() const {
    std::string s;
    for (int k = 1; k <= D_; ++k) {
      const C& c = c_[static_cast<std::size_t>(k)];
      if (Traits::is_zero(c)) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c.to_string() + ")x^" + std::to_string(k);
    }
    return (s.empty() ? "0" : s) + " + O(x^" + std::to_string(D_ + 1) + ")";
  }

 private:
  static const Ring* ring_of(const C& v) {
    if constexpr (std::is_same_v<C, FqElem>) return v.field();
    else return v.ring();
  }
  std::size_t index(int k) const {
    if (k < 1 || k > D_) throw Error(ErrorCode::InvalidArgument, "degree " + std::to_string(k) + " outside 1.." + std::to_string(D_));
    return static_cast<std::size_t>(k);
  }

  RingPtr ring_;
  int D_ = 0;
  std::vector<C> c_;
};

template <class C>
class FullSeries {
 public:
  using Traits = CoeffTraits<C>;
  using RingPtr = typename Traits::RingPtr;

  FullSeries() = default;
  FullSeries(RingPtr ring, int D) : ring_(std::move(ring)), c_(static_cast<std::size_t>(D) + 1, Traits::zero(*ring_)) {
    if (D < 0) throw Error(ErrorCode::InvalidArgument, "negative truncation");
  }
  static FullSeries adopt(RingPtr ring, std::vector<C> c) {
    FullSeries s;
    s.ring_ = std::move(ring);
    s.c_ = std::move(c);
    return s;
  }
  /// The series with c_0 = 0.
  static FullSeries from(const Series<C>& a) { return adopt(a.ring(), a.data()); }

  const RingPtr& ring() const { return ring_; }
  int trunc() const { return static_cast<int>(c_.size()) - 1; }
  const C& operator[](int k) const { return c_.at(static_cast<std::size_t>(k)); }
  void set(int k, const C& v) { c_.at(static_cast<std::size_t>(k)) = v; }
  const std::vector<C>& data() const { return c_; }

  FullSeries operator+(const FullSeries& b) const {
    check(b);
    FullSeries r = *this;
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] + b.c_[k];
    return r;
  }
  FullSeries operator-(const FullSeries& b) const {
    check(b);
    FullSeries r = *this;
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] - b.c_[k];
    return r;
  }
  FullSeries operator*(const FullSeries& b) const {
    check(b);
    return adopt(ring_, detail::mul_kernel<C>(*ring_, c_, 0, b.c_, 0, trunc()));
  }
  /// Multiplicative inverse; the constant term must be a unit.
  FullSeries inverse() const {
    if (!Traits::is_unit(c_[0])) throw Error(ErrorCode::NotInvertible, "constant term is not a unit");
    const C inv0 = Traits::inverse(c_[0]);
    const int D = trunc();
    std::vector<C> r(static_cast<std::size_t>(D) + 1, Traits::zero(*ring_));
    r[0] = inv0;
    for (int k = 1; k <= D; ++k) {
      C s = Traits::zero(*ring_);
      for (int i = 1; i <= k; ++i)
        if (!Traits::is_zero(c_[static_cast<std::size_t>(i)])) s += c_[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(k - i)];
      r[static_cast<std::size_t>(k)] = -(s * inv0);
    }
    return adopt(ring_, std::move(r));
  }
  bool operator==(const FullSeries& b) const { return c_ == b.c_; }

 private:
  void check(const FullSeries& b) const {
    if (!Traits::same_ring(*ring_, *b.ring_)) throw Error(ErrorCode::RingMismatch, "series over different rings");
    if (c_.size() != b.c_.size()) throw Error(ErrorCode::TruncationMismatch, "truncations differ");
  }
  RingPtr ring_;
  std::vector<C> c_;
};

// ---------------------------------------------------------------------------
// Univariate operations

/// Product truncated to degree D; both inputs must share ring and D.
template <class C>
Series<C> mul(const Series<C>& a, const Series<C>& b) {
  a.check_compatible(b);
  return Series<C>::adopt(a.ring(), detail::mul_kernel<C>(*a.ring(), a.data(), 1, b.data(), 1, a.trunc()));
}

/// a * b where b has a constant term; truncated to a's degree.
template <class C>
Series<C> mul(const Series<C>& a, const FullSeries<C>& b) {
  if (!CoeffTraits<C>::same_ring(*a.ring(), *b.ring())) throw Error(ErrorCode::RingMismatch, "series over different rings");
  if (b.trunc() < a.trunc() - 1) throw Error(ErrorCode::TruncationMismatch, "multiplier truncated too low");
  return Series<C>::adopt(a.ring(), detail::mul_kernel<C>(*a.ring(), a.data(), 1, b.data(), 0, a.trunc()));
}

template <class C>
Series<C> power(const Series<C>& a, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "power of a series without constant term needs k >= 1");
  Series<C> r = a;
  for (int i = 1; i < k; ++i) r = mul(r, a);
  return r;
}

/// outer(inner(x)) to degree D; both inputs must share ring and D.
template <class C>
Series<C> compose(const Series<C>& outer, const Series<C>& inner) {
  outer.check_compatible(inner);
  return Series<C>::adopt(outer.ring(), detail::horner<C>(*outer.ring(), outer.data(), inner.data(), outer.trunc()));
}

/// outer(inner(x)) for an outer series with constant term; truncation is
/// min(outer, inner).
template <class C>
FullSeries<C> compose(const FullSeries<C>& outer, const Series<C>& inner) {
  const int D = std::min(outer.trunc(), inner.trunc());
  std::vector<C> g(inner.data().begin(), inner.data().begin() + D + 1);
  return FullSeries<C>::adopt(inner.ring(), detail::horner<C>(*inner.ring(), outer.data(), g, D));
}

/// Formal derivative; result has constant term a'(0) and truncation D-1.
template <class C>
FullSeries<C> derivative(const Series<C>& a) {
  using T = CoeffTraits<C>;
  FullSeries<C> r(a.ring(), a.trunc() - 1);
  for (int k = 1; k <= a.trunc(); ++k) r.set(k - 1, T::from_int(*a.ring(), k) * a[k]);
  return r;
}

/// Compositional inverse by Newton iteration h <- h - (u(h) - x) / u'(h).
template <class C>
Series<C> comp_inverse(const Series<C>& u) {
  using T = CoeffTraits<C>;
  if (!T::is_unit(u[1])) throw Error(ErrorCode::NotInvertible, "linear coefficient " + u[1].to_string() + " is not a unit");
  const int D = u.trunc();
  const Series<C> x = Series<C>::identity(u.ring(), D);
  Series<C> h = x.scaled(T::inverse(u[1]));
  if (D == 1) return h;
  const FullSeries<C> du = derivative(u);
  for (int good = 1; good < D; good *= 2) {
    const Series<C> err = compose(u, h) - x;
    if (err.is_zero()) break;
    FullSeries<C> dh = compose(du, h);
    FullSeries<C> dh_full(u.ring(), D - 1);
    for (int k = 0; k <= dh.trunc(); ++k) dh_full.set(k, dh[k]);
    h = h - mul(err, dh_full.inverse());
  }
  return h;
}

/// a^{o n} by binary powering; a^{o 0} = x.
template <class C>
Series<C> iterate(const Series<C>& a, std::uint64_t n) {
  Series<C> result = Series<C>::identity(a.ring(), a.trunc());
  Series<C> base = a;
  while (n > 0) {
    if (n & 1) result = compose(base, result);
    n >>= 1;
    if (n) base = compose(base, base);
  }
  return result;
}

/// Weierstrass degree: first unit (O_K) or nonzero (F_q) coefficient;
/// nullopt means INFINITE_AT_PRECISION.
template <class C>
std::optional<long> wideg(const Series<C>& a) {
  for (int k = 1; k <= a.trunc(); ++k)
    if (CoeffTraits<C>::is_unit(a[k])) return k;
  return std::nullopt;
}

/// Coefficientwise residue map O_K -> F_q.
Series<FqElem> reduce(const Series<OKElem>& a);

/// Canonical coefficientwise lift F_q -> O_K at the ring's precision.
Series<OKElem> lift(const Series<FqElem>& a, const OKRingPtr& ring);

/// Rebind a series to a ring with the same presentation (precision capped).
Series<OKElem> convert(const Series<OKElem>& a, const OKRingPtr& ring);

/// All coefficients agree mod pi^k.
bool congruent(const Series<OKElem>& a, const Series<OKElem>& b, int k);

/// Every coefficient truncated to precision k.
Series<OKElem> with_prec(const Series<OKElem>& a, int k);

// ---------------------------------------------------------------------------
// Bivariate series

template <class C>
class BiSeries {
 public:
  using Traits = CoeffTraits<C>;
  using RingPtr = typename Traits::RingPtr;

  BiSeries() = default;
  BiSeries(RingPtr ring, int T) : ring_(std::move(ring)), T_(T) {
    if (T < 1) throw Error(ErrorCode::InvalidArgument, "total-degree truncation must be >= 1");
    c_.assign(static_cast<std::size_t>((T + 1) * (T + 1)), Traits::zero(*ring_));
  }

  const RingPtr& ring() const { return ring_; }
  int trunc() const { return T_; }
  const C& operator()(int i, int j) const { return c_[index(i, j)]; }
  void set(int i, int j, const C& v) { c_[index(i, j)] = v; }

  /// F(x, 0) and F(0, y) as univariate series of truncation T.
  Series<C> x_part() const {
    Series<C> s(ring_, T_);
    for (int i = 1; i <= T_; ++i) s.set(i, (*this)(i, 0));
    return s;
  }
  Series<C> y_part() const {
    Series<C> s(ring_, T_);
    for (int j = 1; j <= T_; ++j) s.set(j, (*this)(0, j));
    return s;
  }
  /// F(y, x).
  BiSeries swapped() const {
    BiSeries r(ring_, T_);
    for (int i = 0; i <= T_; ++i)
      for (int j = 0; i + j <= T_; ++j)
        if (i + j >= 1) r.set(j, i, (*this)(i, j));
    return r;
  }
  BiSeries truncated(int T) const {
    if (T > T_) throw Error(ErrorCode::TruncationMismatch, "cannot extend truncation");
    BiSeries r(ring_, T);
    for (int i = 0; i <= T; ++i)
      for (int j = 0; i + j <= T; ++j)
        if (i + j >= 1) r.set(i, j, (*this)(i, j));
    return r;
  }

  BiSeries operator+(const BiSeries& b) const { return combine(b, [](const C& u, const C& v) { return u + v; }); }
  BiSeries operator-(const BiSeries& b) const { return combine(b, [](const C& u, const C& v) { return u - v; }); }
  bool operator==(const BiSeries& b) const { return T_ == b.T_ && c_ == b.c_; }
  bool is_zero() const {
    for (const auto& c : c_)
      if (!Traits::is_zero(c)) return false;
    return true;
  }

  /// x + y at truncation T.
  static BiSeries sum(RingPtr ring, int T) {
    BiSeries r(ring, T);
    r.set(1, 0, Traits::one(*r.ring_));
    r.set(0, 1, Traits::one(*r.ring_));
    return r;
  }

  void check_compatible(const BiSeries& b) const {
    if (!Traits::same_ring(*ring_, *b.ring_)) throw Error(ErrorCode::RingMismatch, "series over different rings");
    if (T_ != b.T_) throw Error(ErrorCode::TruncationMismatch, "truncations differ");
  }

  std::string to_string() const {
    std::string s;
    for (int d = 1; d <= T_; ++d)
      for (int i = d; i >= 0; --i) {
        const C& c = (*this)(i, d - i);
        if (Traits::is_zero(c)) continue;
        if (!s.empty()) s += " + ";
        s += "(" + c.to_string() + ")x^" + std::to_string(i) + "y^" + std::to_string(d - i);
      }
    return s.empty() ? "0" : s;
  }

 private:
  template <class Op>
  BiSeries combine(const BiSeries& b, Op op) const {
    check_compatible(b);
    BiSeries r(ring_, T_);
    for (int i = 0; i <= T_; ++i)
      for (int j = 0; i + j <= T_; ++j)
        if (i + j >= 1) r.set(i, j, op((*this)(i, j), b(i, j)));
    return r;
  }
  std::size_t index(int i, int j) const {
    if (i < 0 || j < 0 || i + j > T_ || i + j == 0)
      throw Error(ErrorCode::InvalidArgument, "bidegree (" + std::to_string(i) + "," + std::to_string(j) + ") outside the truncation");
    return static_cast<std::size_t>(i * (T_ + 1) + j);
  }

  RingPtr ring_;
  int T_ = 0;
  std::vector<C> c_;
};

/// Product with total-degree truncation T.
template <class C>
BiSeries<C> mul(const BiSeries<C>& a, const BiSeries<C>& b) {
  using T = CoeffTraits<C>;
  a.check_compatible(b);
  const int D = a.trunc();
  std::vector<std::vector<typename T::Acc>> acc(static_cast<std::size_t>(D) + 1, std::vector<typename T::Acc>(static_cast<std::size_t>(D) + 1));
  int pmin = T::ring_prec(*a.ring());
  for (int i1 = 0; i1 <= D; ++i1)
    for (int j1 = 0; i1 + j1 <= D; ++j1) {
      if (i1 + j1 == 0) continue;
      const C& x = a(i1, j1);
      pmin = std::min(pmin, T::prec(x));
      if (T::is_zero(x)) continue;
      for (int i2 = 0; i1 + j1 + i2 <= D; ++i2)
        for (int j2 = 0; i1 + j1 + i2 + j2 <= D; ++j2) {
          if (i2 + j2 == 0) continue;
          const C& y = b(i2, j2);
          if (T::is_zero(y)) continue;
          T::fma(*a.ring(), acc[static_cast<std::size_t>(i1 + i2)][static_cast<std::size_t>(j1 + j2)], x, y);
        }
    }
  for (int i = 0; i <= D; ++i)
    for (int j = 0; i + j <= D; ++j)
      if (i + j >= 1) pmin = std::min(pmin, T::prec(b(i, j)));
  BiSeries<C> r(a.ring(), D);
  for (int i = 0; i <= D; ++i)
    for (int j = 0; i + j <= D; ++j)
      if (i + j >= 2) r.set(i, j, T::finish(*a.ring(), acc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], pmin));
  return r;
}

/// F(a(x), b(x)); output truncation min(D_a, D_b, T).
template <class C>
Series<C> substitute(const BiSeries<C>& F, const Series<C>& a, const Series<C>& b) {
  if (!CoeffTraits<C>::same_ring(*a.ring(), *b.ring()) || !CoeffTraits<C>::same_ring(*a.ring(), *F.ring()))
    throw Error(ErrorCode::RingMismatch, "series over different rings");
  const int D = std::min({a.trunc(), b.trunc(), F.trunc()});
  const Series<C> at = a.truncated(D), bt = b.truncated(D);
  // powers of a and b
  std::vector<Series<C>> pa{Series<C>(a.ring(), D), at}, pb{Series<C>(a.ring(), D), bt};
  for (int k = 2; k <= D; ++k) {
    pa.push_back(mul(pa.back(), at));
    pb.push_back(mul(pb.back(), bt));
  }
  Series<C> r(a.ring(), D);
  for (int i = 0; i <= D; ++i)
    for (int j = 0; i + j <= D; ++j) {
      if (i + j == 0) continue;
      const C& c = F(i, j);
      if (detail::negligible(*F.ring(), c)) continue;
      Series<C> term = (i == 0) ? pb[static_cast<std::size_t>(j)]
                     : (j == 0) ? pa[static_cast<std::size_t>(i)]
                                : mul(pa[static_cast<std::size_t>(i)], pb[static_cast<std::size_t>(j)]);
      r = r + term.scaled(c);
    }
  return r;
}

/// phi(F(x, y)) with total-degree truncation min(D_phi, T).
template <class C>
BiSeries<C> compose(const Series<C>& phi, const BiSeries<C>& F) {
  const int T = std::min(phi.trunc(), F.trunc());
  const BiSeries<C> Ft = F.truncated(T);
  BiSeries<C> r(F.ring(), T), pw = Ft;
  for (int k = 1; k <= T; ++k) {
    if (k > 1) pw = mul(pw, Ft);
    BiSeries<C> term = pw;
    for (int i = 0; i <= T; ++i)
      for (int j = 0; i + j <= T; ++j)
        if (i + j >= 1) term.set(i, j, phi[k] * pw(i, j));
    r = r + term;
  }
  return r;
}

/// F(a(x), b(y)) with total-degree truncation min(D_a, D_b, T).
template <class C>
BiSeries<C> substitute_separate(const BiSeries<C>& F, const Series<C>& a, const Series<C>& b) {
  const int T = std::min({a.trunc(), b.trunc(), F.trunc()});
  BiSeries<C> ax(F.ring(), T), by(F.ring(), T);
  for (int k = 1; k <= T; ++k) {
    ax.set(k, 0, a[k]);
    by.set(0, k, b[k]);
  }
  std::vector<BiSeries<C>> pa{ax}, pb{by};
  for (int k = 2; k <= T; ++k) {
    pa.push_back(mul(pa.back(), ax));
    pb.push_back(mul(pb.back(), by));
  }
  BiSeries<C> r(F.ring(), T);
  for (int i = 0; i <= T; ++i)
    for (int j = 0; i + j <= T; ++j) {
      if (i + j == 0) continue;
      if (detail::negligible(*F.ring(), F(i, j))) continue;
      BiSeries<C> term = (i == 0) ? pb[static_cast<std::size_t>(j - 1)]
                       : (j == 0) ? pa[static_cast<std::size_t>(i - 1)]
                                  : mul(pa[static_cast<std::size_t>(i - 1)], pb[static_cast<std::size_t>(j - 1)]);
      const C& c = F(i, j);
      for (int u = 0; u <= T; ++u)
        for (int v = 0; u + v <= T; ++v)
          if (u + v >= 1) term.set(u, v, c * term(u, v));
      r = r + term;
    }
  return r;
}

BiSeries<FqElem> reduce(const BiSeries<OKElem>& F);

}  // namespace ramforge
