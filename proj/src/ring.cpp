#include "ramforge/ring.hpp"

#include <algorithm>
#include <sstream>

namespace ramforge {

namespace {

using Poly = std::vector<std::int64_t>;  // over F_p, low -> high, trimmed

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::int64_t mod_p(std::int64_t v, std::int64_t p) {
  v %= p;
  return v < 0 ? v + p : v;
}

std::int64_t inv_mod_p(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, b = a, k = p - 2;
  while (k > 0) {
    if (k & 1) r = r * b % p;
    b = b * b % p;
    k >>= 1;
  }
  return r;
}

Poly poly_mod(Poly a, const Poly& m, std::int64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::int64_t lead_inv = inv_mod_p(m.back(), p);
  while (a.size() > dm) {
    const std::int64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = mod_p(a[shift + i] - c * m[i], p);
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(r), m, p);
}

Poly poly_powmod(Poly base, std::int64_t k, const Poly& m, std::int64_t p) {
  Poly r{1};
  while (k > 0) {
    if (k & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    k >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin's test: P of degree n is irreducible iff x^(p^n) = x mod P and
// gcd(x^(p^(n/r)) - x, P) = 1 for each prime r | n.
bool irreducible_mod_p(Poly P, std::int64_t p) {
  for (auto& c : P) c = mod_p(c, p);
  trim(P);
  const int n = static_cast<int>(P.size()) - 1;
  if (n < 1) return false;
  if (n == 1) return true;
  auto frob_power = [&](int k) {
    Poly h{0, 1};
    for (int i = 0; i < k; ++i) h = poly_powmod(h, p, P, p);
    return h;
  };
  Poly h = frob_power(n);
  Poly x = poly_mod(Poly{0, 1}, P, p);
  if (h != x) return false;
  for (int r = 2; r <= n; ++r) {
    if (n % r != 0 || !is_prime(r)) continue;
    Poly g = frob_power(n / r);
    g.resize(std::max<std::size_t>(g.size(), 2), 0);
    g[1] = mod_p(g[1] - 1, p);
    trim(g);
    if (g.empty()) return false;
    if (poly_gcd(P, g, p).size() != 1) return false;
  }
  return true;
}

long ipow(long b, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r *= b;
  return r;
}

int ceil_div(int a, int b) { return a <= 0 ? 0 : (a + b - 1) / b; }

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

}  // namespace

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// RingSpec

long RingSpec::q() const { return ipow(p, f); }

void RingSpec::validate() const {
  if (!is_prime(p)) invalid("p = " + std::to_string(p) + " is not prime");
  if (p > 1000003) invalid("p too large");
  if (f < 1 || e < 1) invalid("f and e must be >= 1");
  if (e * f > kMaxTowerDegree) invalid("e*f exceeds " + std::to_string(kMaxTowerDegree));
  if (prec < 1) invalid("prec must be >= 1");

  if (f == 1) {
    const bool placeholder = inertial_poly == std::vector<std::int64_t>{1};
    const bool linear = inertial_poly.size() == 2 && inertial_poly[1] == 1;
    if (!placeholder && !linear) invalid("inertial_poly for f = 1 must be [1] or monic of degree 1");
  } else {
    if (static_cast<int>(inertial_poly.size()) != f + 1 || inertial_poly.back() != 1)
      invalid("inertial_poly must be monic of degree f");
    if (!irreducible_mod_p(inertial_poly, p)) invalid("inertial_poly is reducible mod p");
  }

  if (static_cast<int>(eisenstein_poly.size()) != e + 1) invalid("eisenstein_poly must have degree e");
  for (const auto& c : eisenstein_poly)
    if (c.empty() || static_cast<int>(c.size()) > f) invalid("eisenstein_poly coefficient has wrong length");
  const auto& lead = eisenstein_poly.back();
  if (lead[0] != 1 || std::any_of(lead.begin() + 1, lead.end(), [](std::int64_t v) { return v != 0; }))
    invalid("eisenstein_poly must be monic");
  for (int i = 0; i < e; ++i)
    for (std::int64_t v : eisenstein_poly[static_cast<std::size_t>(i)])
      if (v % p != 0) invalid("eisenstein_poly coefficient " + std::to_string(i) + " is not divisible by p");
  bool unit_part = false;
  for (std::int64_t v : eisenstein_poly[0]) unit_part |= mod_p(v / p, p) != 0;
  if (!unit_part) invalid("eisenstein_poly constant term must have valuation exactly e");
}

std::vector<std::int64_t> standard_inertial_poly(int p, int f) {
  if (f == 1) return {1};
  if (p == 2 && f == 2) return {1, 1, 1};
  if (p == 2 && f == 3) return {1, 1, 0, 1};
  if (p == 3 && f == 2) return {1, 0, 1};
  if (p == 5 && f == 2) return {2, 0, 1};
  const long count = ipow(p, f);
  for (long n = 0; n < count; ++n) {
    Poly P(static_cast<std::size_t>(f) + 1, 0);
    long m = n;
    for (int i = 0; i < f; ++i) {
      P[static_cast<std::size_t>(i)] = m % p;
      m /= p;
    }
    P.back() = 1;
    if (irreducible_mod_p(P, p)) return P;
  }
  invalid("no irreducible polynomial found");
}

RingSpec RingSpec::standard(int p, int f, int e, int prec) {
  RingSpec s;
  s.p = p;
  s.f = f;
  s.e = e;
  s.prec = prec;
  if (is_prime(p) && f >= 1) s.inertial_poly = standard_inertial_poly(p, f);
  s.eisenstein_poly.assign(static_cast<std::size_t>(std::max(e, 0)) + 1, {0});
  s.eisenstein_poly.front() = {-static_cast<std::int64_t>(p)};
  s.eisenstein_poly.back() = {1};
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Fq

FqPtr Fq::make(int p, int f, const std::vector<std::int64_t>& poly) {
  if (!is_prime(p) || f < 1 || f > kMaxTowerDegree) invalid("bad residue field parameters");
  std::shared_ptr<Fq> k(new Fq());
  k->p_ = p;
  k->f_ = f;
  k->q_ = ipow(p, f);
  k->poly_ = poly;
  if (f > 1) {
    if (static_cast<int>(poly.size()) != f + 1 || poly.back() != 1 || !irreducible_mod_p(poly, p))
      invalid("residue field polynomial must be monic irreducible of degree f");
    for (int i = 0; i < f; ++i) k->mod_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(mod_p(poly[static_cast<std::size_t>(i)], p));
  }
  return k;
}

FqElem Fq::zero() const { return FqElem(this, Raw{}); }

FqElem Fq::one() const { return from_int(1); }

FqElem Fq::from_int(std::int64_t v) const {
  Raw c{};
  c[0] = static_cast<std::uint32_t>(mod_p(v, p_));
  return FqElem(this, c);
}

FqElem Fq::from_coeffs(const std::vector<std::int64_t>& coeffs) const {
  if (static_cast<int>(coeffs.size()) > f_) invalid("too many coordinates for F_q element");
  Raw c{};
  for (std::size_t j = 0; j < coeffs.size(); ++j) c[j] = static_cast<std::uint32_t>(mod_p(coeffs[j], p_));
  return FqElem(this, c);
}

FqElem Fq::generator() const {
  if (f_ == 1) {
    // the placeholder presentation has no adjoined root; use the root of a
    // linear inertial polynomial when one was given
    if (poly_.size() == 2) return from_int(-poly_[0]);
    return one();
  }
  Raw c{};
  c[1] = 1;
  return FqElem(this, c);
}

std::vector<FqElem> Fq::elements() const {
  std::vector<FqElem> out;
  out.reserve(static_cast<std::size_t>(q_));
  for (long n = 0; n < q_; ++n) {
    Raw c{};
    long m = n;
    for (int j = 0; j < f_; ++j) {
      c[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(m % p_);
      m /= p_;
    }
    out.emplace_back(this, c);
  }
  return out;
}

bool Fq::same_field(const Fq& o) const {
  if (this == &o) return true;
  return p_ == o.p_ && f_ == o.f_ && mod_ == o.mod_;
}

void Fq::add(const Raw& a, const Raw& b, Raw& out) const {
  for (int j = 0; j < f_; ++j) {
    const auto s = a[static_cast<std::size_t>(j)] + b[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(j)] = s >= static_cast<std::uint32_t>(p_) ? s - static_cast<std::uint32_t>(p_) : s;
  }
}

void Fq::sub(const Raw& a, const Raw& b, Raw& out) const {
  for (int j = 0; j < f_; ++j) {
    const auto x = a[static_cast<std::size_t>(j)], y = b[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(j)] = x >= y ? x - y : x + static_cast<std::uint32_t>(p_) - y;
  }
}

void Fq::mul(const Raw& a, const Raw& b, Raw& out) const {
  const std::uint64_t p = static_cast<std::uint64_t>(p_);
  if (f_ == 1) {
    out[0] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[0]) * b[0] % p);
    return;
  }
  std::array<std::uint64_t, 2 * kMaxTowerDegree> t{};
  for (int i = 0; i < f_; ++i) {
    if (a[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; j < f_; ++j)
      t[static_cast<std::size_t>(i + j)] =
          (t[static_cast<std::size_t>(i + j)] + static_cast<std::uint64_t>(a[static_cast<std::size_t>(i)]) * b[static_cast<std::size_t>(j)]) % p;
  }
  for (int k = 2 * f_ - 2; k >= f_; --k) {
    const std::uint64_t c = t[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    for (int i = 0; i < f_; ++i) {
      auto& slot = t[static_cast<std::size_t>(k - f_ + i)];
      slot = (slot + (p - c) * mod_[static_cast<std::size_t>(i)]) % p;
    }
  }
  for (int j = 0; j < f_; ++j) out[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(t[static_cast<std::size_t>(j)]);
}

// ---------------------------------------------------------------------------
// FqElem

void FqElem::check_same(const FqElem& b) const {
  if (field_ == nullptr || b.field_ == nullptr) invalid("uninitialized F_q element");
  if (field_ != b.field_ && !field_->same_field(*b.field_)) throw Error(ErrorCode::RingMismatch, "F_q elements from different fields");
}

bool FqElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](std::uint32_t v) { return v == 0; });
}

bool FqElem::is_one() const {
  if (c_[0] != 1) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](std::uint32_t v) { return v == 0; });
}

FqElem FqElem::operator+(const FqElem& b) const {
  check_same(b);
  Fq::Raw r{};
  field_->add(c_, b.c_, r);
  return FqElem(field_, r);
}

FqElem FqElem::operator-(const FqElem& b) const {
  check_same(b);
  Fq::Raw r{};
  field_->sub(c_, b.c_, r);
  return FqElem(field_, r);
}

FqElem FqElem::operator-() const { return field_->zero() - *this; }

FqElem FqElem::operator*(const FqElem& b) const {
  check_same(b);
  Fq::Raw r{};
  field_->mul(c_, b.c_, r);
  return FqElem(field_, r);
}

FqElem FqElem::pow(std::uint64_t k) const {
  FqElem r = field_->one(), b = *this;
  while (k > 0) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

FqElem FqElem::inverse() const {
  if (is_zero()) throw Error(ErrorCode::ZeroInput, "inverse of 0 in F_q");
  return pow(static_cast<std::uint64_t>(field_->q() - 2));
}

bool FqElem::operator==(const FqElem& b) const {
  if (field_ != b.field_ && (field_ == nullptr || b.field_ == nullptr || !field_->same_field(*b.field_))) return false;
  return c_ == b.c_;
}

std::string FqElem::to_string() const {
  if (field_ == nullptr || field_->f() == 1) return std::to_string(c_[0]);
  std::string s = "[";
  for (int j = 0; j < field_->f(); ++j) {
    if (j) s += ",";
    s += std::to_string(c_[static_cast<std::size_t>(j)]);
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// OKRing

OKRingPtr OKRing::make(const RingSpec& spec) {
  spec.validate();
  std::shared_ptr<OKRing> R(new OKRing());
  R->spec_ = spec;
  R->q_ = spec.q();
  R->residue_ = Fq::make(spec.p, spec.f, spec.inertial_poly);

  const int M = ceil_div(spec.prec, spec.e) + 1;
  R->pw_.assign(1, 1);
  for (int k = 1; k <= M; ++k) {
    const unsigned __int128 next = static_cast<unsigned __int128>(R->pw_.back()) * static_cast<unsigned>(spec.p);
    if (next >= (static_cast<unsigned __int128>(1) << 62))
      throw Error(ErrorCode::PrecisionExhausted, "p^" + std::to_string(M) + " exceeds the 62-bit coefficient range");
    R->pw_.push_back(static_cast<std::uint64_t>(next));
  }
  if (spec.p == 2) R->mask_ = R->pw_.back() - 1;

  const int f = spec.f, e = spec.e;
  R->inertial_.assign(static_cast<std::size_t>(f), 0);
  if (f > 1)
    for (int i = 0; i < f; ++i) R->inertial_[static_cast<std::size_t>(i)] = R->reduce_signed(spec.inertial_poly[static_cast<std::size_t>(i)]);
  R->eisenstein_.assign(static_cast<std::size_t>(e * f), 0);
  Raw eta{};
  for (int i = 0; i < e; ++i) {
    const auto& c = spec.eisenstein_poly[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < c.size(); ++j) {
      R->eisenstein_[static_cast<std::size_t>(i * f) + j] = R->reduce_signed(c[j]);
      eta[static_cast<std::size_t>(i * f) + j] = R->reduce_signed(-(c[j] / spec.p));
    }
  }
  // pi^e = -sum E_i pi^i = p * eta, so 1/pi = pi^(e-1) * eta^-1 / p
  Raw eta_inv{};
  R->raw_unit_inverse(eta, eta_inv);
  Raw pi_pow{};
  pi_pow[static_cast<std::size_t>((e - 1) * f)] = 1;
  R->raw_mul(pi_pow, eta_inv, R->pi_inverse_factor_);
  return R;
}

OKRingPtr OKRing::with_precision(int prec) const {
  RingSpec s = spec_;
  s.prec = prec;
  return make(s);
}

bool OKRing::same_structure(const OKRing& o) const {
  if (this == &o) return true;
  return spec_.p == o.spec_.p && spec_.f == o.spec_.f && spec_.e == o.spec_.e &&
         spec_.inertial_poly == o.spec_.inertial_poly && spec_.eisenstein_poly == o.spec_.eisenstein_poly;
}

std::uint64_t OKRing::reduce_signed(std::int64_t v) const {
  const auto m = static_cast<std::int64_t>(modulus());
  std::int64_t r = v % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t OKRing::mulmod(std::uint64_t a, std::uint64_t b) const {
  if (mask_ != 0) return (a * b) & mask_;
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % modulus());
}

int OKRing::vp(std::uint64_t v) const {
  if (spec_.p == 2) return __builtin_ctzll(v);
  int k = 0;
  const auto p = static_cast<std::uint64_t>(spec_.p);
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

void OKRing::zq_mul(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out) const {
  const int f = spec_.f;
  if (f == 1) {
    out[0] = mulmod(a[0], b[0]);
    return;
  }
  const std::uint64_t m = modulus();
  std::array<std::uint64_t, 2 * kMaxTowerDegree> t{};
  for (int i = 0; i < f; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < f; ++j) {
      const std::uint64_t s = t[static_cast<std::size_t>(i + j)] + mulmod(a[i], b[j]);
      t[static_cast<std::size_t>(i + j)] = s >= m ? s - m : s;
    }
  }
  for (int k = 2 * f - 2; k >= f; --k) {
    const std::uint64_t c = t[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    for (int i = 0; i < f; ++i) {
      auto& slot = t[static_cast<std::size_t>(k - f + i)];
      const std::uint64_t sub = mulmod(c, inertial_[static_cast<std::size_t>(i)]);
      slot = slot >= sub ? slot - sub : slot + m - sub;
    }
  }
  for (int j = 0; j < f; ++j) out[j] = t[static_cast<std::size_t>(j)];
}

void OKRing::raw_add(const Raw& a, const Raw& b, Raw& out) const {
  const std::uint64_t m = modulus();
  const int d = spec_.e * spec_.f;
  for (int k = 0; k < d; ++k) {
    const std::uint64_t s = a[static_cast<std::size_t>(k)] + b[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)] = s >= m ? s - m : s;
  }
}

void OKRing::raw_sub(const Raw& a, const Raw& b, Raw& out) const {
  const std::uint64_t m = modulus();
  const int d = spec_.e * spec_.f;
  for (int k = 0; k < d; ++k) {
    const std::uint64_t x = a[static_cast<std::size_t>(k)], y = b[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)] = x >= y ? x - y : x + m - y;
  }
}

void OKRing::raw_neg(const Raw& a, Raw& out) const {
  const std::uint64_t m = modulus();
  const int d = spec_.e * spec_.f;
  for (int k = 0; k < d; ++k) {
    const std::uint64_t x = a[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)] = x == 0 ? 0 : m - x;
  }
}

void OKRing::raw_mul(const Raw& a, const Raw& b, Raw& out) const {
  const int e = spec_.e, f = spec_.f;
  if (e == 1 && f == 1) {
    out[0] = mulmod(a[0], b[0]);
    return;
  }
  const std::uint64_t m = modulus();
  std::array<std::uint64_t, 2 * kMaxTowerDegree> acc{};
  std::array<std::uint64_t, kMaxTowerDegree> t{};
  auto nonzero = [f](const std::uint64_t* x) {
    for (int j = 0; j < f; ++j)
      if (x[j]) return true;
    return false;
  };
  for (int i = 0; i < e; ++i) {
    const std::uint64_t* ai = a.data() + i * f;
    if (!nonzero(ai)) continue;
    for (int j = 0; j < e; ++j) {
      const std::uint64_t* bj = b.data() + j * f;
      if (!nonzero(bj)) continue;
      zq_mul(ai, bj, t.data());
      for (int k = 0; k < f; ++k) {
        auto& slot = acc[static_cast<std::size_t>((i + j) * f + k)];
        const std::uint64_t s = slot + t[static_cast<std::size_t>(k)];
        slot = s >= m ? s - m : s;
      }
    }
  }
  for (int k = 2 * e - 2; k >= e; --k) {
    const std::uint64_t* c = acc.data() + k * f;
    if (!nonzero(c)) continue;
    for (int i = 0; i < e; ++i) {
      zq_mul(c, eisenstein_.data() + i * f, t.data());
      for (int j = 0; j < f; ++j) {
        auto& slot = acc[static_cast<std::size_t>((k - e + i) * f + j)];
        const std::uint64_t sub = t[static_cast<std::size_t>(j)];
        slot = slot >= sub ? slot - sub : slot + m - sub;
      }
    }
  }
  for (int k = 0; k < e * f; ++k) out[static_cast<std::size_t>(k)] = acc[static_cast<std::size_t>(k)];
}

void OKRing::canonicalize(Raw& a, int prec) const {
  const int e = spec_.e, f = spec_.f;
  const int M = digits();
  for (int i = 0; i < e; ++i) {
    const int k = std::min(ceil_div(prec - i, e), M);
    const std::uint64_t m = pw_[static_cast<std::size_t>(k)];
    for (int j = 0; j < f; ++j) {
      auto& c = a[static_cast<std::size_t>(i * f + j)];
      if (c >= m) c %= m;
    }
  }
  for (int k = e * f; k < kMaxTowerDegree; ++k) a[static_cast<std::size_t>(k)] = 0;
}

bool OKRing::raw_is_zero(const Raw& a) const {
  for (int k = 0; k < spec_.e * spec_.f; ++k)
    if (a[static_cast<std::size_t>(k)]) return false;
  return true;
}

MaybeInt OKRing::raw_valuation(const Raw& a) const {
  const int e = spec_.e, f = spec_.f;
  MaybeInt best;
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < f; ++j) {
      const std::uint64_t c = a[static_cast<std::size_t>(i * f + j)];
      if (c == 0) continue;
      const long v = static_cast<long>(e) * vp(c) + i;
      if (!best || v < *best) best = v;
    }
  return best;
}

void OKRing::raw_pi_divide(const Raw& a, Raw& out) const {
  Raw t{};
  raw_mul(a, pi_inverse_factor_, t);
  const auto p = static_cast<std::uint64_t>(spec_.p);
  for (int k = 0; k < spec_.e * spec_.f; ++k) {
    if (t[static_cast<std::size_t>(k)] % p != 0) throw Error(ErrorCode::NotDivisible, "element is not divisible by pi");
    out[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k)] / p;
  }
}

void OKRing::raw_unit_inverse(const Raw& a, Raw& out) const {
  // residue inverse, then Newton x <- x (2 - a x)
  Fq::Raw r{};
  const auto p = static_cast<std::uint64_t>(spec_.p);
  for (int j = 0; j < spec_.f; ++j) r[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(a[static_cast<std::size_t>(j)] % p);
  FqElem res(residue_.get(), r);
  if (res.is_zero()) throw Error(ErrorCode::NotAUnit, "element has positive valuation");
  const FqElem inv = res.inverse();
  Raw x{};
  for (int j = 0; j < spec_.f; ++j) x[static_cast<std::size_t>(j)] = inv.coeff(j);
  Raw one{};
  one[0] = 1;
  Raw two{};
  two[0] = 2 % modulus();
  for (int it = 0; it < 80; ++it) {
    Raw ax{}, t{};
    raw_mul(a, x, ax);
    if (ax == one) break;
    raw_sub(two, ax, t);
    raw_mul(x, t, x);
  }
  out = x;
}

OKElem OKRing::zero() const { return OKElem(this, Raw{}, spec_.prec); }

OKElem OKRing::one() const { return from_int(1); }

OKElem OKRing::from_int(std::int64_t v) const {
  Raw c{};
  c[0] = reduce_signed(v);
  return OKElem(this, c, spec_.prec);
}

OKElem OKRing::from_table(const std::vector<std::vector<std::int64_t>>& table, int prec) const {
  const int e = spec_.e, f = spec_.f;
  if (static_cast<int>(table.size()) > e) invalid("coefficient table has more than e rows");
  Raw c{};
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (static_cast<int>(table[i].size()) > f) invalid("coefficient table row " + std::to_string(i) + " has more than f entries");
    for (std::size_t j = 0; j < table[i].size(); ++j) c[i * static_cast<std::size_t>(f) + j] = reduce_signed(table[i][j]);
  }
  if (prec < 0) invalid("negative precision");
  return OKElem(this, c, std::min(prec, spec_.prec));
}

OKElem OKRing::uniformizer() const {
  Raw c{};
  if (spec_.e == 1) {
    c[0] = 0;
    for (int j = 0; j < spec_.f; ++j) {
      const std::int64_t v = j < static_cast<int>(spec_.eisenstein_poly[0].size()) ? spec_.eisenstein_poly[0][static_cast<std::size_t>(j)] : 0;
      c[static_cast<std::size_t>(j)] = reduce_signed(-v);
    }
  } else {
    c[static_cast<std::size_t>(spec_.f)] = 1;
  }
  return OKElem(this, c, spec_.prec);
}

OKElem OKRing::omega() const {
  Raw c{};
  if (spec_.f == 1) {
    c[0] = spec_.inertial_poly.size() == 2 ? reduce_signed(-spec_.inertial_poly[0]) : 1;
  } else {
    c[1] = 1;
  }
  return OKElem(this, c, spec_.prec);
}

OKElem OKRing::lift(const FqElem& r) const {
  if (r.field() == nullptr || !residue_->same_field(*r.field())) throw Error(ErrorCode::RingMismatch, "residue from a different field");
  Raw c{};
  for (int j = 0; j < spec_.f; ++j) c[static_cast<std::size_t>(j)] = r.coeff(j);
  return OKElem(this, c, spec_.prec);
}

OKElem OKRing::teichmuller(const FqElem& r) const {
  if (r.is_zero()) throw Error(ErrorCode::ZeroInput, "teichmuller of 0");
  OKElem x = lift(r);
  for (int it = 0; it <= spec_.prec + 2; ++it) {
    OKElem y = x.pow(static_cast<std::uint64_t>(q_));
    if (y == x) break;
    x = y;
  }
  if (!(x.pow(static_cast<std::uint64_t>(q_ - 1)) == one())) throw Error(ErrorCode::ResidualNonzero, "teichmuller iteration did not converge");
  return x;
}

OKElem OKRing::convert(const OKElem& a) const {
  if (a.ring() == nullptr || !same_structure(*a.ring())) throw Error(ErrorCode::RingMismatch, "cannot convert between different presentations");
  return OKElem(this, a.raw(), std::min(a.prec(), spec_.prec));
}

// ---------------------------------------------------------------------------
// OKElem

OKElem::OKElem(const OKRing* ring, const OKRing::Raw& c, int prec) : ring_(ring), c_(c), prec_(prec) {
  if (prec_ < 0) prec_ = 0;
  ring_->canonicalize(c_, prec_);
}

void OKElem::check_same(const OKElem& b) const {
  if (ring_ == nullptr || b.ring_ == nullptr) invalid("uninitialized O_K element");
  if (ring_ != b.ring_ && !(ring_->spec() == b.ring_->spec()))
    throw Error(ErrorCode::RingMismatch, "O_K elements from different rings");
}

std::uint64_t OKElem::coeff(int i, int j) const { return c_[static_cast<std::size_t>(i * ring_->f() + j)]; }

OKElem OKElem::operator+(const OKElem& b) const {
  check_same(b);
  OKRing::Raw r{};
  ring_->raw_add(c_, b.c_, r);
  return OKElem(ring_, r, std::min(prec_, b.prec_));
}

OKElem OKElem::operator-(const OKElem& b) const {
  check_same(b);
  OKRing::Raw r{};
  ring_->raw_sub(c_, b.c_, r);
  return OKElem(ring_, r, std::min(prec_, b.prec_));
}

OKElem OKElem::operator-() const {
  OKRing::Raw r{};
  ring_->raw_neg(c_, r);
  return OKElem(ring_, r, prec_);
}

OKElem OKElem::operator*(const OKElem& b) const {
  check_same(b);
  OKRing::Raw r{};
  ring_->raw_mul(c_, b.c_, r);
  return OKElem(ring_, r, std::min(prec_, b.prec_));
}

OKElem OKElem::pow(std::uint64_t k) const {
  OKElem r(ring_, ring_->one().raw(), prec_), b = *this;
  while (k > 0) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

MaybeInt OKElem::valuation() const { return ring_->raw_valuation(c_); }

bool OKElem::is_zero() const { return ring_->raw_is_zero(c_); }

bool OKElem::is_unit() const {
  const MaybeInt v = valuation();
  return v && *v == 0;
}

bool OKElem::divisible_by_pi_power(int k) const {
  const MaybeInt v = valuation();
  if (v) return *v >= k;
  if (prec_ >= k) return true;
  throw Error(ErrorCode::InsufficientPrecision,
              "element is 0 mod pi^" + std::to_string(prec_) + "; divisibility by pi^" + std::to_string(k) + " undecidable");
}

OKElem OKElem::unit_inverse() const {
  if (!is_unit()) throw Error(ErrorCode::NotAUnit, to_string() + " is not a unit");
  OKRing::Raw r{};
  ring_->raw_unit_inverse(c_, r);
  return OKElem(ring_, r, prec_);
}

OKElem OKElem::pi_divide(int k) const {
  if (k < 0) invalid("negative pi-power");
  const MaybeInt v = valuation();
  if (v && *v < k) throw Error(ErrorCode::NotDivisible, to_string() + " has valuation " + std::to_string(*v) + " < " + std::to_string(k));
  if (!v && prec_ < k) throw Error(ErrorCode::InsufficientPrecision, "division by pi^" + std::to_string(k) + " exceeds known precision");
  OKRing::Raw r = c_;
  int prec = prec_;
  for (int s = 0; s < k; ++s) {
    ring_->raw_pi_divide(r, r);
    --prec;
    ring_->canonicalize(r, prec);
  }
  return OKElem(ring_, r, prec);
}

FqElem OKElem::residue() const {
  Fq::Raw r{};
  const auto p = static_cast<std::uint64_t>(ring_->p());
  for (int j = 0; j < ring_->f(); ++j) r[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(c_[static_cast<std::size_t>(j)] % p);
  return FqElem(ring_->residue_field().get(), r);
}

OKElem OKElem::with_prec(int prec) const {
  if (prec >= prec_) return *this;
  return OKElem(ring_, c_, prec);
}

bool OKElem::operator==(const OKElem& b) const {
  if (ring_ != b.ring_ && (ring_ == nullptr || b.ring_ == nullptr || !(ring_->spec() == b.ring_->spec()))) return false;
  return prec_ == b.prec_ && c_ == b.c_;
}

std::string OKElem::key() const {
  std::string s;
  for (int k = 0; k < ring_->e() * ring_->f(); ++k) {
    s += std::to_string(c_[static_cast<std::size_t>(k)]);
    s += ',';
  }
  return s + "@" + std::to_string(prec_);
}

std::string OKElem::to_string() const {
  std::ostringstream os;
  const int e = ring_->e(), f = ring_->f();
  if (e == 1 && f == 1) {
    os << c_[0];
  } else {
    os << '[';
    for (int i = 0; i < e; ++i) {
      if (i) os << ',';
      os << '[';
      for (int j = 0; j < f; ++j) {
        if (j) os << ',';
        os << c_[static_cast<std::size_t>(i * f + j)];
      }
      os << ']';
    }
    os << ']';
  }
  os << " mod pi^" << prec_;
  return os.str();
}

bool congruent(const OKElem& a, const OKElem& b, int k) { return (a - b).divisible_by_pi_power(k); }

}  // namespace ramforge
