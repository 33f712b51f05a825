#pragma once

// Exact arithmetic in O_K = W(F_q)[pi]/(E(pi)) modulo pi^N and in its residue
// field F_q. O_K is presented as a tower: an unramified step
// Z_p[w]/(P(w)) of degree f followed by an Eisenstein step of degree e.
//
// Elements borrow their ring: OKElem and FqElem hold a plain pointer to the
// ring object, which is always owned through a shared_ptr (OKRingPtr, FqPtr).
// Containers (Series, FormalGroupLaw, ...) keep that shared_ptr alive; callers
// that hold bare elements must keep the ring alive themselves.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ramforge/error.hpp"

namespace ramforge {

/// Largest supported e*f (and f for F_q).
inline constexpr int kMaxTowerDegree = 8;

/// Valuation result; std::nullopt means INFINITE_AT_PRECISION.
using MaybeInt = std::optional<long>;

struct RingSpec {
  int p = 2;
  int f = 1;
  int e = 1;
  /// Coefficients low -> high of a monic degree-f polynomial over Z whose
  /// reduction is irreducible mod p. For f == 1 the placeholder {1} means Z_p.
  std::vector<std::int64_t> inertial_poly{1};
  /// Coefficients low -> high of a monic Eisenstein polynomial of degree e;
  /// each coefficient is an element of the unramified step in the w-basis.
  std::vector<std::vector<std::int64_t>> eisenstein_poly{{-2}, {1}};
  /// pi-adic precision N.
  int prec = 16;

  long q() const;
  int degree() const { return e * f; }

  /// Throws Error(InvalidArgument) when an invariant fails.
  void validate() const;

  /// The shipped presentation: tabulated inertial polynomial and
  /// Eisenstein polynomial pi^e - p.
  static RingSpec standard(int p, int f, int e, int prec);

  bool operator==(const RingSpec&) const = default;
};

/// Deterministic choice of inertial polynomial for (p, f): a fixed table for
/// the common cases, else the lexicographically smallest monic irreducible.
std::vector<std::int64_t> standard_inertial_poly(int p, int f);

bool is_prime(long n);

class Fq;
class FqElem;
class OKRing;
class OKElem;
using FqPtr = std::shared_ptr<const Fq>;
using OKRingPtr = std::shared_ptr<const OKRing>;

// ---------------------------------------------------------------------------
// Residue field F_q = F_p[t]/(P mod p)

class Fq {
 public:
  using Raw = std::array<std::uint32_t, kMaxTowerDegree>;

  /// `poly` as in RingSpec::inertial_poly.
  static FqPtr make(int p, int f, const std::vector<std::int64_t>& poly);

  int p() const { return p_; }
  int f() const { return f_; }
  long q() const { return q_; }
  const std::vector<std::int64_t>& poly() const { return poly_; }

  FqElem zero() const;
  FqElem one() const;
  FqElem from_int(std::int64_t v) const;
  /// Element with the given t-basis coordinates (reduced mod p).
  FqElem from_coeffs(const std::vector<std::int64_t>& c) const;
  /// The class of t.
  FqElem generator() const;
  /// Enumerates all q elements in a fixed order (lexicographic coordinates).
  std::vector<FqElem> elements() const;

  bool same_field(const Fq& other) const;

  // raw layer
  void add(const Raw& a, const Raw& b, Raw& out) const;
  void sub(const Raw& a, const Raw& b, Raw& out) const;
  void mul(const Raw& a, const Raw& b, Raw& out) const;

 private:
  Fq() = default;
  int p_ = 2;
  int f_ = 1;
  long q_ = 2;
  std::vector<std::int64_t> poly_;
  std::array<std::uint32_t, kMaxTowerDegree> mod_{};  // non-leading coeffs of P mod p
};

class FqElem {
 public:
  FqElem() = default;
  FqElem(const Fq* field, const Fq::Raw& c) : field_(field), c_(c) {}

  const Fq* field() const { return field_; }
  const Fq::Raw& raw() const { return c_; }
  std::uint32_t coeff(int j) const { return c_[static_cast<std::size_t>(j)]; }

  bool is_zero() const;
  bool is_one() const;
  FqElem operator+(const FqElem& b) const;
  FqElem operator-(const FqElem& b) const;
  FqElem operator-() const;
  FqElem operator*(const FqElem& b) const;
  FqElem& operator+=(const FqElem& b) { return *this = *this + b; }
  FqElem& operator-=(const FqElem& b) { return *this = *this - b; }
  FqElem& operator*=(const FqElem& b) { return *this = *this * b; }
  FqElem pow(std::uint64_t k) const;
  /// Throws ZeroInput for 0.
  FqElem inverse() const;
  bool operator==(const FqElem& b) const;

  std::string to_string() const;

 private:
  void check_same(const FqElem& b) const;
  const Fq* field_ = nullptr;
  Fq::Raw c_{};
};

// ---------------------------------------------------------------------------
// O_K mod pi^N

class OKRing {
 public:
  using Raw = std::array<std::uint64_t, kMaxTowerDegree>;

  static OKRingPtr make(const RingSpec& spec);
  /// Same presentation at a different pi-adic precision.
  OKRingPtr with_precision(int prec) const;

  const RingSpec& spec() const { return spec_; }
  int p() const { return spec_.p; }
  int f() const { return spec_.f; }
  int e() const { return spec_.e; }
  int prec() const { return spec_.prec; }
  long q() const { return q_; }
  const FqPtr& residue_field() const { return residue_; }

  OKElem zero() const;
  OKElem one() const;
  OKElem from_int(std::int64_t v) const;
  /// table[i][j] is the coefficient of w^j pi^i (i < e, j < f).
  OKElem from_table(const std::vector<std::vector<std::int64_t>>& table, int prec) const;
  OKElem uniformizer() const;
  /// Root w of the inertial polynomial (generator of the unramified step).
  OKElem omega() const;
  /// Canonical lift: the residue coordinates placed on pi^0 with digits in [0, p).
  OKElem lift(const FqElem& r) const;
  /// Teichmuller representative of a nonzero residue (fixed point of x -> x^q).
  OKElem teichmuller(const FqElem& r) const;
  /// Rebinds an element of a ring with the same presentation to this ring;
  /// precision is capped at ours.
  OKElem convert(const OKElem& a) const;

  bool same_structure(const OKRing& other) const;

  // raw layer: values reduced mod p^M coefficientwise, M = ceil(N/e) + 1.
  std::uint64_t modulus() const { return pw_.back(); }
  int digits() const { return static_cast<int>(pw_.size()) - 1; }
  void raw_add(const Raw& a, const Raw& b, Raw& out) const;
  void raw_sub(const Raw& a, const Raw& b, Raw& out) const;
  void raw_neg(const Raw& a, Raw& out) const;
  void raw_mul(const Raw& a, const Raw& b, Raw& out) const;
  /// Reduces to the canonical representative mod pi^prec.
  void canonicalize(Raw& a, int prec) const;
  MaybeInt raw_valuation(const Raw& a) const;
  bool raw_is_zero(const Raw& a) const;
  /// Exact division by pi of a raw value of positive valuation.
  void raw_pi_divide(const Raw& a, Raw& out) const;
  /// Inverse of a unit modulo p^M (full raw precision).
  void raw_unit_inverse(const Raw& a, Raw& out) const;

 private:
  OKRing() = default;
  void zq_mul(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out) const;
  std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t reduce_signed(std::int64_t v) const;
  int vp(std::uint64_t v) const;

  RingSpec spec_;
  long q_ = 2;
  FqPtr residue_;
  std::vector<std::uint64_t> pw_;           // p^0 .. p^M
  std::uint64_t mask_ = 0;                   // p^M - 1 when p == 2
  std::vector<std::uint64_t> inertial_;      // non-leading coeffs of P mod p^M (length f)
  std::vector<std::uint64_t> eisenstein_;    // e*f: non-leading coeffs of E
  Raw pi_inverse_factor_{};                  // pi^(e-1) * eta^-1 with pi^e = p * eta
};

class OKElem {
 public:
  OKElem() = default;
  OKElem(const OKRing* ring, const OKRing::Raw& c, int prec);

  const OKRing* ring() const { return ring_; }
  const OKRing::Raw& raw() const { return c_; }
  int prec() const { return prec_; }
  /// Coefficient of w^j pi^i in canonical form.
  std::uint64_t coeff(int i, int j) const;

  OKElem operator+(const OKElem& b) const;
  OKElem operator-(const OKElem& b) const;
  OKElem operator-() const;
  /// Precision of the product is the min of the inputs' precisions.
  OKElem operator*(const OKElem& b) const;
  OKElem& operator+=(const OKElem& b) { return *this = *this + b; }
  OKElem& operator-=(const OKElem& b) { return *this = *this - b; }
  OKElem& operator*=(const OKElem& b) { return *this = *this * b; }
  OKElem pow(std::uint64_t k) const;

  /// v_K; nullopt when the element is 0 mod pi^prec.
  MaybeInt valuation() const;
  bool is_zero() const;
  bool is_unit() const;
  /// True iff v_K(this) >= k. Throws InsufficientPrecision when undecidable.
  bool divisible_by_pi_power(int k) const;
  /// Throws NotAUnit.
  OKElem unit_inverse() const;
  /// Exact division by pi^k; precision drops by k. Throws NotDivisible.
  OKElem pi_divide(int k) const;
  FqElem residue() const;
  /// Truncate to a lower precision (no-op when prec >= current).
  OKElem with_prec(int prec) const;

  /// Exact comparison of canonical forms and precisions.
  bool operator==(const OKElem& b) const;
  /// Canonical text encoding, used as a cache key.
  std::string key() const;
  std::string to_string() const;

 private:
  void check_same(const OKElem& b) const;
  const OKRing* ring_ = nullptr;
  OKRing::Raw c_{};
  int prec_ = 0;
};

/// a == b mod pi^k (both must be known to precision >= k, else throws).
bool congruent(const OKElem& a, const OKElem& b, int k);

}  // namespace ramforge
