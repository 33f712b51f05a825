#pragma once

// Lubin-Tate formal groups over O_K and their endomorphisms.
//
// Everything is driven by one solver: given Frobenius series f_l, f_r with the
// same linear coefficient Pi and a linear part a x, find the unique
// phi = a x + O(x^2) with f_l(phi) = phi(f_r), one coefficient at a time. Each
// coefficient solve divides by Pi (1 - Pi^(k-1)), i.e. by pi times a unit.
//
// Inputs are taken as exact elements: the canonical representative of every
// coefficient (and of alpha) is what gets plugged into the equations.

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "ramforge/series.hpp"

namespace ramforge {

/// A polynomial f with f'(0) of valuation 1 and f = x^q mod pi.
class FrobeniusSeries {
 public:
  /// c[k-1] is the coefficient of x^k. Throws HypothesisViolated when the
  /// Lubin-Tate conditions fail.
  FrobeniusSeries(OKRingPtr ring, std::vector<OKElem> c);
  /// pi x + x^q for the ring's uniformizer.
  static FrobeniusSeries standard(const OKRingPtr& ring);
  /// (1 + x)^p - 1; Lubin-Tate exactly when O_K = Z_p.
  static FrobeniusSeries multiplicative(const OKRingPtr& ring);

  const OKRingPtr& ring() const { return ring_; }
  int degree() const { return static_cast<int>(c_.size()); }
  /// Zero beyond the degree.
  OKElem coeff(int k) const;
  const OKElem& uniformizer() const { return c_[0]; }
  Series<OKElem> series(int D) const;

 private:
  OKRingPtr ring_;
  std::vector<OKElem> c_;
};

/// N_target + 1 + floor(log_q D): precision is only lost along chains
/// k -> q k of solved coefficients.
int working_precision(int N_target, long q, int D);

/// The unique phi = linear x + O(x^2) with f_left(phi) = phi(f_right), to
/// degree D, every coefficient correct mod pi^N_target.
/// Errors: PRECISION_EXHAUSTED, RESIDUAL_NONZERO, HYPOTHESIS_VIOLATED
/// (linear parts do not intertwine).
Series<OKElem> lt_solve(const OKElem& linear, const FrobeniusSeries& f_left, const FrobeniusSeries& f_right, int D,
                        int N_target);

/// Bivariate form: the unique F = a x + b y + O(deg 2) with
/// f_left(F(x, y)) = F(f_x(x), f_y(y)) to total degree T.
BiSeries<OKElem> lt_solve(const OKElem& a, const OKElem& b, const FrobeniusSeries& f_left, const FrobeniusSeries& f_x,
                          const FrobeniusSeries& f_y, int T, int N_target);

class FormalGroupLaw;
using FormalGroupLawPtr = std::shared_ptr<const FormalGroupLaw>;

class FormalGroupLaw {
 public:
  /// F = lt_solve(x + y, f, (f, f)) to total degree T, with all axioms
  /// verified mod pi^N_target before returning (RESIDUAL_NONZERO otherwise).
  static FormalGroupLawPtr build(const FrobeniusSeries& f, int T, int N_target);

  const OKRingPtr& ring() const { return frob_.ring(); }
  const FrobeniusSeries& frobenius() const { return frob_; }
  const BiSeries<OKElem>& law() const { return F_; }
  int trunc() const { return F_.trunc(); }
  int target_prec() const { return N_target_; }

  /// [alpha]_F to degree D, correct mod pi^N_target. Cached.
  Series<OKElem> endo(const OKElem& alpha, int D) const;

  FormalGroupLaw(const FormalGroupLaw&) = delete;
  FormalGroupLaw& operator=(const FormalGroupLaw&) = delete;

 private:
  FormalGroupLaw(FrobeniusSeries f, BiSeries<OKElem> F, int N_target)
      : frob_(std::move(f)), F_(std::move(F)), N_target_(N_target) {}

  FrobeniusSeries frob_;
  BiSeries<OKElem> F_;
  int N_target_;
  mutable std::mutex mu_;
  mutable std::map<std::string, Series<OKElem>> cache_;
};

/// [alpha]_f without a group object (no cache).
Series<OKElem> lt_endo(const FrobeniusSeries& f, const OKElem& alpha, int D, int N_target);

struct AxiomReport {
  bool identity = false;
  bool commutative = false;
  bool associative = false;
  bool frobenius_endo = false;
  bool ok() const { return identity && commutative && associative && frobenius_endo; }
};

/// F(x,0) = x, F(0,y) = y, F(x,y) = F(y,x), associativity and
/// f(F) = F(f, f), all mod pi^k to the law's truncation.
AxiomReport check_axioms(const FormalGroupLaw& G, int k);

struct LazardReport {
  /// Highest total degree through which F agrees with
  /// x + y + ((x+y)^q - x^q - y^q) / (s (Pi - Pi^q)), for s = +1 and s = -1.
  int matched_plus = 0;
  int matched_minus = 0;
  int target_degree = 0;   // q + 1
  int compared_prec = 0;   // coefficients compared mod pi^compared_prec
  bool matches = false;    // exactly one convention reaches target_degree
  int sign_convention = 0; // the matching s, or 0
};

/// Compares F with the Lazard polynomial mod degree q + 2 under both signs.
LazardReport lazard_compare(const FormalGroupLaw& G);

/// lazard_compare, throwing NEITHER_MATCHES unless exactly one sign matches.
LazardReport lazard_check(const FormalGroupLaw& G);

/// Reduction of the law mod pi.
BiSeries<FqElem> group_reduce(const FormalGroupLaw& G);

/// Reduction of [gamma]_F to degree D. Asserts the shape
/// lambda(x^{q^t}) with lambda invertible, t = v_K(gamma)
/// (RESIDUAL_NONZERO otherwise).
Series<FqElem> reduce_endo(const FormalGroupLaw& G, const OKElem& gamma, int D);

/// gamma with g(x) = gamma(x^{q^s}), to degree floor(D / q^s). Throws
/// REDUCTION_MISMATCH when g has coefficients off the q^s-multiples.
Series<FqElem> frobenius_factor(const Series<FqElem>& g, int s);

}  // namespace ramforge
