#pragma once

// Wild automorphisms sigma = x + O(x^2) of F_q((x)) and their ramification
// numbers i(sigma) = ord_x(sigma(x) - x) - 1.

#include <cstdint>
#include <optional>
#include <vector>

#include "ramforge/parallel.hpp"
#include "ramforge/series.hpp"

namespace ramforge {

class NottElem {
 public:
  /// Throws InvalidArgument unless s = x + O(x^2).
  explicit NottElem(Series<FqElem> s);
  static NottElem identity(const FqPtr& k, int D);

  const Series<FqElem>& series() const { return s_; }
  int trunc() const { return s_.trunc(); }
  NottElem operator*(const NottElem& b) const;  // this o b
  NottElem pow(std::uint64_t n) const;
  NottElem inverse() const;
  bool operator==(const NottElem& b) const { return s_ == b.s_; }

 private:
  Series<FqElem> s_;
};

/// i(sigma); nullopt means IDENTITY_AT_PRECISION (sigma = x mod x^(D+1)).
std::optional<long> ram_number(const NottElem& sigma);

struct RamProfile {
  std::vector<std::optional<long>> values;  // i_0 .. i_nmax
  int trunc = 0;
  int p = 2;

  /// Leading run of finite entries.
  std::vector<long> finite_prefix() const;
  bool complete() const;
};

/// i_n = i(sigma^{p^n}) for n = 0..n_max by repeated p-th iterates.
RamProfile ram_sequence(const NottElem& sigma, int n_max);

/// Filtration data of a finite quotient. indices[m] is the index (G : G[t])
/// for t in (breaks[m], breaks[m+1]]; the index is 1 for t <= breaks[0].
struct FiniteFiltration {
  int level = 0;
  int generators = 0;
  long order = 1;
  std::vector<long> breaks;
  std::vector<long> indices;

  /// (G : G[t]).
  long index_at(long t) const;
  /// Throws InvalidArgument unless breaks increase and indices are positive
  /// and nondecreasing.
  void validate() const;
  bool operator==(const FiniteFiltration&) const = default;
};

struct QuotientElement {
  std::vector<std::uint64_t> exponents;
  std::optional<long> i;  // nullopt only for the identity
};

inline constexpr long kDefaultEnumerationBudget = 10000;

/// All products prod g_j^{a_j}, 0 <= a_j < p^n, in lexicographic order of
/// exponent vectors. Generators must commute to truncation.
/// Errors: BUDGET_EXCEEDED, NONCOMMUTING_GENERATORS, IDENTITY_AT_PRECISION
/// (a nontrivial product is x mod x^(D+1)).
std::vector<QuotientElement> quotient_elements(const std::vector<NottElem>& gens, int n,
                                               long budget = kDefaultEnumerationBudget);

FiniteFiltration filtration_from_elements(const std::vector<QuotientElement>& elems, int level, int generators);

FiniteFiltration finite_quotient_filtration(const std::vector<NottElem>& gens, int n,
                                            long budget = kDefaultEnumerationBudget);

}  // namespace ramforge
