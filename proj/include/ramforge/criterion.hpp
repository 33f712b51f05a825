#pragma once

// Ramification-number tests: height, Sen congruences, the p^d ratio test with
// kappa detection, the closed-form growth law and wideg-based predictors.
// All verdicts are finite-window observations.

#include <optional>
#include <string>
#include <vector>

#include "ramforge/herbrand.hpp"
#include "ramforge/lubintate.hpp"

namespace ramforge {

enum class Verdict { CharZeroConsistent, CharPIndicated, Inconclusive };

std::string to_string(Verdict v);

struct CriterionReport {
  RamProfile profile;
  int d_expected = 0;
  std::optional<int> kappa;
  std::vector<Rational> ratios;  // ratios[n] = (i_{n+2} - i_{n+1}) / (i_{n+1} - i_n)
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Rational> lambda_observed;
};

struct HeightValue {
  Rational value;
  bool is_integer() const { return denominator(value) == 1; }
};

/// e log_p(wideg g) / v_K(g'(0)).
/// Errors: NOT_STABLE, NOT_P_POWER, INFINITE_AT_PRECISION.
HeightValue height(const Series<OKElem>& g);

/// i_n = i_{n-1} mod p^n over consecutive finite entries. TOO_FEW_ENTRIES
/// below two finite entries.
bool sen_check(const RamProfile& prof);

/// i_n >= 1 + p + ... + p^n for every finite entry.
bool lower_bound_check(const RamProfile& prof);

/// kappa = least index from which every ratio equals p^d.
/// CHAR_ZERO_CONSISTENT iff kappa exists; CHAR_P_INDICATED when the last two
/// ratios differ; INCONCLUSIVE otherwise. TOO_FEW_ENTRIES below three finite
/// entries.
CriterionReport ratio_check(const RamProfile& prof, int d);

/// i_kappa + (p^{d(n-kappa)} - 1) / (p^d - 1) * (i_{kappa+1} - i_kappa).
long closed_form_predict(long i_kappa, long i_kappa1, int d, int p, int n, int kappa = 0);

/// q^{l + n e} - 1. HYPOTHESIS_VIOLATED unless l > e / (p - 1).
long predict_in(int l, int n, const RingSpec& ring);

/// v_K(alpha - 1); nullopt if alpha = 1 at precision.
std::optional<long> unit_level(const OKElem& alpha);

/// Truncation degrees q^{l + n e} + 1, n = 0..n_max: just enough to observe
/// the predicted i_n.
std::vector<int> predicted_degrees(const RingSpec& ring, int l, int n_max);

/// Profile of the reduction of [alpha]_f: entry n is i of the reduction of
/// [alpha^{p^n}]_f at truncation degrees[n], computed by the solver (no
/// iterated composition). The ring precision must cover the working
/// precision of every degree (INSUFFICIENT_PRECISION otherwise).
RamProfile lt_profile(const FrobeniusSeries& f, const OKElem& alpha, const std::vector<int>& degrees);

/// Lemma-style predictor: m with m v(g'(0)) = v(u'(0)^{p^n} - 1), then
/// wideg(g^{o m}) - 1, computed on reductions at g's truncation.
/// Errors: NO_MATCHING_M, NOT_STABLE, NOT_INVERTIBLE, INFINITE_AT_PRECISION,
/// INVALID_ARGUMENT when n < min_n (the configured constant R).
long findin_predict(const Series<OKElem>& g, const Series<OKElem>& u, int n, int min_n = 0);

}  // namespace ramforge
