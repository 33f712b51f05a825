#pragma once

// JSON encodings of the domain values. Every document carries "format": 1 and
// a "kind"; readers report schema violations as SCHEMA_ERROR with a JSON path
// ("$.coeffs[3].v").
//
// An O_K element is {"v": ..., "prec": k}: v is an integer when e = f = 1,
// else the e x f table of canonical coefficients of w^j pi^i. Readers also
// accept a bare integer or table, taken at the ring's full precision.

#include <json.hpp>
#include <string>

#include "ramforge/criterion.hpp"
#include "ramforge/lifting.hpp"

namespace ramforge {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

Json to_json(const RingSpec& spec);
RingSpec ring_spec_from_json(const Json& j, const std::string& path = "$");

Json to_json(const OKElem& a);
OKElem ok_elem_from_json(const OKRingPtr& R, const Json& j, const std::string& path = "$");

Json to_json(const FqElem& a);
FqElem fq_elem_from_json(const FqPtr& k, const Json& j, const std::string& path = "$");

Json to_json(const Series<OKElem>& s);
/// The ring is read from the document.
Series<OKElem> ok_series_from_json(const Json& j, const std::string& path = "$");
/// The document's ring must have this ring's presentation; elements are rebound to R.
Series<OKElem> ok_series_from_json(const OKRingPtr& R, const Json& j, const std::string& path = "$");

Json to_json(const Series<FqElem>& s);
Series<FqElem> fq_series_from_json(const Json& j, const std::string& path = "$");

Json to_json(const FormalGroupLaw& G);
/// Rebuilds the group from its Frobenius series and checks the stored law
/// against it (RESIDUAL_NONZERO on disagreement).
FormalGroupLawPtr group_from_json(const Json& j, const std::string& path = "$");

Json to_json(const RamProfile& prof);
RamProfile ram_profile_from_json(const Json& j, const std::string& path = "$");

Json to_json(const FiniteFiltration& filt);
FiniteFiltration filtration_from_json(const Json& j, const std::string& path = "$");

/// Rationals are written as "a/b" (or "a").
Json to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& path = "$");

Json to_json(const PiecewiseLinear& f);
PiecewiseLinear piecewise_from_json(const Json& j, const std::string& path = "$");

Json to_json(const CriterionReport& rep);

Json to_json(const LevelSpace& L);

Json to_json(const RectifyResult& res);

/// Stabilizer oracle from a document: either {"kind": "conjugated_family",
/// "psi0": series} (members psi0 o [alpha]_F o psi0^-1 for the standard group
/// law) or {"kind": "stabilizer_table", "members": [{"alpha", "series"}]},
/// looked up by alpha mod pi^prec.
struct OracleSource {
  std::shared_ptr<ConjugatedFamily> family;
  std::vector<std::pair<OKElem, Series<OKElem>>> table;
  StabilizerOracle oracle() const;
};
OracleSource oracle_from_json(const OKRingPtr& R, const FormalGroupLawPtr& G, const Json& j,
                              const std::string& path = "$");

}  // namespace ramforge
