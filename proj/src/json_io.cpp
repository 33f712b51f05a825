#include "ramforge/json_io.hpp"

namespace ramforge {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::SchemaError, path + ": " + msg);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string sub(const std::string& path, const char* key) { return path + "." + key; }
std::string sub(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::int64_t as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<std::int64_t>();
}

int as_int32(const Json& j, const std::string& path) {
  const std::int64_t v = as_int(j, path);
  if (v < INT32_MIN || v > INT32_MAX) schema(path, "integer out of range");
  return static_cast<int>(v);
}

int int_field(const Json& j, const char* key, const std::string& path) { return as_int32(field(j, key, path), sub(path, key)); }

const Json& array_field(const Json& j, const char* key, const std::string& path) {
  const Json& a = field(j, key, path);
  if (!a.is_array()) schema(sub(path, key), "expected an array");
  return a;
}

std::vector<std::int64_t> int_list(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of integers");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], sub(path, i)));
  return out;
}

Json header(const char* kind) { return Json{{"format", kFormatVersion}, {"kind", kind}}; }

void check_header(const Json& j, const char* kind, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  if (as_int(field(j, "format", path), sub(path, "format")) != kFormatVersion)
    schema(sub(path, "format"), "unsupported format version");
  const Json& k = field(j, "kind", path);
  if (!k.is_string() || k.get<std::string>() != kind) schema(sub(path, "kind"), std::string("expected \"") + kind + "\"");
}

OKRingPtr ring_from(const Json& j, const std::string& path) {
  const RingSpec spec = ring_spec_from_json(field(j, "ring", path), sub(path, "ring"));
  return OKRing::make(spec);
}

bool same_presentation(const RingSpec& a, const RingSpec& b) {
  return a.p == b.p && a.f == b.f && a.e == b.e && a.inertial_poly == b.inertial_poly && a.eisenstein_poly == b.eisenstein_poly;
}

Json field_json(const Fq& k) { return Json{{"p", k.p()}, {"f", k.f()}, {"poly", k.poly()}}; }


}  // namespace

// ---------------------------------------------------------------------------

Json to_json(const RingSpec& spec) {
  return Json{{"p", spec.p},
              {"f", spec.f},
              {"e", spec.e},
              {"inertial_poly", spec.inertial_poly},
              {"eisenstein_poly", spec.eisenstein_poly},
              {"prec", spec.prec}};
}

RingSpec ring_spec_from_json(const Json& j, const std::string& path) {
  RingSpec s;
  s.p = int_field(j, "p", path);
  s.f = int_field(j, "f", path);
  s.e = int_field(j, "e", path);
  s.prec = int_field(j, "prec", path);
  s.inertial_poly = int_list(field(j, "inertial_poly", path), sub(path, "inertial_poly"));
  const Json& eis = array_field(j, "eisenstein_poly", path);
  s.eisenstein_poly.clear();
  for (std::size_t i = 0; i < eis.size(); ++i) s.eisenstein_poly.push_back(int_list(eis[i], sub(sub(path, "eisenstein_poly"), i)));
  try {
    s.validate();
  } catch (const Error& e) {
    schema(path, e.what());
  }
  return s;
}

Json to_json(const OKElem& a) {
  const OKRing& R = *a.ring();
  Json v;
  if (R.e() == 1 && R.f() == 1) {
    v = static_cast<std::int64_t>(a.coeff(0, 0));
  } else {
    v = Json::array();
    for (int i = 0; i < R.e(); ++i) {
      Json row = Json::array();
      for (int jj = 0; jj < R.f(); ++jj) row.push_back(static_cast<std::int64_t>(a.coeff(i, jj)));
      v.push_back(std::move(row));
    }
  }
  return Json{{"v", std::move(v)}, {"prec", a.prec()}};
}

OKElem ok_elem_from_json(const OKRingPtr& R, const Json& j, const std::string& path) {
  const auto from_value = [&](const Json& v, int prec, const std::string& p) {
    if (v.is_number_integer()) {
      const OKElem x = R->from_int(as_int(v, p));
      return x.with_prec(prec);
    }
    if (!v.is_array()) schema(p, "expected an integer or a coefficient table");
    if (static_cast<int>(v.size()) > R->e()) schema(p, "more than e rows");
    std::vector<std::vector<std::int64_t>> table;
    for (std::size_t i = 0; i < v.size(); ++i) {
      table.push_back(int_list(v[i], sub(p, i)));
      if (static_cast<int>(table.back().size()) > R->f()) schema(sub(p, i), "more than f entries");
    }
    return R->from_table(table, prec);
  };
  if (j.is_object()) {
    const int prec = int_field(j, "prec", path);
    if (prec < 0) schema(sub(path, "prec"), "negative precision");
    return from_value(field(j, "v", path), prec, sub(path, "v"));
  }
  return from_value(j, R->prec(), path);
}

Json to_json(const FqElem& a) {
  const Fq& k = *a.field();
  if (k.f() == 1) return static_cast<std::int64_t>(a.coeff(0));
  Json v = Json::array();
  for (int jj = 0; jj < k.f(); ++jj) v.push_back(static_cast<std::int64_t>(a.coeff(jj)));
  return v;
}

FqElem fq_elem_from_json(const FqPtr& k, const Json& j, const std::string& path) {
  const std::vector<std::int64_t> c = j.is_number_integer() ? std::vector<std::int64_t>{as_int(j, path)} : int_list(j, path);
  if (static_cast<int>(c.size()) > k->f()) schema(path, "more than f coordinates");
  for (const auto v : c)
    if (v < 0 || v >= k->p()) schema(path, "coordinate outside 0..p-1");
  return k->from_coeffs(c);
}

// ---------------------------------------------------------------------------

Json to_json(const Series<OKElem>& s) {
  Json j = header("series");
  j["ring"] = to_json(s.ring()->spec());
  j["trunc"] = s.trunc();
  Json c = Json::array();
  for (int k = 1; k <= s.trunc(); ++k) c.push_back(to_json(s[k]));
  j["coeffs"] = std::move(c);
  return j;
}

Series<OKElem> ok_series_from_json(const Json& j, const std::string& path) {
  check_header(j, "series", path);
  return ok_series_from_json(ring_from(j, path), j, path);
}

Series<OKElem> ok_series_from_json(const OKRingPtr& R, const Json& j, const std::string& path) {
  check_header(j, "series", path);
  const RingSpec spec = ring_spec_from_json(field(j, "ring", path), sub(path, "ring"));
  if (!same_presentation(spec, R->spec())) throw Error(ErrorCode::RingMismatch, sub(path, "ring") + ": presentation differs");
  const int D = int_field(j, "trunc", path);
  if (D < 1) schema(sub(path, "trunc"), "truncation must be >= 1");
  const Json& c = array_field(j, "coeffs", path);
  if (static_cast<int>(c.size()) != D) schema(sub(path, "coeffs"), "expected " + std::to_string(D) + " coefficients");
  Series<OKElem> s(R, D);
  for (int k = 1; k <= D; ++k) {
    const std::string p = sub(sub(path, "coeffs"), static_cast<std::size_t>(k - 1));
    const OKElem a = ok_elem_from_json(R, c[static_cast<std::size_t>(k - 1)], p);
    s.set(k, a);
  }
  return s;
}

Json to_json(const Series<FqElem>& s) {
  Json j = header("fq_series");
  j["field"] = field_json(*s.ring());
  j["trunc"] = s.trunc();
  Json c = Json::array();
  for (int k = 1; k <= s.trunc(); ++k) c.push_back(to_json(s[k]));
  j["coeffs"] = std::move(c);
  return j;
}

Series<FqElem> fq_series_from_json(const Json& j, const std::string& path) {
  check_header(j, "fq_series", path);
  const Json& fj = field(j, "field", path);
  const std::string fp = sub(path, "field");
  FqPtr k;
  try {
    k = Fq::make(int_field(fj, "p", fp), int_field(fj, "f", fp), int_list(field(fj, "poly", fp), sub(fp, "poly")));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    schema(fp, e.what());
  }
  const int D = int_field(j, "trunc", path);
  if (D < 1) schema(sub(path, "trunc"), "truncation must be >= 1");
  const Json& c = array_field(j, "coeffs", path);
  if (static_cast<int>(c.size()) != D) schema(sub(path, "coeffs"), "expected " + std::to_string(D) + " coefficients");
  Series<FqElem> s(k, D);
  for (int i = 1; i <= D; ++i)
    s.set(i, fq_elem_from_json(k, c[static_cast<std::size_t>(i - 1)], sub(sub(path, "coeffs"), static_cast<std::size_t>(i - 1))));
  return s;
}

// ---------------------------------------------------------------------------

Json to_json(const FormalGroupLaw& G) {
  Json j = header("formal_group");
  j["ring"] = to_json(G.ring()->spec());
  Json frob = Json::array();
  for (int k = 1; k <= G.frobenius().degree(); ++k) frob.push_back(to_json(G.frobenius().coeff(k)));
  j["frobenius"] = std::move(frob);
  j["trunc"] = G.trunc();
  j["target_prec"] = G.target_prec();
  Json law = Json::array();
  const auto& F = G.law();
  for (int i = 0; i <= F.trunc(); ++i)
    for (int jj = 0; i + jj <= F.trunc(); ++jj)
      if (i + jj >= 1 && !F(i, jj).is_zero()) law.push_back(Json{{"i", i}, {"j", jj}, {"c", to_json(F(i, jj))}});
  j["law"] = std::move(law);
  return j;
}

FormalGroupLawPtr group_from_json(const Json& j, const std::string& path) {
  check_header(j, "formal_group", path);
  const OKRingPtr R = ring_from(j, path);
  const Json& fr = array_field(j, "frobenius", path);
  std::vector<OKElem> c;
  for (std::size_t i = 0; i < fr.size(); ++i) c.push_back(ok_elem_from_json(R, fr[i], sub(sub(path, "frobenius"), i)));
  const int T = int_field(j, "trunc", path), N = int_field(j, "target_prec", path);
  const FormalGroupLawPtr G = FormalGroupLaw::build(FrobeniusSeries(R, c), T, N);
  BiSeries<OKElem> stored(R, T);
  const Json& law = array_field(j, "law", path);
  for (std::size_t t = 0; t < law.size(); ++t) {
    const std::string p = sub(sub(path, "law"), t);
    const int a = int_field(law[t], "i", p), b = int_field(law[t], "j", p);
    if (a < 0 || b < 0 || a + b < 1 || a + b > T) schema(p, "term degree outside 1..trunc");
    stored.set(a, b, ok_elem_from_json(R, field(law[t], "c", p), sub(p, "c")));
  }
  for (int a = 0; a <= T; ++a)
    for (int b = 0; a + b <= T; ++b)
      if (a + b >= 1 && !congruent(stored(a, b), G->law()(a, b), std::min(N, stored(a, b).prec())))
        throw Error(ErrorCode::ResidualNonzero, sub(path, "law") + ": stored coefficient of x^" + std::to_string(a) + " y^" +
                                                    std::to_string(b) + " disagrees with the rebuilt law");
  return G;
}

// ---------------------------------------------------------------------------

Json to_json(const RamProfile& prof) {
  Json j = header("ram_profile");
  j["p"] = prof.p;
  j["trunc"] = prof.trunc;
  Json v = Json::array();
  for (const auto& x : prof.values) v.push_back(x ? Json(*x) : Json("INFINITE_AT_PRECISION"));
  j["values"] = std::move(v);
  return j;
}

RamProfile ram_profile_from_json(const Json& j, const std::string& path) {
  check_header(j, "ram_profile", path);
  RamProfile prof;
  prof.p = int_field(j, "p", path);
  prof.trunc = int_field(j, "trunc", path);
  const Json& v = array_field(j, "values", path);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_string()) {
      const std::string s = v[i].get<std::string>();
      if (s != "INFINITE_AT_PRECISION" && s != "IDENTITY_AT_PRECISION") schema(sub(sub(path, "values"), i), "unknown marker");
      prof.values.emplace_back(std::nullopt);
    } else {
      prof.values.emplace_back(as_int(v[i], sub(sub(path, "values"), i)));
    }
  }
  return prof;
}

Json to_json(const FiniteFiltration& filt) {
  Json j = header("filtration");
  j["level"] = filt.level;
  j["generators"] = filt.generators;
  j["order"] = filt.order;
  j["breaks"] = filt.breaks;
  j["indices"] = filt.indices;
  return j;
}

FiniteFiltration filtration_from_json(const Json& j, const std::string& path) {
  check_header(j, "filtration", path);
  FiniteFiltration f;
  f.level = int_field(j, "level", path);
  f.generators = int_field(j, "generators", path);
  f.order = as_int(field(j, "order", path), sub(path, "order"));
  for (auto x : int_list(field(j, "breaks", path), sub(path, "breaks"))) f.breaks.push_back(x);
  for (auto x : int_list(field(j, "indices", path), sub(path, "indices"))) f.indices.push_back(x);
  try {
    f.validate();
  } catch (const Error& e) {
    schema(path, e.what());
  }
  return f;
}

Json to_json(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) schema(path, "expected a rational \"a/b\"");
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    using Int = boost::multiprecision::cpp_int;
    if (slash == std::string::npos) return Rational(Int(s));
    const Int den(s.substr(slash + 1));
    if (den == 0) schema(path, "zero denominator");
    return Rational(Int(s.substr(0, slash)), den);
  } catch (const std::runtime_error&) {
    schema(path, "malformed rational \"" + s + "\"");
  }
}

Json to_json(const PiecewiseLinear& f) {
  Json j = header("piecewise_linear");
  Json t = Json::array(), s = Json::array();
  for (const auto& x : f.breakpoints()) t.push_back(to_json(x));
  for (const auto& x : f.slopes()) s.push_back(to_json(x));
  j["breakpoints"] = std::move(t);
  j["slopes"] = std::move(s);
  return j;
}

PiecewiseLinear piecewise_from_json(const Json& j, const std::string& path) {
  check_header(j, "piecewise_linear", path);
  std::vector<Rational> t, s;
  const Json& tj = array_field(j, "breakpoints", path);
  const Json& sj = array_field(j, "slopes", path);
  for (std::size_t i = 0; i < tj.size(); ++i) t.push_back(rational_from_json(tj[i], sub(sub(path, "breakpoints"), i)));
  for (std::size_t i = 0; i < sj.size(); ++i) s.push_back(rational_from_json(sj[i], sub(sub(path, "slopes"), i)));
  try {
    return PiecewiseLinear(std::move(t), std::move(s));
  } catch (const Error& e) {
    schema(path, e.what());
  }
}

Json to_json(const CriterionReport& rep) {
  Json j = header("criterion_report");
  j["profile"] = to_json(rep.profile);
  j["d_expected"] = rep.d_expected;
  j["kappa"] = rep.kappa ? Json(*rep.kappa) : Json(nullptr);
  Json r = Json::array();
  for (const auto& x : rep.ratios) r.push_back(to_json(x));
  j["ratios"] = std::move(r);
  j["verdict"] = to_string(rep.verdict);
  j["lambda_observed"] = rep.lambda_observed ? to_json(*rep.lambda_observed) : Json(nullptr);
  return j;
}

Json to_json(const LevelSpace& L) {
  Json j = header("level_space");
  j["level"] = L.level;
  j["s"] = L.s;
  j["Q"] = L.Q;
  j["D_d"] = L.D_d;
  j["D_w"] = L.D_w;
  j["dim_Z"] = L.dim_Z();
  j["dim_Zo"] = L.dim_Zo();
  j["dim_B"] = L.dim_B();
  j["sub_d"] = L.sub_d;
  j["sub_w"] = L.sub_w;
  j["ext_window"] = L.ext_window;
  j["quotient_dim"] = L.quotient_dim;
  j["window_quotient_dim"] = L.window_quotient_dim();
  j["zeta"] = to_json(L.zeta);
  j["mu"] = to_json(L.mu);
  return j;
}

Json to_json(const RectifyResult& res) {
  Json j = header("rectify_result");
  j["psi"] = to_json(res.psi);
  j["beta"] = to_json(res.beta);
  j["alpha"] = to_json(res.alpha);
  j["achieved_level"] = res.achieved_level;
  Json t = Json::array();
  for (const auto& rec : res.transcript) {
    Json l{{"r", rec.r}, {"before", rec.before}, {"after", rec.after}, {"reopened", rec.reopened}};
    l["theta"] = to_json(rec.theta);
    l["psi"] = to_json(rec.psi);
    if (rec.reopened != 0) l["repair"] = to_json(rec.repair);
    l["lemma"] = rec.lemma ? Json(*rec.lemma) : Json(nullptr);
    t.push_back(std::move(l));
  }
  j["transcript"] = std::move(t);
  return j;
}

// ---------------------------------------------------------------------------

StabilizerOracle OracleSource::oracle() const {
  if (family) {
    return [fam = family](const OKElem& a) { return fam->member(a); };
  }
  return [table = table](const OKElem& a) {
    for (const auto& [alpha, u] : table)
      if (congruent(alpha, a, std::min(alpha.prec(), a.prec()))) return u;
    throw Error(ErrorCode::InvalidArgument, "stabilizer table has no member for alpha = " + a.to_string());
  };
}

OracleSource oracle_from_json(const OKRingPtr& R, const FormalGroupLawPtr& G, const Json& j, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  const Json& kind = field(j, "kind", path);
  OracleSource src;
  if (kind == "conjugated_family") {
    check_header(j, "conjugated_family", path);
    src.family = std::make_shared<ConjugatedFamily>(G, ok_series_from_json(R, field(j, "psi0", path), sub(path, "psi0")));
    return src;
  }
  check_header(j, "stabilizer_table", path);
  const Json& m = array_field(j, "members", path);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string p = sub(sub(path, "members"), i);
    src.table.emplace_back(ok_elem_from_json(R, field(m[i], "alpha", p), sub(p, "alpha")),
                           ok_series_from_json(R, field(m[i], "series", p), sub(p, "series")));
  }
  return src;
}

}  // namespace ramforge
