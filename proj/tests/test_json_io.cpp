#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ramforge/cli.hpp"
#include "ramforge/json_io.hpp"
#include "support.hpp"

using namespace ramforge;
using namespace testing_support;

namespace {

OKRingPtr ring(int p, int f, int e, int N) { return OKRing::make(RingSpec::standard(p, f, e, N)); }

std::pair<ErrorCode, std::string> failure(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return {e.code(), e.what()};
  }
  return {ErrorCode::InvalidArgument, "no error"};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("ring specs round trip") {
  for (const auto& [p, f, e] : kTestRings) {
    const RingSpec spec = RingSpec::standard(p, f, e, 7);
    const Json j = to_json(spec);
    CHECK(ring_spec_from_json(j) == spec);
    CHECK(to_json(ring_spec_from_json(Json::parse(j.dump()))) == j);
  }
}

TEST_CASE("O_K series round trip keeps precision") {
  std::mt19937_64 rng(kDefaultSeed);
  for (const auto& [p, f, e] : kTestRings) {
    auto R = ring(p, f, e, 6);
    Series<OKElem> s = random_series(R, 9, rng);
    s.set(2, s[2].with_prec(3));
    s.set(5, R->zero().with_prec(1));
    const std::string text = to_json(s).dump();
    const Series<OKElem> t = ok_series_from_json(Json::parse(text));
    REQUIRE(t.trunc() == s.trunc());
    for (int k = 1; k <= s.trunc(); ++k) {
      CHECK(t[k].prec() == s[k].prec());
      CHECK(t[k].to_string() == s[k].to_string());
    }
    CHECK(to_json(t).dump() == text);
    // rebinding to the same presentation
    CHECK(ok_series_from_json(R, Json::parse(text)) == s);
  }
}

TEST_CASE("malformed coefficient arrays name the offending index") {
  auto R = ring(2, 1, 1, 8);
  Json j = to_json(Series<OKElem>::from_ints(R, 5, {1, 2, 3, 4, 5}));
  j["coeffs"][3] = "seven";
  auto [code, msg] = failure([&] { ok_series_from_json(j); });
  CHECK(code == ErrorCode::SchemaError);
  CHECK(contains(msg, "$.coeffs[3]"));

  j = to_json(Series<OKElem>::from_ints(R, 5, {1}));
  j["coeffs"].erase(4);
  std::tie(code, msg) = failure([&] { ok_series_from_json(j); });
  CHECK(code == ErrorCode::SchemaError);

  j = to_json(Series<OKElem>::from_ints(R, 5, {1}));
  j["format"] = 2;
  CHECK(failure([&] { ok_series_from_json(j); }).first == ErrorCode::SchemaError);

  // a series over another presentation
  j = to_json(Series<OKElem>::from_ints(ring(3, 1, 1, 8), 5, {1}));
  CHECK(failure([&] { ok_series_from_json(R, j); }).first == ErrorCode::RingMismatch);
}

TEST_CASE("F_q series round trip") {
  std::mt19937_64 rng(kDefaultSeed + 1);
  for (int f : {1, 2, 3}) {
    auto k = Fq::make(2, f, standard_inertial_poly(2, f));
    const Series<FqElem> s = random_series(k, 17, rng);
    CHECK(fq_series_from_json(Json::parse(to_json(s).dump())) == s);
  }
  Json j = to_json(Series<FqElem>::from_ints(Fq::make(3, 1, {1}), 4, {1, 2}));
  j["coeffs"][1] = 3;
  auto [code, msg] = failure([&] { fq_series_from_json(j); });
  CHECK(code == ErrorCode::SchemaError);
  CHECK(contains(msg, "$.coeffs[1]"));
}

TEST_CASE("formal group law round trip and tamper detection") {
  auto R = ring(3, 1, 1, 8);
  auto G = FormalGroupLaw::build(FrobeniusSeries::standard(R), 5, 8);
  const Json j = to_json(*G);
  auto H = group_from_json(Json::parse(j.dump()));
  CHECK(to_json(*H) == j);

  Json bad = j;
  // first nonlinear term
  for (auto& term : bad["law"])
    if (term["i"].get<int>() + term["j"].get<int>() >= 2) {
      term["c"]["v"] = term["c"]["v"].get<long>() + 1;
      break;
    }
  CHECK(failure([&] { group_from_json(bad); }).first == ErrorCode::ResidualNonzero);
}

TEST_CASE("profiles, filtrations, rationals and piecewise maps round trip") {
  RamProfile prof;
  prof.values = {3, 7, std::nullopt};
  prof.trunc = 12;
  prof.p = 2;
  const RamProfile back = ram_profile_from_json(Json::parse(to_json(prof).dump()));
  CHECK(back.values == prof.values);
  CHECK(back.trunc == 12);
  CHECK(to_json(prof)["values"][2] == "INFINITE_AT_PRECISION");

  const FiniteFiltration filt = synthetic_filtration(3, 2, 4);
  const FiniteFiltration fb = filtration_from_json(to_json(filt));
  CHECK(fb.breaks == filt.breaks);
  CHECK(fb.indices == filt.indices);
  CHECK(fb.order == filt.order);

  for (const Rational r : {Rational(0), Rational(-7, 3), Rational(22, 4)}) CHECK(rational_from_json(to_json(r)) == r);
  CHECK(failure([&] { rational_from_json(Json("1/0")); }).first == ErrorCode::SchemaError);

  const PiecewiseLinear phi = phi_from_filtration(filt);
  CHECK(piecewise_from_json(to_json(phi)) == phi);
}

TEST_CASE("job configs round trip") {
  JobConfig c;
  c.command = "lift";
  c.subcommand = "rectify";
  c.p = 3;
  c.inputs = {"g.json"};
  c.oracle = "family.json";
  c.alpha = {"4", "-2"};
  c.closed_form = true;
  c.seed = 99;
  CHECK(job_from_json(Json::parse(to_json(c).dump())) == c);

  Json j = to_json(c);
  j["N"] = "sixteen";
  auto [code, msg] = failure([&] { job_from_json(j); });
  CHECK(code == ErrorCode::SchemaError);
  CHECK(contains(msg, "N"));
}
