#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ramforge/ring.hpp"

using namespace ramforge;

namespace {

OKElem random_elem(const OKRing& R, std::mt19937_64& rng) {
  std::vector<std::vector<std::int64_t>> t(static_cast<std::size_t>(R.e()), std::vector<std::int64_t>(static_cast<std::size_t>(R.f())));
  for (auto& row : t)
    for (auto& v : row) v = static_cast<std::int64_t>(rng() % R.modulus());
  return R.from_table(t, R.prec());
}

const std::vector<std::array<int, 3>> kRings = {{2, 1, 1}, {3, 1, 1}, {2, 2, 1}, {2, 1, 2}, {3, 1, 2}};

}  // namespace

TEST_CASE("integer arithmetic in Z_2 mod 16") {
  auto R = OKRing::make(RingSpec::standard(2, 1, 1, 4));
  CHECK(R->from_int(3) * R->from_int(5) == R->from_int(15));
  CHECK(R->from_int(7) + R->zero() == R->from_int(7));
  CHECK(*R->from_int(4).valuation() == 2);
  CHECK_FALSE(R->zero().valuation().has_value());
  CHECK(R->from_int(3).unit_inverse() == R->from_int(11));
  CHECK(R->one().unit_inverse() == R->one());
  CHECK_THROWS_AS(R->from_int(2).unit_inverse(), Error);

  OKElem h = R->from_int(6).pi_divide(1);
  CHECK(h.prec() == 3);
  CHECK(h == R->from_table({{3}}, 3));
  OKElem z = R->zero().pi_divide(1);
  CHECK(z.is_zero());
  CHECK(z.prec() == 3);
  try {
    R->from_int(3).pi_divide(1);
    FAIL("expected NOT_DIVISIBLE");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotDivisible);
  }
  CHECK(R->from_int(5).residue().is_one());
}

TEST_CASE("ring with pi^2 = 2") {
  auto R = OKRing::make(RingSpec::standard(2, 1, 2, 16));
  OKElem pi = R->uniformizer();
  CHECK(pi * pi == R->from_int(2));
  CHECK(*(pi + R->from_int(2)).valuation() == 1);
  CHECK(pi.residue().is_zero());
  CHECK(*R->from_int(2).valuation() == 2);
  CHECK(pi.pi_divide(1) == R->one().with_prec(15));
  CHECK((pi * R->from_int(3)).pi_divide(1) == R->from_int(3).with_prec(15));
}

TEST_CASE("teichmuller representatives") {
  auto R3 = OKRing::make(RingSpec::standard(3, 1, 1, 2));
  const Fq& k3 = *R3->residue_field();
  CHECK(R3->teichmuller(k3.from_int(2)) == R3->from_int(8));
  CHECK(R3->teichmuller(k3.one()) == R3->one());
  CHECK_THROWS_AS(R3->teichmuller(k3.zero()), Error);
  CHECK(R3->from_int(8).residue() == k3.from_int(2));

  auto R4 = OKRing::make(RingSpec::standard(2, 2, 1, 12));
  const Fq& k4 = *R4->residue_field();
  OKElem w = R4->teichmuller(k4.generator());
  CHECK(w.pow(3) == R4->one());
  CHECK(w.residue() == k4.generator());
  CHECK_FALSE(w == R4->one());
}

TEST_CASE("validation of ring specifications") {
  RingSpec s = RingSpec::standard(2, 1, 2, 8);
  s.eisenstein_poly = {{-4}, {0}, {1}};
  CHECK_THROWS_AS(s.validate(), Error);
  s.eisenstein_poly = {{-2}, {1}, {1}};
  CHECK_THROWS_AS(s.validate(), Error);
  RingSpec t = RingSpec::standard(2, 2, 1, 8);
  t.inertial_poly = {1, 0, 1};  // (t+1)^2 mod 2
  CHECK_THROWS_AS(t.validate(), Error);
  CHECK(standard_inertial_poly(2, 2) == std::vector<std::int64_t>{1, 1, 1});
  CHECK(standard_inertial_poly(7, 2).size() == 3);
  CHECK_THROWS_AS(OKRing::make(RingSpec::standard(3, 1, 1, 60)), Error);
}

TEST_CASE("residue field axioms") {
  for (auto [p, f] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {3, 2}, {2, 3}, {5, 2}}) {
    auto k = Fq::make(p, f, standard_inertial_poly(p, f));
    auto elems = k->elements();
    REQUIRE(static_cast<long>(elems.size()) == k->q());
    for (const auto& a : elems) {
      CHECK(a + k->zero() == a);
      CHECK(a * k->one() == a);
      CHECK(a - a == k->zero());
      if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
      CHECK(a.pow(static_cast<std::uint64_t>(k->q())) == a);
      for (const auto& b : elems) {
        CHECK(a * b == b * a);
        CHECK((a + b) * (a - b) == a * a - b * b);
      }
    }
  }
}

TEST_CASE("ring axioms and valuation laws on random samples") {
  std::mt19937_64 rng(20240917);
  for (auto [p, f, e] : kRings) {
    auto R = OKRing::make(RingSpec::standard(p, f, e, 12));
    CAPTURE(p);
    CAPTURE(f);
    CAPTURE(e);
    for (int it = 0; it < 200; ++it) {
      OKElem a = random_elem(*R, rng), b = random_elem(*R, rng), c = random_elem(*R, rng);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
      CHECK(a - a == R->zero());
      auto va = a.valuation(), vb = b.valuation(), vab = (a * b).valuation(), vs = (a + b).valuation();
      if (va && vb && vab && *va + *vb < R->prec()) CHECK(*vab == *va + *vb);
      if (va && vb && vs) CHECK(*vs >= std::min(*va, *vb));
      if (a.is_unit()) CHECK(a * a.unit_inverse() == R->one());
      if (va && *va >= 1) CHECK(a.pi_divide(1) * R->uniformizer() == a.with_prec(R->prec() - 1));
    }
  }
}

TEST_CASE("p-th powers of principal units") {
  std::mt19937_64 rng(7);
  for (auto [p, f, e] : kRings) {
    auto R = OKRing::make(RingSpec::standard(p, f, e, 16));
    OKElem pi = R->uniformizer();
    for (int l = 1; l <= 6; ++l) {
      if (l * (p - 1) <= e) continue;  // need l > e/(p-1)
      for (int it = 0; it < 20; ++it) {
        OKElem y = random_elem(*R, rng);
        if (!y.is_unit()) y = y + R->one();
        if (!y.is_unit()) continue;
        OKElem u = R->one() + pi.pow(static_cast<std::uint64_t>(l)) * y;
        auto v = (u.pow(static_cast<std::uint64_t>(p)) - R->one()).valuation();
        REQUIRE(v.has_value());
        CHECK(*v == l + e);
      }
    }
  }
}
