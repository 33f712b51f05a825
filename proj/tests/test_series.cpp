#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace ramforge;
using testing_support::kTestRings;
using testing_support::random_series;

namespace {

FqPtr field(int p, int f = 1) { return Fq::make(p, f, standard_inertial_poly(p, f)); }
OKRingPtr ring(int p, int f, int e, int N) { return OKRing::make(RingSpec::standard(p, f, e, N)); }

template <class R>
auto S(const R& r, int D, std::vector<std::int64_t> c) {
  using C = std::conditional_t<std::is_same_v<R, FqPtr>, FqElem, OKElem>;
  return Series<C>::from_ints(r, D, c);
}

}  // namespace

TEST_CASE("multiplication") {
  auto F2 = field(2);
  CHECK(mul(S(F2, 6, {1, 1}), S(F2, 6, {1, 1})) == S(F2, 6, {0, 1, 0, 1}));
  CHECK(mul(S(F2, 6, {1, 1}), Series<FqElem>(F2, 6)).is_zero());
  auto Z2 = ring(2, 1, 1, 8);
  CHECK(mul(S(Z2, 5, {2}), S(Z2, 5, {1})) == S(Z2, 5, {0, 2}));
  CHECK_THROWS_AS(mul(S(Z2, 5, {2}), S(Z2, 6, {1})), Error);
}

TEST_CASE("composition") {
  auto F2 = field(2), F3 = field(3);
  CHECK(compose(S(F2, 8, {1, 1}), S(F2, 8, {1, 0, 1})) == S(F2, 8, {1, 1, 1, 0, 0, 1}));
  CHECK(compose(Series<FqElem>::identity(F2, 8), S(F2, 8, {1, 0, 1})) == S(F2, 8, {1, 0, 1}));
  CHECK(compose(S(F3, 5, {1, 0, 1}), S(F3, 5, {2})) == S(F3, 5, {2, 0, 2}));
}

TEST_CASE("compositional inverse") {
  auto F2 = field(2);
  CHECK(comp_inverse(S(F2, 4, {1, 1})) == S(F2, 4, {1, 1, 0, 1}));
  CHECK(comp_inverse(Series<FqElem>::identity(F2, 9)) == Series<FqElem>::identity(F2, 9));
  auto Z2 = ring(2, 1, 1, 8);
  try {
    comp_inverse(S(Z2, 6, {2, 1}));
    FAIL("expected NOT_INVERTIBLE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInvertible);
  }
}

TEST_CASE("derivative") {
  auto Z5 = ring(5, 1, 1, 4);
  auto d = derivative(S(Z5, 4, {1, 1}));
  CHECK(d[0] == Z5->one());
  CHECK(d[1] == Z5->from_int(2));
  CHECK(d[2].is_zero());
  auto F2 = field(2);
  auto d2 = derivative(S(F2, 4, {1, 1}));
  CHECK(d2[0].is_one());
  CHECK(d2[1].is_zero());
  auto Z2 = ring(2, 1, 1, 8);
  auto d3 = derivative(S(Z2, 5, {3, 0, 1}));
  CHECK(d3[0] == Z2->from_int(3));
  CHECK(d3[2] == Z2->from_int(3));
}

TEST_CASE("iteration") {
  auto F2 = field(2);
  auto s = S(F2, 20, {1, 1});
  CHECK(iterate(s, 0) == Series<FqElem>::identity(F2, 20));
  CHECK(iterate(s, 1) == s);
  CHECK(iterate(s, 2) == S(F2, 20, {1, 0, 0, 1}));
  Series<FqElem> x16 = Series<FqElem>::identity(F2, 20);
  x16.set(16, F2->one());
  CHECK(iterate(s, 4) == x16);
  CHECK(compose(iterate(s, 2), iterate(s, 2)) == x16);
}

TEST_CASE("Weierstrass degree") {
  auto Z2 = ring(2, 1, 1, 8);
  CHECK(*wideg(S(Z2, 4, {2, 1})) == 2);
  CHECK(*wideg(S(Z2, 4, {1})) == 1);
  CHECK_FALSE(wideg(S(Z2, 8, {2, 4})).has_value());
}

TEST_CASE("reduction") {
  auto Z2 = ring(2, 1, 1, 8), Z3 = ring(3, 1, 1, 6);
  auto F2 = Z2->residue_field(), F3 = Z3->residue_field();
  CHECK(reduce(S(Z2, 4, {3, 5})) == S(F2, 4, {1, 1}));
  CHECK(reduce(S(Z2, 4, {2, 1})) == S(F2, 4, {0, 1}));
  CHECK(reduce(S(Z3, 4, {3, 0, 1})) == S(F3, 4, {0, 0, 1}));
  Series<OKElem> low = S(Z2, 3, {1});
  low.set(2, Z2->zero().with_prec(0));
  CHECK_THROWS_AS(reduce(low), Error);
}

TEST_CASE("bivariate substitution") {
  auto Z2 = ring(2, 1, 1, 10);
  BiSeries<OKElem> F = BiSeries<OKElem>::sum(Z2, 8);
  F.set(1, 1, Z2->one());
  auto x = Series<OKElem>::identity(Z2, 8);
  CHECK(substitute(F, x, Series<OKElem>(Z2, 8)) == x);
  CHECK(substitute(F, x, x) == S(Z2, 8, {2, 1}));
  Series<OKElem> iota(Z2, 8);
  for (int k = 1; k <= 8; ++k) iota.set(k, Z2->from_int(k % 2 ? -1 : 1));
  CHECK(substitute(F, x, iota).is_zero());
  CHECK(F.swapped() == F);
  CHECK(F.x_part() == x);
}

TEST_CASE("composition laws on random inputs") {
  std::mt19937_64 rng(11);
  for (auto [p, f, e] : kTestRings) {
    CAPTURE(p);
    CAPTURE(f);
    CAPTURE(e);
    auto R = ring(p, f, e, 10);
    auto K = R->residue_field();
    for (int it = 0; it < 6; ++it) {
      const int D = 12;
      auto a = random_series(R, D, rng), b = random_series(R, D, rng), c = random_series(R, D, rng);
      CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
      CHECK(compose(a, b)[1] == a[1] * b[1]);
      CHECK(reduce(compose(a, b)) == compose(reduce(a), reduce(b)));
      CHECK(reduce(mul(a, b)) == mul(reduce(a), reduce(b)));
      auto u = a;
      if (!u[1].is_unit()) u.set(1, u[1] + R->one());
      if (u[1].is_unit()) {
        auto h = comp_inverse(u);
        CHECK(compose(u, h) == Series<OKElem>::identity(R, D));
        CHECK(compose(h, u) == Series<OKElem>::identity(R, D));
      }
      auto ab = random_series(K, D, rng), bb = random_series(K, D, rng), cb = random_series(K, D, rng);
      CHECK(compose(compose(ab, bb), cb) == compose(ab, compose(bb, cb)));
      if (!ab[1].is_zero()) {
        auto hb = comp_inverse(ab);
        CHECK(compose(ab, hb) == Series<FqElem>::identity(K, D));
      }
    }
  }
}

TEST_CASE("Weierstrass degree is multiplicative under composition") {
  std::mt19937_64 rng(5);
  for (auto [p, f, e] : kTestRings) {
    auto R = ring(p, f, e, 10);
    auto pi = R->uniformizer();
    for (int it = 0; it < 5; ++it) {
      const int D = 24;
      auto a = random_series(R, D, rng), b = random_series(R, D, rng);
      // push the first unit coefficients to degrees 2..4
      const int wa = 2 + static_cast<int>(rng() % 2), wb = 2 + static_cast<int>(rng() % 3);
      for (int k = 1; k < wa; ++k) a.set(k, a[k] * pi);
      for (int k = 1; k < wb; ++k) b.set(k, b[k] * pi);
      a.set(wa, R->one() + a[wa] * pi);
      b.set(wb, R->one() + b[wb] * pi);
      auto wab = wideg(compose(a, b));
      REQUIRE(wab.has_value());
      CHECK(*wab == wa * wb);
    }
  }
}

TEST_CASE("precision follows the min rule") {
  auto Z2 = ring(2, 1, 1, 10);
  auto a = S(Z2, 4, {1, 1});
  auto b = S(Z2, 4, {1});
  b.set(3, Z2->from_int(1).with_prec(3));
  auto c = mul(a, b);
  CHECK(c[2].prec() == 10);
  CHECK(c[4].prec() == 3);
  auto d = compose(a, b);
  CHECK(d[1].prec() == 10);
  CHECK(d[3].prec() == 3);
}
