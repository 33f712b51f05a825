#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ramforge/herbrand.hpp"

using namespace ramforge;

namespace {

FiniteFiltration filt(std::vector<long> breaks, std::vector<long> indices) {
  FiniteFiltration f;
  f.breaks = std::move(breaks);
  f.indices = std::move(indices);
  f.order = f.indices.empty() ? 1 : f.indices.back();
  return f;
}

long ipow(long b, int k) {
  long r = 1;
  while (k-- > 0) r *= b;
  return r;
}

}  // namespace

TEST_CASE("phi from a filtration") {
  auto phi = phi_from_filtration(filt({3}, {2}));
  CHECK(phi(7) == 5);
  CHECK(phi(3) == 3);
  auto id = phi_from_filtration(filt({}, {}));
  CHECK(id == PiecewiseLinear());
  CHECK(id(Rational(17, 3)) == Rational(17, 3));
  auto syn = phi_from_filtration(synthetic_filtration(2, 2, 6));
  CHECK(syn(7) - syn(3) == 2);
}

TEST_CASE("inverse function") {
  auto phi = phi_from_filtration(filt({3}, {2}));
  auto psi = pl_inverse(phi);
  CHECK(psi(5) == 7);
  CHECK(pl_inverse(PiecewiseLinear()) == PiecewiseLinear());
  CHECK(pl_inverse(psi) == phi);
  std::mt19937_64 rng(1);
  auto phi2 = phi_from_filtration(filt({3, 7, 15}, {2, 4, 8}));
  auto psi2 = pl_inverse(phi2);
  for (int i = 0; i < 100; ++i) {
    Rational x(static_cast<long>(rng() % 4000), 1 + static_cast<long>(rng() % 97));
    CHECK(psi2(phi2(x)) == x);
    CHECK(phi2(psi2(x)) == x);
  }
}

TEST_CASE("upper numbering breaks") {
  CHECK(upper_breaks(filt({3, 7, 15}, {2, 4, 8})) == std::vector<Rational>{3, 5, 7});
  CHECK(upper_breaks(filt({11}, {3})) == std::vector<Rational>{11});
  // synthetic family: arithmetic progression with gap q^(r-1)(q-1)
  for (long q : {2L, 3L, 4L})
    for (int r : {2, 3}) {
      auto u = upper_breaks(synthetic_filtration(q, r, r + 4));
      for (std::size_t m = 1; m < u.size(); ++m) CHECK(u[m] - u[m - 1] == Rational(ipow(q, r - 1) * (q - 1)));
    }
}

TEST_CASE("window ratios") {
  // breaks 2^l - 1 with index 2^(l-2) at the break
  auto w = criterion_window({synthetic_filtration(2, 2, 5)});
  CHECK(w.min_ratio >= 2);
  CHECK(w.max_ratio <= 8);
  // x + x^2 over F_2: breaks 2^(2^n) - 1, index 2^n at the break
  std::vector<FiniteFiltration> levels;
  for (int n = 1; n <= 4; ++n) {
    std::vector<long> b, idx;
    for (int j = 0; j < n; ++j) {
      b.push_back(ipow(2, 1 << j) - 1);
      idx.push_back(ipow(2, j + 1));
    }
    levels.push_back(filt(b, idx));
  }
  Rational prev = 0;
  for (int n = 1; n <= 4; ++n) {
    auto wn = criterion_window(std::vector<FiniteFiltration>(levels.begin(), levels.begin() + n));
    CHECK(wn.max_ratio > prev);
    prev = wn.max_ratio;
  }
  CHECK(prev == Rational(255, 8));
  auto single = criterion_window({filt({5}, {3})});
  CHECK(single.min_ratio == single.max_ratio);
}

TEST_CASE("integral over a unit-group step") {
  for (long q : {2L, 3L, 4L})
    for (int r : {2, 3})
      for (int e : {1, 2}) {
        auto phi = phi_from_filtration(synthetic_filtration(q, r, r + 8));
        for (int l = r; l <= r + 4; ++l) {
          const Rational lhs = phi(Rational(ipow(q, l + e) - 1)) - phi(Rational(ipow(q, l) - 1));
          CHECK(lhs == Rational(ipow(q, r - 1) * (q - 1) * e));
        }
      }
}

TEST_CASE("slope monotonicity") {
  auto phi = phi_from_filtration(synthetic_filtration(3, 2, 6));
  for (std::size_t m = 1; m < phi.slopes().size(); ++m) CHECK(phi.slopes()[m] < phi.slopes()[m - 1]);
  auto psi = pl_inverse(phi);
  for (std::size_t m = 1; m < psi.slopes().size(); ++m) CHECK(psi.slopes()[m] > psi.slopes()[m - 1]);
  CHECK_THROWS_AS(phi_from_filtration(filt({3, 2}, {2, 4})), Error);
}
