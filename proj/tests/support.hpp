#pragma once

#include <array>
#include <random>
#include <vector>

#include "ramforge/series.hpp"

namespace testing_support {

using namespace ramforge;

inline const std::vector<std::array<int, 3>> kTestRings = {{2, 1, 1}, {3, 1, 1}, {2, 2, 1}, {2, 1, 2}, {3, 1, 2}};

inline OKElem random_elem(const OKRingPtr& R, std::mt19937_64& rng) {
  std::vector<std::vector<std::int64_t>> t(static_cast<std::size_t>(R->e()), std::vector<std::int64_t>(static_cast<std::size_t>(R->f())));
  for (auto& row : t)
    for (auto& v : row) v = static_cast<std::int64_t>(rng() % R->modulus());
  return R->from_table(t, R->prec());
}

inline FqElem random_fq(const FqPtr& k, std::mt19937_64& rng) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(k->f()));
  for (auto& v : c) v = static_cast<std::int64_t>(rng() % static_cast<unsigned>(k->p()));
  return k->from_coeffs(c);
}

inline Series<OKElem> random_series(const OKRingPtr& R, int D, std::mt19937_64& rng) {
  Series<OKElem> s(R, D);
  for (int k = 1; k <= D; ++k) s.set(k, random_elem(R, rng));
  return s;
}

inline Series<FqElem> random_series(const FqPtr& K, int D, std::mt19937_64& rng) {
  Series<FqElem> s(K, D);
  for (int k = 1; k <= D; ++k) s.set(k, random_fq(K, rng));
  return s;
}

}  // namespace testing_support
