#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ramforge/lifting.hpp"
#include "support.hpp"

using namespace ramforge;

namespace {

OKRingPtr ring(int p, int f, int e, int N) { return OKRing::make(RingSpec::standard(p, f, e, N)); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

FqPtr F2() { return Fq::make(2, 1, {1}); }

Series<FqElem> fq_series(const FqPtr& k, int D, std::vector<std::int64_t> c) { return Series<FqElem>::from_ints(k, D, c); }

// split a coordinate vector into (d, w)
std::pair<Series<FqElem>, Series<FqElem>> split(const LevelSpace& L, const FqVector& v) {
  const FqPtr& k = L.zeta.ring();
  Series<FqElem> d(k, L.D_d), w(k, L.D_w);
  for (int i = 1; i <= L.D_d; ++i) d.set(i, v[static_cast<std::size_t>(i - 1)]);
  for (int i = 1; i <= L.D_w; ++i) w.set(i, v[static_cast<std::size_t>(L.D_d + i - 1)]);
  return {d, w};
}

int ncols(const LevelSpace& L) { return L.D_d + L.D_w; }

void check_space_invariants(const LevelSpace& L) {
  const FqPtr& k = L.zeta.ring();
  CHECK(in_span(k, L.basis_B, L.basis_Zo, ncols(L)));
  CHECK(in_span(k, L.basis_Zo, L.basis_Z, ncols(L)));
  for (const auto& v : L.basis_B) {
    auto [d, w] = split(L, v);
    CHECK(level_residual(L.zeta, L.mu, d, w).is_zero());
  }
  for (const auto& v : L.basis_Z) {
    auto [d, w] = split(L, v);
    CHECK(level_residual(L.zeta, L.mu, d, w).is_zero());
  }
  for (const auto& v : L.basis_Zo) {
    CHECK(v[0].is_zero());
    CHECK(v[static_cast<std::size_t>(L.D_d)].is_zero());
  }
  // the zero vector lies in every space
  const FqVector zero(static_cast<std::size_t>(ncols(L)), k->zero());
  CHECK(in_span(k, {zero}, L.basis_B, ncols(L)));
}

}  // namespace

TEST_CASE("row reduction over F_q") {
  auto k = Fq::make(3, 1, {1});
  auto e = [&](std::int64_t v) { return k->from_int(v); };
  FqMatrix A{{e(1), e(2), e(0)}, {e(2), e(1), e(0)}, {e(0), e(0), e(1)}};
  CHECK(rank(k, A, 3) == 2);
  auto K = kernel_basis(k, A, 3);
  REQUIRE(K.size() == 1);
  CHECK(K[0] == FqVector{e(1), e(1), e(0)});
  auto x = solve(k, A, {e(1), e(2), e(2)}, 3);
  REQUIRE(x.has_value());
  CHECK(*x == FqVector{e(1), e(0), e(2)});
  CHECK_FALSE(solve(k, A, {e(1), e(1), e(0)}, 3).has_value());
  auto E = rref(k, A, 3);
  CHECK(E.pivots == std::vector<int>{0, 2});
}

TEST_CASE("level space for x^2 and x + x^2 + x^3 over F_2") {
  auto k = F2();
  auto zeta = fq_series(k, 32, {0, 1}), mu = fq_series(k, 32, {1, 1, 1});
  auto L = level_space(zeta, mu, 16);
  CHECK(L.s == 1);
  CHECK(L.D_w == 8);
  CHECK(L.ext_window == 32);
  CHECK(L.quotient_dim == 0);
  CHECK(L.dim_Zo() == L.dim_B() + L.window_quotient_dim());
  check_space_invariants(L);

  // without room to extend, top-degree solutions leak into the sub-window
  auto tight = level_space(zeta.truncated(16), mu.truncated(16), 16);
  CHECK(tight.ext_window == 16);
  CHECK(tight.quotient_dim >= 0);

  CHECK(code_of([&] { level_space(zeta, mu, 3); }) == ErrorCode::DegenerateWindow);
  CHECK(code_of([&] { level_space(fq_series(k, 16, {0, 1, 1}), fq_series(k, 16, {1, 1}), 8); }) == ErrorCode::NoncommutingPair);
  CHECK(code_of([&] { level_space(zeta, fq_series(k, 32, {0, 1}), 8); }) == ErrorCode::NotInvertible);
}

TEST_CASE("level spaces of reduced Lubin-Tate pairs over prime fields") {
  for (auto [p, s] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
    CAPTURE(p);
    CAPTURE(s);
    auto R = ring(p, 1, 1, 12);
    auto G = FormalGroupLaw::build(FrobeniusSeries::standard(R), 4, 8);
    const OKElem pp = R->from_int(p);
    const OKElem omega = p == 2 ? R->one() : R->from_int(-1);
    long Q = 1;
    for (int i = 0; i < s; ++i) Q *= p;
    const int D = static_cast<int>(4 * Q);
    auto zeta = reduce(G->endo(pp.pow(static_cast<std::uint64_t>(s)), 2 * D));
    auto mu = reduce(G->endo((R->one() + pp.pow(static_cast<std::uint64_t>(s))) * omega, 2 * D));
    auto L = level_space(zeta, mu, D);
    CHECK(L.Q == Q);
    CHECK(L.quotient_dim == 0);
    check_space_invariants(L);
  }
}

TEST_CASE("theta from d") {
  auto k = F2();
  auto zeta = fq_series(k, 8, {0, 1});
  auto t = solve_theta(fq_series(k, 8, {0, 0, 0, 1}), zeta);
  CHECK(t == fq_series(k, 4, {0, 1}));
  CHECK(solve_theta(Series<FqElem>(k, 8), zeta).is_zero());
  CHECK(code_of([&] { solve_theta(fq_series(k, 8, {0, 0, 1}), zeta); }) == ErrorCode::NotInImage);
  // b_vector inverts solve_theta
  std::mt19937_64 rng(5);
  auto k3 = Fq::make(3, 1, {1});
  auto z3 = fq_series(k3, 27, {0, 0, 1});
  for (int trial = 0; trial < 5; ++trial) {
    auto theta = testing_support::random_series(k3, 9, rng);
    theta.set(1, k3->zero());
    auto [d, w] = b_vector(theta, z3, fq_series(k3, 9, {1}));
    CHECK(solve_theta(d, z3) == theta);
  }
}

TEST_CASE("conjugator step") {
  for (auto [p, f] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}}) {
    CAPTURE(p);
    CAPTURE(f);
    auto R = ring(p, f, 1, 8);
    auto G = FormalGroupLaw::build(FrobeniusSeries::standard(R), 4, 8);
    const int D = 20;
    const OKElem unit = f > 1 ? R->from_int(p + 1) * R->omega() : R->from_int(p + 1);
    auto f1 = G->endo(R->from_int(p), D), u1 = G->endo(unit, D);
    auto same = conjugator_step(f1, u1, f1, u1, 1);
    CHECK(same.phi == Series<OKElem>::identity(R, D));
    CHECK(same.theta.is_zero());

    std::mt19937_64 rng(11);
    for (int r = 1; r <= 3; ++r) {
      CAPTURE(r);
      auto c = testing_support::random_series(R, D, rng);
      c.set(1, R->zero());
      auto phi = Series<OKElem>::identity(R, D) + c.scaled(R->uniformizer().pow(static_cast<std::uint64_t>(r)));
      auto phi_inv = comp_inverse(phi);
      auto f2 = compose(phi, compose(f1, phi_inv)), u2 = compose(phi, compose(u1, phi_inv));
      auto step = conjugator_step(f1, u1, f2, u2, r);
      CHECK(congruent(step.phi, Series<OKElem>::identity(R, D), r));
      CHECK(congruent(compose(step.phi, f1), compose(f2, step.phi), r + 1));
      CHECK(congruent(compose(step.phi, u1), compose(u2, step.phi), r + 1));
    }
    // a difference in the linear term is outside B
    auto bumped = f1 + Series<OKElem>::monomial(R, D, 1, R->uniformizer());
    CHECK(code_of([&] { conjugator_step(f1, u1, bumped, u1, 1); }) == ErrorCode::NotInB);
  }
}

TEST_CASE("lemma on linear terms") {
  auto R = ring(2, 1, 1, 10);
  auto G = FormalGroupLaw::build(FrobeniusSeries::multiplicative(R), 4, 10);
  const int D = 12;
  auto e = [&](int a) { return G->endo(R->from_int(a), D); };
  CHECK(lemma_same_check(e(4), e(3), e(5), R->from_int(3), R->from_int(5), R->from_int(4), *G, 1));
  auto perturbed = e(4) + Series<OKElem>::monomial(R, D, 2, R->from_int(4));
  CHECK(code_of([&] { lemma_same_check(perturbed, e(3), e(5), R->from_int(3), R->from_int(5), R->from_int(4), *G, 1); }) ==
        ErrorCode::HypothesisViolated);
  CHECK(code_of([&] { lemma_same_check(e(4), e(5), e(5), R->from_int(5), R->from_int(5), R->from_int(4), *G, 1); }) ==
        ErrorCode::HypothesisViolated);
  // moving the linear term breaks commutation as well
  auto shifted = e(4) + Series<OKElem>::monomial(R, D, 1, R->from_int(8));
  CHECK(code_of([&] { lemma_same_check(shifted, e(3), e(5), R->from_int(3), R->from_int(5), R->from_int(4), *G, 1); }) ==
        ErrorCode::HypothesisViolated);
}

TEST_CASE("Case I reduction") {
  {
    auto R = ring(2, 1, 1, 8);
    auto G = FormalGroupLaw::build(FrobeniusSeries::multiplicative(R), 4, 8);
    auto g = G->endo(R->from_int(2), 10);
    CHECK(case1_reduce(g, Series<OKElem>::identity(R, 10)) == g);
  }
  auto R = ring(2, 2, 1, 8);
  auto G = FormalGroupLaw::build(FrobeniusSeries::standard(R), 4, 8);
  const int D = 12;
  const OKElem w = R->omega();
  auto g = G->endo(R->from_int(2) * w, D), u = G->endo(w, D);
  auto h = case1_reduce(g, u);
  CHECK(congruent(h, FrobeniusSeries::standard(R).series(D), 8));

  ConjugatedFamily fam(G, Series<OKElem>::from_ints(R, D, {1, 2, 0, 2}));
  auto hc = case1_reduce(fam.member(R->from_int(2) * w), fam.member(w));
  CHECK(hc[1].valuation() == 1);
  CHECK(code_of([&] { case1_reduce(g, Series<OKElem>::identity(R, D)); }) == ErrorCode::ReductionMismatch);
  CHECK(code_of([&] { case1_reduce(G->endo(R->from_int(4), D), u); }) == ErrorCode::HypothesisViolated);
}

TEST_CASE("rectify") {
  const int D = 64, N = 8;
  struct Instance {
    int p, f;
    std::vector<std::int64_t> psi0;
    int beta;
  };
  const std::vector<Instance> cases = {
      {2, 1, {1}, 2},          {2, 1, {1, 2, 2}, 2}, {2, 1, {1, 2, 2}, 4}, {2, 1, {1, 4, 2, 6}, 8},
      {3, 1, {1, 3, 3}, 3},    {3, 1, {1, 6, 0, 3}, 9},
      {2, 2, {1, 2, 0, 2}, 2}, {2, 2, {1, 0, 2}, 4},
  };
  int corrections = 0;
  for (const auto& c : cases) {
    CAPTURE(c.p);
    CAPTURE(c.f);
    CAPTURE(c.beta);
    CAPTURE(c.psi0.size());
    auto R = ring(c.p, c.f, 1, working_precision(N, c.f == 1 ? c.p : c.p * c.p, D));
    auto G = FormalGroupLaw::build(FrobeniusSeries::standard(R), 4, N);
    ConjugatedFamily fam(G, Series<OKElem>::from_ints(R, D, c.psi0));
    const OKElem beta = R->from_int(c.beta);
    auto g = fam.member(beta);
    auto res = rectify(g, fam.oracle(), *G, N);
    CHECK(congruent(res.beta, beta, N));
    CHECK(res.achieved_level == N);
    // independent re-check of psi g psi^-1 = [beta]
    auto conj = compose(res.psi, compose(g, comp_inverse(res.psi)));
    CHECK(congruent(conj, G->endo(beta, D), N));
    CHECK(reduce(res.psi) == Series<FqElem>::identity(R->residue_field(), D));
    REQUIRE(res.transcript.size() == static_cast<std::size_t>(N - 1));
    Series<OKElem> prev = Series<OKElem>::identity(R, D);
    int last = 0;
    for (const auto& rec : res.transcript) {
      CHECK(rec.after >= rec.r + 1);
      CHECK(rec.after >= last);
      // a repair reopens levels from rec.reopened on, and nothing below
      CHECK(congruent(rec.psi, prev, rec.reopened == 0 ? rec.r : rec.reopened));
      if (rec.reopened != 0) {
        ++corrections;
        CHECK(rec.reopened < rec.r);
        CHECK(congruent(rec.repair, Series<OKElem>::identity(R, D), rec.reopened));
      }
      if (rec.lemma) CHECK(*rec.lemma);
      last = rec.after;
      prev = rec.psi;
    }
    if (c.psi0.size() == 1) CHECK(res.psi == Series<OKElem>::identity(R, D));
  }
  // the Z_3, beta = 9 instance needs one
  CHECK(corrections >= 1);
}

TEST_CASE("rectify refuses bad input") {
  const int D = 32, N = 6;
  auto R = ring(2, 1, 1, working_precision(N, 2, D));
  auto G = FormalGroupLaw::build(FrobeniusSeries::standard(R), 4, N);
  // a conjugator with nontrivial reduction moves u_alpha off [alpha] mod 2
  ConjugatedFamily off(G, Series<OKElem>::from_ints(R, D, {1, 1, 2}));
  CHECK(code_of([&] { rectify(off.member(R->from_int(2)), off.oracle(), *G, N); }) == ErrorCode::ReductionMismatch);

  ConjugatedFamily fam(G, Series<OKElem>::from_ints(R, D, {1, 2}));
  auto g = fam.member(R->from_int(2));
  StabilizerOracle sloppy = [&](const OKElem& a) { return fam.member(a + R->from_int(8)); };
  CHECK(code_of([&] { rectify(g, sloppy, *G, N); }) == ErrorCode::OraclePrecision);
  StabilizerOracle shortd = [&](const OKElem& a) { return fam.member(a).truncated(8); };
  CHECK(code_of([&] { rectify(g, shortd, *G, N); }) == ErrorCode::OraclePrecision);
  CHECK(code_of([&] { rectify(fam.member(R->from_int(3)), fam.oracle(), *G, N); }) == ErrorCode::NotStable);
  // q^s = 32 > D - 2
  CHECK(code_of([&] { rectify(fam.member(R->from_int(32)), fam.oracle(), *G, N); }) == ErrorCode::DegenerateWindow);
  auto R1 = ring(2, 1, 1, N);
  auto G1 = FormalGroupLaw::build(FrobeniusSeries::standard(R1), 4, N);
  CHECK(code_of([&] { rectify(G1->endo(R1->from_int(2), D), [&](const OKElem& a) { return G1->endo(a, D); }, *G1, N); }) == ErrorCode::InsufficientPrecision);
  auto R2 = ring(2, 1, 2, N);
  auto G2 = FormalGroupLaw::build(FrobeniusSeries::standard(R2), 4, N);
  CHECK(code_of([&] { rectify(G2->endo(R2->from_int(2), 8), fam.oracle(), *G2, N); }) == ErrorCode::HypothesisViolated);
}

TEST_CASE("rectify on random conjugators") {
  const int D = 64, N = 8;
  std::mt19937 rng(20261016);
  for (auto [p, f] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    const int q = f == 1 ? p : p * p;
    auto R = ring(p, f, 1, working_precision(N, q, D));
    auto G = FormalGroupLaw::build(FrobeniusSeries::standard(R), 4, N);
    for (int beta : {p, p * p, p * (p + 1)}) {
      std::vector<std::int64_t> c{1};
      for (int i = 0; i < 5; ++i) c.push_back(p * std::uniform_int_distribution<int>(0, 20)(rng));
      CAPTURE(p);
      CAPTURE(f);
      CAPTURE(beta);
      ConjugatedFamily fam(G, Series<OKElem>::from_ints(R, D, c));
      auto g = fam.member(R->from_int(beta));
      auto res = rectify(g, fam.oracle(), *G, N);
      CHECK(res.achieved_level == N);
      auto conj = compose(res.psi, compose(g, comp_inverse(res.psi)));
      CHECK(congruent(conj, G->endo(R->from_int(beta), D), N));
      auto uc = compose(res.psi, compose(fam.member(res.alpha), comp_inverse(res.psi)));
      CHECK(congruent(uc, G->endo(res.alpha, D), N));
    }
  }
}
