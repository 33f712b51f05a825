#include "ramforge/lubintate.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace ramforge {

namespace {

using Raw = OKRing::Raw;

int floor_log(long q, long D) {
  int t = 0;
  for (long v = q; v <= D; v *= q) ++t;
  return t;
}

void require_same(const OKRing& a, const OKRing& b) {
  if (&a != &b && !a.same_structure(b)) throw Error(ErrorCode::RingMismatch, "inputs over different rings");
}

// Balanced lift of a into the working ring: each canonical digit block c mod m
// becomes c or c - m, whichever is smaller in absolute value, so small signed
// integers such as -1 are carried exactly.
Raw to_work(const OKRing& W, const OKElem& a) {
  const OKRing& R = *a.ring();
  const int e = R.e(), f = R.f();
  const std::uint64_t Mw = W.modulus();
  Raw r{};
  for (int i = 0; i < e; ++i) {
    const int k = std::clamp((a.prec() - i + e - 1) / e, 0, R.digits());
    std::uint64_t m = 1;
    for (int t = 0; t < k; ++t) m *= static_cast<std::uint64_t>(R.p());
    for (int j = 0; j < f; ++j) {
      const std::uint64_t c = a.coeff(i, j) % m;
      r[static_cast<std::size_t>(i * f + j)] = c > m / 2 ? (Mw - (m - c) % Mw) % Mw : c % Mw;
    }
  }
  return r;
}

std::vector<std::pair<int, Raw>> raw_terms(const OKRing& W, const FrobeniusSeries& f, int D, int from) {
  std::vector<std::pair<int, Raw>> out;
  for (int k = from; k <= std::min(f.degree(), D); ++k) {
    Raw r = to_work(W, f.coeff(k));
    if (!W.raw_is_zero(r)) out.emplace_back(k, r);
  }
  return out;
}

std::int64_t binomial_mod(long n, long k, std::uint64_t m) {
  boost::multiprecision::cpp_int b = 1;
  for (long i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(b % m));
}

void fma(const OKRing& W, Raw& acc, const Raw& a, const Raw& b) {
  Raw t{};
  W.raw_mul(a, b, t);
  W.raw_add(acc, t, acc);
}

// c with coeff * c = S, where v(coeff) <= v(S).
Raw solve_step(const OKRing& W, const Raw& S, const Raw& coeff, const std::string& where) {
  const MaybeInt v = W.raw_valuation(coeff);
  if (!v) throw Error(ErrorCode::HypothesisViolated, "degenerate coefficient equation at " + where);
  const MaybeInt sv = W.raw_valuation(S);
  if (!sv) return Raw{};
  if (*sv < *v)
    throw Error(ErrorCode::ResidualNonzero, "discrepancy at " + where + " has valuation " + std::to_string(*sv) + " < " + std::to_string(*v));
  Raw s = S, u = coeff;
  for (long t = 0; t < *v; ++t) {
    W.raw_pi_divide(s, s);
    W.raw_pi_divide(u, u);
  }
  Raw inv{}, out{};
  W.raw_unit_inverse(u, inv);
  W.raw_mul(s, inv, out);
  return out;
}

// f_l(phi) - phi(f_r) for a raw phi (degree-indexed), all in the working ring.
std::vector<Raw> raw_residual(const OKRing& W, const std::vector<Raw>& phi, const std::vector<std::pair<int, Raw>>& left,
                              const std::vector<std::pair<int, Raw>>& right, int D) {
  std::vector<Raw> diff(static_cast<std::size_t>(D) + 1);
  // left side: sum_m l_m phi^m
  std::vector<Raw> P = phi;
  int m = 1;
  for (const auto& [deg, coef] : left) {
    while (m < deg) {
      std::vector<Raw> next(static_cast<std::size_t>(D) + 1);
      for (int i = m; i <= D; ++i) {
        if (W.raw_is_zero(P[static_cast<std::size_t>(i)])) continue;
        for (int j = 1; i + j <= D; ++j)
          if (!W.raw_is_zero(phi[static_cast<std::size_t>(j)])) fma(W, next[static_cast<std::size_t>(i + j)], P[static_cast<std::size_t>(i)], phi[static_cast<std::size_t>(j)]);
      }
      P = std::move(next);
      ++m;
    }
    for (int k = deg; k <= D; ++k) fma(W, diff[static_cast<std::size_t>(k)], coef, P[static_cast<std::size_t>(k)]);
  }
  // right side: sum_j phi_j f_r^j
  std::vector<Raw> row(static_cast<std::size_t>(D) + 1), next(static_cast<std::size_t>(D) + 1);
  for (const auto& [deg, coef] : right) row[static_cast<std::size_t>(deg)] = coef;
  for (int j = 1; j <= D; ++j) {
    const Raw& cj = phi[static_cast<std::size_t>(j)];
    if (!W.raw_is_zero(cj))
      for (int k = j; k <= D; ++k) {
        Raw t{};
        W.raw_mul(cj, row[static_cast<std::size_t>(k)], t);
        W.raw_sub(diff[static_cast<std::size_t>(k)], t, diff[static_cast<std::size_t>(k)]);
      }
    if (j == D) break;
    std::fill(next.begin(), next.end(), Raw{});
    for (int k = j; k <= D; ++k) {
      if (W.raw_is_zero(row[static_cast<std::size_t>(k)])) continue;
      for (const auto& [deg, coef] : right) {
        if (k + deg > D) break;
        fma(W, next[static_cast<std::size_t>(k + deg)], row[static_cast<std::size_t>(k)], coef);
      }
    }
    std::swap(row, next);
  }
  return diff;
}

}  // namespace

// ---------------------------------------------------------------------------

FrobeniusSeries::FrobeniusSeries(OKRingPtr ring, std::vector<OKElem> c) : ring_(std::move(ring)), c_(std::move(c)) {
  if (!ring_) throw Error(ErrorCode::InvalidArgument, "Frobenius series without a ring");
  const long q = ring_->q();
  if (static_cast<long>(c_.size()) < q)
    throw Error(ErrorCode::HypothesisViolated, "Frobenius series must have degree >= q = " + std::to_string(q));
  for (const auto& a : c_) require_same(*ring_, *a.ring());
  const MaybeInt v = c_[0].valuation();
  if (!v || *v != 1) throw Error(ErrorCode::HypothesisViolated, "linear coefficient must have valuation 1");
  for (long k = 2; k <= static_cast<long>(c_.size()); ++k) {
    const FqElem r = c_[static_cast<std::size_t>(k - 1)].residue();
    if (k == q ? !r.is_one() : !r.is_zero())
      throw Error(ErrorCode::HypothesisViolated, "series is not x^q mod pi (degree " + std::to_string(k) + ")");
  }
  // convert to the owning ring object so elements outlive foreign rings
  for (auto& a : c_) a = ring_->convert(a);
}

FrobeniusSeries FrobeniusSeries::standard(const OKRingPtr& ring) {
  std::vector<OKElem> c(static_cast<std::size_t>(ring->q()), ring->zero());
  c[0] = ring->uniformizer();
  c.back() = ring->one();
  return FrobeniusSeries(ring, std::move(c));
}

FrobeniusSeries FrobeniusSeries::multiplicative(const OKRingPtr& ring) {
  std::vector<OKElem> c;
  for (long k = 1; k <= ring->p(); ++k) c.push_back(ring->from_int(binomial_mod(ring->p(), k, ring->modulus())));
  return FrobeniusSeries(ring, std::move(c));
}

OKElem FrobeniusSeries::coeff(int k) const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
  return k <= degree() ? c_[static_cast<std::size_t>(k - 1)] : ring_->zero();
}

Series<OKElem> FrobeniusSeries::series(int D) const {
  Series<OKElem> s(ring_, D);
  for (int k = 1; k <= std::min(D, degree()); ++k) s.set(k, c_[static_cast<std::size_t>(k - 1)]);
  return s;
}

int working_precision(int N_target, long q, int D) { return N_target + 1 + floor_log(q, D); }

// ---------------------------------------------------------------------------

Series<OKElem> lt_solve(const OKElem& linear, const FrobeniusSeries& f_left, const FrobeniusSeries& f_right, int D,
                        int N_target) {
  const OKRingPtr& R = f_left.ring();
  require_same(*R, *f_right.ring());
  require_same(*R, *linear.ring());
  if (D < 1) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
  if (N_target < 1 || N_target > R->prec())
    throw Error(ErrorCode::InvalidArgument, "N_target must lie in 1.." + std::to_string(R->prec()));
  if (linear.prec() < N_target) throw Error(ErrorCode::InsufficientPrecision, "linear coefficient known to fewer than N_target digits");
  if (!congruent(f_left.uniformizer() * linear, linear * f_right.uniformizer(), N_target))
    throw Error(ErrorCode::HypothesisViolated, "linear part does not intertwine the Frobenius series");

  const OKRingPtr Wp = R->with_precision(working_precision(N_target, R->q(), D));
  const OKRing& W = *Wp;
  const auto left = raw_terms(W, f_left, D, 2);
  const auto right = raw_terms(W, f_right, D, 1);
  const Raw pl = to_work(W, f_left.uniformizer()), pr = to_work(W, f_right.uniformizer());
  const int m_max = left.empty() ? 1 : left.back().first;
  const auto sz = static_cast<std::size_t>(D) + 1;

  std::vector<Raw> c(sz), A(sz), row(sz), next(sz);
  std::vector<std::vector<Raw>> pw(static_cast<std::size_t>(m_max) + 1);
  for (int m = 2; m <= m_max; ++m) pw[static_cast<std::size_t>(m)].assign(sz, Raw{});
  for (const auto& [deg, coef] : right) row[static_cast<std::size_t>(deg)] = coef;

  // A accumulates sum_{j<k} c_j f_r^j; row holds f_r^j
  auto absorb = [&](int j) {
    const Raw& cj = c[static_cast<std::size_t>(j)];
    if (!W.raw_is_zero(cj))
      for (int k = j; k <= D; ++k)
        if (!W.raw_is_zero(row[static_cast<std::size_t>(k)])) fma(W, A[static_cast<std::size_t>(k)], cj, row[static_cast<std::size_t>(k)]);
    if (j == D) return;
    std::fill(next.begin() + j, next.end(), Raw{});
    for (int k = j; k <= D; ++k) {
      if (W.raw_is_zero(row[static_cast<std::size_t>(k)])) continue;
      for (const auto& [deg, coef] : right) {
        if (k + deg > D) break;
        fma(W, next[static_cast<std::size_t>(k + deg)], row[static_cast<std::size_t>(k)], coef);
      }
    }
    std::swap(row, next);
  };

  c[1] = to_work(W, linear);
  absorb(1);
  Raw prk = pr;
  for (int k = 2; k <= D; ++k) {
    Raw t{};
    W.raw_mul(prk, pr, t);
    prk = t;
    for (int m = 2; m <= m_max; ++m) {
      const auto& lower = m == 2 ? c : pw[static_cast<std::size_t>(m - 1)];
      Raw acc{};
      for (int i = 1; i <= k - m + 1; ++i)
        if (!W.raw_is_zero(c[static_cast<std::size_t>(i)])) fma(W, acc, c[static_cast<std::size_t>(i)], lower[static_cast<std::size_t>(k - i)]);
      pw[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] = acc;
    }
    Raw S = A[static_cast<std::size_t>(k)];
    for (const auto& [m, coef] : left) {
      Raw u{};
      W.raw_mul(coef, pw[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)], u);
      W.raw_sub(S, u, S);
    }
    Raw coeff{};
    W.raw_sub(pl, prk, coeff);
    c[static_cast<std::size_t>(k)] = solve_step(W, S, coeff, "degree " + std::to_string(k));
    absorb(k);
  }

  Series<OKElem> out(R, D);
  std::vector<Raw> reps(sz);
  for (int k = 1; k <= D; ++k) {
    OKElem a(R.get(), c[static_cast<std::size_t>(k)], N_target);
    reps[static_cast<std::size_t>(k)] = to_work(W, a);
    out.set(k, a);
  }

  // independent re-evaluation of both sides with the rounded coefficients
  auto all_left = raw_terms(W, f_left, D, 1);
  const auto diff = raw_residual(W, reps, all_left, right, D);
  for (int k = 1; k <= D; ++k) {
    Raw d = diff[static_cast<std::size_t>(k)];
    W.canonicalize(d, N_target);
    if (!W.raw_is_zero(d)) throw Error(ErrorCode::ResidualNonzero, "residual at degree " + std::to_string(k) + " is nonzero mod pi^" + std::to_string(N_target));
  }
  return out;
}

BiSeries<OKElem> lt_solve(const OKElem& a, const OKElem& b, const FrobeniusSeries& f_left, const FrobeniusSeries& f_x,
                          const FrobeniusSeries& f_y, int T, int N_target) {
  const OKRingPtr& R = f_left.ring();
  for (const OKRing* other : {f_x.ring().get(), f_y.ring().get(), a.ring(), b.ring()}) require_same(*R, *other);
  if (T < 1) throw Error(ErrorCode::InvalidArgument, "truncation must be >= 1");
  if (N_target < 1 || N_target > R->prec())
    throw Error(ErrorCode::InvalidArgument, "N_target must lie in 1.." + std::to_string(R->prec()));
  if (a.prec() < N_target || b.prec() < N_target)
    throw Error(ErrorCode::InsufficientPrecision, "linear coefficients known to fewer than N_target digits");
  const OKElem& pl = f_left.uniformizer();
  if (!congruent(pl * a, a * f_x.uniformizer(), N_target) || !congruent(pl * b, b * f_y.uniformizer(), N_target))
    throw Error(ErrorCode::HypothesisViolated, "linear part does not intertwine the Frobenius series");

  const int Nw = working_precision(N_target, R->q(), T);
  const OKRingPtr W = R->with_precision(Nw);
  auto cw = [&](const OKElem& z) { return OKElem(W.get(), to_work(*W, z), Nw); };
  auto powers = [&](const FrobeniusSeries& f) {
    Series<OKElem> s(W, T);
    for (int k = 1; k <= std::min(T, f.degree()); ++k) s.set(k, cw(f.coeff(k)));
    std::vector<Series<OKElem>> tab{Series<OKElem>(W, T), s};
    for (int i = 2; i <= T; ++i) tab.push_back(mul(tab.back(), s));
    return tab;
  };
  const auto Px = powers(f_x), Py = powers(f_y);
  const OKElem one = W->one(), zero = W->zero();
  auto at = [&](const std::vector<Series<OKElem>>& tab, int i, int k) -> const OKElem& {
    if (i == 0) return k == 0 ? one : zero;
    return k == 0 ? zero : tab[static_cast<std::size_t>(i)][k];
  };
  std::vector<std::pair<int, OKElem>> left;
  for (int m = 2; m <= std::min(T, f_left.degree()); ++m) {
    OKElem c = cw(f_left.coeff(m));
    if (!c.is_zero()) left.emplace_back(m, c);
  }
  const OKElem wl = cw(pl), wx = cw(f_x.uniformizer()), wy = cw(f_y.uniformizer());

  BiSeries<OKElem> F(W, T);
  F.set(1, 0, cw(a));
  F.set(0, 1, cw(b));
  for (int d = 2; d <= T; ++d) {
    std::vector<BiSeries<OKElem>> Fm{F, F};
    if (!left.empty())
      for (int m = 2; m <= left.back().first; ++m) Fm.push_back(mul(Fm.back(), F));
    for (int i = 0; i <= d; ++i) {
      const int j = d - i;
      OKElem S = zero;
      for (int i2 = 0; i2 <= i; ++i2)
        for (int j2 = 0; j2 <= j; ++j2) {
          if (i2 + j2 == 0 || (i2 == i && j2 == j)) continue;
          const OKElem& c = F(i2, j2);
          if (c.is_zero()) continue;
          S += c * at(Px, i2, i) * at(Py, j2, j);
        }
      for (const auto& [m, coef] : left) S -= coef * Fm[static_cast<std::size_t>(m)](i, j);
      const OKElem coeff = wl - wx.pow(static_cast<std::uint64_t>(i)) * wy.pow(static_cast<std::uint64_t>(j));
      const Raw r = solve_step(*W, S.raw(), coeff.raw(), "bidegree (" + std::to_string(i) + "," + std::to_string(j) + ")");
      F.set(i, j, OKElem(W.get(), r, Nw));
    }
  }

  BiSeries<OKElem> out(R, T);
  for (int i = 0; i <= T; ++i)
    for (int j = 0; i + j <= T; ++j)
      if (i + j >= 1) out.set(i, j, OKElem(R.get(), F(i, j).raw(), N_target));

  const BiSeries<OKElem> lhs = compose(f_left.series(T), out);
  const BiSeries<OKElem> rhs = substitute_separate(out, f_x.series(T), f_y.series(T));
  const BiSeries<OKElem> diff = lhs - rhs;
  for (int i = 0; i <= T; ++i)
    for (int j = 0; i + j <= T; ++j)
      if (i + j >= 1 && !diff(i, j).divisible_by_pi_power(N_target))
        throw Error(ErrorCode::ResidualNonzero, "bivariate residual nonzero at (" + std::to_string(i) + "," + std::to_string(j) + ")");
  return out;
}

// ---------------------------------------------------------------------------

FormalGroupLawPtr FormalGroupLaw::build(const FrobeniusSeries& f, int T, int N_target) {
  const OKRingPtr& R = f.ring();
  BiSeries<OKElem> F = lt_solve(R->one(), R->one(), f, f, f, T, N_target);
  FormalGroupLawPtr G(new FormalGroupLaw(f, std::move(F), N_target));
  const AxiomReport rep = check_axioms(*G, N_target);
  if (!rep.ok()) {
    std::string what;
    if (!rep.identity) what += " identity";
    if (!rep.commutative) what += " commutativity";
    if (!rep.associative) what += " associativity";
    if (!rep.frobenius_endo) what += " frobenius";
    throw Error(ErrorCode::ResidualNonzero, "formal group axioms fail:" + what);
  }
  return G;
}

Series<OKElem> FormalGroupLaw::endo(const OKElem& alpha, int D) const {
  const std::string key = alpha.key() + "|" + std::to_string(D);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  Series<OKElem> s = lt_solve(alpha, frob_, frob_, D, N_target_);
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(key, std::move(s)).first->second;
}

Series<OKElem> lt_endo(const FrobeniusSeries& f, const OKElem& alpha, int D, int N_target) {
  return lt_solve(alpha, f, f, D, N_target);
}

namespace {

// Dense trivariate series sum c_ijk x^i y^j z^k, 1 <= i+j+k <= T, raw coefficients.
struct Tri {
  int T;
  std::vector<Raw> c;
  explicit Tri(int T_) : T(T_), c(static_cast<std::size_t>((T_ + 1) * (T_ + 1) * (T_ + 1))) {}
  Raw& at(int i, int j, int k) { return c[static_cast<std::size_t>((i * (T + 1) + j) * (T + 1) + k)]; }
  const Raw& at(int i, int j, int k) const { return c[static_cast<std::size_t>((i * (T + 1) + j) * (T + 1) + k)]; }
};

Tri tri_mul(const OKRing& R, const Tri& a, const Tri& b) {
  const int T = a.T;
  Tri r(T);
  for (int i1 = 0; i1 <= T; ++i1)
    for (int j1 = 0; i1 + j1 <= T; ++j1)
      for (int k1 = 0; i1 + j1 + k1 <= T; ++k1) {
        const Raw& x = a.at(i1, j1, k1);
        if (R.raw_is_zero(x)) continue;
        const int rest = T - i1 - j1 - k1;
        for (int i2 = 0; i2 <= rest; ++i2)
          for (int j2 = 0; i2 + j2 <= rest; ++j2)
            for (int k2 = 0; i2 + j2 + k2 <= rest; ++k2) {
              const Raw& y = b.at(i2, j2, k2);
              if (!R.raw_is_zero(y)) fma(R, r.at(i1 + i2, j1 + j2, k1 + k2), x, y);
            }
      }
  return r;
}

// sum_{i,j} F_ij U^i V^j for trivariate U, V without constant terms.
Tri tri_substitute(const OKRing& R, const BiSeries<OKElem>& F, const Tri& U, const Tri& V) {
  const int T = F.trunc();
  Tri one(T);
  std::vector<Tri> pu{one, U}, pv{one, V};
  for (int k = 2; k <= T; ++k) {
    pu.push_back(tri_mul(R, pu.back(), U));
    pv.push_back(tri_mul(R, pv.back(), V));
  }
  Tri r(T);
  for (int i = 0; i <= T; ++i)
    for (int j = 0; i + j <= T; ++j) {
      if (i + j == 0 || F(i, j).is_zero()) continue;
      Tri term = i == 0 ? pv[static_cast<std::size_t>(j)] : j == 0 ? pu[static_cast<std::size_t>(i)] : tri_mul(R, pu[static_cast<std::size_t>(i)], pv[static_cast<std::size_t>(j)]);
      for (std::size_t n = 0; n < term.c.size(); ++n)
        if (!R.raw_is_zero(term.c[n])) fma(R, r.c[n], F(i, j).raw(), term.c[n]);
    }
  return r;
}

}  // namespace

AxiomReport check_axioms(const FormalGroupLaw& G, int k) {
  const BiSeries<OKElem>& F = G.law();
  const OKRingPtr& R = G.ring();
  const int T = F.trunc();
  AxiomReport rep;

  rep.identity = congruent(F(1, 0), R->one(), k) && congruent(F(0, 1), R->one(), k);
  for (int i = 2; i <= T; ++i)
    rep.identity = rep.identity && F(i, 0).divisible_by_pi_power(k) && F(0, i).divisible_by_pi_power(k);

  rep.commutative = true;
  for (int i = 0; i <= T; ++i)
    for (int j = i + 1; i + j <= T; ++j)
      rep.commutative = rep.commutative && congruent(F(i, j), F(j, i), k);

  const BiSeries<OKElem> d = compose(G.frobenius().series(T), F) - substitute_separate(F, G.frobenius().series(T), G.frobenius().series(T));
  rep.frobenius_endo = true;
  for (int i = 0; i <= T; ++i)
    for (int j = 0; i + j <= T; ++j)
      if (i + j >= 1) rep.frobenius_endo = rep.frobenius_endo && d(i, j).divisible_by_pi_power(k);

  // F(F(x,y),z) against F(x,F(y,z))
  const OKRing& Rr = *R;
  Tri X(T), Z(T), Fxy(T), Fyz(T);
  X.at(1, 0, 0)[0] = 1;
  Z.at(0, 0, 1)[0] = 1;
  for (int i = 0; i <= T; ++i)
    for (int j = 0; i + j <= T; ++j)
      if (i + j >= 1) {
        Fxy.at(i, j, 0) = F(i, j).raw();
        Fyz.at(0, i, j) = F(i, j).raw();
      }
  const Tri lhs = tri_substitute(Rr, F, Fxy, Z), rhs = tri_substitute(Rr, F, X, Fyz);
  rep.associative = true;
  for (std::size_t n = 0; n < lhs.c.size(); ++n) {
    Raw t{};
    Rr.raw_sub(lhs.c[n], rhs.c[n], t);
    Rr.canonicalize(t, k);
    if (!Rr.raw_is_zero(t)) rep.associative = false;
  }
  return rep;
}

LazardReport lazard_compare(const FormalGroupLaw& G) {
  const OKRingPtr& R = G.ring();
  const BiSeries<OKElem>& F = G.law();
  const long q = R->q();
  if (F.trunc() < q + 1) throw Error(ErrorCode::InvalidArgument, "law must be computed to total degree >= q + 1");
  LazardReport rep;
  rep.target_degree = static_cast<int>(q + 1);
  rep.compared_prec = G.target_prec() - 1;
  if (rep.compared_prec < 1) throw Error(ErrorCode::InsufficientPrecision, "law precision too low for the comparison");

  const OKElem Pi = G.frobenius().uniformizer();
  // Pi - Pi^q = pi * (Pi/pi) * (1 - Pi^(q-1))
  const OKElem unit = Pi.pi_divide(1) * (R->one() - Pi.pow(static_cast<std::uint64_t>(q - 1)));
  const OKElem inv = unit.unit_inverse();

  auto matched = [&](int s) {
    int last = 0;
    for (int d = 1; d <= q + 1; ++d) {
      for (int i = 0; i <= d; ++i) {
        const int j = d - i;
        OKElem want = R->zero();
        if (d == 1) want = R->one();
        else if (d == q && i > 0 && j > 0) {
          const OKElem b = R->from_int(binomial_mod(q, i, R->modulus()));
          want = b.pi_divide(1) * inv * R->from_int(s);
        }
        if (!congruent(F(i, j), want.with_prec(rep.compared_prec), rep.compared_prec)) return last;
      }
      last = d;
    }
    return last;
  };
  rep.matched_plus = matched(1);
  rep.matched_minus = matched(-1);
  const bool plus = rep.matched_plus == rep.target_degree, minus = rep.matched_minus == rep.target_degree;
  rep.matches = plus != minus;
  rep.sign_convention = rep.matches ? (plus ? 1 : -1) : 0;
  return rep;
}

LazardReport lazard_check(const FormalGroupLaw& G) {
  const LazardReport rep = lazard_compare(G);
  if (!rep.matches)
    throw Error(ErrorCode::NeitherMatches, "Lazard comparison: 1/(Pi-Pi^q) agrees through degree " + std::to_string(rep.matched_plus) +
                                               ", 1/(Pi^q-Pi) through degree " + std::to_string(rep.matched_minus) + " (target " +
                                               std::to_string(rep.target_degree) + ")");
  return rep;
}

BiSeries<FqElem> group_reduce(const FormalGroupLaw& G) { return reduce(G.law()); }

Series<FqElem> reduce_endo(const FormalGroupLaw& G, const OKElem& gamma, int D) {
  const Series<FqElem> g = reduce(G.endo(gamma, D));
  const MaybeInt t = gamma.valuation();
  if (!t) {
    if (!g.is_zero()) throw Error(ErrorCode::ResidualNonzero, "reduction of [0] is not zero");
    return g;
  }
  long Q = 1;
  for (long i = 0; i < *t && Q <= D; ++i) Q *= G.ring()->q();
  for (int k = 1; k <= D; ++k) {
    const bool zero = g[k].is_zero();
    if (k % Q != 0 && !zero) throw Error(ErrorCode::ResidualNonzero, "reduced endomorphism has a term off the q^t-multiples");
    if (k == Q && zero) throw Error(ErrorCode::ResidualNonzero, "reduced endomorphism has the wrong Weierstrass degree");
  }
  return g;
}

Series<FqElem> frobenius_factor(const Series<FqElem>& g, int s) {
  if (s < 0) throw Error(ErrorCode::InvalidArgument, "s must be >= 0");
  long Q = 1;
  for (int i = 0; i < s; ++i) Q *= g.ring()->q();
  const long Dn = g.trunc() / Q;
  if (Dn < 1) throw Error(ErrorCode::TruncationMismatch, "truncation below q^s");
  Series<FqElem> r(g.ring(), static_cast<int>(Dn));
  for (int k = 1; k <= g.trunc(); ++k) {
    if (k % Q == 0) {
      if (k / Q <= Dn) r.set(static_cast<int>(k / Q), g[k]);
    } else if (!g[k].is_zero()) {
      throw Error(ErrorCode::ReductionMismatch, "coefficient of x^" + std::to_string(k) + " is off the q^s-multiples");
    }
  }
  return r;
}

}  // namespace ramforge
