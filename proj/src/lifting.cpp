#include "ramforge/lifting.hpp"

namespace ramforge {

namespace {

using FqSeries = Series<FqElem>;
using OKSeries = Series<OKElem>;

struct FrobDegree {
  int s;
  long Q;
};

FrobDegree frobenius_degree(const FqSeries& zeta) {
  const auto w = wideg(zeta);
  if (!w) throw Error(ErrorCode::InfiniteAtPrecision, "zeta vanishes to the truncation");
  const long q = zeta.ring()->q();
  long Q = 1;
  int s = 0;
  while (Q < *w) {
    Q *= q;
    ++s;
  }
  if (Q != *w || s == 0)
    throw Error(ErrorCode::HypothesisViolated, "wideg(zeta) = " + std::to_string(*w) + " is not a positive power of q");
  return {s, Q};
}

/// a with truncation D: cut down, or padded with zeros.
FqSeries resized(const FqSeries& a, int D) {
  if (D <= a.trunc()) return a.truncated(D);
  FqSeries r(a.ring(), D);
  for (int k = 1; k <= a.trunc(); ++k) r.set(k, a[k]);
  return r;
}

FqSeries at_least(const FqSeries& a, int D, const char* name) {
  if (a.trunc() < D)
    throw Error(ErrorCode::TruncationMismatch, std::string(name) + " truncated at " + std::to_string(a.trunc()) + " < " + std::to_string(D));
  return a.truncated(D);
}

std::vector<FqSeries> powers(const FqSeries& a, int n) {
  std::vector<FqSeries> out{a};
  for (int j = 2; j <= n; ++j) out.push_back(mul(out.back(), a));
  return out;
}

FqElem at(const FullSeries<FqElem>& a, int k) { return k >= 0 && k <= a.trunc() ? a[k] : a.ring()->zero(); }

bool commutes(const OKSeries& a, const OKSeries& b) { return (compose(a, b) - compose(b, a)).is_zero(); }

OKSeries level_quotient(const OKSeries& a, const OKSeries& b, int r) {
  const OKSeries diff = a - b;
  OKSeries out(a.ring(), a.trunc());
  for (int k = 1; k <= a.trunc(); ++k) out.set(k, diff[k].pi_divide(r));
  return out;
}

OKElem primitive_root(const OKRing& R) {
  const long q = R.q();
  std::vector<long> primes;
  long m = q - 1;
  for (long l = 2; l * l <= m; ++l)
    if (m % l == 0) {
      primes.push_back(l);
      while (m % l == 0) m /= l;
    }
  if (m > 1) primes.push_back(m);
  for (const FqElem& a : R.residue_field()->elements()) {
    if (a.is_zero()) continue;
    bool primitive = true;
    for (long l : primes)
      if (a.pow(static_cast<std::uint64_t>((q - 1) / l)).is_one()) primitive = false;
    if (primitive) return R.teichmuller(a);
  }
  throw Error(ErrorCode::InvalidArgument, "no primitive root in the residue field");
}

OKSeries prepare(const OKSeries& s, const OKRingPtr& R, int D, int N, const char* what) {
  if (s.trunc() < D)
    throw Error(ErrorCode::OraclePrecision, std::string(what) + " truncated at " + std::to_string(s.trunc()) + " < " + std::to_string(D));
  const OKSeries c = with_prec(convert(s.truncated(D), R), N);
  if (c.min_prec() < N)
    throw Error(ErrorCode::OraclePrecision, std::string(what) + " known only mod pi^" + std::to_string(c.min_prec()));
  return c;
}

}  // namespace

int congruence_level(const OKSeries& a, const OKSeries& b, int cap) {
  const OKSeries diff = a - b;
  int level = cap;
  for (int k = 1; k <= diff.trunc(); ++k) {
    const MaybeInt v = diff[k].valuation();
    level = std::min(level, v ? static_cast<int>(*v) : diff[k].prec());
  }
  return level;
}

FqSeries level_residual(const FqSeries& zeta, const FqSeries& mu, const FqSeries& d, const FqSeries& w) {
  const int D = d.trunc();
  if (w.trunc() > D) throw Error(ErrorCode::TruncationMismatch, "w truncated above d");
  const FqSeries z = at_least(zeta, D, "zeta"), m = at_least(mu, D, "mu");
  const FullSeries<FqElem> dmz = compose(derivative(m), z);
  return compose(d, m) - mul(d, dmz) - compose(resized(w, D), z);
}

std::pair<FqSeries, FqSeries> b_vector(const FqSeries& theta, const FqSeries& zeta, const FqSeries& mu) {
  const FqSeries d = -compose(resized(theta, zeta.trunc()), zeta);
  const FqSeries t = resized(theta, mu.trunc());
  const FqSeries w = mul(t, derivative(mu)) - compose(t, mu);
  return {d, w};
}

namespace {

/// Kernel of the level equation in the window d_1..d_D, w_1..w_{D/Q}; with
/// `pinned` the linear coefficients are forced to 0.
FqMatrix level_kernel(const FqSeries& zeta_in, const FqSeries& mu_in, int D, long Q, bool pinned) {
  const FqPtr& k = zeta_in.ring();
  const FqSeries zeta = zeta_in.truncated(D), mu = mu_in.truncated(D);
  const int Dw = static_cast<int>(D / Q), ncols = D + Dw;
  const auto mu_pow = powers(mu, D);
  const auto zeta_pow = powers(zeta, Dw);
  const FullSeries<FqElem> dmz = compose(derivative(mu), zeta);
  FqMatrix A;
  for (int deg = 1; deg <= D; ++deg) {
    FqVector row(static_cast<std::size_t>(ncols), k->zero());
    for (int j = 1; j <= D; ++j) row[static_cast<std::size_t>(j - 1)] = mu_pow[static_cast<std::size_t>(j - 1)][deg] - at(dmz, deg - j);
    for (int j = 1; j <= Dw; ++j) row[static_cast<std::size_t>(D + j - 1)] = -zeta_pow[static_cast<std::size_t>(j - 1)][deg];
    A.push_back(std::move(row));
  }
  if (pinned)
    for (int c : {0, D}) {
      FqVector row(static_cast<std::size_t>(ncols), k->zero());
      row[static_cast<std::size_t>(c)] = k->one();
      A.push_back(std::move(row));
    }
  return kernel_basis(k, A, ncols);
}

std::vector<int> window_columns(int D, int sub_d, int sub_w) {
  std::vector<int> cols;
  for (int i = 0; i < sub_d; ++i) cols.push_back(i);
  for (int i = 0; i < sub_w; ++i) cols.push_back(D + i);
  return cols;
}

}  // namespace

LevelSpace level_space(const FqSeries& zeta_in, const FqSeries& mu_in, int D, int level) {
  if (level < 1) throw Error(ErrorCode::InvalidArgument, "level must be >= 1");
  const FqPtr& k = zeta_in.ring();
  const FrobDegree fd = frobenius_degree(zeta_in);
  if (D < fd.Q + 2)
    throw Error(ErrorCode::DegenerateWindow, "window " + std::to_string(D) + " below q^s + 2 = " + std::to_string(fd.Q + 2));
  const FqSeries zeta = at_least(zeta_in, D, "zeta"), mu = at_least(mu_in, D, "mu");
  if (mu[1].is_zero()) throw Error(ErrorCode::NotInvertible, "mu'(0) = 0");
  const int E = std::min({zeta_in.trunc(), mu_in.trunc(), 2 * D});
  if (!(compose(mu_in.truncated(E), zeta_in.truncated(E)) == compose(zeta_in.truncated(E), mu_in.truncated(E))))
    throw Error(ErrorCode::NoncommutingPair, "mu o zeta != zeta o mu");

  LevelSpace L;
  L.level = level;
  L.zeta = zeta;
  L.mu = mu;
  L.s = fd.s;
  L.Q = fd.Q;
  L.D_d = D;
  L.D_w = static_cast<int>(D / fd.Q);
  L.ext_window = E;
  const int Dw = L.D_w, ncols = D + Dw;
  L.basis_Z = level_kernel(zeta, mu, D, fd.Q, false);
  L.basis_Zo = level_kernel(zeta, mu, D, fd.Q, true);

  FqMatrix B;
  const FqSeries mu_w = mu.truncated(Dw);
  for (int j = 1; j <= Dw; ++j) {
    const auto [d, w] = b_vector(FqSeries::monomial(k, j, j, k->one()), zeta, mu_w);
    FqVector v;
    for (int i = 1; i <= D; ++i) v.push_back(d[i]);
    for (int i = 1; i <= Dw; ++i) v.push_back(w[i]);
    B.push_back(std::move(v));
  }
  L.basis_B = rref(k, std::move(B), ncols).rows;

  // Compare on the sub-window, keeping only the Z^o solutions that extend to degree E.
  L.sub_d = static_cast<int>(Dw * fd.Q - fd.Q);
  L.sub_w = Dw - 1;
  const std::vector<int> cols = window_columns(D, L.sub_d, L.sub_w);
  const std::vector<int> ext_cols = window_columns(E, L.sub_d, L.sub_w);
  const FqMatrix zo_ext = E == D ? L.basis_Zo : level_kernel(zeta_in, mu_in, E, fd.Q, true);
  const int n = static_cast<int>(cols.size());
  L.quotient_dim = rank(k, project(zo_ext, ext_cols), n) - rank(k, project(L.basis_B, cols), n);
  return L;
}

FqSeries solve_theta(const FqSeries& d, const FqSeries& zeta_in) {
  const FqPtr& k = d.ring();
  const int D = d.trunc();
  const FqSeries zeta = at_least(zeta_in, D, "zeta");
  const FrobDegree fd = frobenius_degree(zeta);
  const int T = static_cast<int>(D / fd.Q);
  FqSeries theta(k, std::max(T, 1));
  if (T < 2) {
    if (!d.is_zero()) throw Error(ErrorCode::NotInImage, "d is not of the form -theta(zeta) in the window");
    return theta;
  }
  const auto zeta_pow = powers(zeta, T);
  FqMatrix A;
  FqVector b;
  for (int deg = 1; deg <= D; ++deg) {
    FqVector row;
    for (int j = 2; j <= T; ++j) row.push_back(-zeta_pow[static_cast<std::size_t>(j - 1)][deg]);
    A.push_back(std::move(row));
    b.push_back(d[deg]);
  }
  const auto x = solve(k, A, b, T - 1);
  if (!x) throw Error(ErrorCode::NotInImage, "d is not of the form -theta(zeta) in the window");
  for (int j = 2; j <= T; ++j) theta.set(j, (*x)[static_cast<std::size_t>(j - 2)]);
  return theta;
}

namespace {

/// Rows 1..D give d, rows D+1..2D give w, for the unknowns theta_1..theta_D.
FqMatrix joint_matrix(const FqSeries& zeta, const FqSeries& mu, int D, long Q) {
  const FqPtr& k = zeta.ring();
  const int Tz = static_cast<int>(D / Q);
  const auto zeta_pow = powers(zeta, std::max(Tz, 1));
  const auto mu_pow = powers(mu, D);
  const FullSeries<FqElem> dmu = derivative(mu);
  FqMatrix A;
  for (int deg = 1; deg <= D; ++deg) {
    FqVector row;
    for (int j = 1; j <= D; ++j) row.push_back(j <= Tz ? -zeta_pow[static_cast<std::size_t>(j - 1)][deg] : k->zero());
    A.push_back(std::move(row));
  }
  for (int deg = 1; deg <= D; ++deg) {
    FqVector row;
    for (int j = 1; j <= D; ++j) row.push_back(at(dmu, deg - j) - mu_pow[static_cast<std::size_t>(j - 1)][deg]);
    A.push_back(std::move(row));
  }
  return A;
}

FqVector stacked(const FqSeries& d, const FqSeries& w) {
  FqVector b;
  for (int deg = 1; deg <= d.trunc(); ++deg) b.push_back(d[deg]);
  for (int deg = 1; deg <= w.trunc(); ++deg) b.push_back(w[deg]);
  return b;
}

}  // namespace

FqSeries solve_theta(const FqSeries& d, const FqSeries& w, const FqSeries& zeta_in, const FqSeries& mu_in) {
  const FqPtr& k = d.ring();
  const int D = d.trunc();
  if (w.trunc() != D) throw Error(ErrorCode::TruncationMismatch, "d and w truncations differ");
  const FqSeries zeta = at_least(zeta_in, D, "zeta"), mu = at_least(mu_in, D, "mu");
  const FrobDegree fd = frobenius_degree(zeta);
  const auto x = solve(k, joint_matrix(zeta, mu, D, fd.Q), stacked(d, w), D);
  if (!x) throw Error(ErrorCode::NotInB, "level difference is not in B");
  FqSeries theta(k, D);
  for (int j = 1; j <= D; ++j) theta.set(j, (*x)[static_cast<std::size_t>(j - 1)]);
  return theta;
}

FqMatrix theta_kernel(const FqSeries& zeta_in, const FqSeries& mu_in, int D) {
  const FqSeries zeta = at_least(zeta_in, D, "zeta"), mu = at_least(mu_in, D, "mu");
  const FrobDegree fd = frobenius_degree(zeta);
  return kernel_basis(zeta.ring(), joint_matrix(zeta, mu, D, fd.Q), D);
}

ConjugatorStep conjugator_step(const OKSeries& f1, const OKSeries& u1, const OKSeries& f2, const OKSeries& u2, int r) {
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "level must be >= 1");
  const OKRingPtr& R = f1.ring();
  const int D = f1.trunc();
  for (const OKSeries* s : {&f1, &u1, &f2, &u2}) {
    f1.check_compatible(*s);
    if (s->min_prec() < r + 1)
      throw Error(ErrorCode::InsufficientPrecision, "inputs must be known mod pi^" + std::to_string(r + 1));
  }
  if (!congruent(f1, f2, r) || !congruent(u1, u2, r))
    throw Error(ErrorCode::HypothesisViolated, "pairs are not congruent mod pi^" + std::to_string(r));
  const FqSeries zeta = reduce(f1), mu = reduce(u1);
  frobenius_degree(zeta);
  if (mu[1].is_zero()) throw Error(ErrorCode::NotInvertible, "u1 is not invertible");
  const FullSeries<FqElem> dz = derivative(zeta);
  for (int i = 0; i <= dz.trunc(); ++i)
    if (!dz[i].is_zero()) throw Error(ErrorCode::HypothesisViolated, "reduction of f1 is not a series in x^p");

  const FqSeries d = reduce(level_quotient(f1, f2, r)), w = reduce(level_quotient(u1, u2, r));
  ConjugatorStep out{OKSeries::identity(R, D), FqSeries(zeta.ring(), D)};
  if (d.is_zero() && w.is_zero()) return out;
  if (!d[1].is_zero() || !w[1].is_zero())
    throw Error(ErrorCode::NotInB, "level-" + std::to_string(r) + " difference has a nonzero linear term");
  if (!level_residual(zeta, mu, d, w).is_zero())
    throw Error(ErrorCode::NoncommutingPair, "level-" + std::to_string(r) + " difference violates the commutation equation");
  out.theta = solve_theta(d, w, zeta, mu);
  out.phi = out.phi + lift(out.theta, R).scaled(R->uniformizer().pow(static_cast<std::uint64_t>(r)));
  if (!congruent(compose(out.phi, f1), compose(f2, out.phi), r + 1) || !congruent(compose(out.phi, u1), compose(u2, out.phi), r + 1))
    throw Error(ErrorCode::ResidualNonzero, "conjugator fails its congruences at level " + std::to_string(r + 1));
  return out;
}

bool lemma_same_check(const OKSeries& f, const OKSeries& u1, const OKSeries& u2, const OKElem& alpha1,
                      const OKElem& alpha2, const OKElem& beta, const FormalGroupLaw& F, int r) {
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "level must be >= 1");
  const OKRingPtr& R = f.ring();
  const OKElem one = R->one();
  const MaybeInt v1 = (R->convert(alpha1) - one).valuation(), vb = R->convert(beta).valuation(),
                 v2 = (R->convert(alpha2) - one).valuation();
  const bool chain = v1 && *v1 > 0 && vb && *v1 < *vb && (!v2 || *vb <= *v2);
  if (!chain) throw Error(ErrorCode::HypothesisViolated, "need 0 < v(alpha1 - 1) < v(beta) <= v(alpha2 - 1)");
  const int D = f.trunc();
  const auto endo = [&](const OKElem& a) { return convert(F.endo(a, D), R); };
  if (!congruent(f, endo(beta), r) || !congruent(u1, endo(alpha1), r) || !congruent(u2, endo(alpha2), r))
    throw Error(ErrorCode::HypothesisViolated, "series are not congruent to the endomorphisms mod pi^" + std::to_string(r));
  if (!commutes(f, u1) || !commutes(f, u2) || !commutes(u1, u2))
    throw Error(ErrorCode::HypothesisViolated, "series do not commute to the truncation");
  return congruent(f[1], R->convert(beta), r + 1) && congruent(u2[1], R->convert(alpha2), r + 1);
}

OKSeries case1_reduce(const OKSeries& g, const OKSeries& u) {
  const OKRingPtr& R = g.ring();
  const MaybeInt v = g[1].valuation();
  if (!v || *v != 1) throw Error(ErrorCode::HypothesisViolated, "v(g'(0)) must be 1");
  if (!u[1].is_unit()) throw Error(ErrorCode::NotInvertible, "u'(0) is not a unit");
  if (!commutes(g, u)) throw Error(ErrorCode::NoncommutingPair, "g and u do not commute");
  const FqSeries gamma = frobenius_factor(reduce(g), 1);
  if (!(reduce(u).truncated(gamma.trunc()) == gamma)) throw Error(ErrorCode::ReductionMismatch, "reduction of u differs from gamma");
  const OKSeries h = compose(g, comp_inverse(u));
  std::vector<OKElem> c;
  for (int k = 1; k <= h.trunc(); ++k) c.push_back(h[k]);
  FrobeniusSeries(R, c);
  return h;
}

RectifyResult rectify(const OKSeries& g_in, const StabilizerOracle& oracle, const FormalGroupLaw& F, int N) {
  const OKRingPtr& R = g_in.ring();
  if (R->e() != 1) throw Error(ErrorCode::HypothesisViolated, "rectify needs an unramified ring (e = 1)");
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "target precision must be >= 1");
  if (!F.ring()->same_structure(*R)) throw Error(ErrorCode::RingMismatch, "group law over a different ring");
  const int D = g_in.trunc();
  // [omega]_F mod pi^N needs omega to the solver's working precision
  const int Nw = working_precision(N, R->q(), D);
  if (F.target_prec() < N) throw Error(ErrorCode::InsufficientPrecision, "group law precision below the target " + std::to_string(N));
  if (R->prec() < Nw)
    throw Error(ErrorCode::InsufficientPrecision, "ring precision " + std::to_string(R->prec()) + " below the working precision " + std::to_string(Nw));
  const OKSeries g = with_prec(g_in, N);
  if (g.min_prec() < N) throw Error(ErrorCode::InsufficientPrecision, "g known only mod pi^" + std::to_string(g.min_prec()));

  RectifyResult res;
  res.beta = g[1];
  const MaybeInt sv = res.beta.valuation();
  if (!sv || *sv == 0) throw Error(ErrorCode::NotStable, "g'(0) must be a nonzero nonunit");
  const int s = *sv;
  long Q = 1;
  for (int i = 0; i < s; ++i) Q *= R->q();
  if (D < Q + 2)
    throw Error(ErrorCode::DegenerateWindow, "truncation " + std::to_string(D) + " below q^s + 2 = " + std::to_string(Q + 2));
  const OKElem pp = R->from_int(R->p());
  const OKElem alpha2 = R->one() + pp.pow(static_cast<std::uint64_t>(s));
  const OKElem omega = primitive_root(*R);
  res.alpha = alpha2 * omega;

  const auto ask = [&](const OKElem& a, const char* what) {
    const OKSeries u = prepare(oracle(a), R, D, N, what);
    if (!congruent(u[1], a, N)) throw Error(ErrorCode::OraclePrecision, std::string(what) + "'(0) differs from its label");
    return u;
  };
  const auto endo = [&](const OKElem& a) { return with_prec(convert(F.endo(a, D), R), N); };
  const OKSeries u = compose(ask(alpha2, "u_(1+p^s)"), ask(omega, "u_omega"));
  const OKSeries f_t = endo(res.beta), u_t = endo(res.alpha);
  if (!(reduce(g) == reduce(f_t))) throw Error(ErrorCode::ReductionMismatch, "reduction of g is not that of [beta]_F");
  if (!(reduce(u) == reduce(u_t))) throw Error(ErrorCode::ReductionMismatch, "reduction of u_alpha is not that of [alpha]_F");

  // the lemma's second stabilizer element exists only when s >= 2
  std::optional<OKSeries> u1, u2;
  std::optional<OKElem> alpha1;
  if (s >= 2) {
    alpha1 = R->one() + pp.pow(static_cast<std::uint64_t>(s - 1));
    u1 = ask(*alpha1, "u_(1+p^(s-1))");
    u2 = ask(alpha2, "u_(1+p^s)");
  }

  const FqSeries zeta_t = reduce(f_t), mu_t = reduce(u_t);
  const FqPtr& k = R->residue_field();
  std::optional<FqMatrix> kernel;  // computed on first need

  res.psi = OKSeries::identity(R, D);
  OKSeries psi_inv = res.psi, gr = g, ur = u;
  const auto conjugate_by = [&](const OKSeries& phi) {
    res.psi = compose(phi, res.psi);
    psi_inv = comp_inverse(res.psi);
    gr = compose(res.psi, compose(g, psi_inv));
    ur = compose(res.psi, compose(u, psi_inv));
  };
  const auto shift = [&](const FqSeries& theta, int m) {
    return OKSeries::identity(R, D) + lift(theta, R).scaled(R->uniformizer().pow(static_cast<std::uint64_t>(m)));
  };
  const auto level_diff = [&](const OKSeries& a, const OKSeries& b, int r) {
    return stacked(reduce(level_quotient(a, f_t, r)), reduce(level_quotient(b, u_t, r)));
  };

  // Levels below r fix theta only up to theta_kernel: the window cannot see the
  // difference, but level r can. A direction reopens level m < r with a kernel
  // element and redoes the greedy steps m..r-1. Their effects on the level-r
  // difference are combined linearly; the exact step afterwards decides.
  using Pair = std::pair<OKSeries, OKSeries>;
  const auto conj = [](const OKSeries& chi, const Pair& P) -> Pair {
    const OKSeries ci = comp_inverse(chi);
    return {compose(chi, compose(P.first, ci)), compose(chi, compose(P.second, ci))};
  };
  const auto reopen = [&](const Pair& P, int m, const FqSeries& kappa, int r) -> std::optional<OKSeries> {
    OKSeries chi = shift(kappa, m);
    Pair Q = conj(chi, P);
    for (int l = m; l < r; ++l) {
      ConjugatorStep step;
      try {
        step = conjugator_step(Q.first, Q.second, f_t, u_t, l);
      } catch (const Error&) {
        return std::nullopt;
      }
      chi = compose(step.phi, chi);
      Q = conj(step.phi, Q);
    }
    if (!congruent(Q.first, f_t, r) || !congruent(Q.second, u_t, r)) return std::nullopt;
    return chi;
  };
  struct Repair {
    OKSeries chi;
    int lowest = 0;
  };
  const auto repair = [&](int r) -> std::optional<Repair> {
    if (!kernel) kernel = theta_kernel(zeta_t, mu_t, D);
    if (kernel->empty() || r < 2) return std::nullopt;
    std::vector<FqSeries> basis;
    for (const FqVector& v : *kernel) {
      FqSeries kappa(k, D);
      for (int j = 1; j <= D; ++j) kappa.set(j, v[static_cast<std::size_t>(j - 1)]);
      basis.push_back(std::move(kappa));
    }
    const FqMatrix A0 = joint_matrix(zeta_t, mu_t, D, frobenius_degree(zeta_t).Q);
    Repair out{OKSeries::identity(R, D), r};
    Pair P{gr, ur};
    for (int round = 0; round < 3; ++round) {
      const FqVector base = level_diff(P.first, P.second, r);
      FqMatrix A = A0;
      std::vector<std::pair<int, std::size_t>> dirs;
      for (int m = 1; m < r; ++m)
        for (std::size_t i = 0; i < basis.size(); ++i) {
          const auto chi = reopen(P, m, basis[i], r);
          if (!chi) continue;
          const Pair Q = conj(*chi, P);
          const FqVector moved = level_diff(Q.first, Q.second, r);
          for (std::size_t row = 0; row < A.size(); ++row) A[row].push_back(base[row] - moved[row]);
          dirs.emplace_back(m, i);
        }
      const auto x = solve(k, A, base, D + static_cast<int>(dirs.size()));
      if (!x) return std::nullopt;
      for (int m = 1; m < r; ++m) {
        FqSeries kappa(k, D);
        for (std::size_t j = 0; j < dirs.size(); ++j)
          if (dirs[j].first == m) kappa = kappa + basis[dirs[j].second].scaled((*x)[static_cast<std::size_t>(D) + j]);
        if (kappa.is_zero()) continue;
        const auto chi = reopen(P, m, kappa, r);
        if (!chi) return std::nullopt;
        P = conj(*chi, P);
        out.chi = compose(*chi, out.chi);
        out.lowest = std::min(out.lowest, m);
      }
      try {
        conjugator_step(P.first, P.second, f_t, u_t, r);
        return out;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotInB) throw;
      }
    }
    return std::nullopt;
  };

  int level = std::min(congruence_level(gr, f_t, N), congruence_level(ur, u_t, N));
  for (int r = 1; r < N; ++r) {
    LevelRecord rec;
    rec.r = r;
    rec.before = level;
    rec.theta = FqSeries(k, D);
    rec.repair = OKSeries::identity(R, D);
    if (alpha1) {
      try {
        rec.lemma = lemma_same_check(gr, compose(res.psi, compose(*u1, psi_inv)), compose(res.psi, compose(*u2, psi_inv)),
                                     *alpha1, alpha2, res.beta, F, r);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::HypothesisViolated) throw;
      }
    }
    if (level < r + 1) {
      ConjugatorStep step;
      try {
        step = conjugator_step(gr, ur, f_t, u_t, r);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotInB) throw;
        const std::optional<Repair> fix = repair(r);
        if (!fix) throw Error(ErrorCode::NotInB, "level " + std::to_string(r) + ": " + e.what());
        rec.repair = fix->chi;
        rec.reopened = fix->lowest;
        conjugate_by(fix->chi);
        step = conjugator_step(gr, ur, f_t, u_t, r);
      }
      rec.theta = step.theta;
      conjugate_by(step.phi);
      level = std::min(congruence_level(gr, f_t, N), congruence_level(ur, u_t, N));
    }
    rec.after = level;
    rec.psi = res.psi;
    res.transcript.push_back(std::move(rec));
  }
  res.achieved_level = congruence_level(gr, f_t, N);
  return res;
}

ConjugatedFamily::ConjugatedFamily(FormalGroupLawPtr F, OKSeries psi0) : F_(std::move(F)), psi0_(std::move(psi0)) {
  if (!F_) throw Error(ErrorCode::InvalidArgument, "missing group law");
  psi0_ = convert(psi0_, F_->ring());
  psi0_inv_ = comp_inverse(psi0_);
}

OKSeries ConjugatedFamily::member(const OKElem& alpha) const {
  const OKSeries e = convert(F_->endo(alpha, psi0_.trunc()), F_->ring());
  return compose(psi0_, compose(e, psi0_inv_));
}

StabilizerOracle ConjugatedFamily::oracle() const {
  return [this](const OKElem& alpha) { return member(alpha); };
}

}  // namespace ramforge
