#pragma once

// Level-by-level lifting of commuting pairs. A pair (f, u) over O_K lifts
// (zeta, mu) over F_q; two liftings congruent mod pi^r differ at level r by
// (d, w) with d(mu) = d * mu'(zeta) + w(zeta), and a conjugation by
// x + pi^r theta moves them by d = -theta(zeta), w = mu' theta - theta(mu).

#include <functional>
#include <optional>

#include "ramforge/linalg.hpp"
#include "ramforge/lubintate.hpp"

namespace ramforge {

/// Z, Z^o and B inside a finite window. Coordinates of a vector are
/// d_1..d_{D_d} followed by w_1..w_{D_w}. B is spanned by theta = x^j,
/// j >= 1: the linear term of a conjugator x + pi^r theta is allowed.
struct LevelSpace {
  int level = 1;
  Series<FqElem> zeta, mu;
  int s = 0;   // wideg(zeta) = q^s
  long Q = 0;  // q^s
  int D_d = 0, D_w = 0;
  FqMatrix basis_Z, basis_Zo, basis_B;
  /// quotient_dim is measured on d_1..d_{sub_d}, w_1..w_{sub_w}, counting only
  /// Z^o solutions that extend to the window ext_window = min(2D, input truncation).
  int sub_d = 0, sub_w = 0, ext_window = 0;
  int quotient_dim = 0;

  int dim_Z() const { return static_cast<int>(basis_Z.size()); }
  int dim_Zo() const { return static_cast<int>(basis_Zo.size()); }
  int dim_B() const { return static_cast<int>(basis_B.size()); }
  /// dim Zo - dim B over the whole window, truncation artifacts included.
  int window_quotient_dim() const { return dim_Zo() - dim_B(); }
};

LevelSpace level_space(const Series<FqElem>& zeta, const Series<FqElem>& mu, int D, int level = 1);

/// d(mu) - d * mu'(zeta) - w(zeta) through degree d.trunc(); w may be truncated lower.
Series<FqElem> level_residual(const Series<FqElem>& zeta, const Series<FqElem>& mu, const Series<FqElem>& d,
                              const Series<FqElem>& w);

/// (d, w) for the conjugation by x + pi^r theta: d = -theta(zeta), w = mu' theta - theta(mu).
std::pair<Series<FqElem>, Series<FqElem>> b_vector(const Series<FqElem>& theta, const Series<FqElem>& zeta,
                                                   const Series<FqElem>& mu);

/// theta in x^2 F_q[[x]] with -theta(zeta) = d through degree d.trunc().
/// The result has truncation floor(D / wideg(zeta)) (at least 1).
Series<FqElem> solve_theta(const Series<FqElem>& d, const Series<FqElem>& zeta);

/// theta in x F_q[[x]] with -theta(zeta) = d and mu' theta - theta(mu) = w, all
/// of truncation D. Coefficients left free by both equations are set to 0.
Series<FqElem> solve_theta(const Series<FqElem>& d, const Series<FqElem>& w, const Series<FqElem>& zeta,
                           const Series<FqElem>& mu);

/// theta with -theta(zeta) = 0 and mu' theta = theta(mu) through degree D. Nonzero
/// only through truncation: such theta are left undetermined by one level.
FqMatrix theta_kernel(const Series<FqElem>& zeta, const Series<FqElem>& mu, int D);

struct ConjugatorStep {
  Series<OKElem> phi;    // x + pi^r lift(theta)
  Series<FqElem> theta;  // zero when the pairs already agree mod pi^(r+1)
};

/// phi = x mod pi^r with phi o f1 = f2 o phi and phi o u1 = u2 o phi mod pi^(r+1).
ConjugatorStep conjugator_step(const Series<OKElem>& f1, const Series<OKElem>& u1, const Series<OKElem>& f2,
                               const Series<OKElem>& u2, int r);

/// Checks the hypotheses (HYPOTHESIS_VIOLATED otherwise) and returns whether
/// f'(0) = beta and u2'(0) = alpha2 mod pi^(r+1).
bool lemma_same_check(const Series<OKElem>& f, const Series<OKElem>& u1, const Series<OKElem>& u2,
                      const OKElem& alpha1, const OKElem& alpha2, const OKElem& beta, const FormalGroupLaw& F,
                      int r);

/// h = g o u^(-1) for v(g'(0)) = 1, checked to be a Frobenius series.
Series<OKElem> case1_reduce(const Series<OKElem>& g, const Series<OKElem>& u);

/// alpha -> u_alpha with u_alpha'(0) = alpha, commuting with g.
using StabilizerOracle = std::function<Series<OKElem>(const OKElem&)>;

struct LevelRecord {
  int r = 0;
  Series<FqElem> theta;
  // When the greedy choices below r leave level r unsolvable: the conjugator
  // applied first, and the lowest level it changes (0 if none).
  Series<OKElem> repair;
  int reopened = 0;
  Series<OKElem> psi;  // psi after this level
  int before = 0;  // congruence level of (psi g psi^-1, psi u psi^-1) with ([beta], [alpha]) on entry
  int after = 0;   // same after the step
  std::optional<bool> lemma;  // lemma_same_check at this level, when s >= 2
};

struct RectifyResult {
  Series<OKElem> psi;
  OKElem beta;
  OKElem alpha;  // (1 + p^s) * omega, the linear term of the stabilizer element used
  int achieved_level = 0;
  std::vector<LevelRecord> transcript;
};

RectifyResult rectify(const Series<OKElem>& g, const StabilizerOracle& oracle, const FormalGroupLaw& F,
                      int N_target);

/// Test family: endomorphisms psi0 o [alpha]_F o psi0^(-1) of a conjugated
/// Lubin-Tate group, truncated to psi0.trunc().
class ConjugatedFamily {
 public:
  ConjugatedFamily(FormalGroupLawPtr F, Series<OKElem> psi0);

  const FormalGroupLaw& group() const { return *F_; }
  const Series<OKElem>& psi0() const { return psi0_; }
  Series<OKElem> member(const OKElem& alpha) const;
  StabilizerOracle oracle() const;

 private:
  FormalGroupLawPtr F_;
  Series<OKElem> psi0_, psi0_inv_;
};

/// Largest k <= cap with a = b mod pi^k coefficientwise.
int congruence_level(const Series<OKElem>& a, const Series<OKElem>& b, int cap);

}  // namespace ramforge
