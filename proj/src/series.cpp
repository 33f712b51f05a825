#include "ramforge/series.hpp"

namespace ramforge {

Series<FqElem> reduce(const Series<OKElem>& a) {
  Series<FqElem> r(a.ring()->residue_field(), a.trunc());
  for (int k = 1; k <= a.trunc(); ++k) {
    if (a[k].prec() < 1)
      throw Error(ErrorCode::InsufficientPrecision, "coefficient of x^" + std::to_string(k) + " is not known mod pi");
    r.set(k, a[k].residue());
  }
  return r;
}

Series<OKElem> lift(const Series<FqElem>& a, const OKRingPtr& ring) {
  Series<OKElem> r(ring, a.trunc());
  for (int k = 1; k <= a.trunc(); ++k) r.set(k, ring->lift(a[k]));
  return r;
}

Series<OKElem> convert(const Series<OKElem>& a, const OKRingPtr& ring) {
  Series<OKElem> r(ring, a.trunc());
  for (int k = 1; k <= a.trunc(); ++k) r.set(k, ring->convert(a[k]));
  return r;
}

bool congruent(const Series<OKElem>& a, const Series<OKElem>& b, int k) {
  a.check_compatible(b);
  for (int i = 1; i <= a.trunc(); ++i)
    if (!congruent(a[i], b[i], k)) return false;
  return true;
}

Series<OKElem> with_prec(const Series<OKElem>& a, int k) {
  Series<OKElem> r = a;
  for (int i = 1; i <= a.trunc(); ++i) r.set(i, a[i].with_prec(k));
  return r;
}

BiSeries<FqElem> reduce(const BiSeries<OKElem>& F) {
  BiSeries<FqElem> r(F.ring()->residue_field(), F.trunc());
  for (int i = 0; i <= F.trunc(); ++i)
    for (int j = 0; i + j <= F.trunc(); ++j) {
      if (i + j == 0) continue;
      if (F(i, j).prec() < 1) throw Error(ErrorCode::InsufficientPrecision, "coefficient is not known mod pi");
      r.set(i, j, F(i, j).residue());
    }
  return r;
}

}  // namespace ramforge
