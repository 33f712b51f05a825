#include "ramforge/linalg.hpp"

namespace ramforge {

Echelon rref(const FqPtr& k, FqMatrix m, int ncols) {
  Echelon out;
  std::size_t top = 0;
  for (int c = 0; c < ncols && top < m.size(); ++c) {
    std::size_t piv = top;
    while (piv < m.size() && m[piv][static_cast<std::size_t>(c)].is_zero()) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[top], m[piv]);
    const FqElem inv = m[top][static_cast<std::size_t>(c)].inverse();
    for (auto& v : m[top]) v = v * inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == top) continue;
      const FqElem factor = m[r][static_cast<std::size_t>(c)];
      if (factor.is_zero()) continue;
      for (int j = c; j < ncols; ++j) m[r][static_cast<std::size_t>(j)] -= factor * m[top][static_cast<std::size_t>(j)];
    }
    out.pivots.push_back(c);
    ++top;
  }
  m.resize(top);
  out.rows = std::move(m);
  (void)k;
  return out;
}

int rank(const FqPtr& k, const FqMatrix& m, int ncols) { return static_cast<int>(rref(k, m, ncols).pivots.size()); }

FqMatrix kernel_basis(const FqPtr& k, const FqMatrix& A, int ncols) {
  const Echelon E = rref(k, A, ncols);
  std::vector<int> pivot_row(static_cast<std::size_t>(ncols), -1);
  for (std::size_t r = 0; r < E.pivots.size(); ++r) pivot_row[static_cast<std::size_t>(E.pivots[r])] = static_cast<int>(r);
  FqMatrix basis;
  for (int free = 0; free < ncols; ++free) {
    if (pivot_row[static_cast<std::size_t>(free)] >= 0) continue;
    FqVector v(static_cast<std::size_t>(ncols), k->zero());
    v[static_cast<std::size_t>(free)] = k->one();
    for (std::size_t r = 0; r < E.pivots.size(); ++r) v[static_cast<std::size_t>(E.pivots[r])] = -E.rows[r][static_cast<std::size_t>(free)];
    basis.push_back(std::move(v));
  }
  return rref(k, std::move(basis), ncols).rows;
}

std::optional<FqVector> solve(const FqPtr& k, const FqMatrix& A, const FqVector& b, int ncols) {
  FqMatrix aug = A;
  for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b[r]);
  const Echelon E = rref(k, std::move(aug), ncols + 1);
  FqVector x(static_cast<std::size_t>(ncols), k->zero());
  for (std::size_t r = 0; r < E.pivots.size(); ++r) {
    if (E.pivots[r] == ncols) return std::nullopt;
    x[static_cast<std::size_t>(E.pivots[r])] = E.rows[r][static_cast<std::size_t>(ncols)];
  }
  return x;
}

bool in_span(const FqPtr& k, const FqMatrix& sub, const FqMatrix& span, int ncols) {
  const int r = rank(k, span, ncols);
  FqMatrix both = span;
  both.insert(both.end(), sub.begin(), sub.end());
  return rank(k, both, ncols) == r;
}

FqMatrix project(const FqMatrix& m, const std::vector<int>& cols) {
  FqMatrix out;
  for (const auto& row : m) {
    FqVector v;
    for (int c : cols) v.push_back(row[static_cast<std::size_t>(c)]);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace ramforge
