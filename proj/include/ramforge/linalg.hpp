#pragma once

// Dense linear algebra over F_q. Row reduction is deterministic: columns are
// scanned left to right and the first row with a nonzero entry becomes the pivot.

#include <optional>
#include <vector>

#include "ramforge/ring.hpp"

namespace ramforge {

using FqVector = std::vector<FqElem>;
using FqMatrix = std::vector<FqVector>;

struct Echelon {
  FqMatrix rows;            // reduced row echelon form, zero rows dropped
  std::vector<int> pivots;  // pivot column of each row
};

Echelon rref(const FqPtr& k, FqMatrix m, int ncols);

int rank(const FqPtr& k, const FqMatrix& m, int ncols);

/// Basis of {x : A x = 0}, returned in reduced echelon form.
FqMatrix kernel_basis(const FqPtr& k, const FqMatrix& A, int ncols);

/// Some x with A x = b (free variables set to 0), or nullopt.
std::optional<FqVector> solve(const FqPtr& k, const FqMatrix& A, const FqVector& b, int ncols);

/// Every row of `sub` lies in the row span of `span`.
bool in_span(const FqPtr& k, const FqMatrix& sub, const FqMatrix& span, int ncols);

/// Keep the listed coordinates of each row, in order.
FqMatrix project(const FqMatrix& m, const std::vector<int>& cols);

}  // namespace ramforge
