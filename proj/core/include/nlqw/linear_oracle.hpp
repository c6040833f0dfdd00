#pragma once

#include <vector>

#include "nlqw/spinor_field.hpp"

namespace nlqw {

/// Dense row-major matrix, used only for reference computations.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<complex> data;

  complex& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  complex operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
};

/// Explicit 2N x 2N matrix of shift * (coin (x) identity) on `sites` sites.
/// Basis index 2n is |n,R>, 2n+1 is |n,L>.
///
/// Shift direction follows the recursion used by step(): R moves to n-1, L to
/// n+1. The shift wraps around the ends, which makes the matrix exactly
/// unitary; on any field step() accepts (nothing pushed off the edge) the
/// wrapped terms are zero and the result equals the open-chain step.
DenseMatrix linear_walk_matrix(std::size_t sites, double theta);

/// Linear (chi = 0) step by direct dense multiplication. O(N^2); a reference
/// path independent of the step() kernel.
SpinorField linear_oracle_step(const SpinorField& field, double theta);

}  // namespace nlqw
