#pragma once

#include <array>
#include <vector>

namespace fracsim {

/// Block tridiagonal system with 2x2 blocks stored row-major
/// (a[0] a[1]; a[2] a[3]). diag has n blocks, lower/upper n-1.
struct BlockTridiag {
  int n = 0;
  std::vector<std::array<double, 4>> lower, diag, upper;

  explicit BlockTridiag(int n_blocks = 0) { resize(n_blocks); }
  void resize(int n_blocks);
  void set_zero();
};

/// Direct block LU (Thomas) solve; rhs is overwritten with the solution.
/// Throws std::runtime_error on a singular pivot block.
void solve_block_tridiag(BlockTridiag system, std::vector<double>& rhs);

/// Dense matvec of the block tridiagonal operator, for residual checks.
std::vector<double> block_tridiag_apply(const BlockTridiag& m,
                                        const std::vector<double>& x);

}  // namespace fracsim
