#include "fracsim/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace fracsim {

namespace {

using Block = std::array<double, 4>;

// x := A^{-1} x with partial pivoting inside the 2x2 block.
void solve2(const Block& a, double& x0, double& x1) {
  double a00 = a[0], a01 = a[1], b0 = x0;
  double a10 = a[2], a11 = a[3], b1 = x1;
  if (std::abs(a10) > std::abs(a00)) {
    std::swap(a00, a10);
    std::swap(a01, a11);
    std::swap(b0, b1);
  }
  if (a00 == 0.0) throw std::runtime_error("singular 2x2 pivot block");
  const double m = a10 / a00;
  const double s = a11 - m * a01;
  if (s == 0.0) throw std::runtime_error("singular 2x2 pivot block");
  const double y1 = (b1 - m * b0) / s;
  const double y0 = (b0 - a01 * y1) / a00;
  x0 = y0;
  x1 = y1;
}

Block mul(const Block& a, const Block& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Block inv(const Block& a) {
  Block id_cols;  // columns of A^{-1} via two solves
  double c00 = 1.0, c10 = 0.0;
  solve2(a, c00, c10);
  double c01 = 0.0, c11 = 1.0;
  solve2(a, c01, c11);
  id_cols = {c00, c01, c10, c11};
  return id_cols;
}

}  // namespace

void BlockTridiag::resize(int n_blocks) {
  n = n_blocks;
  diag.assign(n, Block{});
  lower.assign(n > 0 ? n - 1 : 0, Block{});
  upper.assign(n > 0 ? n - 1 : 0, Block{});
}

void BlockTridiag::set_zero() {
  for (auto& b : diag) b = Block{};
  for (auto& b : lower) b = Block{};
  for (auto& b : upper) b = Block{};
}

void solve_block_tridiag(BlockTridiag m, std::vector<double>& rhs) {
  const int n = m.n;
  if (static_cast<int>(rhs.size()) != 2 * n) {
    throw std::invalid_argument("rhs size mismatch");
  }
  // Forward elimination: D_k -= L_k D_{k-1}^{-1} U_{k-1}, same for rhs.
  for (int k = 1; k < n; ++k) {
    const Block dinv = inv(m.diag[k - 1]);
    const Block f = mul(m.lower[k - 1], dinv);
    const Block lu = mul(f, m.upper[k - 1]);
    for (int c = 0; c < 4; ++c) m.diag[k][c] -= lu[c];
    rhs[2 * k] -= f[0] * rhs[2 * k - 2] + f[1] * rhs[2 * k - 1];
    rhs[2 * k + 1] -= f[2] * rhs[2 * k - 2] + f[3] * rhs[2 * k - 1];
  }
  // Back substitution.
  solve2(m.diag[n - 1], rhs[2 * n - 2], rhs[2 * n - 1]);
  for (int k = n - 2; k >= 0; --k) {
    rhs[2 * k] -= m.upper[k][0] * rhs[2 * k + 2] + m.upper[k][1] * rhs[2 * k + 3];
    rhs[2 * k + 1] -=
        m.upper[k][2] * rhs[2 * k + 2] + m.upper[k][3] * rhs[2 * k + 3];
    solve2(m.diag[k], rhs[2 * k], rhs[2 * k + 1]);
  }
}

std::vector<double> block_tridiag_apply(const BlockTridiag& m,
                                        const std::vector<double>& x) {
  std::vector<double> y(2 * m.n, 0.0);
  auto acc = [&](int row_block, const Block& b, int col_block) {
    y[2 * row_block] += b[0] * x[2 * col_block] + b[1] * x[2 * col_block + 1];
    y[2 * row_block + 1] +=
        b[2] * x[2 * col_block] + b[3] * x[2 * col_block + 1];
  };
  for (int k = 0; k < m.n; ++k) {
    acc(k, m.diag[k], k);
    if (k > 0) acc(k, m.lower[k - 1], k - 1);
    if (k + 1 < m.n) acc(k, m.upper[k], k + 1);
  }
  return y;
}

}  // namespace fracsim
