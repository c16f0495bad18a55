#include "wnls/besov.hpp"

#include <algorithm>
#include <cmath>

namespace wnls {

int max_block_index(const TorusGrid& grid) noexcept {
  int j = 0;
  while ((1 << j) < grid.n() / 2) ++j;
  return j;
}

int block_index(const TorusGrid& grid, int k1, int k2) noexcept {
  const long k_sq = static_cast<long>(k1) * k1 + static_cast<long>(k2) * k2;
  if (k_sq == 0) return -1;
  // largest j with 4^j <= |k|^2, i.e. 2^j <= |k|
  int j = 0;
  while ((4L << (2 * j)) <= k_sq) ++j;
  return std::min(j, max_block_index(grid));
}

BlockDecomposition lp_block_decompose(const SpectralField& f) {
  const auto& grid = f.grid();
  const int n = grid.n();
  const int j_max = max_block_index(grid);

  BlockDecomposition out;
  out.j_min = -1;
  out.blocks.assign(static_cast<std::size_t>(j_max + 2), SpectralField::zeros(grid, f.real_flag()));
  const auto c = f.coeffs();
  for (int a = 0; a < n; ++a) {
    const int k1 = grid.wavenumber(a);
    for (int b = 0; b < n; ++b) {
      const int j = block_index(grid, k1, grid.wavenumber(b));
      const auto i = grid.index(a, b);
      out.blocks[static_cast<std::size_t>(j + 1)].coeffs()[i] = c[i];
    }
  }
  return out;
}

std::vector<double> block_lp_norms(const SpectralField& f, double p) {
  const auto decomposition = lp_block_decompose(f);
  std::vector<double> norms;
  norms.reserve(decomposition.blocks.size());
  for (const auto& block : decomposition.blocks) {
    if (p == 2.0) {
      // Parseval, exact on the grid
      norms.push_back(sobolev_norm(block, 0.0));
    } else {
      norms.push_back(lp_norm(block, p));
    }
  }
  return norms;
}

double combine_blocks(const std::vector<double>& block_norms, double s, double q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < block_norms.size(); ++i) {
    const int j = static_cast<int>(i) - 1;
    const double term = std::exp2(j * s) * block_norms[i];
    if (std::isinf(q)) {
      acc = std::max(acc, term);
    } else if (q == 1.0) {
      acc += term;
    } else {
      acc += std::pow(term, q);
    }
  }
  if (std::isinf(q) || q == 1.0) return acc;
  return std::pow(acc, 1.0 / q);
}

double besov_norm(const SpectralField& f, double s, double p, double q) {
  const bool p_ok = p == 1.0 || p == 2.0 || p == 4.0 || std::isinf(p);
  const bool q_ok = q == 1.0 || q == 2.0 || std::isinf(q);
  if (!p_ok || !q_ok) throw UnsupportedNorm("Besov norm supports p in {1,2,4,inf} and q in {1,2,inf}");
  return combine_blocks(block_lp_norms(f, p), s, q);
}

}  // namespace wnls
