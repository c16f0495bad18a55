#pragma once

// Littlewood-Paley blocks with sharp annular cutoffs and the Besov norms built
// on them. Block -1 holds the zero mode; block j >= 0 holds 2^j <= |k| < 2^{j+1},
// and the last block j_max = ceil(log2(n/2)) also absorbs the grid corners.

#include <vector>

#include "wnls/spectral.hpp"

namespace wnls {

struct BlockDecomposition {
  int j_min = -1;
  std::vector<SpectralField> blocks;  // blocks[i] is Delta_{j_min + i} f

  int j_max() const noexcept { return j_min + static_cast<int>(blocks.size()) - 1; }
  const SpectralField& block(int j) const { return blocks.at(static_cast<std::size_t>(j - j_min)); }
};

int max_block_index(const TorusGrid& grid) noexcept;
/// Block index of wavenumber k.
int block_index(const TorusGrid& grid, int k1, int k2) noexcept;

BlockDecomposition lp_block_decompose(const SpectralField& f);

/// Per-block Lp norms, index i <-> block j = i - 1.
std::vector<double> block_lp_norms(const SpectralField& f, double p);

/// l^q over j of 2^{js} ||Delta_j f||_{L^p}; p in {1, 2, 4, inf}, q in {1, 2, inf}.
/// Throws UnsupportedNorm otherwise.
double besov_norm(const SpectralField& f, double s, double p, double q);

/// Combines precomputed block norms (index i <-> j = i - 1) into the Besov norm.
double combine_blocks(const std::vector<double>& block_norms, double s, double q);

}  // namespace wnls
