#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ocdens {

/**
 * Square matrix that is banded except for a dense last column.
 *
 * Columns 0..N-2 hold at most `kl` sub- and `ku` super-diagonals; column
 * N-1 (the border) may be full. Factorization is Gaussian elimination with
 * partial pivoting restricted to the band window, as in LAPACK's gbtrf, with
 * the border carried along as an extra column. The final pivot is the
 * scalar Schur complement of the band block, so a singular band block does
 * not break the solve as long as the whole matrix is regular. Cost is
 * O(N * kl * (kl + ku)).
 */
class BorderedBandMatrix
{
public:
  BorderedBandMatrix(std::size_t n, int kl, int ku);

  std::size_t size() const noexcept { return n_; }
  int kl() const noexcept { return kl_; }
  int ku() const noexcept { return ku_; }

  void set_zero();
  //! Accumulates `v` at (row, col). Throws std::out_of_range outside the
  //! band (columns < N-1) unless `col == N-1`.
  void add(std::size_t row, std::size_t col, double v);
  //! Entry of the (unfactored) matrix; zero outside the stored pattern.
  double at(std::size_t row, std::size_t col) const;

  //! In-place LU. Throws SolverError on a zero or non-finite pivot.
  void factorize();
  bool factorized() const noexcept { return factorized_; }

  //! Solves A x = b in place using the stored factors.
  void solve(std::span<double> b) const;

private:
  double& band(std::size_t row, std::size_t col)
  {
    return band_[row * width_ + (col + static_cast<std::size_t>(kl_) - row)];
  }
  double band(std::size_t row, std::size_t col) const
  {
    return band_[row * width_ + (col + static_cast<std::size_t>(kl_) - row)];
  }
  // last band column touched by row `row` after pivoting fill-in
  std::size_t row_end(std::size_t row) const noexcept;

  std::size_t n_;
  int kl_;
  int ku_;
  std::size_t width_;
  std::vector<double> band_;
  std::vector<double> border_;
  std::vector<std::size_t> pivots_;
  bool factorized_ = false;
};

} // namespace ocdens
