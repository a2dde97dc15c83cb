#include "ocdens/bordered_band.hpp"

#include "ocdens/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ocdens {

BorderedBandMatrix::BorderedBandMatrix(std::size_t n, int kl, int ku)
  : n_(n)
  , kl_(kl)
  , ku_(ku)
  , width_(static_cast<std::size_t>(2 * kl + ku + 1))
  , band_(n * width_, 0.0)
  , border_(n, 0.0)
  , pivots_(n, 0)
{
  if (n == 0 || kl < 0 || ku < 0)
    throw std::invalid_argument("BorderedBandMatrix: bad shape");
}

void BorderedBandMatrix::set_zero()
{
  std::fill(band_.begin(), band_.end(), 0.0);
  std::fill(border_.begin(), border_.end(), 0.0);
  factorized_ = false;
}

void BorderedBandMatrix::add(std::size_t row, std::size_t col, double v)
{
  if (row >= n_ || col >= n_)
    throw std::out_of_range("BorderedBandMatrix::add: index out of range");
  if (col == n_ - 1) {
    border_[row] += v;
    return;
  }
  const auto r = static_cast<long>(row);
  const auto c = static_cast<long>(col);
  if (c < r - kl_ || c > r + ku_)
    throw std::out_of_range("BorderedBandMatrix::add: (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside the band");
  band(row, col) += v;
}

double BorderedBandMatrix::at(std::size_t row, std::size_t col) const
{
  if (col == n_ - 1)
    return border_[row];
  const auto r = static_cast<long>(row);
  const auto c = static_cast<long>(col);
  if (c < r - kl_ || c > r + kl_ + ku_)
    return 0.0;
  return band(row, col);
}

std::size_t BorderedBandMatrix::row_end(std::size_t row) const noexcept
{
  return std::min(row + static_cast<std::size_t>(kl_ + ku_), n_ - 2);
}

void BorderedBandMatrix::factorize()
{
  const std::size_t kl = static_cast<std::size_t>(kl_);
  for (std::size_t j = 0; j + 1 < n_; ++j) {
    const std::size_t last = std::min(j + kl, n_ - 1);
    std::size_t p = j;
    double best = std::abs(band(j, j));
    for (std::size_t i = j + 1; i <= last; ++i) {
      const double a = std::abs(band(i, j));
      if (a > best) {
        best = a;
        p = i;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best))
      throw SolverError("singular matrix: zero pivot in column " + std::to_string(j));
    pivots_[j] = p;

    const std::size_t cend = row_end(j);
    if (p != j) {
      for (std::size_t c = j; c <= cend; ++c)
        std::swap(band(j, c), band(p, c));
      std::swap(border_[j], border_[p]);
    }

    const double pivot = band(j, j);
    for (std::size_t i = j + 1; i <= last; ++i) {
      const double l = band(i, j) / pivot;
      band(i, j) = l;
      if (l == 0.0)
        continue;
      for (std::size_t c = j + 1; c <= cend; ++c)
        band(i, c) -= l * band(j, c);
      border_[i] -= l * border_[j];
    }
  }
  const double last_pivot = border_[n_ - 1];
  if (!(std::abs(last_pivot) > 0.0) || !std::isfinite(last_pivot))
    throw SolverError("singular matrix: zero pivot in the border column");
  pivots_[n_ - 1] = n_ - 1;
  factorized_ = true;
}

void BorderedBandMatrix::solve(std::span<double> b) const
{
  if (!factorized_)
    throw std::logic_error("BorderedBandMatrix::solve before factorize");
  if (b.size() != n_)
    throw std::invalid_argument("BorderedBandMatrix::solve: size mismatch");
  const std::size_t kl = static_cast<std::size_t>(kl_);

  for (std::size_t j = 0; j + 1 < n_; ++j) {
    const std::size_t p = pivots_[j];
    if (p != j)
      std::swap(b[j], b[p]);
    const std::size_t last = std::min(j + kl, n_ - 1);
    for (std::size_t i = j + 1; i <= last; ++i)
      b[i] -= band(i, j) * b[j];
  }

  const double xg = b[n_ - 1] / border_[n_ - 1];
  b[n_ - 1] = xg;
  for (std::size_t j = n_ - 1; j-- > 0;) {
    double s = b[j] - border_[j] * xg;
    const std::size_t cend = row_end(j);
    for (std::size_t c = j + 1; c <= cend; ++c)
      s -= band(j, c) * b[c];
    b[j] = s / band(j, j);
  }
}

} // namespace ocdens
