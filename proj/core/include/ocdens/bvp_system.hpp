#pragma once

#include "ocdens/bordered_band.hpp"
#include "ocdens/model.hpp"
#include "ocdens/partition.hpp"

#include <cstddef>
#include <vector>

namespace ocdens {

//! Unknowns of the discrete boundary-value problem on an (L+1)-node grid:
//! cumulative y1, log-density y2, its derivative y3, and the scalar gamma.
//! At a data node y3 holds the left limit; the step leaving that node uses
//! y3 minus the jump.
struct StateVector
{
  std::vector<double> y1;
  std::vector<double> y2;
  std::vector<double> y3;
  double gamma = 0.0;

  static StateVector zeros(std::size_t node_count);

  std::size_t node_count() const noexcept { return y2.size(); }
  //! 3(L+1) + 1
  std::size_t unknowns() const noexcept { return 3 * y2.size() + 1; }

  //! Node-major flat layout [y1_0, y2_0, y3_0, y1_1, ..., y3_L, gamma].
  std::vector<double> flatten() const;
  static StateVector unflatten(const std::vector<double>& x);
};

//! Residual rows: the three stepping equations of each step k at rows
//! 3k, 3k+1, 3k+2, followed by y1(0), y1(L) - 1, y3(0), y3(L).
struct ResidualReport
{
  std::vector<double> values;
  double inf_norm = 0.0;
};

//! Largest y2 accepted before e^{y2} is treated as a divergent iterate.
inline constexpr double kMaxLogDensity = 700.0;

//! beta^2 (y2 - w(t)) + gamma e^{y2}. `node` is used only by tabulated w.
double rhs_f(double y2, double t, const ModelParams& params, double gamma, std::size_t node = 0);

ResidualReport residual_euler(const StateVector& y, const Partition& grid, const ModelParams& params);
ResidualReport residual_trapezoid(const StateVector& y, const Partition& grid, const ModelParams& params);
ResidualReport residual(const StateVector& y, const Partition& grid, const ModelParams& params, Scheme scheme);

//! Coordinate-format sparse matrix, entries sorted by (row, col).
class SparseMatrix
{
public:
  struct Entry
  {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Entry> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nonzeros() const noexcept { return entries_.size(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  double at(std::size_t row, std::size_t col) const;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Entry> entries_;
};

//! Exact derivative of `residual` with respect to the flat unknowns,
//! rows in ResidualReport order.
SparseMatrix jacobian(const StateVector& y, const Partition& grid, const ModelParams& params, Scheme scheme);

namespace layout {

inline std::size_t var(std::size_t node, std::size_t component) { return 3 * node + component; }
inline std::size_t gamma(std::size_t L) { return 3 * L + 3; }

//! Row permutation used by the Newton matrix: y1(0), y3(0), the stepping
//! rows, y3(L), y1(L) - 1. With node-major unknowns this keeps every entry
//! except the gamma column within 4 sub- and 3 super-diagonals.
std::size_t newton_row(std::size_t residual_row, std::size_t L);

inline constexpr int kLower = 4;
inline constexpr int kUpper = 3;

} // namespace layout

//! Writes the Jacobian into `out` (size 3L+4, gamma as border column)
//! with rows permuted by layout::newton_row.
void assemble_newton_matrix(const StateVector& y,
                            const Partition& grid,
                            const ModelParams& params,
                            Scheme scheme,
                            BorderedBandMatrix& out);

} // namespace ocdens
