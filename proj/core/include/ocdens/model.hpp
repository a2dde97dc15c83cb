#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

namespace ocdens {

enum class Scheme
{
  euler,
  trapezoid
};

std::string_view to_string(Scheme s) noexcept;
Scheme parse_scheme(std::string_view s);

//! Log-density of the reference distribution the estimate is pulled toward.
class ReferenceFunction
{
public:
  struct Zero
  {};
  struct NormalLog
  {
    double mu;
    double sigma2;
  };
  //! Values on the partition nodes, one per node.
  struct Tabulated
  {
    std::vector<double> values;
  };

  ReferenceFunction() = default;
  ReferenceFunction(Zero z) : repr_(z) {}
  ReferenceFunction(NormalLog nl);
  ReferenceFunction(Tabulated tab) : repr_(std::move(tab)) {}

  static ReferenceFunction zero() { return Zero{}; }
  static ReferenceFunction normal_log(double mu, double sigma2) { return NormalLog{mu, sigma2}; }

  bool is_zero() const noexcept { return std::holds_alternative<Zero>(repr_); }

  //! w at node `k` located at `s`. Tabulated ignores `s`.
  double at(std::size_t k, double s) const;

  //! Throws unless a tabulated table has exactly `node_count` entries.
  void check_grid(std::size_t node_count) const;

private:
  std::variant<Zero, NormalLog, Tabulated> repr_;
};

//! Smoothness alpha > 0, structure beta >= 0, reference w.
struct ModelParams
{
  double alpha = 1.0;
  double beta = 1.0;
  ReferenceFunction w;

  void validate() const;
};

} // namespace ocdens
