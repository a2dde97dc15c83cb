#include "ocdens/model.hpp"

#include "ocdens/error.hpp"

#include <cmath>
#include <string>

namespace ocdens {

std::string_view to_string(Scheme s) noexcept
{
  return s == Scheme::euler ? "euler" : "trapezoid";
}

Scheme parse_scheme(std::string_view s)
{
  if (s == "euler")
    return Scheme::euler;
  if (s == "trapezoid")
    return Scheme::trapezoid;
  throw InputError("unknown scheme '" + std::string(s) + "' (expected euler or trapezoid)");
}

ReferenceFunction::ReferenceFunction(NormalLog nl)
  : repr_(nl)
{
  if (!(nl.sigma2 > 0.0))
    throw InputError("reference normal needs sigma2 > 0");
}

double ReferenceFunction::at(std::size_t k, double s) const
{
  struct Visit
  {
    std::size_t k;
    double s;
    double operator()(const Zero&) const { return 0.0; }
    double operator()(const NormalLog& nl) const
    {
      const double d = s - nl.mu;
      return -d * d / (2.0 * nl.sigma2);
    }
    double operator()(const Tabulated& tab) const { return tab.values[k]; }
  };
  return std::visit(Visit{k, s}, repr_);
}

void ReferenceFunction::check_grid(std::size_t node_count) const
{
  if (const auto* tab = std::get_if<Tabulated>(&repr_); tab && tab->values.size() != node_count)
    throw InputError("tabulated reference has " + std::to_string(tab->values.size()) +
                     " values but the grid has " + std::to_string(node_count) + " nodes");
}

void ModelParams::validate() const
{
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InputError("alpha must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InputError("beta must be nonnegative");
}

} // namespace ocdens
